import pytest

from nomairsa.domain import (
    ConfigurationError,
    FrameInstance,
    NomaIrsaError,
    PlrEstimate,
    StoppingRule,
    SystemConfig,
    UserTransmission,
    build_power_ladder,
    parse_degree_distribution,
)
from nomairsa.domain import errors


def test_error_hierarchy():
    for cls in (
        errors.ConfigurationError,
        errors.DistributionError,
        errors.PowerLadderError,
        errors.InstanceTooLargeError,
        errors.FitError,
        errors.ReportError,
    ):
        assert issubclass(cls, NomaIrsaError)


def test_system_config_exposes_load(ladder3, lambda1):
    config = SystemConfig(n=200, m=80, dist=lambda1, ladder=ladder3)
    assert config.load == pytest.approx(0.4)


def test_system_config_rejects_degree_above_frame_length(ladder3):
    dist = parse_degree_distribution("2:0.5,8:0.5")
    with pytest.raises(ConfigurationError):
        SystemConfig(n=5, m=3, dist=dist, ladder=ladder3)


@pytest.mark.parametrize("n,m", [(0, 1), (10, -1)])
def test_system_config_rejects_bad_sizes(n, m, lambda1):
    with pytest.raises(ConfigurationError):
        SystemConfig(n=n, m=m, dist=lambda1, ladder=build_power_ladder(0.0, 2))


def test_user_transmission_level_map():
    user = UserTransmission(4, (1, 7), (3, 1))
    assert user.degree == 2
    assert user.level_per_slot == {1: 3, 7: 1}


def test_user_transmission_rejects_repeated_slot():
    with pytest.raises(ValueError):
        UserTransmission(0, (2, 2), (1, 1))


def test_user_transmission_needs_one_level_per_replica():
    with pytest.raises(ValueError):
        UserTransmission(0, (1, 2), (1,))


def test_frame_rejects_slot_outside_frame():
    with pytest.raises(ValueError):
        FrameInstance(n=4, users=(UserTransmission(0, (1, 4), (1, 1)),))


def test_user_transmission_requires_sorted_slots():
    with pytest.raises(ValueError):
        UserTransmission(0, (5, 0), (1, 1))


def test_user_transmission_rejects_level_zero():
    with pytest.raises(ValueError):
        UserTransmission(0, (0, 1), (0, 1))


def test_stopping_rule_validation():
    assert StoppingRule(max_frames=1, min_loss_events=0).min_loss_events == 0
    with pytest.raises(ConfigurationError):
        StoppingRule(max_frames=0, min_loss_events=10)
    with pytest.raises(ConfigurationError):
        StoppingRule(max_frames=10, min_loss_events=-1)


def test_plr_estimate_must_sit_inside_its_interval():
    PlrEstimate(10, 100, 5, 0.05, 0.02, 0.11, seed=1)
    with pytest.raises(ValueError):
        PlrEstimate(10, 100, 5, 0.05, 0.06, 0.11, seed=1)
