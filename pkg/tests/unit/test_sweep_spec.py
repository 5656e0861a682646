from pathlib import Path

import pytest

from nomairsa.domain import ConfigurationError, StoppingRule
from nomairsa.domain.sweep import SweepSpec, users_for_load


def _spec(**overrides):
    base = dict(
        slots=200,
        levels=3,
        gamma_db=3.0,
        dist="2:0.5,3:0.5",
        loads=(0.2, 0.4),
        stop=StoppingRule(max_frames=10, min_loss_events=0),
        seed=1,
        out=Path("out.csv"),
    )
    base.update(overrides)
    return SweepSpec(**base)


def test_users_for_load_rounds_half_up():
    assert users_for_load(0.8, 200) == 160
    assert users_for_load(0.25, 2) == 1
    assert users_for_load(0.5, 3) == 2  # 1.5 rounds up
    assert users_for_load(0.001, 200) == 0


def test_load_grid():
    grid = _spec().grid()
    assert [(p.load, p.n, p.m) for p in grid] == [(0.2, 200, 40), (0.4, 200, 80)]


def test_slot_grid_uses_fixed_load():
    grid = _spec(slot_grid=(100, 200, 400), load=0.8).grid()
    assert [(p.n, p.m) for p in grid] == [(100, 80), (200, 160), (400, 320)]


@pytest.mark.parametrize(
    "overrides",
    [
        dict(loads=()),
        dict(loads=(0.2, -0.1)),
        dict(loads=(0.0,)),
        dict(loads=(0.001,)),
        dict(slot_grid=()),
        dict(slot_grid=(100,), load=0.0),
        dict(slot_grid=(0, 100)),
        dict(levels=0),
        dict(workers=0),
        dict(batch_frames=0),
        dict(gamma_db=float("nan")),
    ],
)
def test_invalid_specs(overrides):
    with pytest.raises(ConfigurationError):
        _spec(**overrides)
