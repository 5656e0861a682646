from pathlib import Path

import pytest

from nomairsa.config import defaults_for, load_config_file, resolve_settings
from nomairsa.domain import ConfigurationError


def test_sweep_defaults():
    s = resolve_settings("sweep", {})
    assert (s.slots, s.levels, s.gamma_db) == (200, 3, 3.0)
    assert s.dist == "2:0.5,3:0.5"
    assert s.loads == (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4)
    assert s.slot_grid is None
    assert (s.max_frames, s.min_losses, s.seed) == (10_000_000, 200, 1)
    assert s.out == Path("sweep.csv")
    assert s.s1_baseline is True and s.census is False
    assert (s.workers, s.batch_frames) == (1, 1000)


def test_command_specific_defaults():
    assert resolve_settings("census", {}).max_frames == 100_000
    fit = resolve_settings("fit", {})
    assert fit.slot_grid == (50, 100, 200, 400)
    assert (fit.load, fit.levels, fit.dist) == (0.4, 1, "2:1.0")
    assert fit.min_losses == 0
    assert fit.out == Path("fit.csv")
    with pytest.raises(ConfigurationError):
        defaults_for("plot")


def test_file_values_and_precedence(tmp_path: Path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# study\n"
        "\n"
        "slots = 100\n"
        "gamma-db = 6   # stronger threshold\n"
        "max_frames = 1e5\n"
        "loads = 0.1, 0.3\n"
        "s1-baseline = no\n",
        encoding="utf-8",
    )
    s = resolve_settings("sweep", {"slots": 150, "seed": None}, cfg)
    assert s.slots == 150  # flag beats file
    assert s.gamma_db == 6.0
    assert s.max_frames == 100_000
    assert s.loads == (0.1, 0.3)
    assert s.s1_baseline is False
    assert s.seed == 1  # untouched default


def test_text_flags_are_parsed():
    s = resolve_settings("sweep", {"loads": "0.5,0.7", "slot_grid": "10,20,40"})
    assert s.loads == (0.5, 0.7)
    assert s.slot_grid == (10, 20, 40)
    assert resolve_settings("sweep", {"loads": ""}).loads == ()


@pytest.mark.parametrize(
    "body,fragment",
    [("slots 100\n", ":1: expected key=value"), ("# ok\ncolour = red\n", ":2: unknown key")],
)
def test_bad_config_lines(tmp_path: Path, body, fragment):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body, encoding="utf-8")
    with pytest.raises(ConfigurationError) as info:
        load_config_file(cfg)
    assert fragment in str(info.value)


def test_bad_values_are_configuration_errors(tmp_path: Path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("levels = three\n", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        resolve_settings("sweep", {}, cfg)
    with pytest.raises(ConfigurationError):
        resolve_settings("sweep", {"loads": "0.2,abc"})
    with pytest.raises(ConfigurationError):
        resolve_settings("sweep", {"colour": "red"})


def test_missing_config_file(tmp_path: Path):
    with pytest.raises(ConfigurationError):
        load_config_file(tmp_path / "nope.cfg")


def test_settings_build_a_sweep_spec():
    spec = resolve_settings("sweep", {"loads": "0.4", "min_losses": 0}).to_sweep_spec()
    assert spec.stop.min_loss_events == 0
    assert [(p.load, p.n, p.m) for p in spec.grid()] == [(0.4, 200, 80)]


def test_frame_budget_flag_is_parsed_like_the_file_value():
    assert resolve_settings("sweep", {"max_frames": "2.5e3"}).max_frames == 2500
    with pytest.raises(ConfigurationError):
        resolve_settings("sweep", {"max_frames": "1.5"})
    with pytest.raises(ConfigurationError):
        resolve_settings("sweep", {"max_frames": "many"})
