# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Run settings: built-in defaults, an optional key=value file, CLI flags.

File format, one setting per line:

    # load sweep at n = 200
    slots = 200
    gamma-db = 3
    dist = 2:0.5,3:0.5
    loads = 0.2,0.4,0.6,0.8

Keys are the flag names without the leading dashes; '-' and '_' are
interchangeable. Precedence is flag > file > default.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

from .domain.errors import ConfigurationError
from .domain.models import StoppingRule
from .domain.sweep import SweepSpec

logger = logging.getLogger(__name__)

COMMANDS = ("sweep", "census", "fit")


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(",") if p.strip())


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(",") if p.strip())


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _frame_count(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"frame count must be a whole number, got {text!r}")
    return int(value)


def _optional_int_list(text: str) -> Optional[tuple[int, ...]]:
    return _int_list(text) if text.strip() else None


_PARSERS: dict[str, Callable[[str], Any]] = {
    "slots": int,
    "levels": int,
    "gamma_db": float,
    "dist": str.strip,
    "loads": _float_list,
    "slot_grid": _optional_int_list,
    "load": float,
    "seed": int,
    "max_frames": _frame_count,  # accepts 1e7
    "min_losses": int,
    "out": lambda s: Path(s.strip()),
    "s1_baseline": _bool,
    "census": _bool,
    "workers": int,
    "batch_frames": int,
    "progress": int,
    "poisson_identity": _bool,
}

_COMMON_DEFAULTS: dict[str, str] = {
    "slots": "200",
    "levels": "3",
    "gamma_db": "3.0",
    "dist": "2:0.5,3:0.5",
    "loads": "0.2,0.4,0.6,0.8,1.0,1.2,1.4",
    "slot_grid": "",
    "load": "0.8",
    "seed": "1",
    "min_losses": "200",
    "s1_baseline": "true",
    "census": "false",
    "workers": "1",
    "batch_frames": "1000",
    "progress": "0",
    "poisson_identity": "false",
}

_COMMAND_DEFAULTS: dict[str, dict[str, str]] = {
    "sweep": {"max_frames": "10000000", "out": "sweep.csv"},
    "census": {"max_frames": "100000", "out": "census.csv"},
    # The fit runs every point to max_frames: 200 losses leave too much noise
    # in g(n)^2 for the slope to be meaningful.
    "fit": {
        "max_frames": "200000",
        "out": "fit.csv",
        "dist": "2:1.0",
        "levels": "1",
        "load": "0.4",
        "slot_grid": "50,100,200,400",
        "min_losses": "0",
    },
}


def normalise_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_").lower()


def defaults_for(command: str) -> dict[str, str]:
    if command not in COMMANDS:
        raise ConfigurationError(f"unknown command {command!r}")
    return {**_COMMON_DEFAULTS, **_COMMAND_DEFAULTS[command]}


def load_config_file(path: Path) -> dict[str, str]:
    """Read a key=value file into raw (unparsed) values."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc

    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value")
        name = normalise_key(key)
        if name not in _PARSERS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key.strip()!r}")
        values[name] = value.strip()
    logger.debug("Loaded %d settings from %s", len(values), path)
    return values


@dataclass(frozen=True)
class RunSettings:
    """Fully resolved settings for one CLI command."""

    command: str
    slots: int
    levels: int
    gamma_db: float
    dist: str
    loads: tuple[float, ...]
    slot_grid: Optional[tuple[int, ...]]
    load: float
    seed: int
    max_frames: int
    min_losses: int
    out: Path
    s1_baseline: bool
    census: bool
    workers: int
    batch_frames: int
    progress: int
    poisson_identity: bool

    def to_sweep_spec(self) -> SweepSpec:
        return SweepSpec(
            slots=self.slots,
            levels=self.levels,
            gamma_db=self.gamma_db,
            dist=self.dist,
            loads=self.loads,
            stop=StoppingRule(
                max_frames=self.max_frames, min_loss_events=self.min_losses
            ),
            seed=self.seed,
            out=self.out,
            slot_grid=self.slot_grid,
            load=self.load,
            s1_baseline=self.s1_baseline,
            census=self.census,
            workers=self.workers,
            batch_frames=self.batch_frames,
        )


def resolve_settings(
    command: str,
    flags: Mapping[str, Any],
    config_file: Optional[Path] = None,
) -> RunSettings:
    """
    Merge defaults, the config file and the flags that were actually given
    (None means "not given"). Text values, from the file, the defaults or a
    list-valued flag, are parsed here.
    """
    raw = defaults_for(command)
    if config_file is not None:
        raw.update(load_config_file(config_file))

    resolved: dict[str, Any] = {}
    for name, parser in _PARSERS.items():
        try:
            resolved[name] = parser(raw[name])
        except ValueError as exc:
            raise ConfigurationError(f"invalid value for {name}: {exc}") from exc

    for key, value in flags.items():
        name = normalise_key(key)
        if name not in _PARSERS:
            raise ConfigurationError(f"unknown setting {key!r}")
        if value is None:
            continue
        if isinstance(value, str):
            try:
                value = _PARSERS[name](value)
            except ValueError as exc:
                raise ConfigurationError(f"invalid value for --{key}: {exc}") from exc
        resolved[name] = value

    return RunSettings(command=command, **resolved)
