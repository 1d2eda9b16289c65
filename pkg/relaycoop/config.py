# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#
"""
Run configuration. A JSON file mirrors the command-line flags (use "_" for "-"); explicitly
given flags override the file, which overrides the defaults.

Example:
    {
        "rate": [0.1, 2],
        "grid": "0:2:21",
        "split": "both",
        "channel": {"a": 0.7, "b": 0.4}
    }

An explicit channel is given as {"H": [[h11, h12], [h21, h22], [h31, h32]], "d": [d11, d22]};
complex gains are written as [re, im] pairs. Either channel block may carry
"power_limits": [P1, P2], the most power each relay may send on the access link.
"""
import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from relaycoop.channel import (AccessChannel, RelayChannel, symmetric_channel,
                               unit_relay_channel)
from relaycoop.errors import ConfigError, DomainError
from relaycoop.optimizer import EnergyWeights
from relaycoop.sweep import Grid, SweepOptions

SPLIT_MODES = ("nosplit", "split", "both")


@dataclass()
class RunConfig:
    a: Optional[float] = None
    b: Optional[float] = None
    rate: List[float] = field(default_factory=lambda: [0.1, 0.5, 1.0, 2.0])
    grid: str = "0:2:21"
    split: str = "nosplit"
    split_step: float = 0.05
    max_splits: int = 2
    max_split_messages: int = 1
    tolerance: float = 0.05
    seed: int = 1
    samples: int = 2000
    bisect_tol: float = 1e-3
    mu: List[float] = field(default_factory=lambda: [1.0, 1.0])
    jobs: int = 1
    out_dir: str = "out"
    format: List[str] = field(default_factory=lambda: ["csv", "json", "svg"])
    channel: Optional[Dict[str, Any]] = None
    scheme: Optional[str] = None
    verbose: bool = False

    def __post_init__(self):
        if self.split not in SPLIT_MODES:
            raise ConfigError("split must be one of %s, got %r" % (", ".join(SPLIT_MODES),
                                                                   self.split))
        if isinstance(self.rate, (int, float)):
            self.rate = [float(self.rate)]
        if isinstance(self.format, str):
            self.format = [self.format]
        unknown = set(self.format) - {"csv", "json", "svg", "text"}
        if unknown:
            raise ConfigError("unknown output format(s): %s" % ", ".join(sorted(unknown)))
        if len(self.mu) != 2:
            raise ConfigError("mu takes two relay weights, got %r" % (self.mu,))

    def to_dict(self):
        return asdict(self)

    @property
    def weights(self):
        try:
            return EnergyWeights(*self.mu)
        except DomainError as e:
            raise ConfigError(str(e))

    def sweep_options(self) -> SweepOptions:
        return SweepOptions(split_step=self.split_step, max_splits=self.max_splits,
                            max_split_messages=self.max_split_messages,
                            tolerance=self.tolerance, samples=self.samples, seed=self.seed,
                            bisect_tol=self.bisect_tol, jobs=self.jobs, weights=self.weights)

    def split_modes(self) -> Tuple[bool, ...]:
        return {"nosplit": (False,), "split": (True,), "both": (False, True)}[self.split]


def load_config(path) -> Dict[str, Any]:
    """
    Reads a JSON configuration file.

    :param path: file path
    :return: option values keyed by RunConfig field name
    """
    try:
        with open(path) as f:
            values = json.load(f)
    except (OSError, ValueError) as e:
        raise ConfigError("cannot read config %s: %s" % (path, e))
    if not isinstance(values, dict):
        raise ConfigError("config %s must hold a JSON object" % path)
    values = {k.replace("-", "_"): v for k, v in values.items()}
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError("unknown key(s) in %s: %s" % (path, ", ".join(unknown)))
    return values


def build_config(file_values: Optional[Dict[str, Any]] = None,
                 flags: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Defaults, then file values, then explicitly given flags.
    """
    values = {}
    values.update(file_values or {})
    values.update({k: v for k, v in (flags or {}).items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e))


def _gain(entry):
    if isinstance(entry, (list, tuple)):
        if len(entry) != 2:
            raise ConfigError("complex gain must be [re, im], got %r" % (entry,))
        return complex(entry[0], entry[1])
    return entry


def channel_from_config(cfg: RunConfig) -> Tuple[AccessChannel, RelayChannel]:
    """
    Channel block if present, else the symmetric channel of the a and b options.
    """
    block = cfg.channel or {}
    if not isinstance(block, dict):
        raise ConfigError("channel block must be a JSON object, got %r" % (block,))
    try:
        if "H" in block:
            H = np.array([[_gain(h) for h in row] for row in block["H"]])
            d = block.get("d", [1.0, 1.0])
            ch, rc = AccessChannel(H), RelayChannel(*d)
        elif "a" in block and "b" in block:
            ch, rc = symmetric_channel(block["a"], block["b"]), unit_relay_channel()
        elif cfg.a is not None and cfg.b is not None:
            ch, rc = symmetric_channel(cfg.a, cfg.b), unit_relay_channel()
        else:
            raise ConfigError("no channel given: use --a and --b or a channel block")
        if block.get("power_limits") is not None:
            ch = replace(ch, power_limits=tuple(block["power_limits"]))
    except (DomainError, TypeError, ValueError) as e:
        raise ConfigError("invalid channel: %s" % e)
    return ch, rc


def _axis(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("grid axis must be START:STOP:STEPS, got %r" % text)
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError("grid axis must be START:STOP:STEPS, got %r" % text)


def parse_grid(text) -> Grid:
    """
    "START:STOP:STEPS" for both axes, or "A0:A1:NA,B0:B1:NB".
    """
    axes = [_axis(part.strip()) for part in text.split(",")]
    if len(axes) == 1:
        axes = axes * 2
    if len(axes) != 2:
        raise ConfigError("grid takes one or two axes, got %r" % text)
    (a0, a1, na), (b0, b1, nb) = axes
    if na < 0 or nb < 0:
        raise ConfigError("grid steps must be nonnegative, got %r" % text)
    return Grid(a0, a1, na, b0, b1, nb)
