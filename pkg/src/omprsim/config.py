"""Scenario parameters and the quantities derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

NOISE_MODELS = ("transmission", "discovery")
FORWARD_RULES = ("first", "any")


class ConfigError(ValueError):
    """A configuration value is out of range or malformed."""


def pause_time(radius: float, speed: float) -> float:
    """Mobility update period, 0.75 * R / u."""
    if speed <= 0:
        raise ConfigError("speed must be > 0 to derive a pause time")
    if radius <= 0:
        raise ConfigError("radius must be > 0 to derive a pause time")
    return 0.75 * radius / speed


@dataclass(frozen=True)
class SimConfig:
    node_count: int = 100
    area_width: float = 1000.0
    area_height: float = 1000.0
    radius: float = 200.0
    speed: float = 5.0
    reception_prob: float = 1.0
    retrans_prob: float = 0.8
    sim_time: float = 300.0
    master_seed: int = 0
    branch_cap: int = 10_000
    # 0 means derive from sim_time / pause_time
    loops: int = 0
    noise_model: str = "transmission"
    forward_rule: str = "first"

    def validate(self) -> "SimConfig":
        checks = [
            ("node_count", self.node_count >= 1, ">= 1"),
            ("area_width", self.area_width > 0, "> 0"),
            ("area_height", self.area_height > 0, "> 0"),
            ("radius", self.radius > 0, "> 0"),
            ("speed", self.speed > 0, "> 0"),
            ("sim_time", self.sim_time > 0, "> 0"),
            ("reception_prob", 0.0 <= self.reception_prob <= 1.0, "in [0, 1]"),
            ("retrans_prob", 0.0 <= self.retrans_prob <= 1.0, "in [0, 1]"),
            ("branch_cap", self.branch_cap >= 1, ">= 1"),
            ("master_seed", 0 <= self.master_seed < 2**64, "in [0, 2^64)"),
            ("loops", self.loops >= 0, ">= 0"),
            ("noise_model", self.noise_model in NOISE_MODELS, f"one of {NOISE_MODELS}"),
            ("forward_rule", self.forward_rule in FORWARD_RULES, f"one of {FORWARD_RULES}"),
        ]
        for name, ok, bound in checks:
            if not ok:
                raise ConfigError(f"{name}={getattr(self, name)!r} violates bound {bound}")
        if self.loop_count < 1:
            raise ConfigError(
                f"sim_time={self.sim_time} is shorter than one pause time "
                f"({self.pause_time:g} s); need at least one mobility loop"
            )
        return self

    @property
    def pause_time(self) -> float:
        return pause_time(self.radius, self.speed)

    @property
    def step_length(self) -> float:
        """Distance covered by each node between two neighbor-discovery rounds."""
        if self.speed == 0:
            return 0.0
        return self.speed * self.pause_time

    @property
    def loop_count(self) -> int:
        if self.loops:
            return self.loops
        # guard against 300/30 landing a hair under 10
        return int(math.floor(self.sim_time / self.pause_time + 1e-9))

    def with_reception(self, p_c: float) -> "SimConfig":
        return replace(self, reception_prob=p_c)


CONFIG_FIELDS = tuple(f.name for f in fields(SimConfig))
