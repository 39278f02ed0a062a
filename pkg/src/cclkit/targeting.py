"""Combine candidate sensor sets into a target set and a concrete attack plan.

Sensors are scored by how many patterns' candidate sets contain them;
the maximal-score sensors form the target set.  One target is then drawn
with a seeded generator and paired with a value strategy (a protocol-
friendly constant, or the historically observed minimum/maximum).
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass

from .errors import MissingHistoryError, NoTargetsError, TableFormatError
from .postprocess import SensorResult

STRATEGY_CONSTANT = "constant"
STRATEGY_MINIMUM = "minimum"
STRATEGY_MAXIMUM = "maximum"

#: Default spoofed reading: fits in a signed byte, so virtually every
#: industrial protocol delivers it in a single packet.
DEFAULT_CONSTANT_VALUE = 127.0


@dataclass(frozen=True)
class TargetSet:
    """Occurrence scores per candidate sensor and the maximal-score subset."""

    scores: dict[str, int]
    targets: frozenset[str]


def select_target_set(results: list[SensorResult]) -> TargetSet:
    """Score sensors by the number of distinct result sets containing them.

    Result sets that came up empty contribute nothing.  Raises
    :class:`NoTargetsError` when every result set is empty.
    """
    if not results:
        raise ValueError("select_target_set requires at least one result set")
    scores: dict[str, int] = {}
    for result in results:
        for sensor in result.sensors:
            scores[sensor] = scores.get(sensor, 0) + 1
    if not scores:
        raise NoTargetsError("no pattern produced candidate sensors")
    best = max(scores.values())
    targets = frozenset(s for s, count in scores.items() if count == best)
    return TargetSet(scores=dict(sorted(scores.items())), targets=targets)


def choose_single_target(target_set: TargetSet, seed: int) -> str:
    """Uniform draw from the target set, reproducible for a given seed."""
    if not target_set.targets:
        raise NoTargetsError("target set is empty")
    ordered = sorted(target_set.targets)
    return ordered[random.Random(seed).randrange(len(ordered))]


@dataclass(frozen=True)
class AttackStrategy:
    """How the spoofed value is chosen: a constant, or a historic extreme."""

    kind: str = STRATEGY_CONSTANT
    constant_value: float = DEFAULT_CONSTANT_VALUE

    def __post_init__(self):
        if self.kind not in (STRATEGY_CONSTANT, STRATEGY_MINIMUM, STRATEGY_MAXIMUM):
            raise ValueError(f"unknown attack strategy {self.kind!r}")
        if not math.isfinite(self.constant_value):
            raise ValueError("constant attack value must be finite")

    @classmethod
    def constant(cls, value: float = DEFAULT_CONSTANT_VALUE) -> "AttackStrategy":
        return cls(STRATEGY_CONSTANT, float(value))

    @classmethod
    def minimum(cls) -> "AttackStrategy":
        return cls(STRATEGY_MINIMUM)

    @classmethod
    def maximum(cls) -> "AttackStrategy":
        return cls(STRATEGY_MAXIMUM)


@dataclass(frozen=True)
class SensorRange:
    observed_min: float
    observed_max: float

    def __post_init__(self):
        if self.observed_min > self.observed_max:
            raise ValueError("observed_min must be <= observed_max")


@dataclass(frozen=True)
class SensorHistory:
    """Observed value range per sensor, from historic readings."""

    ranges: dict[str, SensorRange]

    def range_of(self, sensor: str) -> SensorRange:
        try:
            return self.ranges[sensor]
        except KeyError:
            raise MissingHistoryError(f"no history for sensor {sensor!r}") from None


def parse_history(text: str) -> SensorHistory:
    """Parse a ``sensor,min,max`` CSV document (``#`` comment lines allowed)."""
    rows = _csv_rows(text)
    if not rows or rows[0] != ["sensor", "min", "max"]:
        raise TableFormatError("history CSV must start with header: sensor,min,max")
    ranges: dict[str, SensorRange] = {}
    for row in rows[1:]:
        if len(row) != 3:
            raise TableFormatError(f"bad history row: {','.join(row)!r}")
        sensor = row[0].strip()
        if sensor in ranges:
            raise TableFormatError(f"duplicate history sensor {sensor!r}")
        try:
            lo, hi = float(row[1]), float(row[2])
        except ValueError:
            raise TableFormatError(f"bad number in history row for {sensor!r}") from None
        try:
            ranges[sensor] = SensorRange(lo, hi)
        except ValueError as exc:
            raise TableFormatError(f"history row for {sensor!r}: {exc}") from None
    return SensorHistory(ranges)


def _csv_rows(text: str) -> list[list[str]]:
    lines = [
        line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")
    ]
    return [row for row in csv.reader(io.StringIO("\n".join(lines))) if row]


@dataclass(frozen=True)
class AttackPlan:
    """One sensor, one fixed spoofed value for the whole attack."""

    sensor: str
    strategy: AttackStrategy
    value: float


def build_attack_plan(
    sensor: str,
    strategy: AttackStrategy,
    history: SensorHistory | None = None,
) -> AttackPlan:
    """Bind a sensor and a value strategy to the concrete value to report."""
    if strategy.kind == STRATEGY_CONSTANT:
        return AttackPlan(sensor, strategy, strategy.constant_value)
    if history is None:
        raise MissingHistoryError(
            f"{strategy.kind} value strategy requires sensor history"
        )
    observed = history.range_of(sensor)
    value = observed.observed_min if strategy.kind == STRATEGY_MINIMUM else observed.observed_max
    return AttackPlan(sensor, strategy, value)
