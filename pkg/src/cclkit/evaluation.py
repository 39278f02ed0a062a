"""Shutdown-time tables: parsing, ranking and attacker comparison.

A shutdown-time (SDT) table records, per sensor, how many hours elapsed
between the start of an integrity attack on that sensor and the plant
shutting down.  Entries equal to the experiment horizon encode "no
shutdown"; the boolean view is always derived from that convention,
never stored.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass

from .errors import NoTargetsError, TableFormatError

DEFAULT_HORIZON_HOURS = 72.0
DEFAULT_NEAR_OPTIMAL_RANKS = 3


@dataclass(frozen=True)
class SdtRecord:
    sensor: str
    sdt_hours: float


@dataclass(frozen=True)
class SdtTable:
    """Per-sensor shutdown times for one experiment."""

    records: tuple[SdtRecord, ...]
    horizon: float = DEFAULT_HORIZON_HOURS

    def __post_init__(self):
        if not self.records:
            raise TableFormatError("an SDT table needs at least one record")
        seen: set[str] = set()
        for record in self.records:
            if record.sensor in seen:
                raise TableFormatError(f"duplicate sensor {record.sensor!r}")
            seen.add(record.sensor)
            if record.sdt_hours < 0:
                raise TableFormatError(f"negative SDT for sensor {record.sensor!r}")
            if record.sdt_hours > self.horizon:
                raise TableFormatError(
                    f"SDT above horizon for sensor {record.sensor!r}; "
                    "clamp on parse or lower the horizon"
                )

    @property
    def sensors(self) -> frozenset[str]:
        return frozenset(r.sensor for r in self.records)

    def is_no_shutdown(self, record: SdtRecord) -> bool:
        return record.sdt_hours >= self.horizon

    @property
    def shutdown_records(self) -> tuple[SdtRecord, ...]:
        return tuple(r for r in self.records if not self.is_no_shutdown(r))

    @property
    def no_shutdown_records(self) -> tuple[SdtRecord, ...]:
        return tuple(r for r in self.records if self.is_no_shutdown(r))

    def sdt_of(self, sensor: str) -> float:
        for record in self.records:
            if record.sensor == sensor:
                return record.sdt_hours
        raise TableFormatError(f"sensor {sensor!r} not in table")


def parse_sdt_table(text: str, horizon: float = DEFAULT_HORIZON_HOURS) -> SdtTable:
    """Parse a ``sensor,sdt_hours`` CSV document.

    ``#`` comment lines are ignored.  Values at or above the horizon are
    clamped to the horizon (the no-shutdown encoding).
    """
    lines = [
        line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")
    ]
    rows = [row for row in csv.reader(io.StringIO("\n".join(lines))) if row]
    if not rows or rows[0] != ["sensor", "sdt_hours"]:
        raise TableFormatError("SDT CSV must start with header: sensor,sdt_hours")
    records: list[SdtRecord] = []
    for row in rows[1:]:
        if len(row) != 2:
            raise TableFormatError(f"bad SDT row: {','.join(row)!r}")
        sensor = row[0].strip()
        try:
            sdt = float(row[1])
        except ValueError:
            raise TableFormatError(f"bad SDT value for sensor {sensor!r}") from None
        if sdt < 0:
            raise TableFormatError(f"negative SDT for sensor {sensor!r}")
        records.append(SdtRecord(sensor, min(sdt, horizon)))
    return SdtTable(tuple(records), horizon)


@dataclass(frozen=True)
class Ranking:
    """Records ordered by ascending SDT; ties break by sensor id.

    ``near_optimal`` holds the first ``k`` sensors that actually shut
    the plant down, so it never contains a no-shutdown record.
    """

    ordered: tuple[SdtRecord, ...]
    near_optimal: frozenset[str]
    k: int
    horizon: float

    @property
    def optimal(self) -> SdtRecord:
        return self.ordered[0]


def rank_by_sdt(table: SdtTable, k: int = DEFAULT_NEAR_OPTIMAL_RANKS) -> Ranking:
    """Rank sensors by shutdown time and mark the near-optimal top-k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ordered = tuple(sorted(table.records, key=lambda r: (r.sdt_hours, r.sensor)))
    shutdown = [r.sensor for r in ordered if not table.is_no_shutdown(r)]
    return Ranking(
        ordered=ordered,
        near_optimal=frozenset(shutdown[:k]),
        k=k,
        horizon=table.horizon,
    )


@dataclass(frozen=True)
class RandomAttackerStats:
    """Expectations for an attacker drawing one sensor uniformly from them all."""

    p_near_optimal: float
    p_no_shutdown: float
    avg_sdt_excl_no_shutdown: float | None


@dataclass(frozen=True)
class GuidedAttackerStats:
    """Expectations for an attacker drawing uniformly from the target set."""

    p_near_optimal: float
    avg_sdt_over_targets: float
    includes_no_shutdown: bool


@dataclass(frozen=True)
class AttackerComparison:
    random: RandomAttackerStats
    guided: GuidedAttackerStats
    target_set: frozenset[str]


def attacker_comparison(
    table: SdtTable,
    targets: frozenset[str] | set[str],
    k: int = DEFAULT_NEAR_OPTIMAL_RANKS,
) -> AttackerComparison:
    """Compare a random attacker against one guided by the target set.

    The random average excludes sensors that never cause a shutdown;
    the guided average counts them at the horizon and raises the
    ``includes_no_shutdown`` flag instead, so a degenerate target set is
    visible rather than silently flattering.
    """
    if not targets:
        raise NoTargetsError("attacker comparison needs a non-empty target set")
    unknown = sorted(set(targets) - table.sensors)
    if unknown:
        raise TableFormatError(f"target sensors missing from table: {', '.join(unknown)}")

    ranking = rank_by_sdt(table, k)
    total = len(table.records)
    shutdown_sdts = [r.sdt_hours for r in table.shutdown_records]
    random_stats = RandomAttackerStats(
        p_near_optimal=len(ranking.near_optimal) / total,
        p_no_shutdown=len(table.no_shutdown_records) / total,
        avg_sdt_excl_no_shutdown=(
            statistics.fmean(shutdown_sdts) if shutdown_sdts else None
        ),
    )
    target_sdts = {s: table.sdt_of(s) for s in targets}
    guided_stats = GuidedAttackerStats(
        p_near_optimal=len(set(targets) & ranking.near_optimal) / len(targets),
        avg_sdt_over_targets=statistics.fmean(target_sdts.values()),
        includes_no_shutdown=any(v >= table.horizon for v in target_sdts.values()),
    )
    return AttackerComparison(random_stats, guided_stats, frozenset(targets))


@dataclass(frozen=True)
class SensorSummary:
    mean_sdt: float
    sample_std: float


def summarize_experiments(tables: list[SdtTable]) -> dict[str, SensorSummary]:
    """Per-sensor mean and sample standard deviation across experiments.

    All tables must cover the same sensors with the same horizon;
    no-shutdown entries participate at the horizon value.
    """
    if not tables:
        raise ValueError("summarize_experiments requires at least one table")
    sensors = tables[0].sensors
    horizon = tables[0].horizon
    for table in tables[1:]:
        if table.sensors != sensors:
            raise TableFormatError("tables cover different sensor sets")
        if table.horizon != horizon:
            raise TableFormatError("tables use different horizons")
    summary: dict[str, SensorSummary] = {}
    for sensor in sorted(sensors):
        values = [t.sdt_of(sensor) for t in tables]
        summary[sensor] = SensorSummary(
            mean_sdt=statistics.fmean(values),
            sample_std=statistics.stdev(values) if len(values) > 1 else 0.0,
        )
    return summary
