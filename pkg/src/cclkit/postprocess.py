"""Project pattern matches onto the sensors that can influence them.

Attackers can only manipulate sensor readings, so every matched
non-sensor node is replaced by the sensors with a directed path to it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import CclGraph, NodeKind, reachable_sensors
from .patterns import PatternId, PatternResult


@dataclass(frozen=True)
class SensorResult:
    """Candidate sensor targets derived from one pattern's matches."""

    pattern: PatternId
    sensors: frozenset[str]


def to_sensor_targets(graph: CclGraph, result: PatternResult) -> SensorResult:
    """Convert a matched node set into candidate sensor targets.

    A matched sensor contributes itself; any other matched node
    contributes every sensor that has a directed path to it.  The union
    over all matches is returned (duplicates collapse).
    """
    sensors: set[str] = set()
    for node in result.matched:
        if graph.kind(node) is NodeKind.SENSOR:
            sensors.add(node)
        else:
            sensors |= reachable_sensors(graph, node)
    return SensorResult(result.pattern, frozenset(sensors))
