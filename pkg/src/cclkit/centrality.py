"""Degree centrality and the per-type adaptive out-degree threshold."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

from .graph import CclGraph

MODE_MEAN_PLUS_STD = "mean+std"
MODE_FIXED = "fixed"


@dataclass(frozen=True)
class DegreeTable:
    """In- and out-degree for every node of a graph (functions included)."""

    in_degree: dict[str, int]
    out_degree: dict[str, int]


def degree_table(graph: CclGraph) -> DegreeTable:
    """Compute both degrees for every node.

    The handshake identity holds by construction:
    ``sum(in_degree) == sum(out_degree) == edge_count``.
    """
    return DegreeTable(
        in_degree={n: len(graph.predecessors(n)) for n in graph.node_ids},
        out_degree={n: len(graph.successors(n)) for n in graph.node_ids},
    )


def tau_mean_plus_std(values: Sequence[float]) -> float:
    """Mean plus one sample standard deviation (n-1 denominator).

    A single observation has deviation 0, so the threshold degenerates
    to the value itself.
    """
    if not values:
        raise ValueError("tau_mean_plus_std requires at least one value")
    mean = statistics.fmean(values)
    if len(values) == 1:
        return mean
    return mean + statistics.stdev(values)


@dataclass(frozen=True)
class TauPolicy:
    """How the out-degree threshold is derived for one node type.

    ``mean+std`` computes mean plus one sample standard deviation over
    the type's out-degrees; ``fixed`` applies ``fixed_value`` to every
    type unchanged.
    """

    mode: str = MODE_MEAN_PLUS_STD
    fixed_value: float | None = None

    def __post_init__(self):
        if self.mode not in (MODE_MEAN_PLUS_STD, MODE_FIXED):
            raise ValueError(f"unknown tau mode {self.mode!r}")
        if self.mode == MODE_FIXED:
            if self.fixed_value is None or not math.isfinite(self.fixed_value):
                raise ValueError("fixed tau requires a finite value")
            if self.fixed_value < 0:
                raise ValueError("fixed tau must be >= 0")
        elif self.fixed_value is not None:
            raise ValueError("mean+std tau does not take a fixed value")

    @classmethod
    def mean_plus_std(cls) -> "TauPolicy":
        return cls(MODE_MEAN_PLUS_STD)

    @classmethod
    def fixed(cls, value: float) -> "TauPolicy":
        return cls(MODE_FIXED, float(value))

    @classmethod
    def parse(cls, spec: str) -> "TauPolicy":
        """Parse a policy spec: ``mean+std`` or ``fixed:<value>``."""
        if spec == MODE_MEAN_PLUS_STD:
            return cls.mean_plus_std()
        if spec.startswith(MODE_FIXED + ":"):
            raw = spec.split(":", 1)[1]
            try:
                return cls.fixed(float(raw))
            except ValueError as exc:
                raise ValueError(f"bad tau spec {spec!r}: {exc}") from None
        raise ValueError(f"bad tau spec {spec!r} (expected mean+std or fixed:<value>)")

    def threshold(self, values: Sequence[float]) -> float:
        if self.mode == MODE_FIXED:
            return float(self.fixed_value)  # type: ignore[arg-type]
        return tau_mean_plus_std(values)

    def describe(self) -> str:
        if self.mode == MODE_FIXED:
            return f"fixed:{self.fixed_value:g}"
        return MODE_MEAN_PLUS_STD
