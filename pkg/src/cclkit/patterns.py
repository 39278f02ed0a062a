"""CWE-derived weakness pattern matchers over CCL graphs.

Each matcher returns the set of *variable* nodes (never control
functions) whose graph neighbourhood exhibits one weakness:

* CWE-1108 -- global variables: out-degree above an adaptive per-type
  threshold.
* CWE-1109 -- multi-purpose variables: in-degree at or above a fixed
  threshold (override control).
* CWE-1047 -- circular dependencies: variables lying on a directed cycle.
* CWE-1124 -- deep nesting: variables at the end of long controller
  cascades.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .centrality import TauPolicy, degree_table
from .errors import GraphCycleError
from .graph import CclGraph, NodeKind

#: Kinds eligible for the global-variable scan.  Actuators are skipped
#: because their out-degree is 0 by construction.
_GLOBAL_VARIABLE_KINDS = (
    NodeKind.STATIC_SETPOINT,
    NodeKind.SENSOR,
    NodeKind.CALCULATED_SETPOINT,
)


class PatternId(enum.Enum):
    GLOBAL_VARIABLES = "CWE-1108"
    MULTIPURPOSE_VARIABLES = "CWE-1109"
    CIRCULAR_DEPENDENCY = "CWE-1047"
    DEEP_NESTING = "CWE-1124"

    @property
    def index(self) -> int:
        """1-based position in the pattern catalogue."""
        return list(PatternId).index(self) + 1


@dataclass(frozen=True)
class PatternResult:
    """Matched node set of one pattern, with the thresholds that produced it."""

    pattern: PatternId
    matched: frozenset[str]
    parameters: dict[str, float] = field(default_factory=dict)


def match_global_variables(graph: CclGraph, policy: TauPolicy | None = None) -> PatternResult:
    """Variables whose out-degree strictly exceeds their type's threshold.

    The threshold is computed independently per node type (static
    setpoints, sensors, calculated setpoints), so a heavily shared
    sensor is judged against sensors only.
    """
    policy = policy or TauPolicy.mean_plus_std()
    out_degree = degree_table(graph).out_degree
    matched: set[str] = set()
    parameters: dict[str, float] = {}
    for kind in _GLOBAL_VARIABLE_KINDS:
        members = graph.ids_of_kind(kind)
        if not members:
            continue
        tau = policy.threshold([out_degree[n] for n in members])
        parameters[f"tau_{kind.value}"] = tau
        matched.update(n for n in members if out_degree[n] > tau)
    return PatternResult(PatternId.GLOBAL_VARIABLES, frozenset(matched), parameters)


def match_multipurpose_variables(graph: CclGraph, min_in: int = 2) -> PatternResult:
    """Variables written by ``min_in`` or more control functions."""
    if min_in < 1:
        raise ValueError("min_in must be >= 1")
    in_degree = degree_table(graph).in_degree
    matched = {
        n
        for n in graph.node_ids
        if graph.kind(n) is not NodeKind.FUNCTION and in_degree[n] >= min_in
    }
    return PatternResult(
        PatternId.MULTIPURPOSE_VARIABLES, frozenset(matched), {"min_in": min_in}
    )


def _nodes_on_cycles(graph: CclGraph) -> set[str]:
    """All nodes lying on at least one directed cycle (iterative Tarjan SCC).

    Self-loops cannot exist here, so a node is on a cycle iff its
    strongly connected component has two or more members.
    """
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = 0
    cyclic: set[str] = set()

    for root in graph.node_ids:
        if root in index:
            continue
        work = [(root, iter(graph.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, successors = work[-1]
            advanced = False
            for nxt in successors:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(graph.successors(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1:
                    cyclic.update(component)
    return cyclic


def match_circular_dependency(graph: CclGraph) -> PatternResult:
    """Variables on a directed cycle.

    The bipartite edge rule means cycles alternate function and
    calculated-setpoint nodes, so only calculated setpoints can match.
    """
    matched = {
        n for n in _nodes_on_cycles(graph) if graph.kind(n) is not NodeKind.FUNCTION
    }
    return PatternResult(PatternId.CIRCULAR_DEPENDENCY, frozenset(matched), {})


def cascade_depths(graph: CclGraph) -> dict[str, int]:
    """Maximum number of function nodes on any directed path ending at each node.

    Raises :class:`GraphCycleError` if the graph contains a directed
    cycle (the maximum is then unbounded).
    """
    in_count = {n: len(graph.predecessors(n)) for n in graph.node_ids}
    queue = deque(sorted(n for n, c in in_count.items() if c == 0))
    depth: dict[str, int] = {n: 0 for n in queue}
    processed = 0
    while queue:
        node = queue.popleft()
        processed += 1
        gain = 1 if graph.kind(node) is NodeKind.FUNCTION else 0
        for nxt in graph.successors(node):
            depth[nxt] = max(depth.get(nxt, 0), depth[node] + gain)
            in_count[nxt] -= 1
            if in_count[nxt] == 0:
                queue.append(nxt)
    if processed != graph.node_count:
        raise GraphCycleError(
            "cascade depth is undefined on cyclic graphs; "
            "run the circular-dependency matcher first"
        )
    return depth


def match_deep_nesting(graph: CclGraph, min_depth: int = 3) -> PatternResult:
    """Variables at the end of a cascade of ``min_depth`` or more functions."""
    if min_depth < 2:
        raise ValueError("min_depth must be >= 2")
    depth = cascade_depths(graph)
    matched = {
        n
        for n in graph.node_ids
        if graph.kind(n) is not NodeKind.FUNCTION and depth[n] >= min_depth
    }
    return PatternResult(PatternId.DEEP_NESTING, frozenset(matched), {"min_depth": min_depth})
