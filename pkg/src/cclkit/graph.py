"""Directed-graph model of closed control loops (CCLs).

A CCL graph has five node kinds: static setpoints (``ss``), sensors
(``se``), control functions (``f``), actuators (``a``) and calculated
setpoints (``cs``).  Edges follow the direction of information flow in
the cyber domain and are bipartite between function nodes and variable
nodes; the permitted shapes are exactly

    ss -> f,  se -> f,  cs -> f,  f -> a,  f -> cs

which makes sensors and static setpoints sources (in-degree 0) and
actuators sinks (out-degree 0).  Physical influence of actuators on
sensors is *not* part of this graph; it lives in plant descriptions
(see :mod:`cclkit.toyplant`).

Text format (UTF-8, one directive per line; blank lines and lines
starting with ``#`` are ignored)::

    node <id> <kind>        kind in {ss, se, f, a, cs}
    edge <from-id> <to-id>

Node and edge lines may appear in any order; forward references are
allowed within one document.
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import GraphValidationError, ParseError, UnknownNodeError


class NodeKind(enum.Enum):
    """The five node kinds of a CCL graph."""

    STATIC_SETPOINT = "ss"
    SENSOR = "se"
    FUNCTION = "f"
    ACTUATOR = "a"
    CALCULATED_SETPOINT = "cs"

    @classmethod
    def from_code(cls, code: str) -> "NodeKind":
        try:
            return cls(code)
        except ValueError:
            raise GraphValidationError(f"unknown node kind {code!r}") from None


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind


@dataclass(frozen=True, order=True)
class Edge:
    src: str
    dst: str


#: Permitted (source kind, destination kind) pairs.
PERMITTED_SHAPES = frozenset(
    {
        (NodeKind.STATIC_SETPOINT, NodeKind.FUNCTION),
        (NodeKind.SENSOR, NodeKind.FUNCTION),
        (NodeKind.CALCULATED_SETPOINT, NodeKind.FUNCTION),
        (NodeKind.FUNCTION, NodeKind.ACTUATOR),
        (NodeKind.FUNCTION, NodeKind.CALCULATED_SETPOINT),
    }
)

_ID_RE = re.compile(r"^\S+$")


class CclGraph:
    """Immutable validated CCL graph.

    All structural invariants are checked on construction; afterwards the
    graph is never mutated, so instances are safe to share between any
    number of concurrent readers.
    """

    __slots__ = ("_kind", "_edges", "_succ", "_pred")

    def __init__(self, nodes: Iterable[Node], edges: Iterable[Edge]):
        kind: dict[str, NodeKind] = {}
        for node in nodes:
            if not _ID_RE.match(node.id or ""):
                raise GraphValidationError(f"invalid node id {node.id!r}")
            if node.id in kind:
                raise GraphValidationError(f"duplicate node id {node.id!r}")
            kind[node.id] = node.kind

        seen: set[tuple[str, str]] = set()
        ordered: list[Edge] = []
        for edge in edges:
            for endpoint in (edge.src, edge.dst):
                if endpoint not in kind:
                    raise GraphValidationError(
                        f"edge {edge.src!r} -> {edge.dst!r}: unknown node {endpoint!r}"
                    )
            if edge.src == edge.dst:
                raise GraphValidationError(f"self-loop on {edge.src!r} is not allowed")
            shape = (kind[edge.src], kind[edge.dst])
            if shape not in PERMITTED_SHAPES:
                raise GraphValidationError(
                    f"edge {edge.src!r} -> {edge.dst!r}: "
                    f"{shape[0].value} -> {shape[1].value} is not a permitted shape"
                )
            pair = (edge.src, edge.dst)
            if pair in seen:
                raise GraphValidationError(f"duplicate edge {edge.src!r} -> {edge.dst!r}")
            seen.add(pair)
            ordered.append(edge)

        succ: dict[str, list[str]] = {n: [] for n in kind}
        pred: dict[str, list[str]] = {n: [] for n in kind}
        for edge in ordered:
            succ[edge.src].append(edge.dst)
            pred[edge.dst].append(edge.src)

        self._kind = kind
        self._edges = tuple(sorted(ordered))
        self._succ = {n: tuple(sorted(s)) for n, s in succ.items()}
        self._pred = {n: tuple(sorted(p)) for n, p in pred.items()}

    # -- views ---------------------------------------------------------

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(Node(n, k) for n, k in sorted(self._kind.items()))

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._kind))

    @property
    def node_count(self) -> int:
        return len(self._kind)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._kind

    def kind(self, node_id: str) -> NodeKind:
        try:
            return self._kind[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node id {node_id!r}") from None

    def ids_of_kind(self, kind: NodeKind) -> tuple[str, ...]:
        return tuple(sorted(n for n, k in self._kind.items() if k is kind))

    def successors(self, node_id: str) -> tuple[str, ...]:
        self.kind(node_id)
        return self._succ[node_id]

    def predecessors(self, node_id: str) -> tuple[str, ...]:
        self.kind(node_id)
        return self._pred[node_id]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CclGraph):
            return NotImplemented
        return self._kind == other._kind and set(self._edges) == set(other._edges)

    def __repr__(self) -> str:
        return f"CclGraph({self.node_count} nodes, {self.edge_count} edges)"


# -- text format ---------------------------------------------------------


def _scan_directives(text: str) -> Iterator[tuple[int, list[tuple[str, int]]]]:
    """Yield ``(lineno, [(token, column), ...])`` for every directive line.

    Blank lines and ``#`` comments are skipped.  Columns are 1-based.
    """
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", raw)]
        yield lineno, tokens


_Directive = tuple[int, list[tuple[str, int]]]


def _split_directives(text: str, allowed: tuple[str, ...]) -> dict[str, list[_Directive]]:
    """Group directive lines by keyword, rejecting anything not in ``allowed``."""
    groups: dict[str, list[_Directive]] = {name: [] for name in allowed}
    for lineno, tokens in _scan_directives(text):
        directive = tokens[0][0]
        if directive not in groups:
            raise ParseError(f"unknown directive {directive!r}", lineno, tokens[0][1])
        groups[directive].append((lineno, tokens))
    return groups


def parse_graph(text: str) -> CclGraph:
    """Parse a graph-format document into a validated :class:`CclGraph`.

    Parsing is order-insensitive: the resulting graph does not depend on
    the order of directives.  Errors report line and column.
    """
    groups = _split_directives(text, ("node", "edge"))
    return _graph_from_directives(groups["node"], groups["edge"])


def _graph_from_directives(
    node_lines: list[_Directive], edge_lines: list[_Directive]
) -> CclGraph:
    kind: dict[str, NodeKind] = {}
    nodes: list[Node] = []
    for lineno, tokens in node_lines:
        if len(tokens) != 3:
            raise ParseError("expected: node <id> <kind>", lineno, tokens[0][1])
        (_, _), (node_id, id_col), (code, code_col) = tokens
        try:
            node_kind = NodeKind.from_code(code)
        except GraphValidationError:
            raise ParseError(f"unknown node kind {code!r}", lineno, code_col) from None
        if node_id in kind:
            raise ParseError(f"duplicate node id {node_id!r}", lineno, id_col)
        kind[node_id] = node_kind
        nodes.append(Node(node_id, node_kind))

    edges: list[Edge] = []
    seen: set[tuple[str, str]] = set()
    for lineno, tokens in edge_lines:
        if len(tokens) != 3:
            raise ParseError("expected: edge <from-id> <to-id>", lineno, tokens[0][1])
        (_, _), (src, src_col), (dst, dst_col) = tokens
        if src not in kind:
            raise ParseError(f"edge references unknown node {src!r}", lineno, src_col)
        if dst not in kind:
            raise ParseError(f"edge references unknown node {dst!r}", lineno, dst_col)
        if src == dst:
            raise ParseError(f"self-loop on {src!r} is not allowed", lineno, src_col)
        if (kind[src], kind[dst]) not in PERMITTED_SHAPES:
            raise ParseError(
                f"{kind[src].value} -> {kind[dst].value} is not a permitted edge shape",
                lineno,
                src_col,
            )
        if (src, dst) in seen:
            raise ParseError(f"duplicate edge {src!r} -> {dst!r}", lineno, src_col)
        seen.add((src, dst))
        edges.append(Edge(src, dst))

    return CclGraph(nodes, edges)


def serialize_graph(graph: CclGraph) -> str:
    """Render a graph as a deterministic document: sorted nodes, then sorted edges."""
    lines = [f"node {n.id} {n.kind.value}" for n in graph.nodes]
    lines += [f"edge {e.src} {e.dst}" for e in graph.edges]
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


# -- structural queries ---------------------------------------------------


def weak_components(graph: CclGraph) -> tuple[frozenset[str], ...]:
    """Partition node ids into weakly-connected components.

    Two nodes share a component iff they are connected when edge
    direction is ignored.  Components are returned sorted by their
    smallest node id.
    """
    visited: set[str] = set()
    components: list[frozenset[str]] = []
    for start in graph.node_ids:
        if start in visited:
            continue
        seen = {start}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for neighbor in graph.successors(current) + graph.predecessors(current):
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        visited |= seen
        components.append(frozenset(seen))
    return tuple(sorted(components, key=min))


def reachable_sensors(graph: CclGraph, node_id: str) -> frozenset[str]:
    """Sensors with a directed path to ``node_id``.

    A sensor reaches itself via the empty path, so if ``node_id`` is a
    sensor the result is exactly ``{node_id}`` (sensors have no incoming
    cyber edges).
    """
    graph.kind(node_id)
    seen = {node_id}
    queue = deque([node_id])
    while queue:
        current = queue.popleft()
        for upstream in graph.predecessors(current):
            if upstream not in seen:
                seen.add(upstream)
                queue.append(upstream)
    return frozenset(n for n in seen if graph.kind(n) is NodeKind.SENSOR)
