"""Graphs, problem instances and graph file I/O.

Vertices are dense integer ids ``0..n-1`` and edges dense ids ``0..m-1`` in
declaration order.  Directed graphs store arcs as ordered ``(tail, head)``
pairs; ``u->v`` and ``v->u`` may coexist and are distinct edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


class GraphError(ValueError):
    """Raised for graphs that violate the simple-graph invariants."""


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()
    directed: bool = False
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        incident = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {eid} ({u}, {v}) references a vertex out of range")
            if u == v:
                raise GraphError(f"edge {eid} is a self-loop at {u}")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            incident[u].append((eid, v))
            incident[v].append((eid, u))
        object.__setattr__(self, "_incident", tuple(tuple(x) for x in incident))
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(
            (u, v) if self.directed else (min(u, v), max(u, v)) for u, v in edges)})

    @property
    def m(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(edge id, other endpoint)`` pairs for every edge touching ``v``."""
        return self._incident[v]

    def neighbours(self, v: int) -> list[int]:
        return [w for _, w in self._incident[v]]

    def degree(self, v: int) -> int:
        return len(self._incident[v])

    def head(self, e: int) -> int:
        return self.edges[e][1]

    def edge_id(self, u: int, v: int) -> int:
        """Id of edge ``uv`` (of arc ``u->v`` when directed)."""
        key = (u, v) if self.directed else (min(u, v), max(u, v))
        try:
            return self._index[key]
        except KeyError:
            raise GraphError(f"no edge ({u}, {v})") from None

    def underlying_edges(self) -> set[tuple[int, int]]:
        return {(min(u, v), max(u, v)) for u, v in self.edges}

    def vertex_name(self, v: int) -> str:
        return self.names[v] if self.names else str(v + 1)


@dataclass(frozen=True)
class Instance:
    """A graph with named fixed vertex/edge sets and integer parameters."""

    graph: Graph
    fixed_vertex_sets: Mapping[str, frozenset[int]] = field(default_factory=dict)
    fixed_edge_sets: Mapping[str, frozenset[int]] = field(default_factory=dict)
    params: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        fx = {k: frozenset(int(x) for x in s) for k, s in self.fixed_vertex_sets.items()}
        fy = {k: frozenset(int(x) for x in s) for k, s in self.fixed_edge_sets.items()}
        for name, s in fx.items():
            bad = [v for v in s if not 0 <= v < self.graph.n]
            if bad:
                raise GraphError(f"fixed vertex set {name} contains invalid ids {sorted(bad)}")
        for name, s in fy.items():
            bad = [e for e in s if not 0 <= e < self.graph.m]
            if bad:
                raise GraphError(f"fixed edge set {name} contains invalid ids {sorted(bad)}")
        object.__setattr__(self, "fixed_vertex_sets", fx)
        object.__setattr__(self, "fixed_edge_sets", fy)
        object.__setattr__(self, "params", {k: int(v) for k, v in self.params.items()})


def connected_components(graph: Graph, subset: Iterable[int], *, edges: bool = False) -> int:
    """Number of connected components of ``G[subset]``.

    With ``edges=True`` the subset is an edge set and the components are those
    of ``(V(subset), subset)``; vertices not touched by the subset do not count.
    Directed graphs are treated through their underlying undirected graph.
    """
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    if edges:
        for e in subset:
            if not 0 <= e < graph.m:
                raise GraphError(f"invalid edge id {e}")
            u, v = graph.edges[e]
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            union(u, v)
    else:
        for v in subset:
            if not 0 <= v < graph.n:
                raise GraphError(f"invalid vertex id {v}")
            parent.setdefault(v, v)
        for v in list(parent):
            for _, w in graph.incident(v):
                if w in parent:
                    union(v, w)
    return sum(1 for x in parent if find(x) == x)


def _data_lines(text: str, comment: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(comment):
            continue
        yield lineno, line.split()


def _build(n, edges, directed, names, lines):
    seen = {}
    for (u, v), lineno in zip(edges, lines):
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"vertex id out of range in edge ({u + 1}, {v + 1})", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u + 1}", lineno)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(f"duplicate edge (first declared on line {seen[key]})", lineno)
        seen[key] = lineno
    return Graph(n, tuple(edges), directed, names)


def parse_graph(text: str, format: str = "pace-gr") -> Graph:
    """Parse a graph from ``pace-gr`` or ``edge-list`` text.

    ``pace-gr``: header ``p tw <n> <m>`` (``p dtw`` for digraphs), then one
    1-based ``u v`` line per edge; ``c`` lines are comments.

    ``edge-list``: optional first line ``directed``/``undirected``, then lines
    ``u v`` naming the endpoints (any tokens) or a single token declaring an
    isolated vertex; ``#`` starts a comment.  Ids follow first appearance.
    """
    if format == "pace-gr":
        header = None
        edges, lines = [], []
        for lineno, tok in _data_lines(text, "c"):
            if tok[0] == "p":
                if header is not None:
                    raise GraphParseError("second header line", lineno)
                if len(tok) != 4 or tok[1] not in ("tw", "dtw"):
                    raise GraphParseError("malformed header, expected 'p tw <n> <m>'", lineno)
                try:
                    header = (tok[1] == "dtw", int(tok[2]), int(tok[3]))
                except ValueError:
                    raise GraphParseError("non-integer header field", lineno) from None
                continue
            if header is None:
                raise GraphParseError("edge line before header", lineno)
            if len(tok) != 2:
                raise GraphParseError("edge line must have exactly two vertices", lineno)
            try:
                u, v = int(tok[0]) - 1, int(tok[1]) - 1
            except ValueError:
                raise GraphParseError("non-integer vertex id", lineno) from None
            edges.append((u, v))
            lines.append(lineno)
        if header is None:
            raise GraphParseError("missing 'p tw' header")
        directed, n, m = header
        if m != len(edges):
            raise GraphParseError(f"header declares {m} edges, found {len(edges)}")
        return _build(n, edges, directed, None, lines)

    if format == "edge-list":
        directed = False
        ids: dict[str, int] = {}
        edges, lines = [], []
        first = True
        for lineno, tok in _data_lines(text, "#"):
            if first and len(tok) == 1 and tok[0] in ("directed", "undirected"):
                directed = tok[0] == "directed"
                first = False
                continue
            first = False
            if len(tok) > 2:
                raise GraphParseError("expected 'u v' or a single vertex", lineno)
            for t in tok:
                ids.setdefault(t, len(ids))
            if len(tok) == 2:
                edges.append((ids[tok[0]], ids[tok[1]]))
                lines.append(lineno)
        names = tuple(ids)
        return _build(len(ids), edges, directed, names, lines)

    raise ValueError(f"unknown graph format {format!r}")


def format_graph(graph: Graph) -> str:
    """Serialize to ``pace-gr`` text; edge ids survive a round trip."""
    kind = "dtw" if graph.directed else "tw"
    out = [f"p {kind} {graph.n} {graph.m}"]
    out += [f"{u + 1} {v + 1}" for u, v in graph.edges]
    return "\n".join(out) + "\n"


def bind_instance(graph: Graph, spec, bindings: Mapping | None = None) -> Instance:
    """Build an :class:`Instance` for ``spec`` from a bindings mapping.

    ``bindings`` follows the instance-file schema
    ``{"params": {"k": 2}, "fixed": {"T": [0, 1]}}``; vertex ids are 0-based,
    fixed edge sets list edge ids or ``[u, v]`` pairs.
    """
    bindings = dict(bindings or {})
    params = dict(bindings.get("params", {}))
    fixed = dict(bindings.get("fixed", {}))
    missing = [p for p in spec.params if p not in params]
    if missing:
        raise GraphError(f"missing parameters: {', '.join(missing)}")
    fx, fy = {}, {}
    for name in spec.fixed_vertex_sets:
        if name not in fixed:
            raise GraphError(f"missing fixed vertex set {name}")
        fx[name] = frozenset(int(v) for v in fixed[name])
    for name in spec.fixed_edge_sets:
        if name not in fixed:
            raise GraphError(f"missing fixed edge set {name}")
        ids = set()
        for item in fixed[name]:
            if isinstance(item, (list, tuple)):
                ids.add(graph.edge_id(int(item[0]), int(item[1])))
            else:
                ids.add(int(item))
        fy[name] = frozenset(ids)
    return Instance(graph, fx, fy, {p: int(params[p]) for p in spec.params})
