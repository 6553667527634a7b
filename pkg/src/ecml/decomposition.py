"""Tree decompositions, nice decompositions and a min-fill heuristic."""
from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed ``0..len(bags)-1`` plus undirected tree edges between them."""

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "tree_edges", tuple((int(a), int(b)) for a, b in self.tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass(frozen=True)
class Violation:
    kind: str  # missing-vertex | uncovered-edge | disconnected-vertex | not-a-tree | bad-vertex
    detail: str
    witness: tuple = ()


@dataclass
class ValidationReport:
    width: int
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_decomposition(graph: Graph, td: TreeDecomposition) -> ValidationReport:
    report = ValidationReport(width=td.width)
    nb = len(td.bags)
    adj = defaultdict(list)
    for a, b in td.tree_edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            report.violations.append(Violation("not-a-tree", f"bad tree edge ({a}, {b})", (a, b)))
            continue
        adj[a].append(b)
        adj[b].append(a)
    if nb and len(td.tree_edges) != nb - 1:
        report.violations.append(Violation(
            "not-a-tree", f"{len(td.tree_edges)} tree edges for {nb} bags", ()))
    if nb:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != nb:
            missing = sorted(set(range(nb)) - seen)
            report.violations.append(Violation(
                "not-a-tree", f"bags {missing} are not connected to bag 0", tuple(missing)))

    holders = defaultdict(list)
    for x, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < graph.n:
                report.violations.append(Violation("bad-vertex", f"bag {x} holds unknown vertex {v}", (x, v)))
            holders[v].append(x)
    for v in range(graph.n):
        if v not in holders:
            report.violations.append(Violation("missing-vertex", f"vertex {v} is in no bag", (v,)))
    for eid, (u, v) in enumerate(graph.edges):
        if not any(u in td.bags[x] for x in holders.get(v, ())):
            report.violations.append(Violation(
                "uncovered-edge", f"edge {eid} ({u}, {v}) is in no bag", (u, v)))
    for v, xs in holders.items():
        xs_set = set(xs)
        start = xs[0]
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in xs_set and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(xs_set):
            apart = sorted(xs_set - seen)
            report.violations.append(Violation(
                "disconnected-vertex",
                f"bags holding vertex {v} split: {sorted(seen)} vs {apart}", (v, tuple(sorted(seen)), tuple(apart))))
    return report


# --------------------------------------------------------------------------- nice


LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET, JOIN = "leaf", "introduce", "introduce-edge", "forget", "join"
KINDS = (LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET, JOIN)


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: int | None = None


@dataclass(frozen=True)
class NiceDecomposition:
    """Nodes are stored children-before-parents; ``root`` is the last node."""

    nodes: tuple[NiceNode, ...]
    root: int

    @property
    def width(self) -> int:
        return max((len(x.bag) for x in self.nodes), default=0) - 1

    def swap_joins(self) -> "NiceDecomposition":
        nodes = tuple(
            NiceNode(x.kind, x.bag, x.children[::-1], x.vertex, x.edge) if x.kind == JOIN else x
            for x in self.nodes)
        return NiceDecomposition(nodes, self.root)

    def to_json(self) -> str:
        out = []
        for i, x in enumerate(self.nodes):
            rec = {"id": i, "type": x.kind, "bag": sorted(x.bag), "children": list(x.children)}
            if x.vertex is not None:
                rec["vertex"] = x.vertex
            if x.edge is not None:
                rec["edge"] = x.edge
            out.append(rec)
        return json.dumps({"root": self.root, "nodes": out}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "NiceDecomposition":
        data = json.loads(text)
        nodes = []
        for i, rec in enumerate(data["nodes"]):
            if rec["id"] != i or rec["type"] not in KINDS:
                raise DecompositionError(f"malformed node record {rec}")
            nodes.append(NiceNode(rec["type"], frozenset(rec["bag"]), tuple(rec["children"]),
                                  rec.get("vertex"), rec.get("edge")))
        return cls(tuple(nodes), data["root"])


def check_nice(graph: Graph, nice: NiceDecomposition) -> list[str]:
    """Return the list of shape violations (empty when ``nice`` is well formed)."""
    problems = []
    nodes = nice.nodes
    if not nodes:
        return ["no nodes"]
    if nice.root != len(nodes) - 1:
        problems.append("root is not the last node")
    if nodes[nice.root].bag:
        problems.append("root bag not empty")
    parent_count = [0] * len(nodes)
    introduced = []
    forgotten = defaultdict(int)
    for i, x in enumerate(nodes):
        for c in x.children:
            if not 0 <= c < i:
                problems.append(f"node {i} has child {c} out of order")
                continue
            parent_count[c] += 1
        kids = [nodes[c].bag for c in x.children if 0 <= c < i]
        if x.kind == LEAF:
            if x.children or x.bag:
                problems.append(f"leaf {i} is not empty")
        elif x.kind == INTRODUCE:
            if len(kids) != 1 or x.vertex in kids[0] or x.bag != kids[0] | {x.vertex}:
                problems.append(f"introduce node {i} malformed")
        elif x.kind == INTRODUCE_EDGE:
            ok = len(kids) == 1 and x.bag == kids[0] and x.edge is not None and 0 <= x.edge < graph.m
            if ok:
                u, v = graph.edges[x.edge]
                ok = u in x.bag and v in x.bag
            if not ok:
                problems.append(f"introduce-edge node {i} malformed")
            introduced.append(x.edge)
        elif x.kind == FORGET:
            if len(kids) != 1 or x.vertex not in kids[0] or x.bag != kids[0] - {x.vertex}:
                problems.append(f"forget node {i} malformed")
            forgotten[x.vertex] += 1
        elif x.kind == JOIN:
            if len(kids) != 2 or kids[0] != x.bag or kids[1] != x.bag:
                problems.append(f"join node {i} malformed")
        else:
            problems.append(f"node {i} has unknown kind {x.kind}")
    for i, c in enumerate(parent_count):
        if i != nice.root and c != 1:
            problems.append(f"node {i} has {c} parents")
    if sorted(introduced) != list(range(graph.m)):
        problems.append("edges are not introduced exactly once")
    if any(forgotten[v] != 1 for v in range(graph.n)) or set(forgotten) - set(range(graph.n)):
        problems.append("vertices are not forgotten exactly once")
    return problems


def _rooted(td: TreeDecomposition, root: int):
    adj = defaultdict(list)
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    children = defaultdict(list)
    order = []
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                children[x].append(y)
                stack.append(y)
    return order, children


def make_nice(graph: Graph, td: TreeDecomposition) -> NiceDecomposition:
    """Convert a valid decomposition into a nice one of the same width.

    Between a child bag and its parent bag vertices are forgotten before new
    ones are introduced, so no intermediate bag grows.  Each edge is
    introduced right below the forget node of whichever endpoint leaves
    first.  Joins are binary and left-deep.
    """
    report = validate_decomposition(graph, td)
    if not report.valid:
        raise DecompositionError(f"invalid decomposition: {report.violations[0].detail}")
    if not td.bags:
        return NiceDecomposition((NiceNode(LEAF, frozenset()),), 0)

    # skeleton without edge nodes: list of (kind, bag, children, vertex)
    skel: list[list] = []

    def add(kind, bag, children=(), vertex=None):
        skel.append([kind, frozenset(bag), tuple(children), vertex])
        return len(skel) - 1

    def chain(top, bag_from, bag_to):
        cur_bag = set(bag_from)
        for v in sorted(bag_from - bag_to):
            cur_bag.discard(v)
            top = add(FORGET, cur_bag, (top,), v)
        for v in sorted(bag_to - bag_from):
            cur_bag.add(v)
            top = add(INTRODUCE, cur_bag, (top,), v)
        return top

    order, children = _rooted(td, 0)
    top_of = {}
    for x in reversed(order):
        bag = td.bags[x]
        kids = children[x]
        if not kids:
            top_of[x] = chain(add(LEAF, ()), frozenset(), bag)
            continue
        tops = [chain(top_of[c], td.bags[c], bag) for c in kids]
        acc = tops[0]
        for t in tops[1:]:
            acc = add(JOIN, bag, (acc, t))
        top_of[x] = acc
    chain(top_of[0], td.bags[0], frozenset())
    root_skel = len(skel) - 1

    forget_at = {s[3]: i for i, s in enumerate(skel) if s[0] == FORGET}
    # skeleton is already children-before-parents, so index = post-order rank
    below: dict[int, list[int]] = defaultdict(list)
    for eid, (u, v) in enumerate(graph.edges):
        below[min(forget_at[u], forget_at[v])].append(eid)

    nodes: list[NiceNode] = []
    new_id = {}
    for i, (kind, bag, kids, vertex) in enumerate(skel):
        kids = tuple(new_id[c] for c in kids)
        if i in below:
            child_bag = skel[skel[i][2][0]][1]
            cur = kids[0]
            for eid in sorted(below[i]):
                nodes.append(NiceNode(INTRODUCE_EDGE, child_bag, (cur,), None, eid))
                cur = len(nodes) - 1
            kids = (cur,)
        nodes.append(NiceNode(kind, bag, kids, vertex))
        new_id[i] = len(nodes) - 1
    return NiceDecomposition(tuple(nodes), new_id[root_skel])


# ------------------------------------------------------------------ heuristics


def decomposition_from_ordering(graph: Graph, ordering: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``ordering``."""
    if sorted(ordering) != list(range(graph.n)):
        raise DecompositionError("ordering must be a permutation of the vertices")
    adj = {v: set() for v in range(graph.n)}
    for u, v in graph.edges:
        adj[u].add(v)
        adj[v].add(u)
    pos = {v: i for i, v in enumerate(ordering)}
    bags = []
    later = []
    for v in ordering:
        nb = adj[v]
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        bags.append(frozenset(nb | {v}))
        later.append(nb)
        del adj[v]
    edges = []
    roots = []
    for i, v in enumerate(ordering):
        if later[i]:
            edges.append((i, min(pos[w] for w in later[i])))
        else:
            roots.append(i)
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(tuple(bags), tuple(edges))


def min_fill_ordering(graph: Graph) -> list[int]:
    adj = {v: set() for v in range(graph.n)}
    for u, v in graph.edges:
        adj[u].add(v)
        adj[v].add(u)
    order = []

    def fill(v):
        nb = list(adj[v])
        return sum(1 for i, a in enumerate(nb) for b in nb[i + 1:] if b not in adj[a])

    while adj:
        v = min(adj, key=lambda x: (fill(x), len(adj[x]), x))
        nb = adj.pop(v)
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        order.append(v)
    return order


def greedy_decomposition(graph: Graph) -> TreeDecomposition:
    """Min-fill heuristic (ties broken by degree, then id); no optimality claim."""
    return decomposition_from_ordering(graph, min_fill_ordering(graph))


def path_decomposition(bags: Iterable[Iterable[int]]) -> TreeDecomposition:
    bags = tuple(frozenset(b) for b in bags)
    return TreeDecomposition(bags, tuple((i, i + 1) for i in range(len(bags) - 1)))


# ----------------------------------------------------------------------- .td I/O


def parse_td(text: str) -> TreeDecomposition:
    """Parse PACE ``.td`` text (1-based bag ids and vertices)."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s":
                if len(tok) != 5 or tok[1] != "td":
                    raise DecompositionError(f"line {lineno}: malformed header")
                header = tuple(int(t) for t in tok[2:])
            elif tok[0] == "b":
                bid = int(tok[1])
                if bid in bags or not 1 <= bid <= (header[0] if header else bid):
                    raise DecompositionError(f"line {lineno}: bad or repeated bag id {bid}")
                bags[bid] = frozenset(int(t) - 1 for t in tok[2:])
            else:
                if header is None or len(tok) != 2:
                    raise DecompositionError(f"line {lineno}: unexpected line")
                edges.append((int(tok[0]) - 1, int(tok[1]) - 1))
        except ValueError:
            raise DecompositionError(f"line {lineno}: non-integer field") from None
    if header is None:
        raise DecompositionError("missing 's td' header")
    nb = header[0]
    if sorted(bags) != list(range(1, nb + 1)):
        raise DecompositionError(f"header declares {nb} bags, found {len(bags)}")
    return TreeDecomposition(tuple(bags[i] for i in range(1, nb + 1)), tuple(edges))


def format_td(td: TreeDecomposition, n: int) -> str:
    out = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags, 1):
        out.append(" ".join(["b", str(i)] + [str(v + 1) for v in sorted(bag)]))
    out += [f"{a + 1} {b + 1}" for a, b in td.tree_edges]
    return "\n".join(out) + "\n"
