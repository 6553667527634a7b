"""Generators shared by the test modules."""
from __future__ import annotations

import itertools
import random

from ecml import arith as A
from ecml import formula as F
from ecml.decomposition import TreeDecomposition, greedy_decomposition, make_nice
from ecml.dsl import ProblemSpec, parse_constraint
from ecml.graph import Graph, Instance
from ecml.upset import upset_parse

SET_POOL = [upset_parse(t) for t in (">=1", "{0}", "{2}", "even")]

# acceptance criterion number -> "PASS ..." / "FAIL ..." line, printed at session end
ACCEPTANCE: dict[int, str] = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE[number] = line
    print(line)
    assert ok, line


def all_graphs(n: int):
    """Every labelled simple undirected graph on ``n`` vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, tuple(p for i, p in enumerate(pairs) if mask >> i & 1))


def random_graph(rng: random.Random, n: int, p: float, directed: bool = False) -> Graph:
    if directed:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        pairs = list(itertools.combinations(range(n), 2))
    return Graph(n, tuple(e for e in pairs if rng.random() < p), directed=directed)


def nice_of(graph: Graph):
    return make_nice(graph, greedy_decomposition(graph))


def plain(graph: Graph, **params) -> Instance:
    return Instance(graph, {}, {}, dict(params))


def random_formula(rng: random.Random, vsets, esets, depth: int, modal: bool = False,
                   size: int = 10) -> F.Formula:
    """Box-free formula of modal depth at most ``depth`` with at most ``size``
    nodes; edge atoms only under a diamond."""
    r = rng.random()
    if size >= 2 and depth > 0 and r < 0.35:
        return F.Diamond(rng.choice(SET_POOL), random_formula(rng, vsets, esets, depth - 1, True, size - 1))
    if size >= 2 and r < 0.5:
        return F.Not(random_formula(rng, vsets, esets, depth, modal, size - 1))
    if size >= 3 and r < 0.7:
        op = rng.choice([F.And, F.Or])
        left = rng.randint(1, size - 2)
        return op(random_formula(rng, vsets, esets, depth, modal, left),
                  random_formula(rng, vsets, esets, depth, modal, size - 1 - left))
    atoms = [F.VertexSet(x) for x in vsets]
    if modal:
        atoms += [F.EdgeSet(y) for y in esets]
    return rng.choice(atoms)


def random_spec(rng: random.Random, depth: int = 2) -> ProblemSpec:
    vsets = ("X",) if rng.random() < 0.5 else ("X", "Z")
    esets = ("Y",) if rng.random() < 0.5 else ()
    matrix = random_formula(rng, vsets, esets, depth)
    names = list(vsets + esets)
    choice = rng.randrange(4)
    if choice == 0:
        constraint = A.BoolConst(True)
    elif choice == 1:
        constraint = parse_constraint(f"|{rng.choice(names)}| <= {rng.randint(0, 3)}")
    elif choice == 2:
        constraint = parse_constraint(f"|{rng.choice(names)}| = {rng.randint(0, 3)}")
    else:
        a, b = rng.choice(names), rng.choice(names)
        constraint = parse_constraint(f"|{a}| + 2 * |{b}| >= {rng.randint(1, 4)}")
    return ProblemSpec("random", matrix, constraint, vsets, esets)


def partial_ktree(rng: random.Random, n: int, k: int, keep: float = 0.7):
    """Random partial k-tree on ``n`` vertices with the decomposition its
    construction order yields (width ``min(k, n-1)``)."""
    k = min(k, n - 1)
    perm = list(range(n))
    rng.shuffle(perm)
    cliques = []
    edges = set()
    bags = [frozenset(perm[: k + 1])]
    tree = []
    for u, v in itertools.combinations(perm[: k + 1], 2):
        edges.add((min(u, v), max(u, v)))
    cliques.append((frozenset(perm[: k + 1]), 0))
    for v in perm[k + 1:]:
        base, bag_id = rng.choice(cliques)
        drop = rng.choice(sorted(base))
        clique = base - {drop}
        for u in clique:
            edges.add((min(u, v), max(u, v)))
        bags.append(clique | {v})
        tree.append((bag_id, len(bags) - 1))
        cliques.append((clique | {v}, len(bags) - 1))
    kept = tuple(sorted(e for e in edges if rng.random() < keep))
    return Graph(n, kept), TreeDecomposition(tuple(bags), tuple(tree))
