import random

import pytest
from hypothesis import given, settings, strategies as st

from ecml import formula as F
from ecml.graph import Graph, Instance
from ecml.upset import upset_parse
from helpers import random_formula, random_graph

ONE = upset_parse(">=1")
EXACTLY_ONE = upset_parse("{1}")
K3 = Graph(3, ((0, 1), (1, 2), (0, 2)))


def at(graph, assignment, v, f, **fixed):
    return F.eval_cml(Instance(graph, fixed), assignment, v, f)


def test_vertex_cover_matrix_on_triangle():
    psi = F.Implies(F.Not(F.VertexSet("X")), F.box(F.VertexSet("X")))
    assert at(K3, {"X": {0, 1}}, 2, psi)
    assert not at(K3, {"X": {0}}, 2, psi)


def test_arc_direction():
    # the arrow names the direction of the edge used to reach a neighbour
    g = Graph(2, ((0, 1),), directed=True)
    assert at(g, {}, 0, F.diamond(F.ArcDown()))
    assert not at(g, {}, 1, F.diamond(F.ArcDown()))
    assert at(g, {}, 1, F.diamond(F.ArcUp()))
    assert not at(g, {}, 0, F.diamond(F.ArcUp()))


def test_counting_edges_in_set():
    p3 = Graph(3, ((0, 1), (1, 2)))
    f = F.Diamond(EXACTLY_ONE, F.EdgeSet("Y"))
    assert at(p3, {"Y": {0}}, 1, f)
    assert not at(p3, {"Y": {0, 1}}, 1, f)
    assert not at(p3, {"Y": set()}, 1, f)


def test_fixed_sets_resolve_from_instance():
    assert at(K3, {}, 0, F.VertexSet("T"), T={0})
    with pytest.raises(F.FormulaError):
        at(K3, {}, 0, F.VertexSet("T"))


def test_box_elimination_examples():
    X = F.VertexSet("X")
    assert F.eliminate_boxes(F.box(X)) == F.Not(F.Diamond(ONE, F.Not(X)))
    dy = F.diamond(F.EdgeSet("Y"))
    assert F.eliminate_boxes(dy) == dy
    nested = F.eliminate_boxes(F.box(F.box(X)))
    assert nested == F.Not(F.Diamond(ONE, F.Not(F.Not(F.Diamond(ONE, F.Not(X))))))


def test_modal_depth():
    X = F.VertexSet("X")
    assert F.modal_depth(X) == 0
    assert F.modal_depth(F.And(F.diamond(X), F.box(F.diamond(X)))) == 2


def test_counting_box_semantics():
    # box^S phi holds when the number of neighbours where phi fails is outside S
    star = Graph(3, ((0, 1), (0, 2)))
    f = F.Box(EXACTLY_ONE, F.VertexSet("X"))
    assert at(star, {"X": {1, 2}}, 0, f)
    assert not at(star, {"X": {1}}, 0, f)
    assert at(star, {"X": set()}, 0, f)


def brute(graph, assignment, v, f, via=None):
    """Independent recursive reading that counts neighbours rather than edges
    (the two agree on simple undirected graphs)."""
    if isinstance(f, F.VertexSet):
        return v in assignment[f.name]
    if isinstance(f, F.EdgeSet):
        return via is not None and via in assignment[f.name]
    if isinstance(f, F.Not):
        return not brute(graph, assignment, v, f.body, via)
    if isinstance(f, F.And):
        return brute(graph, assignment, v, f.left, via) and brute(graph, assignment, v, f.right, via)
    if isinstance(f, F.Or):
        return brute(graph, assignment, v, f.left, via) or brute(graph, assignment, v, f.right, via)
    if isinstance(f, F.Diamond):
        hits = sum(brute(graph, assignment, w, f.body, graph.edge_id(v, w)) for w in set(graph.neighbours(v)))
        S = f.S
        return S.bits[hits] if hits < S.N + S.k else S.bits[S.N + (hits - S.N) % S.k]
    raise AssertionError(f)


def random_case(rng):
    g = random_graph(rng, rng.randint(1, 5), 0.5)
    assignment = {"X": {v for v in range(g.n) if rng.random() < 0.5},
                  "Y": {e for e in range(g.m) if rng.random() < 0.5}}
    return g, assignment


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_evaluator_matches_neighbour_counting(seed):
    rng = random.Random(seed)
    g, assignment = random_case(rng)
    f = random_formula(rng, ("X",), ("Y",), 2)
    for v in range(g.n):
        assert F.eval_cml(Instance(g), assignment, v, f) == brute(g, assignment, v, f)


def with_boxes(rng, depth, modal=False):
    r = rng.random()
    if depth and r < 0.4:
        op = rng.choice([F.Diamond, F.Box])
        return op(rng.choice([ONE, EXACTLY_ONE, upset_parse("even")]), with_boxes(rng, depth - 1, True))
    if r < 0.55:
        return F.Not(with_boxes(rng, depth, modal))
    if r < 0.75:
        return rng.choice([F.And, F.Or, F.Implies, F.Iff])(with_boxes(rng, depth, modal), with_boxes(rng, depth, modal))
    return rng.choice([F.VertexSet("X")] + ([F.EdgeSet("Y")] if modal else []))


def test_box_elimination_preserves_semantics():
    rng = random.Random(2024)
    for _ in range(500):
        g, assignment = random_case(rng)
        f = with_boxes(rng, 3)
        plain_f = F.eliminate_boxes(f)
        assert not any(isinstance(x, F.Box) for x, _ in F.walk(plain_f))
        for v in range(g.n):
            assert F.eval_cml(Instance(g), assignment, v, f) == F.eval_cml(Instance(g), assignment, v, plain_f)
