import random

import pytest
from hypothesis import given, settings, strategies as st

from ecml.cutcount import (
    DEFAULT_TARGET_ERROR,
    Decider,
    clmul,
    decide,
    mod2_object_count,
    sample_weights,
    universe_size,
)
from ecml.dp import enumerate_branches
from ecml.graph import Graph, Instance
from ecml.problems import make_problem
from ecml.search import search_decide
from helpers import nice_of, plain, random_graph
from objects import object_weights

K3 = Graph(3, ((0, 1), (1, 2), (0, 2)))
P3 = Graph(3, ((0, 1), (1, 2)))
EDGE = Graph(2, ((0, 1),))
STEINER = make_problem("steiner-tree")
CVC = make_problem("connected-vertex-cover")


def test_universe_and_weight_range():
    inst = plain(EDGE, k=1)
    vc = make_problem("vertex-cover")
    assert universe_size(inst, vc) == 2 * 3 + 1
    w = sample_weights(inst, vc, seed=5)
    assert w.N == 14 and len(w.values) == 7
    assert all(1 <= x <= 14 for x in w.values)


def test_weights_are_deterministic():
    inst = Instance(K3, {"T": {0}}, {}, {"k": 1})
    assert sample_weights(inst, STEINER, 9) == sample_weights(inst, STEINER, 9)
    assert sample_weights(inst, STEINER, 9) != sample_weights(inst, STEINER, 10)


def test_clmul():
    assert clmul(0b11, 0b11) == 0b101
    assert clmul(0, 0b1011) == 0
    assert clmul(0b1, 0b1011) == 0b1011


def test_no_candidates_gives_empty_map():
    inst = Instance(Graph(4, ((0, 1), (2, 3))), {"T": {0, 3}}, {}, {"k": 0})
    w = sample_weights(inst, STEINER, 0)
    for br in enumerate_branches(inst, STEINER):
        assert mod2_object_count(inst, nice_of(inst.graph), STEINER, br, w) == {}


def test_single_edge_steiner_parities():
    inst = Instance(EDGE, {"T": {0, 1}}, {}, {"k": 0})
    (br,) = [b for b in enumerate_branches(inst, STEINER) if b.x == (2,) and b.cx == (1,)]
    for seed in range(20):
        w = sample_weights(inst, STEINER, seed)
        # marker on u or on v; unmarked objects cancel in pairs
        with_u = w.vertex(0, [2]) + w.vertex(1, [1]) + w.edge(0, [])
        with_v = w.vertex(0, [1]) + w.vertex(1, [2]) + w.edge(0, [])
        want = {with_u, with_v} if with_u != with_v else set()
        assert set(mod2_object_count(inst, nice_of(EDGE), STEINER, br, w)) == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_parities_match_enumeration(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 4), 0.6)
    name = rng.choice(["steiner-tree", "connected-vertex-cover", "connected-dominating-set",
                       "exact-k-leaf-spanning-tree"])
    spec = make_problem(name)
    fixed = {"T": {v for v in range(g.n) if rng.random() < 0.5}} if spec.fixed_vertex_sets else {}
    inst = Instance(g, fixed, {}, {"k": rng.randint(0, g.n)})
    w = sample_weights(inst, spec, seed)
    for br in enumerate_branches(inst, spec):
        got = set(mod2_object_count(inst, nice_of(g), spec, br, w))
        assert got == {W for W, c in object_weights(inst, spec, br, w).items() if c % 2}


def test_decide_examples():
    assert decide(plain(P3, k=1), nice_of(P3), CVC).answer
    tree = Graph(5, ((0, 1), (1, 2), (1, 3), (3, 4)))
    cycle = make_problem("longest-cycle-undirected")
    d = Decider(plain(tree, k=1), nice_of(tree), cycle)
    assert not any(d.decide(seed).answer for seed in range(30))
    st_inst = Instance(K3, {"T": {0, 1}}, {}, {"k": 1})
    assert decide(st_inst, nice_of(K3), STEINER, seed=42).answer


def test_result_json_is_deterministic():
    inst = Instance(K3, {"T": {0, 1}}, {}, {"k": 1})
    d = Decider(inst, nice_of(K3), STEINER)
    a, b = d.decide(seed=3).to_json(), d.decide(seed=3).to_json()
    assert a == b
    assert '"answer": "yes"' in a and '"rng": "numpy.PCG64"' in a


def test_schedule():
    d = Decider(plain(P3, k=1), nice_of(P3), CVC)
    per_round, rounds = d.schedule(DEFAULT_TARGET_ERROR)
    assert rounds == 20
    assert per_round == max(1, (2 * len(d.branches) - 1).bit_length())
    with pytest.raises(ValueError):
        d.decide(target_error=0)


def test_parallel_matches_serial():
    inst = Instance(Graph(4, ((0, 1), (1, 2), (2, 3))), {"T": {0, 3}}, {}, {"k": 2})
    d = Decider(inst, nice_of(inst.graph), STEINER)
    for seed in range(4):
        assert d.decide(seed=seed, workers=2).to_json() == d.decide(seed=seed).to_json()


@pytest.mark.parametrize("seed", range(6))
def test_yes_answers_are_never_wrong(seed):
    rng = random.Random(seed)
    for _ in range(10):
        g = random_graph(rng, rng.randint(2, 5), 0.45)
        name = rng.choice(["connected-vertex-cover", "connected-feedback-vertex-set", "longest-path-undirected"])
        spec = make_problem(name)
        inst = plain(g, k=rng.randint(0, g.n))
        result = Decider(inst, nice_of(g), spec).decide(seed)
        if result.answer:
            assert search_decide(inst, spec)
