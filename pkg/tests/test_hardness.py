import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from ecml.decomposition import validate_decomposition
from ecml.graph import Graph
from ecml.hardness import (
    CnfFormula,
    HardnessError,
    check_equivalence,
    deletion_answer,
    format_dimacs,
    gadget_constant,
    generate,
    min_hitting_set_at_most,
    parse_dimacs,
    path_lengths,
    short_cycles,
    width_bound,
)
from ecml.oracle import BudgetExceeded
from helpers import random_graph


def test_path_lengths():
    assert path_lengths(5) == (2, 3)
    assert path_lengths(6) == (2, 4)
    assert path_lengths(7) == (3, 4)
    with pytest.raises(HardnessError):
        path_lengths(4)


def test_budget_and_pool_size():
    one = CnfFormula(1, ((1, 1, 1),))
    inst = generate(one, 5)
    assert inst.k == 3
    two = generate(CnfFormula(2, ((1, -2, 2),)), 5)
    assert len(two.A) == len(two.B) == 2


def test_satisfiable_single_clause():
    cnf = CnfFormula(1, ((1, 1, 1),))
    report = check_equivalence(generate(cnf, 5), cnf)
    assert report.satisfiable and report.cl_deletion and report.girth_deletion and report.ok


def test_unsatisfiable_pair():
    cnf = CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))
    report = check_equivalence(generate(cnf, 5), cnf)
    assert not report.satisfiable and not report.cl_deletion and report.ok


def test_width_matches_bound():
    inst = generate(CnfFormula(1, ((1, 1, 1),)), 5)
    assert inst.decomposition.width == width_bound(1, 5) == 18
    assert validate_decomposition(inst.graph, inst.decomposition).valid


def test_gadget_constant_is_frozen():
    assert [gadget_constant(l) for l in (5, 6, 7, 8)] == [15, 21, 24, 30]
    assert all(gadget_constant(l) <= 9 * (l + 1) for l in range(5, 40))


def test_placement_is_injective_and_metadata_serializes():
    cnf = CnfFormula(3, ((1, -2, 3), (-1, 2, -3)))
    inst = generate(cnf, 6)
    assert len(set(inst.placement.values())) == 6
    meta = json.loads(inst.to_json())
    assert meta["k"] == 3 + 4 and meta["l"] == 6
    assert {(e["clause"], e["position"]) for e in meta["s"]} == {(c, p) for c in range(2) for p in range(3)}


def test_dimacs_round_trip_and_padding():
    cnf = parse_dimacs("c demo\np cnf 2 2\n1 -2 0\n2 0\n")
    assert cnf.clauses == ((1, -2, 1), (2, 2, 2))
    assert parse_dimacs(format_dimacs(cnf)) == cnf


@pytest.mark.parametrize("text", ["1 2 3 0\n", "p cnf 1 1\n1 2 0\n", "p cnf 2 1\n1 2 -1 2 0\n",
                                  "p cnf 1 2\n1 0\n", "p cnf 1 1\n1\n", "p cnf 1 1\n0\n", "p dnf 1 1\n"])
def test_dimacs_errors(text):
    with pytest.raises(HardnessError):
        parse_dimacs(text)


def nx_cycles(g, max_len, exact):
    h = nx.Graph(list(g.edges))
    h.add_nodes_from(range(g.n))
    return {frozenset(c) for c in nx.simple_cycles(h, length_bound=max_len) if len(c) >= 3
            and (not exact or len(c) == max_len)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_short_cycles_against_networkx(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(3, 7), 0.5)
    L = rng.randint(3, 6)
    for exact in (False, True):
        got = short_cycles(g, L, exact)
        assert set(got) == nx_cycles(g, L, exact)


def brute_hitting(cycles, k, n):
    return any(all(c & set(s) for c in cycles)
               for r in range(k + 1) for s in itertools.combinations(range(n), r))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_hitting_set_is_exact(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    cycles = [frozenset(rng.sample(range(n), rng.randint(1, min(n, 4)))) for _ in range(rng.randint(0, 8))]
    k = rng.randint(0, 4)
    sol = min_hitting_set_at_most(cycles, k)
    assert (sol is not None) == brute_hitting(cycles, k, n)
    if sol is not None:
        assert len(sol) <= k and all(c & set(sol) for c in cycles)


def test_deletion_on_small_graphs():
    c5 = Graph(5, tuple((i, (i + 1) % 5) for i in range(5)))
    assert deletion_answer(c5, 0, 4, girth=True)[0]
    assert not deletion_answer(c5, 0, 5)[0]
    assert deletion_answer(c5, 1, 5)[0]


def test_budget_exhaustion():
    k7 = Graph(7, tuple(itertools.combinations(range(7), 2)))
    with pytest.raises(BudgetExceeded):
        deletion_answer(k7, 3, 3, budget=2)
