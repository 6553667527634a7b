import pytest

from ecml import arith as A
from ecml import formula as F
from ecml.dsl import SpecError, format_formula, format_problem, parse_constraint, parse_formula, parse_problem
from ecml.problems import CATALOGUE, make_problem
from ecml.upset import upset_parse

VC = """
problem "vertex-cover"
param k
exists vertexset X
require |X| <= k
formula: !X -> box(X)
"""


def test_vertex_cover_text():
    spec = parse_problem(VC)
    assert (spec.p1, spec.q1) == (1, 0)
    assert spec.matrix == F.Implies(F.Not(F.VertexSet("X")), F.box(F.VertexSet("X")))
    assert spec.params == ("k",)
    assert not spec.has_connectivity


def test_cc_lower_bound_rejected():
    text = VC.replace("require |X| <= k", "require cc(X) >= 2")
    with pytest.raises(SpecError, match="line 5"):
        parse_problem(text)


@pytest.mark.parametrize("req", ["cc(X) = 1", "not cc(X) <= 1", "|X| - cc(X) <= 1", "1 <= cc(X)",
                                 "2 * cc(X) <= 3"])
def test_non_monotone_cc_positions(req):
    with pytest.raises(SpecError):
        parse_problem(VC.replace("|X| <= k", req))


@pytest.mark.parametrize("req", ["cc(X) <= 1", "1 >= cc(X)", "cc(X) + |X| <= k or |X| = 0",
                                 "cc(X) < 2 and |X| <= k"])
def test_monotone_cc_positions(req):
    assert parse_problem(VC.replace("|X| <= k", req)).cc_sets == {"X"}


def test_top_level_edge_operator_rejected():
    text = 'problem "p"\nexists edgeset Y\nformula: Y\n'
    with pytest.raises(SpecError, match="outside"):
        parse_problem(text)


def test_arcs_need_directed_graph():
    text = 'problem "p"\nformula: diamond(up)\n'
    with pytest.raises(SpecError):
        parse_problem(text)
    assert parse_problem('problem "p"\ngraph directed\nformula: diamond(up)\n').directed


@pytest.mark.parametrize("text", [
    'formula: X\n',
    'problem "p"\nexists vertexset X\n',
    'problem "p"\nexists vertexset X, X\nformula: X\n',
    'problem "p"\nexists vertexset box\nformula: X\n',
    'problem "p"\nfrobnicate\nformula: true\n',
    'problem "p"\nexists vertexset X\nformula: X <-> X <-> X\n',
    'problem "p"\nexists vertexset X\nformula: diamond[nope](X)\n',
    'problem "p"\nexists vertexset X\nrequire |X| + (|X| <= 1) <= 2\nformula: X\n',
    'problem "p"\nexists vertexset X\nrequire |W| <= 2\nformula: X\n',
])
def test_malformed_problems(text):
    with pytest.raises((SpecError, A.ArithError)):
        parse_problem(text)


def test_counting_modalities_parse():
    f = parse_formula("diamond[even](Y) & box[{1}](X)", ["X"], ["Y"])
    assert f == F.And(F.Diamond(upset_parse("even"), F.EdgeSet("Y")), F.Box(upset_parse("{1}"), F.VertexSet("X")))


def test_operator_precedence():
    f = parse_formula("!X & Z | X -> Z", ["X", "Z"], [])
    X, Z = F.VertexSet("X"), F.VertexSet("Z")
    assert f == F.Implies(F.Or(F.And(F.Not(X), Z), X), Z)


def test_constraint_evaluation_examples():
    assert A.eval_arith(parse_constraint("|X| <= k"), {"|X|": 2, "k": 2})
    tsp = parse_constraint("|Y1| + 2 * |Y2| <= k")
    assert A.eval_arith(tsp, {"|Y1|": 1, "|Y2|": 1, "k": 3})
    fvs = parse_constraint("cc(Y) + |Y| + |Z| + |X| <= |V|")
    assert A.eval_arith(fvs, {"cc(Y)": 1, "|Y|": 2, "|Z|": 0, "|X|": 1, "|V|": 4})
    assert not A.eval_arith(parse_constraint("not (1 < 2) or -3 > 0"), {})


@pytest.mark.parametrize("name", sorted(CATALOGUE) + ["r-dominating-set(2)"])
def test_catalogue_round_trips(name):
    spec = make_problem(name)
    back = parse_problem(format_problem(spec))
    assert back == spec
    assert parse_formula(format_formula(spec.matrix), spec.vertex_sets + spec.fixed_vertex_sets,
                         spec.edge_sets + spec.fixed_edge_sets) == spec.matrix


def test_constants():
    f = parse_formula("X -> true & !false", ["X"], [])
    assert f == F.Implies(F.VertexSet("X"), F.And(F.Const(True), F.Not(F.Const(False))))
    assert parse_formula(format_formula(f), ["X"], []) == f
