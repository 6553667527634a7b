"""Problem specifications and the text format describing them.

A problem file looks like::

    problem "vertex-cover"
    param k
    exists vertexset X
    require |X| <= k
    formula: !X -> box(X)

Other declarations: ``graph directed``, ``fixed vertexset T``,
``fixed edgeset F``, ``exists edgeset Y``.  Several ``require`` lines are
conjoined.  The formula may continue over the following lines.  ``#`` starts
a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import arith as A
from . import formula as F
from .upset import AT_LEAST_ONE, UPSetError, format_upset, upset_parse


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    matrix: F.Formula
    constraint: A.Expr = field(default_factory=lambda: A.BoolConst(True))
    vertex_sets: tuple[str, ...] = ()
    edge_sets: tuple[str, ...] = ()
    fixed_vertex_sets: tuple[str, ...] = ()
    fixed_edge_sets: tuple[str, ...] = ()
    params: tuple[str, ...] = ()
    directed: bool = False

    def __post_init__(self):
        for attr in ("vertex_sets", "edge_sets", "fixed_vertex_sets", "fixed_edge_sets", "params"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        _validate(self)

    @property
    def p1(self) -> int:
        return len(self.vertex_sets)

    @property
    def q1(self) -> int:
        return len(self.edge_sets)

    @property
    def quantified(self) -> tuple[str, ...]:
        return self.vertex_sets + self.edge_sets

    @property
    def cc_sets(self) -> frozenset[str]:
        """Quantified sets whose connectivity appears in the constraint."""
        return frozenset(x.name for x in A.subexprs(self.constraint)
                         if isinstance(x, A.CC) and x.name in self.quantified)

    @property
    def has_connectivity(self) -> bool:
        return bool(self.cc_sets)


RESERVED = {"V", "E", "up", "down", "diamond", "box", "cc", "and", "or", "not", "true", "false"}


def _validate(spec: ProblemSpec) -> None:
    names = spec.vertex_sets + spec.edge_sets + spec.fixed_vertex_sets + spec.fixed_edge_sets + spec.params
    seen = set()
    for n in names:
        if n in RESERVED or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise SpecError(f"invalid identifier {n!r}")
        if n in seen:
            raise SpecError(f"identifier {n!r} declared twice")
        seen.add(n)
    vsets = set(spec.vertex_sets) | set(spec.fixed_vertex_sets)
    esets = set(spec.edge_sets) | set(spec.fixed_edge_sets)
    for g, depth in F.walk(spec.matrix):
        if isinstance(g, F.VertexSet) and g.name not in vsets:
            raise SpecError(f"unknown vertex set {g.name!r}")
        if isinstance(g, F.EdgeSet) and g.name not in esets:
            raise SpecError(f"unknown edge set {g.name!r}")
        if isinstance(g, F.EDGE_ATOMS) and depth == 0:
            raise SpecError(f"edge operator {_atom_text(g)} used outside every diamond/box")
        if isinstance(g, (F.ArcUp, F.ArcDown)) and not spec.directed:
            raise SpecError("arc operators up/down need 'graph directed'")
        if isinstance(g, F.Pred):
            raise SpecError("prediction atoms are internal")
    A.typecheck(spec.constraint)
    if not A.is_boolean(spec.constraint):
        raise SpecError("the constraint must be a condition")
    for x in A.subexprs(spec.constraint):
        if isinstance(x, A.Param) and x.name not in spec.params:
            raise SpecError(f"unknown parameter {x.name!r}")
        if isinstance(x, (A.Card, A.CC)) and x.name not in vsets | esets | ({"V", "E"} if isinstance(x, A.Card) else set()):
            raise SpecError(f"unknown set {x.name!r}")
    try:
        A.check_monotone(spec.constraint, set(spec.quantified))
    except A.ArithError as exc:
        raise SpecError(str(exc)) from None


def _atom_text(g):
    return {F.ArcUp: "up", F.ArcDown: "down"}.get(type(g), getattr(g, "name", "?"))


# ----------------------------------------------------------------- tokenizer

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<set>\[[^\]]*\])
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|<=|>=|!=|==|[!&|()+\-*<>=])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        pos = m.end()
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group()))
    out.append(("end", ""))
    return out


class _Stream:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.peek()
        self.i = min(self.i + 1, len(self.toks))
        return t

    def accept(self, value):
        if self.peek()[1] == value and self.peek()[0] in ("op", "id"):
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            raise SpecError(f"expected {value!r}, found {self.peek()[1] or 'end of input'!r}")

    def done(self):
        if self.peek()[0] != "end":
            raise SpecError(f"unexpected trailing input {self.peek()[1]!r}")


# ------------------------------------------------------------ formula parser


def parse_formula(text: str, vertex_sets, edge_sets) -> F.Formula:
    """Parse a modal formula; identifiers resolve against the given set names."""
    s = _Stream(text)
    vsets, esets = set(vertex_sets), set(edge_sets)

    def iff():
        left = implies()
        if s.accept("<->"):
            right = implies()
            if s.peek()[1] == "<->":
                raise SpecError("'<->' is not associative; add parentheses")
            return F.Iff(left, right)
        return left

    def implies():
        left = disj()
        if s.accept("->"):
            return F.Implies(left, implies())
        return left

    def disj():
        left = conj()
        while s.accept("|"):
            left = F.Or(left, conj())
        return left

    def conj():
        left = unary()
        while s.accept("&"):
            left = F.And(left, unary())
        return left

    def unary():
        if s.accept("!"):
            return F.Not(unary())
        return atom()

    def atom():
        kind, val = s.next()
        if val == "(" and kind == "op":
            f = iff()
            s.expect(")")
            return f
        if kind != "id":
            raise SpecError(f"unexpected token {val or 'end of input'!r} in formula")
        if val in ("diamond", "box"):
            S = AT_LEAST_ONE
            if s.peek()[0] == "set":
                raw = s.next()[1][1:-1]
                try:
                    S = upset_parse(raw)
                except UPSetError as exc:
                    raise SpecError(str(exc)) from None
            s.expect("(")
            body = iff()
            s.expect(")")
            return (F.Diamond if val == "diamond" else F.Box)(S, body)
        if val in ("true", "false"):
            return F.Const(val == "true")
        if val == "up":
            return F.ArcUp()
        if val == "down":
            return F.ArcDown()
        if val in vsets:
            return F.VertexSet(val)
        if val in esets:
            return F.EdgeSet(val)
        raise SpecError(f"unknown identifier {val!r} in formula")

    f = iff()
    s.done()
    return f


_FPREC = {F.Iff: 1, F.Implies: 2, F.Or: 3, F.And: 4}
_FOPS = {F.Iff: "<->", F.Implies: "->", F.Or: "|", F.And: "&"}


def format_formula(f: F.Formula) -> str:
    def prec(g):
        return _FPREC.get(type(g), 5 if isinstance(g, F.Not) else 6)

    def wrap(g, need):
        text = format_formula(g)
        return f"({text})" if prec(g) < need else text

    if isinstance(f, F.VertexSet) or isinstance(f, F.EdgeSet):
        return f.name
    if isinstance(f, F.Const):
        return "true" if f.value else "false"
    if isinstance(f, F.ArcUp):
        return "up"
    if isinstance(f, F.ArcDown):
        return "down"
    if isinstance(f, F.Not):
        return "!" + wrap(f.body, 5)
    if isinstance(f, (F.Diamond, F.Box)):
        word = "diamond" if isinstance(f, F.Diamond) else "box"
        tag = "" if f.S == AT_LEAST_ONE else f"[{format_upset(f.S)}]"
        return f"{word}{tag}({format_formula(f.body)})"
    if isinstance(f, F.BINARY):
        p = _FPREC[type(f)]
        if isinstance(f, F.Implies):
            return f"{wrap(f.left, p + 1)} -> {wrap(f.right, p)}"
        if isinstance(f, F.Iff):
            return f"{wrap(f.left, p + 1)} <-> {wrap(f.right, p + 1)}"
        return f"{wrap(f.left, p)} {_FOPS[type(f)]} {wrap(f.right, p + 1)}"
    raise SpecError(f"cannot print {f!r}")


# ---------------------------------------------------------------- arithmetic


def parse_constraint(text: str) -> A.Expr:
    s = _Stream(text)

    def disj():
        left = conj()
        while s.accept("or"):
            left = A.Logical("or", left, conj())
        return left

    def conj():
        left = neg()
        while s.accept("and"):
            left = A.Logical("and", left, neg())
        return left

    def neg():
        if s.accept("not"):
            return A.Negation(neg())
        return comparison()

    def comparison():
        left = additive()
        tok = s.peek()
        if tok[0] == "op" and tok[1] in ("=", "==", "!=", "<=", "<", ">=", ">"):
            s.next()
            op = "=" if tok[1] == "==" else tok[1]
            right = additive()
            nxt = s.peek()
            if nxt[0] == "op" and nxt[1] in ("=", "==", "!=", "<=", "<", ">=", ">"):
                raise SpecError("chained comparisons are not allowed")
            return A.Compare(op, left, right)
        return left

    def additive():
        left = term()
        while s.peek()[0] == "op" and s.peek()[1] in "+-":
            op = s.next()[1]
            left = A.BinOp(op, left, term())
        return left

    def term():
        left = unary()
        while s.accept("*"):
            left = A.BinOp("*", left, unary())
        return left

    def unary():
        if s.accept("-"):
            return A.Neg(unary())
        return primary()

    def primary():
        kind, val = s.next()
        if kind == "num":
            return A.IntConst(int(val))
        if kind == "op" and val == "(":
            e = disj()
            s.expect(")")
            return e
        if kind == "op" and val == "|":
            k2, name = s.next()
            if k2 != "id":
                raise SpecError("expected a set name inside |...|")
            s.expect("|")
            return A.Card(name)
        if kind == "id":
            if val == "cc":
                s.expect("(")
                k2, name = s.next()
                if k2 != "id":
                    raise SpecError("expected a set name inside cc(...)")
                s.expect(")")
                return A.CC(name)
            if val in ("true", "false"):
                return A.BoolConst(val == "true")
            if val in RESERVED:
                raise SpecError(f"unexpected keyword {val!r}")
            return A.Param(val)
        raise SpecError(f"unexpected token {val or 'end of input'!r} in constraint")

    e = disj()
    s.done()
    try:
        A.typecheck(e)
    except A.ArithError as exc:
        raise SpecError(str(exc)) from None
    return e


# --------------------------------------------------------------- whole files

_KEYWORDS = ("problem", "graph", "param", "fixed", "exists", "require", "formula:")


def parse_problem(text: str) -> ProblemSpec:
    name = None
    directed = False
    params, fv, fe, qv, qe = [], [], [], [], []
    requires: list[tuple[int, str]] = []
    formula_text: list[str] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()[0]
        if formula_text is not None and head not in _KEYWORDS and not line.startswith("formula:"):
            formula_text.append(line)
            continue
        try:
            if line.startswith("formula:"):
                if formula_text is not None:
                    raise SpecError("second formula")
                formula_text = [line[len("formula:"):]]
            elif head == "problem":
                m = re.fullmatch(r'problem\s+"([^"]*)"', line)
                if not m:
                    raise SpecError('expected problem "name"')
                name = m[1]
            elif head == "graph":
                rest = line.split()[1:]
                if rest not in (["directed"], ["undirected"]):
                    raise SpecError("expected 'graph directed' or 'graph undirected'")
                directed = rest == ["directed"]
            elif head == "param":
                items = re.split(r"[\s,]+", line[len("param"):].strip())
                if not items or items == [""]:
                    raise SpecError("param needs a name")
                params += items
            elif head in ("fixed", "exists"):
                parts = line.split()
                if len(parts) < 3 or parts[1] not in ("vertexset", "edgeset"):
                    raise SpecError(f"expected '{head} vertexset NAME' or '{head} edgeset NAME'")
                target = {("fixed", "vertexset"): fv, ("fixed", "edgeset"): fe,
                          ("exists", "vertexset"): qv, ("exists", "edgeset"): qe}[head, parts[1]]
                target += [p for p in re.split(r"[\s,]+", " ".join(parts[2:])) if p]
            elif head == "require":
                requires.append((lineno, line[len("require"):]))
            else:
                raise SpecError(f"unknown declaration {head!r}")
        except SpecError as exc:
            raise SpecError(f"line {lineno}: {exc}") from None
    if name is None:
        raise SpecError("missing 'problem' line")
    if formula_text is None:
        raise SpecError("missing 'formula:' line")
    parts = []
    for lineno, clause in requires:
        try:
            expr = parse_constraint(clause)
            A.typecheck(expr)
            A.check_monotone(expr, set(qv + qe))
        except (SpecError, A.ArithError) as exc:
            raise SpecError(f"line {lineno}: {exc}") from None
        parts.append(expr)
    constraint = A.conjoin(parts)
    matrix = parse_formula(" ".join(formula_text), qv + fv, qe + fe)
    return ProblemSpec(name, matrix, constraint, tuple(qv), tuple(qe), tuple(fv), tuple(fe),
                       tuple(params), directed)


def format_problem(spec: ProblemSpec) -> str:
    out = [f'problem "{spec.name}"']
    if spec.directed:
        out.append("graph directed")
    out += [f"param {p}" for p in spec.params]
    out += [f"fixed vertexset {x}" for x in spec.fixed_vertex_sets]
    out += [f"fixed edgeset {x}" for x in spec.fixed_edge_sets]
    out += [f"exists vertexset {x}" for x in spec.vertex_sets]
    out += [f"exists edgeset {x}" for x in spec.edge_sets]
    if spec.constraint != A.BoolConst(True):
        out.append(f"require {A.format_expr(spec.constraint)}")
    out.append(f"formula: {format_formula(spec.matrix)}")
    return "\n".join(out) + "\n"
