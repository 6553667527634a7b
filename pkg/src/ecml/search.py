"""Exact backtracking search over quantified set assignments.

Set memberships are fixed one variable at a time.  After each step the
matrix is evaluated in three-valued (Kleene) logic at the vertices the
variable can influence and the constraint is evaluated over integer
intervals; a definite ``False`` prunes the branch.  Completed assignments
are checked with the reference semantics, so pruning only affects speed.
"""
from __future__ import annotations

from collections import deque
from typing import Iterator

from . import arith as A
from . import formula as F
from .dsl import ProblemSpec
from .graph import Instance, connected_components
from .oracle import check_binding, constant_env


def _t_not(a):
    return None if a is None else not a


def _t_and(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _t_or(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


class _Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo, self.hi = lo, hi


def _ival(e: A.Expr, env):
    t = type(e)
    if t is A.IntConst:
        return _Interval(e.value, e.value)
    if t is A.BoolConst:
        return e.value
    if t in (A.Param, A.Card, A.CC):
        return env[A.env_key(e)]
    if t is A.Neg:
        x = _ival(e.operand, env)
        return _Interval(-x.hi, -x.lo)
    if t is A.BinOp:
        a, b = _ival(e.left, env), _ival(e.right, env)
        if e.op == "+":
            return _Interval(a.lo + b.lo, a.hi + b.hi)
        if e.op == "-":
            return _Interval(a.lo - b.hi, a.hi - b.lo)
        c = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
        return _Interval(min(c), max(c))
    if t is A.Compare:
        a, b = _ival(e.left, env), _ival(e.right, env)
        op = e.op
        if op in (">=", ">"):
            a, b = b, a
            op = "<=" if op == ">=" else "<"
        if op == "<=":
            return True if a.hi <= b.lo else False if a.lo > b.hi else None
        if op == "<":
            return True if a.hi < b.lo else False if a.lo >= b.hi else None
        fixed = a.lo == a.hi == b.lo == b.hi
        overlap = a.lo <= b.hi and b.lo <= a.hi
        eq = True if fixed else (None if overlap else False)
        return eq if op == "=" else _t_not(eq)
    if t is A.Logical:
        a, b = _ival(e.left, env), _ival(e.right, env)
        return _t_and(a, b) if e.op == "and" else _t_or(a, b)
    if t is A.Negation:
        return _t_not(_ival(e.operand, env))
    raise A.ArithError(f"unknown node {e!r}")


class _Search:
    def __init__(self, instance: Instance, spec: ProblemSpec):
        check_binding(instance, spec)
        self.inst = instance
        self.spec = spec
        self.g = g = instance.graph
        self.matrix = spec.matrix
        self.depth = F.modal_depth(spec.matrix)
        self.vals = {x: [None] * g.n for x in spec.vertex_sets}
        self.vals.update({y: [None] * g.m for y in spec.edge_sets})
        self.const = {k: _Interval(v, v) for k, v in constant_env(instance, spec).items()}
        self.used = A.variables(spec.constraint)
        # variable order: BFS over vertices, each vertex followed by its back edges
        order, seen = [], set()
        for s in range(g.n):
            if s in seen:
                continue
            seen.add(s)
            queue = deque([s])
            while queue:
                v = queue.popleft()
                order.append(v)
                for _, w in sorted(g.incident(v), key=lambda t: t[1]):
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
        rank = {v: i for i, v in enumerate(order)}
        self.vars = []
        for v in order:
            for x in spec.vertex_sets:
                self.vars.append((x, v, self._ball([v], self.depth)))
            back = sorted(e for e, w in g.incident(v) if rank[w] < rank[v])
            for e in back:
                for y in spec.edge_sets:
                    self.vars.append((y, e, self._ball(list(g.edges[e]), max(self.depth - 1, 0))))

    def _ball(self, sources, radius):
        dist = {s: 0 for s in sources}
        queue = deque(sources)
        while queue:
            v = queue.popleft()
            if dist[v] == radius:
                continue
            for w in self.g.neighbours(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return tuple(sorted(dist))

    def _tv(self, f, v, via):
        t = type(f)
        if t is F.VertexSet:
            vals = self.vals.get(f.name)
            return vals[v] if vals is not None else v in self.inst.fixed_vertex_sets[f.name]
        if t is F.EdgeSet:
            vals = self.vals.get(f.name)
            return vals[via] if vals is not None else via in self.inst.fixed_edge_sets[f.name]
        if t is F.Const:
            return f.value
        if t is F.ArcDown:
            return self.g.edges[via][1] == v
        if t is F.ArcUp:
            return self.g.edges[via][0] == v
        if t is F.Not:
            return _t_not(self._tv(f.body, v, via))
        if t is F.And:
            a = self._tv(f.left, v, via)
            return False if a is False else _t_and(a, self._tv(f.right, v, via))
        if t is F.Or:
            a = self._tv(f.left, v, via)
            return True if a is True else _t_or(a, self._tv(f.right, v, via))
        if t is F.Implies:
            a = self._tv(f.left, v, via)
            return True if a is False else _t_or(_t_not(a), self._tv(f.right, v, via))
        if t is F.Iff:
            a, b = self._tv(f.left, v, via), self._tv(f.right, v, via)
            return None if a is None or b is None else a == b
        if t is F.Diamond or t is F.Box:
            sure = unsure = 0
            for e, w in self.g.incident(v):
                r = self._tv(f.body, w, e)
                if t is F.Box:
                    r = _t_not(r)
                if r is None:
                    unsure += 1
                elif r:
                    sure += 1
            hits = {c in f.S for c in range(sure, sure + unsure + 1)}
            res = True if hits == {True} else False if hits == {False} else None
            return _t_not(res) if t is F.Box else res
        raise F.FormulaError(f"unexpected node {f!r}")

    def _constraint(self, complete: bool):
        env = dict(self.const)
        g = self.g
        for name, vals in self.vals.items():
            ones = sum(1 for x in vals if x)
            unknown = sum(1 for x in vals if x is None)
            env[f"|{name}|"] = _Interval(ones, ones + unknown)
            key = f"cc({name})"
            if key in self.used:
                if unknown == 0:
                    members = [i for i, x in enumerate(vals) if x]
                    c = connected_components(g, members, edges=name in self.spec.edge_sets)
                    env[key] = _Interval(c, c)
                else:
                    env[key] = _Interval(0, g.n)
        return _ival(self.spec.constraint, env)

    def solutions(self) -> Iterator[dict[str, frozenset[int]]]:
        if self._constraint(False) is False:
            return
        yield from self._dfs(0)

    def _dfs(self, i):
        if i == len(self.vars):
            if self._constraint(True) and all(self._tv(self.matrix, v, None) for v in range(self.g.n)):
                yield {name: frozenset(j for j, x in enumerate(vals) if x) for name, vals in self.vals.items()}
            return
        name, idx, affected = self.vars[i]
        vals = self.vals[name]
        for choice in (False, True):
            vals[idx] = choice
            if self._constraint(False) is not False and all(
                    self._tv(self.matrix, v, None) is not False for v in affected):
                yield from self._dfs(i + 1)
        vals[idx] = None


def search_solutions(instance: Instance, spec: ProblemSpec) -> Iterator[dict[str, frozenset[int]]]:
    return _Search(instance, spec).solutions()


def search_decide(instance: Instance, spec: ProblemSpec) -> bool:
    return next(search_solutions(instance, spec), None) is not None


def search_count(instance: Instance, spec: ProblemSpec) -> int:
    return sum(1 for _ in search_solutions(instance, spec))
