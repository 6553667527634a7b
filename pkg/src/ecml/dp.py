"""Counting solutions over a nice tree decomposition.

Every bag vertex carries an *information* triple ``(h, pi, b)``:

* ``h`` -- one monoid element per modal subformula, tallying the neighbours
  seen so far on which the subformula's body holds;
* ``pi`` -- a bitmask guessing which modal subformulas hold at the vertex;
* ``b`` -- a bitmask of the quantified vertex sets containing the vertex.

Guesses are checked when the vertex is forgotten.  Table keys pair the bag
informations with running cardinalities of the quantified sets.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import arith as A
from . import formula as F
from .decomposition import FORGET, INTRODUCE, INTRODUCE_EDGE, JOIN, LEAF, NiceDecomposition
from .dsl import ProblemSpec
from .graph import Instance
from .oracle import check_binding, constant_env
from .upset import UPSet, hom, madd


class EngineError(ValueError):
    pass


# -------------------------------------------------------------- compilation


@dataclass(frozen=True)
class CompiledMatrix:
    """Box-free matrix with its modal subformulas numbered in post-order.

    ``top`` is the matrix and ``bodies[i]`` the body of the i-th diamond, in
    both of which every diamond has been replaced by ``Pred(index)``.
    """

    top: F.Formula
    sets: tuple[UPSet, ...]
    bodies: tuple[F.Formula, ...]

    @property
    def l(self) -> int:
        return len(self.sets)


def compile_matrix(f: F.Formula) -> CompiledMatrix:
    sets: list[UPSet] = []
    bodies: list[F.Formula] = []
    seen: dict = {}

    def rec(g):
        if isinstance(g, F.Diamond):
            body = rec(g.body)
            key = (g.S, body)
            if key not in seen:
                sets.append(g.S)
                bodies.append(body)
                seen[key] = len(sets) - 1
            return F.Pred(seen[key])
        if isinstance(g, F.Not):
            return F.Not(rec(g.body))
        if isinstance(g, F.BINARY):
            return type(g)(rec(g.left), rec(g.right))
        return g

    top = rec(F.eliminate_boxes(f))
    return CompiledMatrix(top, tuple(sets), tuple(bodies))


class LocalModel:
    """Per-vertex and per-edge facts shared by both engines.

    ``membership`` bitmasks index ``spec.vertex_sets``; ``d`` bitmasks index
    ``spec.edge_sets``.
    """

    def __init__(self, instance: Instance, spec: ProblemSpec):
        self.instance = instance
        self.spec = spec
        self.graph = instance.graph
        self.cm = compile_matrix(spec.matrix)
        self.l = self.cm.l
        self.h0 = (0,) * self.l
        self.one = tuple(hom(S, 1) for S in self.cm.sets)
        self._vidx = {x: i for i, x in enumerate(spec.vertex_sets)}
        self._eidx = {y: j for j, y in enumerate(spec.edge_sets)}
        # alive[i][h] = set of predictions still reachable from history element h
        self.alive = []
        self.accept = []
        for S in self.cm.sets:
            carrier = range(S.size)
            self.alive.append([{S.bits[madd(S, h, x)] for x in carrier} for h in carrier])
            self.accept.append(S.bits)
        self._inc: dict = {}
        self._pairs: dict = {}

    def _evaluator(self, pi: int, b: int, d: int):
        inst = self.instance

        def vm(name, v):
            i = self._vidx.get(name)
            return bool(b >> i & 1) if i is not None else v in inst.fixed_vertex_sets[name]

        def em(name, e):
            j = self._eidx.get(name)
            return bool(d >> j & 1) if j is not None else e in inst.fixed_edge_sets[name]

        return F.Evaluator(self.graph, vm, em, lambda i, v: bool(pi >> i & 1))

    def pairs(self, v: int) -> list[tuple[int, int]]:
        """``(pi, b)`` pairs for which the matrix holds at ``v`` and the void
        history can still match the prediction."""
        hit = self._pairs.get(v)
        if hit is None:
            hit = []
            for b in range(1 << self.spec.p1):
                for pi in range(1 << self.l):
                    if not self.history_alive(self.h0, pi):
                        continue
                    if bool(self._evaluator(pi, b, 0)(self.cm.top, v)):
                        hit.append((pi, b))
            self._pairs[v] = hit
        return hit

    def increments(self, e: int, w: int, d: int, pi: int, b: int) -> tuple[bool, ...]:
        """Which bodies hold at ``w`` when reached through edge ``e``."""
        key = (e, w, d, pi, b)
        hit = self._inc.get(key)
        if hit is None:
            ev = self._evaluator(pi, b, d)
            hit = tuple(bool(ev(body, w, e)) for body in self.cm.bodies)
            self._inc[key] = hit
        return hit

    def advance(self, h: tuple[int, ...], inc: tuple[bool, ...]) -> tuple[int, ...]:
        if not any(inc):
            return h
        return tuple(madd(S, x, o) if t else x for S, x, o, t in zip(self.cm.sets, h, self.one, inc))

    def combine(self, h1, h2):
        return tuple(madd(S, a, b) for S, a, b in zip(self.cm.sets, h1, h2))

    def history_alive(self, h, pi: int) -> bool:
        return all(bool(pi >> i & 1) in self.alive[i][x] for i, x in enumerate(h))

    def good(self, h, pi: int) -> bool:
        return all(self.accept[i][x] == bool(pi >> i & 1) for i, x in enumerate(h))

    def info_space_size(self) -> int:
        return int(np.prod([S.size for S in self.cm.sets], dtype=object)) * 2 ** self.l * 2 ** self.spec.p1


# ----------------------------------------------------------------- branches


@dataclass(frozen=True)
class BranchAssignment:
    x: tuple[int, ...]
    y: tuple[int, ...]
    cx: tuple[int | None, ...] = ()
    cy: tuple[int | None, ...] = ()


def enumerate_branches(instance: Instance, spec: ProblemSpec) -> list[BranchAssignment]:
    """All cardinality (and component-count) vectors satisfying the constraint."""
    check_binding(instance, spec)
    g = instance.graph
    env = constant_env(instance, spec)
    axes = []  # (env key, range)
    for x in spec.vertex_sets:
        axes.append((f"|{x}|", g.n + 1))
    for y in spec.edge_sets:
        axes.append((f"|{y}|", g.m + 1))
    cc_names = [q for q in spec.quantified if q in spec.cc_sets]
    for q in cc_names:
        axes.append((f"cc({q})", g.n + 1))
    if not axes:
        return [BranchAssignment((), ())] if A.eval_arith(spec.constraint, env) else []
    grids = np.meshgrid(*[np.arange(r, dtype=np.int64) for _, r in axes], indexing="ij")
    for (key, _), grid in zip(axes, grids):
        env[key] = grid.ravel()
    total = grids[0].size
    ok = np.broadcast_to(np.asarray(A.evaluate(spec.constraint, env), dtype=bool), (total,))
    rows = np.stack([grid.ravel() for grid in grids], axis=1)[ok]
    p1, q1 = spec.p1, spec.q1
    out = []
    for row in rows.tolist():
        cc = dict(zip(cc_names, row[p1 + q1:]))
        out.append(BranchAssignment(
            tuple(row[:p1]), tuple(row[p1:p1 + q1]),
            tuple(cc.get(x) for x in spec.vertex_sets), tuple(cc.get(y) for y in spec.edge_sets)))
    return out


# ------------------------------------------------------------------- engine


def _popcounts(p1: int) -> list[tuple[int, ...]]:
    return [tuple(b >> i & 1 for i in range(p1)) for b in range(1 << p1)]


def count_table(instance: Instance, nice: NiceDecomposition, spec: ProblemSpec,
                caps: tuple[int, ...], profile: list | None = None) -> dict[tuple[int, ...], int]:
    """Run the dynamic program and return root counts keyed by the vector of
    cardinalities ``(|X_1|, ..., |X_p|, |Y_1|, ..., |Y_q|)``, capped by ``caps``."""
    g = instance.graph
    model = LocalModel(instance, spec)
    p1, q1 = spec.p1, spec.q1
    bitvec = _popcounts(p1)
    dvec = _popcounts(q1)
    zero = (0,) * (p1 + q1)
    tables: dict[int, dict] = {}
    bags: dict[int, tuple[int, ...]] = {}

    for idx, node in enumerate(nice.nodes):
        kind = node.kind
        if kind == LEAF:
            table = {((), zero): 1}
            bag = ()
        elif kind == INTRODUCE:
            child = tables.pop(node.children[0])
            cbag = bags.pop(node.children[0])
            v = node.vertex
            bag = tuple(sorted(cbag + (v,)))
            pos = bag.index(v)
            table = {}
            options = []
            for pi, b in model.pairs(v):
                add = bitvec[b] + (0,) * q1
                options.append(((model.h0, pi, b), add))
            for (s, acc), cnt in child.items():
                for info, add in options:
                    nacc = tuple(a + d for a, d in zip(acc, add))
                    if any(a > c for a, c in zip(nacc, caps)):
                        continue
                    key = (s[:pos] + (info,) + s[pos:], nacc)
                    table[key] = table.get(key, 0) + cnt
        elif kind == INTRODUCE_EDGE:
            child = tables.pop(node.children[0])
            bag = bags.pop(node.children[0])
            e = node.edge
            u, v = g.edges[e]
            pu, pv = bag.index(u), bag.index(v)
            table = {}
            for (s, acc), cnt in child.items():
                hu, piu, bu = s[pu]
                hv, piv, bv = s[pv]
                for d in range(1 << q1):
                    nacc = acc[:p1] + tuple(a + x for a, x in zip(acc[p1:], dvec[d]))
                    if any(a > c for a, c in zip(nacc, caps)):
                        continue
                    nhu = model.advance(hu, model.increments(e, v, d, piv, bv))
                    if not model.history_alive(nhu, piu):
                        continue
                    nhv = model.advance(hv, model.increments(e, u, d, piu, bu))
                    if not model.history_alive(nhv, piv):
                        continue
                    ns = list(s)
                    ns[pu] = (nhu, piu, bu)
                    ns[pv] = (nhv, piv, bv)
                    key = (tuple(ns), nacc)
                    table[key] = table.get(key, 0) + cnt
        elif kind == FORGET:
            child = tables.pop(node.children[0])
            cbag = bags.pop(node.children[0])
            pos = cbag.index(node.vertex)
            bag = cbag[:pos] + cbag[pos + 1:]
            table = {}
            for (s, acc), cnt in child.items():
                h, pi, _ = s[pos]
                if model.good(h, pi):
                    key = (s[:pos] + s[pos + 1:], acc)
                    table[key] = table.get(key, 0) + cnt
        elif kind == JOIN:
            left = tables.pop(node.children[0])
            right = tables.pop(node.children[1])
            bag = bags.pop(node.children[0])
            bags.pop(node.children[1])
            groups = defaultdict(list)
            for (s, acc), cnt in right.items():
                groups[tuple((pi, b) for _, pi, b in s)].append((s, acc, cnt))
            table = {}
            for (s1, acc1), c1 in left.items():
                proj = tuple((pi, b) for _, pi, b in s1)
                partners = groups.get(proj)
                if not partners:
                    continue
                xi = [0] * p1
                for _, _, b in s1:
                    for i in range(p1):
                        xi[i] += b >> i & 1
                xi += [0] * q1
                for s2, acc2, c2 in partners:
                    nacc = tuple(a + b - c for a, b, c in zip(acc1, acc2, xi))
                    if any(a > c for a, c in zip(nacc, caps)):
                        continue
                    ns = []
                    for (h1, pi, b), (h2, _, _) in zip(s1, s2):
                        h = model.combine(h1, h2)
                        if not model.history_alive(h, pi):
                            break
                        ns.append((h, pi, b))
                    else:
                        key = (tuple(ns), nacc)
                        table[key] = table.get(key, 0) + c1 * c2
        else:
            raise EngineError(f"unknown node kind {kind!r}")
        tables[idx] = table
        bags[idx] = bag
        if profile is not None:
            profile.append({"node": idx, "kind": kind, "bag": len(bag), "states": len(table)})

    root = tables[nice.root]
    out: dict[tuple[int, ...], int] = defaultdict(int)
    for (s, acc), cnt in root.items():
        out[acc] += cnt
    return dict(out)


def count_solutions(instance: Instance, nice: NiceDecomposition, spec: ProblemSpec,
                    profile: list | None = None) -> int:
    """Exact number of assignments satisfying constraint and matrix."""
    if spec.has_connectivity:
        raise EngineError("connectivity constraints need the randomized decision engine")
    check_binding(instance, spec)
    branches = enumerate_branches(instance, spec)
    if not branches:
        return 0
    targets = {br.x + br.y for br in branches}
    caps = tuple(max(col) for col in zip(*targets)) if spec.p1 + spec.q1 else ()
    table = count_table(instance, nice, spec, caps, profile)
    return sum(cnt for acc, cnt in table.items() if acc in targets)
