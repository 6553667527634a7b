"""Randomized decision for problems with connectivity constraints (Cut&Count).

For every quantified set whose component count appears in the constraint,
solutions are counted together with a consistent cut of the set and a set of
markers that must lie on side 1.  Candidates with an unmarked component come
in pairs and cancel modulo 2, so an odd count at some total weight ``W``
certifies a solution; random weights isolate a minimum-weight solution with
probability at least one half.

The state structure depends only on the instance, so it is built once and
then evaluated for each weight draw.  A polynomial over GF(2) in ``W`` is
stored as a python int, bit ``W`` holding the parity at total weight ``W``.
"""
from __future__ import annotations

import itertools
import json
import math
import os
from collections import defaultdict
from dataclasses import asdict, dataclass

import numpy as np

from .decomposition import FORGET, INTRODUCE, INTRODUCE_EDGE, JOIN, LEAF, NiceDecomposition
from .dp import BranchAssignment, LocalModel, enumerate_branches
from .dsl import ProblemSpec
from .graph import Instance
from .oracle import check_binding

RNG_NAME = "numpy.PCG64"
DEFAULT_TARGET_ERROR = 2.0 ** -20


# ------------------------------------------------------------------ weights


def universe_size(instance: Instance, spec: ProblemSpec) -> int:
    g = instance.graph
    return g.n * 3 ** spec.p1 + g.m * 3 ** spec.q1


@dataclass(frozen=True)
class WeightAssignment:
    """Weights of the universe ``(V x {0,1,2}^p1) u (E x {0,1,2}^q1)``.

    Vertex ``v`` with type vector ``chi`` sits at index ``v*3^p1 + sum chi_i 3^i``;
    edges follow all vertices.
    """

    values: tuple[int, ...]
    N: int
    n: int
    p1: int
    q1: int

    def vertex_index(self, v: int, chi) -> int:
        return v * 3 ** self.p1 + sum(c * 3 ** i for i, c in enumerate(chi))

    def edge_index(self, e: int, chi) -> int:
        return self.n * 3 ** self.p1 + e * 3 ** self.q1 + sum(c * 3 ** j for j, c in enumerate(chi))

    def vertex(self, v: int, chi) -> int:
        return self.values[self.vertex_index(v, chi)]

    def edge(self, e: int, chi) -> int:
        return self.values[self.edge_index(e, chi)]


def draw_weights(instance: Instance, spec: ProblemSpec, rng: np.random.Generator) -> WeightAssignment:
    size = universe_size(instance, spec)
    N = 2 * size
    values = tuple(rng.integers(1, N + 1, size=size).tolist()) if size else ()
    return WeightAssignment(values, N, instance.graph.n, spec.p1, spec.q1)


def draw_weight_batch(instance: Instance, spec: ProblemSpec, rng: np.random.Generator,
                      count: int) -> list[WeightAssignment]:
    """``count`` independent draws from one generator call."""
    size = universe_size(instance, spec)
    N = 2 * size
    n, p1, q1 = instance.graph.n, spec.p1, spec.q1
    if not size:
        return [WeightAssignment((), N, n, p1, q1) for _ in range(count)]
    rows = rng.integers(1, N + 1, size=(count, size)).tolist()
    return [WeightAssignment(tuple(r), N, n, p1, q1) for r in rows]


def sample_weights(instance: Instance, spec: ProblemSpec, seed: int) -> WeightAssignment:
    """Uniform i.i.d. weights in ``1..N`` with ``N = 2|U|`` from a seeded PCG64 stream."""
    return draw_weights(instance, spec, np.random.default_rng(seed))


# -------------------------------------------------------------- structure


def clmul(a: int, b: int) -> int:
    """Carry-less product: multiplication of GF(2) polynomials."""
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _merge_side(a: int, b: int) -> int | None:
    if a == 0 or a == b:
        return b
    if b == 0:
        return a
    return None


class CutCountStructure:
    """Compiled transition structure of the dynamic program for fixed caps.

    Vertex information is ``(h, pi, b, e)``: history, prediction, a side per
    quantified vertex set (0 = absent, 1 or 2 = cut side; sets without a
    component bound only use 0/1) and a side per quantified edge set (0 = no
    incident chosen edge yet).  Accumulators are the cardinalities of the
    quantified vertex sets, the edge sets, and the marker counts of the
    component-bounded vertex and edge sets.
    """

    def __init__(self, instance: Instance, nice: NiceDecomposition, spec: ProblemSpec,
                 caps: tuple[int, ...]):
        self.instance = instance
        self.spec = spec
        g = instance.graph
        model = LocalModel(instance, spec)
        p1, q1 = spec.p1, spec.q1
        xcut = [x in spec.cc_sets for x in spec.vertex_sets]
        ycut = [y in spec.cc_sets for y in spec.edge_sets]
        xflag = [i for i in range(p1) if xcut[i]]
        yflag = [j for j in range(q1) if ycut[j]]
        self.acc_layout = (p1, q1, len(xflag), len(yflag))
        self.caps = caps
        na = p1 + q1 + len(xflag) + len(yflag)
        zero_acc = (0,) * na
        tau_pos = list(range(p1))
        sigma_pos = list(range(p1, p1 + q1))
        nu_pos = {i: p1 + q1 + r for r, i in enumerate(xflag)}
        mu_pos = {j: p1 + q1 + len(xflag) + r for r, j in enumerate(yflag)}
        zero_e = (0,) * q1
        w = WeightAssignment((), 0, g.n, p1, q1)  # only for index arithmetic

        def within(acc):
            return all(a <= c for a, c in zip(acc, caps))

        # per-vertex introduce options
        def vertex_options(v):
            out = []
            for pi, bmask in model.pairs(v):
                choices = []
                for i in range(p1):
                    if not bmask >> i & 1:
                        choices.append((0,))
                    else:
                        choices.append((1, 2) if xcut[i] else (1,))
                for sides in itertools.product(*choices):
                    add = [0] * na
                    for i in range(p1):
                        add[tau_pos[i]] = 1 if sides[i] else 0
                    out.append(((model.h0, pi, sides, zero_e), tuple(add), bmask))
            return out

        def bmask_of(sides):
            return sum(1 << i for i, s in enumerate(sides) if s)

        program = []  # per node: (kind, children, n_out, transitions)
        keys_of: dict[int, dict] = {}
        bags: dict[int, tuple[int, ...]] = {}
        for idx, node in enumerate(nice.nodes):
            kind = node.kind
            out: dict = {}
            trans = []

            def put(key, *rest):
                t = out.get(key)
                if t is None:
                    t = out[key] = len(out)
                trans.append((t,) + rest)

            if kind == LEAF:
                out[((), zero_acc)] = 0
                bag = ()
            elif kind == INTRODUCE:
                child = keys_of.pop(node.children[0])
                cbag = bags.pop(node.children[0])
                v = node.vertex
                bag = tuple(sorted(cbag + (v,)))
                pos = bag.index(v)
                opts = vertex_options(v)
                for (s, acc), src in child.items():
                    for info, add, _ in opts:
                        nacc = tuple(a + b for a, b in zip(acc, add))
                        if within(nacc):
                            put((s[:pos] + (info,) + s[pos:], nacc), src, -1)
            elif kind == INTRODUCE_EDGE:
                child = keys_of.pop(node.children[0])
                bag = bags.pop(node.children[0])
                e = node.edge
                u, v = g.edges[e]
                pu, pv = bag.index(u), bag.index(v)
                for (s, acc), src in child.items():
                    hu, piu, bu, eu = s[pu]
                    hv, piv, bv, ev = s[pv]
                    if any(bu[i] and bv[i] and bu[i] != bv[i] for i in xflag):
                        continue
                    mu_, mv_ = bmask_of(bu), bmask_of(bv)
                    for d in range(1 << q1):
                        # per edge set: list of (new side, marker bit)
                        per_set = []
                        for j in range(q1):
                            if not d >> j & 1:
                                per_set.append(((None, 0),))
                            elif not ycut[j]:
                                per_set.append(((0, 0),))
                            else:
                                opts = []
                                for c in (1, 2):
                                    if eu[j] in (0, c) and ev[j] in (0, c):
                                        opts.append((c, 0))
                                        if c == 1:
                                            opts.append((1, 1))
                                per_set.append(tuple(opts))
                        if any(not o for o in per_set):
                            continue
                        nhu = model.advance(hu, model.increments(e, v, d, piv, mv_))
                        if not model.history_alive(nhu, piu):
                            continue
                        nhv = model.advance(hv, model.increments(e, u, d, piu, mu_))
                        if not model.history_alive(nhv, piv):
                            continue
                        for combo in itertools.product(*per_set):
                            nacc = list(acc)
                            neu, nev = list(eu), list(ev)
                            chi = []
                            for j, (c, mk) in enumerate(combo):
                                dj = d >> j & 1
                                chi.append(dj + mk)
                                if dj:
                                    nacc[sigma_pos[j]] += 1
                                    if ycut[j]:
                                        neu[j] = nev[j] = c
                                        nacc[mu_pos[j]] += mk
                            nacc = tuple(nacc)
                            if not within(nacc):
                                continue
                            ns = list(s)
                            ns[pu] = (nhu, piu, bu, tuple(neu))
                            ns[pv] = (nhv, piv, bv, tuple(nev))
                            put((tuple(ns), nacc), src, w.edge_index(e, chi))
            elif kind == FORGET:
                child = keys_of.pop(node.children[0])
                cbag = bags.pop(node.children[0])
                v = node.vertex
                pos = cbag.index(v)
                bag = cbag[:pos] + cbag[pos + 1:]
                for (s, acc), src in child.items():
                    h, pi, b, _ = s[pos]
                    if not model.good(h, pi):
                        continue
                    ns = s[:pos] + s[pos + 1:]
                    markable = [i for i in xflag if b[i] == 1]
                    for mk in itertools.product((0, 1), repeat=len(markable)):
                        nacc = list(acc)
                        chi = [1 if x else 0 for x in b]
                        for i, bit in zip(markable, mk):
                            if bit:
                                nacc[nu_pos[i]] += 1
                                chi[i] = 2
                        nacc = tuple(nacc)
                        if within(nacc):
                            put((ns, nacc), src, w.vertex_index(v, chi))
            elif kind == JOIN:
                left = keys_of.pop(node.children[0])
                right = keys_of.pop(node.children[1])
                bag = bags.pop(node.children[0])
                bags.pop(node.children[1])
                groups = defaultdict(list)
                for (s, acc), src in right.items():
                    groups[tuple((pi, b) for _, pi, b, _ in s)].append((s, acc, src))
                for (s1, acc1), a in left.items():
                    partners = groups.get(tuple((pi, b) for _, pi, b, _ in s1))
                    if not partners:
                        continue
                    xi = [0] * na
                    for _, _, b, _ in s1:
                        for i in range(p1):
                            xi[tau_pos[i]] += 1 if b[i] else 0
                    for s2, acc2, bsrc in partners:
                        nacc = tuple(x + y - z for x, y, z in zip(acc1, acc2, xi))
                        if not within(nacc):
                            continue
                        ns = []
                        for (h1, pi, b, e1), (h2, _, _, e2) in zip(s1, s2):
                            h = model.combine(h1, h2)
                            if not model.history_alive(h, pi):
                                break
                            merged = tuple(_merge_side(x, y) for x, y in zip(e1, e2))
                            if None in merged:
                                break
                            ns.append((h, pi, b, merged))
                        else:
                            put((tuple(ns), nacc), a, bsrc)
            else:
                raise ValueError(f"unknown node kind {kind!r}")
            keys_of[idx] = out
            bags[idx] = bag
            program.append((kind, node.children, len(out), trans))
        self.program = program
        self.root = nice.root
        self.root_keys = {acc: i for (s, acc), i in keys_of[nice.root].items()}
        self.states = sum(p[2] for p in program)
        self.transitions = sum(len(p[3]) for p in program)

    def restrict(self, keys) -> None:
        """Drop every state and transition that cannot contribute to the root
        entries ``keys`` and renumber the survivors densely."""
        needed = {self.root: {self.root_keys[acc] for acc in keys}}
        kept = [None] * len(self.program)
        for idx in range(len(self.program) - 1, -1, -1):
            kind, kids, _, trans = self.program[idx]
            want = needed.pop(idx, set())
            trans = [tr for tr in trans if tr[0] in want]
            kept[idx] = trans
            if kind == JOIN:
                needed[kids[0]] = {tr[1] for tr in trans}
                needed[kids[1]] = {tr[2] for tr in trans}
            elif kind != LEAF:
                needed[kids[0]] = {tr[1] for tr in trans}
        remap: dict[int, dict[int, int]] = {}
        program = []
        for idx, (kind, kids, n_out, _) in enumerate(self.program):
            trans = kept[idx]
            if kind == LEAF:
                ids = {0: 0}
            else:
                ids = {t: i for i, t in enumerate(sorted({tr[0] for tr in trans}))}
            if kind == JOIN:
                ra, rb = remap.pop(kids[0]), remap.pop(kids[1])
                trans = [(ids[t], ra[a], rb[b]) for t, a, b in trans]
            elif kind != LEAF:
                rc = remap.pop(kids[0])
                trans = [(ids[t], rc[src], uid) for t, src, uid in trans]
            remap[idx] = ids
            program.append((kind, kids, len(ids), trans))
        root_ids = remap[self.root]
        self.program = program
        self.root_keys = {acc: root_ids[self.root_keys[acc]] for acc in keys
                          if self.root_keys[acc] in root_ids}
        self.states = sum(p[2] for p in program)
        self.transitions = sum(len(p[3]) for p in program)

    def evaluate(self, weights: WeightAssignment) -> dict[tuple[int, ...], int]:
        """Parity polynomial in ``W`` for every accumulator vector at the root."""
        wv = weights.values
        vals: dict[int, list[int]] = {}
        for idx, (kind, kids, n_out, trans) in enumerate(self.program):
            if kind == LEAF:
                vals[idx] = [1]
                continue
            new = [0] * n_out
            if kind == JOIN:
                a_vals = vals.pop(kids[0])
                b_vals = vals.pop(kids[1])
                for t, a, b in trans:
                    x, y = a_vals[a], b_vals[b]
                    if x and y:
                        new[t] ^= clmul(x, y)
            else:
                old = vals.pop(kids[0])
                for t, src, uid in trans:
                    x = old[src]
                    if x:
                        new[t] ^= x << wv[uid] if uid >= 0 else x
            vals[idx] = new
        root = vals[self.root]
        return {acc: root[i] for acc, i in self.root_keys.items()}


# ---------------------------------------------------------------- decisions


def _branch_caps(spec: ProblemSpec, branches) -> tuple[int, ...]:
    cols = []
    for br in branches:
        row = list(br.x) + list(br.y)
        row += [c for x, c in zip(spec.vertex_sets, br.cx) if x in spec.cc_sets]
        row += [c for y, c in zip(spec.edge_sets, br.cy) if y in spec.cc_sets]
        cols.append(row)
    return tuple(max(c) for c in zip(*cols)) if cols and cols[0] else ()


def _branch_keys(spec: ProblemSpec, structure: CutCountStructure, br: BranchAssignment) -> list[int]:
    """Root entries whose marker counts fit the branch's component bounds."""
    target = br.x + br.y
    bounds = [c for x, c in zip(spec.vertex_sets, br.cx) if x in spec.cc_sets]
    bounds += [c for y, c in zip(spec.edge_sets, br.cy) if y in spec.cc_sets]
    k = len(target)
    return [acc for acc in structure.root_keys
            if acc[:k] == target and all(a <= b for a, b in zip(acc[k:], bounds))]


def mod2_object_count(instance: Instance, nice: NiceDecomposition, spec: ProblemSpec,
                      branch: BranchAssignment, weights: WeightAssignment) -> dict[int, int]:
    """Weights ``W`` at which the number of (candidate, cuts, markers) objects
    of ``branch`` is odd, as a map ``W -> 1`` (even weights are omitted)."""
    check_binding(instance, spec)
    structure = CutCountStructure(instance, nice, spec, _branch_caps(spec, [branch]))
    keys = _branch_keys(spec, structure, branch)
    structure.restrict(keys)
    root = structure.evaluate(weights)
    poly = 0
    for acc in keys:
        poly ^= root.get(acc, 0)
    return {W: 1 for W in range(poly.bit_length()) if poly >> W & 1}


@dataclass
class DecisionResult:
    answer: bool
    seed: int
    branches: int
    repetitions: int
    planned_repetitions: int
    witness: dict | None = None
    rng: str = RNG_NAME

    def to_json(self) -> str:
        d = asdict(self)
        d["answer"] = "yes" if self.answer else "no"
        d["odd_W_witness"] = d.pop("witness")
        return json.dumps(d, sort_keys=True)


class Decider:
    """Branches and compiled structure for one instance; reusable across seeds."""

    def __init__(self, instance: Instance, nice: NiceDecomposition, spec: ProblemSpec):
        check_binding(instance, spec)
        self.instance = instance
        self.spec = spec
        self.branches = enumerate_branches(instance, spec)
        self.structure = None
        self.live: list[tuple[BranchAssignment, list]] = []
        if self.branches:
            self.structure = CutCountStructure(instance, nice, spec, _branch_caps(spec, self.branches))
            for br in self.branches:
                keys = _branch_keys(spec, self.structure, br)
                if keys:
                    self.live.append((br, keys))
            self.structure.restrict({acc for _, keys in self.live for acc in keys})

    def schedule(self, target_error: float) -> tuple[int, int]:
        """``(repetitions per round, rounds)``."""
        K = len(self.branches)
        per_round = max(1, math.ceil(math.log2(2 * K))) if K else 0
        rounds = max(1, math.ceil(math.log2(1.0 / target_error)))
        return per_round, rounds

    def trial(self, weights: WeightAssignment) -> dict | None:
        root = self.structure.evaluate(weights)
        for br, keys in self.live:
            poly = 0
            for acc in keys:
                poly ^= root.get(acc, 0)
            if poly:
                W = (poly & -poly).bit_length() - 1
                return {"branch": asdict(br), "W": W}
        return None

    def decide(self, seed: int = 0, target_error: float = DEFAULT_TARGET_ERROR,
               workers: int = 1) -> DecisionResult:
        if not 0 < target_error < 1:
            raise ValueError("target error must lie strictly between 0 and 1")
        per_round, rounds = self.schedule(target_error)
        planned = per_round * rounds
        K = len(self.branches)
        if not self.live:
            # no candidate object exists in any branch: every parity is zero
            return DecisionResult(False, seed, K, 0, planned)
        rng = np.random.default_rng(seed)
        draws = draw_weight_batch(self.instance, self.spec, rng, planned)
        if workers > 1 and planned > 1:
            return self._decide_parallel(draws, seed, K, planned, workers)
        for rep, weights in enumerate(draws):
            hit = self.trial(weights)
            if hit:
                return DecisionResult(True, seed, K, rep + 1, planned, hit)
        return DecisionResult(False, seed, K, planned, planned)

    def _decide_parallel(self, draws, seed, K, planned, workers):
        import multiprocessing as mp

        global _ACTIVE
        _ACTIVE = self
        ctx = mp.get_context("fork")
        with ctx.Pool(workers) as pool:
            for start in range(0, planned, workers):
                batch = list(range(start, min(planned, start + workers)))
                hits = pool.map(_trial_worker, [(i, draws[i]) for i in batch])
                for i, hit in zip(batch, hits):
                    if hit:
                        return DecisionResult(True, seed, K, i + 1, planned, hit)
        return DecisionResult(False, seed, K, planned, planned)


_ACTIVE: Decider | None = None


def _trial_worker(args):
    _, weights = args
    return _ACTIVE.trial(weights)


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def decide(instance: Instance, nice: NiceDecomposition, spec: ProblemSpec, seed: int = 0,
           target_error: float = DEFAULT_TARGET_ERROR, workers: int = 1) -> DecisionResult:
    """One-sided Monte Carlo decision: YES answers are always correct."""
    return Decider(instance, nice, spec).decide(seed, target_error, workers)
