"""Exhaustive ground truth: enumerate every assignment of the quantified sets.

Assignments are numbered in binary-counter order: bit ``i*n + v`` says vertex
``v`` is in the i-th quantified vertex set, bit ``p1*n + j*m + e`` says edge
``e`` is in the j-th quantified edge set.  Batches of assignments are
evaluated at once with numpy.
"""
from __future__ import annotations

from typing import Iterator

import numpy as np

from . import arith as A
from .dsl import ProblemSpec
from .formula import Evaluator
from .graph import Graph, Instance, connected_components

DEFAULT_BUDGET = 2 ** 24
CHUNK = 2 ** 14


class BudgetExceeded(RuntimeError):
    pass


def check_binding(instance: Instance, spec: ProblemSpec) -> None:
    if instance.graph.directed != spec.directed:
        kind = "directed" if spec.directed else "undirected"
        raise ValueError(f"problem {spec.name!r} expects a {kind} graph")
    for name in spec.fixed_vertex_sets:
        if name not in instance.fixed_vertex_sets:
            raise ValueError(f"fixed vertex set {name} is not bound")
    for name in spec.fixed_edge_sets:
        if name not in instance.fixed_edge_sets:
            raise ValueError(f"fixed edge set {name} is not bound")
    for name in spec.params:
        if name not in instance.params:
            raise ValueError(f"parameter {name} is not bound")


def constant_env(instance: Instance, spec: ProblemSpec) -> dict[str, int]:
    """Values of everything in the constraint that does not depend on the guess."""
    g = instance.graph
    env = {"|V|": g.n, "|E|": g.m}
    env.update(instance.params)
    for name in spec.fixed_vertex_sets:
        s = instance.fixed_vertex_sets[name]
        env[f"|{name}|"] = len(s)
        env[f"cc({name})"] = connected_components(g, s)
    for name in spec.fixed_edge_sets:
        s = instance.fixed_edge_sets[name]
        env[f"|{name}|"] = len(s)
        env[f"cc({name})"] = connected_components(g, s, edges=True)
    return env


def cc_vertex_batch(graph: Graph, member: np.ndarray) -> np.ndarray:
    """Components of ``G[X]`` for each row of a boolean ``(batch, n)`` array."""
    n = graph.n
    big = n + 1
    ids = np.arange(n)
    lab = np.where(member, ids, big)
    if graph.m:
        us = np.array([u for u, _ in graph.edges])
        vs = np.array([v for _, v in graph.edges])
        both = member[:, us] & member[:, vs]
        while True:
            m = np.minimum(lab[:, us], lab[:, vs])
            new = lab.copy()
            np.minimum.at(new, (slice(None), us), np.where(both, m, big))
            np.minimum.at(new, (slice(None), vs), np.where(both, m, big))
            if np.array_equal(new, lab):
                break
            lab = new
    return (member & (lab == ids)).sum(axis=1)


def cc_edge_batch(graph: Graph, member: np.ndarray) -> np.ndarray:
    """Components of ``(V(Y), Y)`` for each row of a boolean ``(batch, m)`` array."""
    n, batch = graph.n, member.shape[0]
    if graph.m == 0:
        return np.zeros(batch, dtype=np.int64)
    us = np.array([u for u, _ in graph.edges])
    vs = np.array([v for _, v in graph.edges])
    touched = np.zeros((batch, n), dtype=bool)
    for e in range(graph.m):
        touched[:, us[e]] |= member[:, e]
        touched[:, vs[e]] |= member[:, e]
    big = n + 1
    ids = np.arange(n)
    lab = np.where(touched, ids, big)
    while True:
        m = np.minimum(lab[:, us], lab[:, vs])
        new = lab.copy()
        np.minimum.at(new, (slice(None), us), np.where(member, m, big))
        np.minimum.at(new, (slice(None), vs), np.where(member, m, big))
        if np.array_equal(new, lab):
            break
        lab = new
    return (touched & (lab == ids)).sum(axis=1)


def _space(instance: Instance, spec: ProblemSpec) -> int:
    return spec.p1 * instance.graph.n + spec.q1 * instance.graph.m


def _batches(nbits: int) -> Iterator[np.ndarray]:
    total = 1 << nbits
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        yield ((idx[:, None] >> np.arange(nbits, dtype=np.int64)) & 1).astype(bool)


def _satisfied(instance: Instance, spec: ProblemSpec, bits: np.ndarray, env0) -> np.ndarray:
    """Boolean mask of the rows of ``bits`` that satisfy constraint and matrix."""
    g = instance.graph
    n, m = g.n, g.m
    batch = bits.shape[0]
    vcols = {x: bits[:, i * n:(i + 1) * n] for i, x in enumerate(spec.vertex_sets)}
    off = spec.p1 * n
    ecols = {y: bits[:, off + j * m: off + (j + 1) * m] for j, y in enumerate(spec.edge_sets)}

    env = dict(env0)
    used = A.variables(spec.constraint)
    for x, cols in vcols.items():
        env[f"|{x}|"] = cols.sum(axis=1)
        if f"cc({x})" in used:
            env[f"cc({x})"] = cc_vertex_batch(g, cols)
    for y, cols in ecols.items():
        env[f"|{y}|"] = cols.sum(axis=1)
        if f"cc({y})" in used:
            env[f"cc({y})"] = cc_edge_batch(g, cols)
    ok = np.broadcast_to(np.asarray(A.evaluate(spec.constraint, env), dtype=bool), (batch,)).copy()
    if not ok.any():
        return ok

    def vm(name, v):
        if name in vcols:
            return vcols[name][:, v]
        return v in instance.fixed_vertex_sets[name]

    def em(name, e):
        if name in ecols:
            return ecols[name][:, e]
        return e in instance.fixed_edge_sets[name]

    ev = Evaluator(g, vm, em)
    for v in range(n):
        ok &= np.broadcast_to(np.asarray(ev(spec.matrix, v), dtype=bool), (batch,))
        if not ok.any():
            break
    return ok


def iter_solutions(instance: Instance, spec: ProblemSpec, budget: int = DEFAULT_BUDGET):
    """Yield every satisfying assignment as a dict ``name -> frozenset``."""
    check_binding(instance, spec)
    nbits = _space(instance, spec)
    if (1 << nbits) > budget:
        raise BudgetExceeded(f"2^{nbits} assignments exceed the budget of {budget}")
    env0 = constant_env(instance, spec)
    n, m = instance.graph.n, instance.graph.m
    for bits in _batches(nbits):
        for row in bits[_satisfied(instance, spec, bits, env0)]:
            out = {}
            for i, x in enumerate(spec.vertex_sets):
                out[x] = frozenset(np.flatnonzero(row[i * n:(i + 1) * n]).tolist())
            off = spec.p1 * n
            for j, y in enumerate(spec.edge_sets):
                out[y] = frozenset(np.flatnonzero(row[off + j * m: off + (j + 1) * m]).tolist())
            yield out


def brute_force_count(instance: Instance, spec: ProblemSpec, budget: int = DEFAULT_BUDGET) -> int:
    check_binding(instance, spec)
    nbits = _space(instance, spec)
    if (1 << nbits) > budget:
        raise BudgetExceeded(f"2^{nbits} assignments exceed the budget of {budget}")
    env0 = constant_env(instance, spec)
    return int(sum(int(_satisfied(instance, spec, bits, env0).sum()) for bits in _batches(nbits)))


def brute_force_decide(instance: Instance, spec: ProblemSpec, budget: int = DEFAULT_BUDGET) -> bool:
    check_binding(instance, spec)
    nbits = _space(instance, spec)
    if (1 << nbits) > budget:
        raise BudgetExceeded(f"2^{nbits} assignments exceed the budget of {budget}")
    env0 = constant_env(instance, spec)
    return any(_satisfied(instance, spec, bits, env0).any() for bits in _batches(nbits))
