"""Counting modal logic: syntax tree, box elimination and reference semantics.

``Diamond(S, b)`` holds at ``v`` when the number of incident edges ``e = vw``
such that ``b`` holds at ``w`` reached through ``e`` lies in ``S``.  Inside a
modality ``EdgeSet`` atoms test the edge used to reach the current vertex,
``ArcDown`` holds when that arc points at the current vertex and ``ArcUp``
when it points back at the vertex we came from.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

import numpy as np

from .graph import Graph, Instance
from .upset import AT_LEAST_ONE, UPSet, hom


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class VertexSet(Formula):
    name: str


@dataclass(frozen=True)
class EdgeSet(Formula):
    name: str


@dataclass(frozen=True)
class ArcDown(Formula):
    pass


@dataclass(frozen=True)
class ArcUp(Formula):
    pass


@dataclass(frozen=True)
class Diamond(Formula):
    S: UPSet
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    S: UPSet
    body: Formula


@dataclass(frozen=True)
class Pred(Formula):
    """Stands for the i-th modal subformula; its value is read from a prediction."""

    index: int


@dataclass(frozen=True)
class Const(Formula):
    value: bool


BINARY = (And, Or, Implies, Iff)
MODAL = (Diamond, Box)
EDGE_ATOMS = (EdgeSet, ArcDown, ArcUp)


class FormulaError(ValueError):
    pass


def diamond(body: Formula, S: UPSet = AT_LEAST_ONE) -> Diamond:
    return Diamond(S, body)


def box(body: Formula, S: UPSet = AT_LEAST_ONE) -> Box:
    return Box(S, body)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, (Not, Diamond, Box)):
        return (f.body,)
    return ()


def walk(f: Formula, depth: int = 0) -> Iterator[tuple[Formula, int]]:
    """Yield ``(subformula, modal depth)`` pairs, pre-order."""
    yield f, depth
    inner = depth + 1 if isinstance(f, MODAL) else depth
    for c in children(f):
        yield from walk(c, inner)


def modal_depth(f: Formula) -> int:
    return max(d + isinstance(g, MODAL) for g, d in walk(f))


def eliminate_boxes(f: Formula) -> Formula:
    if isinstance(f, Box):
        return Not(Diamond(f.S, Not(eliminate_boxes(f.body))))
    if isinstance(f, Diamond):
        return Diamond(f.S, eliminate_boxes(f.body))
    if isinstance(f, Not):
        return Not(eliminate_boxes(f.body))
    if isinstance(f, BINARY):
        return type(f)(eliminate_boxes(f.left), eliminate_boxes(f.right))
    return f


# ------------------------------------------------------------------- semantics


def in_set(S: UPSet, count):
    """Membership test that accepts a python int or an integer numpy array."""
    if isinstance(count, np.ndarray):
        idx = np.where(count < S.N + S.k, count, S.N + (count - S.N) % S.k)
        return np.asarray(S.bits, dtype=bool)[idx]
    return S.bits[hom(S, int(count))]


class Evaluator:
    """Generic evaluator over scalar booleans or numpy boolean batches.

    ``vertex_member(name, v)`` and ``edge_member(name, e)`` return the
    membership of a vertex or edge in a named set, either as a bool or as a
    boolean array (one entry per assignment in a batch).  ``pred(i, v)``
    supplies values for ``Pred`` atoms when present.
    """

    def __init__(self, graph: Graph, vertex_member: Callable, edge_member: Callable,
                 pred: Callable | None = None):
        self.graph = graph
        self.vertex_member = vertex_member
        self.edge_member = edge_member
        self.pred = pred
        self._memo: dict = {}

    def __call__(self, f: Formula, v: int, via: int | None = None):
        return self._eval(f, v, via)

    def _eval(self, f, v, via):
        t = type(f)
        if t is VertexSet:
            return self.vertex_member(f.name, v)
        if t is Not:
            return np.logical_not(self._eval(f.body, v, via))
        if t is And:
            return np.logical_and(self._eval(f.left, v, via), self._eval(f.right, v, via))
        if t is Or:
            return np.logical_or(self._eval(f.left, v, via), self._eval(f.right, v, via))
        if t is Implies:
            return np.logical_or(np.logical_not(self._eval(f.left, v, via)), self._eval(f.right, v, via))
        if t is Iff:
            return np.equal(self._eval(f.left, v, via), self._eval(f.right, v, via))
        if t is Const:
            return f.value
        if t is Pred:
            if self.pred is None:
                raise FormulaError("prediction atom outside the dynamic program")
            return self.pred(f.index, v)
        if t in EDGE_ATOMS:
            if via is None:
                raise FormulaError(f"{t.__name__} needs the edge used to reach the vertex")
            if t is EdgeSet:
                return self.edge_member(f.name, via)
            if not self.graph.directed:
                raise FormulaError("arc operators need a directed graph")
            tail, head = self.graph.edges[via]
            return head == v if t is ArcDown else tail == v
        if t is Diamond or t is Box:
            key = (id(f), v)
            hit = self._memo.get(key)
            if hit is not None:
                return hit
            count = 0
            for e, w in self.graph.incident(v):
                val = self._eval(f.body, w, e)
                if t is Box:
                    val = np.logical_not(val)
                count = count + (val.astype(np.int64) if isinstance(val, np.ndarray) else int(val))
            res = in_set(f.S, count)
            if t is Box:
                res = np.logical_not(res)
            self._memo[key] = res
            return res
        raise FormulaError(f"unknown formula node {f!r}")


def eval_cml(instance: Instance, assignment: Mapping[str, frozenset[int] | set[int]], v: int,
             f: Formula, via: int | None = None) -> bool:
    """Reference semantics of ``f`` at vertex ``v`` (reached through ``via``).

    ``assignment`` maps quantified set names to sets of vertex or edge ids;
    fixed sets are taken from ``instance``.
    """
    g = instance.graph
    if via is not None and v not in g.edges[via]:
        raise FormulaError(f"edge {via} is not incident to vertex {v}")

    def vm(name, x):
        s = assignment.get(name)
        if s is None:
            s = instance.fixed_vertex_sets.get(name)
        if s is None:
            raise FormulaError(f"unbound vertex set {name}")
        return x in s

    def em(name, e):
        s = assignment.get(name)
        if s is None:
            s = instance.fixed_edge_sets.get(name)
        if s is None:
            raise FormulaError(f"unbound edge set {name}")
        return e in s

    return bool(Evaluator(g, vm, em)(f, v, via))


def eval_everywhere(instance: Instance, assignment, f: Formula) -> bool:
    """``True`` iff ``f`` holds at every vertex."""
    return all(eval_cml(instance, assignment, v, f) for v in range(instance.graph.n))
