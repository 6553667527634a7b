"""Reduction from 3CNF-SAT to short-cycle vertex deletion.

Given a 3CNF formula over ``n`` variables with ``m`` clauses and a cycle
length ``l >= 5``, :func:`generate` builds a graph ``G`` and budget
``k = n + 2m`` such that the formula is satisfiable exactly when deleting
``k`` vertices can destroy every cycle of length ``l`` (and, equivalently,
every cycle of length at most ``l``).  Alongside comes a path decomposition
whose bags each hold the shared vertex pool ``P = A ∪ B`` plus one gadget,
so its width grows like ``sqrt(n)``.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

from .decomposition import TreeDecomposition, path_decomposition, validate_decomposition
from .graph import Graph
from .oracle import BudgetExceeded

DEFAULT_BUDGET = 10 ** 7


class HardnessError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n < 1:
            raise HardnessError("a formula needs at least one variable")
        for i, c in enumerate(clauses):
            if len(c) != 3:
                raise HardnessError(f"clause {i + 1} has {len(c)} literals, expected 3")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise HardnessError(f"clause {i + 1}: literal {lit} out of range")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any(assignment[abs(x) - 1] == (x > 0) for x in c) for c in self.clauses)

    def satisfiable(self) -> bool:
        return any(self.satisfied_by(a) for a in itertools.product((False, True), repeat=self.n))


def parse_dimacs(text: str) -> CnfFormula:
    """Read DIMACS CNF.  Clauses shorter than three literals are padded by
    repeating their literals; longer clauses are rejected."""
    header = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] in ("c", "%"):
            continue
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "cnf":
                raise HardnessError(f"line {lineno}: malformed problem line")
            try:
                header = (int(tok[2]), int(tok[3]))
            except ValueError:
                raise HardnessError(f"line {lineno}: malformed problem line") from None
            continue
        if header is None:
            raise HardnessError(f"line {lineno}: clause before 'p cnf' line")
        for t in tok:
            try:
                lit = int(t)
            except ValueError:
                raise HardnessError(f"line {lineno}: bad literal {t!r}") from None
            if lit == 0:
                if not current:
                    raise HardnessError(f"line {lineno}: empty clause")
                if len(current) > 3:
                    raise HardnessError(f"line {lineno}: clause with more than 3 literals")
                while len(current) < 3:
                    current.append(current[0])
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if header is None:
        raise HardnessError("missing 'p cnf' line")
    if current:
        raise HardnessError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise HardnessError(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def format_dimacs(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.n} {cnf.m}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def path_lengths(l: int) -> tuple[int, int]:
    """``(alpha, beta)`` with ``alpha + beta = l``, ``alpha < beta``, ``2*beta > l``."""
    if l < 5:
        raise HardnessError("cycle length l must be at least 5")
    return (l - 1) // 2, (l + 2) // 2


def gadget_constant(l: int) -> int:
    """Most vertices a gadget adds outside ``P`` (a clause gadget)."""
    a, b = path_lengths(l)
    return 3 * (b - 1) + 3 * (a - 1) + 3 * (b - 1)


def width_bound(n: int, l: int) -> int:
    return 2 * _ceil_sqrt(2 * n) + gadget_constant(l) - 1


def _ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def literal_index(lit: int) -> int:
    return 2 * (abs(lit) - 1) + (lit < 0)


@dataclass
class HardInstance:
    graph: Graph
    k: int
    l: int
    alpha: int
    beta: int
    decomposition: TreeDecomposition
    A: tuple[int, ...]
    B: tuple[int, ...]
    placement: dict[int, tuple[int, int]]
    t: dict[int, int]
    s: dict[tuple[int, int], int]
    gadgets: list[dict] = field(default_factory=list)

    def metadata(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "alpha": self.alpha,
            "beta": self.beta,
            "vertices": self.graph.n,
            "edges": self.graph.m,
            "width": self.decomposition.width,
            "A": list(self.A),
            "B": list(self.B),
            "placement": {str(lit): list(uv) for lit, uv in sorted(self.placement.items())},
            "t": {str(lit): v for lit, v in sorted(self.t.items())},
            "s": [{"clause": c, "position": pos, "vertex": v} for (c, pos), v in sorted(self.s.items())],
            "gadgets": self.gadgets,
        }

    def to_json(self) -> str:
        return json.dumps(self.metadata(), indent=2, sort_keys=True)


def generate(cnf: CnfFormula, l: int) -> HardInstance:
    alpha, beta = path_lengths(l)
    side = _ceil_sqrt(2 * cnf.n)
    A = tuple(range(side))
    B = tuple(range(side, 2 * side))
    P = set(A) | set(B)
    edges: list[tuple[int, int]] = []
    counter = [2 * side]

    def path(a, b, length):
        inner = list(range(counter[0], counter[0] + length - 1))
        counter[0] += length - 1
        seq = [a] + inner + [b]
        edges.extend(zip(seq, seq[1:]))
        return inner

    def place(lit):
        i = literal_index(lit)
        return A[i // side], B[i % side]

    placement, t, s = {}, {}, {}
    gadgets, bags = [], []
    for x in range(1, cnf.n + 1):
        start = counter[0]
        paths = {}
        for lit in (x, -x):
            u, v = placement[lit] = place(lit)
            inner = path(u, v, alpha)
            t[lit] = inner[0]
            paths[f"{lit}:u-v"] = inner
        paths["t-t:alpha"] = path(t[x], t[-x], alpha)
        paths["t-t:beta"] = path(t[x], t[-x], beta)
        own = set(range(start, counter[0]))
        gadgets.append({"kind": "variable", "variable": x, "paths": paths})
        bags.append(P | own)
    for ci, clause in enumerate(cnf.clauses):
        start = counter[0]
        paths, svs = {}, []
        for pos, lit in enumerate(clause):
            u, v = place(lit)
            inner = path(u, v, beta)
            s[(ci, pos)] = inner[0]
            svs.append(inner[0])
            paths[f"r{pos + 1}:u-v"] = inner
        for i, j in ((0, 1), (1, 2), (2, 0)):
            paths[f"s{i + 1}-s{j + 1}:alpha"] = path(svs[i], svs[j], alpha)
            paths[f"s{i + 1}-s{j + 1}:beta"] = path(svs[i], svs[j], beta)
        own = set(range(start, counter[0]))
        gadgets.append({"kind": "clause", "clause": ci, "literals": list(clause), "paths": paths})
        bags.append(P | own)
    if not bags:
        bags.append(P)
    graph = Graph(counter[0], tuple(edges))
    return HardInstance(graph, cnf.n + 2 * cnf.m, l, alpha, beta, path_decomposition(bags),
                        A, B, placement, t, s, gadgets)


# ------------------------------------------------------------- exact deletion


def short_cycles(graph: Graph, max_len: int, exact: bool = False) -> list[frozenset[int]]:
    """Vertex sets of the simple cycles of length ``<= max_len`` (or ``== max_len``)."""
    adj = [sorted(graph.neighbours(v)) for v in range(graph.n)]
    found = []

    def dfs(start, path, on_path):
        v = path[-1]
        for w in adj[v]:
            if w == start and len(path) >= 3 and path[1] < path[-1]:
                if not exact or len(path) == max_len:
                    found.append(frozenset(path))
            elif w > start and w not in on_path and len(path) < max_len:
                on_path.add(w)
                path.append(w)
                dfs(start, path, on_path)
                path.pop()
                on_path.discard(w)

    for s in range(graph.n):
        dfs(s, [s], {s})
    return found


def min_hitting_set_at_most(cycles: list[frozenset[int]], k: int, budget: int = DEFAULT_BUDGET):
    """A set of ``<= k`` vertices meeting every cycle, or ``None``.

    Exact branch and bound: vertices whose cycle sets are dominated by another
    vertex's are discarded, and a greedy packing of disjoint cycles gives a
    lower bound.
    """
    cycles = list(set(cycles))
    steps = [0]

    def solve(cyc, k):
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(f"hitting-set search exceeded {budget} steps")
        if not cyc:
            return []
        if k <= 0:
            return None
        cover: dict[int, set[int]] = {}
        for i, c in enumerate(cyc):
            for v in c:
                cover.setdefault(v, set()).add(i)
        # disjoint packing lower bound
        used, packed = set(), 0
        for c in sorted(cyc, key=len):
            if not c & used:
                used |= c
                packed += 1
        if packed > k:
            return None
        keep = []
        for v, cv in sorted(cover.items(), key=lambda kv: (-len(kv[1]), kv[0])):
            if not any(cv <= cover[w] for w in keep):
                keep.append(v)
        keep = set(keep)
        target = min(cyc, key=lambda c: (len(c & keep), sorted(c)))
        for v in sorted(target & keep, key=lambda v: -len(cover[v])):
            rest = [c for c in cyc if v not in c]
            sub = solve(rest, k - 1)
            if sub is not None:
                return [v] + sub
        return None

    return solve(cycles, k)


def deletion_answer(graph: Graph, k: int, l: int, girth: bool = False, budget: int = DEFAULT_BUDGET):
    """Decide C_l deletion (``girth=False``) or girth > l deletion; returns
    ``(answer, witness)``."""
    cycles = short_cycles(graph, l, exact=not girth)
    sol = min_hitting_set_at_most(cycles, k, budget)
    return sol is not None, sol


@dataclass(frozen=True)
class EquivalenceReport:
    satisfiable: bool
    cl_deletion: bool
    girth_deletion: bool
    width: int
    width_bound: int
    decomposition_valid: bool

    @property
    def ok(self) -> bool:
        return (self.satisfiable == self.cl_deletion
                and (not self.satisfiable or self.girth_deletion)
                and self.decomposition_valid and self.width <= self.width_bound)


def check_equivalence(inst: HardInstance, cnf: CnfFormula, budget: int = DEFAULT_BUDGET) -> EquivalenceReport:
    sat = cnf.satisfiable()
    cl, _ = deletion_answer(inst.graph, inst.k, inst.l, girth=False, budget=budget)
    gd, _ = deletion_answer(inst.graph, inst.k, inst.l, girth=True, budget=budget)
    report = validate_decomposition(inst.graph, inst.decomposition)
    return EquivalenceReport(sat, cl, gd, inst.decomposition.width, width_bound(cnf.n, inst.l), report.valid)
