"""Built-in problem catalogue, written in the problem description language."""
from __future__ import annotations

import re

from .dsl import ProblemSpec, parse_problem

CATALOGUE: dict[str, str] = {
    "vertex-cover": """
problem "vertex-cover"
param k
exists vertexset X
require |X| <= k
formula: !X -> box(X)
""",
    "steiner-tree": """
problem "steiner-tree"
param k
fixed vertexset T
exists vertexset X
require cc(X) <= 1 and |X| <= k + |T|
formula: T -> X
""",
    "feedback-vertex-set": """
problem "feedback-vertex-set"
param k
exists vertexset X
exists vertexset Z
exists edgeset Y
require cc(Y) + |Y| + |Z| + |X| <= |V| and |X| <= k
formula: (Z <-> (!X & box(X))) & (X -> box(!Y)) & (!X -> box(!X -> Y))
""",
    "connected-vertex-cover": """
problem "connected-vertex-cover"
param k
exists vertexset X
require cc(X) <= 1 and |X| <= k
formula: !X -> box(X)
""",
    "connected-dominating-set": """
problem "connected-dominating-set"
param k
exists vertexset X
require cc(X) <= 1 and |X| <= k
formula: !X -> diamond(X)
""",
    "connected-feedback-vertex-set": """
problem "connected-feedback-vertex-set"
param k
exists vertexset X
exists vertexset Z
exists edgeset Y
require cc(Y) + |Y| + |Z| + |X| <= |V| and cc(X) <= 1 and |X| <= k
formula: (Z <-> (!X & box(X))) & (X -> box(!Y)) & (!X -> box(!X -> Y))
""",
    "connected-odd-cycle-transversal": """
problem "connected-odd-cycle-transversal"
param k
exists vertexset X
exists vertexset L
exists vertexset R
require cc(X) <= 1 and |X| <= k
formula: (L | R | X) & !(L & R) & !(R & X) & !(X & L)
  & (L -> box(R | X)) & (R -> box(L | X))
""",
    "min-cycle-cover-undirected": """
problem "min-cycle-cover-undirected"
param k
exists edgeset Y
require cc(Y) <= k
formula: diamond[{2}](Y)
""",
    "min-cycle-cover-directed": """
problem "min-cycle-cover-directed"
graph directed
param k
exists edgeset Y
require cc(Y) <= k
formula: diamond[{1}](Y & up) & diamond[{1}](Y & down)
""",
    "longest-path-undirected": """
problem "longest-path-undirected"
param k
exists vertexset A
exists edgeset Y
require cc(Y) <= 1 and |A| = 2 and |Y| >= k
formula: (A -> diamond[{1}](Y)) & (!A -> diamond[{0,2}](Y))
""",
    "longest-path-directed": """
problem "longest-path-directed"
graph directed
param k
exists vertexset A
exists vertexset B
exists edgeset Y
require cc(Y) <= 1 and |A| = 1 and |B| = 1 and |Y| >= k
formula: (A -> (!B & diamond[{1}](Y) & diamond[{1}](Y & down)))
  & (B -> (!A & diamond[{1}](Y) & diamond[{1}](Y & up)))
  & ((!A & !B) -> (!diamond(Y) | (diamond[{1}](Y & down) & diamond[{1}](Y & up))))
""",
    "longest-cycle-undirected": """
problem "longest-cycle-undirected"
param k
exists edgeset Y
require cc(Y) <= 1 and |Y| >= k
formula: diamond[{0,2}](Y)
""",
    "longest-cycle-directed": """
problem "longest-cycle-directed"
graph directed
param k
exists edgeset Y
require cc(Y) <= 1 and |Y| >= k
formula: !diamond(Y) | (diamond[{1}](Y & down) & diamond[{1}](Y & up))
""",
    "exact-k-leaf-spanning-tree": """
problem "exact-k-leaf-spanning-tree"
param k
exists vertexset L
exists edgeset T
require cc(T) <= 1 and |L| = k and |T| = |V| - 1
formula: diamond(T) & (L <-> diamond[{1}](T))
""",
    "exact-k-leaf-outbranching": """
problem "exact-k-leaf-outbranching"
graph directed
param k
fixed vertexset R
exists vertexset L
exists edgeset T
require cc(T) <= 1 and |L| = k and |T| = |V| - 1 and |R| = 1
formula: diamond(T) & (R -> !diamond(T & up)) & (!R -> diamond[{1}](T & up))
  & (L <-> !diamond(T & down))
""",
    "max-full-degree-spanning-tree": """
problem "max-full-degree-spanning-tree"
param k
exists vertexset F
exists edgeset T
require cc(T) <= 1 and |F| >= k and |T| = |V| - 1
formula: diamond(T) & (F <-> box(T))
""",
    "graph-metric-tsp": """
problem "graph-metric-tsp"
param k
exists edgeset Y
exists edgeset Y1
exists edgeset Y2
require cc(Y) <= 1 and |Y1| + 2 * |Y2| <= k
formula: box(Y <-> (Y1 | Y2)) & box(!Y1 | !Y2) & diamond(Y) & diamond[even](Y1)
""",
}

NAMES = ("vertex-cover", "r-dominating-set") + tuple(n for n in CATALOGUE if n != "vertex-cover")

# fixed sets each problem expects in its bindings
FIXED = {"steiner-tree": ("T",), "exact-k-leaf-outbranching": ("R",)}


def dominating_set_text(r: int) -> str:
    body = "X"
    for _ in range(r):
        body = f"X | diamond({body})"
    return f"""
problem "r-dominating-set({r})"
param k
exists vertexset X
require |X| <= k
formula: {body}
"""


def make_problem(name: str, r: int | None = None) -> ProblemSpec:
    """Catalogue entry by name; ``r-dominating-set`` takes ``r`` either as an
    argument or in the name, as in ``r-dominating-set(2)``."""
    m = re.fullmatch(r"r-dominating-set(?:\((-?\d+)\))?", name)
    if m:
        if m[1] is not None:
            r = int(m[1])
        if r is None:
            raise ValueError("r-dominating-set needs a radius r")
        if r < 1:
            raise ValueError("the radius r must be at least 1")
        return parse_problem(dominating_set_text(r))
    try:
        return parse_problem(CATALOGUE[name])
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; known: {', '.join(NAMES)}") from None
