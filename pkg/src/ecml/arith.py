"""Quantifier-free integer arithmetic used for the side condition of a problem."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np


class ArithError(ValueError):
    pass


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class IntConst(Expr):
    value: int


@dataclass(frozen=True)
class BoolConst(Expr):
    value: bool


@dataclass(frozen=True)
class Param(Expr):
    name: str


@dataclass(frozen=True)
class Card(Expr):
    """``|name|``; the names ``V`` and ``E`` denote the graph's vertex and edge sets."""

    name: str


@dataclass(frozen=True)
class CC(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # + - *
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Compare(Expr):
    op: str  # = != <= < >= >
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Logical(Expr):
    op: str  # and or
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Negation(Expr):
    operand: Expr


INT_NODES = (IntConst, Param, Card, CC, Neg, BinOp)
BOOL_NODES = (BoolConst, Compare, Logical, Negation)


def env_key(node: Expr) -> str:
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Card):
        return f"|{node.name}|"
    if isinstance(node, CC):
        return f"cc({node.name})"
    raise ArithError(f"{node!r} is not a variable")


def subexprs(e: Expr) -> Iterator[Expr]:
    yield e
    for attr in ("operand", "left", "right"):
        c = getattr(e, attr, None)
        if c is not None:
            yield from subexprs(c)


def variables(e: Expr) -> set[str]:
    return {env_key(x) for x in subexprs(e) if isinstance(x, (Param, Card, CC))}


def conjoin(parts: list[Expr]) -> Expr:
    if not parts:
        return BoolConst(True)
    out = parts[0]
    for p in parts[1:]:
        out = Logical("and", out, p)
    return out


_CMP = {
    "=": np.equal, "!=": np.not_equal, "<=": np.less_equal,
    "<": np.less, ">=": np.greater_equal, ">": np.greater,
}


def evaluate(e: Expr, env: Mapping[str, object]):
    """Evaluate ``e``; values in ``env`` may be ints or integer numpy arrays."""
    t = type(e)
    if t is IntConst or t is BoolConst:
        return e.value
    if t in (Param, Card, CC):
        key = env_key(e)
        try:
            return env[key]
        except KeyError:
            raise ArithError(f"unbound variable {key}") from None
    if t is Neg:
        return -evaluate(e.operand, env)
    if t is BinOp:
        a, b = evaluate(e.left, env), evaluate(e.right, env)
        return a + b if e.op == "+" else a - b if e.op == "-" else a * b
    if t is Compare:
        return _CMP[e.op](evaluate(e.left, env), evaluate(e.right, env))
    if t is Logical:
        a, b = evaluate(e.left, env), evaluate(e.right, env)
        return np.logical_and(a, b) if e.op == "and" else np.logical_or(a, b)
    if t is Negation:
        return np.logical_not(evaluate(e.operand, env))
    raise ArithError(f"unknown expression node {e!r}")


def eval_arith(e: Expr, env: Mapping[str, int]) -> bool:
    return bool(evaluate(e, env))


def is_boolean(e: Expr) -> bool:
    return isinstance(e, BOOL_NODES)


def typecheck(e: Expr) -> None:
    """Reject mixing of integer and boolean subterms."""
    if isinstance(e, (Neg,)):
        _need_int(e.operand)
    elif isinstance(e, (BinOp, Compare)):
        _need_int(e.left)
        _need_int(e.right)
    elif isinstance(e, Logical):
        _need_bool(e.left)
        _need_bool(e.right)
    elif isinstance(e, Negation):
        _need_bool(e.operand)
    for attr in ("operand", "left", "right"):
        c = getattr(e, attr, None)
        if c is not None:
            typecheck(c)


def _need_int(e):
    if not isinstance(e, INT_NODES):
        raise ArithError(f"expected an integer term, got {format_expr(e)}")


def _need_bool(e):
    if not isinstance(e, BOOL_NODES):
        raise ArithError(f"expected a condition, got {format_expr(e)}")


def _summands(e: Expr, sign: int = 1):
    if isinstance(e, BinOp) and e.op in "+-":
        yield from _summands(e.left, sign)
        yield from _summands(e.right, sign if e.op == "+" else -sign)
    elif isinstance(e, Neg):
        yield from _summands(e.operand, -sign)
    else:
        yield sign, e


def check_monotone(e: Expr, quantified: set[str]) -> None:
    """Require every ``cc(Q)`` of a quantified ``Q`` to sit where shrinking it
    can only help: as a positive summand on the small side of ``<=``/``<``
    (or the big side of ``>=``/``>``), in an atom reached only through
    ``and``/``or``, whose other side mentions no quantified ``cc``.
    """

    def has_qcc(x):
        return any(isinstance(s, CC) and s.name in quantified for s in subexprs(x))

    def visit(x, positive):
        if isinstance(x, Logical):
            visit(x.left, positive)
            visit(x.right, positive)
            return
        if not has_qcc(x):
            return
        if not positive or not isinstance(x, Compare):
            raise ArithError(f"connectivity term in a non-monotone position: {format_expr(x)}")
        if x.op in ("<=", "<"):
            small, big = x.left, x.right
        elif x.op in (">=", ">"):
            small, big = x.right, x.left
        else:
            raise ArithError(f"connectivity term compared with {x.op!r}: {format_expr(x)}")
        if has_qcc(big):
            raise ArithError(f"connectivity term on the wrong side: {format_expr(x)}")
        for sign, term in _summands(small):
            if has_qcc(term) and not (sign > 0 and isinstance(term, CC)):
                raise ArithError(f"connectivity term must be a plain added summand: {format_expr(x)}")

    visit(e, True)


# ------------------------------------------------------------------- printing

_PREC = {"or": 1, "and": 2, "not": 3, "cmp": 4, "+": 5, "-": 5, "*": 6, "neg": 7}


def _prec(e: Expr) -> int:
    if isinstance(e, Logical):
        return _PREC[e.op]
    if isinstance(e, Negation):
        return _PREC["not"]
    if isinstance(e, Compare):
        return _PREC["cmp"]
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _PREC["neg"]
    return 9


def format_expr(e: Expr) -> str:
    def wrap(x, need):
        s = format_expr(x)
        return f"({s})" if _prec(x) < need else s

    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Param):
        return e.name
    if isinstance(e, Card):
        return f"|{e.name}|"
    if isinstance(e, CC):
        return f"cc({e.name})"
    if isinstance(e, Neg):
        return "-" + wrap(e.operand, _PREC["neg"] + 1)
    if isinstance(e, Negation):
        return "not " + wrap(e.operand, _PREC["not"])
    if isinstance(e, Compare):
        p = _PREC["cmp"] + 1
        return f"{wrap(e.left, p)} {e.op} {wrap(e.right, p)}"
    p = _prec(e)
    return f"{wrap(e.left, p)} {e.op} {wrap(e.right, p + 1)}"
