"""Ultimately periodic subsets of the naturals and their finite monoids.

A set is stored as ``(N, k, bits)``: ``n`` belongs to it iff ``bits[n]`` for
``n < N + k`` and ``bits[N + (n - N) % k]`` otherwise.  The associated monoid
has carrier ``{0, ..., N+k-1}`` with identity 0; its elements are plain ints.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class UPSetError(ValueError):
    pass


@dataclass(frozen=True)
class UPSet:
    N: int
    k: int
    bits: tuple[bool, ...]

    def __post_init__(self):
        if self.N < 0:
            raise UPSetError("threshold must be nonnegative")
        if self.k < 1:
            raise UPSetError("period must be positive")
        bits = tuple(bool(b) for b in self.bits)
        if len(bits) != self.N + self.k:
            raise UPSetError(f"expected {self.N + self.k} membership bits, got {len(bits)}")
        object.__setattr__(self, "bits", bits)

    @property
    def size(self) -> int:
        """Carrier size ``N + k``."""
        return self.N + self.k

    def __contains__(self, n: int) -> bool:
        return self.bits[hom(self, n)]

    def __str__(self) -> str:
        return format_upset(self)


def hom(s: UPSet, n: int) -> int:
    if n < 0:
        raise UPSetError("hom is defined on nonnegative integers")
    if n < s.N + s.k:
        return n
    return s.N + (n - s.N) % s.k


def _check(s: UPSet, a: int) -> None:
    if not (isinstance(a, int) and 0 <= a < s.N + s.k):
        raise UPSetError(f"{a!r} is not an element of the monoid of {s}")


def madd(s: UPSet, a: int, b: int) -> int:
    _check(s, a)
    _check(s, b)
    c = a + b
    if c < s.N + s.k:
        return c
    return s.N + (c - s.N) % s.k


def accepts(s: UPSet, e: int) -> bool:
    _check(s, e)
    return s.bits[e]


def canonicalize(s: UPSet) -> UPSet:
    def member(n):
        return s.bits[hom(s, n)]

    k = next(d for d in range(1, s.k + 1)
             if s.k % d == 0 and all(member(n) == member(n + d) for n in range(s.N, s.N + s.k)))
    N = s.N
    while N > 0 and member(N - 1) == member(N - 1 + k):
        N -= 1
    return UPSet(N, k, tuple(member(n) for n in range(N + k)))


def finite(values) -> UPSet:
    values = set(values)
    if any(v < 0 for v in values):
        raise UPSetError("members must be nonnegative")
    N = max(values) + 1 if values else 0
    return canonicalize(UPSet(N, 1, tuple(n in values for n in range(N + 1))))


_UP = re.compile(r"up\(\s*(\d+)\s*,\s*(-?\d+)\s*;\s*([01]*)\s*\)")


def upset_parse(text: str) -> UPSet:
    """Parse ``{a,b}``, ``>=n``, ``<=n``, ``==n``, ``even``, ``odd`` or ``up(N,k;bits)``."""
    t = text.strip()
    try:
        if t.startswith("{") and t.endswith("}"):
            inner = t[1:-1].strip()
            return finite(int(x) for x in inner.split(",")) if inner else finite(())
        if t.startswith(">="):
            n = int(t[2:])
            return canonicalize(UPSet(n, 1, (False,) * n + (True,)))
        if t.startswith("<="):
            n = int(t[2:])
            return finite(range(n + 1))
        if t.startswith("=="):
            return finite([int(t[2:])])
        if t == "even":
            return UPSet(0, 2, (True, False))
        if t == "odd":
            return UPSet(0, 2, (False, True))
        m = _UP.fullmatch(t)
        if m:
            N, k, bits = int(m[1]), int(m[2]), m[3]
            if k < 1:
                raise UPSetError("period must be positive in up(...)")
            return canonicalize(UPSet(N, k, tuple(c == "1" for c in bits)))
    except UPSetError:
        raise
    except ValueError:
        pass
    raise UPSetError(f"cannot parse set {text!r}")


def format_upset(s: UPSet) -> str:
    """Shortest surface form that parses back to ``s``."""
    if s == UPSet(0, 2, (True, False)):
        return "even"
    if s == UPSet(0, 2, (False, True)):
        return "odd"
    if s.k == 1 and not s.bits[-1]:
        return "{" + ",".join(str(n) for n in range(s.N) if s.bits[n]) + "}"
    if s.k == 1 and all(not b for b in s.bits[:-1]):
        return f">={s.N}"
    return f"up({s.N},{s.k};{''.join('1' if b else '0' for b in s.bits)})"


AT_LEAST_ONE = upset_parse(">=1")
