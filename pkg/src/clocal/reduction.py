"""One-round color reductions from polynomial set systems over prime fields.

Color ``x < q**(d+1)`` is read as the polynomial ``P_x`` over GF(q) whose
coefficients are the base-q digits of x. Two distinct polynomials of
degree ≤ d agree on at most d points, so when ``q > Δ·d`` a vertex always
finds a point ``a`` where its polynomial differs from all ≤ Δ neighbors'.
The new color ``a·q + P_x(a)`` lies in a palette of size q².
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from sympy import integer_nthroot, nextprime

from .errors import ConstructionError

EXACT_BITS = 20000


@dataclass(frozen=True)
class Palette:
    """Palette size, kept exact unless it is astronomically large."""

    exact: int | None
    log2: float

    @classmethod
    def of(cls, c: int) -> "Palette":
        if c < 1:
            raise ConstructionError(f"palette must be positive, got {c}")
        return cls(c, math.log2(c))

    @classmethod
    def power(cls, base: int, exp: int) -> "Palette":
        bits = exp * math.log2(base)
        if bits <= EXACT_BITS:
            return cls.of(base**exp)
        return cls(None, bits)

    def root_ceil(self, k: int) -> int:
        """Smallest integer q with q**k ≥ palette (an upper bound if inexact)."""
        if self.exact is not None:
            root, is_exact = integer_nthroot(self.exact, k)
            return int(root) + (0 if is_exact else 1)
        e = (self.log2 + 1) / k  # one spare bit absorbs float error
        return math.ceil(2.0**e) if e < 1000 else 1 << math.ceil(e)

    def exceeds(self, c: int) -> bool:
        """True if this palette is certainly larger than ``c``."""
        if self.exact is not None:
            return self.exact > c
        return math.log2(c) < self.log2 - 1

    def __int__(self):
        if self.exact is None:
            raise OverflowError("palette too large to materialize")
        return self.exact

    def __str__(self):
        return str(self.exact) if self.exact is not None else f"2^{self.log2:.1f}"


@dataclass(frozen=True)
class Reduction:
    q: int
    d: int
    delta: int

    @property
    def palette_out(self) -> int:
        return self.q * self.q

    def _coeffs(self, x: int) -> tuple[int, ...]:
        out = _digits(self.q, x)
        if len(out) > self.d + 1:
            raise ConstructionError(f"color exceeds q^(d+1) for q={self.q}, d={self.d}")
        return out

    def apply(self, own: int, others) -> int:
        """New color (0-based) of a vertex with color ``own`` and neighbor colors ``others``."""
        others = frozenset(others)
        if own in others:
            raise ConstructionError("prior coloring is not proper")
        return self._apply(own, others)

    # pure in (q, d, own, others), so sharing results between queries is safe
    @lru_cache(maxsize=1 << 18)
    def _apply(self, own: int, others: frozenset) -> int:
        q = self.q
        mine = self._coeffs(own)
        theirs = [self._coeffs(c) for c in others]
        for a in range(q):
            val = _eval(mine, a, q)
            if all(_eval(t, a, q) != val for t in theirs):
                return a * q + val
        raise ConstructionError(
            f"no free evaluation point for q={self.q}, d={self.d}, {len(theirs)} neighbors"
        )


@lru_cache(maxsize=1 << 16)
def _digits(q: int, x: int) -> tuple[int, ...]:
    out = []
    while x:
        x, r = divmod(x, q)
        out.append(r)
    return tuple(out)


def _eval(coeffs, a: int, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * a + c) % q
    return acc


def _prime_for(palette: Palette, delta: int, d: int) -> int:
    return int(nextprime(max(delta * d, palette.root_ceil(d + 1) - 1)))


def plan(palette: Palette, delta: int, degree: int | None = None) -> Reduction | None:
    """Best one-round reduction for this palette, or None if none shrinks it.

    With ``degree`` given the polynomial degree is fixed; otherwise the
    degree minimizing the output palette is chosen.
    """
    if delta < 0:
        raise ConstructionError(f"negative degree bound {delta}")
    delta = max(delta, 1)
    if degree is not None:
        if degree < 1:
            raise ConstructionError(f"polynomial degree must be ≥ 1, got {degree}")
        cands = [degree]
    else:
        # smallest d with delta*d + 1 >= root; the optimum is next to it
        lo, hi = 1, max(2, math.ceil(palette.log2) + 2)
        while lo < hi:
            mid = (lo + hi) // 2
            if delta * mid + 1 >= palette.root_ceil(mid + 1):
                hi = mid
            else:
                lo = mid + 1
        cands = [d for d in range(lo - 3, lo + 4) if d >= 1]
    best = None
    for d in cands:
        q = _prime_for(palette, delta, d)
        if best is None or q < best.q:
            best = Reduction(q, d, delta)
    if best is None or not palette.exceeds(best.palette_out):
        return None
    return best


@lru_cache(maxsize=1024)
def plan_cached(palette: Palette, delta: int, degree: int | None = None) -> Reduction | None:
    return plan(palette, delta, degree)
