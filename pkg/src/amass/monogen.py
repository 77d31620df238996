"""Monic forms f(x) = x^n + a_1 x^(n-1) + ... + a_n: actions, height, enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Optional, Sequence

from .algebra import IntPoly, count_real_roots, poly_disc


@dataclass(frozen=True)
class MonicForm:
    n: int
    a: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if len(a) != self.n:
            raise ValueError("need exactly n coefficients a_1..a_n")
        object.__setattr__(self, "a", a)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "MonicForm":
        """From the full list 1, a_1, ..., a_n (leading coefficient first)."""
        coeffs = [int(c) for c in coeffs]
        if not coeffs or coeffs[0] != 1:
            raise ValueError("leading coefficient must be 1")
        return cls(len(coeffs) - 1, tuple(coeffs[1:]))

    @property
    def coeffs(self) -> tuple:
        return (1,) + self.a

    @property
    def low(self) -> list:
        return list(reversed(self.coeffs))

    def poly(self) -> IntPoly:
        return IntPoly(self.coeffs)

    def disc(self) -> int:
        return poly_disc(self.poly())

    def trace(self) -> int:
        return -self.a[0] if self.n else 0

    def __str__(self):
        return str(self.poly())


def as_monic(f) -> MonicForm:
    if isinstance(f, MonicForm):
        return f
    if isinstance(f, IntPoly):
        return MonicForm.from_coeffs(f.coeffs)
    return MonicForm.from_coeffs(list(f))


def parse_poly(text: str) -> MonicForm:
    """Parse the CLI encoding "1,0,0,0,1" (leading coefficient first)."""
    parts = [s.strip() for s in text.split(",")]
    vals = []
    for pos, s in enumerate(parts):
        try:
            vals.append(int(s))
        except ValueError:
            raise ValueError(f"bad integer {s!r} at position {pos}") from None
    if not vals or vals[0] != 1:
        raise ValueError("position 0: leading coefficient must be 1")
    return MonicForm.from_coeffs(vals)


@dataclass(frozen=True)
class CanonicalClass:
    rep: MonicForm
    chosen_sign: int


def translate_action(f: MonicForm, m: int) -> MonicForm:
    """Coefficients of f(x + m)."""
    n = f.n
    c = f.coeffs
    out = [0] * (n + 1)
    # c[i] multiplies x^(n-i); expand (x+m)^(n-i)
    for i, ci in enumerate(c):
        if ci == 0:
            continue
        d = n - i
        for k in range(d + 1):
            out[n - k] += ci * comb(d, k) * m ** (d - k)
    return MonicForm(n, tuple(out[1:]))


def sign_action(f: MonicForm) -> MonicForm:
    """alpha -> -alpha: a_i -> (-1)^i a_i."""
    return MonicForm(f.n, tuple(x if i % 2 == 0 else -x
                                for i, x in enumerate(f.a, start=1)))


def _trace_normalize(f: MonicForm) -> MonicForm:
    m = f.trace() // f.n
    return translate_action(f, m)


def canonicalize(f) -> CanonicalClass:
    f = as_monic(f)
    plus = _trace_normalize(f)
    minus = _trace_normalize(sign_action(f))
    if minus.a < plus.a:
        return CanonicalClass(minus, -1)
    return CanonicalClass(plus, 1)


def _as_fraction(X) -> Fraction:
    X = Fraction(X)
    if X <= 0:
        raise ValueError("X must be positive")
    return X


def height_leq(f, X) -> bool:
    """H(f) <= X, i.e. |a_i| <= X^i for every i, in exact arithmetic."""
    f = as_monic(f)
    X = _as_fraction(X)
    num, den = X.numerator, X.denominator
    return all(abs(a) * den ** i <= num ** i for i, a in enumerate(f.a, start=1))


def coefficient_bounds(n: int, X) -> list:
    X = _as_fraction(X)
    return [X.numerator ** i // X.denominator ** i for i in range(1, n + 1)]


def signature(f) -> tuple:
    f = as_monic(f)
    if f.disc() == 0:
        raise ValueError("signature needs a squarefree polynomial")
    r1 = count_real_roots(f.poly())
    return r1, (f.n - r1) // 2


def is_degenerate(f) -> bool:
    return as_monic(f).disc() == 0


def enumerate_monic(n: int, X, canonical_only: bool = False,
                    signature_filter: Optional[tuple] = None,
                    dedup_sign: bool = False,
                    box: Optional[Sequence[tuple]] = None) -> Iterator[MonicForm]:
    """Every monic f of degree n with H(f) <= X, in lexicographic order.

    canonical_only keeps 0 <= -a_1 < n; dedup_sign additionally keeps only
    forms that are their own canonical representative.  ``box`` restricts
    a_i to [lo_i, hi_i] so callers can partition the search.
    """
    if n % 2 or n < 2:
        raise ValueError("n must be even and at least 2")
    bounds = coefficient_bounds(n, X)
    ranges = []
    for i, b in enumerate(bounds):
        lo, hi = -b, b
        if i == 0 and (canonical_only or dedup_sign):
            lo, hi = max(lo, -(n - 1)), min(hi, 0)
        if box is not None:
            lo, hi = max(lo, box[i][0]), min(hi, box[i][1])
        ranges.append(range(lo, hi + 1))
    for a in itertools.product(*ranges):
        f = MonicForm(n, a)
        if dedup_sign and canonicalize(f).rep != f:
            continue
        if signature_filter is not None:
            if f.disc() == 0 or signature(f) != tuple(signature_filter):
                continue
        yield f


def enumeration_count(n: int, X) -> int:
    """Closed form prod (2 floor(X^i) + 1) for the unfiltered enumeration."""
    out = 1
    for b in coefficient_bounds(n, X):
        out *= 2 * b + 1
    return out
