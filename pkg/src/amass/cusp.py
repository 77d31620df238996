"""Exponent bookkeeping for cutting off the cusp in Siegel coordinates.

Everything here is exact rational arithmetic on exponent vectors; the
constants c and C of the Siegel domain are never evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator


@dataclass(frozen=True)
class Weight:
    t: tuple        # exponents of t_1..t_m
    s: tuple        # exponents of s_1..s_m

    def __mul__(self, other):
        return Weight(tuple(a + b for a, b in zip(self.t, other.t)),
                      tuple(a + b for a, b in zip(self.s, other.s)))

    def inverse(self):
        return Weight(tuple(-a for a in self.t), tuple(-a for a in self.s))


def _check(n, m):
    if n < 2 or n % 2:
        raise ValueError("n must be even and at least 2")
    if not 0 < m <= n // 2:
        raise ValueError("need 0 < m <= n/2")


def t_to_s(a, n, m):
    """Rewrite prod t_i^{a_i} in the simple-root coordinates s_1..s_m."""
    a = [Fraction(x) for x in a]
    if 2 * m < n or m == 1:
        # t_i = s_i s_{i+1} ... s_m
        out, acc = [], Fraction(0)
        for i in range(m):
            acc += a[i]
            out.append(acc)
        return tuple(out)
    # m = n/2: t_m^2 = s_m / s_{m-1}, t_{m-1}^2 = s_{m-1} s_m
    out, acc = [], Fraction(0)
    for i in range(m - 2):
        acc += a[i]
        out.append(acc)
    head = acc + a[m - 2]
    out.append(head / 2 - a[m - 1] / 2)
    out.append(head / 2 + a[m - 1] / 2)
    return tuple(out)


def _c(i, n, m):
    v = [0] * m
    if i <= m:
        v[i - 1] = -1
    elif i > n - m:
        v[n - i] = 1
    return v


def coordinate_weight(i: int, j: int, n: int, m: int) -> Weight:
    """Scaling of b_ij under diag(t_1^-1, ..., t_m^-1, 1, ..., 1, t_m, ..., t_1)."""
    _check(n, m)
    if not 1 <= i <= j <= n:
        raise ValueError(f"index ({i}, {j}) out of range for n={n}")
    t = tuple(Fraction(a + b) for a, b in zip(_c(i, n, m), _c(j, n, m)))
    return Weight(t, t_to_s(t, n, m))


def haar_weight(n: int, m: int) -> Weight:
    """e^{-2 rho} = prod t_i^{2i-n}."""
    _check(n, m)
    t = tuple(Fraction(2 * i - n) for i in range(1, m + 1))
    return Weight(t, t_to_s(t, n, m))


def haar_s_closed_form(n: int, m: int) -> tuple:
    """The displayed s-exponents of e^{-2 rho}, used as a cross-check."""
    if 2 * m < n or m == 1:
        return tuple(Fraction(i * (i + 1 - n)) for i in range(1, m + 1))
    head = [Fraction(i * (i + 1 - n)) for i in range(1, m - 1)]
    tail = Fraction(-n * (n - 2), 8)
    return tuple(head + [tail, tail])


def s_bounds(n: int, m: int) -> tuple:
    """X-exponent of the upper bound of each s_i: 1, or 2 for s_m in the split case."""
    return tuple(2 if (2 * m == n and i == m and m > 1) else 1 for i in range(1, m + 1))


@dataclass(frozen=True)
class CoordinateSet:
    n: int
    m: int
    members: frozenset

    @property
    def dim_f0(self) -> int:
        return self.n - 2 * self.m

    def __len__(self):
        return len(self.members)

    def sorted(self):
        return sorted(self.members)


def u0(n: int, m: int) -> list:
    _check(n, m)
    return [(i, j) for i in range(1, m + 1) for j in range(i, n) if i + j <= n - 1]


def all_coordinates(n: int) -> list:
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def is_closed(S, n, m) -> bool:
    U = set(u0(n, m))
    for (a, b) in S:
        for (i, j) in U:
            if i <= a and j <= b and (i, j) not in S:
                return False
    return True


def enumerate_closed_subsets(n: int, m: int, budget: int = 10 ** 6) -> Iterator[CoordinateSet]:
    """Left- and up-closed subsets of U_0: the empty set, then those containing b_11."""
    _check(n, m)
    rows = {}
    for (i, j) in u0(n, m):
        rows.setdefault(i, []).append(j)
    count = 0

    def rec(i, prev_end, acc):
        nonlocal count
        count += 1
        if count > budget:
            raise RuntimeError("closed subset enumeration budget exceeded")
        yield acc
        if i not in rows:
            return
        for end in rows[i]:
            if end > prev_end:
                break
            yield from rec(i + 1, end, acc + [(i, j) for j in rows[i] if j <= end])

    if not rows:
        yield CoordinateSet(n, m, frozenset())
        return
    for S in rec(1, n, []):
        yield CoordinateSet(n, m, frozenset(S))


def _score(e, bound, convention):
    if convention == "formal":
        return bound * e
    return bound * max(e, Fraction(0))


def integral_exponent(U1: CoordinateSet, convention: str = "epsilon",
                      tilde: bool = False) -> Fraction:
    """X-exponent of I(U_1, X), or of the active integral when tilde is set.

    convention "epsilon": each one-variable integral of s^e over [c, C X^b]
    is scored b*max(e, 0); a zero exponent gives a logarithm, absorbed in
    X^eps.  convention "formal": every variable is scored b*e, which is how
    the boundary closed forms are obtained.
    """
    if convention not in ("epsilon", "formal"):
        raise ValueError("convention must be 'epsilon' or 'formal'")
    n, m = U1.n, U1.m
    w = haar_weight(n, m)
    for (i, j) in U1.members:
        w = w * coordinate_weight(i, j, n, m).inverse()
    total = Fraction(-len(U1))
    for e, b in zip(w.s, s_bounds(n, m)):
        total += _score(e, b, convention)
    if tilde:
        total += Fraction(n * (n + 1), 2) - 1
    return total


def closed_form_empty(n: int, m: int) -> Fraction:
    return Fraction(m * (m + 1) * (2 * m - 3 * n + 4), 6)


def closed_form_u0(n: int, m: int) -> Fraction:
    return Fraction(m * (2 * m + 1 - n))


@dataclass
class CuspReport:
    n: int
    passed: bool
    checked: int
    violations: list = field(default_factory=list)    # (m, sorted members, exponent)
    boundary: list = field(default_factory=list)      # per m: dict
    table: list = field(default_factory=list)         # (m, members, exponent)

    def to_json(self) -> dict:
        def fr(x):
            return str(x)
        return {
            "n": self.n,
            "passed": self.passed,
            "checked": self.checked,
            "violations": [[m, [list(b) for b in S], fr(e)] for m, S, e in self.violations],
            "boundary": [{k: (fr(v) if isinstance(v, Fraction) else v) for k, v in d.items()}
                         for d in self.boundary],
            "table": [[m, [list(b) for b in S], fr(e)] for m, S, e in self.table],
        }


def verify_cusp_bounds(n: int, keep_table: bool = False) -> CuspReport:
    """Check I(U_1) <= X^{-1+eps} for every non-empty proper closed U_1 of U_0."""
    if n % 2 or not 4 <= n <= 10:
        raise ValueError("n must be even with 4 <= n <= 10")
    rep = CuspReport(n, True, 0)
    for m in range(1, n // 2 + 1):
        full = frozenset(u0(n, m))
        for S in enumerate_closed_subsets(n, m):
            e = integral_exponent(S)
            if keep_table:
                rep.table.append((m, S.sorted(), e))
            if not S.members or S.members == full:
                continue
            rep.checked += 1
            if e > -1:
                rep.passed = False
                rep.violations.append((m, S.sorted(), e))
        empty = CoordinateSet(n, m, frozenset())
        top = CoordinateSet(n, m, full)
        rep.boundary.append({
            "m": m,
            "empty_formal": integral_exponent(empty, "formal"),
            "empty_closed_form": closed_form_empty(n, m),
            "empty_epsilon": integral_exponent(empty),
            "u0_formal": integral_exponent(top, "formal"),
            "u0_closed_form": closed_form_u0(n, m),
            "u0_epsilon": integral_exponent(top),
            # the closed forms are derived for dim F_0 > 0 only
            "closed_form_applies": 2 * m < n,
        })
    return rep
