"""Binary quadratic forms: reduction, cycles, composition and genus theory."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple


class BQF(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, g):
        """Form f(px + qy, rx + sy) for g = ((p, q), (r, s))."""
        (p, q), (r, s) = g
        a, b, c = self
        return BQF(a * p * p + b * p * r + c * r * r,
                   2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
                   a * q * q + b * q * s + c * s * s)


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _check(f: BQF):
    D = f.disc
    if D == 0 or _is_square(D):
        raise ValueError(f"discriminant {D} is zero or a square")
    if not f.is_primitive():
        raise ValueError(f"form {tuple(f)} is not primitive")
    return D


# ---------------------------------------------------------------------------
# definite forms

def reduce_definite(f: BQF) -> BQF:
    a, b, c = f
    if a <= 0:
        raise ValueError("only positive definite forms are reduced")
    while True:
        # b into (-a, a]
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            b2 = b + 2 * k * a
            c = (b2 * b2 - f.disc) // (4 * a)
            b = b2
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return BQF(a, b, c)


def reduced_forms_definite(D: int) -> list:
    """All reduced primitive positive definite forms of discriminant D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append(BQF(a, b, c))
        a += 1
    return sorted(out)


# ---------------------------------------------------------------------------
# indefinite forms

def _lt_sqrt(x, D):
    """x < sqrt(D)."""
    return x < 0 or x * x < D


def _gt_sqrt(y, D):
    """y > sqrt(D)."""
    return y > 0 and y * y > D


def is_reduced_indefinite(f: BQF) -> bool:
    a, b, c = f
    D = f.disc
    return b > 0 and _lt_sqrt(b, D) and _lt_sqrt(2 * abs(a) - b, D) and _gt_sqrt(b + 2 * abs(a), D)


def _normalize(f: BQF) -> BQF:
    a, b, c = f
    D = f.disc
    m = 2 * abs(a)
    if a * a > D:
        b2 = b % m
        if b2 > abs(a):
            b2 -= m
    else:
        r = isqrt(D)
        b2 = r - ((r - b) % m)
    return BQF(a, b2, (b2 * b2 - D) // (4 * a))


def rho(f: BQF) -> BQF:
    """Properly equivalent neighbour (c, -b, a), then normalized."""
    a, b, c = f
    return _normalize(BQF(c, -b, a))


def reduce_indefinite(f: BQF) -> BQF:
    f = _normalize(f)
    for _ in range(10 ** 6):
        if is_reduced_indefinite(f):
            return f
        f = rho(f)
    raise RuntimeError("reduction did not terminate")


def cycle(f: BQF) -> list:
    """The cycle of reduced forms properly equivalent to f."""
    g = reduce_indefinite(f)
    out = [g]
    h = rho(g)
    while h != g:
        out.append(h)
        h = rho(h)
    return out


def reduce_form(f: BQF):
    """Reduced form (definite) or its full reduction cycle (indefinite)."""
    D = _check(f)
    if D < 0:
        return reduce_definite(f)
    return cycle(f)


def reduced_forms_indefinite(D: int) -> list:
    out = []
    r = isqrt(D)
    for b in range(1, r + 1):
        if (b - D) % 2 or b * b >= D:
            continue
        num = (b * b - D) // 4          # = a c, negative
        m = -num
        for d in range(1, m + 1):
            if m % d:
                continue
            for a in (d, -d):
                f = BQF(a, b, num // a)
                if f.is_primitive() and is_reduced_indefinite(f):
                    out.append(f)
    return sorted(set(out))


# ---------------------------------------------------------------------------
# class groups

def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f1: BQF, f2: BQF) -> BQF:
    """Dirichlet composition through united forms; result not reduced."""
    D = f1.disc
    if f2.disc != D:
        raise ValueError("discriminants differ")
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    s = (b1 + b2) // 2
    d0, u0, v0 = _xgcd(a1, a2)
    d, x, y = _xgcd(d0, s)
    if d < 0:
        d, x, y = -d, -x, -y
    v = x * v0
    w = y
    a3 = a1 * a2 // (d * d)
    b3 = b2 + 2 * a2 // d * (v * (s - b2) - w * c2)
    m = 2 * a3
    b3 %= abs(m)
    c3 = (b3 * b3 - D) // (4 * a3)
    out = BQF(a3, b3, c3)
    if out.disc != D:
        raise AssertionError("composition changed the discriminant")
    return out


def principal_form(D: int) -> BQF:
    k = D % 2
    return BQF(1, k, (k - D) // 4)


@dataclass
class FormClassGroup:
    disc: int
    reps: list          # one reduced form per (narrow) class
    narrow: bool
    _index: dict = None

    def __post_init__(self):
        self._index = {}
        if self.disc < 0:
            for i, f in enumerate(self.reps):
                self._index[f] = i
        else:
            for i, f in enumerate(self.reps):
                for g in cycle(f):
                    self._index[g] = i

    @property
    def order(self) -> int:
        return len(self.reps)

    def class_of(self, f: BQF) -> int:
        if self.disc < 0:
            return self._index[reduce_definite(f)]
        return self._index[reduce_indefinite(f)]

    def identity(self) -> int:
        return self.class_of(principal_form(self.disc))

    def mul(self, i: int, j: int) -> int:
        return self.class_of(compose(self.reps[i], self.reps[j]))

    def table(self):
        return [[self.mul(i, j) for j in range(self.order)] for i in range(self.order)]

    def two_torsion(self) -> list:
        e = self.identity()
        return [i for i in range(self.order) if self.mul(i, i) == e]


def class_group(D: int) -> FormClassGroup:
    """Narrow class group of primitive forms of discriminant D (positive forms if D < 0)."""
    if D % 4 not in (0, 1) or D == 0 or _is_square(D):
        raise ValueError(f"{D} is not a non-square discriminant")
    if D < 0:
        return FormClassGroup(D, reduced_forms_definite(D), True)
    seen = set()
    reps = []
    for f in reduced_forms_indefinite(D):
        if f in seen:
            continue
        cyc = cycle(f)
        seen.update(cyc)
        reps.append(min(cyc))
    return FormClassGroup(D, sorted(reps), True)


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        d = D // 4
        return d % 4 in (2, 3) and _squarefree(d)
    return False


def omega(D: int) -> int:
    n, k, p = abs(D), 0, 2
    while p * p <= n:
        if n % p == 0:
            k += 1
            while n % p == 0:
                n //= p
        p += 1
    return k + (n > 1)


def narrow_two_torsion(D: int) -> int:
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    return len(class_group(D).two_torsion())


def norm_minus_one_unit(D: int) -> bool:
    """Principal form and its negative share a cycle."""
    if D < 0:
        return False
    f = principal_form(D)
    g = BQF(-f.a, f.b, -f.c)
    return reduce_indefinite(g) in set(cycle(f))


def fundamental_unit(D: int):
    """(X, Y, N): the unit (X + Y sqrt D)/2 of norm N, from the period of a continued fraction.

    omega = (r + sqrt D)/2 with r = D mod 2 the largest such integer below
    sqrt D is reduced, so its expansion is purely periodic; over one period
    omega = (p omega + p') / (q omega + q') and q omega + q' is the unit.
    """
    if D <= 0 or _is_square(D):
        raise ValueError("need a positive non-square discriminant")
    s = isqrt(D)
    r = s if (s - D) % 2 == 0 else s - 1
    P, Q = r, 2
    q2, q1 = 1, 0
    while True:
        a = (P + s) // Q
        q2, q1 = q1, a * q1 + q2
        P = a * Q - P
        Q = (D - P * P) // Q
        if (P, Q) == (r, 2):
            break
    X, Y = q1 * r + 2 * q2, q1
    N = (X * X - D * Y * Y) // 4
    if N not in (1, -1) or (X * X - D * Y * Y) % 4:
        raise AssertionError(f"period did not produce a unit for D={D}")
    return X, Y, N


def pell_norm_minus_one(D: int) -> bool:
    """Oracle independent of forms: norm of the fundamental unit is -1."""
    if D <= 0:
        return False
    return fundamental_unit(D)[2] == -1


def class_numbers(D: int):
    """(h, h+) for a fundamental discriminant."""
    G = class_group(D)
    hp = G.order
    if D < 0:
        return hp, hp
    return (hp if norm_minus_one_unit(D) else hp // 2), hp


@dataclass
class GenusReport:
    lo: int
    hi: int
    checked: int
    passed: bool
    counterexamples: list


def fundamental_discriminants(lo: int, hi: int) -> list:
    return [D for D in range(lo, hi + 1) if is_fundamental(D)]


def genus_theory_check(lo: int, hi: int) -> GenusReport:
    bad = []
    ds = fundamental_discriminants(lo, hi)
    for D in ds:
        t = narrow_two_torsion(D)
        if t != 2 ** (omega(D) - 1):
            bad.append((D, t, omega(D)))
    return GenusReport(lo, hi, len(ds), not bad, bad)


def survey_row(D: int):
    h, hp = class_numbers(D)
    return (D, omega(D), h, hp, narrow_two_torsion(D))


def empirical_survey(lo: int, hi: int) -> list:
    """Rows (D, omega, h, h+, |Cl+[2]|) ordered by |D|."""
    ds = sorted(fundamental_discriminants(lo, hi), key=lambda D: (abs(D), D))
    return [survey_row(D) for D in ds]


def survey_summary(rows) -> dict:
    out = {"count": len(rows), "odd_h": 0, "two_torsion": {}}
    for D, w, h, hp, t in rows:
        out["odd_h"] += h % 2
        out["two_torsion"][t] = out["two_torsion"].get(t, 0) + 1
    return out


def random_sl2(rng, steps=6):
    g = ((1, 0), (0, 1))
    for _ in range(steps):
        k = int(rng.integers(-3, 4))
        m = ((1, k), (0, 1)) if rng.random() < 0.5 else ((0, -1), (1, 0))
        (p, q), (r, s) = g
        (p2, q2), (r2, s2) = m
        g = ((p * p2 + q * r2, p * q2 + q * s2), (r * p2 + s * r2, r * q2 + s * s2))
    return g

