"""Exact integer, polynomial and modular arithmetic shared by the other modules.

Two coefficient orders are used.  The public types (IntPoly, ModPoly,
BinaryForm) store coefficients leading term first, matching the text
encodings.  The low-level helpers prefixed ``pm_`` and ``ip_`` work on
plain lists with the constant term first, which keeps index arithmetic
simple inside the algorithms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Sequence


# ---------------------------------------------------------------------------
# public types

@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients from the leading term down."""

    coeffs: tuple

    def __post_init__(self):
        c = [int(a) for a in self.coeffs]
        while len(c) > 1 and c[0] == 0:
            c.pop(0)
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @classmethod
    def from_low(cls, low: Sequence[int]) -> "IntPoly":
        return cls(tuple(reversed(list(low))) or (0,))

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    @property
    def low(self) -> list:
        return list(reversed(self.coeffs))

    def is_monic(self) -> bool:
        return self.coeffs[0] == 1

    def __call__(self, x):
        acc = 0
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def __str__(self):
        return _poly_str(self.coeffs)


@dataclass(frozen=True)
class ModPoly:
    """Polynomial with residues mod ``modulus``, leading term first."""

    modulus: int
    coeffs: tuple

    def __post_init__(self):
        m = self.modulus
        if m < 1:
            raise ValueError("modulus must be positive")
        c = [int(a) % m for a in self.coeffs]
        while len(c) > 1 and c[0] == 0:
            c.pop(0)
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @classmethod
    def from_low(cls, modulus: int, low: Sequence[int]) -> "ModPoly":
        return cls(modulus, tuple(reversed(list(low))) or (0,))

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    @property
    def low(self) -> list:
        return list(reversed(self.coeffs))

    def __str__(self):
        return _poly_str(self.coeffs) + f" (mod {self.modulus})"


@dataclass(frozen=True)
class BinaryForm:
    """c_0 x^n + c_1 x^(n-1) y + ... + c_n y^n."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def dehomogenize(self) -> IntPoly:
        return IntPoly(self.coeffs)

    def __neg__(self):
        return BinaryForm(tuple(-c for c in self.coeffs))

    def __str__(self):
        n = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "".join(
                s for s in (_pow_str("x", n - i), _pow_str("y", i)) if s
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _pow_str(v, e):
    if e == 0:
        return ""
    return v if e == 1 else f"{v}^{e}"


def _poly_str(coeffs):
    n = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = _pow_str("x", n - i)
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}{mono}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


# ---------------------------------------------------------------------------
# integer polynomials, constant term first

def ip_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def ip_add(a, b):
    n = max(len(a), len(b))
    return ip_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                    for i in range(n)])


def ip_sub(a, b):
    n = max(len(a), len(b))
    return ip_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                    for i in range(n)])


def ip_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ip_trim(out)


def ip_scale(a, c):
    return ip_trim([c * x for x in a])


def ip_derivative(a):
    return ip_trim([i * a[i] for i in range(1, len(a))])


def ip_exact_div(a, b):
    """Quotient a / b over Z; raises if the division is not exact."""
    a = ip_trim(a)
    b = ip_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    q = [0] * (len(a) - len(b) + 1)
    r = list(a)
    lb = b[-1]
    for k in range(len(q) - 1, -1, -1):
        c, rem = divmod(r[k + len(b) - 1], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] -= c * y
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return ip_trim(q)


def ip_divmod_monic(a, f):
    """Division with remainder by a monic integer polynomial f."""
    r = list(a)
    d = len(f) - 1
    q = [0] * max(len(r) - d, 0)
    for k in range(len(r) - 1, d - 1, -1):
        c = r[k]
        if c:
            q[k - d] = c
            for j in range(d + 1):
                r[k - d + j] -= c * f[j]
    return ip_trim(q), ip_trim(r[:d])


# ---------------------------------------------------------------------------
# polynomials over Z/m, constant term first

def pm_trim(a, m):
    a = [x % m for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def pm_add(a, b, m):
    n = max(len(a), len(b))
    return pm_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                    for i in range(n)], m)


def pm_sub(a, b, m):
    n = max(len(a), len(b))
    return pm_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                    for i in range(n)], m)


def pm_mul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return pm_trim(out, m)


def pm_divmod(a, b, m):
    """Division with remainder; the leading coefficient of b must be a unit."""
    a = pm_trim(a, m)
    b = pm_trim(b, m)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, m)
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return [], r
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % m
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % m
    return pm_trim(q, m), pm_trim(r[:db], m)


def pm_rem(a, b, m):
    return pm_divmod(a, b, m)[1]


def pm_monic(a, m):
    a = pm_trim(a, m)
    if not a:
        return a
    inv = pow(a[-1], -1, m)
    return [x * inv % m for x in a]


def pm_gcd(a, b, p):
    """Monic gcd over the prime field F_p."""
    a = pm_trim(a, p)
    b = pm_trim(b, p)
    while b:
        a, b = b, pm_rem(a, b, p)
    return pm_monic(a, p)


def pm_xgcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g monic, over F_p."""
    r0, r1 = pm_trim(a, p), pm_trim(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = pm_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, pm_sub(s0, pm_mul(q, s1, p), p)
        t0, t1 = t1, pm_sub(t0, pm_mul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, p)
    return ([x * inv % p for x in r0], [x * inv % p for x in s0],
            [x * inv % p for x in t0])


def pm_powmod(a, e, f, m):
    result = [1 % m] if m > 1 else []
    base = pm_rem(a, f, m)
    while e:
        if e & 1:
            result = pm_rem(pm_mul(result, base, m), f, m)
        e >>= 1
        if e:
            base = pm_rem(pm_mul(base, base, m), f, m)
    return pm_trim(result, m)


def pm_derivative(a, m):
    return pm_trim([i * a[i] for i in range(1, len(a))], m)


# ---------------------------------------------------------------------------
# integer linear algebra

def det_int(M):
    """Exact determinant of an integer matrix by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_mod2(rows):
    """Rank over F_2 of an integer matrix given as a list of rows."""
    vecs = []
    for row in rows:
        v = 0
        for j, x in enumerate(row):
            if x & 1:
                v |= 1 << j
        vecs.append(v)
    return rank_bitvectors(vecs)


def rank_bitvectors(vecs):
    basis = {}
    for v in vecs:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def smith_invariants(M):
    """Nonzero invariant factors (Smith normal form diagonal) of an integer matrix."""
    a = [list(row) for row in M]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    out = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // piv
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, cols):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // piv
                    if q:
                        for i in range(t, rows):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        done = False
            if done:
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = a[t], a[bad]
                for j in range(t, cols):
                    rt[j] += rb[j]
                continue
            best = None
            for i in range(t, rows):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), i, 0)
            for j in range(t, cols):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if j:
                for row in a:
                    row[t], row[j] = row[j], row[t]
            else:
                a[t], a[i] = a[i], a[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


# ---------------------------------------------------------------------------
# resultants and discriminants

def resultant(f_low, g_low):
    """Res(f, g) via the Sylvester determinant; inputs constant term first."""
    f = ip_trim(f_low)
    g = ip_trim(g_low)
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    fh = list(reversed(f))
    gh = list(reversed(g))
    S = []
    for i in range(n):
        S.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        S.append([0] * i + gh + [0] * (size - n - 1 - i))
    return det_int(S)


def poly_disc(f: IntPoly) -> int:
    """Discriminant (-1)^(n(n-1)/2) Res(f, f') of a monic polynomial."""
    if not f.is_monic():
        raise ValueError("poly_disc expects a monic polynomial")
    n = f.degree
    if n < 2:
        raise ValueError("poly_disc expects degree >= 2")
    low = f.low
    r = resultant(low, ip_derivative(low))
    return r if (n * (n - 1) // 2) % 2 == 0 else -r


# ---------------------------------------------------------------------------
# pencils of symmetric matrices

def _check_square(M, n):
    if len(M) != n or any(len(row) != n for row in M):
        raise ValueError("dimension mismatch")


def det_pencil(A, B) -> BinaryForm:
    """det(Ax - By) as a binary form of degree n.

    Fraction-free Bareiss elimination over Z[x] with y set to 1; the result
    is homogeneous of degree n so re-homogenization is exact.
    """
    n = len(A)
    _check_square(A, n)
    _check_square(B, n)
    M = [[ip_trim([-B[i][j], A[i][j]]) for j in range(n)] for i in range(n)]
    sign = 1
    prev = [1]
    det = None
    for k in range(n):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                det = []
                break
        if k == n - 1:
            det = M[k][k]
            break
        piv = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ip_sub(ip_mul(M[i][j], piv), ip_mul(M[i][k], M[k][j]))
                M[i][j] = ip_exact_div(num, prev)
        prev = piv
    if det is None:
        det = []
    det = ip_scale(det, sign)
    det = det + [0] * (n + 1 - len(det))
    return BinaryForm(tuple(det[n - i] for i in range(n + 1)))


# ---------------------------------------------------------------------------
# factorization over F_p

def _pth_root(a, p):
    return [a[i] for i in range(0, len(a), p)]


def _squarefree_decomposition(f, p):
    """Pairs (g, e) with f = prod g^e, g squarefree and pairwise coprime."""
    out = []
    df = pm_derivative(f, p)
    if not df:
        for g, e in _squarefree_decomposition(_pth_root(f, p), p):
            out.append((g, e * p))
        return out
    c = pm_gcd(f, df, p)
    w = pm_divmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = pm_gcd(w, c, p)
        z = pm_divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = pm_divmod(c, y, p)[0]
    if len(c) > 1:
        for g, e in _squarefree_decomposition(_pth_root(c, p), p):
            out.append((g, e * p))
    return out


def _distinct_degree(g, p):
    out = []
    h = [0, 1]
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = pm_powmod(h, p, g, p)
        gd = pm_gcd(g, pm_sub(h, [0, 1], p), p)
        if len(gd) > 1:
            out.append((gd, d))
            g = pm_divmod(g, gd, p)[0]
            h = pm_rem(h, g, p)
    if len(g) > 1:
        out.append((g, len(g) - 1))
    return out


def _equal_degree(g, d, p, rng):
    r = (len(g) - 1) // d
    if r == 1:
        return [g]
    deg = len(g) - 1
    while True:
        a = pm_trim([rng.randrange(p) for _ in range(deg)], p)
        if len(a) < 2:
            continue
        if p == 2:
            t = list(a)
            acc = list(a)
            for _ in range(d - 1):
                t = pm_rem(pm_mul(t, t, p), g, p)
                acc = pm_add(acc, t, p)
            b = acc
        else:
            b = pm_sub(pm_powmod(a, (p ** d - 1) // 2, g, p), [1], p)
        u = pm_gcd(g, b, p)
        if 1 < len(u) < len(g):
            v = pm_divmod(g, u, p)[0]
            return _equal_degree(u, d, p, rng) + _equal_degree(v, d, p, rng)


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


is_prime = _is_prime


def factor_mod_low(f_low, p):
    """Factor a nonzero polynomial over F_p; returns (unit, [(g, e), ...]).

    Factors are monic, constant term first, sorted by (degree, coefficients).
    """
    f = pm_trim(f_low, p)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    lead = f[-1]
    f = pm_monic(f, p)
    rng = random.Random(1000003 * p + len(f))
    out = []
    for g, e in _squarefree_decomposition(f, p):
        for h, d in _distinct_degree(g, p):
            for q in _equal_degree(h, d, p, rng):
                out.append((q, e))
    out.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return lead, out


def factor_mod(f: ModPoly):
    """Monic irreducible factors of f over F_p with multiplicities."""
    p = f.modulus
    if not _is_prime(p):
        raise ValueError("factor_mod needs a prime modulus")
    _, facs = factor_mod_low(f.low, p)
    return [(ModPoly.from_low(p, g), e) for g, e in facs]


def _monic_polys(p, d):
    """All monic polynomials of degree d over F_p, constant term first."""
    if d == 0:
        yield [1]
        return
    for idx in range(p ** d):
        c = []
        for _ in range(d):
            idx, r = divmod(idx, p)
            c.append(r)
        yield c + [1]


def factor_mod_exhaustive(f_low, p):
    """Trial division by every monic polynomial in increasing degree.

    Only for desk-scale inputs; used as an oracle for factor_mod_low.
    """
    f = pm_monic(f_low, p)
    out = {}
    d = 1
    while len(f) > 1 and 2 * d <= len(f) - 1:
        for g in _monic_polys(p, d):
            while True:
                q, r = pm_divmod(f, g, p)
                if r:
                    break
                key = tuple(g)
                out[key] = out.get(key, 0) + 1
                f = q
        d += 1
    if len(f) > 1:
        key = tuple(f)
        out[key] = out.get(key, 0) + 1
    res = [(list(k), e) for k, e in out.items()]
    res.sort(key=lambda t: (len(t[0]), t[0][::-1], t[1]))
    return res


# ---------------------------------------------------------------------------
# real roots

def _frac_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def count_real_roots(f: IntPoly) -> int:
    """Number of distinct real roots by a Sturm sequence over Q."""
    low = f.low
    if f.degree < 1:
        return 0
    if f.degree >= 2 and f.is_monic() and poly_disc(f) == 0:
        raise ValueError("count_real_roots expects a squarefree polynomial")
    if f.degree >= 2 and not f.is_monic():
        if resultant(low, ip_derivative(low)) == 0:
            raise ValueError("count_real_roots expects a squarefree polynomial")
    seq = [[Fraction(c) for c in low], [Fraction(c) for c in ip_derivative(low)]]
    while True:
        r = _frac_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def changes(signs):
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    at_pos = [1 if s[-1] > 0 else -1 for s in seq]
    at_neg = [(1 if s[-1] > 0 else -1) * (-1 if (len(s) - 1) % 2 else 1) for s in seq]
    return changes(at_neg) - changes(at_pos)


# ---------------------------------------------------------------------------
# binomial sums

def binomial_progression_sum(N: int, a: int, M: int) -> int:
    """Sum of C(N, j) over 0 <= j <= N with j = a mod M."""
    if N < 0 or M < 1:
        raise ValueError("need N >= 0 and M >= 1")
    return sum(comb(N, j) for j in range(a % M, N + 1, M))


def content(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
