"""Unimodular quadratic forms over Z_2 and R: invariants, canonical forms, masses."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .algebra import binomial_progression_sum
from .pairs import SymMatrix, as_sym, orthogonal_group_order

INF = "inf"


# ---------------------------------------------------------------------------
# Hilbert symbols

def _split(a, p):
    """a = p^v * u with u prime to p, for a nonzero integer a."""
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def _to_int_class(x):
    """An integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    return x.numerator * x.denominator


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, p) -> int:
    """(a, b)_p for nonzero rationals; p a prime or "inf"."""
    a = _to_int_class(a)
    b = _to_int_class(b)
    if p == INF or p == 0 or p == float("inf"):
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2
        omg = lambda t: ((t * t - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u)
        return -1 if e % 2 else 1
    s = (-1) ** (alpha * beta * ((p - 1) // 2) % 2)
    return s * _legendre(u, p) ** beta * _legendre(v, p) ** alpha


def rational_diagonal(A):
    """Diagonal entries of a rational diagonalization of a nondegenerate symmetric matrix."""
    A = as_sym(A)
    n = A.n
    M = [[Fraction(x) for x in row] for row in A.entries]
    out = []
    for t in range(n):
        if M[t][t] == 0:
            s = next((s for s in range(t + 1, n) if M[s][s] != 0), None)
            if s is not None:
                M[t], M[s] = M[s], M[t]
                for row in M:
                    row[t], row[s] = row[s], row[t]
            else:
                s = next((s for s in range(t + 1, n) if M[t][s] != 0), None)
                if s is None:
                    raise ValueError("degenerate form")
                # b_t <- b_t + b_s makes the pivot 2 M[t][s] != 0
                for j in range(n):
                    M[t][j] += M[s][j]
                for i in range(n):
                    M[i][t] += M[i][s]
        piv = M[t][t]
        out.append(piv)
        for s in range(t + 1, n):
            c = M[s][t] / piv
            if c:
                for j in range(t, n):
                    M[s][j] -= c * M[t][j]
                for i in range(t, n):
                    M[i][s] -= c * M[i][t]
    return out


def hasse_witt(A, p) -> int:
    """prod_{i<j} (d_i, d_j)_p over a diagonalization."""
    d = rational_diagonal(A)
    out = 1
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            out *= hilbert_symbol(d[i], d[j], p)
    return out


def pm8(n: int) -> int:
    """+1 if n = 0 or 2 mod 8, else -1."""
    return 1 if n % 8 in (0, 2) else -1


# ---------------------------------------------------------------------------
# Z_2 classification

@dataclass(frozen=True)
class GenusData:
    n: int
    det_square_class: int      # det mod 8 at 2, sign at infinity
    hasse_witt: int
    type: str                  # "I" or "II" (at 2), "R" at infinity
    octane: int
    label: Optional[str] = None


def _oddity_2adic(A, K=12):
    """Sum of a unit-pivot diagonalization over Z/2^K, mod 8; None for Type II.

    When the remaining block is even, the last odd pivot is merged back:
    adding its vector to a remaining basis vector gives an odd pivot again.
    """
    m = 1 << K
    n = A.n
    G = [[x % m for x in row] for row in A.entries]
    basis = [[int(i == j) for j in range(n)] for i in range(n)]

    def gram(u, v):
        return sum(u[i] * G[i][j] * v[j] for i in range(n) for j in range(n)) % m

    done = []          # (vector, norm)
    rest = list(basis)
    while rest:
        norms = [gram(v, v) for v in rest]
        idx = next((i for i, q in enumerate(norms) if q % 2), None)
        if idx is None:
            if not done:
                return None
            w, _ = done.pop()
            v = [(a + b) % m for a, b in zip(rest[0], w)]
            rest = [v, w] + rest[1:]
            continue
        v = rest.pop(idx)
        q = norms[idx]
        inv = pow(q, -1, m)
        new = []
        for u in rest:
            c = gram(u, v) * inv % m
            new.append([(a - c * b) % m for a, b in zip(u, v)])
        rest = new
        done.append((v, q))
    total = sum(q for _, q in done)
    return total % 8


def classify_2adic(A) -> GenusData:
    A = as_sym(A)
    n = A.n
    d = A.det()
    if d % 2 == 0:
        raise ValueError("classify_2adic needs odd determinant")
    type_ = "II" if all(A[i, i] % 2 == 0 for i in range(n)) else "I"
    hw = hasse_witt(A, 2)
    oct_ = 0 if type_ == "II" else _oddity_2adic(A)
    label = None
    cls = d % 8
    sign = None
    s = (-1) ** (n // 2)
    if (s * d) % 8 == 1:
        sign = "+"
    elif (s * d) % 8 == 7:
        sign = "-"
    if type_ == "II":
        label = "TypeII"
    elif sign == "+":
        label = f"M_{hw}"
    elif sign == "-":
        label = f"M-_{hw}"
    return GenusData(n, cls, hw, type_, oct_, label)


def classify_real(A) -> GenusData:
    A = as_sym(A)
    d = rational_diagonal(A)
    q = sum(1 for x in d if x < 0)
    hw = -1 if comb(q, 2) % 2 else 1
    return GenusData(A.n, -1 if q % 2 else 1, hw, "R", (A.n - 2 * q) % 8)


def negative_index(A) -> int:
    return sum(1 for x in rational_diagonal(A) if x < 0)


def canonical_representative(n: int, det_sign: str, hw: int) -> SymMatrix:
    """The diagonal representatives: det_sign is the sign of (-1)^(n/2) det, hw the symbol."""
    if n % 2 or n < 2:
        raise ValueError("n must be even and positive")
    if det_sign not in ("+", "-") or hw not in (1, -1):
        raise ValueError("det_sign must be '+' or '-', hw must be +-1")
    plus = det_sign == "+"
    if n % 4 == 0:
        neg = {(True, 1): 0, (True, -1): 2, (False, 1): 1, (False, -1): 3}[(plus, hw)]
    else:
        neg = {(True, 1): 1, (True, -1): 3, (False, 1): 0, (False, -1): 2}[(plus, hw)]
    if neg > n:
        raise ValueError(f"no representative with ({det_sign}, {hw}) in dimension {n}")
    return SymMatrix.diag([1] * (n - neg) + [-1] * neg)


def type2_form(n: int) -> SymMatrix:
    return SymMatrix([[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------------------
# signatures and infinite masses

@dataclass
class SignatureOrbit:
    r1: int
    r2: int
    multiplicity: dict      # q -> number of delta with q negative eigenvalues

    @property
    def total(self) -> int:
        return sum(self.multiplicity.values())


def signature_distribution(r1: int, r2: int) -> SignatureOrbit:
    if r1 < 0 or r2 < 0:
        raise ValueError("r1, r2 must be non-negative")
    if r1 == 0:
        return SignatureOrbit(r1, r2, {r2: 2})
    return SignatureOrbit(r1, r2, {q: comb(r1, q - r2) for q in range(r2, r2 + r1 + 1)})


def real_hasse_witt(q: int) -> int:
    """Symbol at infinity of a real form with q negative eigenvalues."""
    return -1 if comb(q, 2) % 2 else 1


def _closed(r1, n, hw):
    if r1 < 2 or r1 % 2:
        return None
    s = pm8(n) * hw
    return 2 ** (r1 - 2) + s * 2 ** ((r1 - 2) // 2)


def infinite_mass(r1: int, representative, n: Optional[int] = None,
                  check_closed_form: bool = True) -> int:
    """Number of delta whose slice lands in the genus class of ``representative``.

    ``representative`` is a SymMatrix (classified over Z_2) or a label such
    as "M_1", "M_-1", "M-_1", "M-_-1"; with a label, n must be given.
    """
    if isinstance(representative, str):
        if n is None:
            raise ValueError("n is needed with a label")
        label = representative
    else:
        A = as_sym(representative)
        n = A.n
        label = classify_2adic(A).label
    if label == "TypeII":
        raise ValueError("Type II genera carry no fiber over monic polynomials")
    if label is None or "_" not in label:
        raise ValueError("unrecognised representative")
    plus = not label.startswith("M-")
    hw = int(label.split("_", 1)[1])
    r2 = (n - r1) // 2
    if r1 + 2 * r2 != n or r1 < 0:
        raise ValueError("incompatible r1 and n")
    dist = signature_distribution(r1, r2)
    total = 0
    for q, c in dist.multiplicity.items():
        if (q % 2 == (n // 2) % 2) != plus:
            continue
        if real_hasse_witt(q) == hw:
            total += c
    if plus and check_closed_form and r1 >= 2:
        expect = _closed(r1, n, hw)
        if expect is not None and expect != total:
            raise AssertionError(
                f"infinite mass {total} differs from closed form {expect} (r1={r1}, n={n}, hw={hw})")
    return total


def c_inf_split(n: int, r1: int):
    """(c_{inf,0}, c_{inf,2}): masses on the two Hasse-Witt classes of the plus slice."""
    return infinite_mass(r1, "M_1", n), infinite_mass(r1, "M_-1", n)


def c_inf_progression(n: int, r1: int, hw: int) -> int:
    """The same count written as a binomial progression sum over j = q - r2."""
    r2 = (n - r1) // 2
    if r1 == 0:
        return infinite_mass(0, f"M_{hw}", n)
    total = 0
    for a in range(4):
        q = a  # q mod 4 class
        if q % 2 != (n // 2) % 2 or real_hasse_witt(q) != hw:
            continue
        total += binomial_progression_sum(r1, (q - r2) % 4, 4)
    return total


# ---------------------------------------------------------------------------
# 2-adic masses

def so_volume_ratio_formula(n: int) -> Fraction:
    """Vol(SO_{M_-1}(Z_2)) / Vol(SO_{M_1}(Z_2)) from the closed form."""
    if n < 4 or n % 2:
        raise ValueError("n must be even and at least 4")
    s = pm8(n)
    a = 2 ** (n - 2)
    b = 2 ** ((n - 2) // 2)
    return Fraction(a + s * b, a - s * b)


def so_volume_ratio_2adic(n: int, k: int, budget: int = 10 ** 8) -> Fraction:
    """|SO_{M_-1}(Z/2^k)| / |SO_{M_1}(Z/2^k)| by point counting."""
    if k < 1:
        raise ValueError("k must be positive")
    M1 = canonical_representative(n, "+", 1)
    Mm = canonical_representative(n, "+", -1)
    a, _ = orthogonal_group_order(M1, 2, k, budget)
    b, _ = orthogonal_group_order(Mm, 2, k, budget)
    return Fraction(b, a)


def so_volume_ratio_minus_2adic(n: int, k: int, budget: int = 10 ** 8) -> Fraction:
    """|SO_{M-_-1}(Z/2^k)| / |SO_{M-_1}(Z/2^k)|; equal volumes expected."""
    M1 = canonical_representative(n, "-", 1)
    Mm = canonical_representative(n, "-", -1)
    a, _ = orthogonal_group_order(M1, 2, k, budget)
    b, _ = orthogonal_group_order(Mm, 2, k, budget)
    return Fraction(b, a)


def c2_from_sum_and_ratio(total: Fraction, ratio: Fraction):
    """Solve c(M_1) + c(M_-1) = total and c(M_1) / c(M_-1) = ratio."""
    cm = Fraction(total) / (1 + ratio)
    return ratio * cm, cm


def c2_masses(n: int) -> dict:
    """2-adic masses per unit Vol(S_2) for the four odd classes.

    Plus classes: total 2^(n-1) split by the volume ratio.  Minus classes:
    total 2^(n-2) split evenly because their octane values are +-2.
    """
    c1, cm1 = c2_from_sum_and_ratio(Fraction(2) ** (n - 1), so_volume_ratio_formula(n))
    return {
        "M_1": c1,
        "M_-1": cm1,
        "M+_1": c1 / 2,
        "M+_-1": cm1 / 2,
        "M-_1": Fraction(2) ** (n - 3),
        "M-_-1": Fraction(2) ** (n - 3),
    }


def c2_closed_form(n: int) -> dict:
    s = pm8(n)
    a = Fraction(2) ** (n - 2)
    b = Fraction(2) ** ((n - 2) // 2)
    return {"M_1": a + s * b, "M_-1": a - s * b}
