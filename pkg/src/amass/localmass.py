"""Local masses at p from the unit group of (Z/p^k)[x]/(f).

The unit group G of the finite ring splits as T x P, where T is the group
of Teichmuller-type lifts of the residue field units (order prime to p)
and P = 1 + J is the p-group over the radical J = (p, h), h the radical of
f mod p.  P is generated through its filtration by the ideals
p^j (h^t) + p^(j+1) R; successive quotients are F_p-vector spaces, so a
discrete log is just reading off digits level by level.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .algebra import (det_int, factor_mod_low, ip_divmod_monic,
                      ip_mul, ip_sub, is_prime, pm_divmod, pm_gcd,
                      pm_monic, pm_mul, pm_powmod, pm_rem, pm_trim,
                      pm_xgcd, rank_bitvectors, smith_invariants)
from .monogen import MonicForm, as_monic


def _vp(x, p):
    x = abs(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# the ring

class FiniteQuotientRing:
    """(Z/p^k)[x]/(f); elements are tuples of n residues, constant term first."""

    def __init__(self, f, p, k):
        self.f = as_monic(f)
        self.p = p
        self.k = k
        self.m = p ** k
        self.n = self.f.n
        n, m = self.n, self.m
        low = [c % m for c in self.f.low]
        self.f_low = low
        # x^i mod f for i < 2n - 1
        red = []
        cur = [0] * n
        cur[0] = 1 % m
        for i in range(2 * n - 1):
            red.append(tuple(cur))
            lead = cur[n - 1]
            nxt = [0] + cur[:-1]
            nxt = [(nxt[j] - lead * low[j]) % m for j in range(n)]
            cur = nxt
        self._red = red

    @property
    def size(self) -> int:
        return self.m ** self.n

    def elem(self, low) -> tuple:
        low = list(low)
        if len(low) > self.n:
            _, r = ip_divmod_monic(low, self.f.low)
            low = r
        low = low + [0] * (self.n - len(low))
        return tuple(c % self.m for c in low)

    def one(self) -> tuple:
        return self.elem([1])

    def mul(self, a, b) -> tuple:
        n, m = self.n, self.m
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:n])
        for i in range(n, 2 * n - 1):
            c = prod[i]
            if c:
                r = self._red[i]
                for j in range(n):
                    out[j] += c * r[j]
        return tuple(v % m for v in out)

    def pow(self, a, e) -> tuple:
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def mult_matrix(self, a):
        cols = []
        xi = self.one()
        x = self.elem([0, 1]) if self.n > 1 else self.elem([0])
        for _ in range(self.n):
            cols.append(self.mul(a, xi))
            xi = self.mul(xi, x)
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def norm(self, a) -> int:
        return det_int(self.mult_matrix(a)) % self.m

    def is_unit(self, a) -> bool:
        p = self.p
        return len(pm_gcd(pm_trim(list(a), p), pm_trim(self.f_low, p), p)) == 1

    def unit_order(self) -> int:
        # |R^x| = |R| * prod (1 - p^-d_i) over distinct residue factors
        _, facs = factor_mod_low(self.f_low, self.p)
        out = self.size
        for g, _ in facs:
            q = self.p ** (len(g) - 1)
            out = out // q * (q - 1)
        return out

    def inverse(self, a) -> tuple:
        if not self.is_unit(a):
            raise ZeroDivisionError("not a unit")
        return self.pow(a, self.unit_order() - 1)


# ---------------------------------------------------------------------------
# norm square classes of (Z/p^k)^x

def norm_class_bits(v, p):
    """Square class of a unit of Z/p^k as a bit vector (1 bit for odd p, 2 for p = 2)."""
    if p == 2:
        return {1: 0, 3: 3, 5: 2, 7: 1}[v % 8]
    return 0 if pow(v % p, (p - 1) // 2, p) == 1 else 1


def norm_class_rep(bits, p):
    """Smallest positive unit with the given square class bits."""
    if p == 2:
        return {0: 1, 3: 3, 2: 5, 1: 7}[bits]
    if bits == 0:
        return 1
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


# ---------------------------------------------------------------------------
# unit group structure

def _factor_integer(N):
    out = []
    d = 2
    while d * d <= N:
        if N % d == 0:
            out.append(d)
            while N % d == 0:
                N //= d
        d += 1
    if N > 1:
        out.append(N)
    return out


def _primitive_element(g, p):
    """Generator of (F_p[x]/g)^x for irreducible monic g (constant term first)."""
    d = len(g) - 1
    q = p ** d
    primes = _factor_integer(q - 1)
    for idx in itertools.count(1):
        a = []
        r = idx
        for _ in range(d):
            r, c = divmod(r, p)
            a.append(c)
        a = pm_trim(a, p)
        if not a:
            continue
        if all(pm_powmod(a, (q - 1) // ell, g, p) != [1] for ell in primes):
            return a
        if idx > q:
            raise RuntimeError("no primitive element found")


@dataclass
class UnitGroup:
    ring: FiniteQuotientRing
    gens: list                 # ring elements
    relations: list            # integer rows, one per generator
    tame_count: int            # leading generators belonging to T
    invariants: list           # nonzero Smith invariants (> 1)
    levels: list = field(default_factory=list)


class _Filtration:
    """Digits of 1 + J level by level, with the generators 1 + p^j d_t x^s."""

    def __init__(self, R: FiniteQuotientRing, facs):
        p = R.p
        self.R = R
        fbar = pm_trim(R.f_low, p)
        h = [1]
        for g, _ in facs:
            h = pm_mul(h, g, p)
        emax = max(e for _, e in facs)
        d = []
        hp = [1]
        for t in range(emax + 1):
            d.append(pm_gcd(hp, fbar, p) if t else [1])
            hp = pm_mul(hp, h, p)
        d[emax] = pm_monic(fbar, p)
        self.d = d
        self.emax = emax
        self.levels = []           # (j, t, d_t, quotient q_t = d_{t+1}/d_t)
        for j in range(R.k):
            for t in range(emax):
                if j == 0 and t == 0:
                    continue
                q = pm_divmod(d[t + 1], d[t], p)[0]
                if len(q) > 1:
                    self.levels.append((j, t, d[t], q))
        self.gens = []
        self.gen_level = []
        for li, (j, t, dt, q) in enumerate(self.levels):
            for s in range(len(q) - 1):
                term = ip_mul([0] * s + [1], dt)
                g = list(R.one())
                for i, c in enumerate(term):
                    g[i] += p ** j * c
                self.gens.append(R.elem(g))
                self.gen_level.append(li)
        self.inv = [R.inverse(g) for g in self.gens]

    def dlog(self, u):
        """Exponent vector c with u = prod gens[i]^c[i]; u must lie in 1 + J."""
        R = self.R
        p, m = R.p, R.m
        c = [0] * len(self.gens)
        gi = 0
        for li, (j, t, dt, q) in enumerate(self.levels):
            nq = len(q) - 1
            v = [(a - b) % m for a, b in zip(u, R.one())]
            if any(x % p ** j for x in v):
                raise ArithmeticError("element left the filtration")
            w = pm_trim([x // p ** j for x in v], p)
            if w:
                quo, rem = pm_divmod(w, dt, p)
                if rem:
                    raise ArithmeticError("element not in the expected level")
                digits = pm_rem(quo, q, p)
            else:
                digits = []
            digits = digits + [0] * (nq - len(digits))
            for s in range(nq):
                e = digits[s]
                if e:
                    c[gi + s] = e
                    u = R.mul(u, R.pow(self.inv[gi + s], e))
            gi += nq
        if u != R.one():
            raise ArithmeticError("discrete log did not terminate at 1")
        return c


def _crt_lift(residue_targets, facs, p):
    """Polynomial over F_p congruent to target_i mod g_i for the distinct factors."""
    h = [1]
    for g, _ in facs:
        h = pm_mul(h, g, p)
    total = []
    for (g, _), target in zip(facs, residue_targets):
        other = pm_divmod(h, g, p)[0]
        # other * inv(other mod g) is 1 mod g and 0 mod the rest
        _, s, _ = pm_xgcd(other, g, p)
        e = pm_rem(pm_mul(other, s, p), h, p)
        total = pm_trim([a + b for a, b in itertools.zip_longest(
            total, pm_rem(pm_mul(e, target, p), h, p), fillvalue=0)], p)
    return total


def unit_group(f, p, k) -> UnitGroup:
    """Generators and a full relation matrix for the units of (Z/p^k)[x]/(f)."""
    R = FiniteQuotientRing(f, p, k)
    _, facs = factor_mod_low(R.f_low, p)
    filt = _Filtration(R, facs)
    M = len(filt.gens)
    # exponent killing 1 + J, then Teichmuller lifts
    tame = []
    tame_orders = []
    for i, (g, _) in enumerate(facs):
        targets = [[1]] * len(facs)
        targets[i] = _primitive_element(g, p)
        gamma = R.elem(_crt_lift(targets, facs, p))
        tau = gamma
        for _ in range(M):
            tau = R.pow(tau, p)
        tame.append(tau)
        tame_orders.append(p ** (len(g) - 1) - 1)
    r = len(tame)
    gens = tame + filt.gens
    rows = []
    for i, o in enumerate(tame_orders):
        row = [0] * (r + M)
        row[i] = o
        rows.append(row)
    for i, g in enumerate(filt.gens):
        row = [0] * (r + M)
        row[r + i] = p
        for j, c in enumerate(filt.dlog(R.pow(g, p))):
            row[r + j] -= c
        rows.append(row)
    inv = [x for x in smith_invariants(rows) if x > 1] if rows else []
    return UnitGroup(R, gens, rows, r, inv, filt.levels)


# ---------------------------------------------------------------------------
# square classes

@dataclass
class UnitSquareData:
    p: int
    k: int
    count_square_classes: int
    count_two_torsion: int
    norm_class_of: dict            # square-class basis element -> norm class representative
    norm_fiber: dict               # norm class representative -> number of square classes
    norm_image: tuple              # norm class representatives hit
    two_torsion_norm_one: Optional[int] = None
    free_rank: Optional[int] = None
    stable: bool = True

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.count_square_classes, self.count_two_torsion)


def _two_exponents(invariants):
    out = []
    for x in invariants:
        v = 0
        while x % 2 == 0:
            x //= 2
            v += 1
        if v:
            out.append(v)
    return sorted(out)


def _square_class_basis(G: UnitGroup):
    """F_2 basis of G/G^2 as indices into G.gens, plus the dimension."""
    M = len(G.gens)
    rel = []
    for row in G.relations:
        v = 0
        for j, x in enumerate(row):
            if x & 1:
                v |= 1 << j
        rel.append(v)
    # complete the row space of the relations to F_2^M greedily
    basis = {}

    def insert(v):
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                return True
        return False

    for v in rel:
        insert(v)
    chosen = [j for j in range(M) if insert(1 << j)]
    return chosen, M - rank_bitvectors(rel)


def _torsion_split(e_k, e_k1):
    """Match 2-exponents at precisions k and k+1: free ones grow by 1, torsion stays."""
    for rho in range(len(e_k) + 1):
        tors = e_k[:len(e_k) - rho]
        free = [x + 1 for x in e_k[len(e_k) - rho:]]
        if sorted(tors + free) == e_k1:
            return tors, rho
    return None, None


def _square_data_at(f, p, k):
    G = unit_group(f, p, k)
    R = G.ring
    chosen, dim = _square_class_basis(G)
    chars = [norm_class_bits(R.norm(G.gens[j]), p) for j in chosen]
    # the character must vanish on the relations
    for row in G.relations:
        acc = 0
        for j, x in enumerate(row):
            if x & 1:
                acc ^= norm_class_bits(R.norm(G.gens[j]), p)
        if acc:
            raise ArithmeticError("norm character is not defined on square classes")
    image = {0}
    for c in chars:
        image |= {x ^ c for x in image}
    fiber = {norm_class_rep(b, p): 2 ** dim // len(image) for b in sorted(image)}
    norm_class_of = {G.gens[j]: norm_class_rep(c, p) for j, c in zip(chosen, chars)}
    return G, dim, fiber, norm_class_of, tuple(sorted(norm_class_rep(b, p) for b in image))


_cache_lock = threading.Lock()
_cache: dict = {}


def _cache_key(f, p, k):
    m = p ** k
    return (tuple(c % m for c in as_monic(f).a), p, k)


def unit_square_classes(f, p, k, check_stability=True) -> UnitSquareData:
    """Square classes, 2-torsion and norm classes of the units of (Z/p^k)[x]/(f).

    The 2-torsion reported is that of the p-adic unit group: at p = 2 the
    Smith invariants at precisions k and k+1 are compared, the ones that
    grow being the images of the free Z_2-part.
    """
    f = as_monic(f)
    if not is_prime(p):
        raise ValueError("p must be prime")
    if k < 1:
        raise ValueError("k must be positive")
    key = _cache_key(f, p, k)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    G, dim, fiber, ncls, image = _square_data_at(f, p, k)
    e_k = _two_exponents(G.invariants)
    stable = True
    free_rank = None
    if p == 2:
        G1 = unit_group(f, p, k + 1)
        tors, free_rank = _torsion_split(e_k, _two_exponents(G1.invariants))
        if tors is None:
            stable = False
            tors = e_k
        two_torsion = 2 ** len(tors)
    else:
        two_torsion = 2 ** len(e_k)
        free_rank = 0
    if check_stability:
        G1 = unit_group(f, p, k + 1)
        _, dim1 = _square_class_basis(G1)
        stable = stable and dim1 == dim
    data = UnitSquareData(p, k, 2 ** dim, two_torsion, ncls, fiber, image,
                          free_rank=free_rank, stable=stable)
    with _cache_lock:
        # identical inputs give identical values, so last write wins safely
        _cache[key] = data
    return data


def clear_cache():
    with _cache_lock:
        _cache.clear()


# ---------------------------------------------------------------------------
# exhaustive oracle

def exhaustive_square_data(f, p, k, limit=10 ** 6):
    """Brute force over all p^(kn) ring elements (p^(kn) <= limit)."""
    R = FiniteQuotientRing(f, p, k)
    n, m = R.n, R.m
    if R.size > limit:
        raise ValueError("ring too large for exhaustive enumeration")
    E = np.indices((m,) * n).reshape(n, -1).T.astype(np.int64)
    red = np.array(R._red, dtype=np.int64)         # (2n-1, n)

    def mul(X, Y):
        prod = np.zeros((len(X), 2 * n - 1), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                prod[:, i + j] += X[:, i] * Y[:, j] % m
        return prod % m @ red % m

    # a unit is exactly an element whose norm is prime to p
    norms = _batched_norm(E, R)
    unit = norms % p != 0
    U = E[unit]
    Un = norms[unit]
    sq = mul(U, U)
    w = m ** np.arange(n, dtype=np.int64)
    sq_keys = np.unique(sq @ w)
    classes = len(U) // len(sq_keys)
    one = np.zeros(n, dtype=np.int64)
    one[0] = 1
    tors_mask = np.all(sq == one, axis=1)
    fiber = {}
    bits = np.array([norm_class_bits(int(v), p) for v in Un])
    for b in np.unique(bits):
        fiber[norm_class_rep(int(b), p)] = int(np.count_nonzero(bits == b)) // len(sq_keys)
    return {
        "units": len(U),
        "square_classes": classes,
        "two_torsion_finite": int(np.count_nonzero(tors_mask)),
        "norm_fiber": fiber,
    }


def _batched_norm(E, R):
    n, m = R.n, R.m
    red = np.array(R._red, dtype=np.int64)
    # multiplication matrix columns: a * x^i
    cols = []
    for i in range(n):
        prod = np.zeros((len(E), 2 * n - 1), dtype=np.int64)
        prod[:, i:i + n] = E
        cols.append(prod @ red % m)
    M = np.stack(cols, axis=2)                 # (batch, n, n), column i = a x^i
    from .pairs import _batched_det
    return _batched_det(M, m)


# ---------------------------------------------------------------------------
# maximality and ramification

def dedekind_is_p_maximal(f, p) -> bool:
    """Dedekind criterion: gcd(M mod p, g, h) = 1 with M = (g h - f) / p."""
    f = as_monic(f)
    if not is_prime(p):
        raise ValueError("p must be prime")
    low = f.low
    _, facs = factor_mod_low([c % p for c in low], p)
    g = [1]
    h = [1]
    for q, e in facs:
        g = ip_mul(g, q)
        for _ in range(e - 1):
            h = ip_mul(h, q)
    diff = ip_sub(ip_mul(g, h), low)
    if any(c % p for c in diff):
        raise ArithmeticError("g h does not reduce to f")
    Mbar = pm_trim([c // p for c in diff], p)
    d = pm_gcd(pm_gcd(Mbar, pm_trim(g, p), p), pm_trim(h, p), p) if Mbar else pm_gcd(pm_trim(g, p), pm_trim(h, p), p)
    return len(d) == 1


def residue_factorization(f, p):
    """[(degree, exponent)] of the irreducible factors of f mod p."""
    f = as_monic(f)
    _, facs = factor_mod_low([c % p for c in f.low], p)
    return [(len(g) - 1, e) for g, e in facs]


def is_evenly_ramified(f, p) -> bool:
    if not dedekind_is_p_maximal(f, p):
        raise ValueError("f is not p-maximal")
    return all(e % 2 == 0 for _, e in residue_factorization(f, p))


def _multiplicity_factor(f, p):
    """2 when every p-adic irreducible factor of a maximal f has even degree, else 1.

    Orbits of the orthogonal group on a fiber map onto norm-square classes,
    and the map is 2-to-1 exactly in this case.
    """
    return 2 if all((d * e) % 2 == 0 for d, e in residue_factorization(f, p)) else 1


def two_torsion_norm_one(f, p, k):
    """|R^x[2]_{N=1}| for maximal f, from the sign elements 1 - 2 e_S.

    The primitive idempotents e_i are CRT lifts Hensel-refined by
    e <- 3e^2 - 2e^3; norms of the sign elements are computed in the ring.
    """
    R = FiniteQuotientRing(f, p, k)
    _, facs = factor_mod_low(R.f_low, p)
    fbar = pm_trim(R.f_low, p)
    idem = []
    for i in range(len(facs)):
        # idempotent mod p: 1 mod g_i^e_i, 0 mod the other prime powers
        blocks = []
        for g, e in facs:
            q = [1]
            for _ in range(e):
                q = pm_mul(q, g, p)
            blocks.append(q)
        other = [1]
        for j, q in enumerate(blocks):
            if j != i:
                other = pm_mul(other, q, p)
        _, s, _ = pm_xgcd(other, blocks[i], p)
        e0 = R.elem(pm_rem(pm_mul(other, s, p), fbar, p))
        for _ in range(k + 1):
            e2 = R.mul(e0, e0)
            e3 = R.mul(e2, e0)
            e0 = tuple((3 * a - 2 * b) % R.m for a, b in zip(e2, e3))
        if R.mul(e0, e0) != e0:
            raise ArithmeticError("idempotent lift failed")
        idem.append(e0)
    count = 0
    for S in itertools.product((0, 1), repeat=len(idem)):
        eS = [0] * R.n
        for bit, e in zip(S, idem):
            if bit:
                eS = [a + b for a, b in zip(eS, e)]
        eps = R.elem([(1 if i == 0 else 0) - 2 * c for i, c in enumerate(eS)])
        if R.mul(eps, eps) != R.one():
            raise ArithmeticError("sign element is not 2-torsion")
        nm = R.norm(eps)
        if nm == 1 % R.m:
            count += 1
        elif nm != R.m - 1:
            raise ArithmeticError("sign element norm is not +-1")
    return count


def default_precision(f, p) -> int:
    return 2 * _vp(as_monic(f).disc(), p) + 3


def _stable_data(f, p, k=None, max_extra=4):
    k = default_precision(f, p) if k is None else k
    for kk in range(k, k + max_extra + 1):
        data = unit_square_classes(f, p, kk)
        if data.stable:
            return data
    raise ArithmeticError(f"square classes did not stabilise by precision {k + max_extra}")


def _check_mass_input(f, p):
    f = as_monic(f)
    if not is_prime(p):
        raise ValueError("p must be prime")
    if f.disc() == 0:
        raise ValueError("f must be squarefree")
    if not dedekind_is_p_maximal(f, p):
        raise ValueError("f is not p-maximal; no mass formula is claimed")
    if p == 2 and is_evenly_ramified(f, 2):
        raise ValueError("evenly ramified at 2: no mass formula is claimed")
    return f


@dataclass
class MassDetail:
    mass: Fraction
    square_classes_norm_square: int
    two_torsion_norm_one: int
    multiplicity: int
    precision: int


def total_mass_detail(f, p, k=None) -> MassDetail:
    f = _check_mass_input(f, p)
    data = _stable_data(f, p, k)
    num = data.norm_fiber[1]
    den = two_torsion_norm_one(f, p, data.k)
    c = _multiplicity_factor(f, p)
    return MassDetail(Fraction(c * num, den), num, den, c, data.k)


def total_mass(f, p, k=None) -> Fraction:
    """c * |(R^x/R^x2)_{N = square}| / |R^x[2]_{N=1}| for p-maximal f."""
    return total_mass_detail(f, p, k).mass


def total_mass_pm(f, p, sign, k=None) -> Fraction:
    """|(R^x/R^x2)_{N = sign mod squares}| / |R^x[2]|."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    f = _check_mass_input(f, p)
    data = _stable_data(f, p, k)
    target = norm_class_rep(norm_class_bits(sign % data.p ** data.k, p), p)
    num = data.norm_fiber.get(target, 0)
    return Fraction(num, data.count_two_torsion)


# ---------------------------------------------------------------------------
# local conditions and densities

@dataclass(frozen=True)
class LocalCondition:
    p: int
    k: int
    n: int
    residues: frozenset          # tuples (a_1, ..., a_n) mod p^k

    def __post_init__(self):
        if not self.residues:
            raise ValueError("a local condition needs at least one residue")
        m = self.p ** self.k
        object.__setattr__(self, "residues",
                           frozenset(tuple(int(a) % m for a in r) for r in self.residues))

    @classmethod
    def all_residues(cls, n, p, k, predicate=None):
        m = p ** k
        res = [a for a in itertools.product(range(m), repeat=n)
               if predicate is None or predicate(MonicForm(n, a))]
        return cls(p, k, n, frozenset(res))


@dataclass
class DensityReport:
    density: Optional[Fraction]
    evenly_ramified: int
    classified: int
    non_maximal: list
    insufficient_precision: list


def classify_residue(a, p, k):
    """'even', 'odd', 'non-maximal' or 'insufficient' for the class of x^n + a_1 x^(n-1) + ..."""
    f = MonicForm(len(a), a)
    facs = residue_factorization(f, p)
    if k == 1 and any(e > 1 for _, e in facs):
        # maximality depends on f mod p^2
        return "insufficient"
    if not dedekind_is_p_maximal(f, p):
        return "non-maximal"
    return "even" if all(e % 2 == 0 for _, e in facs) else "odd"


def ramification_density(sigma: LocalCondition) -> DensityReport:
    """Density of evenly ramified residues among the maximal, determined ones.

    Non-maximal residues and residues whose status needs more precision are
    listed separately and excluded from the density.
    """
    even = 0
    classified = 0
    nonmax = []
    insufficient = []
    for a in sorted(sigma.residues):
        c = classify_residue(a, sigma.p, sigma.k)
        if c == "insufficient":
            insufficient.append(a)
        elif c == "non-maximal":
            nonmax.append(a)
        else:
            classified += 1
            even += c == "even"
    density = Fraction(even, classified) if classified else None
    return DensityReport(density, even, classified, nonmax, insufficient)
