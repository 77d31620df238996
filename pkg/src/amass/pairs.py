"""Pairs of symmetric matrices: resolvent, vanishing patterns, fibers and orbits mod p."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import kernels
from .algebra import BinaryForm, det_int, det_pencil, is_prime
from .monogen import as_monic

DEFAULT_BUDGET = 10 ** 8


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True)
class SymMatrix:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix not symmetric at ({i},{j})")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self):
        return [list(r) for r in self.entries]

    def array(self):
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def det(self) -> int:
        return det_int(self.tolist())

    def upper(self) -> tuple:
        n = self.n
        return tuple(self.entries[i][j] for i in range(n) for j in range(i, n))

    @classmethod
    def from_upper(cls, n, upper):
        m = [[0] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = int(next(it))
        return cls(m)

    @classmethod
    def diag(cls, values):
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def transform(self, g):
        """g^T M g for an integer matrix g."""
        g = [list(r) for r in g]
        n = self.n
        mg = [[sum(self.entries[i][k] * g[k][j] for k in range(n)) for j in range(n)]
              for i in range(n)]
        return SymMatrix([[sum(g[k][i] * mg[k][j] for k in range(n)) for j in range(n)]
                          for i in range(n)])

    def encode(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.entries)


def as_sym(M) -> SymMatrix:
    return M if isinstance(M, SymMatrix) else SymMatrix(M)


def parse_matrix(text: str) -> SymMatrix:
    """Parse "0,1;1,0" (rows separated by ';')."""
    rows = []
    for r, chunk in enumerate(text.split(";")):
        row = []
        for c, s in enumerate(chunk.split(",")):
            try:
                row.append(int(s.strip()))
            except ValueError:
                raise ValueError(f"bad integer {s.strip()!r} at row {r}, column {c}") from None
        rows.append(row)
    return SymMatrix(rows)


@dataclass(frozen=True)
class SymPair:
    A: SymMatrix
    B: SymMatrix

    def __post_init__(self):
        object.__setattr__(self, "A", as_sym(self.A))
        object.__setattr__(self, "B", as_sym(self.B))
        if self.A.n != self.B.n:
            raise ValueError("A and B must have the same size")
        if self.A.n % 2:
            raise ValueError("n must be even")

    @property
    def n(self) -> int:
        return self.A.n

    def transform(self, g) -> "SymPair":
        return SymPair(self.A.transform(g), self.B.transform(g))


@dataclass
class OrbitReport:
    orbit_count: int
    orbits: list          # (representative SymMatrix B, stabiliser size)
    group_order: int
    fiber_size: int
    mass: Fraction = field(default=Fraction(0))


# ---------------------------------------------------------------------------
# resolvent and patterns

def resolvent(pair: SymPair) -> BinaryForm:
    """(-1)^(n/2) det(Ax - By)."""
    f = det_pencil(pair.A.tolist(), pair.B.tolist())
    return -f if (pair.n // 2) % 2 else f


class ModifiedSquares:
    def __repr__(self):
        return "ModifiedSquares"

    def __eq__(self, other):
        return isinstance(other, ModifiedSquares)

    def __hash__(self):
        return hash("ModifiedSquares")


@dataclass(frozen=True)
class Rectangle:
    k: int


def _is_modified_square(pair):
    h = pair.n // 2
    for i in range(h):
        for j in range(h):
            if pair.A[i, j]:
                return False
            if (i, j) != (h - 1, h - 1) and pair.B[i, j]:
                return False
    return pair.B[h - 1, h - 1] != 0


def _is_rectangle(pair, k):
    n = pair.n
    return all(pair.A[i, j] == 0 and pair.B[i, j] == 0
               for i in range(k) for j in range(n - k))


def reducibility_pattern(pair: SymPair):
    """Literal coordinate-vanishing check: ModifiedSquares, Rectangle(k) or None."""
    if _is_modified_square(pair):
        return ModifiedSquares()
    for k in range(1, pair.n // 2 + 1):
        if _is_rectangle(pair, k):
            return Rectangle(k)
    return None


def distinguished_translate_mod_p(pair: SymPair, p: int) -> Optional[tuple]:
    """Search F_p for a basis change putting (A, B) into the modified-squares shape.

    Only n in {2, 4}.  Returns the pair of vectors (u, v) spanning the
    A-isotropic plane (u is None when n = 2), or None when no translate exists.
    """
    n = pair.n
    if n not in (2, 4):
        raise ValueError("bounded search implemented for n = 2, 4")
    A = pair.A.array() % p
    B = pair.B.array() % p
    V = kernels.all_vectors(n, p)[1:]
    qa = np.einsum("ij,jk,ik->i", V, A, V) % p
    qb = np.einsum("ij,jk,ik->i", V, B, V) % p
    if n == 2:
        hits = np.nonzero((qa == 0) & (qb != 0))[0]
        return (None, tuple(V[hits[0]])) if len(hits) else None
    for iu in np.nonzero((qa == 0) & (qb == 0))[0]:
        u = V[iu]
        ok = (qa == 0) & (qb != 0) & ((V @ A @ u) % p == 0) & ((V @ B @ u) % p == 0)
        hits = np.nonzero(ok)[0]
        if len(hits):
            return tuple(u), tuple(V[hits[0]])
    return None


# ---------------------------------------------------------------------------
# batched exact linear algebra mod m

def _batched_det(M, m):
    """Determinants mod m of a batch (..., k, k) of int64 matrices."""
    k = M.shape[-1]
    if k == 0:
        return np.ones(M.shape[:-2], dtype=np.int64)
    if k == 1:
        return M[..., 0, 0] % m
    if k == 2:
        return (M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]) % m
    out = np.zeros(M.shape[:-2], dtype=np.int64)
    for j in range(k):
        cols = [c for c in range(k) if c != j]
        minor = _batched_det(M[..., 1:, cols], m)
        term = (M[..., 0, j] * minor) % m
        out = (out + term) % m if j % 2 == 0 else (out - term) % m
    return out


def _charpoly_low(M, m):
    """Low-first coefficients of det(x - M) mod m for a batch of n x n matrices.

    Uses e_k = sum of principal k-minors, so no division is needed.
    """
    n = M.shape[-1]
    coeffs = np.zeros(M.shape[:-2] + (n + 1,), dtype=np.int64)
    coeffs[..., n] = 1
    for k in range(1, n + 1):
        e = np.zeros(M.shape[:-2], dtype=np.int64)
        for S in itertools.combinations(range(n), k):
            e = (e + _batched_det(M[..., list(S)][..., list(S), :], m)) % m
        coeffs[..., n - k] = e if k % 2 == 0 else (-e) % m
    return coeffs


def _inverse_mod(A, m):
    """Inverse of an integer matrix mod m via the adjugate."""
    n = len(A)
    d = det_int(A)
    dinv = pow(d % m, -1, m)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[A[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            adj[i][j] = (-1) ** (i + j) * det_int(minor)
    return np.array([[adj[i][j] * dinv % m for j in range(n)] for i in range(n)],
                    dtype=np.int64)


def _upper_index(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _sym_from_upper(U, n):
    """Batch (..., N) of upper triangles to (..., n, n) symmetric arrays."""
    out = np.zeros(U.shape[:-1] + (n, n), dtype=np.int64)
    for t, (i, j) in enumerate(_upper_index(n)):
        out[..., i, j] = U[..., t]
        out[..., j, i] = U[..., t]
    return out


def _fiber_charpolys(Ainv, U, m):
    n = Ainv.shape[0]
    B = _sym_from_upper(U, n)
    M = np.einsum("ij,bjk->bik", Ainv, B) % m
    return _charpoly_low(M, m)


def _check_unit_det(A, p):
    if det_int(A.tolist()) % p == 0:
        raise ValueError(f"A is singular mod {p}")


def _check_odd_prime(p):
    if not is_prime(p):
        raise ValueError("p must be prime")


# ---------------------------------------------------------------------------
# fibers

def enumerate_fiber(A, f, p, budget=10 ** 7, chunk_rows=None):
    """Every symmetric B mod p with charpoly(A^-1 B) = f mod p, as upper triangles.

    Equivalently resolvent(A, B) = c f with c = (-1)^(n/2) det A.  The
    search is partitioned by the first row of B.
    """
    A = as_sym(A)
    f = as_monic(f)
    _check_odd_prime(p)
    _check_unit_det(A, p)
    n = A.n
    if f.n != n:
        raise ValueError("degree of f must equal the size of A")
    N = n * (n + 1) // 2
    if p ** N > budget:
        raise kernels.BudgetExceeded(f"fiber enumeration needs {p ** N} matrices")
    Ainv = _inverse_mod(A.tolist(), p)
    target = np.array([c % p for c in f.low], dtype=np.int64)
    head = kernels.all_vectors(n, p)          # first row b_11..b_1n
    tail = kernels.all_vectors(N - n, p)
    found = []
    for h in head:
        U = np.concatenate([np.broadcast_to(h, (len(tail), n)), tail], axis=1)
        cp = _fiber_charpolys(Ainv, U, p)
        hit = np.all(cp == target, axis=1)
        if hit.any():
            found.append(U[hit])
    if not found:
        return np.zeros((0, N), dtype=np.int64)
    return np.concatenate(found)


def _jacobian_lift_count(Ainv, U0, f_low, p, j, n):
    """Lift data for one solution U0 mod p^j to p^(j+1).

    Returns (rank, particular solution or None).  The linearization is exact
    because p^(2j) vanishes mod p^(j+1) for j >= 1.
    """
    mod = p ** (j + 1)
    N = len(U0)
    base = _fiber_charpolys(Ainv, U0[None, :], mod)[0]
    rhs = ((np.array(f_low, dtype=np.int64) - base) % mod) // p ** j % p
    steps = np.tile(U0, (N, 1))
    steps[np.arange(N), np.arange(N)] += p ** j
    cols = _fiber_charpolys(Ainv, steps, mod)
    J = ((cols - base) % mod // p ** j % p).T      # (n+1) x N, last row is 0
    return _solve_mod_p(J[:n], rhs[:n], p)


def _solve_mod_p(J, rhs, p):
    """Row-reduce [J | rhs] over F_p: (rank, particular solution or None, nullspace basis)."""
    rows, cols = J.shape
    M = np.concatenate([J % p, (rhs % p)[:, None]], axis=1).astype(np.int64)
    piv_cols = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if M[i, c]), None)
        if pr is None:
            continue
        M[[r, pr]] = M[[pr, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    if any(M[i, cols] for i in range(r, rows)):
        return r, None, None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(piv_cols):
        x[c] = M[i, cols]
    free = [c for c in range(cols) if c not in piv_cols]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, c in enumerate(piv_cols):
            v[c] = (-M[i, fc]) % p
        basis.append(v)
    return r, x, basis


def fiber_count_mod_pk(A, f, p, k, budget=10 ** 7):
    """#{B mod p^k symmetric : charpoly(A^-1 B) = f mod p^k} by Hensel-style lifting.

    Solutions mod p come from enumerate_fiber; each level is lifted through
    the exact linearization.  Only the final level is counted rather than listed.
    """
    A = as_sym(A)
    f = as_monic(f)
    n = A.n
    N = n * (n + 1) // 2
    sols = enumerate_fiber(A, f, p, budget=budget)
    if k == 1:
        return len(sols)
    Ainv = _inverse_mod(A.tolist(), p ** k)
    f_low = f.low
    for j in range(1, k):
        last = j == k - 1
        total = 0
        nxt = []
        for U0 in sols:
            rank, x, basis = _jacobian_lift_count(Ainv, U0, f_low, p, j, n)
            if x is None:
                continue
            if last:
                total += p ** (N - rank)
                continue
            combos = kernels.all_vectors(len(basis), p) if basis else np.zeros((1, 0), dtype=np.int64)
            lifts = (x + combos @ np.array(basis, dtype=np.int64).reshape(len(basis), N)) % p
            nxt.append(U0 + p ** j * lifts)
            if sum(len(a) for a in nxt) > budget:
                raise kernels.BudgetExceeded("lifted fiber exceeds budget")
        if last:
            return total
        sols = np.concatenate(nxt) if nxt else np.zeros((0, N), dtype=np.int64)
    return len(sols)


def brute_fiber_count(A, f, m):
    """Direct count over all symmetric B mod m (tiny cases only)."""
    A = as_sym(A)
    f = as_monic(f)
    n = A.n
    N = n * (n + 1) // 2
    Ainv = _inverse_mod(A.tolist(), m)
    U = kernels.all_vectors(N, m)
    cp = _fiber_charpolys(Ainv, U, m)
    target = np.array([c % m for c in f.low], dtype=np.int64)
    return int(np.count_nonzero(np.all(cp == target, axis=1)))


def diagonalize_mod_p(A, p):
    """(P, d) with P^T A P = diag(d) mod p, p odd, det A a unit."""
    A = as_sym(A)
    n = A.n
    M = [[x % p for x in r] for r in A.entries]
    P = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst, src, c):
        # column dst += c * column src on P, and congruence on M
        for r in range(n):
            P[r][dst] = (P[r][dst] + c * P[r][src]) % p
        for r in range(n):
            M[r][dst] = (M[r][dst] + c * M[r][src]) % p
        for r in range(n):
            M[dst][r] = (M[dst][r] + c * M[src][r]) % p

    def swap(a, b):
        for r in range(n):
            P[r][a], P[r][b] = P[r][b], P[r][a]
        M[a], M[b] = M[b], M[a]
        for r in range(n):
            M[r][a], M[r][b] = M[r][b], M[r][a]

    for t in range(n):
        if M[t][t] == 0:
            s = next((s for s in range(t + 1, n) if M[s][s]), None)
            if s is not None:
                swap(t, s)
            else:
                s = next((s for s in range(t + 1, n) if M[t][s]), None)
                if s is None:
                    raise ValueError(f"A is singular mod {p}")
                col_op(t, s, 1)
        inv = pow(M[t][t], -1, p)
        for s in range(t + 1, n):
            if M[t][s]:
                col_op(s, t, (-M[t][s] * inv) % p)
    return P, [M[i][i] for i in range(n)]


def fiber_histogram(A, p):
    """Map low-first coefficient tuple of f -> #fiber mod p, for every monic f."""
    A = as_sym(A)
    _check_odd_prime(p)
    if p == 2:
        raise ValueError("p must be odd")
    _check_unit_det(A, p)
    n = A.n
    if n == 4:
        _, d = diagonalize_mod_p(A, p)
        dinv = [pow(x, -1, p) for x in d]
        hist = kernels.sym4_charpoly_hist(p, dinv)
        out = {}
        for idx in np.nonzero(hist)[0]:
            e = []
            r = int(idx)
            for _ in range(4):
                r, c = divmod(r, p)
                e.append(c)
            e1, e2, e3, e4 = e
            out[(e4 % p, (-e3) % p, e2 % p, (-e1) % p, 1)] = int(hist[idx])
        return out
    N = n * (n + 1) // 2
    Ainv = _inverse_mod(A.tolist(), p)
    cp = _fiber_charpolys(Ainv, kernels.all_vectors(N, p), p)
    keys, counts = np.unique(cp, axis=0, return_counts=True)
    return {tuple(int(x) for x in k): int(c) for k, c in zip(keys, counts)}


def orthogonal_group_order(A, p, k=1, budget=DEFAULT_BUDGET):
    """(|SO_A(Z/p^k)|, |O_A(Z/p^k)|).

    For odd p, SO means det = 1 mod p.  For p = 2 and k >= 2 it means
    det = 1 mod 4; at k = 1 every orthogonal matrix has det 1.
    """
    A = as_sym(A)
    if A.det() % p == 0:
        raise ValueError(f"det A must be a unit mod {p}")
    m = p ** k
    detmod = p if p != 2 else (4 if k >= 2 else 2)
    o, so = kernels.count_orthogonal(A.tolist(), m, detmod, budget)
    return so, o


def special_orthogonal_elements(A, p, budget=10 ** 7):
    A = as_sym(A)
    G = kernels.orthogonal_elements(A.tolist(), p, budget)
    dets = _batched_det(G, p)
    return G[dets == 1 % p]


def fiber_orbits_mod_p(A, f, p, budget=10 ** 7) -> OrbitReport:
    """Split the fiber over f mod p into SO_A(F_p)-orbits with stabiliser sizes."""
    A = as_sym(A)
    f = as_monic(f)
    _check_odd_prime(p)
    if p == 2:
        raise ValueError("p must be odd")
    n = A.n
    if n not in (2, 4):
        raise ValueError("orbit enumeration supports n = 2, 4")
    fiber = enumerate_fiber(A, f, p, budget=budget)
    G = special_orthogonal_elements(A, p, budget=budget)
    order = len(G)
    weights = p ** np.arange(fiber.shape[1], dtype=np.int64)
    keys = fiber @ weights
    index = {int(x): i for i, x in enumerate(keys)}
    seen = np.zeros(len(fiber), dtype=bool)
    iu = np.triu_indices(n)
    orbits = []
    for i in range(len(fiber)):
        if seen[i]:
            continue
        B = _sym_from_upper(fiber[i], n)
        images = np.einsum("gji,jk,gkl->gil", G, B, G) % p
        ikeys = images[:, iu[0], iu[1]] @ weights
        uniq = np.unique(ikeys)
        for key in uniq:
            j = index.get(int(key))
            if j is None:
                raise AssertionError("orbit left the fiber")
            seen[j] = True
        stab = int(np.count_nonzero(ikeys == keys[i]))
        if stab * len(uniq) != order:
            raise AssertionError("orbit-stabiliser mismatch")
        orbits.append((SymMatrix(B.tolist()), stab))
    mass = sum((Fraction(1, s) for _, s in orbits), Fraction(0))
    if mass != Fraction(len(fiber), order):
        raise AssertionError("mass identity failed")
    return OrbitReport(len(orbits), orbits, order, len(fiber), mass)


def fiber_mass(A, f, p, k=1, budget=10 ** 7) -> Fraction:
    """#fiber(Z/p^k) / |SO_A(Z/p^k)|."""
    cnt = fiber_count_mod_pk(A, f, p, k, budget=budget)
    so, _ = orthogonal_group_order(A, p, k)
    return Fraction(cnt, so)


# ---------------------------------------------------------------------------
# Type II exclusion over F_2

@dataclass
class Type2Report:
    n: int
    matrices_checked: int
    passed: bool
    witness: Optional[SymMatrix] = None


def _antidiagonal(n):
    return [[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)]


def type2_resolvent_image(n: int) -> Type2Report:
    """Check det(Ax - B) over F_2 has only even powers of x for every symmetric B.

    A is the anti-diagonal form.  The 2^(n(n+1)/2) matrices are bit-sliced,
    64 to a machine word, and the determinant (= permanent over F_2) is
    built column by column over subsets of rows.
    """
    if n % 2 or n < 2 or n > 6:
        raise ValueError("n must be even with 2 <= n <= 6")
    A = _antidiagonal(n)
    ut = _upper_index(n)
    N = len(ut)
    total = 1 << N
    idx = np.arange(total, dtype=np.int64)
    pad = (-total) % 64

    def plane(bits):
        bits = np.concatenate([bits.astype(np.uint8), np.zeros(pad, dtype=np.uint8)])
        return np.packbits(bits, bitorder="little").view(np.uint64)

    words = (total + pad) // 64
    b = [[None] * n for _ in range(n)]
    for t, (i, j) in enumerate(ut):
        b[i][j] = b[j][i] = plane((idx >> t) & 1)
    zero = np.zeros(words, dtype=np.uint64)
    # D[S][d] = bit-plane of the x^d coefficient of the permanent on rows S
    D = {0: [~zero]}
    for k in range(n):
        E = {}
        for S, planes in D.items():
            for r in range(n):
                if S >> r & 1:
                    continue
                # multiply by (a_rk x + b_rk)
                prod = [planes[d] & b[r][k] for d in range(len(planes))] + [zero]
                if A[r][k]:
                    for d in range(len(planes)):
                        prod[d + 1] = prod[d + 1] ^ planes[d]
                T = S | (1 << r)
                if T in E:
                    E[T] = [x ^ y for x, y in zip(E[T], prod)]
                else:
                    E[T] = prod
        D = E
    planes = D[(1 << n) - 1]
    valid = plane(np.ones(total, dtype=np.uint8))
    bad = zero.copy()
    for d in range(1, n + 1, 2):
        bad |= planes[d] & valid
    if not bad.any():
        return Type2Report(n, total, True)
    w = int(np.nonzero(bad)[0][0])
    word = int(bad[w])
    i = w * 64 + (word & -word).bit_length() - 1
    upper = [(i >> t) & 1 for t in range(N)]
    return Type2Report(n, total, False, SymMatrix.from_upper(n, upper))
