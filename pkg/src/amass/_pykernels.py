"""Pure-Python (numpy) implementations of the enumeration kernels.

Selected automatically when the compiled extension is unavailable, and
kept as the reference the compiled core is benchmarked and tested against.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import det_int


class BudgetExceeded(RuntimeError):
    pass


def all_vectors(n, m):
    """Every vector of (Z/m)^n, lexicographic, as an int64 array."""
    grids = np.indices((m,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def count_orthogonal(A, m, detmod, budget=10 ** 8):
    """Count g mod m with g^T A g = A, returning (|O|, #{det g = 1 mod detmod}).

    Columns are chosen one at a time; the candidate list for every later
    column is filtered by the Gram constraints against each placed column.
    """
    n = len(A)
    A = np.array(A, dtype=np.int64) % m
    V = all_vectors(n, m)
    AV = V @ A % m
    norms = np.einsum("ij,ij->i", V, AV) % m
    cands = [np.nonzero(norms == A[t, t])[0] for t in range(n)]
    total_o = 0
    total_so = 0
    nodes = 0
    cols = []

    def cofactors():
        # C_r = (-1)^(r+n-1) * minor(r, n-1) for the matrix with columns cols
        out = []
        for r in range(n):
            rows = [i for i in range(n) if i != r]
            minor = [[int(cols[j][i]) for j in range(n - 1)] for i in rows]
            out.append((-1) ** (r + n - 1) * det_int(minor))
        return np.array(out, dtype=np.int64) % m

    def rec(level, lists):
        nonlocal total_o, total_so, nodes
        if level == n - 1:
            last = lists[n - 1]
            total_o += len(last)
            if len(last):
                if n == 1:
                    dets = V[last][:, 0] % m
                else:
                    dets = V[last] @ cofactors() % m
                total_so += int(np.count_nonzero(dets % detmod == 1 % detmod))
            return
        for idx in lists[level]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("orthogonal group enumeration budget exceeded")
            av = AV[idx]
            new = list(lists)
            for t in range(level + 1, n):
                c = lists[t]
                if len(c):
                    new[t] = c[(V[c] @ av) % m == A[level, t]]
            cols.append(V[idx])
            rec(level + 1, new)
            cols.pop()

    rec(0, cands)
    return total_o, total_so


def orthogonal_elements(A, m, budget=10 ** 7):
    """All g mod m with g^T A g = A, as an array of shape (count, n, n)."""
    n = len(A)
    A = np.array(A, dtype=np.int64) % m
    V = all_vectors(n, m)
    AV = V @ A % m
    norms = np.einsum("ij,ij->i", V, AV) % m
    cands = [np.nonzero(norms == A[t, t])[0] for t in range(n)]
    found = []
    cols = []
    nodes = 0

    def rec(level, lists):
        nonlocal nodes
        for idx in lists[level]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded("orthogonal group enumeration budget exceeded")
            if level == n - 1:
                found.append(np.stack(cols + [V[idx]], axis=1))
                continue
            av = AV[idx]
            new = list(lists)
            for t in range(level + 1, n):
                c = lists[t]
                if len(c):
                    new[t] = c[(V[c] @ av) % m == A[level, t]]
            cols.append(V[idx])
            rec(level + 1, new)
            cols.pop()

    rec(0, cands)
    if not found:
        return np.zeros((0, n, n), dtype=np.int64)
    return np.array(found, dtype=np.int64)


def _det3(a, b, c, d, e, f, g, h, i):
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def sym4_charpoly_hist(p, dinv):
    """Histogram of char polys of D^-1 B over all symmetric 4x4 B mod p.

    D = diag(d_i) with dinv = (d_i^-1 mod p).  The char poly is
    x^4 - e1 x^3 + e2 x^2 - e3 x + e4 and the histogram index is
    e1 + p e2 + p^2 e3 + p^3 e4.
    """
    w = [int(x) % p for x in dinv]
    # remaining six entries b22 b23 b24 b33 b34 b44 vectorized
    g = np.indices((p,) * 6).reshape(6, -1).astype(np.int64)
    b22, b23, b24, b33, b34, b44 = g
    w1, w2, w3, w4 = w
    # minors not involving row/col 1
    m23 = b22 * b33 - b23 * b23
    m24 = b22 * b44 - b24 * b24
    m34 = b33 * b44 - b34 * b34
    m234 = _det3(b22, b23, b24, b23, b33, b34, b24, b34, b44)
    e1_rest = w2 * b22 + w3 * b33 + w4 * b44
    e2_rest = w2 * w3 * m23 + w2 * w4 * m24 + w3 * w4 * m34
    e3_rest = w2 * w3 * w4 * m234
    hist = np.zeros(p ** 4, dtype=np.int64)
    for b11, b12, b13, b14 in itertools.product(range(p), repeat=4):
        m12 = b11 * b22 - b12 * b12
        m13 = b11 * b33 - b13 * b13
        m14 = b11 * b44 - b14 * b14
        m123 = _det3(b11, b12, b13, b12, b22, b23, b13, b23, b33)
        m124 = _det3(b11, b12, b14, b12, b22, b24, b14, b24, b44)
        m134 = _det3(b11, b13, b14, b13, b33, b34, b14, b34, b44)
        # 4x4 determinant by expansion along the first row
        c11 = m234
        c12 = _det3(b12, b23, b24, b13, b33, b34, b14, b34, b44)
        c13 = _det3(b12, b22, b24, b13, b23, b34, b14, b24, b44)
        c14 = _det3(b12, b22, b23, b13, b23, b33, b14, b24, b34)
        det = b11 * c11 - b12 * c12 + b13 * c13 - b14 * c14
        e1 = (w1 * b11 + e1_rest) % p
        e2 = (w1 * (w2 * m12 + w3 * m13 + w4 * m14) + e2_rest) % p
        e3 = (w1 * (w2 * w3 * m123 + w2 * w4 * m124 + w3 * w4 * m134) + e3_rest) % p
        e4 = (w1 * w2 * w3 * w4 * det) % p
        idx = e1 + p * (e2 + p * (e3 + p * e4))
        hist += np.bincount(idx, minlength=p ** 4)
    return hist
