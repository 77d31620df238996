# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; same interface as amass._pykernels."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


class BudgetExceeded(RuntimeError):
    pass


cdef inline long long _mod(long long a, long long m) nogil:
    a %= m
    return a + m if a < 0 else a


cdef struct Ctx:
    int n
    long long m
    long long detmod
    long long nvec
    long long *V        # nvec x n
    long long *AV       # nvec x n
    long long *A        # n x n
    int *cand           # (n levels) x n targets x nvec
    long long *cnt      # n x n
    long long *cols     # n x n, column-major: cols[j*n + i]
    long long total_o
    long long total_so
    long long nodes
    long long budget
    int over


cdef long long _det_mod(long long *M, int n, long long m) nogil:
    # Laplace expansion by subset dynamic programming, entries M[i*n+j]
    cdef long long D[64]
    cdef long long E[64]
    cdef int S, j, r, k, bits, sgn
    if n == 0:
        return 1 % m
    for S in range(1 << n):
        D[S] = 0
    D[0] = 1
    # process columns 0..n-1; D[S] = det of rows S (sorted) x cols 0..|S|-1
    for k in range(n):
        for S in range(1 << n):
            E[S] = 0
        for S in range(1 << n):
            if D[S] == 0:
                continue
            bits = 0
            for r in range(n):
                if (S >> r) & 1:
                    bits += 1
            if bits != k:
                continue
            for r in range(n):
                if (S >> r) & 1:
                    continue
                # sign: number of rows in S greater than r
                sgn = 0
                for j in range(r + 1, n):
                    if (S >> j) & 1:
                        sgn += 1
                if sgn & 1:
                    E[S | (1 << r)] = _mod(E[S | (1 << r)] - D[S] * M[r * n + k], m)
                else:
                    E[S | (1 << r)] = _mod(E[S | (1 << r)] + D[S] * M[r * n + k], m)
        for S in range(1 << n):
            D[S] = E[S]
    return D[(1 << n) - 1]


cdef void _rec(Ctx *c, int level) nogil:
    cdef int n = c.n
    cdef long long m = c.m
    cdef long long nvec = c.nvec
    cdef int *src
    cdef int *dst
    cdef long long i, k, idx, w, s, cntv
    cdef int t, r, q
    cdef long long M[36]
    cdef long long cof[6]
    cdef long long d
    if level == n - 1:
        cntv = c.cnt[level * n + (n - 1)]
        c.total_o += cntv
        if cntv == 0:
            return
        # cofactor of the last column entries
        for r in range(n):
            for i in range(n):
                for q in range(n - 1):
                    M[i * n + q] = c.cols[q * n + i]
                M[i * n + (n - 1)] = 1 if i == r else 0
            cof[r] = _det_mod(M, n, m)
        src = c.cand + (level * n + (n - 1)) * nvec
        for k in range(cntv):
            idx = src[k]
            d = 0
            for r in range(n):
                d += c.V[idx * n + r] * cof[r]
            d = _mod(d, m)
            if _mod(d, c.detmod) == 1 % c.detmod:
                c.total_so += 1
        return
    src = c.cand + (level * n + level) * nvec
    for k in range(c.cnt[level * n + level]):
        c.nodes += 1
        if c.nodes > c.budget:
            c.over = 1
            return
        idx = src[k]
        for r in range(n):
            c.cols[level * n + r] = c.V[idx * n + r]
        for t in range(level + 1, n):
            dst = c.cand + ((level + 1) * n + t) * nvec
            w = 0
            for i in range(c.cnt[level * n + t]):
                q = c.cand[(level * n + t) * nvec + i]
                s = 0
                for r in range(n):
                    s += c.V[q * n + r] * c.AV[idx * n + r]
                if _mod(s, m) == c.A[level * n + t]:
                    dst[w] = q
                    w += 1
            c.cnt[(level + 1) * n + t] = w
        _rec(c, level + 1)
        if c.over:
            return


def count_orthogonal(A, long long m, long long detmod, long long budget=10 ** 8):
    """Count g mod m with g^T A g = A; returns (|O|, #{det g = 1 mod detmod})."""
    cdef int n = len(A)
    if n > 6:
        raise ValueError("compiled kernel supports n <= 6")
    An = np.array(A, dtype=np.int64) % m
    grids = np.indices((m,) * n).reshape(n, -1).T
    cdef cnp.ndarray[cnp.int64_t, ndim=2] V = np.ascontiguousarray(grids, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] AV = np.ascontiguousarray(V @ An % m)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] Ac = np.ascontiguousarray(An)
    norms = np.einsum("ij,ij->i", V, AV) % m
    cdef long long nvec = V.shape[0]
    cdef Ctx c
    c.n = n
    c.m = m
    c.detmod = detmod
    c.nvec = nvec
    c.V = <long long *> V.data
    c.AV = <long long *> AV.data
    c.A = <long long *> Ac.data
    c.cand = <int *> malloc(n * n * nvec * sizeof(int))
    c.cnt = <long long *> malloc(n * n * sizeof(long long))
    c.cols = <long long *> malloc(n * n * sizeof(long long))
    c.total_o = 0
    c.total_so = 0
    c.nodes = 0
    c.budget = budget
    c.over = 0
    cdef int t
    cdef long long i
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sel
    try:
        for t in range(n):
            sel = np.ascontiguousarray(np.nonzero(norms == An[t, t])[0], dtype=np.int64)
            for i in range(sel.shape[0]):
                c.cand[t * nvec + i] = <int> sel[i]
            c.cnt[t] = sel.shape[0]
        with nogil:
            _rec(&c, 0)
        if c.over:
            raise BudgetExceeded("orthogonal group enumeration budget exceeded")
        return int(c.total_o), int(c.total_so)
    finally:
        free(c.cand)
        free(c.cnt)
        free(c.cols)


cdef inline long long _d3(long long a, long long b, long long c, long long d,
                          long long e, long long f, long long g, long long h,
                          long long i) nogil:
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def sym4_charpoly_hist(long long p, dinv):
    """Histogram of char polys of D^-1 B over all symmetric 4x4 B mod p."""
    cdef long long w1 = int(dinv[0]) % p, w2 = int(dinv[1]) % p
    cdef long long w3 = int(dinv[2]) % p, w4 = int(dinv[3]) % p
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hist = np.zeros(p ** 4, dtype=np.int64)
    cdef long long *H = <long long *> hist.data
    cdef long long b11, b12, b13, b14, b22, b23, b24, b33, b34, t
    cdef long long a1, a2, a3, a4, s1, s2, s3, s4, e1, e2, e3, e4
    cdef long long m12, m13, m23, m123, c12, c13, c14, det0, detb
    cdef long long p2 = p * p, p3 = p * p * p
    with nogil:
        for b11 in range(p):
            for b12 in range(p):
                for b13 in range(p):
                    for b14 in range(p):
                        for b22 in range(p):
                            m12 = b11 * b22 - b12 * b12
                            for b23 in range(p):
                                for b24 in range(p):
                                    for b33 in range(p):
                                        m13 = b11 * b33 - b13 * b13
                                        m23 = b22 * b33 - b23 * b23
                                        m123 = _d3(b11, b12, b13, b12, b22, b23, b13, b23, b33)
                                        for b34 in range(p):
                                            # every coefficient is affine in b44:
                                            # e_k = a_k + s_k * b44
                                            a1 = w1 * b11 + w2 * b22 + w3 * b33
                                            s1 = w4
                                            a2 = (w1 * w2 * m12 + w1 * w3 * m13 + w2 * w3 * m23
                                                  - w1 * w4 * b14 * b14 - w2 * w4 * b24 * b24
                                                  - w3 * w4 * b34 * b34)
                                            s2 = w4 * (w1 * b11 + w2 * b22 + w3 * b33)
                                            # principal 3-minors with b44 = 0
                                            a3 = w1 * w2 * w3 * m123
                                            a3 += w1 * w2 * w4 * _d3(b11, b12, b14, b12, b22, b24, b14, b24, 0)
                                            a3 += w1 * w3 * w4 * _d3(b11, b13, b14, b13, b33, b34, b14, b34, 0)
                                            a3 += w2 * w3 * w4 * _d3(b22, b23, b24, b23, b33, b34, b24, b34, 0)
                                            s3 = w4 * (w1 * w2 * m12 + w1 * w3 * m13 + w2 * w3 * m23)
                                            # det with b44 = 0 and its b44 coefficient m123
                                            c12 = _d3(b12, b23, b24, b13, b33, b34, b14, b34, 0)
                                            c13 = _d3(b12, b22, b24, b13, b23, b34, b14, b24, 0)
                                            c14 = _d3(b12, b22, b23, b13, b23, b33, b14, b24, b34)
                                            det0 = (b11 * _d3(b22, b23, b24, b23, b33, b34, b24, b34, 0)
                                                    - b12 * c12 + b13 * c13 - b14 * c14)
                                            a4 = w1 * w2 * w3 * w4 * det0
                                            s4 = w1 * w2 * w3 * w4 * m123
                                            a1 = _mod(a1, p)
                                            a2 = _mod(a2, p)
                                            a3 = _mod(a3, p)
                                            a4 = _mod(a4, p)
                                            s2 = _mod(s2, p)
                                            s3 = _mod(s3, p)
                                            s4 = _mod(s4, p)
                                            e1 = a1
                                            e2 = a2
                                            e3 = a3
                                            e4 = a4
                                            for t in range(p):
                                                H[e1 + p * e2 + p2 * e3 + p3 * e4] += 1
                                                e1 += s1
                                                if e1 >= p:
                                                    e1 -= p
                                                e2 += s2
                                                if e2 >= p:
                                                    e2 -= p
                                                e3 += s3
                                                if e3 >= p:
                                                    e3 -= p
                                                e4 += s4
                                                if e4 >= p:
                                                    e4 -= p
    return hist
