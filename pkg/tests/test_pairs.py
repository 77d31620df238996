import random
from fractions import Fraction

import pytest
import sympy

from amass import localmass, pairs
from amass.algebra import BinaryForm, poly_disc
from amass.monogen import MonicForm
from amass.pairs import SymMatrix, SymPair

H2 = SymMatrix([[0, 1], [1, 0]])


def rand_sym(rng, n, lo=-3, hi=3):
    return SymMatrix.from_upper(n, [rng.randint(lo, hi) for _ in range(n * (n + 1) // 2)])


def rand_unimodular(rng, n, steps=10):
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-2, 2)
        for r in range(n):
            g[r][j] += k * g[r][i]
    if rng.random() < 0.5:
        for r in range(n):
            g[r][0] = -g[r][0]
    return g


def test_symmatrix_validation_and_encoding():
    with pytest.raises(ValueError):
        SymMatrix([[1, 2], [3, 4]])
    M = pairs.parse_matrix("0,1;1,0")
    assert M == H2 and M.encode() == "0,1;1,0"
    with pytest.raises(ValueError, match="row 1, column 0"):
        pairs.parse_matrix("1,0;q,1")
    with pytest.raises(ValueError):
        SymPair(SymMatrix.diag([1, 1, 1]), SymMatrix.diag([0, 0, 0]))


def test_resolvent_examples():
    assert pairs.resolvent(SymPair(H2, SymMatrix.diag([1, -1]))) == BinaryForm((1, 0, 1))
    assert pairs.resolvent(SymPair(H2, SymMatrix.diag([1, 1]))) == BinaryForm((1, 0, -1))
    I4 = SymMatrix.diag([1, 1, 1, 1])
    assert pairs.resolvent(SymPair(I4, SymMatrix.diag([0] * 4))) == BinaryForm((1, 0, 0, 0, 0))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_resolvent_matches_sympy_determinant(n):
    rng = random.Random(n)
    x, y = sympy.symbols("x y")
    for _ in range(3):
        A, B = rand_sym(rng, n), rand_sym(rng, n)
        expect = (-1) ** (n // 2) * (sympy.Matrix(A.tolist()) * x - sympy.Matrix(B.tolist()) * y).det()
        P = sympy.Poly(expect, x, y)
        got = pairs.resolvent(SymPair(A, B))
        assert list(got.coeffs) == [P.coeff_monomial(x ** (n - i) * y ** i) for i in range(n + 1)]


@pytest.mark.parametrize("n", [2, 4, 6])
def test_resolvent_invariant_under_sl_pm(n):
    rng = random.Random(10 + n)
    for _ in range(25):
        P = SymPair(rand_sym(rng, n), rand_sym(rng, n))
        assert pairs.resolvent(P.transform(rand_unimodular(rng, n))) == pairs.resolvent(P)


def test_reducibility_patterns():
    A = SymMatrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    B = SymMatrix([[0, 0, 2, 1], [0, 1, 0, 3], [2, 0, 1, 0], [1, 3, 0, 2]])
    assert pairs.reducibility_pattern(SymPair(A, B)) == pairs.ModifiedSquares()
    rng = random.Random(0)
    assert pairs.reducibility_pattern(SymPair(rand_sym(rng, 4, 1, 5), rand_sym(rng, 4, 1, 5))) is None


@pytest.mark.parametrize("n,k", [(4, 1), (6, 1), (6, 2)])
def test_rectangle_forces_repeated_roots(n, k):
    rng = random.Random(100 * n + k)
    for _ in range(40):
        A, B = [[[0] * n for _ in range(n)] for _ in range(2)]
        for M in (A, B):
            for i in range(n):
                for j in range(i, n):
                    if not (i < k and j < n - k) and not (j < k and i < n - k):
                        M[i][j] = M[j][i] = rng.randint(-3, 3)
        P = SymPair(SymMatrix(A), SymMatrix(B))
        assert pairs.reducibility_pattern(P) is not None
        assert pairs._is_rectangle(P, k)
        f = pairs.resolvent(P)
        if f.coeffs[0] == 0:
            continue
        poly = sympy.Poly(list(f.coeffs), sympy.Symbol("x"))
        assert sympy.discriminant(poly) == 0


def test_orthogonal_group_small_cases():
    so, o = pairs.orthogonal_group_order(SymMatrix.diag([1, 1]), 3)
    assert (so, o) == (4, 8)
    with pytest.raises(ValueError):
        pairs.orthogonal_group_order(SymMatrix.diag([3, 1]), 3)


@pytest.mark.parametrize("A", [SymMatrix.diag([1, 1]), H2, SymMatrix.diag([1, 1, 1, 1]),
                               SymMatrix.diag([1, 2, 1, 1])])
def test_orthogonal_group_lifting(A):
    n = A.n
    so1, o1 = pairs.orthogonal_group_order(A, 3, 1)
    so2, o2 = pairs.orthogonal_group_order(A, 3, 2)
    assert o1 == 2 * so1 and o2 == 2 * so2
    assert so2 == 3 ** (n * (n - 1) // 2) * so1


def test_enumerate_fiber_matches_brute():
    A = SymMatrix.diag([1, 2])
    for a in [(0, 1), (1, 1), (2, 0), (0, 0)]:
        f = MonicForm(2, a)
        assert len(pairs.enumerate_fiber(A, f, 5)) == pairs.brute_fiber_count(A, f, 5)


@pytest.mark.parametrize("A", [SymMatrix.diag([1, 1]), H2, SymMatrix.diag([1, 2])])
def test_fiber_lifting_matches_brute_mod_9(A):
    for a in [(0, 1), (1, 2), (0, -1), (3, 0)]:
        f = MonicForm(2, a)
        assert pairs.fiber_count_mod_pk(A, f, 3, 2) == pairs.brute_fiber_count(A, f, 9)


def test_orbit_report_i4():
    f = MonicForm(4, (0, 0, 1, 1))
    rep = pairs.fiber_orbits_mod_p(SymMatrix.diag([1, 1, 1, 1]), f, 3)
    assert rep.mass == 1
    assert rep.group_order == 576
    assert sum(Fraction(rep.group_order, s) for _, s in rep.orbits) == rep.fiber_size
    # f irreducible mod 3: every stabiliser has the same size
    assert len({s for _, s in rep.orbits}) == 1


def test_orbit_mass_matches_local_mass_n2():
    f = MonicForm(2, (0, 1))
    rep = pairs.fiber_orbits_mod_p(H2, f, 5)
    assert rep.mass == localmass.total_mass(f, 5)


def test_fiber_histogram_matches_direct_fiber():
    A = SymMatrix.diag([1, 1, 1, 1])
    hist = pairs.fiber_histogram(A, 3)
    assert sum(hist.values()) == 3 ** 10
    for a in [(0, 0, 1, 1), (1, 0, 2, 1), (0, 0, 0, 0)]:
        f = MonicForm(4, a)
        key = tuple(c % 3 for c in f.low)
        assert hist.get(key, 0) == len(pairs.enumerate_fiber(A, f, 3))


@pytest.mark.parametrize("n,count", [(2, 8), (4, 1024), (6, 2 ** 21)])
def test_type2_exclusion(n, count):
    rep = pairs.type2_resolvent_image(n)
    assert rep.passed and rep.matrices_checked == count and rep.witness is None


def test_type2_literal_small_case():
    # direct F_2 determinants for n = 2
    A = [[0, 1], [1, 0]]
    for b in range(8):
        B = SymMatrix.from_upper(2, [(b >> t) & 1 for t in range(3)])
        f = pairs.resolvent(SymPair(SymMatrix(A), B))
        assert f.coeffs[1] % 2 == 0


def test_distinguished_translate_mod_p():
    A = SymMatrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    B = SymMatrix([[0, 0, 2, 1], [0, 1, 0, 3], [2, 0, 1, 0], [1, 3, 0, 2]])
    assert pairs.distinguished_translate_mod_p(SymPair(A, B), 3) is not None


def test_disc_of_monic_resolvent():
    rng = random.Random(5)
    A = SymMatrix.diag([1, 1, 1, 1])
    for _ in range(10):
        B = rand_sym(rng, 4)
        f = pairs.resolvent(SymPair(A, B))
        assert f.coeffs[0] == 1
        assert poly_disc(f.dehomogenize()) == sympy.discriminant(
            sympy.Matrix(B.tolist()).charpoly().as_expr())


def test_first_rows_zero_is_rectangle_one():
    A = SymMatrix([[0, 0, 0, 0], [0, 1, 2, 0], [0, 2, 0, 1], [0, 0, 1, 3]])
    B = SymMatrix([[0, 0, 0, 0], [0, 2, 1, 1], [0, 1, 1, 0], [0, 1, 0, 1]])
    P = SymPair(A, B)
    assert pairs.reducibility_pattern(P) == pairs.Rectangle(1)
    assert all(c == 0 for c in pairs.resolvent(P).coeffs)
