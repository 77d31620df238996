import itertools
import random

import pytest
import sympy
from sympy.abc import x

from amass import algebra
from amass.algebra import IntPoly


def sym(low):
    return sympy.Poly(list(reversed(low)), x)


@pytest.mark.parametrize("seed", range(20))
def test_det_int_matches_sympy(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
    assert algebra.det_int(M) == sympy.Matrix(M).det()


def test_det_int_singular_and_empty():
    assert algebra.det_int([[1, 2], [2, 4]]) == 0
    assert algebra.det_int([]) == 1


@pytest.mark.parametrize("seed", range(15))
def test_resultant_and_disc_match_sympy(seed):
    rng = random.Random(seed)
    f = [rng.randint(-5, 5) for _ in range(rng.randint(2, 5))] + [1]
    g = [rng.randint(-5, 5) for _ in range(rng.randint(1, 4))] + [1]
    assert algebra.resultant(f, g) == sympy.resultant(sym(f), sym(g))
    assert algebra.poly_disc(IntPoly.from_low(f)) == sympy.discriminant(sym(f))


def test_poly_disc_known_values():
    assert algebra.poly_disc(IntPoly((1, 0, 0, 1, 1))) == 229
    assert algebra.poly_disc(IntPoly((1, 0, 1))) == -4
    with pytest.raises(ValueError):
        algebra.poly_disc(IntPoly((2, 0, 1)))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_factor_mod_matches_exhaustive(p):
    rng = random.Random(p)
    for _ in range(25):
        f = [rng.randrange(p) for _ in range(rng.randint(1, 6))] + [1]
        _, fast = algebra.factor_mod_low(f, p)
        assert fast == algebra.factor_mod_exhaustive(f, p)


@pytest.mark.parametrize("p", [3, 5, 11])
def test_factor_mod_matches_sympy_degrees(p):
    rng = random.Random(100 + p)
    for _ in range(20):
        f = [rng.randrange(p) for _ in range(6)] + [1]
        _, ours = algebra.factor_mod_low(f, p)
        _, theirs = sympy.factor_list(sym(f).as_expr(), modulus=p)
        assert sorted((len(g) - 1, e) for g, e in ours) == \
            sorted((sympy.degree(g, x), e) for g, e in theirs)


def test_factor_mod_rejects_zero_and_composite():
    with pytest.raises(ValueError):
        algebra.factor_mod_low([0, 0], 5)
    with pytest.raises(ValueError):
        algebra.factor_mod(algebra.ModPoly(6, (1, 0, 1)))


@pytest.mark.parametrize("seed", range(20))
def test_count_real_roots_matches_sympy(seed):
    rng = random.Random(seed)
    f = IntPoly((1,) + tuple(rng.randint(-6, 6) for _ in range(rng.choice([2, 4, 6]))))
    if algebra.poly_disc(f) == 0:
        return
    assert algebra.count_real_roots(f) == len(sympy.real_roots(sym(f.low)))


def test_count_real_roots_rejects_repeated_roots():
    with pytest.raises(ValueError):
        algebra.count_real_roots(IntPoly((1, -2, 1)))


@pytest.mark.parametrize("seed", range(10))
def test_det_pencil_matches_sympy(seed):
    rng = random.Random(seed)
    n = rng.choice([2, 3, 4])
    A = sympy.zeros(n)
    B = sympy.zeros(n)
    for i in range(n):
        for j in range(i, n):
            A[i, j] = A[j, i] = rng.randint(-3, 3)
            B[i, j] = B[j, i] = rng.randint(-3, 3)
    y = sympy.Symbol("y")
    expect = sympy.Poly((A * x - B * y).det(), x, y)
    got = algebra.det_pencil(A.tolist(), B.tolist())
    for i, c in enumerate(got.coeffs):
        assert c == expect.coeff_monomial(x ** (n - i) * y ** i)


def test_smith_invariants():
    assert algebra.smith_invariants([[2, 0], [0, 3]]) == [1, 6]
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert algebra.smith_invariants(M) == [2, 6, 12]


def test_rank_mod2():
    assert algebra.rank_mod2([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert algebra.rank_mod2([[2, 4], [6, 8]]) == 0


def test_binomial_progression_sum():
    for N in range(0, 12):
        for M in (1, 2, 4):
            total = sum(algebra.binomial_progression_sum(N, a, M) for a in range(M))
            assert total == 2 ** N
    assert algebra.binomial_progression_sum(4, 0, 4) == 2


def test_is_prime():
    primes = [p for p in range(200) if algebra.is_prime(p)]
    assert primes == list(sympy.primerange(0, 200))


def test_poly_strings():
    assert str(IntPoly((1, 0, -1, 0, 1))) == "x^4 - x^2 + 1"
    assert str(algebra.BinaryForm((1, 0, -2))) == "x^2 - 2y^2"


def test_count_real_roots_four_real():
    assert algebra.count_real_roots(IntPoly((1, 0, -5, 0, 4))) == 4
    assert algebra.count_real_roots(IntPoly((1, 0, 0, 0, 1))) == 0


def test_pm_xgcd_bezout():
    p = 7
    for a, b in itertools.product([[1, 1], [3, 0, 1]], [[2, 5, 1], [6, 1]]):
        g, s, t = algebra.pm_xgcd(a, b, p)
        lhs = algebra.pm_add(algebra.pm_mul(a, s, p), algebra.pm_mul(b, t, p), p)
        assert algebra.pm_trim(lhs, p) == algebra.pm_trim(g, p)
