import itertools
import math

import numpy as np
import pytest
from sympy import jacobi_symbol

from amass import gauss
from amass.gauss import BQF


def kronecker(D, n):
    """(D/n) for a discriminant D and n >= 1."""
    out = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        out *= 1 if D % 8 in (1, 7) else -1
    return out * (jacobi_symbol(D % n, n) if n > 1 else 1)


def analytic_class_number(D):
    """Dirichlet's class number formula for a fundamental discriminant."""
    if D < 0:
        w = {-3: 6, -4: 4}.get(D, 2)
        return round(-w / (2 * abs(D)) * sum(kronecker(D, a) * a for a in range(1, -D)))
    X, Y, _ = gauss.fundamental_unit(D)
    eps = (X + Y * math.sqrt(D)) / 2
    s = -sum(kronecker(D, a) * math.log(math.sin(math.pi * a / D)) for a in range(1, D))
    return round(s / (2 * math.log(eps)))


def test_reduce_definite_examples():
    assert gauss.reduce_form(BQF(5, 4, 1)) == BQF(1, 0, 1)
    assert gauss.reduce_form(BQF(1, 1, 4)) == BQF(1, 1, 4)
    assert gauss.reduce_form(BQF(2, 1, 2)) == BQF(2, 1, 2)
    with pytest.raises(ValueError):
        gauss.reduce_form(BQF(1, 2, 1))
    with pytest.raises(ValueError):
        gauss.reduce_form(BQF(2, 2, 2))


def test_reduction_is_class_invariant():
    rng = np.random.default_rng(0)
    for D in (-15, -23, -84, -163, -420):
        G = gauss.class_group(D)
        for f in G.reps:
            for _ in range(10):
                g = f.transform(gauss.random_sl2(rng))
                assert g.disc == D
                r = gauss.reduce_definite(g)
                assert r == f and gauss.reduce_definite(r) == r


def test_indefinite_cycles_are_class_invariant():
    rng = np.random.default_rng(1)
    for D in (21, 40, 60, 145, 229):
        G = gauss.class_group(D)
        for i, f in enumerate(G.reps):
            for _ in range(10):
                assert G.class_of(f.transform(gauss.random_sl2(rng))) == i


def test_small_groups():
    assert gauss.narrow_two_torsion(-15) == 2
    assert gauss.narrow_two_torsion(-4) == 1
    assert gauss.narrow_two_torsion(21) == 2
    assert gauss.narrow_two_torsion(-3) == 1
    assert [tuple(f) for f in gauss.class_group(-15).reps] == [(1, 1, 4), (2, 1, 2)]
    with pytest.raises(ValueError):
        gauss.narrow_two_torsion(-12)
    with pytest.raises(ValueError):
        gauss.class_group(16)


def test_fundamental_discriminants():
    assert [D for D in range(-30, 31) if gauss.is_fundamental(D)] == [
        -24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24, 28, 29]


@pytest.mark.parametrize("D", [D for D in range(-700, -2) if gauss.is_fundamental(D)][::5])
def test_definite_class_number_matches_analytic(D):
    assert gauss.class_numbers(D)[0] == analytic_class_number(D)


@pytest.mark.parametrize("D", [D for D in range(5, 700) if gauss.is_fundamental(D)][::4])
def test_indefinite_class_number_matches_analytic(D):
    h, hp = gauss.class_numbers(D)
    assert h == analytic_class_number(D)
    assert hp in (h, 2 * h)


@pytest.mark.parametrize("D", [-84, -420, -231, 60, 145, 221, 420])
def test_group_axioms(D):
    G = gauss.class_group(D)
    T = G.table()
    e = G.identity()
    r = range(G.order)
    for i in r:
        assert T[e][i] == T[i][e] == i
        assert sorted(T[i]) == list(r)
        assert T[i][G.class_of(BQF(G.reps[i].a, -G.reps[i].b, G.reps[i].c))] == e
    for i, j, k in itertools.product(r, repeat=3):
        assert T[T[i][j]][k] == T[i][T[j][k]]
        assert T[i][j] == T[j][i]


def test_ambiguous_forms_square_to_identity():
    for D in (-420, -84, 60, 221):
        G = gauss.class_group(D)
        for i in G.two_torsion():
            assert G.mul(i, i) == G.identity()


def _smallest_unit(D):
    for y in itertools.count(1):
        for N in (-1, 1):
            t = D * y * y + 4 * N
            x = math.isqrt(t) if t >= 0 else -1
            if x >= 0 and x * x == t:
                return x, y, N


def test_pell_unit_matches_brute_force():
    for D in gauss.fundamental_discriminants(5, 200):
        X, Y, N = gauss.fundamental_unit(D)
        assert X * X - D * Y * Y == 4 * N
        assert (X, Y, N) == _smallest_unit(D)


@pytest.mark.parametrize("D", [D for D in range(5, 401) if gauss.is_fundamental(D)])
def test_norm_minus_one_matches_pell(D):
    assert gauss.norm_minus_one_unit(D) == gauss.pell_norm_minus_one(D)
    h, hp = gauss.class_numbers(D)
    assert (hp == h) == gauss.pell_norm_minus_one(D)


def test_genus_theory_small_ranges():
    assert gauss.genus_theory_check(-2000, -1).passed
    assert gauss.genus_theory_check(1, 2000).passed


def test_survey_schema_and_consistency():
    rows = gauss.empirical_survey(-200, 200)
    assert all(len(r) == 5 for r in rows)
    assert [abs(r[0]) for r in rows] == sorted(abs(r[0]) for r in rows)
    summary = gauss.survey_summary(rows)
    neg = gauss.genus_theory_check(-200, -1)
    pos = gauss.genus_theory_check(1, 200)
    assert summary["count"] == neg.checked + pos.checked
    for D, w, h, hp, t in rows:
        assert t == 2 ** (w - 1)


def test_prime_discriminants_have_odd_class_number():
    for p in (3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83):
        assert gauss.narrow_two_torsion(-p) == 1
        assert gauss.class_numbers(-p)[0] % 2 == 1


def test_composition_preserves_discriminant():
    with pytest.raises(ValueError):
        gauss.compose(BQF(1, 1, 4), BQF(1, 0, 1))
