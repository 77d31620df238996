import itertools
import random
from fractions import Fraction

import pytest
import sympy
from sympy.abc import x

from amass import monogen
from amass.monogen import MonicForm


def test_from_coeffs_and_low():
    f = MonicForm.from_coeffs([1, 0, 0, 1, 1])
    assert f.a == (0, 0, 1, 1)
    assert f.low == [1, 1, 0, 0, 1]
    assert f.disc() == 229
    with pytest.raises(ValueError):
        MonicForm.from_coeffs([2, 1])
    with pytest.raises(ValueError):
        MonicForm(4, (1, 2))


def test_parse_poly_reports_position():
    assert monogen.parse_poly("1, 0, -1").a == (0, -1)
    with pytest.raises(ValueError, match="position 2"):
        monogen.parse_poly("1,0,z,1")
    with pytest.raises(ValueError, match="position 0"):
        monogen.parse_poly("3,0,1")


@pytest.mark.parametrize("m", [-3, -1, 1, 2])
def test_translate_matches_sympy(m):
    rng = random.Random(m)
    for _ in range(10):
        a = tuple(rng.randint(-4, 4) for _ in range(4))
        f = MonicForm(4, a)
        expect = sympy.Poly(sympy.Poly([1, *a], x).as_expr().subs(x, x + m), x).all_coeffs()
        assert list(monogen.translate_action(f, m).coeffs) == expect


def test_translation_preserves_discriminant():
    for a in itertools.product(range(-2, 3), repeat=4):
        f = MonicForm(4, a)
        assert monogen.translate_action(f, 3).disc() == f.disc()
        assert monogen.sign_action(f).disc() == f.disc()


def test_canonicalize_is_idempotent_and_orbit_constant():
    rng = random.Random(3)
    for _ in range(200):
        f = MonicForm(4, tuple(rng.randint(-5, 5) for _ in range(4)))
        c = monogen.canonicalize(f)
        assert monogen.canonicalize(c.rep).rep == c.rep
        assert 0 <= -c.rep.a[0] < 4
        g = monogen.translate_action(monogen.sign_action(f), rng.randint(-4, 4))
        assert monogen.canonicalize(g).rep == c.rep


def test_height_is_exact():
    f = MonicForm(2, (1, 2))
    assert monogen.height_leq(f, Fraction(3, 2))        # 2 <= 9/4
    assert not monogen.height_leq(f, Fraction(7, 5))    # 2 > 49/25
    with pytest.raises(ValueError):
        monogen.height_leq(f, 0)


@pytest.mark.parametrize("n,X", [(2, 3), (4, 1), (4, 2), (4, Fraction(3, 2)), (6, 1)])
def test_enumeration_count_closed_form(n, X):
    got = sum(1 for _ in monogen.enumerate_monic(n, X))
    assert got == monogen.enumeration_count(n, X)


def test_enumeration_matches_height_filter():
    X = Fraction(5, 2)
    brute = {a for a in itertools.product(range(-20, 21), repeat=2)
             if monogen.height_leq(MonicForm(2, a), X)}
    assert {f.a for f in monogen.enumerate_monic(2, X)} == brute


def test_enumerate_partitions_by_box():
    full = list(monogen.enumerate_monic(4, 1))
    parts = []
    for lo, hi in ((-1, -1), (0, 1)):
        parts += list(monogen.enumerate_monic(4, 1, box=[(lo, hi)] + [(-99, 99)] * 3))
    assert sorted(f.a for f in parts) == sorted(f.a for f in full)


def test_dedup_sign_picks_canonical_reps():
    reps = list(monogen.enumerate_monic(4, 2, dedup_sign=True))
    assert all(monogen.canonicalize(f).rep == f for f in reps)


def test_signature_matches_sympy():
    rng = random.Random(8)
    for _ in range(30):
        f = MonicForm(4, tuple(rng.randint(-5, 5) for _ in range(4)))
        if f.disc() == 0:
            continue
        r1 = len(sympy.real_roots(sympy.Poly(list(f.coeffs), x)))
        assert monogen.signature(f) == (r1, (4 - r1) // 2)


def test_signature_filter():
    fs = list(monogen.enumerate_monic(4, 1, signature_filter=(0, 2)))
    assert fs and all(monogen.signature(f) == (0, 2) for f in fs)
