import itertools
from fractions import Fraction

import pytest

from amass import cusp
from amass.cusp import CoordinateSet


def test_weight_examples_n4():
    assert cusp.coordinate_weight(1, 1, 4, 2).t == (-2, 0)
    assert cusp.coordinate_weight(1, 3, 4, 2).t == (-1, 1)
    assert cusp.coordinate_weight(4, 4, 4, 2).t == (2, 0)
    with pytest.raises(ValueError):
        cusp.coordinate_weight(3, 2, 4, 2)
    with pytest.raises(ValueError):
        cusp.coordinate_weight(1, 1, 4, 3)


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_total_weight_is_trivial(n):
    for m in range(1, n // 2 + 1):
        w = None
        for i, j in cusp.all_coordinates(n):
            c = cusp.coordinate_weight(i, j, n, m)
            w = c if w is None else w * c
        assert all(e == 0 for e in w.t) and all(e == 0 for e in w.s)


def test_t_to_s_roundtrip_split_case():
    # m = n/2: t_{m-1}^2 = s_{m-1} s_m and t_m^2 = s_m / s_{m-1}
    n, m = 6, 3
    s = cusp.t_to_s((0, 1, 0), n, m)
    assert s[1:] == (Fraction(1, 2), Fraction(1, 2))
    s = cusp.t_to_s((0, 0, 1), n, m)
    assert s[1:] == (Fraction(-1, 2), Fraction(1, 2))


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_haar_weight_matches_closed_form(n):
    for m in range(1, n // 2 + 1):
        assert cusp.haar_weight(n, m).s == cusp.haar_s_closed_form(n, m)


def test_closed_subsets_n4():
    subsets = [sorted(S.members) for S in cusp.enumerate_closed_subsets(4, 2)]
    assert subsets == [[], [(1, 1)], [(1, 1), (1, 2)]]


@pytest.mark.parametrize("n", [4, 6, 8])
def test_closed_subsets_match_brute_force(n):
    for m in range(1, n // 2 + 1):
        U = cusp.u0(n, m)
        brute = set()
        for r in range(len(U) + 1):
            for S in itertools.combinations(U, r):
                S = set(S)
                if (not S or (1, 1) in S) and cusp.is_closed(S, n, m):
                    brute.add(frozenset(S))
        got = [S.members for S in cusp.enumerate_closed_subsets(n, m)]
        assert len(got) == len(set(got)) and set(got) == brute


def test_enumeration_budget():
    with pytest.raises(RuntimeError):
        list(cusp.enumerate_closed_subsets(10, 4, budget=5))


def test_base_case_just_barely():
    S = CoordinateSet(4, 2, frozenset({(1, 1)}))
    assert cusp.integral_exponent(S, tilde=True) == 8
    assert cusp.integral_exponent(S) == -1


def test_closed_form_examples():
    assert cusp.closed_form_u0(6, 2) == -2
    assert cusp.closed_form_empty(6, 1) == -4
    assert cusp.integral_exponent(CoordinateSet(6, 2, frozenset(cusp.u0(6, 2))), "formal") == -2
    assert cusp.integral_exponent(CoordinateSet(6, 1, frozenset()), "formal") == -4


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_boundary_closed_forms_where_derived(n):
    for b in cusp.verify_cusp_bounds(n).boundary:
        if b["closed_form_applies"]:
            assert b["empty_formal"] == b["empty_closed_form"]
            assert b["u0_formal"] == b["u0_closed_form"]


def test_split_case_closed_forms_differ():
    # the displayed closed forms assume dim F_0 > 0
    b = cusp.verify_cusp_bounds(4).boundary[-1]
    assert b["m"] == 2 and not b["closed_form_applies"]
    assert b["empty_formal"] != b["empty_closed_form"]


@pytest.mark.parametrize("n,count", [(4, 2), (6, 19), (8, 90), (10, 371)])
def test_verify_bounds(n, count):
    rep = cusp.verify_cusp_bounds(n)
    assert rep.passed and rep.checked == count and rep.violations == []


def test_verify_bounds_range():
    with pytest.raises(ValueError):
        cusp.verify_cusp_bounds(12)


@pytest.mark.parametrize("n", [6, 8])
def test_monotone_under_moving_a_coordinate_up_left(n):
    for m in range(1, n // 2 + 1):
        sets = {S.members: S for S in cusp.enumerate_closed_subsets(n, m)}
        U = set(cusp.u0(n, m))
        for members, S in sets.items():
            e = cusp.integral_exponent(S, tilde=True)
            for (i0, j0) in members:
                for (i, j) in U - members:
                    if i <= i0 and j <= j0:
                        T = (members - {(i0, j0)}) | {(i, j)}
                        if T in sets:
                            assert cusp.integral_exponent(sets[T], tilde=True) >= e


def test_report_json_is_strings():
    js = cusp.verify_cusp_bounds(4, keep_table=True).to_json()
    assert js["passed"] is True
    assert all(isinstance(row[2], str) for row in js["table"])
