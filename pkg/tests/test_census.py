import math
from collections import Counter
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from linklab import census, cmap, tangle
from linklab.errors import DomainError


@pytest.fixture(scope="module")
def sq_maps():
    return {n: cmap.enumerate_sq(n) for n in range(2, 8)}


def test_v3_v8_against_mpmath():
    mpmath.mp.dps = 30
    v3 = mpmath.clsin(2, mpmath.pi / 3)
    v8 = 4 * mpmath.catalan
    assert census.V3 == pytest.approx(float(v3), abs=1e-15)
    assert census.V8 == pytest.approx(float(v8), abs=1e-15)


def test_count_q_small():
    assert [census.count_q(n) for n in range(1, 6)] == [2, 9, 54, 378, 2916]


def test_count_sq_against_enumeration(sq_maps):
    for n, maps in sq_maps.items():
        assert census.count_sq(n) == len(maps)


def test_count_sq_m_against_enumeration(sq_maps):
    for n in (4, 5, 6, 7):
        root_faces = Counter(len(cmap.root_face(m)) for m in sq_maps[n])
        for m in range(2, n + 1):
            assert census.count_sq_m(n, m) == root_faces.get(m, 0)


@given(st.integers(2, 60))
def test_count_sq_m_sums_to_count_sq(n):
    assert sum(census.count_sq_m(n, m) for m in range(2, n + 1)) == census.count_sq(n)


def test_expected_m_gons_is_exact(sq_maps):
    # rooted average of the number of m-gons equals (4n/m) P(n, m) with no correction
    for n in (5, 6, 7):
        maps = sq_maps[n]
        for m in (2, 3, 4):
            total = sum(sum(1 for d in x.face_degrees() if d == m) for x in maps)
            assert Fraction(total, len(maps)) == census.expected_m_gons(n, m)


@given(st.integers(4, 300))
def test_p_n2_product_form(n):
    exact, asym, resid = census.p_n2_expansion(n)
    assert exact == census.prob_root_face(n, 2)
    assert resid == pytest.approx(float(exact) - asym, abs=1e-15)


def test_p_n2_domain():
    with pytest.raises(DomainError):
        census.p_n2_expansion(3)


def test_count_q_boundary_against_enumeration():
    for n in range(0, 4):
        for p in range(1, 4):
            if n < p - 1:
                continue
            assert census.count_q_boundary(n, p) == len(tangle.enumerate_bounded(n, p)), (n, p)


def test_count_q_boundary_p1_is_count_q_shifted():
    # p = 1: a doubled edge sealed into a digon; Q(n, 1) = |Q(n)| for n >= 1
    for n in range(1, 8):
        assert census.count_q_boundary(n, 1) == census.count_q(n)


def test_tangle_prob_values():
    assert census.tangle_prob(1, 2, 3) == Fraction(census.count_q_boundary(2, 2), 54)
    assert census.tangle_prob(1, 4, 2) == 0
    with pytest.raises(DomainError):
        census.tangle_prob(3, 1, 3)


def test_tangle_prob_limit():
    for n, p in [(1, 2), (2, 1), (3, 2)]:
        assert float(census.tangle_prob(n, p, 4000)) == pytest.approx(
            census.tangle_prob_limit(n, p), rel=5e-3)


def test_rooting_expectation():
    c = 200
    assert census.expected_rooting_count(1, 2, c) == pytest.approx(
        4 * c * float(census.tangle_prob(1, 2, c)) / 2)
    assert census.expected_rooting_count(1, 2, 10**4) / 10**4 == pytest.approx(
        census.expected_rooting_count_limit(1, 2), rel=1e-3)
    with pytest.raises(DomainError):
        census.expected_rooting_count(5, 2, 5)


def test_volume_bound_slopes():
    assert round(census.LOWER_SLOPE, 4) == 0.3571
    assert round(census.PRE_OCTAHEDRAL_UPPER_SLOPE, 4) == 7.1422
    assert round(census.UPPER_SLOPE, 4) == 3.6639


def test_volume_bounds_from_twist():
    b = census.volume_bounds_from_twist(3, 7)
    assert b.lower == pytest.approx(census.V3 / 2)
    assert b.upper == pytest.approx(20 * census.V3)
    assert census.volume_bounds_from_twist(1, 5).lower == 0
    assert census.volume_bounds_from_twist(50, 50).upper == pytest.approx(50 * census.V8)
    with pytest.raises(DomainError):
        census.volume_bounds_from_twist(0, 5)


def test_expected_twist_and_bounds():
    exact = census.p_n2_expansion(1000)[0]
    assert census.expected_twist(1000) == pytest.approx(1000 - 2000 * float(exact))
    assert census.expected_twist(1000) == pytest.approx(702.9614, abs=1e-4)
    b = census.expected_volume_bounds(100)
    assert b.lower < b.upper


def test_factorial_table_and_cap():
    assert census.factorial(20) == math.factorial(20)
    old = census.factorial.cap
    census.set_factorial_cap(10)
    try:
        assert census.factorial(30) == math.factorial(30)
    finally:
        census.set_factorial_cap(old)
    with pytest.raises(DomainError):
        census.factorial(-1)


def test_no_floats_on_counting_paths():
    assert isinstance(census.count_sq(40), int)
    assert isinstance(census.prob_root_face(40, 3), Fraction)
    assert isinstance(census.tangle_prob(2, 2, 40), Fraction)
