import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from covering_radii.bounds import (
    BoundPair,
    ConvexityRadii,
    FamilyParams,
    affine_hull_order,
    convexity_radius_at,
    convexity_radius_r0,
    convexity_radius_r0_literal,
    growth_bounds_hprime,
    k_from_q,
    lower_bound_m,
    mori_upper_bound_on_ratio,
    q_from_k,
    quad_tolerance,
    ratio_bracket,
    schwarz_pick_dilatation_bound,
    starkov_bounds,
    theorem2_lower,
    upper_bound_M,
)
from covering_radii.errors import DomainError, SenseReversingError
from covering_radii.mappings import HAlpha, PommerenkeKn, ScaledCombo, Series

# m(x, Q) from mpmath at 50 digits
M_ORACLE = [
    (0.5, 5 / 3, 0.770568142265876898),
    (0.0, 3.0, 0.518616751241947522),
    (0.3, 6.0, 0.286581571310492635),
]
R0_2_53 = 0.2497314209334427
R_HALF_2_1 = 0.19722436226800544

unit = st.floats(0.0, 1.0)


def test_k_q_examples():
    assert k_from_q(3.0) == pytest.approx(0.5)
    assert k_from_q(1.0) == 0.0
    assert k_from_q(math.inf) == 1.0
    assert q_from_k(0.25) == pytest.approx(5 / 3)
    assert q_from_k(1.0) == math.inf
    with pytest.raises(DomainError):
        k_from_q(0.5)
    with pytest.raises(DomainError):
        q_from_k(1.5)


@given(st.floats(0.0, 0.999))
def test_k_q_roundtrip(k):
    assert k_from_q(q_from_k(k)) == pytest.approx(k, abs=1e-12)


def test_family_params():
    p = FamilyParams(alpha=2.0, Q=5 / 3, x=0.5)
    assert p.k == pytest.approx(0.25)
    assert FamilyParams.from_k(0.5).Q == pytest.approx(3.0)
    with pytest.raises(DomainError):
        FamilyParams(alpha=0.5)
    with pytest.raises(DomainError):
        BoundPair(2.0, 1.0)
    assert BoundPair(1.0, 2.0).contains(2.0 + 1e-9, slack=1e-8)


# -- M ---------------------------------------------------------------------------------


def test_upper_bound_frozen():
    want = 1 + 0.25 * quad(lambda t: (t + 0.5) / (1 + 0.5 * t), 0, 1, epsabs=1e-15)[0]
    assert upper_bound_M(0.5, 0.25) == pytest.approx(1.19590116892, abs=1e-11)
    assert upper_bound_M(0.5, 0.25) == pytest.approx(want, rel=1e-14)


@given(unit)
def test_upper_bound_endpoints(k):
    assert upper_bound_M(1.0, k) == pytest.approx(1 + k, rel=1e-15)
    assert upper_bound_M(0.0, k) == pytest.approx(1 + k / 2, rel=1e-15)


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_upper_bound_matches_integral(x, k):
    want = 1 + k * quad(lambda t: (t + x) / (1 + x * t), 0, 1, epsabs=1e-15)[0]
    assert upper_bound_M(x, k) == pytest.approx(want, rel=1e-13)


def test_upper_bound_increasing_in_x():
    x = np.linspace(0, 1, 400)
    vals = np.array([upper_bound_M(v, 0.6) for v in x])
    assert np.all(np.diff(vals) > 0)


def test_upper_bound_small_x_branch_is_continuous():
    assert upper_bound_M(0.05 - 1e-12, 0.5) == pytest.approx(upper_bound_M(0.05, 0.5), abs=1e-12)


# -- m ---------------------------------------------------------------------------------


@pytest.mark.parametrize("x,Q,want", M_ORACLE)
def test_lower_bound_oracle(x, Q, want):
    m, info = lower_bound_m(x, Q, full_output=True)
    assert abs(m - want) <= info["error"] + 1e-12
    assert info["error"] <= 10 * info["tol"]
    assert info["n_evals"] > 0


@pytest.mark.parametrize("x,Q,want", M_ORACLE)
def test_lower_bound_tight_tolerance(x, Q, want):
    m, info = lower_bound_m(x, Q, tol=1e-12, full_output=True)
    assert abs(m - want) <= info["error"] + 1e-13


def test_lower_bound_closed_cases():
    assert lower_bound_m(0.4, 1.0) == 1.0
    assert lower_bound_m(0.4, math.inf) == 0.0
    assert lower_bound_m(1.0, 3.0) == pytest.approx(0.5, rel=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(1.0, 20.0))
def test_bracket_is_ordered(x, Q):
    b = ratio_bracket(x, Q)
    assert 0 < b.lower <= 1.0 <= b.upper <= 2.0


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 0.99), st.floats(1.05, 10.0))
def test_lower_bound_tolerance_halving(x, Q):
    m1, i1 = lower_bound_m(x, Q, full_output=True)
    m2 = lower_bound_m(x, Q, tol=i1["tol"] / 2)
    assert abs(m1 - m2) < 10 * max(i1["error"], 1e-15)


def test_lower_bound_decreasing_in_q():
    vals = [lower_bound_m(0.5, q) for q in (1.0, 1.5, 2.0, 4.0, 8.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_quad_tolerance_env(monkeypatch):
    monkeypatch.delenv("HR_QUAD_TOL", raising=False)
    assert quad_tolerance() == 1e-10
    monkeypatch.setenv("HR_QUAD_TOL", "1e-8")
    assert lower_bound_m(0.5, 2.0, full_output=True)[1]["tol"] == 1e-8
    monkeypatch.setenv("HR_QUAD_TOL", "nope")
    with pytest.raises(DomainError):
        quad_tolerance()
    monkeypatch.setenv("HR_QUAD_TOL", "-1")
    with pytest.raises(DomainError):
        quad_tolerance()


# -- Mori chain -------------------------------------------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(1.01, 12.0))
def test_mori_chain(x, Q):
    k = k_from_q(Q)
    mori = mori_upper_bound_on_ratio(x, Q)
    assert 1 / lower_bound_m(x, Q) <= mori + 1e-9
    assert mori <= 1 / (1 - k) + 1e-12


def test_mori_trivial_and_infinite():
    assert mori_upper_bound_on_ratio(0.3, 1.0) == 1.0
    with pytest.raises(DomainError):
        mori_upper_bound_on_ratio(0.3, math.inf)


# -- pointwise estimates ----------------------------------------------------------------


def test_starkov_examples():
    f2 = ScaledCombo(PommerenkeKn(2), 0.25, -1)
    b = starkov_bounds(f2, 0, 2.0, 5 / 3)
    assert b.lower == pytest.approx(0.25)
    assert b.upper == pytest.approx(5 / 3)
    b = starkov_bounds(HAlpha(2.0), 0.3j, 2.0, 1.0)
    assert b.lower <= b.upper
    with pytest.raises(SenseReversingError):
        starkov_bounds(Series((1.0,), (2.0,), rho=1.0), 0, 1.0, 1.0)
    with pytest.raises(DomainError):
        starkov_bounds(HAlpha(2.0), 0, 0.5, 1.0)


def test_theorem2_lower_examples():
    assert theorem2_lower(0.0, 1.0, 0.0) == 0.5
    assert theorem2_lower(0.25, 2.0, 0.0) == pytest.approx(3 / 16)
    assert theorem2_lower(0.5, 3.0, 0.0) == pytest.approx(1 / 12)
    assert theorem2_lower(0.0, 1.0, 0.5) == pytest.approx(1 / 6)
    with pytest.raises(DomainError):
        theorem2_lower(1.0, 2.0, 0.0)


def test_schwarz_pick():
    assert schwarz_pick_dilatation_bound(0.0, 0.5, 0.4) == pytest.approx(0.2)
    assert schwarz_pick_dilatation_bound(1.0, 0.5, 0.4) == pytest.approx(0.5)
    assert schwarz_pick_dilatation_bound(0.3, 0.5, 0.0) == pytest.approx(0.15)


def test_growth_bounds():
    lo, hi = growth_bounds_hprime(1.0, 0.5)
    assert lo == pytest.approx(4 / 9)
    assert hi == pytest.approx(4.0)
    assert growth_bounds_hprime(2.0, 0.0) == (1.0, 1.0)


def test_growth_bounds_hold_for_halpha():
    f = HAlpha(2.0)
    z = 0.6 * np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    lo, hi = growth_bounds_hprime(2.0, 0.6)
    d = np.abs(f.dh(z))
    assert np.all(d >= lo * (1 - 1e-12)) and np.all(d <= hi * (1 + 1e-12))


# -- convexity radii --------------------------------------------------------------------


def test_affine_hull_order():
    assert affine_hull_order(2.0, 0.6) == pytest.approx(7 / 3, rel=1e-15)
    assert affine_hull_order(2.0, 0.0) == 2.0
    assert affine_hull_order(1.0, 1.0) == 2.0


def test_r0_examples():
    assert convexity_radius_r0(2.0, 5 / 3) == pytest.approx(R0_2_53, rel=1e-14)
    assert convexity_radius_r0(2.0, 1.0) == 2 - math.sqrt(3)
    assert convexity_radius_r0(1.0, 1.0) == 1.0
    # alpha = 1, k = 1 gives order 2
    assert convexity_radius_r0(1.0, math.inf) == pytest.approx(2 - math.sqrt(3), rel=1e-15)


@given(st.floats(1.0, 10.0), st.floats(1.0, 50.0))
def test_r0_literal_agrees(alpha, Q):
    assert convexity_radius_r0_literal(alpha, Q) == pytest.approx(convexity_radius_r0(alpha, Q), abs=1e-12)


def test_r_at_examples():
    assert convexity_radius_at(0.5, 2.0, 1.0) == pytest.approx(R_HALF_2_1, rel=1e-14)
    assert convexity_radius_at(0.0, 2.0, 5 / 3) == convexity_radius_r0(2.0, 5 / 3)
    c = ConvexityRadii(2.0, 5 / 3)
    assert c.at(0.3) == convexity_radius_at(0.3, 2.0, 5 / 3)


@given(st.floats(1.0, 6.0), st.floats(1.0, 10.0), st.floats(0.0, 0.999), st.floats(0.0, 0.999))
def test_r_at_decreasing_and_inside_disk(alpha, Q, a, b):
    lo, hi = sorted((a, b))
    ra, rb = convexity_radius_at(lo, alpha, Q), convexity_radius_at(hi, alpha, Q)
    assert rb <= ra + 1e-15
    assert hi + rb <= 1 + 1e-12


@given(st.floats(1.0, 6.0), st.floats(1.0, 10.0), st.floats(0.0, 0.999))
def test_r_at_solves_quadratic(alpha, Q, z):
    r0 = convexity_radius_r0(alpha, Q)
    R = convexity_radius_at(z, alpha, Q)
    assert R * R - (r0 + 1 / r0) * R + 1 - z * z == pytest.approx(0.0, abs=1e-9 * (r0 + 1 / r0))
