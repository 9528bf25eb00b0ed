import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from greybody.bounds import (
    CLOSED_FORM,
    QUADRATURE,
    bound_dilatonic2p1_closed,
    bound_dilatonic3p1_closed,
    bound_quadrature,
    bound_rn_closed,
    bound_schwarzschild,
    bound_tangherlini_closed,
    closed_form_bound,
    dilatonic2p1_comparison,
    dilatonic2p1_terms,
    dilatonic3p1_product_form,
)
from greybody.errors import DivergentIntegralError, NoHorizonError, ValidationError
from greybody.geometry import (
    Dilatonic2p1Geometry,
    Dilatonic3p1Geometry,
    Mode,
    RNGeometry,
    TangherliniGeometry,
)
from greybody.numerics import sech2
from oracles import dilatonic3p1_barrier, mp_sech2, rn_barrier, tangherlini_barrier


def test_sech2_no_overflow():
    assert sech2(1e6) == 0.0
    assert sech2(0.0) == 1.0
    assert sech2(-3.0) == sech2(3.0)
    assert sech2(20.0) == pytest.approx(float(mp_sech2(20)), rel=1e-14)


def test_schwarzschild_value():
    assert bound_schwarzschild(2.0, 0, 2.0).bound == pytest.approx(float(mp_sech2(mp.mpf(1) / 32)),
                                                                    rel=1e-15)
    assert bound_rn_closed(RNGeometry(M=2.0), 0, 2.0).bound == pytest.approx(0.99902, abs=5e-6)


def test_rn_at_A_equal_one():
    # GM = 2, A = 1: G (Q^2 + P^2) = 3
    g = RNGeometry(M=2.0, Q=math.sqrt(3.0))
    rep = bound_rn_closed(g, 0, 2.0)
    assert rep.barrier_integral == pytest.approx(1 / 27, rel=1e-14)
    assert rep.bound == pytest.approx(float(mp_sech2(mp.mpf(1) / 27)), rel=1e-15)
    assert rep.bound == pytest.approx(0.99863, abs=5e-6)


def test_tangherlini_unit_radius_value():
    g = TangherliniGeometry(d=5, M=3 * math.pi / 8)  # r0^2 = 8 M / (3 pi) = 1
    rep = bound_tangherlini_closed(g, 1, 2.0)
    assert rep.barrier_integral == pytest.approx(1.125, rel=1e-14)
    assert rep.bound == pytest.approx(float(mp_sech2(mp.mpf("1.125"))), rel=1e-14)
    assert rep.bound == pytest.approx(0.345, abs=1e-3)


def test_dilatonic3p1_value_and_product_form():
    g = Dilatonic3p1Geometry(M=10.0, Q=1.0)
    rep = bound_dilatonic3p1_closed(g, 1, 2.0)
    a, b = mp.mpf(200) ** 10, mp.mpf(199) ** 10
    ref = 4 * a * b / (a + b) ** 2
    assert rep.bound == pytest.approx(float(ref), rel=1e-13)
    assert rep.bound == pytest.approx(0.9994, abs=1e-4)
    assert dilatonic3p1_product_form(g, 1, 2.0) == pytest.approx(float(ref), rel=1e-12)


def test_dilatonic3p1_l0_is_one_and_small_charge_limit():
    assert bound_dilatonic3p1_closed(Dilatonic3p1Geometry(M=3.0, Q=1.0), 0, 0.1).bound == 1.0
    z0 = bound_dilatonic3p1_closed(Dilatonic3p1Geometry(M=3.0, Q=0.0), 2, 0.5).barrier_integral
    z1 = bound_dilatonic3p1_closed(Dilatonic3p1Geometry(M=3.0, Q=1e-5), 2, 0.5).barrier_integral
    assert z0 == pytest.approx(6 / (4 * 3.0 * 0.5))
    assert z1 == pytest.approx(z0, rel=1e-10)


def test_product_form_overflow_is_reported():
    with pytest.raises(OverflowError):
        dilatonic3p1_product_form(Dilatonic3p1Geometry(M=10.0, Q=0.01), 3, 0.01)
    # the log-space route still gives a finite answer
    assert 0.0 <= bound_dilatonic3p1_closed(Dilatonic3p1Geometry(M=10.0, Q=0.01), 3, 0.01).bound < 1e-10


def test_closed_form_against_mpmath_integrals():
    g = RNGeometry(M=1.7, Q=0.6, P=0.9)
    for l in (0, 1, 2):
        assert 2 * 0.8 * bound_rn_closed(g, l, 0.8).barrier_integral == pytest.approx(
            float(rn_barrier(1.7, 0.6, 0.9, l)), rel=1e-13)
    for d in (5, 7):
        g = TangherliniGeometry(d=d, M=1.1)
        assert 2 * bound_tangherlini_closed(g, 1, 1.0).barrier_integral == pytest.approx(
            float(tangherlini_barrier(d, 1.1, 1)), rel=1e-13)
    g = Dilatonic3p1Geometry(M=2.0, Q=1.5)
    assert 2 * bound_dilatonic3p1_closed(g, 2, 1.0).barrier_integral == pytest.approx(
        float(dilatonic3p1_barrier(2.0, 1.5, 2)), rel=1e-13)


@pytest.mark.parametrize("geom,l", [
    (RNGeometry(M=2.0, Q=1.0), 1),
    (TangherliniGeometry(d=5, M=1.0), 1),
    (Dilatonic3p1Geometry(M=10.0, Q=1.0), 2),
    (RNGeometry(M=1.0, Q=1.0), 2),
])
def test_quadrature_matches_closed_form(geom, l):
    quad = bound_quadrature(geom, Mode(2.0, l))
    closed = closed_form_bound(geom, Mode(2.0, l))
    assert quad.method == QUADRATURE and closed.method == CLOSED_FORM
    assert quad.barrier_integral == pytest.approx(closed.barrier_integral, rel=1e-8)
    assert quad.error_estimate < 1e-8


def test_dilatonic2p1_divergences_are_named():
    g = Dilatonic2p1Geometry(M=10.0, Q=1.0, Lam=0.1)
    with pytest.raises(DivergentIntegralError) as exc:
        bound_quadrature(g, Mode(2.0, 1))
    assert "m^2" in exc.value.term
    with pytest.raises(DivergentIntegralError) as exc:
        bound_quadrature(g, Mode(2.0, 0), linearized=False)
    assert exc.value.term == "14*Lam^2*r"
    with pytest.raises(DivergentIntegralError) as exc:
        bound_quadrature(g, Mode(2.0, 0))
    assert exc.value.term.startswith("horizon")


def test_dilatonic2p1_horizon_divergence_is_real():
    """Integral of V dr* over [r+ (1 + eps), R] grows like ln(1/eps)."""
    g = Dilatonic2p1Geometry(M=10.0, Q=0.0, Lam=0.3)
    rp = 2 * 10.0 / 2.4
    V = lambda r: 62.5 / r  # noqa: E731
    jac = lambda r: 2 * r / (8 * 0.3 * r * (r - rp))  # noqa: E731
    vals = [mp.quad(lambda r: V(r) * jac(r), [rp * (1 + eps), 2 * rp]) for eps in (1e-4, 1e-8)]
    slope = (vals[1] - vals[0]) / math.log(1e4)
    # dr*/dr ~ 1 / (4 Lam (r - r+)) near the horizon, so the slope is V(r+) / (4 Lam)
    assert float(slope) == pytest.approx(V(rp) / 1.2, rel=1e-3)


def test_dilatonic2p1_comparison_records_divergence():
    out = dilatonic2p1_comparison(Dilatonic2p1Geometry(M=10.0, Q=0.0, Lam=0.3), 1.0)
    assert out["divergent_term"] is not None and out["quadrature"] is None
    assert out["closed_form"].method == CLOSED_FORM


def test_dilatonic2p1_terms_sum_and_flags():
    g = Dilatonic2p1Geometry(M=10.0, Q=1.0, Lam=0.1)
    terms = dilatonic2p1_terms(g, 0, 2.0)
    rep = bound_dilatonic2p1_closed(g, 0, 2.0)
    assert rep.breakdown["argument"] == pytest.approx(math.fsum(terms.values()))
    assert terms["constant"] == 0.0
    flagged = bound_dilatonic2p1_closed(Dilatonic2p1Geometry(M=10.0, Q=1.0, Lam=0.8), 0, 2.0)
    assert "negative_argument" in flagged.flags and flagged.barrier_integral > 0
    assert "integral_diverges_for_nonzero_m" in bound_dilatonic2p1_closed(g, 1, 2.0).flags


def test_dilatonic2p1_closed_form_against_mpmath_literal():
    M, Q, Lam, m, w = map(mp.mpf, (10, 1, "0.1", 1, 2))
    s = mp.sqrt(M**2 - 64 * Q**2 * Lam)
    rp = (M + s) / (8 * Lam)
    x = (rp - 1) / (rp + 1)
    series = mp.mpf(23) / 15 - x - x**3 / 3 - x**5 / 5
    z = (-272 * m * Lam * (4 * m + 3) / (15 * s) + 11 * M * (5 * M + 16 * m**2) / (96 * s)
         - (M + 2 * m**2) * series + 3 * M / 16 * series + 6 * Lam * Q**2 / (M + s)) / w
    rep = bound_dilatonic2p1_closed(Dilatonic2p1Geometry(M=10.0, Q=1.0, Lam=0.1), 1, 2.0)
    assert rep.breakdown["argument"] == pytest.approx(float(z), rel=1e-13)
    assert rep.bound == pytest.approx(float(mp_sech2(z)), rel=1e-13)


def test_validation():
    with pytest.raises(ValidationError):
        bound_rn_closed(RNGeometry(M=1.0), 0, 0.0)
    with pytest.raises(ValidationError):
        bound_rn_closed(RNGeometry(M=1.0), -1, 1.0)
    with pytest.raises(NoHorizonError):
        bound_rn_closed(RNGeometry(M=1.0, Q=2.0), 0, 1.0)


def test_large_omega_tends_to_one():
    assert bound_schwarzschild(1.0, 3, 1e9).bound == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=80, deadline=None)
@given(M=st.floats(0.1, 30.0), frac=st.floats(0.0, 0.999), l=st.integers(0, 6),
       w=st.floats(1e-3, 1e3))
def test_rn_bound_in_unit_interval_and_monotone(M, frac, l, w):
    g = RNGeometry(M=M, Q=math.sqrt(frac) * M)
    b = bound_rn_closed(g, l, w).bound
    assert 0.0 <= b <= 1.0
    assert bound_rn_closed(g, l, 2 * w).bound >= b
    assert bound_rn_closed(g, l + 1, w).bound <= b


@settings(max_examples=60, deadline=None)
@given(GM=st.floats(0.05, 50.0), l=st.integers(0, 10), w=st.floats(1e-2, 1e2))
def test_reductions_are_exact(GM, l, w):
    ref = bound_schwarzschild(GM, l, w).bound
    assert bound_rn_closed(RNGeometry(M=GM), l, w).bound == ref
    assert bound_tangherlini_closed(TangherliniGeometry(d=4, M=GM), l, w).bound == ref


@settings(max_examples=40, deadline=None)
@given(M=st.floats(0.2, 20.0), frac=st.floats(0.0, 0.95), l=st.integers(0, 3))
def test_rn_quadrature_property(M, frac, l):
    g = RNGeometry(M=M, Q=math.sqrt(frac) * M)
    q = bound_quadrature(g, Mode(1.0, l)).barrier_integral
    c = bound_rn_closed(g, l, 1.0).barrier_integral
    assert q == pytest.approx(c, rel=1e-7)


@settings(max_examples=40, deadline=None)
@given(M=st.floats(0.2, 20.0), d=st.integers(4, 10), l=st.integers(0, 3), w=st.floats(0.05, 20.0))
def test_tangherlini_bound_decreases_with_dimension(M, d, l, w):
    a = bound_tangherlini_closed(TangherliniGeometry(d=d, M=M), l, w).bound
    b = bound_tangherlini_closed(TangherliniGeometry(d=d + 1, M=M), l, w).bound
    assert b <= a or a == 0.0


def test_fig5_monotone_in_mass():
    Ms = np.linspace(1, 10, 30)
    for d in range(4, 9):
        vals = [bound_tangherlini_closed(TangherliniGeometry(d=d, M=m), 1, 2.0).bound for m in Ms]
        assert np.all(np.diff(vals) > 0)
