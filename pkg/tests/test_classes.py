import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from nevpick.blaschke import BlaschkeProduct, ZeroSequence, angular_derivative_modulus, generate_sequence
from nevpick.classes import (
    ClassReport,
    WeightFunction,
    _sum_verdict,
    _doubling_schedule,
    carleson_integral,
    exponential_bound,
    exponential_report,
    green_family_fit,
    green_identity_check,
    h_alpha,
    hardy_derivative_norm,
    laplacian_fd_error,
    weak_h1_diagnostic,
    weak_type_sup,
    weighted_zero_sum,
)
from nevpick.errors import BadWeight, GridTooCoarse
from nevpick.quadrature import alpha_weight, blaschke_radial_oracle

from strategies import zero_lists

# 2 pi int_0^1 r log(1/r) (1-r)^(-3/2) dr, from the 1-D radial oracle
B_Z_ALPHA_HALF = 9.708636216139286


# ---- weights ---------------------------------------------------------------

def test_h_alpha_is_valid():
    for a in (0.1, 0.5, 0.9):
        h = h_alpha(a)
        assert h.h(1.0) == 0
        assert h.singular_exponent() == pytest.approx(1 + a)


def test_linear_weight_fails_tail_condition():
    # h(t) = 1 - t has h'' = 0, so |h'/h''| is unbounded
    with pytest.raises(BadWeight):
        WeightFunction("linear", lambda c: np.asarray(c, dtype=float), lambda c: np.ones_like(c),
                       lambda c: np.zeros_like(c))


def test_convex_weight_rejected():
    with pytest.raises(BadWeight):
        WeightFunction("convex", lambda c: np.asarray(c, dtype=float) ** 2)


def test_nonvanishing_weight_rejected():
    with pytest.raises(BadWeight):
        WeightFunction("offset", lambda c: np.asarray(c, dtype=float) ** 0.5 + 0.1)


def test_alpha_range():
    with pytest.raises(BadWeight):
        h_alpha(1.0)


def test_finite_difference_fallback_matches_analytic():
    h = h_alpha(0.5)
    fd = WeightFunction("fd", h.hc, validate=False)
    c = np.array([0.3, 0.01, 1e-5])
    assert np.allclose(fd.dhc(c), h.dhc(c), rtol=1e-6)
    assert np.allclose(fd.d2hc(c), h.d2hc(c), rtol=1e-4)


# ---- zero sums -------------------------------------------------------------

def test_exponential_sum_finite():
    r = weighted_zero_sum(generate_sequence("exponential", 20), h_alpha(0.5), False)
    assert r.verdict == "finite"
    a = np.abs(generate_sequence("exponential", 20).array)
    assert r.value == pytest.approx(np.sum((1 - a**2) ** 0.5), rel=1e-12)
    assert [n for n, _ in r.partials] == [1, 2, 4, 8, 16, 20]


def test_power_sum_divergent():
    r = weighted_zero_sum(generate_sequence("power", 10_000, p=1.9), h_alpha(0.5), False)
    assert r.verdict == "divergent"
    assert r.exponent > 0 and r.r2 >= 0.9


def test_single_zero_at_origin():
    h = h_alpha(0.3)
    r = weighted_zero_sum(ZeroSequence((0.0,)), h, False)
    assert r.verdict == "finite"
    assert r.value == pytest.approx(float(h.h(0.0)))


def test_log_weighted_sum():
    seq = ZeroSequence((0.5, 0.5j))
    r = weighted_zero_sum(seq, h_alpha(0.5), True)
    c = 0.75
    assert r.value == pytest.approx(2 * c**0.5 * abs(math.log(c)))


def test_empty_and_bad_weight():
    with pytest.raises(ValueError):
        weighted_zero_sum(ZeroSequence(()), h_alpha(0.5))
    with pytest.raises(BadWeight):
        weighted_zero_sum(ZeroSequence((0.1,)), lambda t: 1 - t)


@given(zero_lists(max_size=6), zero_lists(max_size=6))
def test_zero_sum_additive(z1, z2):
    h = h_alpha(0.5)
    s1 = weighted_zero_sum(ZeroSequence(tuple(z1)), h).value if z1 else 0.0
    s2 = weighted_zero_sum(ZeroSequence(tuple(z2)), h).value if z2 else 0.0
    if not (z1 or z2):
        return
    s = weighted_zero_sum(ZeroSequence(tuple(z1) + tuple(z2)), h).value
    assert s == pytest.approx(s1 + s2, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("kind,kw", [("exponential", {"M": 2}), ("power", {"p": 1.5}), ("power", {"p": 3.0})])
def test_verdict_invariant_under_radius_form(kind, kw):
    # 1 - |z| and 1 - |z|^2 differ by a factor in [1, 2]; verdicts must agree
    seq = generate_sequence(kind, 2000 if kind == "power" else 14, **kw)
    a = np.abs(seq.array)
    r = weighted_zero_sum(seq, h_alpha(0.5))
    terms = (1 - a) ** 0.5
    sched = _doubling_schedule(a.size)
    partial = np.array([np.sum(terms[:n]) for n in sched])
    assert _sum_verdict(terms, np.array(sched, dtype=float), partial)[0] == r.verdict


def test_report_json_shape():
    r = weighted_zero_sum(generate_sequence("exponential", 5), h_alpha(0.5))
    doc = r.to_json()
    assert set(doc) == {"class", "params", "partials", "verdict", "fit", "error_estimate"}
    assert set(doc["fit"]) == {"exponent", "r2"}
    assert isinstance(r, ClassReport)


# ---- annulus counts --------------------------------------------------------

def test_exponential_bound_examples():
    assert exponential_bound(generate_sequence("exponential", 12))[0] == 1
    assert exponential_bound(generate_sequence("exponential", 8, M=3))[0] == 3


def test_power_counts_unbounded():
    rep = exponential_report(generate_sequence("power", 100, p=2))
    assert rep.meta["trend"] == "unbounded"
    # about 2^(j/2) zeros in annulus j
    assert rep.exponent == pytest.approx(0.5, abs=0.15)
    assert exponential_report(generate_sequence("exponential", 12, M=2)).meta["trend"] == "bounded"


@given(zero_lists(max_size=10), st.floats(0, 2 * np.pi))
def test_exponential_bound_rotation_invariant(zs, angle):
    seq = ZeroSequence(tuple(zs))
    assert exponential_bound(seq) == exponential_bound(seq.rotated(angle))


# ---- derivative Hardy norm -------------------------------------------------

class _Identity:
    def __call__(self, z):
        return z

    def derivative(self, z):
        return np.ones_like(z)


def test_hardy_norm_of_identity():
    r = hardy_derivative_norm(_Identity(), 0.5)
    assert r.verdict == "finite"
    assert np.allclose([v for _, v in r.partials], 1.0)
    assert r.value == pytest.approx(1.0)


@pytest.mark.parametrize("zeros", [(0.5,), (0.3j, -0.6, 0.7 * np.exp(1j))])
@pytest.mark.parametrize("alpha", [0.5, 0.8])
def test_hardy_norm_matches_boundary_quadrature(zeros, alpha):
    B = BlaschkeProduct(zeros)
    r = hardy_derivative_norm(B, alpha)
    assert r.verdict == "finite"
    boundary = integrate.quad(lambda t: angular_derivative_modulus(B, t) ** alpha, 0, 2 * np.pi,
                              limit=200)[0] / (2 * np.pi)
    assert r.value == pytest.approx(boundary, rel=1e-3)


def test_hardy_norm_saturates_near_deep_zero():
    B = BlaschkeProduct([1 - 2.0**-10])
    r = hardy_derivative_norm(B, 0.5)
    v = np.array([p[1] for p in r.partials])
    assert r.verdict == "finite"
    # rises up to the zero radius (k = 10), then the gap to the limit halves per step
    assert np.all(np.diff(v) > 0)
    assert v[9] < 0.95 * v[-1]
    assert np.all(np.abs(v[16:] - v[-1]) / v[-1] < 1e-3)


def test_hardy_norm_alpha_range():
    with pytest.raises(ValueError):
        hardy_derivative_norm(_Identity(), 1.5)


# ---- weak H^1 --------------------------------------------------------------

@pytest.mark.parametrize("n", [64, 1024, 2**12])
def test_weak_h1_of_identity_is_two_pi(n):
    r = weak_h1_diagnostic(_Identity(), n_angles=n)
    assert r.value == 2 * np.pi
    assert r.verdict == "finite"


def test_weak_type_sup_steps():
    # values 3 on a quarter of the grid, 1 elsewhere: sup is max(3 * pi/2, 1 * 2 pi)
    v = np.array([3.0] * 4 + [1.0] * 12)
    assert weak_type_sup(v) == pytest.approx(2 * np.pi)
    assert weak_type_sup(v, scale=0.5) == pytest.approx(4 * np.pi)


def test_weak_h1_exponential_stable_power_grows():
    exp = [weak_h1_diagnostic(BlaschkeProduct(generate_sequence("exponential", n))) for n in (6, 8)]
    assert all(r.verdict == "finite" for r in exp)
    assert exp[1].value / exp[0].value < 1.5
    pw = [weak_h1_diagnostic(BlaschkeProduct(generate_sequence("power", n, p=2))).value for n in (10, 40)]
    assert pw[1] > 3 * pw[0]


# ---- Carleson integrals ----------------------------------------------------

def test_carleson_identity_regression():
    r = carleson_integral(BlaschkeProduct([0.0]), alpha=0.5, tol=1e-6)
    assert r.value == pytest.approx(B_Z_ALPHA_HALF, rel=1e-6)
    assert blaschke_radial_oracle([0.0], alpha_weight(0.5)) == pytest.approx(B_Z_ALPHA_HALF, rel=1e-12)


def test_carleson_h_alpha_form():
    # |h''(|z|^2)| = alpha (1 - alpha) (1 - |z|^2)^(-1-alpha): same class, different value
    B = BlaschkeProduct([0.4, -0.2j])
    r = carleson_integral(B, h=h_alpha(0.5), tol=1e-5)
    assert 0 < r.value < math.inf and r.error_estimate <= 1e-5 * r.value


def test_degenerate_weight_region_contributes_nothing():
    a = 0.5
    d2 = lambda c: np.where(np.asarray(c) < 0.5, -a * (1 - a) * np.asarray(c, dtype=float) ** (-1 - a), 0.0)
    w = WeightFunction("flat-inside", lambda c: np.asarray(c, dtype=float) ** 0.5,
                       lambda c: 0.5 * np.asarray(c, dtype=float) ** -0.5, d2, validate=False)
    r = carleson_integral(BlaschkeProduct([0.0]), h=w, tol=1e-6, breakpoints=[math.sqrt(0.5)])
    f = lambda s: s * -math.log(s) * a * (1 - a) * (1 - s * s) ** -1.5
    outer = 2 * math.pi * integrate.quad(f, math.sqrt(0.5), 1, limit=500)[0]
    assert r.value == pytest.approx(outer, rel=1e-6)


def test_carleson_requires_one_weight():
    with pytest.raises(ValueError):
        carleson_integral(BlaschkeProduct([0.1]))


def test_carleson_additive():
    z1, z2 = (0.5, 0.2j), (-0.7 + 0.1j,)
    v = lambda zs: carleson_integral(BlaschkeProduct(zs), alpha=0.5, tol=1e-6).value
    assert v(z1 + z2) == pytest.approx(v(z1) + v(z2), rel=1e-5)


def test_carleson_depth_scaling():
    # each zero carries about (1 - |a|)^(1 - alpha): pushing it outward lowers the integral
    vals = [carleson_integral(BlaschkeProduct([r]), alpha=0.5, tol=1e-5).value for r in (0.5, 0.7, 0.9, 0.99)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert 0.25 < (vals[2] / vals[3]) / math.sqrt(10) < 4


# ---- Green identity --------------------------------------------------------

def test_green_laplacian_fd():
    assert laplacian_fd_error(0.5) <= 1e-3
    assert laplacian_fd_error(0.5, h=0.125) == math.inf
    with pytest.raises(GridTooCoarse):
        green_identity_check(BlaschkeProduct([0.5]), h=0.02)


def test_green_single_zero():
    r = green_identity_check(BlaschkeProduct([0.5]))
    assert r.residual <= 1e-4


def test_green_zero_placement_guard():
    with pytest.raises(ValueError):
        green_identity_check(BlaschkeProduct([0.0, 0.5]))


def test_green_duplicated_zero_doubles_sides():
    one = green_identity_check(BlaschkeProduct([0.6j]))
    two = green_identity_check(BlaschkeProduct([0.6j, 0.6j]))
    assert two.sum_side == pytest.approx(2 * one.sum_side, rel=1e-12)
    assert two.lead_integral == pytest.approx(2 * one.lead_integral, rel=1e-4)
    assert two.remainder_integral == pytest.approx(2 * one.remainder_integral, rel=1e-4)


def test_green_radius_sweep_constants():
    reports = [green_identity_check(BlaschkeProduct([r])) for r in (0.5, 0.7, 0.9)]
    fit = green_family_fit(reports)
    assert fit["deviation"] <= 0.05
    assert fit["spread"] <= 0.05


# ---- cross-class invariant -------------------------------------------------

@settings(max_examples=10)
@given(st.sampled_from([("exponential", {}), ("exponential", {"M": 2}), ("power", {"p": 2.0}),
                        ("power", {"p": 3.0})]),
       st.integers(4, 10), st.floats(0.55, 0.95))
def test_b_alpha_zero_sum_never_contradicts_derivative_norm(family, n, alpha):
    kind, kw = family
    seq = generate_sequence(kind, n, **kw)
    zero_sum = weighted_zero_sum(seq, h_alpha(alpha))
    norm = hardy_derivative_norm(BlaschkeProduct(seq), alpha, kmax=16)
    assert not (zero_sum.verdict == "finite" and norm.verdict == "divergent")
