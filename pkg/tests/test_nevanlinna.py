import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nevpick.blaschke import BlaschkeProduct
from nevpick.errors import NotStrictlySolvable
from nevpick.nevanlinna import (
    Extremal, average_extremal, average_tilde, coefficient_ratio, coefficients_at, extremal_family,
    extremal_solution, schur_parametrization, solve_with, vertevorrat,
)
from nevpick.pick import PickProblem, constant_problem, random_nodes, scaled_problem
from nevpick.recipes import constant_family_fit, disc_samples

GAMMAS = 2 * np.pi * np.arange(16) / 16


@pytest.fixture
def param(rng):
    return schur_parametrization(scaled_problem(random_nodes(6, rng, min_sep=0.3), 0.6))


def test_single_node_origin_closed_form():
    param = schur_parametrization(PickProblem((0,), (0,)))
    z = np.array([0.5, 0.3j, -0.2 + 0.4j])
    P, Q, R, S = coefficients_at(param, z)
    assert np.max(np.abs(P)) < 1e-15 and np.max(np.abs(S)) < 1e-15
    assert np.allclose(np.abs(R), 1)
    assert np.allclose(np.abs(Q / R), np.abs(z))
    assert np.allclose(P * S - Q * R, z)
    # every constant phi gives f = c z up to a fixed rotation
    assert np.allclose(np.abs(solve_with(param, 0.4, z)), 0.4 * np.abs(z))
    c, rho = vertevorrat(param, z)
    assert np.allclose(c, 0) and np.allclose(rho, np.abs(z))
    assert np.allclose(average_tilde(param, z, 0.3, "1/R"), 0.3 / R)


def test_single_node_nonzero_target_frostman():
    w = 0.4 - 0.2j
    param = schur_parametrization(PickProblem((0,), (w,)))
    z = disc_samples(50, np.random.default_rng(0), 0.99)
    _, mis, um = constant_family_fit(param, w, GAMMAS, z)
    assert mis < 1e-12 and um < 1e-12


def test_not_strictly_solvable():
    with pytest.raises(NotStrictlySolvable):
        schur_parametrization(PickProblem((0, 0.5), (0, 0.5)))


def test_invariants(param, rng):
    p = param.problem
    vals = extremal_family(param, GAMMAS, p.z)
    assert np.max(np.abs(vals - p.w)) < 1e-9
    z = disc_samples(200, rng)
    P, Q, R, S = param.coefficients(z)
    pi = param.product(z)
    assert np.max(np.abs(P * S - Q * R - pi) / np.abs(pi)) < 1e-9
    assert abs(param.coefficients(np.array(0j)).S) < 1e-10
    assert complex(param.coefficients(np.array(0j)).R).real > 0
    assert np.all(np.abs(R) > np.maximum.reduce([np.abs(P), np.abs(Q), np.abs(S), np.ones(200)]) - 1e-9)
    zb = np.exp(1j * np.linspace(0, 2 * np.pi, 256, endpoint=False))
    P, Q, R, S = param.coefficients(zb)
    pib = param.product(zb)
    assert np.max(np.abs(Q + pib * np.conj(R))) < 1e-8 * np.max(np.abs(R))
    assert np.max(np.abs(P + pib * np.conj(S))) < 1e-8 * np.max(np.abs(R))


def test_extremal_boundary_modulus_and_derivative(param):
    zb = np.exp(1j * np.linspace(0, 2 * np.pi, 256, endpoint=False))
    assert np.max(np.abs(np.abs(extremal_solution(param, 1.3, zb)) - 1)) < 1e-8
    f = Extremal(param, 1.3)
    z, h = 0.3 + 0.2j, 1e-6
    assert f.derivative(z) == pytest.approx((f(z + h) - f(z - h)) / (2 * h), rel=1e-6)


def test_ratios(param, rng):
    z = disc_samples(100, rng, 0.99)
    # with PS - QR = Pi the ratio identity reads (P/R)(S/R) - Q/R = Pi/R^2
    lhs = coefficient_ratio(param, "P/R", z) * coefficient_ratio(param, "S/R", z) - coefficient_ratio(param, "Q/R", z)
    assert np.max(np.abs(lhs - coefficient_ratio(param, "Pi/R^2", z))) < 1e-9
    assert np.max(np.abs(coefficient_ratio(param, "S/R", z))) < 1
    assert abs(coefficient_ratio(param, "1/R", np.array(0j))) <= 1
    with pytest.raises(ValueError):
        coefficient_ratio(param, "R/P", z)


def test_averages(param, rng):
    z = disc_samples(50, rng, 0.9)
    pr = coefficient_ratio(param, "P/R", z)
    assert np.max(np.abs(average_extremal(param, z, 64) - pr)) < 1e-8
    assert np.max(np.abs(average_extremal(param, z, 128) - average_extremal(param, z, 64))) < 1e-10
    assert abs(average_tilde(param, np.array(0j), 0.25, "S/R")) < 1e-12
    w = np.exp(0.7j)
    from nevpick.nevanlinna import tilde_integrand
    zb = np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    for variant in ("S/R", "1/R"):
        assert np.max(np.abs(np.abs(tilde_integrand(param, zb, 0.25, variant, w)) - 1)) < 1e-8


def test_constant_targets_average_at_node():
    p = constant_problem([0.2, -0.5j, 0.6], 0.3)
    param = schur_parametrization(p)
    assert np.max(np.abs(average_extremal(param, p.z, 16) - 0.3)) < 1e-12


def test_node_order_changes_gauge_not_solution_set(rng):
    nodes = random_nodes(4, rng, min_sep=0.3)
    p1 = scaled_problem(nodes, 0.5)
    perm = [2, 0, 3, 1]
    p2 = PickProblem(tuple(np.array(p1.nodes)[perm]), tuple(np.array(p1.targets)[perm]))
    z = disc_samples(50, rng, 0.95)
    c1, r1 = vertevorrat(schur_parametrization(p1), z)
    c2, r2 = vertevorrat(schur_parametrization(p2), z)
    assert np.allclose(c1, c2, atol=1e-10) and np.allclose(r1, r2, atol=1e-10)


def test_vertevorrat_scalar_and_nodes(param):
    v = vertevorrat(param, 0.1 + 0.1j)
    assert abs(v.center) + v.radius <= 1 + 1e-9
    c, rho = vertevorrat(param, param.problem.z)
    assert np.max(rho) < 1e-9 and np.max(np.abs(c - param.problem.w)) < 1e-9


@given(st.integers(0, 10**6), st.integers(1, 8), st.floats(0.2, 0.9))
def test_property_interpolation_and_containment(seed, n, s):
    rng = np.random.default_rng(seed)
    p = scaled_problem(random_nodes(n, rng, min_sep=0.3), s, tuple(disc_samples(2, rng, 0.8)))
    param = schur_parametrization(p)
    assert np.max(np.abs(extremal_family(param, GAMMAS, p.z) - p.w)) < 1e-9
    z = disc_samples(20, rng, 0.99)
    c, rho = vertevorrat(param, z)
    for w in (0, 0.5j, -0.9):
        assert np.all(np.abs(solve_with(param, w, z) - c) <= rho + 1e-9)
    vals = extremal_family(param, GAMMAS, z)
    assert np.max(np.abs(np.abs(vals - c) - rho)) < 1e-9


def test_solve_with_callable_phi(param, rng):
    phi = BlaschkeProduct([0.3])
    z = disc_samples(20, rng, 0.99)
    f = solve_with(param, phi, z)
    assert np.all(np.abs(f) <= 1 + 1e-12)
    assert np.max(np.abs(solve_with(param, phi, param.problem.z) - param.problem.w)) < 1e-9
