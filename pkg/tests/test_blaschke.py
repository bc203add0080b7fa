import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nevpick.blaschke import BlaschkeProduct, ZeroSequence, frostman_shift, generate_sequence
from nevpick.errors import BadParams

from strategies import disc_points, zero_lists


def test_single_zero_at_origin_is_identity():
    B = BlaschkeProduct([0.0])
    z = np.array([0.3, 0.5j, -0.2 + 0.1j])
    assert np.allclose(B(z), z)
    assert np.allclose(B.derivative(z), 1.0)


def test_normalized_factor_positive_at_origin():
    B = BlaschkeProduct([0.5, 0.3j])
    # (|a|/a)(a - 0) = |a| > 0
    assert abs(B(0.0) - 0.5 * 0.3) < 1e-15


@given(zero_lists())
def test_zeros_and_boundary_modulus(zs):
    B = BlaschkeProduct(zs)
    assert np.max(np.abs(B(np.array(zs)))) < 1e-12
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    assert np.max(np.abs(np.abs(B(np.exp(1j * th))) - 1)) < 1e-12


@given(zero_lists(), disc_points(0.9))
def test_derivative_matches_finite_difference(zs, z):
    B = BlaschkeProduct(zs)
    h = 1e-6
    fd = (B(z + h) - B(z - h)) / (2 * h)
    assert abs(B.derivative(z) - fd) < 1e-5 * max(1.0, abs(fd))


@given(zero_lists(max_size=4, rmax=0.9), st.floats(0, 2 * np.pi))
def test_angular_derivative_is_boundary_derivative_modulus(zs, t):
    B = BlaschkeProduct(zs)
    assert B.angular_derivative_modulus(t) == pytest.approx(abs(B.derivative(np.exp(1j * t))), rel=1e-10)


def test_angular_derivative_radial_limit():
    # (1 - |B(r e^it)|) / (1 - r) -> |B'(e^it)|, extrapolated in r = 1 - 2^-k
    B = BlaschkeProduct([0.5, -0.3 + 0.4j])
    t = 0.7
    q = [(1 - abs(B((1 - 2.0**-k) * np.exp(1j * t)))) / 2.0**-k for k in (10, 11)]
    assert 2 * q[1] - q[0] == pytest.approx(B.angular_derivative_modulus(t), rel=1e-6)


def test_log_space_evaluation_agrees():
    seq = generate_sequence("power", 1200, p=2.0, angle="equidistributed")
    B = BlaschkeProduct(seq)
    z = np.array([0.3 + 0.2j, -0.5j])
    direct = np.prod([(abs(a) / a) * (a - z) / (1 - np.conj(a) * z) if a != 0 else z for a in seq.array], axis=0)
    assert np.allclose(B(z), direct, rtol=1e-10)


def test_zero_margin_enforced():
    with pytest.raises(BadParams):
        ZeroSequence((1 - 1e-16,))


def test_frostman_shift():
    B = BlaschkeProduct([0.4])
    assert frostman_shift(B, 0) is B
    F = frostman_shift(B, 0.3)
    z = 0.1 + 0.2j
    assert F(z) == pytest.approx((B(z) - 0.3) / (1 - 0.3 * B(z)))
    assert abs(abs(F(np.exp(0.5j))) - 1) < 1e-14
    h = 1e-6
    assert F.derivative(z) == pytest.approx((F(z + h) - F(z - h)) / (2 * h), rel=1e-6)


def test_exponential_generator():
    seq = generate_sequence("exponential", 12, M=1)
    assert len(seq) == 12
    assert seq.generator["kind"] == "exponential"
    depth = 1 - np.abs(seq.array)
    assert np.allclose(depth, 1.5 * 2.0 ** (-np.arange(1, 13) - 1.0))
    seq3 = generate_sequence("exponential", 4, M=3, angle="equidistributed")
    assert len(seq3) == 12


def test_power_generator_warns_and_clips():
    with pytest.warns(UserWarning):
        seq = generate_sequence("power", 5, p=0.9)
    assert "warning" in seq.generator
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        clipped = generate_sequence("power", 2000, p=4.0)
    assert clipped.generator["clipped"] == 2000 - 1000


def test_generator_is_deterministic():
    a = generate_sequence("power", 50, p=2.0, angle="random", seed=3)
    b = generate_sequence("power", 50, p=2.0, angle="random", seed=3)
    assert a == b


def test_bad_generator_params():
    with pytest.raises(BadParams):
        generate_sequence("exponential", 0)
    with pytest.raises(BadParams):
        generate_sequence("nope", 3)
