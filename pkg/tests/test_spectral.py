import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from families import random_profile
from revlambda import (ProfileCurve, annulus_lambda1, arclength_reparametrize, assemble,
                       curve_length, disc_lambda1, euler_lagrange_residual, lambda1,
                       radial_extent, rayleigh_quotient, segment, solve_boundary)
from revlambda.errors import CurveError, RevLambdaError


def _sine(c):
    w = np.sin(np.pi * c.t)
    w[-1] = 0.0   # sin(pi) is not exactly zero
    return w


def test_two_element_cylinder_pencil():
    pen = assemble(segment((1, 0), (1, 1), 2))
    assert pen.k_diag.tolist() == [4.0]
    assert pen.m_diag.tolist() == pytest.approx([1 / 3], rel=1e-15)


def test_scaling_F_leaves_spectrum_unchanged():
    c = segment((1, 0), (1, 1), 64)
    scaled = ProfileCurve(c.samples * [3.0, 1.0])
    assert lambda1(scaled).lambda1 == pytest.approx(lambda1(c).lambda1, rel=1e-12)


def test_orientation_reversal():
    c = random_profile(np.random.default_rng(11)).constant_speed(300)
    a, b = lambda1(c), lambda1(c.reversed())
    assert b.lambda1 == pytest.approx(a.lambda1, rel=1e-12)
    assert b.lambda2 == pytest.approx(a.lambda2, rel=1e-12)


def test_zero_chord_rejected():
    with pytest.raises(CurveError):
        lambda1(ProfileCurve([[1, 0], [1, 0.5], [1, 0.5], [1, 1]]))


@pytest.mark.parametrize("R,h", [(1, 1), (2, 0.5), (0.5, 3)])
def test_cylinder(R, h):
    assert lambda1(segment((R, 0), (R, h), 2048)).lambda1 == pytest.approx((math.pi / h) ** 2, rel=1e-6)


def test_ground_state_invariants():
    c = random_profile(np.random.default_rng(12)).constant_speed(500)
    res = lambda1(c)
    assert 0 < res.lambda1 < res.lambda2
    assert res.phi[0] == 0 and res.phi[-1] == 0 and np.all(res.phi[1:-1] > 0)
    assert res.normalization == pytest.approx(1.0, abs=1e-10)
    assert res.mesh_size == 500


def test_mesh_convergence_is_second_order():
    prof = random_profile(np.random.default_rng(13))
    lam = [lambda1(prof.constant_speed(n)).lambda1 for n in (256, 512, 1024)]
    ratio = (lam[0] - lam[1]) / (lam[1] - lam[2])
    assert 3.5 < ratio < 4.5


def test_rayleigh_quotient_of_eigenvector():
    c = random_profile(np.random.default_rng(14)).constant_speed(400)
    res = lambda1(c)
    assert rayleigh_quotient(c, res.phi) == pytest.approx(res.lambda1, rel=1e-11)


def test_rayleigh_quotient_sine_on_cylinder():
    c = segment((1, 0), (1, 1), 2048)
    assert rayleigh_quotient(c, _sine(c)) == pytest.approx(math.pi ** 2, rel=1e-4)


def test_rayleigh_quotient_zero_function():
    with pytest.raises(RevLambdaError):
        rayleigh_quotient(segment((1, 0), (1, 1), 8), np.zeros(9))


def test_sine_trial_respects_length_bound():
    rng = np.random.default_rng(15)
    for _ in range(10):
        c = random_profile(rng).constant_speed(1024)
        a, b = radial_extent(c)
        L = curve_length(c)
        q = rayleigh_quotient(c, _sine(c))
        assert q <= math.pi ** 2 * b / (L ** 2 * a) * (1 + 1e-6)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_rayleigh_quotient_bounds_lambda(seed):
    rng = np.random.default_rng(seed)
    c = random_profile(rng).uniform(128)
    w = np.concatenate([[0.0], rng.uniform(-1, 1, 127), [0.0]])
    assert rayleigh_quotient(c, w) >= lambda1(c).lambda1 - 1e-12 * lambda1(c).lambda1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_annulus_and_length_bounds(seed):
    c = random_profile(np.random.default_rng(seed)).constant_speed(1024)
    lam = lambda1(c).lambda1
    a, b = radial_extent(c)
    assert lam <= annulus_lambda1((a, b)) + 1e-6
    assert curve_length(c) ** 2 <= math.pi ** 2 * b / (a * lam) * (1 + 1e-6)


def test_truncated_disc_family():
    vals = [lambda1(segment((d, 0), (1, 0), 4096)).lambda1 for d in (0.3, 0.1, 0.03)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert min(vals) > disc_lambda1(1.0)


# --- Euler-Lagrange residual

def test_residual_requires_constant_speed():
    c = segment((1, 0), (1, 1), 50, t=np.linspace(0, 1, 51) ** 2)
    with pytest.raises(CurveError):
        euler_lagrange_residual(c, lambda1(c))


def test_residual_vanishes_on_shooting_output():
    rec = solve_boundary((1.0, 0.0), (1.0, 0.1))
    peak = []
    for n in (128, 256, 512):
        c = rec.trajectory.sample(n)
        rF, rG = euler_lagrange_residual(c, lambda1(c))
        peak.append(max(np.max(np.abs(rF)), np.max(np.abs(rG))))
    assert peak[0] / peak[1] >= 2 and peak[1] / peak[2] >= 2


def test_flat_radial_critical_has_zero_G_residual():
    rec = solve_boundary((1.0, 0.0), (1.2, 0.0))
    c = rec.trajectory.sample(256)
    _, rG = euler_lagrange_residual(c, lambda1(c))
    assert np.max(np.abs(rG)) == 0.0


def test_cylinder_is_not_critical():
    c = segment((1, 0), (1, 1), 256)
    rF, _ = euler_lagrange_residual(c, lambda1(c))
    assert np.max(np.abs(rF)) > 1e-2
