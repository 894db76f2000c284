"""Acceptance criteria, one test per criterion.

Each test records what it measured; the terminal summary prints one
PASS/FAIL line per criterion.  Run alone with ``pytest tests/test_acceptance.py``.
"""
import math
import time

import numpy as np
import pytest

from families import bulge_curve, random_profile
from revlambda import (annulus_lambda1, berger_residual, curve_length, disc_lambda1,
                       endpoint_jacobian, integrate_critical, j0_first_zero, lambda1,
                       length_bound, optimize, radial_extent, radial_node, richardson,
                       segment, uniqueness_scan)
from revlambda.critical_ode import guard_report
from revlambda.errors import GuardError
from revlambda.maximizer import (Inversion, OptimizerConfig, Reparametrize,
                                 disc_type_bound, find_bulges, hausdorff,
                                 improvement_move_audit, log_extrapolate)
from revlambda.shooting import solve_boundary
from revlambda.spectral import EIG_RTOL


def _fmt(x):
    return f"{x:.4g}"


@pytest.mark.criterion(1, "separable oracle: cylinder lambda1 = pi^2/h^2")
def test_separable_oracle(record_property):
    worst, slowest = 0.0, 0.0
    for R, h in [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)]:
        start = time.perf_counter()
        lam = lambda1(segment((R, 0.0), (R, h), 2048)).lambda1
        slowest = max(slowest, time.perf_counter() - start)
        worst = max(worst, abs(lam / (math.pi / h) ** 2 - 1))
    record_property("rel_err", _fmt(worst))
    record_property("max_seconds", _fmt(slowest))
    assert worst <= 1e-6
    assert slowest < 1.0


@pytest.mark.criterion(2, "Bessel oracle: flat radial profile = annulus eigenvalue")
def test_bessel_oracle(record_property):
    worst = 0.0
    for a, b in [(0.5, 1.0), (1.0, 2.0), (0.1, 1.0)]:
        coarse = lambda1(segment((a, 0.0), (b, 0.0), 2048)).lambda1
        fine = lambda1(segment((a, 0.0), (b, 0.0), 4096)).lambda1
        worst = max(worst, abs(richardson(coarse, fine) / annulus_lambda1((a, b)) - 1))
    record_property("rel_err", _fmt(worst))
    assert worst <= 1e-6


@pytest.mark.criterion(3, "disc-type family decreases to the disc eigenvalue")
def test_disc_bound_family(record_property):
    R = 1.0
    d_values = [0.1, 0.01, 0.001]
    lams = disc_type_bound(R, d_values)
    disc = disc_lambda1(R)
    limit = log_extrapolate(d_values, lams)
    rel = abs(limit / (j0_first_zero() / R) ** 2 - 1)
    record_property("lambdas", [_fmt(x) for x in lams])
    record_property("limit_rel_err", _fmt(rel))
    assert lams[0] > lams[1] > lams[2]
    assert min(lams) > disc
    assert rel <= 1e-2


@pytest.mark.criterion(4, "bound suite on 100 random smooth curves")
def test_bound_suite(record_property):
    rng = np.random.default_rng(20240611)
    start = time.perf_counter()
    annulus_gap, length_ratio, reparam = -np.inf, -np.inf, 0.0
    for _ in range(100):
        prof = random_profile(rng)
        fine = prof.constant_speed(4096)
        uniform = richardson(lambda1(prof.uniform(2048)).lambda1,
                             lambda1(prof.uniform(4096)).lambda1)
        steady = richardson(lambda1(prof.constant_speed(2048)).lambda1, lambda1(fine).lambda1)
        reparam = max(reparam, abs(uniform - steady))
        lam = lambda1(fine).lambda1
        a, b = radial_extent(fine)
        annulus_gap = max(annulus_gap, lam - annulus_lambda1((a, b)))
        length_ratio = max(length_ratio, curve_length(fine) ** 2 / (math.pi ** 2 * b / (a * lam)))
    elapsed = time.perf_counter() - start
    record_property("max_lam_minus_annulus", _fmt(annulus_gap))
    record_property("max_length_ratio", _fmt(length_ratio))
    record_property("max_reparam_diff", _fmt(reparam))
    record_property("seconds", _fmt(elapsed))
    assert annulus_gap <= 1e-6
    assert length_ratio <= 1 + 1e-6
    assert reparam <= 1e-8
    assert elapsed < 60.0


@pytest.mark.criterion(5, "axial shooting meets the Bessel node; Berger identity holds")
def test_shooting_bessel(record_property):
    end_err, berger = 0.0, 0.0
    for lam in (50.0, 100.0, 400.0):
        traj = integrate_critical(0.0, lam, (1.0, 0.0))
        node = radial_node(math.sqrt(lam), 1.0)
        end_err = max(end_err, abs(traj.endpoint[0] - node), abs(traj.endpoint[1]))
        berger = max(berger, berger_residual(traj))
    for theta in np.linspace(0.0, 2 * math.pi, 8, endpoint=False):
        for lam in (10.0, 100.0, 1000.0):
            berger = max(berger, berger_residual(integrate_critical(theta, lam, (1.0, 0.0))))
    record_property("endpoint_err", _fmt(end_err))
    record_property("berger", _fmt(berger))
    assert end_err <= 1e-8
    assert berger <= 1e-12


@pytest.mark.criterion(6, "endpoint map has differential pi times identity at the origin")
def test_jacobian(record_property):
    J = endpoint_jacobian(0.0, 0.0, (1.0, 0.0), step=1e-4)
    err = float(np.max(np.abs(J - math.pi * np.eye(2))))
    record_property("max_entry_err", _fmt(err))
    assert err <= 1e-3


@pytest.mark.criterion(7, "flux, length and phase guards on an 8x5 sweep")
def test_guard_sweep(record_property):
    violations = 0
    flux_margin, length_ratio, phase_min = -np.inf, -np.inf, np.inf
    for theta in np.linspace(0.0, 2 * math.pi, 8, endpoint=False):
        for lam in (10.0, 30.0, 100.0, 300.0, 1000.0):
            try:
                traj = integrate_critical(theta, lam, (1.0, 0.0))
            except GuardError:
                violations += 1
                continue
            g = guard_report(traj)
            flux_margin = max(flux_margin, g["flux_max"] - g["p1"])
            length_ratio = max(length_ratio, g["L"] / length_bound(lam, g["F_min"], g["F_max"]))
            phase_min = min(phase_min, g["phase_min"])
            violations += int(g["flux_max"] > g["p1"] + 1e-8)
            violations += int(g["L"] > g["length_bound"] * (1 + 1e-6))
            violations += int(not g["phase_min"] > 0)
    record_property("violations", violations)
    record_property("flux_margin", _fmt(flux_margin))
    record_property("length_ratio", _fmt(length_ratio))
    record_property("phase_min", _fmt(phase_min))
    assert violations == 0


@pytest.mark.criterion(8, "optimizer and shooting agree; residual falls under refinement")
def test_two_route_agreement(record_property):
    p, q = (1.0, 0.0), (1.0, 0.1)
    shot = solve_boundary(p, q)
    res = {}
    for n in (512, 1024):
        res[n] = optimize(p, q, n, OptimizerConfig(match_shooting=False))
    rep = res[512]
    gap = abs(rep.lambda1 / shot.lam - 1)
    dist = hausdorff(rep.curve, shot.trajectory.sample(512))
    ratio = res[512].el_residual / res[1024].el_residual
    record_property("rel_gap", _fmt(gap))
    record_property("hausdorff", _fmt(dist))
    record_property("el_ratio", _fmt(ratio))
    assert gap <= 1e-3
    assert dist <= 1e-2
    assert ratio >= 4.0


@pytest.mark.criterion(9, "uniqueness scan collapses to one class per target")
def test_uniqueness_scan(record_property):
    p = (1.0, 0.0)
    counts, miss = [], 0.0
    for deg in (0.0, 90.0, 180.0, 45.0):
        q = (1.0 + 0.05 * math.cos(math.radians(deg)), 0.05 * math.sin(math.radians(deg)))
        classes = uniqueness_scan(p, q, m=8, class_tol=1e-6)
        counts.append(len(classes))
        for rec in classes:
            miss = max(miss, math.hypot(rec.endpoint.x - q[0], rec.endpoint.y - q[1]))
    record_property("classes", counts)
    record_property("endpoint_miss", _fmt(miss))
    assert counts == [1, 1, 1, 1]
    assert miss <= 1e-8


@pytest.mark.criterion(10, "bulge inversion raises lambda1; reparametrization never lowers it")
def test_improvement_moves(record_property):
    curve = bulge_curve()
    i1, i2, circle = find_bulges(curve)[0]
    before, after = improvement_move_audit(curve, Inversion(circle, i1, i2))
    increase = after / before - 1
    worst = np.inf
    for candidate in [curve] + _reparam_population():
        lo, hi = improvement_move_audit(candidate, Reparametrize())
        worst = min(worst, hi / lo - 1)
    record_property("inversion_increase", _fmt(increase))
    record_property("worst_reparam_change", _fmt(worst))
    assert increase >= 10 * EIG_RTOL
    assert worst >= -1e-8


def _reparam_population():
    """Smooth curves sampled uniformly in a non-uniform parameter, up to near-stalls."""
    rng = np.random.default_rng(99)
    out = []
    for k in range(12):
        prof = random_profile(rng)
        prof.eps = (-0.95, 0.95, prof.eps)[k % 3]
        out.append(prof.uniform(128))
    return out
