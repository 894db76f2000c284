"""Shooting inversion of the endpoint map: boundary points ``p, q`` -> critical ``(theta0, lam)``."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .critical_ode import (DEFAULT_TOL, CriticalTrajectory, _as_point, decode,
                           integrate_rescaled)
from .errors import DomainError, GuardError, InversionFailed
from .geometry import HalfPlanePoint
from .reference_spectra import disc_lambda1
from .workers import worker_count

DEFAULT_B_FACTOR = 2.0


@dataclass(frozen=True)
class EndpointRecord:
    theta0: float
    lam: float
    endpoint: HalfPlanePoint
    trajectory: CriticalTrajectory
    iterations: int = 0
    history: list = field(default_factory=list, compare=False, repr=False)

    @property
    def xy(self) -> tuple[float, float]:
        s = 1.0 / math.sqrt(self.lam)
        return s * math.cos(self.theta0), s * math.sin(self.theta0)


def default_floor(p1: float) -> float:
    return DEFAULT_B_FACTOR * disc_lambda1(p1)


def _phi(z, p, tol):
    sigma, theta0 = decode(*z)
    if sigma == 0:
        return np.array([p.x, p.y])
    F0, G0 = integrate_rescaled(sigma, theta0, p.x, tol).endpoint
    return np.array([p.x + sigma * F0, p.y + sigma * G0])


def _check_target(p, q, B):
    dist = math.hypot(q.x - p.x, q.y - p.y)
    if dist == 0:
        raise DomainError("q coincides with p")
    if not B > disc_lambda1(p.x):
        raise DomainError(f"B={B} must exceed disc_lambda1(p1)={disc_lambda1(p.x)}")
    if dist >= math.pi / math.sqrt(B):
        raise DomainError(f"|q - p| = {dist} is not below pi / sqrt(B) = {math.pi / math.sqrt(B)}")
    return dist


def solve_boundary(p, q, B: float | None = None, *, start=None, tol: float = DEFAULT_TOL,
                   rtol: float = 1e-10, max_iter: int = 40) -> EndpointRecord:
    """Critical curve from ``p`` ending at ``q`` by damped Newton on the endpoint map.

    Newton runs in ``(x, y) = lam**-0.5 (cos theta0, sin theta0)`` inside the disc
    ``x^2 + y^2 < 1/B``.  The default start ``(q - p) / pi`` comes from the
    endpoint map's differential at the origin being ``pi`` times the identity.
    """
    p, q = _as_point(p), _as_point(q)
    B = default_floor(p.x) if B is None else float(B)
    dist = _check_target(p, q, B)
    target = np.array([q.x, q.y])
    radius = 1.0 / math.sqrt(B)
    z = (target - p.as_array()) / math.pi if start is None else np.array(start, dtype=float)
    step = max(1e-6, 1e-3 * dist)
    history = []

    def residual(z):
        return _phi(z, p, tol) - target

    r = residual(z)
    history.append((float(z[0]), float(z[1]), float(np.linalg.norm(r))))
    for it in range(1, max_iter + 1):
        if np.linalg.norm(r) <= rtol * dist:
            return _record(z, p, tol, it - 1, history)
        J = np.empty((2, 2))
        for j in range(2):
            e = np.zeros(2)
            e[j] = step
            J[:, j] = (residual(z + e) - residual(z - e)) / (2 * step)
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e10:
            raise InversionFailed(f"Jacobian near-singular at {z}", history)
        dz = -np.linalg.solve(J, r)
        rn = np.linalg.norm(r)
        for _ in range(21):
            z_new = z + dz
            if np.hypot(*z_new) < radius:
                try:
                    r_new = residual(z_new)
                except GuardError:
                    r_new = None
                if r_new is not None and np.linalg.norm(r_new) < rn:
                    break
            dz *= 0.5
        else:
            raise InversionFailed(f"damping failed to reduce the residual at {z}", history)
        z, r = z_new, r_new
        history.append((float(z[0]), float(z[1]), float(np.linalg.norm(r))))
    if np.linalg.norm(r) <= rtol * dist:
        return _record(z, p, tol, max_iter, history)
    raise InversionFailed(f"no convergence in {max_iter} iterations", history)


def _record(z, p, tol, iterations, history):
    sigma, theta0 = decode(*z)
    traj = integrate_rescaled(sigma, theta0, p.x, tol).to_critical(p.y)
    return EndpointRecord(theta0, 1.0 / sigma ** 2, HalfPlanePoint(*traj.endpoint), traj,
                          iterations, history)


def _same_class(a: EndpointRecord, b: EndpointRecord, tol: float) -> bool:
    dtheta = abs(math.remainder(a.theta0 - b.theta0, 2 * math.pi))
    return dtheta <= tol and abs(a.lam - b.lam) <= tol * max(a.lam, b.lam)


def scan_runs(p, q, B: float | None = None, m: int = 8, tol: float = DEFAULT_TOL) -> list:
    """Newton from ``m`` initial angles at the asymptotic eigenvalue guess.

    Returns one entry per start: an :class:`EndpointRecord` or the
    :class:`InversionFailed` raised by that run.
    """
    p, q = _as_point(p), _as_point(q)
    B = default_floor(p.x) if B is None else float(B)
    dist = _check_target(p, q, B)
    sigma0 = dist / math.pi

    def run(k):
        ang = 2 * math.pi * k / m
        start = (sigma0 * math.cos(ang), sigma0 * math.sin(ang))
        try:
            return solve_boundary(p, q, B, start=start, tol=tol)
        except (InversionFailed, GuardError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(run, range(m)))


def uniqueness_scan(p, q, B: float | None = None, m: int = 8, class_tol: float = 1e-6,
                    tol: float = DEFAULT_TOL) -> list[EndpointRecord]:
    """Distinct ``(theta0 mod 2 pi, lam)`` solutions found from ``m`` starting angles."""
    classes: list[EndpointRecord] = []
    for rec in scan_runs(p, q, B, m, tol):
        if isinstance(rec, Exception):
            continue
        if not any(_same_class(rec, c, class_tol) for c in classes):
            classes.append(rec)
    return classes
