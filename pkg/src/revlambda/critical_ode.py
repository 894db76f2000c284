"""Initial value problem satisfied by critical profile curves.

Starting at ``p`` with unit tangent angle ``theta0`` the state
``(v, v', theta, F, G)`` obeys, in arclength ``t``::

    v''    = -(cos theta / F) v' - lam v
    theta' = sin theta (v'^2 - lam v^2) / (F (v'^2 + lam v^2))
    F'     = cos theta,   G' = sin theta

with ``v(0) = 0, v'(0) = 1``.  Integration stops at the first zero ``L`` of ``v``.
The endpoint ``(F(L), G(L))`` as a function of
``(x, y) = lam**-0.5 (cos theta0, sin theta0)`` is the endpoint map.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._dopri import dopri_step, integrate_to_zero
from .errors import DegeneratePhaseError, DomainError, LeftHalfPlaneError
from .geometry import HalfPlanePoint, ProfileCurve, arclength_reparametrize, resample
from .reference_spectra import disc_lambda1

HORIZON_SAFETY = 2.0
PHASE_FLOOR = 1e-14
DEFAULT_TOL = 1e-11
STATE_NAMES = ("v", "vp", "theta", "F", "G")


def _as_point(p) -> HalfPlanePoint:
    return p if isinstance(p, HalfPlanePoint) else HalfPlanePoint(*p)


@dataclass(frozen=True)
class CriticalTrajectory:
    """Solution of the critical IVP on ``[0, L]``.

    ``states[k]`` is ``(v, v', theta, F, G)`` at ``grid[k]`` and ``derivs[k]``
    the right-hand side evaluated there.
    """

    theta0: float
    lam: float
    p: HalfPlanePoint
    grid: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    L: float
    nsteps: int = 0
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __getattr__(self, name):
        if name in STATE_NAMES:
            return self.states[:, STATE_NAMES.index(name)]
        raise AttributeError(name)

    @property
    def endpoint(self) -> tuple[float, float]:
        return float(self.states[-1, 3]), float(self.states[-1, 4])

    def profile(self, n: int | None = None) -> ProfileCurve:
        """The traced curve ``(F, G)`` as a constant-speed profile with ``n`` elements."""
        pts = self.states[:, 3:5]
        curve = ProfileCurve(pts, tuple(self.p), tuple(pts[-1]))
        if n is None:
            return arclength_reparametrize(curve)
        return self.sample(n)

    def sample(self, n: int) -> ProfileCurve:
        """``(F, G)`` at ``n + 1`` equally spaced arclengths.

        Each sample is reached by one exact Dormand-Prince step from the
        preceding grid point, so samples carry the integration accuracy.
        """
        s = np.linspace(0.0, self.L, n + 1)
        rhs = critical_rhs(self.lam)
        k = np.clip(np.searchsorted(self.grid, s, side="right") - 1, 0, len(self.grid) - 1)
        pts = np.empty((n + 1, 2))
        for i in range(n + 1):
            j = k[i]
            tau = s[i] - self.grid[j]
            if tau == 0:
                pts[i] = self.states[j, 3:5]
            else:
                y, _, _ = dopri_step(rhs, self.grid[j], list(self.states[j]), list(self.derivs[j]), tau)
                pts[i] = y[3:5]
        pts[0] = (self.p.x, self.p.y)
        pts[-1] = self.endpoint
        return ProfileCurve(pts)


@dataclass(frozen=True)
class RescaledTrajectory:
    """Solution of the sigma-scaled system; ``sigma = 0`` is the flat limit ``v0 = sin t``."""

    sigma: float
    theta0: float
    p1: float
    grid: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    L0: float
    nsteps: int = 0

    @property
    def endpoint(self) -> tuple[float, float]:
        return float(self.states[-1, 3]), float(self.states[-1, 4])

    def to_critical(self, p2: float) -> CriticalTrajectory:
        """Undo the scaling: ``lam = 1/sigma^2``, ``v = sigma v0(t/sigma)``, ``F = p1 + sigma F0`` ..."""
        s = self.sigma
        if s == 0:
            raise DomainError("sigma = 0 has no unscaled counterpart")
        st = self.states
        states = np.column_stack([s * st[:, 0], st[:, 1], st[:, 2],
                                  self.p1 + s * st[:, 3], p2 + s * st[:, 4]])
        d = self.derivs
        derivs = np.column_stack([d[:, 0], d[:, 1] / s, d[:, 2] / s, d[:, 3], d[:, 4]])
        return CriticalTrajectory(self.theta0, 1.0 / s ** 2, HalfPlanePoint(self.p1, p2),
                                  s * self.grid, states, derivs, s * self.L0, self.nsteps)


def _hermite(t, y, dy, s):
    k = np.clip(np.searchsorted(t, s, side="right") - 1, 0, len(t) - 2)
    h = t[k + 1] - t[k]
    u = (s - t[k]) / h
    return ((1 + 2 * u) * (1 - u) ** 2 * y[k] + u * (1 - u) ** 2 * h * dy[k]
            + u * u * (3 - 2 * u) * y[k + 1] + u * u * (u - 1) * h * dy[k + 1])


def critical_rhs(lam):
    def rhs(t, y):
        v, w, th, F, _ = y
        if F <= 0:
            raise LeftHalfPlaneError(f"F reached {F} at t={t}")
        c, s = math.cos(th), math.sin(th)
        w2, lv2 = w * w, lam * v * v
        phase = w2 + lv2
        if phase < PHASE_FLOOR:
            raise DegeneratePhaseError(f"lam v^2 + v'^2 = {phase} at t={t}")
        return [w, -c / F * w - lam * v, s * (w2 - lv2) / (F * phase), c, s]
    return rhs


def rescaled_rhs(sigma, p1):
    def rhs(t, y):
        v, w, th, F0, _ = y
        F = p1 + sigma * F0
        if F <= 0:
            raise LeftHalfPlaneError(f"F reached {F} at scaled t={t}")
        c, s = math.cos(th), math.sin(th)
        w2, v2 = w * w, v * v
        phase = w2 + v2
        if phase < PHASE_FLOOR:
            raise DegeneratePhaseError(f"v0^2 + v0'^2 = {phase} at scaled t={t}")
        return [w, -sigma * c / F * w - v, sigma * s * (w2 - v2) / (F * phase), c, s]
    return rhs


def _check_state(radial, phase):
    def check(y):
        if radial(y) <= 0:
            raise LeftHalfPlaneError(f"F reached {radial(y)}")
        if phase(y) < PHASE_FLOOR:
            raise DegeneratePhaseError(f"phase quantity {phase(y)} below floor")
    return check


def _require_above_disc(lam, p1):
    floor = disc_lambda1(p1)
    if not lam > floor:
        raise DomainError(f"lam={lam} must exceed the disc eigenvalue {floor} for radius p1={p1}")


def length_bound(lam, a, b):
    """``pi sqrt(b / (a lam))``: no positive solution survives beyond this length."""
    return math.pi * math.sqrt(b / (a * lam))


def integrate_critical(theta0: float, lam: float, p, tol: float = DEFAULT_TOL,
                       safety: float = HORIZON_SAFETY) -> CriticalTrajectory:
    """Solve the critical IVP from ``p`` up to the first zero of ``v``."""
    p = _as_point(p)
    if not tol > 0:
        raise DomainError("tol must be positive")
    _require_above_disc(lam, p.x)
    y0 = [0.0, 1.0, float(theta0), p.x, p.y]
    sol = integrate_to_zero(
        critical_rhs(lam), y0, tol, h0=1e-3 / math.sqrt(lam),
        horizon=lambda a, b: safety * length_bound(lam, a, b),
        radial=lambda y: y[3],
        check=_check_state(lambda y: y[3], lambda y: lam * y[0] ** 2 + y[1] ** 2),
    )
    return CriticalTrajectory(float(theta0), float(lam), p, np.array(sol.t), np.array(sol.y),
                              np.array(sol.f), sol.t_end, sol.nsteps)


def integrate_rescaled(sigma: float, theta0: float, p1: float,
                       tol: float = DEFAULT_TOL, safety: float = HORIZON_SAFETY) -> RescaledTrajectory:
    """Solve the scaled system with ``F0(0) = G0(0) = 0`` up to the first zero of ``v0``."""
    if not p1 > 0:
        raise DomainError("p1 must be positive")
    if sigma < 0 or sigma ** 2 * disc_lambda1(p1) >= 1:
        raise DomainError(f"sigma={sigma} outside [0, disc_lambda1(p1)**-0.5)")
    theta0 = float(theta0)
    if sigma == 0:
        t = np.linspace(0.0, math.pi, 65)
        c, s = math.cos(theta0), math.sin(theta0)
        states = np.column_stack([np.sin(t), np.cos(t), np.full_like(t, theta0), c * t, s * t])
        derivs = np.column_stack([np.cos(t), -np.sin(t), np.zeros_like(t),
                                  np.full_like(t, c), np.full_like(t, s)])
        states[-1] = [0.0, -1.0, theta0, math.pi * c, math.pi * s]
        return RescaledTrajectory(0.0, theta0, float(p1), t, states, derivs, math.pi)
    radial = lambda y: p1 + sigma * y[3]
    sol = integrate_to_zero(
        rescaled_rhs(sigma, p1), [0.0, 1.0, theta0, 0.0, 0.0], tol, h0=1e-3,
        horizon=lambda a, b: safety * math.pi * math.sqrt(b / a),
        radial=radial,
        check=_check_state(radial, lambda y: y[0] ** 2 + y[1] ** 2),
    )
    return RescaledTrajectory(float(sigma), theta0, float(p1), np.array(sol.t), np.array(sol.y),
                              np.array(sol.f), sol.t_end, sol.nsteps)


def decode(x: float, y: float) -> tuple[float, float]:
    """``(x, y) = sigma (cos theta0, sin theta0)`` -> ``(sigma, theta0)``."""
    return math.hypot(x, y), math.atan2(y, x)


def encode(theta0: float, lam: float) -> tuple[float, float]:
    s = 1.0 / math.sqrt(lam)
    return s * math.cos(theta0), s * math.sin(theta0)


def _check_domain(sigma, p1, B):
    if B is not None:
        if not B > disc_lambda1(p1):
            raise DomainError(f"B={B} must exceed disc_lambda1(p1)={disc_lambda1(p1)}")
        if sigma * sigma * B >= 1:
            raise DomainError(f"|(x, y)| = {sigma} is outside the disc of radius B**-0.5 = {B ** -0.5}")


def endpoint_map(x: float, y: float, p, B: float | None = None,
                 tol: float = DEFAULT_TOL) -> HalfPlanePoint:
    """Far endpoint of the critical curve with parameters encoded as ``(x, y)``."""
    p = _as_point(p)
    sigma, theta0 = decode(x, y)
    _check_domain(sigma, p.x, B)
    if sigma == 0:
        return p
    F0, G0 = integrate_rescaled(sigma, theta0, p.x, tol).endpoint
    return HalfPlanePoint(p.x + sigma * F0, p.y + sigma * G0)


def scaled_endpoint(sigma: float, theta0: float, p1: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``Psi(sigma, theta0) = (Phi - p) / sigma``, with ``Psi(0, theta0) = pi (cos, sin)``."""
    return np.array(integrate_rescaled(sigma, theta0, p1, tol).endpoint)


def endpoint_jacobian(x: float, y: float, p, step: float = 1e-4,
                      tol: float = DEFAULT_TOL) -> np.ndarray:
    """Central-difference Jacobian of the endpoint map at ``(x, y)``."""
    J = np.empty((2, 2))
    for j, (dx, dy) in enumerate(((step, 0.0), (0.0, step))):
        plus = endpoint_map(x + dx, y + dy, p, tol=tol)
        minus = endpoint_map(x - dx, y - dy, p, tol=tol)
        J[0, j] = (plus.x - minus.x) / (2 * step)
        J[1, j] = (plus.y - minus.y) / (2 * step)
    return J


def berger_residual(traj: CriticalTrajectory, relative: bool = True) -> float:
    """Largest violation of ``(v'^2 - lam v^2)(theta' + sin theta / F) = 2 v'^2 theta'`` on the grid.

    ``theta'`` is the value stored with the trajectory (the right-hand side at
    each grid point).  With ``relative`` the residual is divided pointwise by
    the magnitude of the largest term.
    """
    v, w, th, F = (traj.states[:, k] for k in range(4))
    dth = traj.derivs[:, 2]
    lam = traj.lam
    diff = w ** 2 - lam * v ** 2
    lhs = diff * (dth + np.sin(th) / F)
    rhs = 2 * w ** 2 * dth
    res = np.abs(lhs - rhs)
    if not relative:
        return float(res.max())
    scale = np.maximum.reduce([np.abs(diff * dth), np.abs(diff * np.sin(th) / F), np.abs(rhs)])
    scale = np.maximum(scale, (w ** 2 + lam * v ** 2) / F.max())
    return float(np.max(res / scale))


def flux(traj: CriticalTrajectory) -> np.ndarray:
    """``v'(t) F(t)``, bounded above by ``p1`` along any positive solution."""
    return traj.states[:, 1] * traj.states[:, 3]


def guard_report(traj: CriticalTrajectory) -> dict:
    """A priori bounds evaluated on a completed trajectory."""
    F = traj.states[:, 3]
    a, b = float(F.min()), float(F.max())
    phase = traj.lam * traj.states[:, 0] ** 2 + traj.states[:, 1] ** 2
    return {
        "L": traj.L,
        "length_bound": length_bound(traj.lam, a, b),
        "F_min": a,
        "F_max": b,
        "flux_max": float(flux(traj).max()),
        "p1": traj.p.x,
        "phase_min": float(phase.min()),
        "unit_speed_error": float(np.max(np.abs(np.hypot(traj.derivs[:, 3], traj.derivs[:, 4]) - 1))),
    }
