"""Direct maximization of the first eigenvalue over profile curves joining ``p`` and ``q``.

The current shape is a smooth base curve plus a normal displacement

    gamma(t) = B(t) + D d(t) N(t),   d(t) = t (1 - t) sum_k c_k P_k(2t - 1)

with ``D = |q - p|`` and Legendre polynomials ``P_k``.  Every trial shape is
sampled at constant speed before its eigenvalue is computed, the coefficients
``c`` are the control variables, and the ascent is BFGS on central
finite-difference gradients with a backtracking line search.  Periodically the
surgery moves (inversion of outward bulges, chord replacement of near
self-contacts) are tried on the sampled curve and kept only if they raise the
eigenvalue.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre
from scipy.interpolate import CubicSpline
from scipy.spatial.distance import directed_hausdorff

from . import _kernels
from .critical_ode import _as_point
from .errors import CurveError, GuardError, InversionFailed, RevLambdaError, DomainError
from .geometry import (CircleSpec, HalfPlanePoint, ProfileCurve, arclength_reparametrize,
                       chord_replace, constant_speed_samples, invert_in_circle, segment,
                       validate_curve)
from .reference_spectra import disc_lambda1
from .shooting import solve_boundary
from .spectral import (assemble, eigenvalues, euler_lagrange_residual, lambda1,
                       rayleigh_quotient, refine_eigenpair, richardson)
from .workers import worker_count


NOISE_RTOL = 1e-12


class AuditFailure(RevLambdaError):
    """An improvement move lowered the eigenvalue where it must not."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of :func:`optimize`.

    ``gtol`` bounds the gradient norm relative to the eigenvalue, ``rtol`` the
    largest Euler-Lagrange residual.  ``fd_step`` is in units of ``|q - p|``.
    """

    gtol: float = 1e-8
    rtol: float = 1e-4
    maxiter: int = 200
    modes: int = 16
    fd_step: float = 1e-5
    move_every: int = 10
    coarse_n: int = 128
    rebase_at: float = 0.1
    hess_step: float | None = 1e-4
    init: str = "chord"
    bulge: float = 0.2
    match_shooting: bool = True

    def __post_init__(self):
        if not (self.gtol > 0 and self.rtol > 0 and self.fd_step > 0):
            raise DomainError("tolerances and fd_step must be positive")
        if self.maxiter < 0 or self.modes < 1 or self.move_every < 1:
            raise DomainError("maxiter >= 0, modes >= 1 and move_every >= 1 required")
        if self.init not in ("chord", "outward", "inward"):
            raise DomainError(f"unknown init {self.init!r}")


@dataclass(frozen=True)
class MaximizerReport:
    curve: ProfileCurve
    lambda1: float
    Lambda_baseline: float
    el_residual: float
    shooting_match: tuple | None
    converged: bool
    iterations: int
    grad_norm: float
    moves_accepted: int = 0
    history: list = field(default_factory=list, compare=False, repr=False)
    notes: list = field(default_factory=list, compare=False, repr=False)


# ----------------------------------------------------------------- shapes

class _Base:
    """Smooth base curve: a cubic spline through dense samples on ``[0, 1]``."""

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        self.spline = CubicSpline(np.linspace(0.0, 1.0, len(samples)), samples, axis=0)
        self.p = samples[0]
        self.q = samples[-1]

    def frame(self, t):
        B = self.spline(t)
        B1 = self.spline(t, 1)
        B2 = self.spline(t, 2)
        sp = np.hypot(B1[:, 0], B1[:, 1])
        T = B1 / sp[:, None]
        dT = (B2 - np.einsum("ij,ij->i", T, B2)[:, None] * T) / sp[:, None]
        N = np.column_stack([T[:, 1], -T[:, 0]])
        dN = np.column_stack([dT[:, 1], -dT[:, 0]])
        return B, B1, N, dN


def _displacement(c, t):
    P, dP = _kernels.legendre_series(np.asarray(c, dtype=float), 2.0 * t - 1.0)
    dP = 2.0 * dP
    w = t * (1.0 - t)
    return w * P, (1.0 - 2.0 * t) * P + w * dP


class _Shape:
    """Maps coefficient vectors to constant-speed sampled curves."""

    def __init__(self, base: _Base, scale: float, n: int):
        self.base = base
        self.scale = scale
        self.n = n
        self.t = None

    def func(self, c):
        def f(t):
            B, B1, N, dN = self.base.frame(t)
            d, dd = _displacement(c, t)
            D = self.scale
            return (B + D * d[:, None] * N,
                    B1 + D * (dd[:, None] * N + d[:, None] * dN))
        return f

    def curve(self, c, t0=None):
        t0 = self.t if t0 is None else t0
        curve, t = constant_speed_samples(self.func(c), self.n, t0)
        pts = curve.samples.copy()
        pts[0], pts[-1] = self.base.p, self.base.q
        curve = ProfileCurve(pts)
        chords = curve.chords()
        if (validate_curve(curve) or np.any(np.diff(t) <= 0)
                or np.ptp(chords) > 1e-9 * chords.mean()):
            raise CurveError("trial shape is not a valid profile curve")
        return curve, t

    def dense(self, c, k=4097):
        t = np.linspace(0.0, 1.0, k)
        pts = self.func(c)(t)[0]
        pts[0], pts[-1] = self.base.p, self.base.q
        return pts


def _ground_state(curve: ProfileCurve, guess=None):
    """Eigenvalue to roundoff: bracketing by bisection, then Rayleigh quotient polish."""
    pencil = assemble(curve)
    if guess is None:
        lam0, _ = eigenvalues(pencil, 1e-9)
        x0 = np.sin(np.pi * curve.t[1:-1])
        iters = 3
    else:
        lam0, x0 = guess
        iters = 2
    _, x = refine_eigenpair(pencil, lam0, x0, iters=iters)
    # element form of the quotient avoids the cancellation in K x
    return rayleigh_quotient(curve, np.concatenate([[0.0], x, [0.0]])), x


class _Objective:
    def __init__(self, shape: _Shape, step: float):
        self.shape = shape
        self.step = step
        self.evals = 0

    def value(self, c, guess=None):
        self.evals += 1
        try:
            curve, t = self.shape.curve(c)
        except (CurveError, np.linalg.LinAlgError, FloatingPointError):
            return -math.inf, None, None, None
        lam, x = _ground_state(curve, guess)
        return lam, x, curve, t

    def gradient(self, c, guess):
        m = len(c)
        h = self.step

        def probe(j):
            e = np.zeros(m)
            e[j] = h
            return self.value(c + e, guess)[0] - self.value(c - e, guess)[0]

        workers = worker_count()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                diffs = list(pool.map(probe, range(m)))
        else:
            diffs = [probe(j) for j in range(m)]
        return np.array(diffs) / (2 * h)


# ----------------------------------------------------------------- seeds

def arc_seed(p, q, bulge: float, k: int = 4097) -> np.ndarray:
    """Circular arc from ``p`` to ``q`` with sagitta ``bulge * |q - p|``.

    Positive ``bulge`` bends toward the side of the chord's normal
    ``(dG, -dF)``, which points away from the axis for an upward chord.
    """
    p = np.asarray(tuple(p), dtype=float)
    q = np.asarray(tuple(q), dtype=float)
    t = np.linspace(0.0, 1.0, k)
    if bulge == 0:
        return p + t[:, None] * (q - p)
    D = np.linalg.norm(q - p)
    u = (q - p) / D
    nrm = np.array([u[1], -u[0]])
    s = abs(bulge) * D
    R = (D * D / 4 + s * s) / (2 * s)
    half = math.asin(min(1.0, D / (2 * R)))
    if s > D / 2:
        half = math.pi - half
    sign = 1.0 if bulge > 0 else -1.0
    center = 0.5 * (p + q) - sign * (R - s) * nrm
    ang = (2 * t - 1) * half
    pts = center + R * (np.sin(ang)[:, None] * u + sign * np.cos(ang)[:, None] * nrm)
    pts[0], pts[-1] = p, q
    return pts


def _seed_samples(p, q, config: OptimizerConfig, init_curve) -> np.ndarray:
    if init_curve is not None:
        return _smooth_samples(init_curve)
    bulge = {"chord": 0.0, "outward": config.bulge, "inward": -config.bulge}[config.init]
    return arc_seed(p, q, bulge)


def _smooth_samples(curve: ProfileCurve) -> np.ndarray:
    """Dense samples of a spline through a constant-speed version of ``curve``."""
    c = arclength_reparametrize(curve)
    pts = CubicSpline(c.t, c.samples, axis=0)(np.linspace(0.0, 1.0, max(4097, 4 * c.n + 1)))
    pts[0], pts[-1] = c.samples[0], c.samples[-1]
    return pts


# ----------------------------------------------------------------- moves

def find_bulges(curve: ProfileCurve, max_span: int | None = None) -> list:
    """Arcs that leave the disc whose diameter is the chord between their ends.

    Returns ``(i1, i2, CircleSpec)`` for every pair where all samples strictly
    between ``i1`` and ``i2`` lie outside that circle and within twice its
    radius, and the circle is small enough (five radii fit between its center
    and the axis).  Widest spans come first.
    """
    pts = curve.samples
    n = curve.n
    max_span = n if max_span is None else max_span
    found = []
    for i1 in range(n - 1):
        for i2 in range(i1 + 2, min(n, i1 + max_span) + 1):
            a, b = pts[i1], pts[i2]
            center = 0.5 * (a + b)
            r0 = 0.5 * math.hypot(*(b - a))
            if r0 == 0 or 5 * r0 > center[0]:
                continue
            d = np.hypot(*(pts[i1 + 1:i2] - center).T)
            if np.all(d > r0 * (1 + 1e-9)) and np.all(d <= 2 * r0):
                found.append((i1, i2, CircleSpec(HalfPlanePoint(*center), r0)))
    found.sort(key=lambda f: f[0] - f[1])
    return found


def find_contacts(curve: ProfileCurve, factor: float = 0.5, gap: int = 3) -> list:
    """Pairs ``(i, j)``, ``j >= i + gap``, closer than ``factor`` times the mean chord."""
    pts = curve.samples
    h = factor * curve.chords().mean()
    out = []
    for i in range(curve.n + 1 - gap):
        d = np.hypot(*(pts[i + gap:] - pts[i]).T)
        hit = np.flatnonzero(d < h)
        if hit.size:
            out.append((i, i + gap + int(hit[-1])))
    return out


@dataclass(frozen=True)
class Reparametrize:
    """Constant-speed resampling."""


@dataclass(frozen=True)
class Inversion:
    circle: CircleSpec
    i1: int
    i2: int


@dataclass(frozen=True)
class ChordReplace:
    i1: int
    i2: int


def apply_move(curve: ProfileCurve, move) -> ProfileCurve:
    if isinstance(move, Reparametrize):
        return arclength_reparametrize(curve)
    if isinstance(move, Inversion):
        return invert_in_circle(curve, move.circle, move.i1, move.i2)
    if isinstance(move, ChordReplace):
        return chord_replace(curve, move.i1, move.i2)
    raise DomainError(f"unknown move {move!r}")


def spline_profile(curve: ProfileCurve):
    """Cubic spline through the samples in the curve's own parameter, as ``t -> (points, derivatives)``."""
    spl = CubicSpline(curve.t, curve.samples, axis=0)
    der = spl.derivative()
    ends = curve.samples[[0, -1]]

    def func(t):
        t = np.asarray(t, dtype=float)
        pts = spl(t)
        pts[t == 0.0], pts[t == 1.0] = ends[0], ends[1]
        return pts, der(t)
    return func


def continuum_lambda(sample, n0: int = 2048, rtol: float = 1e-10,
                     max_n: int = 1 << 15) -> tuple[float, int]:
    """Mesh-converged eigenvalue of a smooth curve.

    ``sample(n)`` returns an ``n``-segment discretization.  Richardson values
    from meshes ``(n, 2n)`` are formed while doubling ``n`` until two successive
    ones agree within ``rtol``; returns the last value and the finest mesh used.
    Beyond about ``2**15`` segments the tridiagonal solve loses digits to
    roundoff faster than refinement gains them, hence the default cap.
    """
    prev_lam = lambda1(sample(n0)).lambda1
    prev_est, n = None, n0
    while True:
        lam = lambda1(sample(2 * n)).lambda1
        est = richardson(prev_lam, lam)
        n *= 2
        if prev_est is not None and abs(est - prev_est) <= rtol * abs(est):
            return est, n
        if 2 * n > max_n:
            raise DomainError(f"eigenvalue not resolved to rtol={rtol} by n={n}: "
                              f"{prev_est} -> {est}")
        prev_lam, prev_est = lam, est


def improvement_move_audit(curve: ProfileCurve, move, tol: float = 1e-8) -> tuple[float, float]:
    """Eigenvalue before and after ``move``.

    Reparametrization is judged on the smooth curve interpolating the samples:
    its mesh-converged eigenvalue in the given parameter against the one at
    constant speed, which must not be lower by more than ``tol`` (relative).
    Resampling a polyline at fixed ``n`` moves its vertices, so comparing
    discrete values directly would measure mesh error rather than the move.
    Surgery moves compare constant-speed versions of both curves; an
    inversion must give a strict increase.
    """
    if isinstance(move, Reparametrize):
        func = spline_profile(curve)
        n0 = 1 << max(11, math.ceil(math.log2(8 * curve.n)))
        # the successive-difference test overstates the error of the newer value
        before, _ = continuum_lambda(
            lambda m: ProfileCurve(func(np.linspace(0.0, 1.0, m + 1))[0]), n0, tol)
        after, _ = continuum_lambda(lambda m: constant_speed_samples(func, m)[0], n0, tol)
        if after < before * (1 - tol):
            raise AuditFailure(f"reparametrization lowered the eigenvalue: {before} -> {after}")
        return before, after
    after_curve = apply_move(curve, move)
    before = lambda1(arclength_reparametrize(curve)).lambda1
    after = lambda1(arclength_reparametrize(after_curve)).lambda1
    if isinstance(move, Inversion) and not after > before:
        raise AuditFailure(f"inversion did not raise the eigenvalue: {before} -> {after}")
    return before, after


def _try_moves(curve: ProfileCurve, lam: float, limit: int = 8):
    """Best strictly improving surgery on ``curve`` (constant speed), or ``None``."""
    best = None
    candidates = [Inversion(c, i1, i2) for i1, i2, c in find_bulges(curve)[:limit]]
    candidates += [ChordReplace(i, j) for i, j in find_contacts(curve)[:limit]]
    for move in candidates:
        try:
            trial = arclength_reparametrize(apply_move(curve, move))
        except CurveError:
            continue
        val = lambda1(trial).lambda1
        if val > lam and (best is None or val > best[0]):
            best = (val, trial, move)
    return best


# ----------------------------------------------------------------- ascent

def baseline(p, q, n: int) -> float:
    """Better of the straight chord and the disc bounded by the larger boundary circle."""
    p, q = _as_point(p), _as_point(q)
    return max(lambda1(segment(p, q, n)).lambda1, disc_lambda1(max(p.x, q.x)))


def hausdorff(a: ProfileCurve, b: ProfileCurve) -> float:
    return max(directed_hausdorff(a.samples, b.samples)[0],
               directed_hausdorff(b.samples, a.samples)[0])


class _Ascent:
    """BFGS state on the coefficient vector of one base curve."""

    def __init__(self, objective: _Objective, m: int, c0=None, H=None, hess_step=None):
        self.obj = objective
        self.m = m
        self.hess_step = hess_step
        self.reset_state(c0, H)

    def reset_state(self, c0=None, H=None):
        self.c = np.zeros(self.m) if c0 is None else np.array(c0, dtype=float)
        self.c_start = self.c.copy()
        self.H = H
        lam, x, curve, t = self.obj.value(self.c)
        if curve is None:
            raise CurveError("initial shape is not a valid profile curve")
        self.obj.shape.t = t
        self.lam, self.x, self.curve = lam, x, curve
        self.g = self.obj.gradient(self.c, (lam, x))

    def inverse_hessian(self, h):
        """``-(d^2 lam / dc^2)^-1`` from forward differences of the gradient, or ``None``.

        ``None`` when the Hessian is not negative definite, in which case the
        first step falls back to a scaled gradient step.
        """
        m = self.m
        hess = np.empty((m, m))
        for j in range(m):
            e = np.zeros(m)
            e[j] = h
            guess = (self.lam, self.x)
            hess[:, j] = (self.obj.gradient(self.c + e, guess) - self.g) / h
        hess = -0.5 * (hess + hess.T)
        w, V = np.linalg.eigh(hess)
        if not np.all(np.isfinite(w)) or w[0] <= 0:
            return None
        return (V / w) @ V.T

    def step(self) -> bool:
        """One line-searched BFGS step; ``False`` when no increase was found."""
        g = self.g
        gn = np.linalg.norm(g)
        if gn == 0:
            return False
        if self.H is None and self.hess_step:
            self.H = self.inverse_hessian(self.hess_step)
        if self.H is None:
            self.H = np.eye(self.m) * (0.01 / gn)
        d = self.H @ g
        if d @ g <= 0:
            self.H = np.eye(self.m) * (0.01 / gn)
            d = self.H @ g
        alpha = 1.0
        pred = g @ d
        g_new = None
        for _ in range(40):
            lam, x, curve, t = self.obj.value(self.c + alpha * d, (self.lam, self.x))
            if lam > self.lam + 1e-4 * alpha * pred:
                break
            if lam > -math.inf and alpha * pred < NOISE_RTOL * self.lam:
                # the increase is below what eigenvalues resolve; judge by the gradient
                g_try = self.obj.gradient(self.c + alpha * d, (lam, x))
                # along a quadratic the value rises iff the end slope exceeds -(start slope)
                if g_try @ d > -0.5 * pred:
                    g_new = g_try
                    break
            alpha *= 0.5
        else:
            return False
        s = alpha * d
        self.c = self.c + s
        self.obj.shape.t = t
        self.lam, self.x, self.curve = lam, x, curve
        if g_new is None:
            g_new = self.obj.gradient(self.c, (lam, x))
        y = -(g_new - g)
        sy = s @ y
        if sy > 1e-300:
            if np.allclose(self.H, self.H[0, 0] * np.eye(self.m)):
                self.H = np.eye(self.m) * (sy / (y @ y))
            rho = 1.0 / sy
            V = np.eye(self.m) - rho * np.outer(s, y)
            self.H = V @ self.H @ V.T + rho * np.outer(s, s)
        self.g = g_new
        return True


def _rebase(shape: _Shape, asc: "_Ascent", samples=None) -> _Base:
    """Make the current shape (or ``samples``) the new base and restart the coefficients at zero.

    The quasi-Newton matrix is kept: nearby bases have nearly the same Hessian.
    """
    base = _Base(shape.dense(asc.c) if samples is None else samples)
    shape.base = base
    shape.t = None
    asc.reset_state(H=asc.H)
    return base


def chord_graph(pts, p, q, modes: int):
    """Coefficients of ``pts`` written as a normal graph over the chord ``pq``, or ``None``.

    The dense samples must project monotonically onto the chord.  The offset
    is fitted by least squares in the displacement basis.
    """
    p = np.asarray(tuple(p), dtype=float)
    q = np.asarray(tuple(q), dtype=float)
    D = np.linalg.norm(q - p)
    u = (q - p) / D
    rel = np.asarray(pts, dtype=float) - p
    s = rel @ u / D
    h = rel @ np.array([u[1], -u[0]]) / D
    if np.any(np.diff(s) <= 0):
        return None
    w = s * (1 - s)
    V = legendre.legvander(2 * s - 1, modes - 1) * w[:, None]
    return np.linalg.lstsq(V, h, rcond=None)[0]


def _handoff(asc: "_Ascent", chord: _Base, p, q, modes: int):
    """Base and coefficients that reproduce the current shape, preferring the chord as base.

    Writing the shape as a graph over the chord removes the truncation left by
    earlier large displacements about a curved base.
    """
    shape = asc.obj.shape
    if shape.base is chord:
        return chord, asc.c
    dense = shape.dense(asc.c)
    c = chord_graph(dense, p, q, modes)
    if c is None:
        return _Base(dense), None
    return chord, c


def _run_level(base: _Base, D: float, n: int, config: OptimizerConfig, budget: int,
               history: list, notes: list, allow_moves: bool, c0=None, H=None):
    shape = _Shape(base, D, n)
    obj = _Objective(shape, config.fd_step)
    asc = _Ascent(obj, config.modes, c0, H, config.hess_step)
    iters = moves = 0
    while iters < budget and np.linalg.norm(asc.g) >= config.gtol * asc.lam:
        iters += 1
        improved = asc.step()
        history.append((n, iters, asc.lam, float(np.linalg.norm(asc.g) / asc.lam)))
        if allow_moves and iters % config.move_every == 0:
            best = _try_moves(asc.curve, asc.lam)
            if best is not None:
                notes.append(f"accepted {type(best[2]).__name__} at n={n}, iteration {iters}")
                moves += 1
                base = _rebase(shape, asc, _smooth_samples(best[1]))
                continue
        if not improved:
            notes.append(f"line search stalled at n={n}, iteration {iters}")
            break
        if np.max(np.abs(asc.c - asc.c_start)) > config.rebase_at:
            base = _rebase(shape, asc)
    return asc, base, iters, moves


def optimize(p, q, n: int, config: OptimizerConfig | None = None,
             init_curve: ProfileCurve | None = None) -> MaximizerReport:
    """Maximize the first eigenvalue over connected profiles from ``p`` to ``q`` with ``n`` elements."""
    config = OptimizerConfig() if config is None else config
    p, q = _as_point(p), _as_point(q)
    if n < 32:
        raise DomainError("n >= 32 required")
    D = math.hypot(q.x - p.x, q.y - p.y)
    if D == 0:
        raise DomainError("p and q coincide")
    history, notes = [], []
    chord = _Base(arc_seed(p, q, 0.0))
    seed = _seed_samples(p, q, config, init_curve)
    c0 = chord_graph(seed, p, q, config.modes)
    start = chord if c0 is not None else _Base(seed)
    coarse = min(n, config.coarse_n)
    asc, _, total, moves = _run_level(start, D, coarse, config, config.maxiter, history, notes,
                                      allow_moves=True, c0=c0)
    base, c0 = _handoff(asc, chord, p, q, config.modes)
    if base is chord and asc.obj.shape.base is not chord:
        asc, _, iters, _ = _run_level(chord, D, coarse, config, config.maxiter - total, history,
                                      notes, allow_moves=False, c0=c0, H=asc.H)
        total += iters
        base, c0 = _handoff(asc, chord, p, q, config.modes)
    if n > coarse:
        # the Hessian in coefficient space barely depends on n
        asc, _, iters, _ = _run_level(base, D, n, config, config.maxiter - total, history,
                                      notes, allow_moves=False, c0=c0, H=asc.H)
        total += iters
    curve = asc.curve
    spec = lambda1(curve)
    res_F, res_G = euler_lagrange_residual(curve, spec)
    el = float(max(np.abs(res_F).max(), np.abs(res_G).max()))
    gnorm = float(np.linalg.norm(asc.g) / asc.lam)
    converged = gnorm < config.gtol and el < config.rtol
    if not converged:
        notes.append("not converged")
    match = None
    if config.match_shooting:
        try:
            rec = solve_boundary(p, q)
            match = (rec.theta0, rec.lam, hausdorff(curve, rec.trajectory.sample(n)))
        except (InversionFailed, GuardError, DomainError) as exc:
            notes.append(f"shooting comparison unavailable: {exc}")
    return MaximizerReport(curve, spec.lambda1, baseline(p, q, n), el, match, converged,
                           total, gnorm, moves, history, notes)


# ----------------------------------------------------------------- disc-type family

def graded_segment(a: float, b: float, n: int) -> ProfileCurve:
    """Flat radial profile ``(a, 0) -> (b, 0)`` with geometric node spacing."""
    r = a * (b / a) ** np.linspace(0.0, 1.0, n + 1)
    r[0], r[-1] = a, b
    return ProfileCurve(np.column_stack([r, np.zeros_like(r)]))


def disc_type_bound(R: float, d_values, n: int = 2048) -> list[float]:
    """Eigenvalues of the truncated flat profiles ``(d, 0) -> (R, 0)``.

    Geometrically graded meshes at ``n`` and ``2n`` elements are combined by
    one Richardson step.
    """
    out = []
    for d in d_values:
        if not 0 < d < R:
            raise DomainError(f"need 0 < d < R, got d={d}, R={R}")
        lo = lambda1(graded_segment(d, R, n)).lambda1
        hi = lambda1(graded_segment(d, R, 2 * n)).lambda1
        out.append((4 * hi - lo) / 3)
    return out


def log_extrapolate(d_values, lams) -> float:
    """Limit ``d -> 0`` of a fit ``lam = l + c1/|log d| + c2/|log d|^2`` (three or more points)."""
    u = 1.0 / np.abs(np.log(np.asarray(d_values, dtype=float)))
    if len(u) < 3:
        raise DomainError("need at least three values")
    coef = np.polyfit(u, np.asarray(lams, dtype=float), 2)
    return float(coef[-1])
