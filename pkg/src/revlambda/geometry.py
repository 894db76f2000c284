"""Profile curves in the open right half-plane and the curve-surgery moves.

A profile curve is stored as a polyline of ``n + 1`` samples ``(F, G)`` taken at
the uniform parameter values ``t_i = i / n``.  ``F`` is the distance to the axis
of revolution and ``G`` the height along it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_banded

from .errors import CurveError, DomainError

ON_CIRCLE_RTOL = 1e-8


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not self.x > 0:
            raise DomainError(f"point ({self.x}, {self.y}) is not in the right half-plane")

    def __iter__(self):
        yield self.x
        yield self.y

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class CircleSpec:
    center: HalfPlanePoint
    radius: float

    def __post_init__(self):
        if not isinstance(self.center, HalfPlanePoint):
            object.__setattr__(self, "center", HalfPlanePoint(*self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise DomainError("circle radius must be positive")
        if 5 * self.radius > self.center.x:
            raise DomainError(
                f"circle too large for its distance to the axis: 5*{self.radius} > {self.center.x}"
            )


class ProfileCurve:
    """Polyline ``gamma = (F, G)`` sampled at ``t_i = i/n``.

    The constructor does not validate; use :func:`validate_curve` for a
    diagnostic list or let the operations raise on invalid input.
    """

    __slots__ = ("samples", "p", "q")

    def __init__(self, samples, p=None, q=None):
        arr = np.array(samples, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
            raise CurveError("samples must be an (n+1, 2) array with n >= 1")
        arr.setflags(write=False)
        self.samples = arr
        self.p = tuple(map(float, arr[0] if p is None else p))
        self.q = tuple(map(float, arr[-1] if q is None else q))

    @property
    def n(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def F(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def G(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n + 1)

    def chords(self) -> np.ndarray:
        return np.hypot(np.diff(self.F), np.diff(self.G))

    def with_samples(self, samples) -> "ProfileCurve":
        return ProfileCurve(samples, self.p, self.q)

    def reversed(self) -> "ProfileCurve":
        return ProfileCurve(self.samples[::-1], self.q, self.p)

    def __repr__(self):
        return f"ProfileCurve(n={self.n}, p={self.p}, q={self.q})"

    def __eq__(self, other):
        if not isinstance(other, ProfileCurve):
            return NotImplemented
        return (self.p == other.p and self.q == other.q
                and np.array_equal(self.samples, other.samples))

    __hash__ = None


class Violation(NamedTuple):
    index: int
    invariant: str
    detail: str


def validate_curve(curve: ProfileCurve) -> list[Violation]:
    """Return every broken curve invariant; an empty list means the curve is valid."""
    out = []
    s = curve.samples
    if tuple(s[0]) != curve.p:
        out.append(Violation(0, "endpoint p", f"samples[0]={tuple(s[0])} != p={curve.p}"))
    if tuple(s[-1]) != curve.q:
        out.append(Violation(curve.n, "endpoint q", f"samples[n]={tuple(s[-1])} != q={curve.q}"))
    for i in np.flatnonzero(~(s[:, 0] > 0)):
        out.append(Violation(int(i), "x > 0", f"x={s[i, 0]}"))
    same = np.all(s[1:] == s[:-1], axis=1)
    for i in np.flatnonzero(same):
        out.append(Violation(int(i) + 1, "regular", f"sample {i + 1} repeats sample {i}"))
    return out


def _require_valid(curve: ProfileCurve):
    bad = validate_curve(curve)
    if bad:
        v = bad[0]
        raise CurveError(f"invalid curve at sample {v.index}: {v.invariant} ({v.detail})")


def segment(p, q, n: int, t=None) -> ProfileCurve:
    """Straight segment from ``p`` to ``q``, sampled at parameters ``t`` (default uniform)."""
    p = np.asarray(tuple(p), dtype=float)
    q = np.asarray(tuple(q), dtype=float)
    t = np.linspace(0.0, 1.0, n + 1) if t is None else np.asarray(t, dtype=float)
    pts = p + t[:, None] * (q - p)
    pts[0], pts[-1] = p, q
    return ProfileCurve(pts, tuple(p), tuple(q))


def from_function(func, n: int) -> ProfileCurve:
    """Sample ``func(t) -> (F, G)`` at ``t_i = i/n``; endpoints are taken from the samples."""
    t = np.linspace(0.0, 1.0, n + 1)
    F, G = func(t)
    F = np.broadcast_to(np.asarray(F, dtype=float), t.shape)
    G = np.broadcast_to(np.asarray(G, dtype=float), t.shape)
    return ProfileCurve(np.column_stack([F, G]))


def curve_length(curve: ProfileCurve) -> float:
    return float(np.sum(curve.chords()))


def radial_extent(curve: ProfileCurve) -> tuple[float, float]:
    return float(curve.F.min()), float(curve.F.max())


def _point_at_arclength(samples, cum, s):
    """Positions and unit tangents at arclength values ``s`` along a polyline."""
    seg = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(cum) - 2)
    d = samples[seg + 1] - samples[seg]
    ln = cum[seg + 1] - cum[seg]
    frac = (s - cum[seg]) / ln
    return samples[seg] + frac[:, None] * d, d / ln[:, None]


def resample(curve: ProfileCurve, n: int) -> ProfileCurve:
    """Place ``n + 1`` samples at equal arclength spacing along the polyline."""
    s = curve.samples
    chords = curve.chords()
    keep = np.concatenate([[True], chords > 0])
    s = s[keep]
    cum = np.concatenate([[0.0], np.cumsum(chords[chords > 0])])
    if cum[-1] == 0:
        raise CurveError("constant curve")
    targets = np.linspace(0.0, cum[-1], n + 1)
    pts, _ = _point_at_arclength(s, cum, targets[1:-1])
    out = np.vstack([curve.samples[0], pts, curve.samples[-1]])
    return ProfileCurve(out, curve.p, curve.q)


def _equal_chord_newton(evaluate, s, n, tol, max_iter, lo=0.0, hi=1.0):
    """Newton on the interior parameters ``s`` so that consecutive chords are equal.

    ``evaluate(s) -> (points, tangents)`` returns the full ``n + 1`` samples and
    the derivative of each sample with respect to its own parameter.  Steps
    are halved until the parameters stay increasing inside ``(lo, hi)`` and
    the residual does not grow, which matters where the curve nearly stalls.
    """
    def residual(s):
        full, tau = evaluate(s)
        diff = np.diff(full, axis=0)
        c = np.hypot(diff[:, 0], diff[:, 1])
        return diff, c, tau, c[:-1] - c[1:]

    diff, c, tau, resid = residual(s)
    prev = np.inf
    for _ in range(max_iter):
        size = np.max(np.abs(resid))
        # stop at the tolerance or once roundoff stalls the quadratic convergence
        if size <= tol * c.mean() or (size > 0.25 * prev and size <= 1e-9 * c.mean()):
            break
        prev = size
        u = diff / c[:, None]
        # dc_i/ds_i = -u_i . tau_i ; dc_i/ds_{i+1} = u_i . tau_{i+1}  (unknowns are s_1..s_{n-1})
        dc_lo = -np.einsum("ij,ij->i", u, tau[:-1])
        dc_hi = np.einsum("ij,ij->i", u, tau[1:])
        m = n - 1
        ab = np.zeros((3, m))
        # E_k = c_k - c_{k+1}, k = 0..m-1, depends on s_k, s_{k+1}, s_{k+2} (s_0, s_n fixed)
        k = np.arange(m)
        ab[1, :] = dc_hi[k] - dc_lo[k + 1]
        ab[0, 1:] = -dc_hi[k[:-1] + 1]
        ab[2, :-1] = dc_lo[k[1:]]
        step = solve_banded((1, 1), ab, -resid)
        alpha = 1.0
        while alpha > 1e-6:
            trial = s + alpha * step
            if np.all(np.diff(np.concatenate([[lo], trial, [hi]])) > 0):
                out = residual(trial)
                if np.all(np.isfinite(out[3])) and np.max(np.abs(out[3])) <= size:
                    break
            alpha *= 0.5
        else:
            break
        s = trial
        diff, c, tau, resid = out
    return s


def arclength_reparametrize(curve: ProfileCurve, tol: float = 1e-13,
                            max_iter: int = 50) -> ProfileCurve:
    """Constant-speed resampling of the polyline with the same sample count.

    New samples lie on the input polyline and consecutive chords are equal.
    Starting from equal arclength spacing, the arclength positions are
    corrected by Newton's method on ``chord_i - chord_{i+1} = 0``.
    """
    _require_valid(curve)
    n = curve.n
    chords = curve.chords()
    if not np.any(chords > 0):
        raise CurveError("constant curve")
    if n == 1:
        return curve
    if np.ptp(chords) <= 1e-15 * chords.max():
        return curve
    keep = np.concatenate([[True], chords > 0])
    poly = curve.samples[keep]
    cum = np.concatenate([[0.0], np.cumsum(chords[chords > 0])])
    total = cum[-1]
    a, b = curve.samples[0], curve.samples[-1]
    zero = np.zeros((1, 2))

    def evaluate(s):
        s = np.clip(s, 0.0, total)
        pts, tang = _point_at_arclength(poly, cum, s)
        return np.vstack([a, pts, b]), np.vstack([zero, tang, zero])

    s = _equal_chord_newton(evaluate, np.linspace(0.0, total, n + 1)[1:-1], n, tol, max_iter,
                             0.0, total)
    pts, _ = _point_at_arclength(poly, cum, np.clip(s, 0.0, total))
    return ProfileCurve(np.vstack([a, pts, b]), curve.p, curve.q)


def constant_speed_samples(func, n: int, t0=None, tol: float = 1e-13,
                           max_iter: int = 30) -> tuple[ProfileCurve, np.ndarray]:
    """Equal-chord samples of a smooth parametrized curve on ``[0, 1]``.

    ``func(t) -> (points, derivatives)`` with arrays of shape ``(len(t), 2)``.
    Returns the curve and the interior parameter values, which can seed the
    next call for a nearby curve.
    """
    if n < 2:
        raise CurveError("need n >= 2")
    if t0 is None:
        dense = np.linspace(0.0, 1.0, 16 * n + 1)
        pts, _ = func(dense)
        cum = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))])
        if cum[-1] == 0:
            raise CurveError("constant curve")
        t0 = np.interp(np.linspace(0.0, cum[-1], n + 1)[1:-1], cum, dense)
    ends = np.array([0.0, 1.0])
    end_pts, end_der = func(ends)

    def evaluate(s):
        pts, der = func(s)
        return (np.vstack([end_pts[:1], pts, end_pts[1:]]),
                np.vstack([np.zeros((1, 2)), der, np.zeros((1, 2))]))

    t = _equal_chord_newton(evaluate, np.asarray(t0, dtype=float), n, tol, max_iter)
    pts, _ = evaluate(t)
    return ProfileCurve(pts), t


def inversion_map(points, center, radius) -> np.ndarray:
    """Inversion through the circle: ``r -> radius**2 / r`` at fixed polar angle."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    c = np.asarray(tuple(center), dtype=float)
    d = pts - c
    r2 = np.einsum("ij,ij->i", d, d)
    return c + d * (radius ** 2 / r2)[:, None]


def invert_in_circle(curve: ProfileCurve, circle: CircleSpec, i1: int, i2: int) -> ProfileCurve:
    """Reflect the arc strictly between samples ``i1`` and ``i2`` into the circle.

    ``i1`` and ``i2`` must lie on the circle; the samples between them must lie
    outside it and within twice its radius of the center.
    """
    _require_valid(curve)
    if not 0 <= i1 < i2 <= curve.n:
        raise CurveError(f"need 0 <= i1 < i2 <= n, got i1={i1}, i2={i2}")
    c = circle.center.as_array()
    r0 = circle.radius
    dist = np.hypot(*(curve.samples - c).T)
    for i in (i1, i2):
        if abs(dist[i] - r0) > ON_CIRCLE_RTOL * r0:
            raise CurveError(f"sample {i} is not on the circle (distance {dist[i]}, radius {r0})")
    for i in range(i1 + 1, i2):
        if dist[i] < r0 * (1 - ON_CIRCLE_RTOL):
            raise CurveError(f"sample {i} lies inside the circle (distance {dist[i]})")
        if dist[i] > 2 * r0 * (1 + ON_CIRCLE_RTOL):
            raise CurveError(f"sample {i} is farther than 2*radius from the center (distance {dist[i]})")
    out = curve.samples.copy()
    if i2 - i1 > 1:
        out[i1 + 1:i2] = inversion_map(out[i1 + 1:i2], c, r0)
    return ProfileCurve(out, curve.p, curve.q)


def chord_replace(curve: ProfileCurve, i1: int, i2: int) -> ProfileCurve:
    """Replace samples ``i1..i2`` by the uniformly sampled straight chord between them."""
    _require_valid(curve)
    if not 0 <= i1 < i2 <= curve.n:
        raise CurveError(f"need 0 <= i1 < i2 <= n, got i1={i1}, i2={i2}")
    a = curve.samples[i1]
    b = curve.samples[i2]
    if not (a[0] > 0 and b[0] > 0):
        raise CurveError("chord leaves the right half-plane")
    t = np.linspace(0.0, 1.0, i2 - i1 + 1)[1:-1]
    out = curve.samples.copy()
    out[i1 + 1:i2] = a + t[:, None] * (b - a)
    result = ProfileCurve(out, curve.p, curve.q)
    if np.any(result.chords() == 0):
        raise CurveError("chord replacement produced repeated samples")
    return result
