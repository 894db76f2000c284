"""First Dirichlet eigenvalue of a surface of revolution from its profile curve.

The surface eigenvalue equals the minimum over ``w`` vanishing at both ends of

    int (F / |gamma'|) |w'|^2 dt  /  int F |gamma'| w^2 dt

which is discretized with P1 finite elements on the curve's parameter grid.
On each element ``F`` is taken at the chord midpoint and ``|gamma'| = n * chord``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import CurveError
from .geometry import ProfileCurve, _require_valid, curve_length

EIG_RTOL = 1e-12
SPEED_RTOL = 0.01


@dataclass(frozen=True)
class TridiagonalPencil:
    """Symmetric tridiagonal stiffness ``K`` and mass ``M`` on the interior nodes."""

    k_diag: np.ndarray
    k_off: np.ndarray
    m_diag: np.ndarray
    m_off: np.ndarray

    @property
    def size(self) -> int:
        return self.k_diag.shape[0]

    def dense(self) -> tuple[np.ndarray, np.ndarray]:
        K = np.diag(self.k_diag) + np.diag(self.k_off, 1) + np.diag(self.k_off, -1)
        M = np.diag(self.m_diag) + np.diag(self.m_off, 1) + np.diag(self.m_off, -1)
        return K, M

    def count_below(self, lam: float) -> int:
        return int(_kernels.sturm_count(self.k_diag, self.k_off, self.m_diag, self.m_off, float(lam)))

    def apply(self, x, lam=None):
        """``K x`` (or ``(K - lam M) x``)."""
        kd, ko = self.k_diag, self.k_off
        if lam is not None:
            kd = kd - lam * self.m_diag
            ko = ko - lam * self.m_off
        return _tri_matvec(kd, ko, x)

    def apply_mass(self, x):
        return _tri_matvec(self.m_diag, self.m_off, x)


def _tri_matvec(d, o, x):
    y = d * x
    y[:-1] += o * x[1:]
    y[1:] += o * x[:-1]
    return y


@dataclass(frozen=True)
class SpectralResult:
    lambda1: float
    lambda2: float
    phi: np.ndarray
    normalization: float
    mesh_size: int
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def gap(self) -> float:
        return self.lambda2 - self.lambda1


def element_weights(curve: ProfileCurve) -> tuple[np.ndarray, np.ndarray]:
    """Per-element stiffness weight ``F_e / chord_e`` and mass weight ``F_e * chord_e``."""
    chords = curve.chords()
    if np.any(chords == 0):
        i = int(np.flatnonzero(chords == 0)[0])
        raise CurveError(f"zero-length chord between samples {i} and {i + 1}")
    F = curve.F
    Fm = 0.5 * (F[1:] + F[:-1])
    return Fm / chords, Fm * chords


def assemble(curve: ProfileCurve) -> TridiagonalPencil:
    """P1 stiffness and mass matrices of the weighted quotient for ``curve``."""
    if curve.n < 2:
        raise CurveError("need n >= 2 to have an interior node")
    a, m = element_weights(curve)
    return TridiagonalPencil(
        k_diag=a[:-1] + a[1:],
        k_off=-a[1:-1].copy(),
        m_diag=(m[:-1] + m[1:]) / 3.0,
        m_off=m[1:-1] / 6.0,
    )


def _upper_bound(pencil: TridiagonalPencil, count: int) -> float:
    n = pencil.size + 1
    t = np.arange(1, n) / n
    x = np.sin(np.pi * t)
    hi = float(x @ pencil.apply(x) / (x @ pencil.apply_mass(x)))
    while pencil.count_below(hi) < count:
        hi *= 2.0
    return hi


def eigenvalues(pencil: TridiagonalPencil, rtol: float = EIG_RTOL) -> tuple[float, float]:
    """Two smallest generalized eigenvalues by Sturm-sequence bisection."""
    args = (pencil.k_diag, pencil.k_off, pencil.m_diag, pencil.m_off)
    if pencil.size == 1:
        return float(pencil.k_diag[0] / pencil.m_diag[0]), np.inf
    hi = _upper_bound(pencil, 2)
    lam1 = _kernels.bisect_eigenvalue(*args, 0, 0.0, hi, rtol)
    lam2 = _kernels.bisect_eigenvalue(*args, 1, lam1, hi, rtol)
    return float(lam1), float(lam2)


def inverse_iteration(pencil: TridiagonalPencil, shift: float, x0=None, iters: int = 3) -> np.ndarray:
    """Eigenvector nearest ``shift`` (shift must lie below the target eigenvalue)."""
    kd = pencil.k_diag - shift * pencil.m_diag
    ko = pencil.k_off - shift * pencil.m_off
    x = np.ones(pencil.size) if x0 is None else np.array(x0, dtype=float)
    for _ in range(iters):
        x = _kernels.tridiag_solve(ko, kd, ko, pencil.apply_mass(x))
        x /= np.sqrt(x @ pencil.apply_mass(x))
    return x


def _finish(pencil, x):
    x = x / np.sqrt(x @ pencil.apply_mass(x))
    if x.sum() < 0:
        x = -x
    return np.concatenate([[0.0], x, [0.0]])


def lambda1(curve: ProfileCurve, rtol: float = EIG_RTOL) -> SpectralResult:
    """Smallest two eigenvalues and the mass-normalized positive first eigenfunction."""
    _require_valid(curve)
    pencil = assemble(curve)
    lam1, lam2 = eigenvalues(pencil, rtol)
    if pencil.size == 1:
        x = np.ones(1)
    else:
        shift = lam1 - 1e-6 * (lam2 - lam1)
        x = inverse_iteration(pencil, shift, np.sin(np.pi * curve.t[1:-1]))
    phi = _finish(pencil, x)
    inner = phi[1:-1]
    norm = float(inner @ pencil.apply_mass(inner))
    return SpectralResult(lam1, lam2, phi, norm, curve.n)


def richardson(coarse: float, fine: float, order: int = 2) -> float:
    """One extrapolation step from meshes ``n`` and ``2n`` with error ``O(h**order)``."""
    r = 2.0 ** order
    return (r * fine - coarse) / (r - 1.0)


def refine_eigenpair(pencil: TridiagonalPencil, guess: float, x0: np.ndarray,
                     margin: float = 1e-3, iters: int = 2) -> tuple[float, np.ndarray]:
    """Fast ground-state update from a nearby eigenpair (used for shape gradients).

    Two inverse iterations shifted slightly below ``guess`` followed by the
    Rayleigh quotient; no Sturm bracketing, so ``x0`` must already be close.
    """
    x = inverse_iteration(pencil, guess * (1.0 - margin), x0, iters)
    lam = float(x @ pencil.apply(x) / (x @ pencil.apply_mass(x)))
    return lam, x


def rayleigh_quotient(curve: ProfileCurve, w) -> float:
    """Discrete quotient of ``w`` (``n + 1`` samples, zero at both ends)."""
    w = np.asarray(w, dtype=float)
    if w.shape != (curve.n + 1,):
        raise CurveError(f"w must have {curve.n + 1} samples")
    if w[0] != 0 or w[-1] != 0:
        raise CurveError("w must vanish at both endpoints")
    if not np.any(w):
        raise CurveError("w is identically zero")
    a, m = element_weights(curve)
    dw = np.diff(w)
    num = np.sum(a * dw ** 2)
    den = np.sum(m * (w[:-1] ** 2 + w[:-1] * w[1:] + w[1:] ** 2)) / 3.0
    return float(num / den)


def euler_lagrange_residual(curve: ProfileCurve, spec: SpectralResult,
                            speed_rtol: float = SPEED_RTOL) -> tuple[np.ndarray, np.ndarray]:
    """Weak residuals of the stationarity equations against interior hat functions.

    For a constant-speed curve of length ``L`` with eigenpair ``(Lam, phi)``::

        res_F[i] = int (phi'^2 + Lam L^2 phi^2) F F' psi_i' + int (Lam L^4 phi^2 - L^2 phi'^2) psi_i
        res_G[i] = int (phi'^2 + Lam L^2 phi^2) F G' psi_i'

    Elementwise the curve quantities are constant, ``phi^2`` is integrated
    exactly, and the undifferentiated hat function is replaced by its element
    mean, which makes ``res`` the exact gradient of the discrete eigenvalue
    (scaled by ``-L^3``).
    """
    if spec.mesh_size != curve.n:
        raise CurveError("spectral result was computed on a different mesh")
    chords = curve.chords()
    spread = chords.max() / chords.min() - 1.0
    if spread > speed_rtol:
        raise CurveError(f"curve is not constant-speed (chord spread {spread:.3g})")
    n = curve.n
    h = 1.0 / n
    L = curve_length(curve)
    lam = spec.lambda1
    phi = spec.phi
    F = curve.F
    Fm = 0.5 * (F[1:] + F[:-1])
    dF = n * np.diff(F)
    dG = n * np.diff(curve.G)
    dphi = n * np.diff(phi)
    phi2 = (phi[:-1] ** 2 + phi[:-1] * phi[1:] + phi[1:] ** 2) / 3.0
    energy = dphi ** 2 + lam * L ** 2 * phi2
    flux_F = energy * Fm * dF
    flux_G = energy * Fm * dG
    source = lam * L ** 4 * phi2 - L ** 2 * dphi ** 2
    res_F = flux_F[:-1] - flux_F[1:] + 0.5 * h * (source[:-1] + source[1:])
    res_G = flux_G[:-1] - flux_G[1:]
    return res_F, res_G
