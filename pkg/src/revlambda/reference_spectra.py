"""Bessel functions of order zero and the first Dirichlet eigenvalues of flat discs and annuli.

``J0`` and ``Y0`` are evaluated from the power series for ``x <= 8``, Miller's
backward recurrence with the Neumann series for ``Y0`` on ``(8, 25]``, and the
Hankel asymptotic expansion beyond.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BracketError, DomainError

EULER_GAMMA = 0.57721566490153286061
SERIES_MAX = 8.0
ASYMPTOTIC_MIN = 25.0


def _series(x):
    """Power series for J0 and the non-logarithmic part of Y0."""
    z = 0.25 * x * x
    term = 1.0
    j = 1.0
    s = 0.0
    harmonic = 0.0
    k = 0
    while True:
        k += 1
        term *= -z / (k * k)
        harmonic += 1.0 / k
        j += term
        s -= term * harmonic
        if abs(term) * (harmonic + 1) < 1e-17 * max(abs(j), 1e-300) and k > 2:
            break
    return j, s


def _miller(x):
    """J0 by backward recurrence, normalized with 1 = J0 + 2 sum J_2k; returns (J0, sum (-1)^k J_2k / k)."""
    start = 2 * (int(x + 15 + 2.5 * math.sqrt(x)) // 2) + 20
    jp1, jk = 0.0, 1e-300
    norm = 0.0
    neumann = 0.0
    j0 = 0.0
    for k in range(start, 0, -1):
        jm1 = (2 * k / x) * jk - jp1
        jp1, jk = jk, jm1
        # jk now holds J_{k-1}
        m = k - 1
        if m > 0 and m % 2 == 0:
            norm += 2 * jk
            neumann += (-1) ** (m // 2) * jk / (m // 2)
        if m == 0:
            j0 = jk
        if abs(jk) > 1e250:
            jp1 *= 1e-250
            jk *= 1e-250
            norm *= 1e-250
            neumann *= 1e-250
    norm += j0
    return j0 / norm, neumann / norm


def _hankel(x):
    chi = x - 0.25 * math.pi
    p, q = 1.0, 0.0
    # a holds a_k(0) / x**k; P = sum (-1)^m a_2m, Q = sum (-1)^m a_2m+1
    a = 1.0
    k = 0
    last = math.inf
    while True:
        k += 1
        a *= -((2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(a) > last or abs(a) < 1e-18:
            break
        last = abs(a)
        if k % 2:
            q += a if (k // 2) % 2 == 0 else -a
        else:
            p += a if (k // 2) % 2 == 0 else -a
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p * math.cos(chi) - q * math.sin(chi)), amp * (p * math.sin(chi) + q * math.cos(chi))


def _j0_scalar(x: float) -> float:
    x = abs(x)
    if x <= SERIES_MAX:
        return _series(x)[0]
    if x <= ASYMPTOTIC_MIN:
        return _miller(x)[0]
    return _hankel(x)[0]


def _y0_scalar(x: float) -> float:
    if not x > 0:
        raise DomainError(f"Y0 is defined for x > 0, got {x}")
    if x <= SERIES_MAX:
        j, s = _series(x)
        return (2 / math.pi) * ((math.log(x / 2) + EULER_GAMMA) * j + s)
    if x <= ASYMPTOTIC_MIN:
        j, neumann = _miller(x)
        return (2 / math.pi) * ((math.log(x / 2) + EULER_GAMMA) * j - 2 * neumann)
    return _hankel(x)[1]


def bessel_j0(x):
    """Bessel function of the first kind of order zero."""
    if np.ndim(x) == 0:
        return _j0_scalar(float(x))
    return np.vectorize(_j0_scalar, otypes=[float])(x)


def bessel_y0(x):
    """Bessel function of the second kind of order zero (``x > 0``)."""
    if np.ndim(x) == 0:
        return _y0_scalar(float(x))
    return np.vectorize(_y0_scalar, otypes=[float])(x)


def bisect(f, lo, hi, rtol=1e-15, atol=0.0, max_iter=200):
    """Plain bisection on a sign change of ``f`` over ``[lo, hi]``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= atol + rtol * abs(mid) or mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=None)
def j0_first_zero() -> float:
    return bisect(_j0_scalar, 2.0, 3.0, rtol=1e-16)


def disc_lambda1(R: float) -> float:
    """First Dirichlet eigenvalue ``(j_{0,1} / R)**2`` of the flat disc of radius ``R``."""
    if not R > 0:
        raise DomainError(f"disc radius must be positive, got {R}")
    return (j0_first_zero() / R) ** 2


@dataclass(frozen=True)
class AnnulusSpec:
    inner: float
    outer: float

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise DomainError(f"need 0 < inner < outer, got ({self.inner}, {self.outer})")


def cross_product(k, a, b):
    """``J0(k a) Y0(k b) - J0(k b) Y0(k a)``, vanishing at the radial Dirichlet frequencies."""
    return _j0_scalar(k * a) * _y0_scalar(k * b) - _j0_scalar(k * b) * _y0_scalar(k * a)


def _scan_first_root(f, start, step, stop, what):
    x0, f0 = start, f(start)
    x = x0
    while x < stop:
        x1 = x0 + step
        f1 = f(x1)
        if f1 == 0 or (f0 > 0) != (f1 > 0):
            return x0, x1
        x0, f0 = x1, f1
        x = x1
    raise BracketError(f"{what}: no sign change found up to {stop} (step {step})")


def annulus_root(a: float, b: float, rtol: float = 1e-13) -> float:
    """Smallest positive root ``k`` of the Bessel cross-product for the annulus ``a < r < b``."""
    step = math.pi / (4 * (b - a))
    f = lambda k: cross_product(k, a, b)
    lo, hi = _scan_first_root(f, 0.5 * step, step, 40 * math.pi / (b - a),
                              f"annulus ({a}, {b})")
    return bisect(f, lo, hi, rtol=rtol)


def annulus_lambda1(spec: AnnulusSpec | tuple) -> float:
    """First Dirichlet eigenvalue of the flat concentric annulus."""
    if not isinstance(spec, AnnulusSpec):
        spec = AnnulusSpec(*spec)
    return annulus_root(spec.inner, spec.outer) ** 2


def radial_node(k: float, r0: float, rtol: float = 1e-14) -> float:
    """First radius ``r > r0`` where the radial solution of ``u'' + u'/r + k^2 u = 0`` with ``u(r0) = 0`` vanishes."""
    if not (k > 0 and r0 > 0):
        raise DomainError("need k > 0 and r0 > 0")
    j, y = _j0_scalar(k * r0), _y0_scalar(k * r0)
    f = lambda r: _j0_scalar(k * r) * y - _y0_scalar(k * r) * j
    step = math.pi / (4 * k)
    lo, hi = _scan_first_root(f, r0 + 0.5 * step, step, r0 + 40 * math.pi / k,
                              f"radial node from r0={r0}")
    return bisect(f, lo, hi, rtol=rtol)
