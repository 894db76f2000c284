"""Compiled inner loops for the tridiagonal pencil."""
import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def sturm_count(kd, ko, md, mo, lam):
    """Number of generalized eigenvalues of (K, M) strictly below ``lam``.

    Counts negative pivots of the LDL^T factorization of ``K - lam M``.
    """
    n = kd.shape[0]
    count = 0
    d = kd[0] - lam * md[0]
    tiny = 1e-300
    if d < 0:
        count += 1
    for i in range(1, n):
        if d == 0.0:
            d = -tiny
        e = ko[i - 1] - lam * mo[i - 1]
        d = (kd[i] - lam * md[i]) - e * e / d
        if d < 0:
            count += 1
    return count


@njit(cache=True, nogil=True)
def bisect_eigenvalue(kd, ko, md, mo, index, lo, hi, rtol):
    """Bisection for the ``index``-th (0-based) eigenvalue inside ``[lo, hi]``."""
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * mid or mid == lo or mid == hi:
            break
        if sturm_count(kd, ko, md, mo, mid) > index:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def tridiag_solve(sub, diag, sup, rhs):
    """Thomas algorithm with partial pivoting disabled; ``sub[i]`` couples rows i+1 and i."""
    n = diag.shape[0]
    c = np.empty(n)
    x = np.empty(n)
    b0 = diag[0]
    c[0] = sup[0] / b0 if n > 1 else 0.0
    x[0] = rhs[0] / b0
    for i in range(1, n):
        denom = diag[i] - sub[i - 1] * c[i - 1]
        if denom == 0.0:
            denom = 1e-300
        if i < n - 1:
            c[i] = sup[i] / denom
        x[i] = (rhs[i] - sub[i - 1] * x[i - 1]) / denom
    for i in range(n - 2, -1, -1):
        x[i] -= c[i] * x[i + 1]
    return x


@njit(cache=True, nogil=True)
def legendre_series(c, x):
    """Value and derivative of ``sum_k c[k] P_k(x)`` by the three-term recurrence."""
    n = x.shape[0]
    val = np.zeros(n)
    der = np.zeros(n)
    m = c.shape[0]
    for i in range(n):
        xi = x[i]
        p0, p1 = 1.0, xi
        d0, d1 = 0.0, 1.0
        v = c[0] * p0
        d = 0.0
        if m > 1:
            v += c[1] * p1
            d += c[1] * d1
        for k in range(2, m):
            p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k
            d2 = d0 + (2 * k - 1) * p1
            v += c[k] * p2
            d += c[k] * d2
            p0, p1 = p1, p2
            d0, d1 = d1, d2
        val[i] = v
        der[i] = d
    return val, der
