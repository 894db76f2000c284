"""Adaptive Dormand-Prince 5(4) stepping that stops at the first downward zero of ``y[0]``.

Small systems only: states are Python lists and the right-hand side is a
plain function, which is faster than numpy for five components.
"""
from __future__ import annotations

import math

from .errors import NoZeroBeforeBoundError

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def dopri_step(rhs, t, y, f, h):
    """One step of size ``h``; returns ``(y_new, f_new, error_vector)``."""
    k1 = f
    k2 = rhs(t + C2 * h, [a + h * A21 * b for a, b in zip(y, k1)])
    k3 = rhs(t + C3 * h, [a + h * (A31 * b + A32 * c) for a, b, c in zip(y, k1, k2)])
    k4 = rhs(t + C4 * h, [a + h * (A41 * b + A42 * c + A43 * d) for a, b, c, d in zip(y, k1, k2, k3)])
    k5 = rhs(t + C5 * h, [a + h * (A51 * b + A52 * c + A53 * d + A54 * e)
                          for a, b, c, d, e in zip(y, k1, k2, k3, k4)])
    k6 = rhs(t + h, [a + h * (A61 * b + A62 * c + A63 * d + A64 * e + A65 * g)
                     for a, b, c, d, e, g in zip(y, k1, k2, k3, k4, k5)])
    y1 = [a + h * (B1 * b + B3 * d + B4 * e + B5 * g + B6 * r)
          for a, b, d, e, g, r in zip(y, k1, k3, k4, k5, k6)]
    k7 = rhs(t + h, y1)
    err = [h * (E1 * b + E3 * d + E4 * e + E5 * g + E6 * r + E7 * s)
           for b, d, e, g, r, s in zip(k1, k3, k4, k5, k6, k7)]
    return y1, k7, err


def _hermite_root(h, v0, d0, v1, d1):
    """Root in ``(0, h]`` of the cubic Hermite interpolant of ``v`` with slopes ``d``."""
    def p(s):
        u = s / h
        h00 = (1 + 2 * u) * (1 - u) ** 2
        h10 = u * (1 - u) ** 2
        h01 = u * u * (3 - 2 * u)
        h11 = u * u * (u - 1)
        return h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1
    lo, hi = 0.0, h
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if p(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class Solution:
    __slots__ = ("t", "y", "f", "t_end", "y_end", "f_end", "nsteps")

    def __init__(self):
        self.t, self.y, self.f = [], [], []
        self.nsteps = 0


def integrate_to_zero(rhs, y0, tol, h0, horizon, radial, check, event_tol=1e-12,
                      max_steps=1_000_000):
    """Integrate from ``t = 0`` until ``y[0]`` first returns to zero from above.

    ``horizon(a, b)`` gives the largest admissible time from the running
    extremes of ``radial(y)``; ``check(y)`` raises on guard violations of an
    accepted state.  The zero is located on the cubic Hermite interpolant and
    then polished with exact steps from the last grid point.
    """
    sol = Solution()
    t = 0.0
    y = list(map(float, y0))
    f = rhs(t, y)
    sol.t.append(t); sol.y.append(y); sol.f.append(f)
    r = radial(y)
    a_run = b_run = r
    v_scale = 0.0
    h = h0
    for _ in range(max_steps):
        cap = horizon(a_run, b_run)
        if t >= cap * (1 - 1e-14):
            raise NoZeroBeforeBoundError(
                f"no zero of v before the length bound {cap:.6g} (running F in [{a_run:.6g}, {b_run:.6g}])")
        h = min(h, cap - t)
        y1, f1, err = dopri_step(rhs, t, y, f, h)
        en = math.sqrt(sum((e / (tol + tol * max(abs(a), abs(b)))) ** 2
                           for e, a, b in zip(err, y, y1)) / len(y))
        if en > 1.0:
            h *= max(0.2, 0.9 * en ** -0.2)
            continue
        check(y1)
        sol.nsteps += 1
        if y1[0] <= 0 < y[0]:
            tau = _hermite_root(h, y[0], f[0], y1[0], f1[0])
            tau, ye, fe = _polish(rhs, t, y, f, tau, max(v_scale, abs(y[0])) * event_tol)
            sol.t_end = t + tau
            sol.y_end, sol.f_end = ye, fe
            sol.t.append(sol.t_end); sol.y.append(ye); sol.f.append(fe)
            return sol
        t += h
        y, f = y1, f1
        sol.t.append(t); sol.y.append(y); sol.f.append(f)
        v_scale = max(v_scale, abs(y[0]))
        r = radial(y)
        a_run, b_run = min(a_run, r), max(b_run, r)
        h *= min(5.0, 0.9 * en ** -0.2) if en > 0 else 5.0
    raise NoZeroBeforeBoundError(f"step budget of {max_steps} exhausted")


def _polish(rhs, t, y, f, tau, vtol):
    """Newton on the step length so that the exact step lands on ``y[0] = 0``."""
    ye, fe, _ = dopri_step(rhs, t, y, f, tau)
    for _ in range(20):
        if abs(ye[0]) <= vtol or fe[0] == 0:
            break
        tau_new = tau - ye[0] / fe[0]
        if tau_new <= 0:
            tau_new = 0.5 * tau
        if abs(tau_new - tau) <= 1e-16 * (t + tau):
            tau = tau_new
            ye, fe, _ = dopri_step(rhs, t, y, f, tau)
            break
        tau = tau_new
        ye, fe, _ = dopri_step(rhs, t, y, f, tau)
    return tau, ye, fe
