"""Surgery moves on a profile with an outward bump.

A straight profile over F = 1 gets a bump of radius 0.1 to 0.15 around
(1, 0.5).  Reflecting the bump into the circle of radius 0.1 shortens the
curve and raises lambda1.  Reparametrizing to constant speed leaves the
underlying smooth curve, and so its eigenvalue, unchanged.
"""
import numpy as np

from revlambda import ProfileCurve, lambda1
from revlambda.maximizer import (Inversion, Reparametrize, find_bulges,
                                 improvement_move_audit)

lower = np.column_stack([np.ones(101), np.linspace(0.0, 0.4, 101)])
phi = np.linspace(-np.pi / 2, np.pi / 2, 65)
r = 0.1 + 0.05 * np.cos(phi)
bump = np.column_stack([1.0 + r * np.cos(phi), 0.5 + r * np.sin(phi)])
upper = np.column_stack([np.ones(101), np.linspace(0.6, 1.0, 101)])
pts = np.vstack([lower, bump[1:], upper[1:]])
pts[100], pts[164] = (1.0, 0.4), (1.0, 0.6)
curve = ProfileCurve(pts)
print(f"bumped profile, n = {curve.n}, lambda1 = {lambda1(curve).lambda1:.8f}")

i1, i2, circle = find_bulges(curve)[0]
print(f"bulge between samples {i1} and {i2}, circle center {tuple(circle.center)}, r = {circle.radius:.3f}")
before, after = improvement_move_audit(curve, Inversion(circle, i1, i2))
print(f"inversion: {before:.8f} -> {after:.8f}")

before, after = improvement_move_audit(curve, Reparametrize())
print(f"reparametrization, mesh-converged: {before:.10f} -> {after:.10f}")
