"""The eigenvalue solver against closed-form answers.

A cylinder separates into a one-dimensional problem with eigenvalue pi^2/h^2,
and a flat radial profile sweeps out an annulus whose eigenvalue is a Bessel
cross-product root.  Shrinking the inner radius of the annulus approaches the
disc from above, slowly, like 1/|log d|.
"""
import math

from revlambda import annulus_lambda1, disc_lambda1, lambda1, richardson, segment
from revlambda.maximizer import disc_type_bound, log_extrapolate

print("cylinders (R, h): FEM vs pi^2/h^2")
for R, h in [(1.0, 1.0), (2.0, 0.5), (0.5, 3.0)]:
    lam = lambda1(segment((R, 0), (R, h), 2048)).lambda1
    print(f"  ({R}, {h})  {lam:.10f}  {(math.pi / h) ** 2:.10f}")

print("\nflat radial profiles (a, b): Richardson FEM vs Bessel root")
for a, b in [(0.5, 1.0), (1.0, 2.0), (0.1, 1.0)]:
    coarse = lambda1(segment((a, 0), (b, 0), 2048)).lambda1
    fine = lambda1(segment((a, 0), (b, 0), 4096)).lambda1
    print(f"  ({a}, {b})  {richardson(coarse, fine):.12f}  {annulus_lambda1((a, b)):.12f}")

d = [0.1, 0.01, 0.001]
lams = disc_type_bound(1.0, d)
print("\ntruncated discs of radius 1")
for di, lam in zip(d, lams):
    print(f"  d = {di:<6} lambda1 = {lam:.8f}")
print(f"  extrapolated in 1/|log d|: {log_extrapolate(d, lams):.6f}")
print(f"  disc value (j0/R)^2:       {disc_lambda1(1.0):.6f}")
