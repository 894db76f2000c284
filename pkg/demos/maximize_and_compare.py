"""Direct maximization checked against shooting.

The optimizer knows nothing about the critical equations: it pushes a
constant-speed polyline uphill in lambda1.  Its answer should agree with the
critical curve found by shooting, and the weak Euler-Lagrange residual of the
optimized polyline should shrink as the mesh is refined.
"""
import time

from revlambda import OptimizerConfig, optimize, solve_boundary
from revlambda.maximizer import hausdorff

p, q = (1.0, 0.0), (1.0, 0.1)
shot = solve_boundary(p, q)
print(f"shooting: lambda = {shot.lam:.9f}")

for init in ("chord", "outward", "inward"):
    start = time.perf_counter()
    rep = optimize(p, q, 128, OptimizerConfig(init=init, match_shooting=False))
    print(f"  n=128 from {init:8s}: lambda1 = {rep.lambda1:.9f}  iterations {rep.iterations:3d}"
          f"  ({time.perf_counter() - start:.1f} s)")

print("\nmesh refinement from the chord:")
prev = None
for n in (256, 512, 1024):
    rep = optimize(p, q, n, OptimizerConfig(match_shooting=False))
    dist = hausdorff(rep.curve, shot.trajectory.sample(n))
    ratio = "" if prev is None else f"  residual ratio {prev / rep.el_residual:.2f}"
    print(f"  n={n:5d}: lambda1 = {rep.lambda1:.9f}  rel gap {rep.lambda1 / shot.lam - 1:.2e}"
          f"  EL residual {rep.el_residual:.3e}  Hausdorff {dist:.1e}{ratio}")
    prev = rep.el_residual

rep = optimize((0.5, 0.0), (1.0, 0.0), 128)
print(f"\ncoplanar ends (0.5,0)-(1,0): lambda1 = {rep.lambda1:.6f}, baseline {rep.Lambda_baseline:.6f}")
