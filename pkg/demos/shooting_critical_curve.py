"""Critical profiles from the shooting method.

Starting at p with unit tangent angle theta0, the critical system is
integrated until the eigenfunction v first vanishes; the end of the profile is
wherever that happens.  Newton's method on (theta0, lambda) then steers the
end onto a target q.  For q close to p every starting angle lands on the same
solution.
"""
import math

import numpy as np

from revlambda import (endpoint_jacobian, guard_report, integrate_critical, lambda1,
                       solve_boundary, uniqueness_scan)

p, q = (1.0, 0.0), (1.0, 0.1)

J = endpoint_jacobian(0.0, 0.0, p)
print("endpoint map near the origin, divided by pi:")
print(np.array2string(J / math.pi, precision=6))

rec = solve_boundary(p, q)
traj = rec.trajectory
print(f"\ncritical curve to q = {q}: theta0 = {rec.theta0:.9f}, lambda = {rec.lam:.9f}")
print(f"  length {traj.L:.9f}, endpoint ({rec.endpoint.x:.12f}, {rec.endpoint.y:.12f})")
print(f"  Newton iterations: {rec.iterations}")

g = guard_report(traj)
print(f"  flux max {g['flux_max']:.6f} <= p1 = {g['p1']}")
print(f"  length {g['L']:.6f} <= bound {g['length_bound']:.6f}")

curve = traj.sample(4096)
print(f"  FEM eigenvalue of the sampled profile: {lambda1(curve).lambda1:.9f}")

print("\nscan from 8 starting angles:")
for deg in (0, 45, 90, 180):
    target = (1.0 + 0.05 * math.cos(math.radians(deg)), 0.05 * math.sin(math.radians(deg)))
    classes = uniqueness_scan(p, target)
    sols = ", ".join(f"({c.theta0:.6f}, {c.lam:.4f})" for c in classes)
    print(f"  direction {deg:3d} deg: {len(classes)} class(es) {sols}")

print("\nreference: the straight axial trajectory (theta0 = 0) at lambda = 100")
ax = integrate_critical(0.0, 100.0, p)
print(f"  ends at F = {ax.endpoint[0]:.12f}")
