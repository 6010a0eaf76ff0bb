"""Demo 3: Hardy-Poincare best constants, subcritical and critical.

Computes the best constant of int r^(alpha-2) u^2 <= C int r^alpha (u')^2
over functions vanishing at the degenerate end (always below 4/(1-alpha)^2,
approaching it under refinement), then the critical truncated constants on
(delta, 1) whose exact values 4/pi^2 ln^2(delta) and 1/pi^2 ln^2(delta)
blow up logarithmically, and fits the blow-up exponent.
"""

import math

from degenwave import (
    best_subcritical_constant,
    blowup_rate_fit,
    build_graded_mesh,
    critical_truncated_constant,
    subcritical_bound,
)

print("== subcritical constants: approach 4/(1-alpha)^2 from below ==")
for alpha in (0.1, 0.3, 0.5, 0.7, 0.9):
    rep = best_subcritical_constant(alpha)
    print(f"  alpha = {alpha:.1f}: C = {rep.numerical_best_constant:10.4f}   "
          f"bound = {subcritical_bound(alpha):10.4f}   ratio = {rep.ratio:.4f}")

print("\n== refinement series at alpha = 0.5 (monotone, never above 16) ==")
for n in (512, 2048, 8192):
    rep = best_subcritical_constant(0.5, mesh=build_graded_mesh(n, 3.0))
    print(f"  N = {n:5d}: C = {rep.numerical_best_constant:.8f}")

print("\n== critical truncated constants (alpha = 1 regime) ==")
for delta in (math.exp(-math.pi), 0.01):
    for bc in ("mixed", "dirichlet"):
        rep = critical_truncated_constant(delta, bc=bc, N=4096)
        print(f"  delta = {delta:.5f} {bc:9s}: C = {rep.numerical_best_constant:10.6f}   "
              f"exact = {rep.reference_constant:10.6f}")

print("\n== direct vs log-substitution route agree ==")
for delta in (1e-2, 1e-4):
    d = critical_truncated_constant(delta, bc="mixed", method="direct", N=4096)
    l = critical_truncated_constant(delta, bc="mixed", method="log-transform", N=4096)
    print(f"  delta = {delta:.0e}: direct {d.numerical_best_constant:.6f}   "
          f"log-transform {l.numerical_best_constant:.6f}")

print("\n== logarithmic blow-up rate ==")
fit = blowup_rate_fit([1e-1, 1e-2, 1e-3, 1e-4], bc="mixed", method="direct", N=8192)
print(f"  slope of ln C against ln|ln delta|: {fit.slope:.5f}  (r^2 = {fit.r_squared:.8f})")
for delta, c in zip(fit.deltas, fit.constants):
    print(f"    delta = {delta:.0e}: C = {c:.5f}")
