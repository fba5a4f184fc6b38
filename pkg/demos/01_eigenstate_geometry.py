"""Fisher-Rao metric of oscillator eigenstates, three ways.

For the n-th eigenstate the reduced (dimensionless) metric has the closed
form diag(2n+1, 2(n^2+n+1)).  This script recomputes it by adaptive
quadrature and, for real coefficient vectors, by the series sums, and
prints the agreement.
"""

import numpy as np

from hermgauss import (
    ModelPoint,
    StateSpec,
    metric_closed_form,
    metric_quadrature,
    metric_series_real,
)

point = ModelPoint(mu=0.0, sigma=1.0)

print(f"{'n':>3} {'closed form':>24} {'quadrature err':>15} {'series err':>12}")
for n in range(8):
    spec = StateSpec.eigenstate(n)
    closed = metric_closed_form(spec, point)
    quad = metric_quadrature(spec, point)
    series = metric_series_real({n: 1.0}, point)
    ref = np.asarray(closed.reduced)
    err_q = np.max(np.abs(np.asarray(quad.reduced) - ref))
    err_s = np.max(np.abs(np.asarray(series.reduced) - ref))
    label = f"diag({closed.reduced[0]:.0f}, {closed.reduced[2]:.0f})"
    print(f"{n:>3} {label:>24} {err_q:>15.2e} {err_s:>12.2e}")

print()
print("The reduced metric never depends on the parameter point; the full")
print("metric is just reduced / sigma^2:")
for sigma in (0.5, 1.0, 2.0):
    m = metric_quadrature(StateSpec.eigenstate(2), ModelPoint(1.3, sigma))
    print(f"  sigma={sigma:<4} I_mumu={m.i_mumu:<8.4f} "
          f"I_sigmasigma={m.i_sigmasigma:.4f}")
