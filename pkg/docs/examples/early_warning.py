"""Recovery slows down as the network nears the tipping point.

Holds pushes of decreasing distance to the threshold on a peaceful state and
fits how the recovery rate scales with that distance. Near a saddle-node the
exponent should be close to one half.

    python3 docs/examples/early_warning.py
"""

import numpy as np

from conflictnet import ModelParams, SimConfig
from conflictnet.bifurcation import alpha_peace_to_war, critical_lambda_tilde
from conflictnet.csd import csd_experiment, fit_power_law
from conflictnet.sbm import gaussian_bias
from conflictnet.spectral import eigendecompose

x_d = gaussian_bias(30, noise_scale=0.8, seed=0)
lam = eigendecompose(x_d).leading_value
alpha = 0.8 * alpha_peace_to_war(1.0, lam)
params = ModelParams.from_alpha(alpha, beta=1.0, L=8.0)
thr = critical_lambda_tilde(alpha, 1.0)

distances = list(np.geomspace(0.3, 6.0, 8)) + [-1.0]
points = csd_experiment(x_d, params, [thr - lam - d for d in distances], SimConfig(dt=0.02), jobs=4)
for p in points:
    r = f"{p.r:.4f}" if p.converged else "  --  "
    print(f"d={p.d:7.3f}  r={r}  {p.classification.value}")
slope, _ = fit_power_law(points)
print(f"fitted exponent {slope:.3f}")
