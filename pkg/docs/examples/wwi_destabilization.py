"""How hard do you have to push the 1913 great-power network to tip it into war?

Loads the bundled five-power bias matrix, computes the smallest push along
its leading mode that crosses the threshold, then holds pushes a bit above
and well below that budget and looks at where the system settles.

    python3 docs/examples/wwi_destabilization.py
"""

import numpy as np

from conflictnet import ModelParams, SimConfig
from conflictnet.bifurcation import alpha_peace_to_war, critical_lambda_tilde
from conflictnet.core import PerturbationImpulse
from conflictnet.dynamics import classify_state, find_equilibrium, integrate
from conflictnet.ingest import load_wwi_1913
from conflictnet.perturbation import edge_sensitivity_scan, min_energy_perturbation
from conflictnet.spectral import eigendecompose

net = load_wwi_1913()
x_d = np.asarray(net.weights)
alpha, beta, L = 0.03, 1.0, 20.0

lam = eigendecompose(x_d).leading_value
print(f"leading bias eigenvalue {lam:.3f}; threshold {critical_lambda_tilde(alpha, beta):.3f}")
print(f"alpha={alpha} sits below the peace-to-war point {alpha_peace_to_war(beta, lam):.4f}")

direction, sigma_min = min_energy_perturbation(x_d, alpha, beta)
print(f"cheapest destabilizing push: sigma = {sigma_min:.3f}")

params = ModelParams.from_alpha(alpha, beta=beta, L=L)
cfg = SimConfig(dt=0.01, t_end=2000.0, record_every=1000)
peace = find_equilibrium(x_d, x_d, params, cfg)

for factor in (1.1, 0.5):
    imp = PerturbationImpulse(direction, factor * sigma_min, 0.0, 100.0 / beta)
    final = integrate(peace.state, x_d, params, [imp], cfg).final
    s = eigendecompose(final).leading_vector
    side = [lab for lab, v in zip(net.labels, s) if v > 0]
    other = [lab for lab in net.labels if lab not in side]
    print(f"{factor:.1f} x sigma_min -> {classify_state(final, x_d).value:5s}  {side} vs {other}")

# which single ties matter most for the leading eigenvalue?
d_lam, _ = edge_sensitivity_scan(x_d, -1.0)
iu = np.triu_indices(len(net.labels), 1)
ranked = sorted(zip(np.abs(d_lam[iu]), iu[0], iu[1]), reverse=True)
print("most sensitive dyads:", [f"{net.labels[i]}-{net.labels[j]}" for _, i, j in ranked[:3]])
