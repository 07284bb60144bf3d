"""Peace-to-war and back: the jump thresholds differ.

Sweeps the balance sensitivity up and then down on a noisy two-bloc network
and compares the jumps with the closed-form thresholds.

    python3 docs/examples/hysteresis_sweep.py
"""

import numpy as np

from conflictnet import ModelParams, SimConfig
from conflictnet.bifurcation import alpha_peace_to_war, alpha_war_to_peace, sweep_alpha
from conflictnet.sbm import gaussian_bias
from conflictnet.spectral import eigendecompose

N, L = 30, 8.0
x_d = gaussian_bias(N, noise_scale=0.8, contrast_strength=0.4, seed=3)
lam = eigendecompose(x_d).leading_value
a_pw = alpha_peace_to_war(1.0, lam)
a_wp = alpha_war_to_peace(1.0, L, N, lam)

grid = np.round(np.linspace(0.5 * a_wp, 1.5 * a_pw, 40), 8)
base = ModelParams.from_alpha(grid[0], beta=1.0, L=L)
cfg = SimConfig(dt=0.05, t_end=2000.0)
up = sweep_alpha(x_d, base, grid, cfg, "up")
down = sweep_alpha(x_d, base, grid[::-1], cfg, "down")

print(f"{'':14s}{'predicted':>10s}{'observed':>10s}")
print(f"{'peace -> war':14s}{a_pw:10.4f}{up.jump_alpha:10.4f}")
print(f"{'war -> peace':14s}{a_wp:10.4f}{down.jump_alpha:10.4f}")
for a, rep in up:
    if a >= up.jump_alpha:
        print(f"first war state at alpha={a:.4f}: tie spread {rep.tie_std:.2f}")
        break
