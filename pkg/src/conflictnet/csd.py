"""Critical slowing down: recovery rates near the peace-to-war saddle-node.

Each experiment point holds a perturbation ``m s s^T`` (``s`` the leading
bias eigenvector) on the settled peace state and watches the tie spread relax
to the shifted equilibrium. The shift moves the effective leading bias
eigenvalue to ``lambda_D1 + m / beta``; its distance ``d`` to the threshold
``beta / (4 alpha)`` controls how slowly the system settles, with
``r ~ sqrt(4 alpha beta d)`` near the saddle-node. Points with ``d < 0`` lose
the peace state and end in war.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.stats import linregress

from .bifurcation import critical_lambda_tilde
from .core import ModelParams, SimConfig, Trajectory, as_matrix
from .dynamics import Classification, classify_state, find_equilibrium, integrate
from .errors import DidNotRecoverError, InsufficientPointsError, NotConvergedError
from .spectral import eigendecompose

RESIDUAL_FRACTION = 0.05


@dataclass(frozen=True)
class CsdPoint:
    """``d`` is the distance of the effective leading bias eigenvalue below the threshold."""

    magnitude: float
    d: float
    r: float
    converged: bool
    classification: Classification = Classification.PEACE


def recovery_rate(
    traj: Trajectory,
    t_release: float = 0.0,
    *,
    skip: float = 0.0,
    sigma_eq: Optional[float] = None,
) -> float:
    """Exponential relaxation rate of the tie spread after ``t_release + skip``.

    Fits ``log |sigma(t) - sigma_eq|`` against ``t`` from the window start
    until the residual first drops below 5% of its starting value.
    ``sigma_eq`` defaults to the last recorded spread.
    """
    t = np.asarray(traj.times)
    s = np.asarray(traj.tie_std_series)
    target = s[-1] if sigma_eq is None else sigma_eq
    start = np.searchsorted(t, t_release + skip - 1e-12)
    if start >= len(t) - 1:
        raise DidNotRecoverError("no samples after the release time")
    res = np.abs(s[start:] - target)
    below = np.nonzero(res < RESIDUAL_FRACTION * res[0])[0]
    if res[0] == 0 or below.size == 0:
        raise DidNotRecoverError("residual never fell below 5% of its initial value")
    stop = below[0]
    if stop < 2:
        raise DidNotRecoverError("recovery window holds fewer than three samples")
    window = slice(start, start + stop + 1)
    fit = linregress(t[window], np.log(np.abs(s[window] - target)))
    return float(-fit.slope)


def _one_point(x_peace, x_d, s, params, m, cfg, threshold, lambda_d1):
    shifted = x_d + (m / params.beta) * np.outer(s, s)
    d = threshold - (lambda_d1 + m / params.beta)
    traj = integrate(x_peace, shifted, params, (), cfg)
    if traj.diverged or not traj.converged:
        label = Classification.DIVERGED if traj.diverged else Classification.NOT_CONVERGED
        return CsdPoint(m, d, float("nan"), False, label)
    label = classify_state(traj.final, x_d)
    if label != Classification.PEACE:
        return CsdPoint(m, d, float("nan"), False, label)
    try:
        r = recovery_rate(traj, 0.0, skip=1.0 / params.beta)
    except DidNotRecoverError:
        return CsdPoint(m, d, float("nan"), False, label)
    return CsdPoint(m, d, r, True, label)


def csd_experiment(
    x_d,
    params: ModelParams,
    magnitudes: Sequence[float],
    cfg: SimConfig = SimConfig(dt=0.02, t_end=2000.0),
    *,
    jobs: int = 1,
) -> list[CsdPoint]:
    """Measure one :class:`CsdPoint` per nonzero magnitude, in input order."""
    x_d = as_matrix(x_d, name="X_D")
    spec = eigendecompose(x_d)
    s = spec.leading_vector
    threshold = critical_lambda_tilde(params.alpha, params.beta)
    try:
        peace = find_equilibrium(x_d, x_d, params, cfg)
    except NotConvergedError as exc:
        raise NotConvergedError("peace state did not settle", exc.report) from exc
    if peace.classification != Classification.PEACE:
        raise ValueError(f"starting state is {peace.classification.value}, not Peace")
    mags = [float(m) for m in magnitudes if m != 0]

    def run(m):
        return _one_point(peace.state, x_d, s, params, m, cfg, threshold, spec.leading_value)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, mags))
    return [run(m) for m in mags]


def fit_power_law(points: Sequence[CsdPoint], min_points: int = 5) -> tuple[float, float]:
    """Least-squares ``log r = exponent * log d + intercept`` (natural log)."""
    good = [p for p in points if p.converged and p.d > 0 and p.r > 0]
    if len(good) < min_points:
        raise InsufficientPointsError(
            f"need at least {min_points} recovered points with d > 0, got {len(good)}"
        )
    d = np.log([p.d for p in good])
    r = np.log([p.r for p in good])
    fit = linregress(d, r)
    return float(fit.slope), float(fit.intercept)
