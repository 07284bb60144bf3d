"""Closed-form fixed points and critical parameters, plus empirical sweeps.

The closed forms come from two approximations of the tanh balance force.
Peace-side quantities (``x_P``, ``x_U``, ``lambda_peace``, ``lambda_unstable``,
``alpha_peace_to_war``) use its linear regime ``tanh(z) ~ z``. War-side
quantities (``x_W``, ``lambda_war``, ``alpha_war_to_peace``) use the plateau
``tanh(z) ~ 1`` and are only trustworthy for large ``L``.
:func:`exact_special_fixed_points` solves the scalar problem without either
approximation and is the reference to check them against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import ModelParams, SimConfig
from .dynamics import Classification, find_equilibrium
from .errors import BeyondBifurcationError, NonPositiveLeadingEigenvalueError, NotConvergedError
from .spectral import eigendecompose


@dataclass(frozen=True)
class SpecialCaseParams:
    """Two equal factions with every dyadic bias of magnitude ``mu``."""

    N: int
    mu: float
    beta: float
    L: float
    alpha: float

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        for name in ("mu", "beta", "L", "alpha"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")

    @property
    def model(self) -> ModelParams:
        return ModelParams.from_alpha(self.alpha, beta=self.beta, L=self.L)


@dataclass(frozen=True)
class SpecialFixedPoints:
    """``x_P`` and ``x_U`` are ``None`` when the linear-regime discriminant is negative.

    ``x_W`` is always reported; it relies on the plateau approximation and
    may not exist in the exact system (compare with
    :func:`exact_special_fixed_points`).
    """

    x_P: Optional[float]
    x_U: Optional[float]
    x_W: float

    @property
    def peace_present(self) -> bool:
        return self.x_P is not None


def special_fixed_points(p: SpecialCaseParams) -> SpecialFixedPoints:
    disc = p.beta * (p.beta - 4 * p.N * p.alpha * p.mu)
    x_w = p.L / p.beta + p.mu
    if disc < 0:
        return SpecialFixedPoints(None, None, x_w)
    root = np.sqrt(disc)
    denom = 2 * p.N * p.alpha
    return SpecialFixedPoints((p.beta - root) / denom, (p.beta + root) / denom, x_w)


def special_rate(x, p: SpecialCaseParams):
    """Scalar rate for the ingroup tie ``x`` of the two-faction state ``x v v^T``."""
    x = np.asarray(x, dtype=float)
    return -p.beta * (x - p.mu) + p.L * np.tanh(p.alpha * p.N * x * x / p.L)


def exact_special_fixed_points(p: SpecialCaseParams, n_grid: int = 20001) -> list[float]:
    """All roots of :func:`special_rate` on ``[0, mu + L/beta + 1]``, ascending."""
    hi = p.mu + p.L / p.beta + 1.0
    xs = np.linspace(0.0, hi, n_grid)
    g = special_rate(xs, p)
    roots = []
    for i in range(n_grid - 1):
        if g[i] == 0:
            roots.append(float(xs[i]))
        elif g[i] * g[i + 1] < 0:
            roots.append(float(brentq(special_rate, xs[i], xs[i + 1], args=(p,), xtol=1e-14)))
    return roots


def special_critical_alphas(p: SpecialCaseParams) -> tuple[float, float]:
    """``(alpha_pw, alpha_wp)`` for the equal-magnitude two-faction case."""
    alpha_pw = p.beta / (4 * p.N * p.mu)
    alpha_wp = p.L / (p.N * (p.mu + p.L / p.beta) ** 2)
    return alpha_pw, alpha_wp


def alpha_peace_to_war(beta: float, lambda_D1: float) -> float:
    if not lambda_D1 > 0:
        raise NonPositiveLeadingEigenvalueError(
            f"leading bias eigenvalue {lambda_D1:.6g} is not positive; no peace-to-war threshold"
        )
    return beta / (4.0 * lambda_D1)


def alpha_war_to_peace(beta: float, L: float, N: int, lambda_D1: float) -> float:
    shift = lambda_D1 + N * L / beta
    if not shift > 0:
        raise ValueError("lambda_D1 + N L / beta must be positive")
    return N * L / shift**2


def _peace_disc(alpha, beta, lambda_D1):
    disc = beta * beta - 4 * alpha * beta * lambda_D1
    if -1e-12 * beta * beta < disc < 0:
        # rounding right at the threshold
        disc = 0.0
    if disc < 0:
        raise BeyondBifurcationError(
            f"alpha={alpha:.6g} is past the peace-to-war threshold; peace eigenvalue does not exist"
        )
    return disc


def lambda_peace(alpha: float, beta: float, lambda_D1: float) -> float:
    """Leading eigenvalue of the stable peace state (linear regime)."""
    if alpha == 0:
        return float(lambda_D1)
    disc = _peace_disc(alpha, beta, lambda_D1)
    # rationalized form avoids cancellation as alpha -> 0
    return float(2 * beta * lambda_D1 / (beta + np.sqrt(disc)))


def lambda_unstable(alpha: float, beta: float, lambda_D1: float) -> float:
    """Leading eigenvalue of the unstable state separating peace from war."""
    if alpha == 0:
        return float("inf")
    disc = _peace_disc(alpha, beta, lambda_D1)
    return float((beta + np.sqrt(disc)) / (2 * alpha))


def lambda_war(lambda_D1: float, L: float, N: int, beta: float) -> float:
    """Leading eigenvalue of the war state (plateau regime)."""
    return float(lambda_D1 + L * N / beta)


def critical_lambda_tilde(alpha: float, beta: float) -> float:
    """Threshold on the leading eigenvalue of the effective bias."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return beta / (4.0 * alpha)


def mode_growth_rates(alpha: float, beta: float, fixed_point_eigenvalues) -> np.ndarray:
    return -beta + 2.0 * alpha * np.asarray(fixed_point_eigenvalues, dtype=float)


class Regime(str, Enum):
    MONOSTABLE_PEACE = "MonostablePeace"
    BISTABLE = "Bistable"
    MONOSTABLE_WAR = "MonostableWar"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    alpha_pw: float
    alpha_wp: float


def classify_regime(params: ModelParams, lambda_D1: float, N: int) -> RegimeReport:
    a_pw = alpha_peace_to_war(params.beta, lambda_D1)
    a_wp = alpha_war_to_peace(params.beta, params.L, N, lambda_D1)
    a = params.alpha
    if a >= a_pw:
        regime = Regime.MONOSTABLE_WAR
    elif a >= a_wp:
        regime = Regime.BISTABLE
    else:
        regime = Regime.MONOSTABLE_PEACE
    return RegimeReport(regime, a_pw, a_wp)


def eigen_rhs(lambda1, lambda_D1: float, params: ModelParams, regime: str = "smooth", N: int = 1):
    """Reduced one-dimensional dynamics of the leading eigenvalue.

    ``transition`` keeps the quadratic balance term, ``plateau`` saturates it
    at ``L N`` and ``smooth`` joins the two with ``L N tanh(alpha lambda^2 / (L N))``.
    """
    lam = np.asarray(lambda1, dtype=float)
    decay = -params.beta * (lam - lambda_D1)
    scale = params.L * N
    if regime == "transition":
        out = decay + params.alpha * lam * lam
    elif regime == "plateau":
        out = decay + scale
    elif regime == "smooth":
        out = decay + scale * np.tanh(params.alpha * lam * lam / scale)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return out if out.ndim else float(out)


def scalar_roots(f, lo: float, hi: float, n_grid: int = 20001) -> list[float]:
    """Bracket and polish every sign change of ``f`` on ``[lo, hi]``."""
    xs = np.linspace(lo, hi, n_grid)
    g = np.array([f(x) for x in xs])
    out = []
    for i in range(n_grid - 1):
        if g[i] == 0:
            out.append(float(xs[i]))
        elif g[i] * g[i + 1] < 0:
            out.append(float(brentq(f, xs[i], xs[i + 1], xtol=1e-13)))
    return out


# ---------------------------------------------------------------- sweeps


def war_state_guess(x_d, params: ModelParams) -> np.ndarray:
    """``X_D + (L/beta) u u^T`` with ``u`` the sign vector of the leading bias eigenvector."""
    x_d = np.asarray(x_d, dtype=float)
    u = np.sign(eigendecompose(x_d).leading_vector)
    u[u == 0] = 1.0
    return x_d + (params.L / params.beta) * np.outer(u, u)


@dataclass
class SweepResult:
    direction: str
    alphas: np.ndarray
    reports: list
    jump_alpha: Optional[float] = None
    jump_size: float = 0.0
    flagged: list = field(default_factory=list)

    @property
    def tie_stds(self) -> np.ndarray:
        return np.array([r.tie_std for r in self.reports])

    @property
    def classifications(self) -> list:
        return [r.classification for r in self.reports]

    def __iter__(self):
        return iter(zip(self.alphas, self.reports))


def _locate_jump(alphas, reports):
    """Largest tie-std jump between adjacent points whose labels differ.

    Returns the alpha on the far side of the jump in sweep order, ties going
    to the lower alpha.
    """
    best, best_size = None, 0.0
    for i in range(len(reports) - 1):
        a, b = reports[i], reports[i + 1]
        if a.classification == b.classification:
            continue
        size = abs(b.tie_std - a.tie_std)
        if not np.isfinite(size):
            size = np.inf
        new_alpha = float(alphas[i + 1])
        if best is None or size > best_size or (size == best_size and new_alpha < best):
            best, best_size = new_alpha, size
    return best, best_size


def sweep_alpha(
    x_d,
    params_base: ModelParams,
    alpha_grid: Sequence[float],
    cfg: SimConfig = SimConfig(),
    direction: str = "up",
    x0=None,
) -> SweepResult:
    """Warm-started equilibrium sweep over ``alpha``.

    ``up`` starts from ``X_D`` (peace side), ``down`` from
    :func:`war_state_guess`, unless ``x0`` is given. Each point starts from the
    previous equilibrium. Points that fail to converge are kept with
    classification ``NotConverged`` and listed in ``flagged``.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    alphas = np.asarray(alpha_grid, dtype=float)
    steps = np.diff(alphas)
    if direction == "up" and np.any(steps <= 0):
        raise ValueError("an upward sweep needs a strictly increasing grid")
    if direction == "down" and np.any(steps >= 0):
        raise ValueError("a downward sweep needs a strictly decreasing grid")
    x_d = np.asarray(x_d, dtype=float)
    if x0 is None:
        x0 = x_d.copy() if direction == "up" else war_state_guess(x_d, params_base)
    state = np.asarray(x0, dtype=float)
    reports, flagged = [], []
    for a in alphas:
        params = params_base.with_alpha(float(a))
        try:
            rep = find_equilibrium(state, x_d, params, cfg)
        except NotConvergedError as exc:
            rep = exc.report
            flagged.append(float(a))
        reports.append(rep)
        if rep.classification != Classification.DIVERGED:
            state = rep.state
    jump, size = _locate_jump(alphas, reports)
    return SweepResult(direction, alphas, reports, jump, size, flagged)
