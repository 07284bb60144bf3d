"""Finite perturbations that push a peaceful network over the war threshold.

A perturbation ``X_T`` held on long enough acts like a shifted bias
``X_D + X_T / beta``. The system destabilizes once the leading eigenvalue of
that effective bias reaches ``beta / (4 alpha)``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .bifurcation import critical_lambda_tilde
from .core import as_matrix, frobenius_norm, make_rng, spawn_seeds
from .errors import (
    AllZeroNetworkError,
    AlreadyUnstableError,
    DegenerateLeadingEigenvalueError,
    DimensionError,
    NotDestabilizingError,
)
from .spectral import eigendecompose, eigenvector_polarization, leading_eigenvalue

DEGENERACY_TOL = 1e-8
CHUNK = 2048


class SchemeKind(str, Enum):
    ENERGY_MIN = "EnergyMin"
    POLARIZING = "Polarizing"
    HARMONIZING = "Harmonizing"


@dataclass(frozen=True)
class PerturbationScheme:
    """Random-search settings.

    ``epsilon=None`` picks ``0.05 * beta / (4 alpha)`` at search time.
    """

    kind: SchemeKind = SchemeKind.ENERGY_MIN
    sigma: float = 1.0
    epsilon: Optional[float] = None
    n_samples: int = 100_000
    sparsity: int = 4
    seed: int = 0
    k: int = 3

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.sparsity < 1:
            raise ValueError("sparsity must be >= 1")
        if self.epsilon is not None and self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass
class PerturbationResult:
    """``perturbation`` has Frobenius norm ``sigma``; ``error`` is threshold minus effective eigenvalue."""

    perturbation: np.ndarray
    objective: float
    error: float
    destabilizes: bool
    predicted_final: np.ndarray
    phi1: float
    index: int = -1

    @property
    def sigma(self) -> float:
        return frobenius_norm(self.perturbation)


def modified_bias(x_d, x_t, beta: float) -> np.ndarray:
    """Effective bias ``X_D + X_T / beta``."""
    x_d = as_matrix(x_d, name="X_D")
    x_t = as_matrix(x_t, name="X_T")
    if x_d.shape != x_t.shape:
        raise DimensionError(f"X_D {x_d.shape} and X_T {x_t.shape} differ")
    return x_d + x_t / beta


def min_energy_perturbation(x_d, alpha: float, beta: float) -> tuple[np.ndarray, float]:
    """Cheapest destabilizing direction ``s s^T`` and the budget it needs."""
    spec = eigendecompose(x_d)
    threshold = critical_lambda_tilde(alpha, beta)
    if spec.leading_value >= threshold:
        raise AlreadyUnstableError(
            f"leading bias eigenvalue {spec.leading_value:.6g} already reaches {threshold:.6g}"
        )
    s = spec.leading_vector
    return np.outer(s, s), beta * (threshold - spec.leading_value)


def _sign_vector(v: np.ndarray) -> np.ndarray:
    u = np.sign(v)
    u[u == 0] = 1.0
    return u


def _check_simple(spec):
    if len(spec.eigenvalues) > 1 and spec.eigenvalues[0] - spec.eigenvalues[1] < DEGENERACY_TOL:
        raise DegenerateLeadingEigenvalueError("leading eigenvalue is degenerate")


def predict_war_state(x_d, L: float, beta: float) -> np.ndarray:
    """``X_D + (L/beta) u u^T`` with ``u`` the sign vector of the leading eigenvector."""
    x_d = as_matrix(x_d, name="X_D")
    spec = eigendecompose(x_d)
    _check_simple(spec)
    u = _sign_vector(spec.leading_vector)
    return x_d + (L / beta) * np.outer(u, u)


def predict_high_state(x_d, x_t, alpha: float, beta: float, L: float) -> np.ndarray:
    """``(L/beta) u u^T`` for the sign vector of the effective bias's leading eigenvector."""
    eff = modified_bias(x_d, x_t, beta)
    spec = eigendecompose(eff)
    threshold = critical_lambda_tilde(alpha, beta)
    if spec.leading_value < threshold:
        raise NotDestabilizingError(
            f"effective leading eigenvalue {spec.leading_value:.6g} is below {threshold:.6g}"
        )
    u = _sign_vector(spec.leading_vector)
    return (L / beta) * np.outer(u, u)


# ---------------------------------------------------------------- random search


def _candidates(rng, n: int, sparsity: int, sigma: float, iu) -> np.ndarray:
    n_dyads = iu[0].size
    k = min(sparsity, n_dyads)
    picks = np.argsort(rng.random((CHUNK, n_dyads)), axis=1)[:, :k]
    signs = rng.choice([-1.0, 1.0], size=(CHUNK, k))
    # each dyad appears twice, so unit magnitude entries give norm sqrt(2k)
    scale = sigma / np.sqrt(2 * k)
    out = np.zeros((CHUNK, n, n))
    rows = np.repeat(np.arange(CHUNK), k)
    i, j = iu[0][picks.ravel()], iu[1][picks.ravel()]
    out[rows, i, j] = scale * signs.ravel()
    out[rows, j, i] = scale * signs.ravel()
    return out


def _score_chunk(x_d, beta, seed, sparsity, sigma, iu):
    n = x_d.shape[0]
    x_t = _candidates(make_rng(seed), n, sparsity, sigma, iu)
    eff = x_d[None] + x_t / beta
    w, v = np.linalg.eigh(eff)
    lam = w[:, -1]
    s = v[:, :, -1]
    # s^T M s with M = X - k k^T / 2m, batched
    k = eff.sum(axis=2)
    two_m = np.abs(eff).sum(axis=(1, 2))
    ks = np.einsum("bi,bi->b", k, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = lam - np.where(two_m > 0, ks * ks / two_m, np.nan)
    return x_t, lam, phi


def _objective(kind, error, phi, eps):
    base = np.abs(error)
    if kind is SchemeKind.ENERGY_MIN:
        return base
    if kind is SchemeKind.POLARIZING:
        with np.errstate(divide="ignore"):
            return np.where(phi > 0, base + eps / np.where(phi > 0, phi, 1.0), np.inf)
    return base + eps * phi


def _distinct(rows, k):
    # the same sparse pattern is often drawn many times; keep first occurrences
    out, seen = [], set()
    for row in rows:
        key = row[2].tobytes()
        if key in seen:
            continue
        seen.add(key)
        out.append(row)
        if len(out) == k:
            break
    return out


def optimize_direction(
    x_d, alpha: float, beta: float, scheme: PerturbationScheme, *, L: float = 1.0, jobs: int = 1
) -> list[PerturbationResult]:
    """Random search over sparse +-1 perturbations of Frobenius norm ``scheme.sigma``.

    Candidates are generated in fixed-size chunks with one spawned seed per
    chunk, so results do not depend on ``jobs`` and a larger ``n_samples``
    only appends candidates. Returns the ``scheme.k`` best, ties broken by
    candidate index. ``L`` sets the amplitude of ``predicted_final``.
    """
    x_d = as_matrix(x_d, name="X_D")
    n = x_d.shape[0]
    iu = np.triu_indices(n, 1)
    threshold = critical_lambda_tilde(alpha, beta)
    eps = 0.05 * threshold if scheme.epsilon is None else scheme.epsilon
    n_chunks = -(-scheme.n_samples // CHUNK)
    seeds = spawn_seeds(scheme.seed, n_chunks)

    def work(c):
        x_t, lam, phi = _score_chunk(x_d, beta, seeds[c], scheme.sparsity, scheme.sigma, iu)
        keep = min(CHUNK, scheme.n_samples - c * CHUNK)
        x_t, lam, phi = x_t[:keep], lam[:keep], phi[:keep]
        err = threshold - lam
        obj = _objective(scheme.kind, err, phi, eps)
        obj = np.where(np.isnan(obj), np.inf, obj)
        order = np.argsort(obj, kind="stable")
        rows = ((float(obj[i]), c * CHUNK + int(i), x_t[i], float(err[i]), float(phi[i])) for i in order)
        return _distinct(rows, scheme.k)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, range(n_chunks)))
    else:
        parts = [work(c) for c in range(n_chunks)]
    merged = sorted((item for part in parts for item in part), key=lambda r: (r[0], r[1]))
    results = []
    for obj, idx, x_t, err, phi in _distinct(merged, scheme.k):
        destab = err <= 0
        final = predict_high_state(x_d, x_t, alpha, beta, L) if destab else x_d.copy()
        results.append(PerturbationResult(x_t, obj, err, destab, final, phi, idx))
    return results


# ---------------------------------------------------------------- sensitivity


def _phi1(x) -> float:
    try:
        return eigenvector_polarization(x, 0)
    except AllZeroNetworkError:
        return float("nan")


def edge_sensitivity_scan(x_d, delta: float) -> tuple[np.ndarray, np.ndarray]:
    """Change in ``lambda_1`` and leading polarization when one dyad shifts by ``delta``.

    Both outputs are symmetric with a zero diagonal.
    """
    if delta == 0:
        raise ValueError("delta must be nonzero")
    x_d = as_matrix(x_d, name="X_D")
    n = x_d.shape[0]
    lam0 = leading_eigenvalue(x_d)
    phi0 = _phi1(x_d)
    d_lam = np.zeros((n, n))
    d_phi = np.zeros((n, n))
    for i, j in zip(*np.triu_indices(n, 1)):
        y = x_d.copy()
        y[i, j] += delta
        y[j, i] += delta
        d_lam[i, j] = d_lam[j, i] = leading_eigenvalue(y) - lam0
        d_phi[i, j] = d_phi[j, i] = _phi1(y) - phi0
    return d_lam, d_phi
