"""Random dyadic-bias generators and their signal/noise accounting.

Two generators are provided: a two-block signed stochastic block model with
unit tie magnitudes, and Gaussian noise plus a two-block contrast. Both return
symmetric matrices with a zero diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import block_vector, make_rng


@dataclass(frozen=True)
class BlockModelParams:
    N: int
    d_in: float
    d_out: float
    p_in_plus: float
    p_out_plus: float
    seed: int = 0

    def __post_init__(self):
        if self.N < 2 or self.N % 2:
            raise ValueError("N must be even and at least 2")
        for name in ("d_in", "d_out", "p_in_plus", "p_out_plus"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")


@dataclass(frozen=True)
class SignalSummary:
    """Expected-structure summary of a two-block bias ensemble.

    ``omega`` and ``mu`` are the uniform (harmony) and contrast components of
    the mean tie, ``lambda_H = N omega`` and ``lambda_C = N mu`` the
    corresponding eigenvalues of the expected matrix. ``band_edge`` is
    ``noise_sigma * sqrt(N)``, the eigenvalue a planted component must exceed
    to separate from the noise.
    """

    omega: float
    mu: float
    lambda_H: float
    lambda_C: float
    noise_sigma: float
    band_edge: float


class Detectability(str, Enum):
    ABOVE = "SignalAboveBand"
    BELOW = "SignalBelowBand"


def generate_block_model(p: BlockModelParams, seed=None) -> np.ndarray:
    """Draw one signed block-model matrix. ``seed`` overrides ``p.seed``."""
    rng = make_rng(p.seed if seed is None else seed)
    n = p.N
    v = block_vector(n)
    same = np.outer(v, v) > 0
    iu = np.triu_indices(n, 1)
    intra = same[iu]
    density = np.where(intra, p.d_in, p.d_out)
    p_plus = np.where(intra, p.p_in_plus, p.p_out_plus)
    present = rng.random(iu[0].size) < density
    positive = rng.random(iu[0].size) < p_plus
    vals = np.where(present, np.where(positive, 1.0, -1.0), 0.0)
    x = np.zeros((n, n))
    x[iu] = vals
    return x + x.T


def _dyad_counts(n: int) -> tuple[int, int]:
    half = n // 2
    return half * (half - 1), half * half


def signal_summary(p: BlockModelParams) -> SignalSummary:
    mean_in = p.d_in * (2 * p.p_in_plus - 1)
    mean_out = p.d_out * (2 * p.p_out_plus - 1)
    omega = 0.5 * (mean_in + mean_out)
    mu = 0.5 * (mean_in - mean_out)
    # a present tie is +-1, so E[x^2] equals the density
    var_in = p.d_in - mean_in**2
    var_out = p.d_out - mean_out**2
    n_in, n_out = _dyad_counts(p.N)
    sigma = float(np.sqrt((n_in * var_in + n_out * var_out) / (n_in + n_out)))
    return SignalSummary(
        omega=omega,
        mu=mu,
        lambda_H=p.N * omega,
        lambda_C=p.N * mu,
        noise_sigma=sigma,
        band_edge=sigma * np.sqrt(p.N),
    )


def gaussian_bias(N: int, noise_scale: float, contrast_strength: float = 0.0, seed=0) -> np.ndarray:
    """``noise_scale * Normal(0, 1)`` ties plus ``contrast_strength * v v^T``.

    ``v`` is the +-1 two-block vector; the diagonal is zero.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if noise_scale < 0:
        raise ValueError("noise_scale must be nonnegative")
    rng = make_rng(seed)
    iu = np.triu_indices(N, 1)
    x = np.zeros((N, N))
    x[iu] = noise_scale * rng.standard_normal(iu[0].size)
    x = x + x.T
    if contrast_strength != 0:
        v = block_vector(N)
        x += contrast_strength * np.outer(v, v)
        np.fill_diagonal(x, 0.0)
    return x


def gaussian_summary(N: int, noise_scale: float, contrast_strength: float = 0.0) -> SignalSummary:
    mu = float(contrast_strength)
    return SignalSummary(
        omega=0.0,
        mu=mu,
        lambda_H=0.0,
        lambda_C=N * mu,
        noise_sigma=float(noise_scale),
        band_edge=float(noise_scale) * np.sqrt(N),
    )


def detectability_check(summary: SignalSummary) -> Detectability:
    return Detectability.ABOVE if summary.lambda_C > summary.band_edge else Detectability.BELOW


def block_projections(x) -> tuple[float, float]:
    """Rayleigh quotients of ``x`` on the uniform and the contrast unit vectors.

    Returns ``(harmony, contrast)``; for a matrix with the expected block
    structure these approximate ``lambda_H`` and ``lambda_C``.
    """
    a = np.asarray(x, dtype=float)
    n = a.shape[0]
    u_h = np.ones(n) / np.sqrt(n)
    u_c = block_vector(n) / np.sqrt(n)
    return float(u_h @ a @ u_h), float(u_c @ a @ u_c)
