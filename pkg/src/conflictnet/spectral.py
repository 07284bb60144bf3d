"""Eigendecomposition and the spectral metrics built on it.

Eigenvalues are always reported in descending order. Each eigenvector is
oriented so its largest-magnitude component is positive, which makes results
reproducible across LAPACK builds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, is_symmetric, make_rng, symmetrize
from .errors import AllZeroNetworkError, DegenerateNullError, DimensionError


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def leading_value(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def leading_vector(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def orient(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-|.| component of each is positive."""
    v = np.array(vectors, dtype=float, copy=True)
    single = v.ndim == 1
    if single:
        v = v[:, None]
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    v *= signs
    return v[:, 0] if single else v


def eigendecompose(x) -> Spectrum:
    """Full symmetric eigendecomposition, eigenvalues descending."""
    a = as_matrix(x, name="network")
    if not is_symmetric(a):
        raise DimensionError("eigendecompose needs a symmetric matrix")
    w, v = np.linalg.eigh(symmetrize(a))
    order = np.argsort(w, kind="stable")[::-1]
    return Spectrum(eigenvalues=w[order], eigenvectors=orient(v[:, order]))


def leading_eigenpair(x) -> tuple[float, np.ndarray]:
    s = eigendecompose(x)
    return s.leading_value, s.leading_vector


def leading_eigenvalue(x) -> float:
    a = np.asarray(x, dtype=float)
    return float(np.linalg.eigvalsh(symmetrize(a))[-1])


def modularity_matrix(x) -> np.ndarray:
    """Signed modularity matrix ``M = X - k k^T / (2m)``.

    ``k`` holds signed node strengths (row sums) and ``m`` is half the total
    absolute weight, which reduces to the edge count on simple graphs.
    """
    a = as_matrix(x, name="network")
    if a.shape[0] < 2:
        raise DimensionError("modularity needs at least two nodes")
    m = 0.5 * np.sum(np.abs(a))
    if m == 0:
        raise AllZeroNetworkError("modularity is undefined for an all-zero network")
    k = a.sum(axis=1)
    return a - np.outer(k, k) / (2.0 * m)


def polarizations(x, spectrum: Spectrum | None = None) -> np.ndarray:
    """Eigenvector polarization ``s_i^T M s_i`` for every eigenvector of ``x``."""
    m = modularity_matrix(x)
    s = spectrum if spectrum is not None else eigendecompose(x)
    v = s.eigenvectors
    return np.einsum("ij,ik,kj->j", v, m, v)


def eigenvector_polarization(x, i: int = 0) -> float:
    """Polarization of the ``i``-th eigenvector (0 = leading)."""
    a = as_matrix(x, name="network")
    if not 0 <= i < a.shape[0]:
        raise IndexError(f"eigenvector index {i} out of range for n={a.shape[0]}")
    m = modularity_matrix(a)
    v = eigendecompose(a).eigenvectors[:, i]
    return float(v @ m @ v)


def _triad_imbalance(a: np.ndarray) -> float:
    # sum over i<j<k of |w| for triads whose sign product is negative
    z = np.array(a, dtype=float, copy=True)
    np.fill_diagonal(z, 0.0)
    signed = np.trace(z @ z @ z) / 6.0
    absz = np.abs(z)
    total = np.trace(absz @ absz @ absz) / 6.0
    return max(0.0, 0.5 * (total - signed))


def triad_imbalance(x) -> float:
    """Weighted count of unbalanced triads, each weighted by ``|X_ij X_jk X_ki|``."""
    return _triad_imbalance(as_matrix(x, name="network"))


def balance_eta(x, n_null: int = 100, seed=0) -> float:
    """Normalized imbalance: 0 for perfect balance, 1 for the shuffle-null mean.

    The null model permutes the signed off-diagonal ties over dyad positions
    (each tie keeps its sign). Diagonal entries are ignored.
    """
    a = as_matrix(x, name="network")
    n = a.shape[0]
    if n < 3:
        raise DimensionError("balance needs at least three nodes")
    if n_null < 10:
        raise ValueError("n_null must be at least 10")
    rng = make_rng(seed)
    iu = np.triu_indices(n, 1)
    vals = a[iu]
    null = np.empty(n_null)
    z = np.zeros_like(a)
    for r in range(n_null):
        z[iu] = rng.permutation(vals)
        null[r] = _triad_imbalance(z + z.T)
    mean_null = float(null.mean())
    if mean_null <= 0:
        raise DegenerateNullError("null-model imbalance is zero; eta is undefined")
    return max(0.0, _triad_imbalance(a) / mean_null)
