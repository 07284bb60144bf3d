"""Domain types, norms and seeded randomness shared by all modules.

Matrices are plain symmetric ``numpy.ndarray`` objects throughout the
numerical code; :class:`SignedNetwork` adds node labels for the places where
names matter (ingestion, reports).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, NonFiniteError

SYMMETRY_TOL = 1e-10


def as_matrix(x, *, name: str = "matrix", check_finite: bool = True) -> np.ndarray:
    """Return ``x`` as a square float64 array (``SignedNetwork`` accepted)."""
    if isinstance(x, SignedNetwork):
        x = x.weights
    a = np.asarray(x, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    if check_finite and not np.all(np.isfinite(a)):
        raise NonFiniteError(f"{name} has non-finite entries")
    return a


def is_symmetric(a: np.ndarray, tol: float = SYMMETRY_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    return bool(np.max(np.abs(a - a.T), initial=0.0) <= tol * scale)


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def make_rng(seed) -> np.random.Generator:
    """One generator per top-level task; ``seed`` may already be a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_seeds(seed, n: int) -> list[int]:
    """Derive ``n`` independent integer seeds from ``seed`` (order-stable)."""
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1)[0]) for c in ss.spawn(n)]


@dataclass(frozen=True)
class SignedNetwork:
    """Symmetric signed tie matrix with optional node labels."""

    weights: np.ndarray
    labels: Optional[tuple] = None
    allow_nonfinite: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        w = as_matrix(self.weights, name="weights", check_finite=not self.allow_nonfinite)
        if w.shape[0] < 2:
            raise DimensionError("a network needs at least two nodes")
        finite = np.where(np.isfinite(w), w, 0.0)
        if not is_symmetric(finite):
            raise DimensionError("weights must be symmetric")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != w.shape[0]:
                raise DimensionError(f"{len(labels)} labels for {w.shape[0]} nodes")
            if len(set(labels)) != len(labels):
                raise DimensionError("node labels must be unique")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def index(self, label: str) -> int:
        if self.labels is None:
            raise KeyError("network has no labels")
        return self.labels.index(label)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.weights, dtype=dtype)


@dataclass(frozen=True)
class ModelParams:
    """Model constants: dyadic strength ``beta``, plateau ``L``, half-width ``gamma``."""

    beta: float
    L: float
    gamma: float

    def __post_init__(self):
        for name in ("beta", "L", "gamma"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    @property
    def alpha(self) -> float:
        """Balance sensitivity, the slope of the balance force at zero."""
        return self.L / self.gamma

    @classmethod
    def from_alpha(cls, alpha: float, beta: float = 1.0, L: float = 1.0) -> "ModelParams":
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha!r}")
        return cls(beta=beta, L=L, gamma=L / alpha)

    def with_alpha(self, alpha: float) -> "ModelParams":
        return ModelParams.from_alpha(alpha, beta=self.beta, L=self.L)


@dataclass(frozen=True)
class PerturbationImpulse:
    """Boxcar impulse ``sigma * direction`` switched on during ``[t_on, t_off)``."""

    direction: np.ndarray
    sigma: float
    t_on: float
    t_off: float

    def __post_init__(self):
        d = as_matrix(self.direction, name="direction")
        if not is_symmetric(d):
            raise DimensionError("impulse direction must be symmetric")
        norm = frobenius_norm(d)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"impulse direction must have unit Frobenius norm, got {norm:.6g}")
        if self.sigma < 0 or not np.isfinite(self.sigma):
            raise ValueError("sigma must be a nonnegative finite number")
        if not self.t_off > self.t_on:
            raise ValueError("t_off must be greater than t_on")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "direction", d)

    @classmethod
    def from_matrix(cls, x_t, t_on: float, t_off: float) -> "PerturbationImpulse":
        x_t = as_matrix(x_t, name="X_T")
        sigma = frobenius_norm(x_t)
        if sigma == 0:
            raise ValueError("cannot build an impulse from a zero matrix")
        return cls(direction=x_t / sigma, sigma=sigma, t_on=t_on, t_off=t_off)

    @property
    def matrix(self) -> np.ndarray:
        return self.sigma * self.direction

    def active(self, t: float) -> bool:
        return self.t_on <= t < self.t_off


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    ``blowup_threshold=None`` selects the model-dependent default in
    :mod:`conflictnet.dynamics`. ``record_every`` thins the recorded series
    (in steps); ``snapshot_every`` additionally keeps full matrices.
    """

    dt: float = 0.01
    t_end: float = 1000.0
    conv_tol: float = 1e-6
    blowup_threshold: Optional[float] = None
    seed: int = 0
    record_every: int = 1
    snapshot_every: Optional[int] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if not self.conv_tol > 0:
            raise ValueError("conv_tol must be positive")
        if self.blowup_threshold is not None and not self.blowup_threshold > 0:
            raise ValueError("blowup_threshold must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.snapshot_every is not None and self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")


@dataclass
class Trajectory:
    times: np.ndarray
    tie_std_series: np.ndarray
    lambda1_series: np.ndarray
    snapshots: list = field(default_factory=list)
    snapshot_times: list = field(default_factory=list)
    final: Optional[np.ndarray] = None
    converged: bool = False
    diverged: bool = False
    t_final: float = 0.0

    def __post_init__(self):
        n = len(self.times)
        if len(self.tie_std_series) != n or len(self.lambda1_series) != n:
            raise DimensionError("trajectory series lengths differ")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")


def frobenius_norm(x) -> float:
    """Square root of the sum of squares over the full matrix (both halves and diagonal)."""
    a = np.asarray(x.weights if isinstance(x, SignedNetwork) else x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NonFiniteError("matrix has non-finite entries")
    return float(np.sqrt(np.sum(a * a)))


def offdiag_upper(x) -> np.ndarray:
    a = np.asarray(x.weights if isinstance(x, SignedNetwork) else x, dtype=float)
    return a[np.triu_indices(a.shape[0], 1)]


def tie_std(x) -> float:
    """Population std of the N(N-1)/2 distinct off-diagonal ties."""
    vals = offdiag_upper(x)
    if vals.size == 0:
        raise DimensionError("tie_std needs at least two nodes")
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("matrix has non-finite entries")
    return float(np.std(vals))


def block_vector(n: int) -> np.ndarray:
    """+1 on the first ``n // 2`` nodes and -1 on the rest."""
    if n % 2:
        raise ValueError("block vector needs an even node count")
    return np.concatenate([np.ones(n // 2), -np.ones(n // 2)])


def two_faction_matrix(n: int, magnitude: float = 1.0, diagonal: bool = False) -> np.ndarray:
    """Exact equal-and-opposite factions: ``+m`` within blocks, ``-m`` across."""
    v = block_vector(n)
    x = magnitude * np.outer(v, v)
    if not diagonal:
        np.fill_diagonal(x, 0.0)
    return x


def zero_diagonal(x: np.ndarray) -> np.ndarray:
    y = np.array(x, dtype=float, copy=True)
    np.fill_diagonal(y, 0.0)
    return y


def relabel(x: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Apply the node permutation ``perm`` (P X P^T)."""
    p = np.asarray(perm)
    return np.asarray(x)[np.ix_(p, p)]
