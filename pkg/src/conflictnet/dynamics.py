"""Right-hand sides, fixed-step RK4 integration and equilibrium classification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional

import numpy as np

from .core import (
    ModelParams,
    PerturbationImpulse,
    SimConfig,
    Trajectory,
    as_matrix,
    is_symmetric,
    symmetrize,
    tie_std,
)
from .errors import (
    DegenerateLeadingEigenvalueError,
    DimensionError,
    NotConvergedError,
    StepTooLargeError,
)
from .spectral import eigendecompose

PURE_BALANCE_BLOWUP = 1e6
DEFAULT_WAR_FACTOR = 3.0


class Classification(str, Enum):
    PEACE = "Peace"
    WAR = "War"
    HARMONY = "Harmony"
    DIVERGED = "Diverged"
    NOT_CONVERGED = "NotConverged"


@dataclass
class EquilibriumReport:
    state: np.ndarray
    classification: Classification
    t_converged: float
    spectrum: np.ndarray
    leading_vector: np.ndarray
    tie_std: float
    max_rate: float = float("nan")

    @property
    def lambda1(self) -> float:
        return float(self.spectrum[0])


def rhs_full(x, x_d, params: ModelParams, x_t_now=None) -> np.ndarray:
    """dX/dt = -beta (X - X_D) + L tanh(alpha X^2 / L) + X_T."""
    x = np.asarray(x, dtype=float)
    x_d = np.asarray(x_d, dtype=float)
    if x.shape != x_d.shape or x.ndim != 2:
        raise DimensionError(f"X {x.shape} and X_D {x_d.shape} must be equal square shapes")
    out = -params.beta * (x - x_d) + params.L * np.tanh((params.alpha / params.L) * (x @ x))
    if x_t_now is not None:
        x_t_now = np.asarray(x_t_now, dtype=float)
        if x_t_now.shape != x.shape:
            raise DimensionError(f"X_T {x_t_now.shape} does not match X {x.shape}")
        out += x_t_now
    return symmetrize(out)


def rhs_pure_balance(x) -> np.ndarray:
    """dX/dt = X^2."""
    x = np.asarray(x, dtype=float)
    return symmetrize(x @ x)


def default_blowup(params: ModelParams, x_d: np.ndarray) -> float:
    return 100.0 * (params.L / params.beta + float(np.max(np.abs(x_d), initial=0.0)))


def forcing(impulses: Iterable[PerturbationImpulse], n: int) -> Callable[[float], Optional[np.ndarray]]:
    """Return ``t -> X_T(t)``; overlapping impulses add."""
    imps = list(impulses)
    for imp in imps:
        if imp.direction.shape != (n, n):
            raise DimensionError("impulse shape does not match the network")

    def x_t(t: float):
        active = [imp.matrix for imp in imps if imp.active(t)]
        if not active:
            return None
        return sum(active[1:], active[0].copy())

    return x_t


@dataclass
class _RunResult:
    state: np.ndarray
    t: float
    converged: bool
    diverged: bool
    max_rate: float


def _evolve(
    x0: np.ndarray,
    rate: Callable[[np.ndarray, float], np.ndarray],
    *,
    dt: float,
    t_end: float,
    conv_tol: float,
    blowup: float,
    may_settle: Callable[[float], bool] = lambda t: True,
    record: Optional[Callable[[float, np.ndarray, int], None]] = None,
    check_step: bool = True,
    refine_blowup: bool = False,
) -> _RunResult:
    """RK4 loop shared by all integrators.

    With ``refine_blowup`` a step that would cross the blow-up threshold is
    retried with halved step sizes, so finite-time singularities are
    approached until the threshold itself is reached.
    """
    x = symmetrize(np.array(x0, dtype=float))
    n_steps = int(np.ceil(t_end / dt - 1e-9))
    k = 0
    t = 0.0
    max_rate = float("nan")
    if record is not None:
        record(t, x, 0)
    while True:
        k1 = rate(x, t)
        max_rate = float(np.max(np.abs(k1)))
        if max_rate < conv_tol and may_settle(t):
            return _RunResult(x, t, True, False, max_rate)
        if k >= n_steps:
            return _RunResult(x, t, False, False, max_rate)
        h = dt
        while True:
            k2 = rate(x + 0.5 * h * k1, t + 0.5 * h)
            k3 = rate(x + 0.5 * h * k2, t + 0.5 * h)
            k4 = rate(x + h * k3, t + h)
            with np.errstate(over="ignore", invalid="ignore"):
                x_new = symmetrize(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
                peak = np.max(np.abs(x_new))
            if np.isfinite(peak) and peak <= blowup:
                break
            if not refine_blowup or h < dt * 1e-12:
                return _RunResult(x, t, False, True, max_rate)
            h *= 0.5
        if check_step:
            jump = float(np.max(np.abs(x_new - x)))
            if jump > 0.5 * blowup:
                raise StepTooLargeError(
                    f"step at t={t:.6g} changed an entry by {jump:.3g}; reduce dt"
                )
        x = x_new
        k += 1
        t = t + h if refine_blowup else k * dt
        if record is not None:
            record(t, x, k)


class _Recorder:
    def __init__(self, every: int, snapshot_every: Optional[int]):
        self.every = every
        self.snapshot_every = snapshot_every
        self.times: list[float] = []
        self.stds: list[float] = []
        self.lams: list[float] = []
        self.snaps: list[np.ndarray] = []
        self.snap_times: list[float] = []

    def __call__(self, t: float, x: np.ndarray, k: int):
        if k % self.every == 0:
            self._push(t, x)
        if self.snapshot_every and k % self.snapshot_every == 0:
            self.snaps.append(x.copy())
            self.snap_times.append(t)

    def _push(self, t, x):
        self.times.append(t)
        self.stds.append(tie_std(x))
        self.lams.append(float(np.linalg.eigvalsh(x)[-1]))

    def finish(self, res: _RunResult) -> Trajectory:
        if not self.times or self.times[-1] != res.t:
            self._push(res.t, res.state)
        return Trajectory(
            times=np.array(self.times),
            tie_std_series=np.array(self.stds),
            lambda1_series=np.array(self.lams),
            snapshots=self.snaps,
            snapshot_times=self.snap_times,
            final=res.state,
            converged=res.converged,
            diverged=res.diverged,
            t_final=res.t,
        )


def _prepare(x0, x_d, params):
    x0 = as_matrix(x0, name="X0")
    x_d = as_matrix(x_d, name="X_D")
    if x0.shape != x_d.shape:
        raise DimensionError(f"X0 {x0.shape} and X_D {x_d.shape} differ")
    if not is_symmetric(x0):
        raise DimensionError("X0 must be symmetric")
    if not is_symmetric(x_d):
        raise DimensionError("X_D must be symmetric")
    return x0, x_d


def integrate(
    x0,
    x_d,
    params: ModelParams,
    impulses: Iterable[PerturbationImpulse] = (),
    cfg: SimConfig = SimConfig(),
    *,
    stop_on_convergence: bool = True,
) -> Trajectory:
    """Fixed-step RK4 integration of the full model.

    Stops early once ``max |dX/dt| < cfg.conv_tol`` and no impulse is active or
    still to come, or when an entry exceeds the blow-up threshold (the
    returned trajectory then has ``diverged=True`` and ends at the last
    finite state).
    """
    x0, x_d = _prepare(x0, x_d, params)
    imps = list(impulses)
    x_t = forcing(imps, x0.shape[0])
    blowup = cfg.blowup_threshold or default_blowup(params, x_d)
    last_off = max((imp.t_off for imp in imps), default=-np.inf)

    def rate(x, t):
        return rhs_full(x, x_d, params, x_t(t))

    rec = _Recorder(cfg.record_every, cfg.snapshot_every)
    res = _evolve(
        x0,
        rate,
        dt=cfg.dt,
        t_end=cfg.t_end,
        conv_tol=cfg.conv_tol,
        blowup=blowup,
        may_settle=(lambda t: stop_on_convergence and t >= last_off),
        record=rec,
    )
    return rec.finish(res)


def classify_state(x_eq, x_d, war_factor: float = DEFAULT_WAR_FACTOR) -> Classification:
    """Peace / War / Harmony label for a settled state."""
    x_eq = np.asarray(x_eq, dtype=float)
    s = eigendecompose(x_eq).leading_vector
    off = x_eq[np.triu_indices(x_eq.shape[0], 1)]
    if np.all(off > 0) and np.all(s > 0):
        return Classification.HARMONY
    mixed = bool(np.any(s > 0) and np.any(s < 0))
    if mixed and tie_std(x_eq) > war_factor * tie_std(x_d):
        return Classification.WAR
    return Classification.PEACE


def _report(state, label, t, max_rate) -> EquilibriumReport:
    finite = np.all(np.isfinite(state))
    if finite:
        spec = eigendecompose(state)
        vals, vec, sd = spec.eigenvalues, spec.leading_vector, tie_std(state)
    else:
        n = state.shape[0]
        vals, vec, sd = np.full(n, np.nan), np.full(n, np.nan), float("nan")
    return EquilibriumReport(
        state=state,
        classification=label,
        t_converged=t,
        spectrum=vals,
        leading_vector=vec,
        tie_std=sd,
        max_rate=max_rate,
    )


def find_equilibrium(
    x0,
    x_d,
    params: ModelParams,
    cfg: SimConfig = SimConfig(),
    war_factor: float = DEFAULT_WAR_FACTOR,
) -> EquilibriumReport:
    """Integrate to rest and classify the resulting state.

    Raises :class:`NotConvergedError` (carrying the partial report) if
    ``cfg.t_end`` passes first. Blow-up is reported, not raised.
    """
    x0, x_d = _prepare(x0, x_d, params)
    blowup = cfg.blowup_threshold or default_blowup(params, x_d)
    res = _evolve(
        x0,
        lambda x, t: rhs_full(x, x_d, params),
        dt=cfg.dt,
        t_end=cfg.t_end,
        conv_tol=cfg.conv_tol,
        blowup=blowup,
    )
    if res.diverged:
        return _report(res.state, Classification.DIVERGED, res.t, res.max_rate)
    if not res.converged:
        rep = _report(res.state, Classification.NOT_CONVERGED, res.t, res.max_rate)
        raise NotConvergedError(
            f"no equilibrium by t={res.t:.6g} (max |dX/dt| = {res.max_rate:.3g})", rep
        )
    label = classify_state(res.state, x_d, war_factor)
    return _report(res.state, label, res.t, res.max_rate)


def simulate_pure_balance(x0, cfg: SimConfig = SimConfig(dt=1e-3, t_end=100.0)):
    """Integrate dX/dt = X^2 until blow-up.

    Returns ``(trajectory, sign_pattern)`` where the sign pattern is taken
    from the last finite state.
    """
    x0 = as_matrix(x0, name="X0")
    if not is_symmetric(x0):
        raise DimensionError("X0 must be symmetric")
    w = np.sort(np.linalg.eigvalsh(x0))[::-1]
    if len(w) > 1 and abs(w[0] - w[1]) < 1e-8:
        raise DegenerateLeadingEigenvalueError(
            f"leading eigenvalue is degenerate (gap {abs(w[0] - w[1]):.3g}); outcome is ill-defined"
        )
    blowup = cfg.blowup_threshold or PURE_BALANCE_BLOWUP
    rec = _Recorder(cfg.record_every, cfg.snapshot_every)
    res = _evolve(
        x0,
        lambda x, t: rhs_pure_balance(x),
        dt=cfg.dt,
        t_end=cfg.t_end,
        conv_tol=0.0 if cfg.conv_tol is None else cfg.conv_tol,
        blowup=blowup,
        may_settle=lambda t: False,
        record=rec,
        check_step=False,
        refine_blowup=True,
    )
    traj = rec.finish(res)
    return traj, np.sign(res.state)
