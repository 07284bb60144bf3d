"""Command-line front end.

Every command writes its results plus a separate ``manifest.json`` into
``--out``. Result files depend only on the resolved parameters, so reruns with
the same manifest parameters are byte-identical. Settings can come from an INI
file (``--config``) with one section per command and an optional ``[common]``
section; command-line flags win over the file.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import json
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bifurcation import (
    alpha_peace_to_war,
    alpha_war_to_peace,
    classify_regime,
    sweep_alpha,
)
from .core import ModelParams, PerturbationImpulse, SimConfig, tie_std
from .csd import csd_experiment, fit_power_law
from .dynamics import classify_state, find_equilibrium, integrate
from .errors import (
    ConflictNetError,
    DuplicateEdgeError,
    EmptyInputError,
    NotConvergedError,
    ParseError,
)
from .ingest import export_matrix_csv, load_network, load_wwi_1913, wwi_1913_path
from .perturbation import (
    PerturbationScheme,
    SchemeKind,
    edge_sensitivity_scan,
    min_energy_perturbation,
    optimize_direction,
)
from .sbm import (
    BlockModelParams,
    block_projections,
    detectability_check,
    gaussian_bias,
    generate_block_model,
    signal_summary,
)
from .spectral import balance_eta, eigendecompose, polarizations

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
COMMANDS = ("simulate", "sweep", "regime", "sbm", "perturb", "csd", "sensitivity", "spectra")


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers


def _floats(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _schedule(text: str) -> list[tuple[float, float]]:
    """``"0.05@0,0.1@15"`` -> [(0.0, 0.05), (15.0, 0.1)] as (time, alpha)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a, t = part.split("@")
            out.append((float(t), float(a)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad schedule entry {part!r}; use alpha@time") from None
    if not out:
        raise argparse.ArgumentTypeError("empty schedule")
    out.sort()
    if out[0][0] != 0:
        raise argparse.ArgumentTypeError("schedule must start at time 0")
    return out


def _impulses(text: str) -> list[tuple[float, float, float]]:
    """``"2.5@10:20"`` -> [(2.5, 10, 20)] as (sigma, t_on, t_off)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            s, window = part.split("@")
            on, off = window.split(":")
            out.append((float(s), float(on), float(off)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad impulse {part!r}; use sigma@t_on:t_off") from None
    return out


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--jobs", type=int, help="worker threads (default 1)")
    p.add_argument("--out", type=str, help="output directory (default ./results)")
    p.add_argument("--plot", action="store_true", default=None, help="also write SVG figures")
    p.add_argument("--config", type=str, help="INI file with per-command sections")


def _add_source(p: argparse.ArgumentParser):
    g = p.add_argument_group("bias network")
    g.add_argument("--source", choices=("gaussian", "sbm", "file", "wwi"), help="where X_D comes from")
    g.add_argument("--input", type=str, help="edge-list or matrix CSV for --source file")
    g.add_argument("--n", type=int, help="node count for generated networks")
    g.add_argument("--noise-scale", type=float, help="per-tie noise std (gaussian)")
    g.add_argument("--contrast", type=float, help="two-block contrast strength (gaussian)")
    g.add_argument("--d-in", type=float, help="ingroup tie density (sbm)")
    g.add_argument("--d-out", type=float, help="outgroup tie density (sbm)")
    g.add_argument("--p-in", type=float, help="ingroup positive probability (sbm)")
    g.add_argument("--p-out", type=float, help="outgroup positive probability (sbm)")


def _add_model(p: argparse.ArgumentParser, alpha=True):
    p.add_argument("--beta", type=float, help="dyadic strength (default 1)")
    p.add_argument("--L", dest="L", type=float, help="balance plateau (default 8)")
    if alpha:
        p.add_argument("--alpha", type=float, help="balance sensitivity")


def _add_integration(p: argparse.ArgumentParser):
    p.add_argument("--dt", type=float, help="RK4 step (default 0.01/beta)")
    p.add_argument("--t-end", type=float, help="integration horizon")
    p.add_argument("--conv-tol", type=float, help="convergence threshold on max |dX/dt|")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conflictnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"conflictnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate the model under an alpha schedule")
    _add_common(p), _add_source(p), _add_model(p), _add_integration(p)
    p.add_argument("--schedule", type=_schedule, help="alpha changes as alpha@time,...")
    p.add_argument("--impulses", type=_impulses, help="sigma@t_on:t_off along the leading bias mode")
    p.add_argument("--snapshot-times", type=_floats, help="times at which to save full matrices")

    p = sub.add_parser("sweep", help="warm-started equilibrium sweep over alpha")
    _add_common(p), _add_source(p), _add_model(p, alpha=False), _add_integration(p)
    p.add_argument("--alphas", type=_floats, help="explicit alpha grid (ascending)")
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--alpha-num", type=int)
    p.add_argument("--directions", type=str, help="up, down or up,down (default)")

    p = sub.add_parser("regime", help="predicted thresholds and regime for one alpha")
    _add_common(p), _add_source(p), _add_model(p)

    p = sub.add_parser("sbm", help="block-model spectra and final states over p_out")
    _add_common(p), _add_source(p), _add_model(p), _add_integration(p)
    p.add_argument("--p-out-grid", type=_floats, help="outgroup positive probabilities")
    p.add_argument("--simulate", action="store_true", default=None, help="classify final states too")

    p = sub.add_parser("perturb", help="destabilizing perturbation search")
    _add_common(p), _add_source(p), _add_model(p)
    p.add_argument("--schemes", type=str, help="comma list of EnergyMin,Polarizing,Harmonizing")
    p.add_argument("--n-samples", type=int)
    p.add_argument("--sparsity", type=int)
    p.add_argument("--k", type=int, help="candidates reported per scheme")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--budget-scale", type=float, help="search budget as a multiple of the minimum")
    p.add_argument("--harmonizing-scale", type=float, help="budget multiple for Harmonizing")

    p = sub.add_parser("csd", help="recovery rate versus distance to the threshold")
    _add_common(p), _add_source(p), _add_model(p), _add_integration(p)
    p.add_argument("--alpha-fraction", type=float, help="alpha as a fraction of the threshold")
    p.add_argument("--distances", type=_floats, help="target distances d")
    p.add_argument("--magnitudes", type=_floats, help="perturbation magnitudes (override distances)")

    p = sub.add_parser("sensitivity", help="per-dyad change in lambda_1 and polarization")
    _add_common(p), _add_source(p)
    p.add_argument("--deltas", type=_floats, help="tie shifts (default -1,1)")

    p = sub.add_parser("spectra", help="eigenvalues, polarizations and balance of X_D")
    _add_common(p), _add_source(p)
    p.add_argument("--n-null", type=int, help="shuffle-null samples for eta")
    return parser


DEFAULTS = {
    "seed": 0,
    "jobs": 1,
    "out": "results",
    "plot": False,
    "source": "gaussian",
    "n": 50,
    "noise_scale": 0.8,
    "contrast": 0.4,
    "d_in": 0.4,
    "d_out": 0.4,
    "p_in": 1.0,
    "p_out": 0.0,
    "beta": 1.0,
    "L": 8.0,
    "conv_tol": 1e-6,
    "schedule": [(0.0, 0.05), (15.0, 0.1), (30.0, 0.05), (45.0, 0.01)],
    "impulses": [],
    "snapshot_times": [],
    "directions": "up,down",
    "alpha_num": 40,
    "p_out_grid": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
    "simulate": False,
    "schemes": "EnergyMin,Polarizing,Harmonizing",
    "n_samples": 100_000,
    "sparsity": 4,
    "k": 3,
    "budget_scale": 1.0,
    "harmonizing_scale": 4.0,
    "alpha_fraction": 0.8,
    "distances": [0.2, 0.3, 0.45, 0.7, 1.0, 1.5, 2.2, 3.3, 4.5, 6.0, -2.0],
    "deltas": [-1.0, 1.0],
    "n_null": 100,
}


def _apply_config(parser, sub: argparse.ArgumentParser, command: str, path: str):
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    actions = {a.dest: a for a in sub._actions}
    values = {}
    for section in ("common", command):
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section):
            dest = key.replace("-", "_")
            if dest == "l":
                dest = "L"
            act = actions.get(dest)
            if act is None or dest in ("config", "help"):
                raise ConfigError(f"[{section}] {key}: unknown setting for '{command}'")
            try:
                if isinstance(act, argparse._StoreTrueAction):
                    values[dest] = cp.getboolean(section, key)
                elif act.type is not None:
                    values[dest] = act.type(raw)
                else:
                    values[dest] = raw
                if act.choices is not None and values[dest] not in act.choices:
                    raise ValueError(f"must be one of {list(act.choices)}")
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ConfigError(f"[{section}] {key}: {exc}") from None
    sub.set_defaults(**values)


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        _apply_config(parser, sub, args.command, args.config)
        args = parser.parse_args(argv)
    for key, value in DEFAULTS.items():
        if getattr(args, key, "missing") is None:
            setattr(args, key, value)
    return args


# ---------------------------------------------------------------- shared plumbing


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _bias(args):
    """Return ``(X_D, labels, input_digests)``."""
    src = args.source
    if src == "file":
        if not args.input:
            raise ConfigError("--input is required with --source file")
        net = load_network(args.input)
        return np.asarray(net.weights), net.labels, {args.input: _digest(args.input)}
    if src == "wwi":
        net = load_wwi_1913()
        return np.asarray(net.weights), net.labels, {"wwi_1913.csv": _digest(wwi_1913_path())}
    if src == "sbm":
        p = BlockModelParams(args.n, args.d_in, args.d_out, args.p_in, args.p_out, args.seed)
        return generate_block_model(p), None, {}
    return gaussian_bias(args.n, args.noise_scale, args.contrast, args.seed), None, {}


def _params(args, alpha=None) -> ModelParams:
    a = args.alpha if alpha is None else alpha
    if a is None:
        raise ConfigError("--alpha is required")
    try:
        return ModelParams.from_alpha(a, beta=args.beta, L=args.L)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _cfg(args, t_end_default=2000.0) -> SimConfig:
    dt = args.dt if args.dt is not None else 0.01 / args.beta
    try:
        return SimConfig(dt=dt, t_end=args.t_end or t_end_default, conv_tol=args.conv_tol, seed=args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def _write_json(path, data):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _manifest(args, digests, started, outputs):
    params = {k: v for k, v in vars(args).items() if k not in ("config",)}
    return {
        "command": args.command,
        "parameters": params,
        "seed": args.seed,
        "version": __version__,
        "input_digests": digests,
        "config_file": args.config,
        "config_digest": _digest(args.config) if args.config else None,
        "outputs": sorted(outputs),
        "started_unix": started,
        "wall_clock_seconds": time.time() - started,
    }


def _labels(n, labels):
    return list(labels) if labels is not None else [str(i) for i in range(n)]


def _factions(vec, labels):
    pos = [lab for lab, v in zip(labels, vec) if v > 0]
    neg = [lab for lab, v in zip(labels, vec) if v <= 0]
    return [pos, neg]


# ---------------------------------------------------------------- commands


def cmd_simulate(args, out: Path):
    x_d, labels, digests = _bias(args)
    schedule = args.schedule if args.alpha is None else [(0.0, args.alpha)]
    cfg = _cfg(args, t_end_default=60.0)
    horizon = cfg.t_end
    s = eigendecompose(x_d).leading_vector
    impulses = [PerturbationImpulse(np.outer(s, s), sig, on, off) for sig, on, off in args.impulses]
    bounds = [t for t, _ in schedule] + [horizon]
    state = x_d.copy()
    rows, seg_rows, snaps = [], [], {}
    wanted = sorted(args.snapshot_times)
    for idx, ((t0, alpha), t1) in enumerate(zip(schedule, bounds[1:])):
        if t1 <= t0:
            raise ConfigError(f"schedule time {t0} is not before the horizon {horizon}")
        params = _params(args, alpha)
        local = [
            PerturbationImpulse(i.direction, i.sigma, i.t_on - t0, i.t_off - t0)
            for i in impulses
            if i.t_off > t0 and i.t_on < t1
        ]
        seg_cfg = SimConfig(dt=cfg.dt, t_end=t1 - t0, conv_tol=cfg.conv_tol, snapshot_every=1 if wanted else None)
        last = idx == len(schedule) - 1
        traj = integrate(state, x_d, params, local, seg_cfg, stop_on_convergence=last)
        skip_first = 1 if rows else 0
        for t, sd, lam in list(zip(traj.times, traj.tie_std_series, traj.lambda1_series))[skip_first:]:
            rows.append((t0 + t, alpha, sd, lam))
        for ts in wanted:
            if ts in snaps:
                continue
            for t, snap in zip(traj.snapshot_times, traj.snapshots):
                if abs(t0 + t - ts) < 0.5 * cfg.dt:
                    snaps[ts] = snap
                    break
        label = "Diverged" if traj.diverged else classify_state(traj.final, x_d).value
        seg_rows.append((t0, t0 + traj.t_final, alpha, label, tie_std(traj.final)))
        state = traj.final
        if traj.diverged:
            break
    outputs = ["trajectory.csv", "segments.csv"]
    _write_csv(out / "trajectory.csv", ["t", "alpha", "tie_std", "lambda1"], rows)
    _write_csv(out / "segments.csv", ["t_start", "t_end", "alpha", "classification", "tie_std"], seg_rows)
    for ts, snap in sorted(snaps.items()):
        name = f"snapshot_t{_fmt(ts)}.csv"
        export_matrix_csv(snap, out / name, _labels(len(snap), labels))
        outputs.append(name)
    if args.plot:
        from . import plots

        arr = np.array(rows)
        plots.time_series(out / "trajectory.svg", arr[:, 0], arr[:, 2], arr[:, 3], [t for t, _ in schedule[1:]])
        outputs.append("trajectory.svg")
    return digests, outputs


def cmd_sweep(args, out: Path):
    x_d, labels, digests = _bias(args)
    lam_d1 = eigendecompose(x_d).leading_value
    n = x_d.shape[0]
    a_pw = alpha_peace_to_war(args.beta, lam_d1)
    a_wp = alpha_war_to_peace(args.beta, args.L, n, lam_d1)
    if args.alphas is not None:
        grid = np.array(sorted(args.alphas))
    else:
        lo = args.alpha_min if args.alpha_min is not None else 0.5 * a_wp
        hi = args.alpha_max if args.alpha_max is not None else 1.5 * a_pw
        grid = np.linspace(lo, hi, args.alpha_num) if args.alpha_num > 0 else np.array([])
    if grid.size == 0:
        raise ConfigError("alpha grid is empty")
    if np.any(grid <= 0):
        raise ConfigError("alpha grid must be positive")
    directions = [d.strip() for d in args.directions.split(",") if d.strip()]
    if not directions or any(d not in ("up", "down") for d in directions):
        raise ConfigError("--directions must list up and/or down")
    cfg = _cfg(args)
    base = ModelParams.from_alpha(float(grid[0]), beta=args.beta, L=args.L)

    def run(direction):
        g = grid if direction == "up" else grid[::-1]
        return sweep_alpha(x_d, base, g, cfg, direction)

    if args.jobs > 1 and len(directions) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, directions))
    else:
        results = [run(d) for d in directions]
    rows = []
    for res in results:
        for a, rep in res:
            rows.append([a, res.direction, rep.tie_std, rep.classification.value, *rep.spectrum])
    header = ["alpha", "direction", "tie_std", "classification"] + [f"lambda_{i + 1}" for i in range(n)]
    _write_csv(out / "sweep.csv", header, rows)
    summary = {
        "lambda_D1": lam_d1,
        "predicted_alpha_peace_to_war": a_pw,
        "predicted_alpha_war_to_peace": a_wp,
        "empirical": {
            r.direction: {"jump_alpha": r.jump_alpha, "jump_size": r.jump_size, "not_converged": r.flagged}
            for r in results
        },
    }
    _write_json(out / "sweep_summary.json", summary)
    outputs = ["sweep.csv", "sweep_summary.json"]
    if args.plot:
        from . import plots

        plots.hysteresis(
            out / "sweep.svg",
            [(r.direction, r.alphas, r.tie_stds) for r in results],
            {"peace to war": a_pw, "war to peace": a_wp},
        )
        outputs.append("sweep.svg")
    return digests, outputs


def cmd_regime(args, out: Path):
    x_d, labels, digests = _bias(args)
    lam_d1 = eigendecompose(x_d).leading_value
    rep = classify_regime(_params(args), lam_d1, x_d.shape[0])
    _write_json(
        out / "regime.json",
        {"alpha": args.alpha, "lambda_D1": lam_d1, "regime": rep.regime, "alpha_pw": rep.alpha_pw, "alpha_wp": rep.alpha_wp},
    )
    print(f"{rep.regime.value}: alpha_wp={rep.alpha_wp:.6g} alpha_pw={rep.alpha_pw:.6g}")
    return digests, ["regime.json"]


def cmd_sbm(args, out: Path):
    grid = list(args.p_out_grid)
    if not grid:
        raise ConfigError("p_out grid is empty")
    cfg = _cfg(args) if args.simulate else None
    params = _params(args) if args.simulate else None

    def run(i):
        p = BlockModelParams(args.n, args.d_in, args.d_out, args.p_in, grid[i], args.seed + i)
        x = generate_block_model(p)
        summ = signal_summary(p)
        h, c = block_projections(x)
        row = [grid[i], summ.lambda_H, summ.lambda_C, summ.band_edge, detectability_check(summ).value, h, c,
               eigendecompose(x).leading_value]
        if args.simulate:
            rep = find_equilibrium(x, x, params, cfg)
            row += [rep.classification.value, bool(np.all(rep.leading_vector > 0)), rep.tie_std]
        return row

    idx = range(len(grid))
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run, idx))
    else:
        rows = [run(i) for i in idx]
    header = ["p_out", "lambda_H", "lambda_C", "band_edge", "detectability",
              "harmony_projection", "contrast_projection", "lambda_1"]
    if args.simulate:
        header += ["classification", "uniform_leading_vector", "tie_std"]
    _write_csv(out / "sbm.csv", header, rows)
    outputs = ["sbm.csv"]
    if args.plot:
        from . import plots

        arr = np.array([[r[0], r[5], r[6], r[3]] for r in rows], dtype=float)
        plots.lines(out / "sbm.svg", arr[:, 0], {"harmony": arr[:, 1], "contrast": arr[:, 2], "band edge": arr[:, 3]},
                    "p_out", "eigenvalue scale")
        outputs.append("sbm.svg")
    return {}, outputs


def cmd_perturb(args, out: Path):
    x_d, labels, digests = _bias(args)
    alpha = args.alpha if args.alpha is not None else 0.03
    params = _params(args, alpha)
    n = x_d.shape[0]
    labels = _labels(n, labels)
    direction, sigma_min = min_energy_perturbation(x_d, params.alpha, params.beta)
    k = args.k
    if k > args.n_samples:
        warnings.warn(f"k={k} exceeds n_samples={args.n_samples}; clamped")
        print(f"warning: k={k} exceeds n_samples={args.n_samples}; clamped", file=sys.stderr)
        k = args.n_samples
    report = {"sigma_min": sigma_min, "threshold": params.beta / (4 * params.alpha),
              "lambda_D1": eigendecompose(x_d).leading_value, "labels": labels, "schemes": {}}
    outputs = ["perturb.json"]
    try:
        kinds = [SchemeKind(s.strip()) for s in args.schemes.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for kind in kinds:
        scale = args.harmonizing_scale if kind is SchemeKind.HARMONIZING else args.budget_scale
        scheme = PerturbationScheme(kind, sigma_min * scale, args.epsilon, args.n_samples, args.sparsity, args.seed, k)
        found = optimize_direction(x_d, params.alpha, params.beta, scheme, L=params.L, jobs=args.jobs)
        entries = []
        for rank, res in enumerate(found):
            iu = np.triu_indices(n, 1)
            dyads = [
                {"a": labels[i], "b": labels[j], "value": res.perturbation[i, j]}
                for i, j in zip(*iu)
                if res.perturbation[i, j] != 0
            ]
            eff = eigendecompose(x_d + res.perturbation / params.beta).leading_vector
            entries.append({"rank": rank + 1, "candidate": res.index, "objective": res.objective, "error": res.error,
                            "destabilizes": res.destabilizes, "phi1": res.phi1, "dyads": dyads,
                            "predicted_factions": _factions(eff, labels)})
            if args.plot:
                from . import plots

                name = f"perturb_{kind.value}_{rank + 1}.svg"
                plots.heatmap(out / name, res.perturbation, labels, f"{kind.value} #{rank + 1}")
                outputs.append(name)
        report["schemes"][kind.value] = {"sigma": scheme.sigma, "candidates": entries}
    _write_json(out / "perturb.json", report)
    return digests, outputs


def cmd_csd(args, out: Path):
    x_d, labels, digests = _bias(args)
    lam_d1 = eigendecompose(x_d).leading_value
    a_star = alpha_peace_to_war(args.beta, lam_d1)
    alpha = args.alpha if args.alpha is not None else args.alpha_fraction * a_star
    params = _params(args, alpha)
    threshold = params.beta / (4 * params.alpha)
    if args.magnitudes is not None:
        mags = list(args.magnitudes)
    else:
        mags = [params.beta * (threshold - lam_d1 - d) for d in args.distances]
    cfg = _cfg(args)
    cfg = SimConfig(dt=args.dt if args.dt is not None else 0.02 / args.beta, t_end=cfg.t_end, conv_tol=cfg.conv_tol)
    points = csd_experiment(x_d, params, mags, cfg, jobs=args.jobs)
    _write_csv(
        out / "csd_points.csv",
        ["magnitude", "d", "r", "converged", "classification"],
        [(p.magnitude, p.d, p.r, p.converged, p.classification.value) for p in points],
    )
    outputs = ["csd_points.csv"]
    slope, intercept = fit_power_law(points)
    _write_json(out / "csd_fit.json", {"exponent": slope, "intercept": intercept, "alpha": alpha, "lambda_D1": lam_d1})
    outputs.append("csd_fit.json")
    if args.plot:
        from . import plots

        good = sorted((p.d, p.r) for p in points if p.converged and p.d > 0)
        d = np.array([g[0] for g in good])
        plots.lines(out / "csd.svg", d, {"measured": np.array([g[1] for g in good]),
                                          "fit": np.exp(intercept) * d**slope}, "d", "r", logxy=True)
        outputs.append("csd.svg")
    return digests, outputs


def cmd_sensitivity(args, out: Path):
    x_d, labels, digests = _bias(args)
    labels = _labels(x_d.shape[0], labels)
    if not args.deltas:
        raise ConfigError("no deltas given")
    outputs = []
    for delta in args.deltas:
        if delta == 0:
            raise ConfigError("delta must be nonzero")
        d_lam, d_phi = edge_sensitivity_scan(x_d, delta)
        tag = _fmt(delta)
        for name, mat in (("dlambda1", d_lam), ("dphi1", d_phi)):
            fname = f"{name}_delta{tag}.csv"
            export_matrix_csv(mat, out / fname, labels)
            outputs.append(fname)
            if args.plot:
                from . import plots

                svg = f"{name}_delta{tag}.svg"
                plots.heatmap(out / svg, mat, labels, f"{name}, delta={tag}")
                outputs.append(svg)
    return digests, outputs


def cmd_spectra(args, out: Path):
    x_d, labels, digests = _bias(args)
    spec = eigendecompose(x_d)
    phis = polarizations(x_d, spec)
    n = x_d.shape[0]
    eta = balance_eta(x_d, args.n_null, args.seed) if n >= 3 else None
    _write_csv(out / "spectrum.csv", ["index", "eigenvalue", "polarization"],
               [(i + 1, v, p) for i, (v, p) in enumerate(zip(spec.eigenvalues, phis))])
    labels = _labels(n, labels)
    _write_json(out / "spectra.json", {"eta": eta, "lambda_1": spec.leading_value,
                                        "leading_vector": dict(zip(labels, spec.leading_vector)),
                                        "most_polarized": int(np.argmax(phis)) + 1,
                                        "factions": _factions(spec.leading_vector, labels)})
    outputs = ["spectrum.csv", "spectra.json"]
    if args.plot:
        from . import plots

        plots.bars(out / "spectrum.svg", spec.eigenvalues, "index", "eigenvalue")
        outputs.append("spectrum.svg")
    return digests, outputs


HANDLERS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "regime": cmd_regime,
    "sbm": cmd_sbm,
    "perturb": cmd_perturb,
    "csd": cmd_csd,
    "sensitivity": cmd_sensitivity,
    "spectra": cmd_spectra,
}


def main(argv: Optional[list] = None) -> int:
    started = time.time()
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        digests, outputs = HANDLERS[args.command](args, out)
        _write_json(out / "manifest.json", _manifest(args, digests, started, outputs))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ParseError, DuplicateEdgeError, EmptyInputError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NotConvergedError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConflictNetError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
