"""SVG figures for the command-line tools.

Output is deterministic: a fixed hash salt and no date metadata.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "conflictnet"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def time_series(path, times, tie_std, lambda1, marks=()):
    fig, (a, b) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    a.plot(times, tie_std)
    a.set_ylabel("tie std")
    b.plot(times, lambda1)
    b.set_ylabel("leading eigenvalue")
    b.set_xlabel("t")
    for t in marks:
        a.axvline(t, ls=":", c="k")
        b.axvline(t, ls=":", c="k")
    _save(fig, path)


def hysteresis(path, sweeps, predicted):
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, alphas, stds in sweeps:
        ax.plot(alphas, stds, marker="o", ms=3, label=label)
    for name, value in predicted.items():
        if value is not None and np.isfinite(value):
            ax.axvline(value, ls=":", c="k")
            ax.annotate(name, (value, ax.get_ylim()[1]), fontsize=7, rotation=90, va="top")
    ax.set_xlabel("alpha")
    ax.set_ylabel("tie std at equilibrium")
    ax.legend()
    _save(fig, path)


def lines(path, x, series: dict, xlabel, ylabel, logxy=False):
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, y in series.items():
        ax.plot(x, y, marker="o", ms=3, label=name)
    if logxy:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    _save(fig, path)


def heatmap(path, matrix, labels=None, title=""):
    m = np.asarray(matrix)
    lim = float(np.max(np.abs(m))) or 1.0
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(m, cmap="RdBu", vmin=-lim, vmax=lim)
    if labels is not None:
        ax.set_xticks(range(len(labels)), labels, rotation=90)
        ax.set_yticks(range(len(labels)), labels)
    ax.set_title(title)
    fig.colorbar(im, ax=ax)
    _save(fig, path)


def bars(path, values, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(np.arange(1, len(values) + 1), values)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    _save(fig, path)
