"""Edge-list parsing, bias-matrix construction and matrix CSV round-trips.

Edge lists are CSV with header ``node_a,node_b,weight,layer``. Lines starting
with ``#`` are comments. Layers fix the sign of a record: ``alliance`` and
``mid_same_side`` count positive, ``rivalry`` and ``mid_opposed`` negative,
and ``raw`` keeps the stored sign. Unknown layer names are read as ``raw``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .core import SignedNetwork, as_matrix
from .errors import DuplicateEdgeError, EmptyInputError, ParseError

HEADER = ("node_a", "node_b", "weight", "layer")
LAYER_SIGN = {"alliance": 1.0, "mid_same_side": 1.0, "rivalry": -1.0, "mid_opposed": -1.0}
LAYERS = tuple(LAYER_SIGN) + ("raw",)

Source = Union[str, Path, io.TextIOBase]


@dataclass(frozen=True)
class EdgeRecord:
    node_a: str
    node_b: str
    weight: float
    layer: str = "raw"

    @property
    def signed_weight(self) -> float:
        sign = LAYER_SIGN.get(self.layer)
        return self.weight if sign is None else sign * abs(self.weight)


def _read_text(source: Source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    return source.read()


def load_edge_list(source: Source) -> list[EdgeRecord]:
    """Parse an edge-list CSV from a path or text stream."""
    text = _read_text(source)
    records: list[EdgeRecord] = []
    seen: dict[tuple, int] = {}
    header_done = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if not header_done:
            if tuple(f.lower() for f in fields[:3]) != HEADER[:3]:
                raise ParseError(f"expected header {','.join(HEADER)}", lineno)
            header_done = True
            continue
        if len(fields) not in (3, 4):
            raise ParseError(f"expected 3 or 4 fields, got {len(fields)}", lineno)
        a, b, w = fields[:3]
        layer = fields[3].lower() if len(fields) == 4 and fields[3] else "raw"
        if layer not in LAYERS:
            layer = "raw"
        if not a or not b:
            raise ParseError("empty node label", lineno)
        if a == b:
            raise ParseError(f"self-tie on {a!r}", lineno)
        try:
            weight = float(w)
        except ValueError:
            raise ParseError(f"weight {w!r} is not a number", lineno) from None
        if not math.isfinite(weight):
            raise ParseError(f"weight {w!r} is not finite", lineno)
        key = (frozenset((a, b)), layer)
        if key in seen:
            raise DuplicateEdgeError(
                f"line {lineno}: {a}-{b} already given in layer {layer!r} on line {seen[key]}"
            )
        seen[key] = lineno
        records.append(EdgeRecord(a, b, weight, layer))
    return records


def build_bias_matrix(
    records: Iterable[EdgeRecord],
    scale_to: tuple[float, float] = (-2.0, 2.0),
    labels: Optional[Sequence[str]] = None,
) -> SignedNetwork:
    """Sum signed records per dyad and rescale so zero stays zero.

    The summed matrix is divided by its largest magnitude and multiplied by
    ``min(|lo|, |hi|)``, which keeps every entry inside ``[lo, hi]``.
    """
    lo, hi = scale_to
    if not lo < 0 < hi:
        raise ValueError("scale_to must satisfy lo < 0 < hi")
    records = list(records)
    if not records:
        raise EmptyInputError("no edge records to build a matrix from")
    if labels is None:
        order: dict[str, int] = {}
        for r in records:
            for node in (r.node_a, r.node_b):
                order.setdefault(node, len(order))
        labels = list(order)
    else:
        labels = [str(s) for s in labels]
        missing = {r.node_a for r in records} | {r.node_b for r in records}
        missing -= set(labels)
        if missing:
            raise ValueError(f"labels missing nodes: {sorted(missing)}")
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    x = np.zeros((n, n))
    for r in records:
        i, j = index[r.node_a], index[r.node_b]
        x[i, j] += r.signed_weight
        x[j, i] = x[i, j]
    peak = np.max(np.abs(x))
    if peak > 0:
        x = x * (min(abs(lo), abs(hi)) / peak)
    return SignedNetwork(x, labels=labels)


def export_matrix_csv(network, path: Union[str, Path], labels: Optional[Sequence[str]] = None) -> None:
    """Write the full matrix with a label row and column, 17 significant digits.

    Non-finite entries are written as ``nan``/``inf`` (sensitivity maps can hold them).
    """
    if isinstance(network, SignedNetwork) and labels is None:
        labels = network.labels
    x = as_matrix(network, name="matrix", check_finite=False)
    n = x.shape[0]
    labels = [str(i) for i in range(n)] if labels is None else list(labels)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([""] + labels)
        for lab, row in zip(labels, x):
            w.writerow([lab] + [format(float(v), ".17g") for v in row])


def load_matrix_csv(path: Union[str, Path]) -> SignedNetwork:
    text = _read_text(path)
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise EmptyInputError("matrix file is empty")
    labels = rows[0][1:]
    n = len(labels)
    if len(rows) != n + 1:
        raise ParseError(f"expected {n} data rows, got {len(rows) - 1}")
    x = np.empty((n, n))
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} fields", i + 2)
        if row[0] != labels[i]:
            raise ParseError(f"row label {row[0]!r} does not match column {labels[i]!r}", i + 2)
        try:
            x[i] = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise ParseError(str(exc), i + 2) from None
    return SignedNetwork(x, labels=labels)


def load_network(path: Union[str, Path]) -> SignedNetwork:
    """Load either an edge list (by header) or a labelled matrix CSV."""
    text = _read_text(path)
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if s.lower().startswith("node_a"):
            return build_bias_matrix(load_edge_list(io.StringIO(text)))
        break
    return load_matrix_csv(io.StringIO(text))


WWI_LABELS = ("UKG", "FRN", "GMY", "AUH", "RUS")


def wwi_1913_path() -> Path:
    return Path(str(resources.files("conflictnet") / "data" / "wwi_1913.csv"))


def load_wwi_1913() -> SignedNetwork:
    """Bundled five-power network (UKG, FRN, GMY, AUH, RUS), scaled to [-2, 2]."""
    with resources.files("conflictnet").joinpath("data/wwi_1913.csv").open("r", encoding="utf-8") as fh:
        return build_bias_matrix(load_edge_list(fh), labels=WWI_LABELS)
