"""CSV ingestion and output for labelled data matrices."""

from __future__ import annotations

import csv
import os
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import IllPosedInputError
from .stats import LabeledMatrix


def parse_label_map(spec: str | Mapping[str, int] | None) -> dict[str, int] | None:
    """Parse ``"mutant=+1,wildtype=-1"`` into ``{"mutant": 1, "wildtype": -1}``."""
    if spec is None or isinstance(spec, Mapping):
        return None if spec is None else {str(k): int(v) for k, v in spec.items()}
    out = {}
    for item in spec.split(","):
        if not item.strip():
            continue
        key, sep, val = item.rpartition("=")
        if not sep or not key.strip():
            raise ValueError(f"bad label mapping entry {item!r}; expected name=+1 or name=-1")
        code = int(val.strip().replace("−", "-"))
        if code not in (1, -1):
            raise ValueError(f"label {key.strip()!r} must map to +1 or -1, got {val!r}")
        out[key.strip()] = code
    return out


def _map_labels(raw: list[str], label_map: dict[str, int] | None) -> np.ndarray:
    labels = np.empty(len(raw), dtype=np.int8)
    for r, value in enumerate(raw):
        value = value.strip()
        if label_map is not None:
            if value not in label_map:
                raise IllPosedInputError(
                    f"label value {value!r} (data row {r + 1}) has no entry in the label map")
            labels[r] = label_map[value]
            continue
        try:
            code = float(value)
        except ValueError:
            code = None
        if code not in (1.0, -1.0):
            raise IllPosedInputError(
                f"label value {value!r} (data row {r + 1}) is not +1/-1; "
                "pass a label map such as 'case=+1,control=-1'")
        labels[r] = int(code)
    return labels


def load_csv(path, labels: str = "label",
             label_map: str | Mapping[str, int] | None = None) -> LabeledMatrix:
    """Read a numeric CSV with a header row of variable names.

    Parameters
    ----------
    path : path-like
        Data file.  Every column except the label column must be numeric.
    labels : str
        Name of the label column in ``path``, or the path of a separate
        file with one label per line (same row order, no header).
    label_map : str or mapping, optional
        Maps raw label values to +1/-1, e.g. ``"mutant=+1,wildtype=-1"``.
        Without it the labels must already read as +1 or -1.
    """
    label_map = parse_label_map(label_map)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise IllPosedInputError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise IllPosedInputError(
                f"{path}: line {r} has {len(row)} fields, header has {len(header)}")

    if labels in header:
        lab_col = header.index(labels)
        raw_labels = [row[lab_col] for row in body]
    elif os.path.isfile(labels):
        lab_col = None
        raw_labels = [ln for ln in Path(labels).read_text(encoding="utf-8").splitlines()
                      if ln.strip()]
        if len(raw_labels) != len(body):
            raise IllPosedInputError(
                f"{labels}: {len(raw_labels)} labels for {len(body)} data rows")
    else:
        raise IllPosedInputError(
            f"{labels!r} is neither a column of {path} nor a label file")

    cols = [c for c in range(len(header)) if c != lab_col]
    values = np.empty((len(body), len(cols)))
    for r, row in enumerate(body):
        for k, c in enumerate(cols):
            try:
                values[r, k] = float(row[c])
            except ValueError:
                raise IllPosedInputError(
                    f"{path}: non-numeric value {row[c]!r} at line {r + 2}, "
                    f"column {header[c]!r}") from None
    return LabeledMatrix(values, _map_labels(raw_labels, label_map),
                         tuple(header[c] for c in cols))


def write_csv(path, data: LabeledMatrix, label_column: str = "label") -> None:
    """Write ``data`` with its labels as the last column (exact round trip)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*data.names, label_column])
        for row, lab in zip(data.values.tolist(), data.labels.tolist()):
            w.writerow([*map(repr, row), f"{lab:+d}"])
