"""CSV and JSON exchange formats.

Raw counts travel as plain CSV with header ``h,samples,spin_<id>,...`` where
each spin column tallies -1 outcomes.  Fitted parameters go to a table whose
first five columns (qubit_id, beta, b, eta, gamma) form a stable prefix;
diagnostics and layout columns follow.  Writers are canonical: fixed field
formatting, columns sorted by qubit id, newline-terminated rows, so equal
inputs give byte-identical files on any platform.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .estimator import FitResult
from .model import QubitParams
from .simulator import RawCounts
from .topology import ChimeraSpec, site_of

PARAMS_HEADER = [
    "qubit_id", "beta", "b", "eta", "gamma",
    "log_likelihood", "n_points", "total_samples", "converged",
    "row", "col", "k", "orientation",
]


class FormatError(ValueError):
    """Malformed input file; message carries the offending line number."""


def format_field(h: float) -> str:
    """Canonical rendering of an input-field value: 6 significant digits,
    positional notation, trailing zeros trimmed."""
    s = np.format_float_positional(float(h), precision=6, unique=False, fractional=False, trim="-")
    return s if s else "0"


def _fail(path, line_no, msg):
    raise FormatError(f"{path}:{line_no}: {msg}")


def read_raw(path) -> RawCounts:
    """Read a raw-counts CSV; duplicate-h rows are merged by summation."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            _fail(path, 1, "empty file")
        if header[:2] != ["h", "samples"]:
            _fail(path, 1, f"header must start with 'h,samples', got {header[:2]}")
        qubit_cols = []
        for j, name in enumerate(header[2:], start=2):
            if not name.startswith("spin_"):
                _fail(path, 1, f"column {j + 1} must be named spin_<id>, got {name!r}")
            try:
                qubit_cols.append((int(name[5:]), j))
            except ValueError:
                _fail(path, 1, f"bad qubit id in column name {name!r}")
        ids = [q for q, _ in qubit_cols]
        if len(set(ids)) != len(ids):
            _fail(path, 1, "duplicate spin columns")

        rows = {}  # h -> [samples, {id: count}]
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                _fail(path, line_no, f"expected {len(header)} cells, got {len(row)}")
            try:
                h = float(row[0])
                samples = int(row[1])
            except ValueError:
                _fail(path, line_no, f"non-numeric h or samples: {row[:2]}")
            if samples <= 0:
                _fail(path, line_no, f"samples must be positive, got {samples}")
            counts = {}
            for q, j in qubit_cols:
                try:
                    c = int(row[j])
                except ValueError:
                    _fail(path, line_no, f"non-integer count {row[j]!r} for qubit {q}")
                if not (0 <= c <= samples):
                    _fail(path, line_no, f"count {c} outside [0, {samples}] for qubit {q}")
                counts[q] = c
            if h in rows:
                rows[h][0] += samples
                for q in ids:
                    rows[h][1][q] += counts[q]
            else:
                rows[h] = [samples, counts]

    hs = sorted(rows)
    return RawCounts(
        h=np.array(hs),
        samples=np.array([rows[h][0] for h in hs], dtype=np.int64),
        counts={q: np.array([rows[h][1][q] for h in hs], dtype=np.int64) for q in ids},
    )


def raw_to_bytes(counts: RawCounts) -> bytes:
    """Canonical raw CSV rendering (also used for determinism checks)."""
    buf = io.StringIO()
    ids = counts.qubit_ids
    buf.write("h,samples" + "".join(f",spin_{q}" for q in ids) + "\n")
    for i in range(counts.n_fields()):
        cells = [format_field(counts.h[i]), str(int(counts.samples[i]))]
        cells += [str(int(counts.counts[q][i])) for q in ids]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue().encode()


def write_raw(counts: RawCounts, path):
    """Write a raw-counts CSV in canonical form."""
    with open(path, "wb") as fh:
        fh.write(raw_to_bytes(counts))


def write_params(results: dict, spec: ChimeraSpec, path):
    """Write the fitted-parameter table, one row per qubit, sorted by id."""
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(PARAMS_HEADER) + "\n")
        for q in sorted(results):
            r = results[q]
            site = site_of(q, spec)
            cells = [
                str(q),
                repr(float(r.params.beta)), repr(float(r.params.b)),
                repr(float(r.params.eta)), repr(float(r.params.gamma)),
                repr(float(r.log_likelihood)), str(r.n_points), str(r.total_samples),
                "true" if r.converged else "false",
                str(site.row), str(site.col), str(site.k), site.orientation,
            ]
            fh.write(",".join(cells) + "\n")


def read_params(path) -> dict:
    """Read a parameter table back into qubit id -> FitResult.

    Only the qubit_id..gamma prefix is required; missing diagnostic columns
    get neutral defaults, so plain four-parameter truth tables also load.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = PARAMS_HEADER[:5]
        if reader.fieldnames is None or reader.fieldnames[: len(required)] != required:
            _fail(path, 1, f"header must start with {','.join(required)}")
        results = {}
        for line_no, row in enumerate(reader, start=2):
            try:
                q = int(row["qubit_id"])
                params = QubitParams(
                    float(row["beta"]), float(row["b"]), float(row["eta"]), float(row["gamma"])
                )
            except ValueError as exc:
                _fail(path, line_no, str(exc))
            if q in results:
                _fail(path, line_no, f"duplicate qubit id {q}")
            results[q] = FitResult(
                params=params,
                log_likelihood=float(row.get("log_likelihood") or "nan"),
                converged=(row.get("converged") or "true") == "true",
                start_index=0,
                n_points=int(row.get("n_points") or 0),
                total_samples=int(row.get("total_samples") or 0),
            )
    return results


def write_report(report: dict, path):
    """Write an analysis report as JSON with a stable key order."""
    with open(path, "w", newline="\n") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
