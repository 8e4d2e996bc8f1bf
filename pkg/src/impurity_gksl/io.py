"""CSV / JSON writers for trajectories, sweep summaries and regime diagrams."""

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

__all__ = [
    "TRAJECTORY_COLUMNS",
    "fmt",
    "config_hash",
    "trajectory_rows",
    "write_table",
    "write_json",
    "read_table",
]

TRAJECTORY_COLUMNS = (
    "t",
    "re_coh_num",
    "im_coh_num",
    "abs_coh_num",
    "re_coh_ana",
    "im_coh_ana",
    "abs_coh_ana",
    "pop_q0",
    "pop_q1",
    "pop_i0",
    "pop_i1",
    "trace_dev",
    "min_eig",
)


def fmt(x):
    """17 significant digits; None becomes an empty field."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def trajectory_rows(traj, analytic=None):
    """One dict per grid time; ``analytic`` is the closed-form coherence or None."""
    rows = []
    for k, t in enumerate(traj.times):
        c = traj.coherence[k]
        a = None if analytic is None else complex(analytic[k])
        rows.append(
            {
                "t": t,
                "re_coh_num": c.real,
                "im_coh_num": c.imag,
                "abs_coh_num": abs(c),
                "re_coh_ana": None if a is None else a.real,
                "im_coh_ana": None if a is None else a.imag,
                "abs_coh_ana": None if a is None else abs(a),
                "pop_q0": traj.qubit_populations[k, 0],
                "pop_q1": traj.qubit_populations[k, 1],
                "pop_i0": traj.impurity_populations[k, 0],
                "pop_i1": traj.impurity_populations[k, 1],
                "trace_dev": traj.trace_deviation[k],
                "min_eig": traj.min_eigenvalue[k],
            }
        )
    return rows


def write_table(path, rows, columns, fmt_="csv"):
    """Write ``rows`` as CSV or as a JSON object of column lists."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt_ == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([fmt(row[c]) for c in columns])
    elif fmt_ == "json":
        data = {c: [_jsonable(row[c]) for row in rows] for c in columns}
        write_json(path, data)
    else:
        raise ValueError(f"unknown format {fmt_!r}")
    return path


def _jsonable(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path


def read_table(path):
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))
