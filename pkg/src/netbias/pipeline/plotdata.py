"""Aggregate record tables into plot-ready CSV files (mean and standard error)."""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from pathlib import Path

import numpy as np

from ..errors import InputError
from ..metrics import MetricRecord
from .io import fmt

RECORD_KEYS = tuple(MetricRecord.__dataclass_fields__) + ("ncgr_error",)
SUMMARY_VALUES = ("bias_topk", "log_ncgr_min", "log_ncgr_maj", "ncgr_error",
                  "expected_topk", "observed_topk")
GROUP_KEYS = ("method", "h", "f", "sample_fraction", "k")


def _get(row, key):
    return row[key] if isinstance(row, dict) else getattr(row, key)


def _check_keys(rows, keys):
    first = rows[0]
    known = set(first) if isinstance(first, dict) else set(RECORD_KEYS)
    for key in keys:
        if key not in known:
            raise InputError(f"unknown grouping key {key!r}")


def mean_stderr(values):
    v = np.asarray(values, dtype=float)
    v = v[~np.isnan(v)]
    if v.size == 0:
        return float("nan"), float("nan")
    if v.size == 1:
        return float(v[0]), 0.0
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))


def _sort_key(value):
    return (0, value, "") if isinstance(value, (int, float, np.number)) else (1, 0, str(value))


def group_rows(rows, keys):
    groups = defaultdict(list)
    for r in rows:
        groups[tuple(_get(r, k) for k in keys)].append(r)
    return dict(sorted(groups.items(), key=lambda kv: tuple(_sort_key(v) for v in kv[0])))


def aggregate(records, keys=GROUP_KEYS, values=SUMMARY_VALUES):
    """One summary row per distinct ``keys`` combination."""
    rows = list(records)
    if not rows:
        raise InputError("nothing to aggregate")
    _check_keys(rows, tuple(keys) + tuple(values))
    out = []
    for key, members in group_rows(rows, keys).items():
        row = dict(zip(keys, key))
        row["count"] = len(members)
        for v in values:
            row[f"{v}_mean"], row[f"{v}_stderr"] = mean_stderr([_get(r, v) for r in members])
        out.append(row)
    return out


def write_rows(path, rows, columns):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], str) else fmt(r[c]) for c in columns])


def _filter(rows, filters):
    if not filters:
        return rows
    return [r for r in rows if all(_close(_get(r, k), v) for k, v in filters.items())]


def _close(a, b):
    if isinstance(a, str) or isinstance(b, str):
        return a == b
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def _label(value):
    return value if isinstance(value, str) else fmt(value)


def emit_plot_data(records, out_dir, prefix, x, series, value, panel=(), filters=None):
    """Write one CSV per ``panel`` value with columns ``x, series, mean, stderr, count``.

    ``panel`` is a key or tuple of keys; filenames are
    ``<prefix>_<key>-<value>[_<key>-<value>].csv``. Returns the written paths.
    """
    rows = list(records)
    if isinstance(panel, str):
        panel = (panel,)
    panel = tuple(panel)
    if not rows:
        raise InputError("no records to plot")
    _check_keys(rows, (x, series, value) + panel + tuple(filters or ()))
    rows = _filter(rows, filters)
    if not rows:
        raise InputError(f"filter {filters} selects no records")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for pkey, members in (group_rows(rows, panel).items() if panel else [((), rows)]):
        table = []
        for (xv, sv), pts in group_rows(members, (x, series)).items():
            mean, se = mean_stderr([_get(r, value) for r in pts])
            table.append({x: xv, series: sv, "mean": mean, "stderr": se, "count": len(pts)})
        name = "_".join([prefix] + [f"{k}-{_label(v)}" for k, v in zip(panel, pkey)])
        path = out_dir / f"{name}.csv"
        write_rows(path, table, (x, series, "mean", "stderr", "count"))
        paths.append(path)
    return paths
