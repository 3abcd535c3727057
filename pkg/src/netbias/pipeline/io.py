"""Edge lists, label files and record tables on disk.

Formats
-------
edge list
    one ``u v`` pair per line, whitespace separated; ``#`` starts a comment line.
labels
    CSV with header ``node_id,label``; label 1 is minority, 0 is majority.
records
    CSV with the columns in ``RECORD_COLUMNS``.
"""
from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field
from itertools import islice
from pathlib import Path

import numpy as np

from ..errors import InputError, ParseError
from ..graph import AttributedGraph
from ..metrics import MetricRecord

RECORD_COLUMNS = ("method", "h", "f", "n", "m", "sample_fraction", "k", "network_seed",
                  "sample_seed", "bias_topk", "log_ncgr_min", "log_ncgr_maj", "actual_nodes")
_INT_COLUMNS = {"n", "m", "k", "network_seed", "sample_seed", "actual_nodes"}


def fmt(x):
    """Six significant digits, no trailing noise; integers stay integers."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    out = f"{x:.6g}"
    return "0" if out == "-0" else out


def round6(x):
    return float(fmt(x))


@dataclass
class EdgeList:
    edges: np.ndarray          # internal ids, canonical (u < v), deduplicated
    external_ids: list         # external_ids[i] is the file's id for internal node i
    self_loops: int = 0
    duplicates: int = 0
    lines: int = 0
    index: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.external_ids)


def _sort_ids(ids):
    ids = list(ids)
    try:
        return sorted(ids, key=int)
    except ValueError:
        return sorted(ids)


# ids with a sign or a leading zero would not survive an int round trip
_NOT_PLAIN_INT = re.compile(r"(?:^|\s)(?:[+-]|0\d)")


def _read_int_pairs(path, chunk_lines=1_000_000):
    """Parse a file of plain integer pairs in chunks; None if any line doesn't fit."""
    blocks, lines = [], 0
    with open(path, encoding="utf-8") as fh:
        while True:
            chunk = list(islice(fh, chunk_lines))
            if not chunk:
                break
            body = [s for s in chunk if s.strip() and not s.lstrip().startswith("#")]
            text = "".join(body)
            if _NOT_PLAIN_INT.search(text):
                return None
            try:
                arr = np.array(text.split(), dtype=np.int64)
            except ValueError:
                return None
            if arr.size != 2 * len(body):
                return None
            blocks.append(arr.reshape(-1, 2))
            lines += len(body)
    pairs = np.concatenate(blocks) if blocks else np.empty((0, 2), dtype=np.int64)
    return pairs, lines


def _int_edge_list(pairs, lines):
    loops = pairs[:, 0] == pairs[:, 1]
    pairs = pairs[~loops]
    uniq_ids, inv = np.unique(pairs, return_inverse=True)
    arr = np.sort(inv.reshape(-1, 2), axis=1)
    edges = np.unique(arr, axis=0) if len(arr) else np.empty((0, 2), dtype=np.int64)
    ids = [str(x) for x in uniq_ids.tolist()]
    return EdgeList(edges.astype(np.int64), ids, int(loops.sum()), len(arr) - len(edges), lines,
                    {x: i for i, x in enumerate(ids)})


def load_edge_list(path):
    """Read an undirected edge list, dropping self-loops and duplicate edges.

    External ids are kept as strings and mapped onto ``0..n-1`` in numeric
    order when every id is an integer, lexicographic order otherwise.
    """
    path = Path(path)
    fast = _read_int_pairs(path)
    if fast is not None:
        return _int_edge_list(*fast)
    pairs = []
    self_loops = 0
    lines = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.split()
            if len(parts) != 2:
                raise ParseError(f"expected two node ids, got {len(parts)} fields", path, lineno)
            lines += 1
            a, b = parts
            if a == b:
                self_loops += 1
                continue
            pairs.append((a, b))
    ids = _sort_ids({x for p in pairs for x in p})
    index = {x: i for i, x in enumerate(ids)}
    if pairs:
        arr = np.array([(index[a], index[b]) for a, b in pairs], dtype=np.int64)
        arr.sort(axis=1)
        uniq = np.unique(arr, axis=0)
    else:
        uniq = np.empty((0, 2), dtype=np.int64)
    return EdgeList(uniq, ids, self_loops, len(pairs) - len(uniq), lines, index)


def write_edge_list(path, edges, header=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for h in header.splitlines():
                fh.write(f"# {h}\n")
        for u, v in np.asarray(edges).reshape(-1, 2).tolist():
            fh.write(f"{u} {v}\n")


def write_labels(path, node_ids, labels):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("node_id", "label"))
        for i, lab in zip(np.asarray(node_ids).tolist(), np.asarray(labels).tolist()):
            w.writerow((i, int(lab)))


def read_labels(path):
    """Return ``{external id: 0 or 1}`` from a ``node_id,label`` CSV."""
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].startswith("#"):
                continue
            if lineno == 1 and row[0].strip() == "node_id":
                continue
            if len(row) != 2:
                raise ParseError("expected node_id,label", path, lineno)
            node, lab = row[0].strip(), row[1].strip()
            if lab not in ("0", "1"):
                raise ParseError(f"label must be 0 or 1, got {lab!r}", path, lineno)
            if node in out:
                raise ParseError(f"node {node} labelled twice", path, lineno)
            out[node] = int(lab)
    return out


def load_graph(edges_path, labels_path):
    """Graph whose node set is the labels file; edges must use known ids.

    Returns ``(graph, external_ids)``.
    """
    labels = read_labels(labels_path)
    if not labels:
        raise InputError(f"{labels_path}: no labelled nodes")
    el = load_edge_list(edges_path)
    ids = _sort_ids(labels)
    index = {x: i for i, x in enumerate(ids)}
    unknown = [x for x in el.external_ids if x not in index]
    if unknown:
        raise InputError(f"{edges_path}: node {unknown[0]} has no label")
    remap = np.array([index[x] for x in el.external_ids], dtype=np.int64)
    edges = remap[el.edges] if len(el.edges) else el.edges
    graph = AttributedGraph.from_edges(len(ids), edges, [labels[x] for x in ids])
    return graph, ids


def save_graph(prefix, graph, external_ids=None, header=None):
    """Write ``<prefix>.edges`` and ``<prefix>.labels.csv``; returns both paths."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    ids = np.arange(graph.n) if external_ids is None else list(external_ids)
    ep = prefix.with_name(prefix.name + ".edges")
    lp = prefix.with_name(prefix.name + ".labels.csv")
    if external_ids is None:
        write_edge_list(ep, graph.edges, header)
    else:
        ext = np.asarray(ids, dtype=object)
        with open(ep, "w", encoding="utf-8", newline="\n") as fh:
            if header:
                for h in header.splitlines():
                    fh.write(f"# {h}\n")
            for u, v in graph.edges.tolist():
                fh.write(f"{ext[u]} {ext[v]}\n")
    write_labels(lp, ids, graph.labels)
    return ep, lp


def write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_records(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow([r.method if c == "method" else fmt(getattr(r, c)) for c in RECORD_COLUMNS])


def read_records(path):
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(RECORD_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ParseError(f"records file lacks columns {sorted(missing)}", path)
        for lineno, row in enumerate(reader, start=2):
            try:
                kw = {c: (row[c] if c == "method" else
                          int(row[c]) if c in _INT_COLUMNS else float(row[c]))
                      for c in RECORD_COLUMNS}
            except ValueError as exc:
                raise ParseError(str(exc), path, lineno) from None
            out.append(MetricRecord(**kw))
    return out
