"""Turn an external edge list plus a node attribute file into an AttributedGraph."""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegenerateGraphError, InputError, ParseError
from ..graph import MAJORITY, MINORITY, AttributedGraph, same_group_edge_fraction
from .io import _sort_ids, load_edge_list

log = logging.getLogger(__name__)

BINARY = "binary"
NUMERIC = "numeric"
MISSING_TOKENS = frozenset({"", "na", "nan", "null", "none"})
_SPLIT = re.compile(r"[,\t ]+")


@dataclass(frozen=True)
class IngestSpec:
    edges: Path
    attributes: Path
    kind: str = BINARY
    quantile: float | None = None
    missing: frozenset = MISSING_TOKENS
    id_column: int = 0
    value_column: int = 1
    include_isolated: bool = True

    def __post_init__(self):
        if self.kind not in (BINARY, NUMERIC):
            raise InputError(f"attribute kind must be {BINARY!r} or {NUMERIC!r}")
        if self.kind == NUMERIC and not (self.quantile is not None and 0.0 < self.quantile < 1.0):
            raise InputError("numeric attributes need a quantile q in (0, 1)")
        for p in (self.edges, self.attributes):
            if not Path(p).is_file():
                raise InputError(f"no such file: {p}")


@dataclass
class IngestResult:
    graph: AttributedGraph
    external_ids: list
    threshold: float | None
    dropped_nodes: int
    dropped_edges: int
    self_loops: int
    duplicate_edges: int

    def summary(self):
        g = self.graph
        sizes = g.group_sizes()
        share = sizes[MINORITY] / g.n
        try:
            same = same_group_edge_fraction(g)
        except DegenerateGraphError:
            same = float("nan")
        return {
            "nodes": g.n,
            "edges": g.num_edges,
            "minority_nodes": sizes[MINORITY],
            "majority_nodes": sizes[MAJORITY],
            "minority_share": share,
            "same_group_edge_fraction": same,
            # label-blind mixing baseline f^2 + (1 - f)^2
            "random_mixing_same_group_fraction": share ** 2 + (1 - share) ** 2,
            "threshold": self.threshold,
            "dropped_unlabeled_nodes": self.dropped_nodes,
            "dropped_edges": self.dropped_edges,
            "self_loops_dropped": self.self_loops,
            "duplicate_edges_dropped": self.duplicate_edges,
        }


def nearest_rank_quantile(values, q):
    """Type-1 empirical quantile: the ``ceil(q n)``-th smallest value."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise InputError("no values to take a quantile of")
    if not 0.0 < q < 1.0:
        raise InputError("quantile must lie in (0, 1)")
    rank = max(1, math.ceil(round(q * v.size, 9)))
    return float(v[rank - 1])


def binarize_by_quantile(values, q):
    """Values strictly above the ``q`` quantile become minority (1).

    Returns ``(labels, threshold)``.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InputError("no values to binarize")
    if np.all(v == v[0]):
        raise DegenerateGraphError("all attribute values are equal; cannot split into groups")
    t = nearest_rank_quantile(v, q)
    return np.where(v > t, MINORITY, MAJORITY).astype(np.int8), t


def read_attributes(path, id_column=0, value_column=1, missing=MISSING_TOKENS):
    """Map external id -> raw value string; missing values are skipped.

    Fields are tab separated when a line contains a tab, otherwise split
    on commas and spaces. A first line whose
    value field is not numeric is treated as a header.
    """
    missing = {m.lower() for m in missing}
    out = {}
    width = max(id_column, value_column) + 1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.rstrip("\n\r")
            if not s.strip() or s.lstrip().startswith("#"):
                continue
            # tab-separated rows may carry free text with spaces in other columns
            parts = s.split("\t") if "\t" in s else _SPLIT.split(s.strip())
            if len(parts) < width:
                parts += [""] * (width - len(parts))
            node, raw = parts[id_column].strip(), parts[value_column].strip()
            if lineno == 1 and raw.lower() not in missing and not _is_number(raw):
                continue
            if raw.lower() in missing:
                continue
            if not _is_number(raw):
                raise ParseError(f"non-numeric attribute value {raw!r}", path, lineno)
            if node in out:
                raise ParseError(f"node {node} has two attribute values", path, lineno)
            out[node] = raw
    return out


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def ingest(spec):
    el = load_edge_list(spec.edges)
    attrs = read_attributes(spec.attributes, spec.id_column, spec.value_column, spec.missing)
    in_edges = set(el.external_ids)
    if spec.include_isolated:
        keep_ids = _sort_ids(attrs)
    else:
        keep_ids = _sort_ids(in_edges.intersection(attrs))
    dropped_nodes = len(in_edges.difference(attrs))
    if not keep_ids:
        raise InputError("no labelled nodes left after dropping unlabeled ones")

    values = np.array([float(attrs[x]) for x in keep_ids])
    threshold = None
    if spec.kind == BINARY:
        if not np.isin(values, (0.0, 1.0)).all():
            raise InputError("binary attributes must be 0 or 1")
        labels = values.astype(np.int8)
    else:
        labels, threshold = binarize_by_quantile(values, spec.quantile)

    index = {x: i for i, x in enumerate(keep_ids)}
    remap = np.array([index.get(x, -1) for x in el.external_ids], dtype=np.int64)
    if len(el.edges):
        mapped = remap[el.edges]
        ok = (mapped >= 0).all(axis=1)
        edges = mapped[ok]
    else:
        ok = np.zeros(0, dtype=bool)
        edges = el.edges
    dropped_edges = int(len(ok) - ok.sum())
    if dropped_nodes:
        log.info("dropped %d unlabeled nodes and %d incident edges", dropped_nodes, dropped_edges)
    graph = AttributedGraph.from_edges(len(keep_ids), edges, labels)
    return IngestResult(graph, keep_ids, threshold, dropped_nodes, dropped_edges,
                        el.self_loops, el.duplicates)
