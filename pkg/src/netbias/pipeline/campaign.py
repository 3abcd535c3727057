"""Seeded Monte-Carlo campaigns over generator, sampler and ranking settings.

The unit of work is one generated network: it is grown, ranked once, and
then sampled ``samples_per_network`` times per (method, sample fraction).
Every random stream is derived from the master seed and the task's
coordinates, so results do not depend on worker count or completion order.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from ..errors import CoverageError, InputError
from ..graph import MAJORITY, MINORITY, same_group_edge_fraction
from ..metrics import (EPSILON, ORIGINAL_RELEVANCE, MetricRecord, measure,
                       rank_by_centrality, relevance)
from ..netgen import GenParams, ccdf_at, group_degree_distribution, grow
from ..rng import derive_seed
from ..samplers import DEFAULT_TELEPORT, METHODS, SamplerParams, canonical_method, sample
from .io import write_json, write_records
from .plotdata import aggregate, emit_plot_data, write_rows, GROUP_KEYS, SUMMARY_VALUES

log = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    """Flat campaign description; see ``DEFAULT_CONFIG`` for the defaults."""

    n: int = 10_000
    m: int = 10
    h: list = field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    f: list = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.5])
    methods: list = field(default_factory=lambda: list(METHODS))
    teleport: float = DEFAULT_TELEPORT
    sample_fractions: list = field(default_factory=lambda: [0.1, 0.3])
    k: list = field(default_factory=lambda: [10, 50, 100, 200])
    networks_per_cell: int = 10
    samples_per_network: int = 10
    master_seed: int = 2017
    output: str = "results"
    workers: int = 1
    epsilon: float = EPSILON
    ncgr_mode: str = ORIGINAL_RELEVANCE
    shortfall: str = "truncate"
    headline_k: int = 100
    headline_fraction: float = 0.1
    headline_f: float = 0.2
    # optional {"edges": path, "labels": path}; switches to empirical evaluation
    empirical: dict | None = None

    def __post_init__(self):
        self.methods = [canonical_method(x) for x in self.methods]
        if len(set(self.methods)) != len(self.methods):
            raise InputError("duplicate sampling methods")
        if self.networks_per_cell < 1 or self.samples_per_network < 1:
            raise InputError("replication counts must be at least 1")
        for fr in self.sample_fractions:
            if not 0.0 < fr <= 1.0:
                raise InputError(f"sample fraction {fr} outside (0, 1]")
        if any(int(k) < 1 for k in self.k) or not self.k:
            raise InputError("k values must be positive integers")
        self.k = [int(k) for k in self.k]
        if not 0.0 <= self.teleport < 1.0:
            raise InputError("teleport must lie in [0, 1)")
        if self.workers < 1:
            raise InputError("workers must be at least 1")
        if self.empirical is None:
            for h in self.h:
                for f in self.f:
                    GenParams(self.n, self.m, f, h, 0, self.shortfall)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise InputError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self):
        return asdict(self)


DEFAULT_CONFIG = ExperimentConfig()


def sample_size(n, fraction):
    return int(np.floor(fraction * n + 0.5))


@dataclass
class CampaignResult:
    records: list
    skipped: list
    degree_rows: list = field(default_factory=list)


def _network_seed(cfg, h, f, rep):
    return derive_seed(cfg.master_seed, "network", h, f, rep)


def _sample_seed(cfg, network_seed, method, fraction, rep):
    return derive_seed(cfg.master_seed, "sample", network_seed, method, fraction, rep)


def _score_samples(cfg, graph, network_seed, h, f, m, cells):
    """Sample ``graph`` for every (method, fraction) in ``cells`` and score each k."""
    # samples reuse the network's tie seed so an identity sample ranks identically
    tie_seed = derive_seed(network_seed, "rank")
    original = rank_by_centrality(graph, tie_seed)
    rel = relevance(original)
    records, skipped = [], []
    for method, fraction in cells:
        k_nodes = sample_size(graph.n, fraction)
        for rep in range(cfg.samples_per_network):
            seed = _sample_seed(cfg, network_seed, method, fraction, rep)
            try:
                sg = sample(graph, SamplerParams(method, k_nodes, seed, cfg.teleport))
            except CoverageError as exc:
                skipped.append({"method": method, "h": h, "f": f, "sample_fraction": fraction,
                                "network_seed": network_seed, "sample_seed": seed,
                                "reason": str(exc)})
                continue
            ranked = rank_by_centrality(sg, tie_seed)
            for k in cfg.k:
                vals = measure(original, rel, ranked, k, cfg.epsilon, cfg.ncgr_mode)
                records.append(MetricRecord(
                    method=method, h=h, f=f, n=graph.n, m=m, sample_fraction=fraction, k=k,
                    network_seed=network_seed, sample_seed=seed,
                    actual_nodes=sg.n, **vals))
    return records, skipped


def _network_task(args):
    cfg, h, f, rep, cells = args
    seed = _network_seed(cfg, h, f, rep)
    result = grow(GenParams(cfg.n, cfg.m, f, h, seed, cfg.shortfall))
    graph = result.graph
    records, skipped = _score_samples(cfg, graph, seed, h, f, cfg.m, cells)
    dist = group_degree_distribution(graph)
    return records, skipped, dist, result.forced_edges, result.missing_edges


def feasible_cells(cfg, n):
    """Split (method, fraction) pairs into feasible ones and skip-manifest entries."""
    cells, skipped = [], []
    for method in cfg.methods:
        for fraction in cfg.sample_fractions:
            k_nodes = sample_size(n, fraction)
            if 1 <= k_nodes <= n:
                cells.append((method, fraction))
            else:
                log.warning("skipping %s at fraction %s: K=%d infeasible for N=%d",
                            method, fraction, k_nodes, n)
                skipped.append({"method": method, "sample_fraction": fraction,
                                "reason": f"K={k_nodes} infeasible for N={n}"})
    return cells, skipped


def _run_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _mean_ccdf_rows(dists, h, f):
    rows = []
    for g in (MINORITY, MAJORITY):
        grid = np.unique(np.concatenate([d[g][:, 0] for d in dists]))
        curves = np.array([ccdf_at(d[g], grid) for d in dists])
        mean = curves.mean(axis=0)
        se = curves.std(axis=0, ddof=1) / np.sqrt(len(dists)) if len(dists) > 1 else np.zeros_like(mean)
        for deg, mu, s in zip(grid.tolist(), mean.tolist(), se.tolist()):
            rows.append({"h": h, "f": f, "group": "minority" if g == MINORITY else "majority",
                         "degree": int(deg), "mean": mu, "stderr": s, "count": len(dists)})
    return rows


def run_synthetic_campaign(cfg, workers=None):
    """Generate, sample and score every grid cell of ``cfg``."""
    workers = cfg.workers if workers is None else workers
    cells, skipped = feasible_cells(cfg, cfg.n)
    tasks = [(cfg, h, f, rep, cells)
             for h in cfg.h for f in cfg.f for rep in range(cfg.networks_per_cell)]
    log.info("campaign: %d networks, %d sampler cells each", len(tasks), len(cells))
    outputs = _run_tasks(_network_task, tasks, workers)
    records, degree_rows = [], []
    forced = missing = 0
    by_cell = {}
    for task, (recs, skips, dist, nf, nm) in zip(tasks, outputs):
        records.extend(recs)
        skipped.extend(skips)
        forced += nf
        missing += nm
        by_cell.setdefault((task[1], task[2]), []).append(dist)
    for (h, f), dists in by_cell.items():
        degree_rows.extend(_mean_ccdf_rows(dists, h, f))
    if forced or missing:
        log.info("generator diagnostics: %d forced edges, %d unplaced edges", forced, missing)
    order = {m: i for i, m in enumerate(cfg.methods)}
    records.sort(key=lambda r: (order[r.method], r.h, r.f, r.sample_fraction, r.k))
    return CampaignResult(records, skipped, degree_rows)


def evaluate_empirical(graph, methods, fractions, k_list, samples, master_seed,
                       teleport=DEFAULT_TELEPORT, epsilon=EPSILON, mode=ORIGINAL_RELEVANCE):
    """Sample an observed network; ``h``/``f`` columns hold measured mixing and minority share."""
    sizes = graph.group_sizes()
    if sizes[MINORITY] == 0 or sizes[MAJORITY] == 0:
        raise InputError("empirical graph must contain both groups")
    cfg = ExperimentConfig(n=graph.n, m=0, h=[], f=[], methods=list(methods),
                           teleport=teleport, sample_fractions=list(fractions), k=list(k_list),
                           networks_per_cell=1, samples_per_network=samples,
                           master_seed=master_seed, epsilon=epsilon, ncgr_mode=mode,
                           empirical={})
    h = same_group_edge_fraction(graph)
    f = sizes[MINORITY] / graph.n
    cells, skipped = feasible_cells(cfg, graph.n)
    records, more = _score_samples(cfg, graph, 0, h, f, 0, cells)
    return CampaignResult(records, skipped + more)


def write_campaign(result, cfg, out_dir=None):
    """Write records, aggregates, skip manifest and figure tables. Returns the paths."""
    out = Path(out_dir or cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / "records.csv", out / "aggregate.csv", out / "skipped.json"]
    if not result.records:
        raise InputError("campaign produced no records")
    write_records(paths[0], result.records)
    agg = aggregate(result.records)
    cols = list(GROUP_KEYS) + ["count"] + [f"{v}_{s}" for v in SUMMARY_VALUES
                                           for s in ("mean", "stderr")]
    write_rows(paths[1], agg, cols)
    write_json(paths[2], {"skipped": result.skipped})
    paths += emit_figures(result, cfg, out)
    return paths


def _pick(values, preferred):
    values = sorted(set(values))
    for v in values:
        if np.isclose(v, preferred):
            return v
    return values[0]


def emit_figures(result, cfg, out):
    recs = result.records
    paths = []
    k = cfg.headline_k if cfg.headline_k in {r.k for r in recs} else max(r.k for r in recs)
    f = _pick([r.f for r in recs], cfg.headline_f)
    frac = _pick([r.sample_fraction for r in recs], cfg.headline_fraction)

    # top-k minority share against sample size; x = 1.0 is the full network
    rows = [{"method": r.method, "h": r.h, "f": r.f, "k": r.k,
             "sample_fraction": r.sample_fraction, "share": r.observed_topk} for r in recs]
    seen = set()
    for r in (recs if not any(np.isclose(x, 1.0) for x in cfg.sample_fractions) else ()):
        key = (r.method, r.h, r.f, r.k, r.network_seed)
        if key not in seen:
            seen.add(key)
            rows.append({"method": r.method, "h": r.h, "f": r.f, "k": r.k,
                         "sample_fraction": 1.0, "share": r.expected_topk})
    paths += emit_plot_data(rows, out, "fig2_topk_share", "sample_fraction", "h", "share",
                            panel="method", filters={"k": k, "f": f})
    paths += emit_plot_data(recs, out, "fig3_minority_log_ncgr", "f", "method", "log_ncgr_min",
                            panel="h", filters={"k": k, "sample_fraction": frac})
    for value, tag in (("log_ncgr_min", "minority"), ("log_ncgr_maj", "majority")):
        paths += emit_plot_data(recs, out, f"fig4_log_ncgr_{tag}", "sample_fraction", "k", value,
                                panel=("method", "h"), filters={"f": f})
    if result.degree_rows:
        path = out / "fig1_degree_ccdf.csv"
        write_rows(path, result.degree_rows,
                   ("h", "f", "group", "degree", "mean", "stderr", "count"))
        paths.append(path)
    return paths
