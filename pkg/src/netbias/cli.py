"""Command line entry point: ``netbias <command> ...``.

Exit codes: 0 success, 1 input or parse error, 2 infeasible parameters,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import ConsistencyError, InfeasibleParameterError, InputError
from .graph import partial_subgraph
from .metrics import (EPSILON, ORIGINAL_RELEVANCE, SAMPLE_RELEVANCE, measure, rank_by_centrality,
                      relevance)
from .netgen import GenParams, grow
from .pipeline.campaign import (ExperimentConfig, evaluate_empirical, run_synthetic_campaign,
                                write_campaign)
from .pipeline.ingest import BINARY, MISSING_TOKENS, NUMERIC, IngestSpec, ingest
from .pipeline.io import (fmt, load_edge_list, load_graph, read_records, round6, save_graph,
                          write_edge_list, write_json, write_labels)
from .samplers import DEFAULT_TELEPORT, METHODS, SamplerParams, sample
from .stats import RESPONSES, fit_table, format_table

log = logging.getLogger("netbias")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _prefix_path(prefix, suffix):
    p = Path(prefix)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p.with_name(p.name + suffix)


def cmd_generate(args):
    params = GenParams(n=args.n, m=args.m, minority_fraction=args.f, h=args.h,
                       seed=args.seed, shortfall=args.shortfall)
    result = grow(params)
    header = f"netbias generate n={params.n} m={params.m} f={params.minority_fraction} h={params.h} seed={params.seed}"
    save_graph(args.out, result.graph, header=header)
    write_json(_prefix_path(args.out, ".gen.json"), {
        "n": params.n, "m": params.m, "minority_fraction": params.minority_fraction,
        "h": params.h, "seed": params.seed, "shortfall": params.shortfall,
        "edges": result.graph.num_edges, "forced_edges": result.forced_edges,
        "missing_edges": result.missing_edges,
    })
    return 0


def _sample_size_arg(args, n):
    if args.k is not None:
        return args.k
    return int(np.floor(args.fraction * n + 0.5))


def cmd_sample(args):
    graph, ids = load_graph(args.edges, args.labels)
    k = _sample_size_arg(args, graph.n)
    sg = sample(graph, SamplerParams(args.method, k, args.seed, args.teleport))
    ext = np.asarray(ids, dtype=object)
    write_edge_list(_prefix_path(args.out, ".edges"),
                    [(ext[u], ext[v]) for u, v in sg.edges.tolist()],
                    header=f"netbias sample method={sg.provenance.method} K={k} seed={args.seed}")
    write_labels(_prefix_path(args.out, ".nodes.csv"), ext[sg.node_ids], sg.labels)
    p = sg.provenance
    write_json(_prefix_path(args.out, ".sample.json"), {
        "method": p.method, "requested_k": p.requested_k, "actual_nodes": p.actual_nodes,
        "seed": p.seed, "edges": sg.num_edges, "teleport": args.teleport,
    })
    return 0


def _read_sample(graph, ids, nodes_path, edges_path):
    index = {x: i for i, x in enumerate(ids)}
    nodes = []
    with open(nodes_path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "node_id" or row[0].startswith("#"):
                continue
            if row[0] not in index:
                raise InputError(f"{nodes_path}: node {row[0]} not in the original graph")
            nodes.append(index[row[0]])
    el = load_edge_list(edges_path)
    edges = [(index[el.external_ids[u]], index[el.external_ids[v]]) for u, v in el.edges.tolist()
             if el.external_ids[u] in index and el.external_ids[v] in index]
    if len(edges) != len(el.edges):
        raise InputError(f"{edges_path}: edge references a node outside the original graph")
    return partial_subgraph(graph, nodes, edges)


def cmd_evaluate(args):
    graph, ids = load_graph(args.edges, args.labels)
    sg = _read_sample(graph, ids, args.sample_nodes, args.sample_edges)
    original = rank_by_centrality(graph, args.tie_seed)
    ranked = rank_by_centrality(sg, args.tie_seed)
    rel = relevance(original)
    rows = []
    for k in args.k:
        vals = measure(original, rel, ranked, k, args.epsilon, args.mode)
        rows.append({"k": k, **{key: round6(v) if isinstance(v, float) else v
                                for key, v in vals.items()}})
    out = {"original_nodes": graph.n, "sample_nodes": sg.n, "sample_edges": sg.num_edges,
           "tie_seed": args.tie_seed, "epsilon": args.epsilon, "mode": args.mode,
           "metrics": rows}
    if args.out:
        write_json(args.out, out)
    else:
        print(json.dumps(out, indent=2, sort_keys=True))
    return 0


_CONFIG_FLAGS = ("n", "m", "master_seed", "workers", "output", "networks_per_cell",
                 "samples_per_network")


def cmd_campaign(args):
    cfg_data = {}
    if args.config:
        cfg_data = ExperimentConfig.from_json(args.config).to_dict()
    for key in _CONFIG_FLAGS:
        val = getattr(args, key)
        if val is not None:
            cfg_data[key] = val
    cfg = ExperimentConfig.from_dict(cfg_data)
    if cfg.empirical:
        graph, _ = load_graph(cfg.empirical["edges"], cfg.empirical["labels"])
        result = evaluate_empirical(graph, cfg.methods, cfg.sample_fractions, cfg.k,
                                    cfg.samples_per_network, cfg.master_seed, cfg.teleport,
                                    cfg.epsilon, cfg.ncgr_mode)
    else:
        result = run_synthetic_campaign(cfg)
    paths = write_campaign(result, cfg)
    log.info("wrote %d files to %s", len(paths), cfg.output)
    return 0


def cmd_ingest(args):
    spec = IngestSpec(Path(args.edges), Path(args.attributes), args.kind, args.quantile,
                      frozenset(MISSING_TOKENS | set(args.missing)), args.id_column,
                      args.value_column, args.include_isolated)
    res = ingest(spec)
    save_graph(args.out, res.graph, header=f"netbias ingest of {Path(args.edges).name}")
    with open(_prefix_path(args.out, ".idmap.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("node_id", "external_id"))
        for i, x in enumerate(res.external_ids):
            w.writerow((i, x))
    summary = {k: (round6(v) if isinstance(v, float) else v) for k, v in res.summary().items()}
    write_json(_prefix_path(args.out, ".summary.json"), summary)
    return 0


def cmd_regress(args):
    records = read_records(args.records)
    present = [m for m in METHODS if any(r.method == m for r in records)]
    if not present:
        raise InputError(f"{args.records}: no records")
    responses = RESPONSES if args.response == "both" else (args.response,)
    results = fit_table(records, present, responses)
    text = format_table(results, present, responses)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(str(args.out) + ".txt").write_text(text, encoding="utf-8")
        with open(str(args.out) + ".csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("method", "response", "term", "coefficient", "std_error", "t", "stars",
                        "r_squared", "n_obs"))
            for (method, kind), res in results.items():
                for j, term in enumerate(res.columns):
                    w.writerow((method, kind, term, fmt(res.coefficients[j]),
                                fmt(res.standard_errors[j]), fmt(res.t_stats[j]),
                                res.stars(term), fmt(res.r_squared), res.n_obs))
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="netbias", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="grow a homophilic preferential-attachment network")
    g.add_argument("--n", type=int, default=10_000)
    g.add_argument("--m", type=int, default=10)
    g.add_argument("--f", type=float, default=0.2, help="minority fraction")
    g.add_argument("--h", type=float, required=True, help="homophily in [0, 1]")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--shortfall", choices=("truncate", "force"), default="truncate")
    g.add_argument("--out", required=True, help="output prefix")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sample", help="draw one sample from a graph")
    s.add_argument("--edges", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--method", required=True, choices=METHODS + ("random_walk",))
    size = s.add_mutually_exclusive_group(required=True)
    size.add_argument("--k", type=int)
    size.add_argument("--fraction", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--teleport", type=float, default=DEFAULT_TELEPORT)
    s.add_argument("--out", required=True, help="output prefix")
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("evaluate", help="score a sample against its original graph")
    e.add_argument("--edges", required=True)
    e.add_argument("--labels", required=True)
    e.add_argument("--sample-nodes", required=True)
    e.add_argument("--sample-edges", required=True)
    e.add_argument("--k", type=_int_list, default=[100])
    e.add_argument("--tie-seed", type=int, default=0)
    e.add_argument("--epsilon", type=float, default=EPSILON)
    e.add_argument("--mode", choices=(ORIGINAL_RELEVANCE, SAMPLE_RELEVANCE),
                   default=ORIGINAL_RELEVANCE)
    e.add_argument("--out", help="metrics JSON path (stdout if omitted)")
    e.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("campaign", help="run a seeded experiment grid")
    c.add_argument("--config", help="JSON config; flags below override its keys")
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--master-seed", type=int)
    c.add_argument("--workers", type=int)
    c.add_argument("--output")
    c.add_argument("--networks-per-cell", type=int)
    c.add_argument("--samples-per-network", type=int)
    c.set_defaults(func=cmd_campaign)

    i = sub.add_parser("ingest", help="build a labelled graph from external files")
    i.add_argument("--edges", required=True)
    i.add_argument("--attributes", required=True)
    i.add_argument("--kind", choices=(BINARY, NUMERIC), default=BINARY)
    i.add_argument("--quantile", type=float)
    i.add_argument("--missing", nargs="*", default=[], help="extra tokens meaning 'no value'")
    i.add_argument("--id-column", type=int, default=0)
    i.add_argument("--value-column", type=int, default=1)
    i.add_argument("--include-isolated", action=argparse.BooleanOptionalAction, default=True)
    i.add_argument("--out", required=True, help="output prefix")
    i.set_defaults(func=cmd_ingest)

    r = sub.add_parser("regress", help="fit the bias regressions on a records CSV")
    r.add_argument("--records", required=True)
    r.add_argument("--response", choices=RESPONSES + ("both",), default="both")
    r.add_argument("--out", help="output prefix for .txt and .csv (stdout if omitted)")
    r.set_defaults(func=cmd_regress)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InfeasibleParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
