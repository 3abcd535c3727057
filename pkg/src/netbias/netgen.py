"""Preferential attachment growth with a tunable homophily parameter.

Each arriving node links to ``m`` distinct existing nodes. Target ``j`` is
drawn with weight ``h_eff * (degree(j) + 1)`` where ``h_eff`` is ``h`` when
the two labels match and ``1 - h`` otherwise. Targets are picked one at a
time without replacement, renormalising after every pick.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import MAJORITY, MINORITY, AttributedGraph
from .rng import py_rng

SHORTFALL_POLICIES = ("truncate", "force")

# Rejection draws per pick before switching to an explicit scan.
_MAX_REJECTIONS = 32


@dataclass(frozen=True)
class GenParams:
    n: int = 10_000
    m: int = 10
    minority_fraction: float = 0.2
    h: float = 0.5
    seed: int = 0
    shortfall: str = "truncate"

    def __post_init__(self):
        if not 0.0 <= self.h <= 1.0:
            raise InputError(f"homophily h must lie in [0, 1], got {self.h}")
        if not 0.0 < self.minority_fraction <= 0.5:
            raise InputError(f"minority fraction must lie in (0, 0.5], got {self.minority_fraction}")
        if self.m < 1:
            raise InputError("m must be at least 1")
        if self.n <= self.m:
            raise InputError("n must exceed m")
        if self.shortfall not in SHORTFALL_POLICIES:
            raise InputError(f"shortfall must be one of {SHORTFALL_POLICIES}")

    @property
    def minority_count(self):
        # round half up, not banker's rounding
        return int(math.floor(self.minority_fraction * self.n + 0.5))


@dataclass(frozen=True)
class GrowthResult:
    graph: AttributedGraph
    forced_edges: int
    missing_edges: int


def minority_labels(params, rng):
    labels = [MINORITY] * params.minority_count + [MAJORITY] * (params.n - params.minority_count)
    rng.shuffle(labels)
    return labels


def grow(params):
    """Grow one network and report generation diagnostics.

    ``missing_edges`` counts links an arriving node could not place because
    fewer than ``m`` existing nodes had positive weight (only possible at
    ``h`` = 0 or 1). Under ``shortfall="force"`` those links instead go to
    uniformly chosen zero-weight nodes and are counted in ``forced_edges``.
    """
    rng = py_rng(params.seed)
    n, m, h = params.n, params.m, params.h
    labels = minority_labels(params, rng)

    deg = [0] * n
    members = ([], [])     # existing nodes per group
    endpoints = ([], [])   # node j repeated deg[j] times, per group
    for i in range(m):
        members[labels[i]].append(i)

    src, dst = [], []
    forced = missing = 0
    rand, randrange = rng.random, rng.randrange

    for i in range(m, n):
        g = labels[i]
        weight = [0.0, 0.0]
        weight[g] = h
        weight[1 - g] = 1.0 - h
        mass = [weight[c] * (len(members[c]) + len(endpoints[c])) for c in (0, 1)]
        total = mass[0] + mass[1]
        positive = sum(len(members[c]) for c in (0, 1) if weight[c] > 0.0)

        picked = set()
        targets = []
        explicit = False
        while len(targets) < min(m, positive):
            t = -1
            if not explicit:
                for _ in range(_MAX_REJECTIONS):
                    c = 0 if rand() * total < mass[0] else 1
                    pool = members[c]
                    r = randrange(len(pool) + len(endpoints[c]))
                    cand = pool[r] if r < len(pool) else endpoints[c][r - len(pool)]
                    if cand not in picked:
                        t = cand
                        break
                else:
                    explicit = True
            if explicit:
                t = _explicit_pick(members, labels, weight, deg, picked, rng)
            picked.add(t)
            targets.append(t)

        short = m - len(targets)
        if short:
            if params.shortfall == "force":
                rest = [j for c in (0, 1) for j in members[c] if j not in picked]
                rest.sort()
                for j in rng.sample(rest, min(short, len(rest))):
                    targets.append(j)
                    forced += 1
                missing += max(0, short - len(rest))
            else:
                missing += short

        for t in targets:
            src.append(i)
            dst.append(t)
            deg[t] += 1
            endpoints[labels[t]].append(t)
        deg[i] += len(targets)
        endpoints[g].extend([i] * len(targets))
        members[g].append(i)

    edges = np.column_stack((np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)))
    graph = AttributedGraph.from_edges(n, edges, labels)
    return GrowthResult(graph, forced, missing)


def _explicit_pick(members, labels, weight, deg, picked, rng):
    cands = sorted(j for c in (0, 1) if weight[c] > 0.0 for j in members[c] if j not in picked)
    return rng.choices(cands, weights=[weight[labels[j]] * (deg[j] + 1) for j in cands])[0]


def generate(params):
    """Grow a homophilic preferential-attachment network (see ``grow``)."""
    return grow(params).graph


def group_ccdf(graph, group):
    """Rows ``(degree, share of the group with at least that degree)``."""
    degrees = np.sort(graph.degrees[graph.labels == group])
    if degrees.size == 0:
        raise InputError(f"group {group} is empty")
    values = np.unique(degrees)
    frac = 1.0 - np.searchsorted(degrees, values, side="left") / len(degrees)
    return np.column_stack((values, frac))


def group_degree_distribution(graph):
    """Minority and majority degree CCDFs, keyed by ``MINORITY`` / ``MAJORITY``."""
    return {g: group_ccdf(graph, g) for g in (MINORITY, MAJORITY)}


def ccdf_at(ccdf, degrees):
    """Evaluate a step CCDF at arbitrary integer degrees."""
    values, frac = ccdf[:, 0], ccdf[:, 1]
    idx = np.searchsorted(values, degrees, side="left")
    ext = np.append(frac, 0.0)
    return ext[idx]


def ccdf_gap(dist):
    """Largest pointwise gap between the minority and majority CCDFs."""
    a, b = dist[MINORITY], dist[MAJORITY]
    grid = np.union1d(a[:, 0], b[:, 0])
    return float(np.max(np.abs(ccdf_at(a, grid) - ccdf_at(b, grid))))
