"""Node importance over the transmitted subgraph and the UEP split.

Importance blends degree centrality (local influence) with exact unweighted
betweenness centrality over unordered node pairs (bridging role), each
min-max normalized over the subgraph. The SNR-dependent threshold policy
decides which node ids the channel code protects.
"""

from dataclasses import dataclass, field

import numpy as np

from .kg import NodeId
from .semgraph import Mcsg


def _undirected_adjacency(mcsg: Mcsg) -> dict[NodeId, set[NodeId]]:
    # parallel relations between the same pair collapse to one adjacency
    adj: dict[NodeId, set[NodeId]] = {n: set() for n in mcsg.nodes}
    for t in mcsg.edges:
        if t.subject != t.object:
            adj[t.subject].add(t.object)
            adj[t.object].add(t.subject)
    return adj


def degree_centrality(mcsg: Mcsg) -> dict[NodeId, int]:
    adj = _undirected_adjacency(mcsg)
    return {n: len(adj[n]) for n in mcsg.nodes}


def betweenness_centrality(mcsg: Mcsg) -> dict[NodeId, float]:
    """Exact betweenness, unweighted shortest paths, each unordered pair
    counted once. Brandes accumulation; endpoints excluded."""
    adj = _undirected_adjacency(mcsg)
    bc = {n: 0.0 for n in mcsg.nodes}
    for s in mcsg.nodes:
        stack: list[NodeId] = []
        preds: dict[NodeId, list[NodeId]] = {v: [] for v in mcsg.nodes}
        sigma = {v: 0 for v in mcsg.nodes}
        dist = {v: -1 for v in mcsg.nodes}
        sigma[s] = 1
        dist[s] = 0
        queue = [s]
        while queue:
            v = queue.pop(0)
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = {v: 0.0 for v in mcsg.nodes}
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    # each unordered pair was visited from both endpoints
    return {n: v / 2.0 for n, v in bc.items()}


def _minmax(values: dict[NodeId, float]) -> dict[NodeId, float]:
    if not values:
        return {}
    lo = min(values.values())
    hi = max(values.values())
    if hi == lo:
        return {n: 1.0 for n in values}
    return {n: (v - lo) / (hi - lo) for n, v in values.items()}


@dataclass(frozen=True)
class ThresholdPolicy:
    """Piecewise-linear SNR(dB) -> protection threshold, clamped at the ends."""

    points: tuple[tuple[float, float], ...] = ((0.0, 0.0), (12.0, 0.8))

    def __post_init__(self):
        snrs = [p[0] for p in self.points]
        taus = [p[1] for p in self.points]
        if len(self.points) < 1 or snrs != sorted(snrs) or len(set(snrs)) != len(snrs):
            raise ValueError("policy breakpoints must have strictly increasing SNR")
        if any(not 0.0 <= t <= 1.0 for t in taus) or taus != sorted(taus):
            raise ValueError("thresholds must be non-decreasing within [0, 1]")

    def threshold(self, snr_db: float) -> float:
        snrs = [p[0] for p in self.points]
        taus = [p[1] for p in self.points]
        return float(np.interp(snr_db, snrs, taus))


DEFAULT_POLICY = ThresholdPolicy()


@dataclass
class ImportanceConfig:
    alpha: float = 0.5
    threshold_policy: ThresholdPolicy = field(default_factory=ThresholdPolicy)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")


@dataclass
class ImportanceTable:
    # NodeId -> (raw degree, raw betweenness, combined score in [0, 1])
    rows: dict[NodeId, tuple[int, float, float]]

    def score(self, nid: NodeId) -> float:
        return self.rows[nid][2]


def importance_scores(mcsg: Mcsg, config: ImportanceConfig) -> ImportanceTable:
    deg = degree_centrality(mcsg)
    btw = betweenness_centrality(mcsg)
    deg_n = _minmax({n: float(v) for n, v in deg.items()})
    btw_n = _minmax(btw)
    a = config.alpha
    rows = {n: (deg[n], btw[n], a * deg_n[n] + (1.0 - a) * btw_n[n]) for n in mcsg.nodes}
    return ImportanceTable(rows=rows)


def partition_uep(table: ImportanceTable, snr_db: float,
                  config: ImportanceConfig) -> tuple[list[NodeId], list[NodeId]]:
    """Split ids into (protected, unprotected), both ascending. Protection goes
    to scores at or above the policy threshold for this SNR."""
    tau = config.threshold_policy.threshold(snr_db)
    protected = sorted(n for n, row in table.rows.items() if row[2] >= tau)
    unprotected = sorted(n for n in table.rows if table.rows[n][2] < tau)
    return protected, unprotected
