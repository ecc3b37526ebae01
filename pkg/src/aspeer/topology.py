"""AS-level topology: Barabasi-Albert generation and physical hop counts.

Hop counts count ASes traversed, so ``hop[u, u] == 1`` and neighbouring
ASes are 2 apart. :func:`topology_stats` reports plain edge distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import ConfigurationError

MAX_ATTEMPTS = 8


@dataclass(frozen=True)
class AsTopology:
    as_count: int
    edges: tuple[tuple[int, int], ...]
    hop: np.ndarray

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.as_count, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.as_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def _normalise_edges(as_count, edges):
    seen = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ConfigurationError(f"self-loop on AS {u}")
        if not (0 <= u < as_count and 0 <= v < as_count):
            raise ConfigurationError(f"edge ({u}, {v}) outside 0..{as_count - 1}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ConfigurationError(f"parallel edge {key}")
        seen.add(key)
    return tuple(sorted(seen))


def all_pairs_hops(as_count: int, edges) -> np.ndarray:
    """BFS from every AS; returns ``edge distance + 1``.

    Raises :class:`ConfigurationError` if the graph is disconnected.
    """
    if as_count == 1:
        return np.ones((1, 1), dtype=np.int32)
    edges = list(edges)
    rows = [u for u, v in edges] + [v for u, v in edges]
    cols = [v for u, v in edges] + [u for u, v in edges]
    adj = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(as_count, as_count))
    dist = shortest_path(adj, method="D", directed=False, unweighted=True)
    if not np.isfinite(dist).all():
        raise ConfigurationError("AS graph is disconnected")
    return dist.astype(np.int32) + 1


def from_edges(as_count: int, edges) -> AsTopology:
    """Build a topology from an explicit edge list (must be connected)."""
    if as_count < 1:
        raise ConfigurationError("as_count must be positive")
    edges = _normalise_edges(as_count, edges)
    hop = all_pairs_hops(as_count, edges)
    hop.setflags(write=False)
    return AsTopology(as_count, edges, hop)


def _ba_edges(as_count, m, rng):
    # seed clique of max(m, 2) nodes; each later node attaches m edges,
    # drawn one at a time proportional to degree, without replacement
    m0 = max(m, 2)
    edges = [(u, v) for u in range(m0) for v in range(u + 1, m0)]
    deg = np.zeros(as_count, dtype=np.float64)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    for new in range(m0, as_count):
        weights = deg[:new].copy()
        targets = []
        for _ in range(m):
            p = weights / weights.sum()
            t = int(rng.choice(new, p=p))
            targets.append(t)
            weights[t] = 0.0
        for t in targets:
            edges.append((t, new))
            deg[t] += 1
        deg[new] = m
    return edges


def generate_ba_topology(as_count: int, m: int = 2, seed=None) -> AsTopology:
    """Grow a Barabasi-Albert preferential-attachment AS graph.

    Parameters
    ----------
    as_count : int
        Number of ASes.
    m : int
        Edges attached by every node added after the seed clique.
    seed : int
        RNG seed. A disconnected result is regenerated with ``seed + 1``,
        at most ``MAX_ATTEMPTS`` times.
    """
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise ConfigurationError(f"m must be a positive integer, got {m!r}")
    if as_count <= m:
        raise ConfigurationError(f"as_count ({as_count}) must exceed m ({m})")
    base = 0 if seed is None else int(seed)
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(base + attempt)
        edges = _ba_edges(as_count, m, rng)
        try:
            return from_edges(as_count, edges)
        except ConfigurationError:
            continue
    raise ConfigurationError(f"no connected topology after {MAX_ATTEMPTS} attempts")


def topology_stats(topology: AsTopology) -> dict:
    """Diameter, mean distance (edge hops) and degree summary."""
    edge_dist = topology.hop.astype(np.float64) - 1.0
    n = topology.as_count
    deg = topology.degrees()
    off_diag = edge_dist[~np.eye(n, dtype=bool)]
    return {
        "as_count": n,
        "edge_count": len(topology.edges),
        "diameter": int(edge_dist.max()),
        "average_distance": float(off_diag.mean()) if n > 1 else 0.0,
        "max_degree": int(deg.max()),
        "min_degree": int(deg.min()),
        "average_degree": float(deg.mean()),
    }


def dump_edge_list(topology: AsTopology, path) -> None:
    lines = [f"#ases={topology.as_count}"]
    lines += [f"{u} {v}" for u, v in topology.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def load_edge_list(path) -> AsTopology:
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("#ases="):
        raise ConfigurationError(f"{path}: missing '#ases=<n>' header")
    as_count = int(text[0].split("=", 1)[1])
    edges = []
    for lineno, line in enumerate(text[1:], start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigurationError(f"{path}:{lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    return from_edges(as_count, edges)
