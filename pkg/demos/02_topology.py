#!/usr/bin/env python
# Grows 500-AS Barabasi-Albert graphs (m = 2) and compares their statistics
# with the reference instance: diameter 7, mean distance 3.73, degree 2..59,
# average degree 3.91.
import numpy as np
from aspeer import generate_ba_topology, topology_stats

rows = [topology_stats(generate_ba_topology(500, 2, seed=s)) for s in range(10)]
keys = ["diameter", "average_distance", "max_degree", "min_degree", "average_degree"]
print(f"{'seed':>4} " + " ".join(f"{k:>17}" for k in keys))
for s, r in enumerate(rows):
    print(f"{s:>4} " + " ".join(f"{r[k]:>17.3f}" for k in keys))
print("mean " + " ".join(f"{np.mean([r[k] for r in rows]):>17.3f}" for k in keys))

# degree distribution is heavy-tailed: print a log-binned histogram
deg = generate_ba_topology(500, 2, seed=0).degrees()
edges = [2, 3, 5, 9, 17, 33, 65, 129]
hist, _ = np.histogram(deg, bins=edges)
for lo, hi, n in zip(edges, edges[1:], hist):
    print(f"degree {lo:>3}-{hi - 1:<3} {'#' * int(np.ceil(n / 5))} {n}")
