#!/usr/bin/env python
# Where the two single-criterion baselines land.  MH looks only at AS
# distance, MD only at overlay depth; MPH and IMPH combine the two.
from aspeer import RunConfig, run

print(f"{'strategy':>8} {'C':>6} {'intra-AS':>9} {'top-level ASes':>15} {'failures':>9}  depth histogram")
for strategy in ("mh", "md", "mph", "imph"):
    s = run(RunConfig(strategy=strategy, hop_bound=4, peer_max_units=20, total_joins=10_000, seed=1))
    last = s.samples[-1]
    print(f"{strategy:>8} {last.congestion_degree:6.3f} {last.intra_as_traffic_fraction:9.1%} "
          f"{last.top_level_peer_as_count:15d} {last.join_failures:9d}  {last.logical_hop_histogram}")
