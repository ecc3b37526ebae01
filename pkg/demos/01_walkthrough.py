#!/usr/bin/env python
# Replays the small 4-AS walkthrough: one OSS in AS 1, peers 1 and 2 already
# joined, then peers 3-5 join in AS 4 and peers 6-7 in AS 1.  Single-unit
# stream, hop bound 2.  Shows who serves whom under MPH and under IMPH.
from aspeer import diagnostics, run_scripted
from aspeer.topology import from_edges

# AS 0 is a stub so that AS ids 1..4 read naturally
topo = from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
joins = [(1, 10), (3, 10), (4, 10), (4, 10), (4, 10), (1, 10), (1, 10)]

for strategy in ("mph", "imph"):
    state = run_scripted(topo, oss_ases=[1], joins=joins, strategy=strategy)
    print(f"--- {strategy.upper()} ---")
    for f in state.flows():
        src = "OSS" if f.provider == 0 else f"peer {f.provider}"
        node = state.node(f.receiver)
        print(f"  {src:>7} -> peer {f.receiver} (AS {node.home_as}, logical hop {node.logical_hop})")
    d = diagnostics(state)
    print(f"  congestion degree {d.congestion_degree:.3f}, "
          f"top-level peers in {d.top_level_peer_as_count} ASes")
