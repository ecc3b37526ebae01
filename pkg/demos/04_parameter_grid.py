#!/usr/bin/env python
# The full H x Mmax grid (H in 3,4,5; Mmax in 20,40) for MPH and IMPH:
# twelve runs on one shared AS graph, one SVG panel per (H, Mmax) pair.
# Takes a minute or two on one core; pass --workers to sweep() to spread it.
from pathlib import Path

from aspeer import emit_svg, sweep
from aspeer.harness import grid

out = Path("out/grid")
results = sweep(grid(seed=0, topology_seed=0), out_dir=out)

for h in (3, 4, 5):
    for mmax in (20, 40):
        mph = results[f"mph_h{h}_mmax{mmax}_seed0"]
        imph = results[f"imph_h{h}_mmax{mmax}_seed0"]
        emit_svg([mph, imph], out / f"h{h}_mmax{mmax}.svg", window=200,
                 labels=["MPH", "IMPH"], title=f"Congestion degree (H={h}, Mmax={mmax})")
        best = max(1 - i / m for i, m in zip(imph.smoothed()[2000:], mph.smoothed()[2000:]))
        print(f"H={h} Mmax={mmax}: largest IMPH reduction after join 2000: {best:.0%}")
