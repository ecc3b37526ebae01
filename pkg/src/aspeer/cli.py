"""Command-line entry point.

    aspeer simulate --strategy imph --h 4 --mmax 20 --joins 20000 --seed 42 --out runs/
    aspeer sweep --grid h=3,4,5 mmax=20,40 strategies=mph,imph --out runs/
    aspeer topology --ases 500 --m 2 --seed 0 --dump edges.txt
    aspeer stats edges.txt

Any run flag can also come from an INI file (``--config run.ini``) with a
``[run]`` section using the long flag names; command-line flags win.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigurationError, InvariantError
from .harness import RunConfig, emit_csv, emit_svg, run, sweep
from .topology import dump_edge_list, generate_ba_topology, load_edge_list, topology_stats

# flag name -> (RunConfig field, type)
RUN_FLAGS = {
    "strategy": ("strategy", str),
    "h": ("hop_bound", int),
    "mmax": ("peer_max_units", int),
    "joins": ("total_joins", int),
    "seed": ("seed", int),
    "topology-seed": ("topology_seed", int),
    "ases": ("as_count", int),
    "m": ("ba_m", int),
    "oss": ("oss_count", int),
    "oss-units": ("oss_capacity_units", int),
    "stream-units": ("stream_units", int),
    "stride": ("metric_stride", int),
    "arrival": ("arrival", str),
    "hop-rule": ("hop_rule", str),
}


def _add_run_flags(parser, skip=()):
    for flag, (dest, typ) in RUN_FLAGS.items():
        if flag not in skip:
            parser.add_argument(f"--{flag}", dest=dest, type=typ, default=None)
    parser.add_argument("--config", type=Path, help="INI file with a [run] section")
    parser.add_argument("--smooth", type=int, default=200,
                        help="moving-average window (joins) for the SVG; 0 = raw")


def _read_config_file(path: Path) -> dict:
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise OSError(f"cannot read config file {path}")
    if not parser.has_section("run"):
        raise ConfigurationError(f"{path}: missing [run] section")
    values = {}
    for key, raw in parser.items("run"):
        key = key.replace("_", "-")
        if key in ("grid",):
            continue
        if key not in RUN_FLAGS:
            raise ConfigurationError(f"{path}: unknown key {key!r}")
        dest, typ = RUN_FLAGS[key]
        values[dest] = typ(raw)
    return values


def _run_kwargs(args) -> dict:
    values = _read_config_file(args.config) if args.config else {}
    for dest, _ in RUN_FLAGS.values():
        v = getattr(args, dest, None)
        if v is not None:
            values[dest] = v
    return values


def _parse_grid(items) -> dict:
    grid = {}
    for item in items or []:
        key, _, vals = item.partition("=")
        if not vals:
            raise ConfigurationError(f"bad grid item {item!r}; expected key=v1,v2")
        grid[key.strip()] = [v.strip() for v in vals.split(",") if v.strip()]
    unknown = set(grid) - {"h", "mmax", "strategies", "seeds"}
    if unknown:
        raise ConfigurationError(f"unknown grid keys {sorted(unknown)}")
    return grid


def cmd_simulate(args) -> int:
    config = RunConfig(**_run_kwargs(args))
    series = run(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    emit_csv(series, out / f"{config.name}.csv")
    emit_svg([series], out / f"{config.name}.svg", window=args.smooth or None)
    last = series.samples[-1]
    print(f"{config.name}: C={last.congestion_degree:.4f} failures={last.join_failures} "
          f"-> {out}")
    return 0


def cmd_sweep(args) -> int:
    base = _run_kwargs(args)
    grid = _parse_grid(args.grid)
    hs = [int(x) for x in grid.get("h", [base.pop("hop_bound", 4)])]
    mmaxes = [int(x) for x in grid.get("mmax", [base.pop("peer_max_units", 20)])]
    strategies = grid.get("strategies", [base.pop("strategy", "mph")])
    seeds = [int(x) for x in grid.get("seeds", [base.pop("seed", 0)])]
    for key in ("hop_bound", "peer_max_units", "strategy", "seed"):
        base.pop(key, None)
    # every run shares one AS graph unless told otherwise
    base.setdefault("topology_seed", seeds[0])
    configs = [RunConfig(strategy=s, hop_bound=h, peer_max_units=m, seed=seed, **base)
               for h in hs for m in mmaxes for seed in seeds for s in strategies]
    out = Path(args.out)
    results = sweep(configs, out_dir=out, workers=args.workers)
    failed = 0
    for name, res in results.items():
        if isinstance(res, Exception):
            failed += 1
            print(f"{name}: FAILED {res}", file=sys.stderr)
        else:
            print(f"{name}: C={res.samples[-1].congestion_degree:.4f}")
    for h in hs:
        for m in mmaxes:
            for seed in seeds:
                panel = [r for r in results.values() if not isinstance(r, Exception)
                         and (r.config.hop_bound, r.config.peer_max_units, r.config.seed) == (h, m, seed)]
                if panel:
                    emit_svg(panel, out / f"h{h}_mmax{m}_seed{seed}.svg",
                             window=args.smooth or None,
                             labels=[r.config.strategy.upper() for r in panel],
                             title=f"Congestion degree (H={h}, Mmax={m})")
    return 1 if failed else 0


def cmd_topology(args) -> int:
    topo = generate_ba_topology(args.ases, args.m, args.seed)
    if args.dump:
        dump_edge_list(topo, args.dump)
    print(json.dumps(topology_stats(topo), indent=2))
    return 0


def cmd_stats(args) -> int:
    print(json.dumps(topology_stats(load_edge_list(args.edges)), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aspeer", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one strategy and write CSV + SVG")
    _add_run_flags(p)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a parameter grid")
    _add_run_flags(p)
    p.add_argument("--grid", nargs="*", metavar="KEY=V1,V2",
                   help="keys: h, mmax, strategies, seeds")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("topology", help="generate a BA AS graph")
    p.add_argument("--ases", type=int, default=500)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump", type=Path)
    p.set_defaults(func=cmd_topology)

    p = sub.add_parser("stats", help="print statistics of an edge-list file")
    p.add_argument("edges", type=Path)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
