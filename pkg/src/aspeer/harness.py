"""End-to-end experiments: replay a join sequence and record the metrics.

Randomness comes from three independent streams derived from the run
seed (topology, OSS placement, join sequence), so two strategies run with
the same seed see the same AS graph, the same OSS sites and the same
sequence of (joining AS, peer capacity) draws.
"""

from __future__ import annotations

import csv
import functools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, InsufficientCapacity
from .metrics import MetricsSample
from .model import (OSS_CAPACITY_UNITS, STREAM_UNITS, SystemState, candidate_view, commit_join,
                    init_system, record_failure)
from .selection import STRATEGIES, allocate_from_head, get_strategy, select
from .topology import AsTopology, generate_ba_topology

log = logging.getLogger(__name__)

CSV_COLUMNS = ["joins", "congestion_degree", "intra_as_fraction", "top_level_as_count", "failures"]
ARRIVALS = ("uniform", "degree-weighted")


@dataclass(frozen=True)
class RunConfig:
    strategy: str = "imph"
    hop_bound: int = 4
    peer_max_units: int = 20
    total_joins: int = 20_000
    seed: int = 0
    topology_seed: int | None = None
    as_count: int = 500
    ba_m: int = 2
    oss_count: int = 10
    oss_capacity_units: int = OSS_CAPACITY_UNITS
    stream_units: int = STREAM_UNITS
    metric_stride: int = 1
    arrival: str = "uniform"
    hop_rule: str = "max"

    def __post_init__(self):
        object.__setattr__(self, "strategy", self.strategy.lower())
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"unknown strategy {self.strategy!r}")
        if self.hop_bound < 2:
            raise ConfigurationError("hop_bound must be at least 2")
        for name in ("peer_max_units", "total_joins", "as_count", "ba_m", "oss_count",
                     "oss_capacity_units", "stream_units", "metric_stride"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.as_count <= self.ba_m:
            raise ConfigurationError("as_count must exceed ba_m")
        if self.oss_count > self.as_count:
            raise ConfigurationError("oss_count exceeds as_count")
        if self.arrival not in ARRIVALS:
            raise ConfigurationError(f"arrival must be one of {ARRIVALS}")
        if self.hop_rule not in ("max", "min"):
            raise ConfigurationError("hop_rule must be 'max' or 'min'")

    @property
    def name(self) -> str:
        return (f"{self.strategy}_h{self.hop_bound}_mmax{self.peer_max_units}"
                f"_seed{self.seed}")

    @property
    def effective_topology_seed(self) -> int:
        return self.seed if self.topology_seed is None else self.topology_seed


@dataclass
class MetricsSeries:
    config: RunConfig
    samples: list[MetricsSample] = field(default_factory=list)

    @property
    def joins(self) -> np.ndarray:
        return np.array([s.joins_so_far for s in self.samples], dtype=np.int64)

    @property
    def congestion(self) -> np.ndarray:
        return np.array([np.nan if s.congestion_degree is None else s.congestion_degree
                         for s in self.samples])

    def smoothed(self, window: int = 200) -> np.ndarray:
        """Trailing moving average of C; ``window`` is measured in joins."""
        return smooth(self.congestion, max(1, window // self.config.metric_stride))

    def at(self, joins: int, values=None) -> float:
        values = self.congestion if values is None else values
        idx = int(np.searchsorted(self.joins, joins))
        if idx >= len(self.samples) or self.samples[idx].joins_so_far != joins:
            raise KeyError(f"no sample at join {joins}")
        return float(values[idx])


def smooth(values, window: int) -> np.ndarray:
    """Trailing mean over the last ``window`` values, skipping NaNs."""
    x = np.asarray(values, dtype=np.float64)
    ok = ~np.isnan(x)
    csum = np.concatenate([[0.0], np.cumsum(np.where(ok, x, 0.0))])
    ccount = np.concatenate([[0], np.cumsum(ok)])
    hi = np.arange(1, len(x) + 1)
    lo = np.maximum(hi - window, 0)
    count = ccount[hi] - ccount[lo]
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(count > 0, (csum[hi] - csum[lo]) / count, np.nan)


class _Tracker:
    """Running totals so per-join sampling stays O(1)."""

    def __init__(self, state: SystemState):
        self.state = state
        self.weighted = 0
        self.total = 0
        self.intra = 0
        self.top_level_ases: Counter = Counter()
        self.hist: Counter = Counter()

    def on_join(self, peer_id, allocations):
        s = self.state
        hop = s.topology.hop
        dst = int(s.home_as[peer_id])
        for p, u in allocations:
            h = int(hop[s.home_as[p], dst])
            self.weighted += u * h
            self.total += u
            if h == 1:
                self.intra += u
        depth = int(s.logical_hop[peer_id])
        self.hist[depth] += 1
        if depth == 1:
            self.top_level_ases[dst] += 1

    def sample(self, joins) -> MetricsSample:
        c = intra = None
        if self.total:
            c = self.weighted / self.total
            intra = self.intra / self.total
        return MetricsSample(joins, c, intra, len(self.top_level_ases),
                             self.state.failures, dict(sorted(self.hist.items())))


@functools.lru_cache(maxsize=8)
def build_topology(as_count: int, m: int, seed: int) -> AsTopology:
    return generate_ba_topology(as_count, m, seed)


def join_sequence(config: RunConfig, topology: AsTopology):
    """Pre-drawn (joining ASes, peer capacities) for the whole run."""
    rng = np.random.default_rng([config.seed, 2])
    p = None
    if config.arrival == "degree-weighted":
        deg = topology.degrees().astype(np.float64)
        p = deg / deg.sum()
    ases = rng.choice(topology.as_count, size=config.total_joins, p=p)
    caps = rng.integers(1, config.peer_max_units, size=config.total_joins, endpoint=True)
    return ases, caps


def run(config: RunConfig, topology: AsTopology | None = None, return_state: bool = False):
    """Simulate ``config.total_joins`` joins and sample metrics every stride.

    Returns the :class:`MetricsSeries`, or ``(series, state)`` when
    ``return_state`` is set.
    """
    if topology is None:
        topology = build_topology(config.as_count, config.ba_m, config.effective_topology_seed)
    elif topology.as_count < config.oss_count:
        raise ConfigurationError("topology has fewer ASes than OSSes")
    state = init_system(topology, config.oss_count, config.oss_capacity_units,
                        config.stream_units, config.hop_bound,
                        seed=np.random.default_rng([config.seed, 1]), hop_rule=config.hop_rule)
    ases, caps = join_sequence(config, topology)
    tracker = _Tracker(state)
    order = get_strategy(config.strategy)
    series = MetricsSeries(config)
    for n, (joining_as, cap) in enumerate(zip(ases.tolist(), caps.tolist()), start=1):
        view = candidate_view(state, joining_as)
        try:
            allocations = allocate_from_head(order(view, joining_as), state.stream_units)
        except InsufficientCapacity:
            record_failure(state)
        else:
            peer = commit_join(state, joining_as, allocations, cap)
            tracker.on_join(peer, allocations)
        if n % config.metric_stride == 0 or n == config.total_joins:
            series.samples.append(tracker.sample(n))
    log.info("%s: %d peers joined, %d failures", config.name, state.peer_count, state.failures)
    return (series, state) if return_state else series


def run_scripted(topology: AsTopology, oss_ases, joins, strategy: str, *,
                 stream_units: int = 1, hop_bound: int = 2,
                 oss_capacity_units: int = 100) -> SystemState:
    """Replay a fixed list of ``(joining_as, capacity_units)`` joins."""
    state = init_system(topology, len(oss_ases), oss_capacity_units, stream_units,
                        hop_bound, oss_ases=list(oss_ases))
    for joining_as, cap in joins:
        try:
            allocations = select(strategy, state, joining_as)
        except InsufficientCapacity:
            record_failure(state)
        else:
            commit_join(state, joining_as, allocations, cap)
    return state


def _run_one(config):
    try:
        return run(config)
    except Exception as exc:  # reported per run, the sweep carries on
        log.error("%s failed: %s", config.name, exc)
        return exc


def sweep(configs, out_dir=None, workers: int = 1) -> dict:
    """Run every config; returns ``{config.name: MetricsSeries | Exception}``.

    With ``out_dir`` each successful run is also written to
    ``<out_dir>/<name>.csv``.
    """
    configs = list(configs)
    if not configs:
        raise ConfigurationError("sweep needs at least one config")
    names = [c.name for c in configs]
    if len(set(names)) != len(names):
        raise ConfigurationError("duplicate run names in sweep")
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, configs))
    else:
        results = [_run_one(c) for c in configs]
    out = dict(zip(names, results))
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, res in out.items():
            if isinstance(res, MetricsSeries):
                emit_csv(res, out_dir / f"{name}.csv")
    return out


def grid(hop_bounds=(3, 4, 5), peer_max_units=(20, 40), strategies=("mph", "imph"),
         **common) -> list[RunConfig]:
    return [RunConfig(strategy=s, hop_bound=h, peer_max_units=m, **common)
            for h in hop_bounds for m in peer_max_units for s in strategies]


def _fmt(x):
    return "" if x is None else f"{x:.10g}"


def emit_csv(series: MetricsSeries, path) -> None:
    if not series.samples:
        raise ConfigurationError("cannot write an empty series")
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for s in series.samples:
                writer.writerow([s.joins_so_far, _fmt(s.congestion_degree),
                                 _fmt(s.intra_as_traffic_fraction),
                                 s.top_level_peer_as_count, s.join_failures])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror}") from exc


def read_csv(path) -> list[dict]:
    rows = []
    with Path(path).open(newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append({
                "joins": int(row["joins"]),
                "congestion_degree": float(row["congestion_degree"]) if row["congestion_degree"] else None,
                "intra_as_fraction": float(row["intra_as_fraction"]) if row["intra_as_fraction"] else None,
                "top_level_as_count": int(row["top_level_as_count"]),
                "failures": int(row["failures"]),
            })
    return rows


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    step = 10 ** math.floor(math.log10((hi - lo) / count))
    for mult in (1, 2, 5, 10):
        if (hi - lo) / (step * mult) <= count:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    return [start + i * step for i in range(int((hi - start) / step + 1e-9) + 1)]


def emit_svg(series_list, path, window: int | None = None, labels=None,
             width: int = 720, height: int = 420, title: str = "Congestion degree") -> None:
    """Congestion degree vs. joins, one polyline per series."""
    series_list = list(series_list)
    if not series_list or any(not s.samples for s in series_list):
        raise ConfigurationError("emit_svg needs non-empty series")
    labels = labels or [s.config.name for s in series_list]
    curves = []
    for s in series_list:
        y = s.smoothed(window) if window else s.congestion
        x = s.joins.astype(np.float64)
        ok = ~np.isnan(y)
        curves.append((x[ok], y[ok]))
    xs = np.concatenate([c[0] for c in curves])
    ys = np.concatenate([c[1] for c in curves])
    x_lo, x_hi = 0.0, float(xs.max()) if xs.size else 1.0
    y_lo = 1.0
    y_hi = float(ys.max()) if ys.size else 2.0
    y_hi = max(y_hi, y_lo + 0.1)
    left, right, top, bottom = 60, 180, 30, 45
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo or 1.0) * pw

    def py(y):
        return top + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{left + pw / 2}" y="18" text-anchor="middle" font-size="13">{title}</text>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _nice_ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(t):.1f}" y1="{top + ph}" x2="{px(t):.1f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{px(t):.1f}" y="{top + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        if t > y_hi + 1e-9:
            continue
        out.append(f'<line x1="{left - 4}" y1="{py(t):.1f}" x2="{left}" y2="{py(t):.1f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{py(t) + 4:.1f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">joins</text>')
    out.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2})">congestion degree</text>')
    for i, ((x, y), label) in enumerate(zip(curves, labels)):
        colour = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{pts}"/>')
        ly = top + 14 + 16 * i
        out.append(f'<line x1="{left + pw + 12}" y1="{ly}" x2="{left + pw + 32}" y2="{ly}" '
                   f'stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 36}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    path = Path(path)
    try:
        path.write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc.strerror}") from exc

