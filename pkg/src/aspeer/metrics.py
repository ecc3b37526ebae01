"""Congestion degree and overlay diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import SystemState


@dataclass(frozen=True)
class MetricsSample:
    joins_so_far: int
    congestion_degree: float | None
    intra_as_traffic_fraction: float | None
    top_level_peer_as_count: int
    join_failures: int
    logical_hop_histogram: dict[int, int] = field(default_factory=dict)


def flow_hops(state: SystemState) -> np.ndarray:
    """Physical hop count of every flow in the ledger."""
    home = state.home_as
    return state.topology.hop[home[state.flow_provider], home[state.flow_receiver]]


def congestion_degree(state: SystemState) -> float | None:
    """Hop-weighted traffic over total traffic; ``None`` when there are no flows.

    The unit rate cancels, so the ratio is taken over unit counts.
    """
    units = state.flow_units
    total = units.sum()
    if total == 0:
        return None
    return float((units * flow_hops(state)).sum() / total)


def diagnostics(state: SystemState, joins_so_far: int | None = None) -> MetricsSample:
    units = state.flow_units
    total = units.sum()
    c = intra = None
    if total > 0:
        hops = flow_hops(state)
        c = float((units * hops).sum() / total)
        intra = float(units[hops == 1].sum() / total)
    peer_hops = state.logical_hop[state.oss_count:]
    top_level = state.home_as[state.oss_count:][peer_hops == 1]
    values, counts = np.unique(peer_hops, return_counts=True)
    return MetricsSample(
        joins_so_far=state.peer_count + state.failures if joins_so_far is None else joins_so_far,
        congestion_degree=c,
        intra_as_traffic_fraction=intra,
        top_level_peer_as_count=int(np.unique(top_level).size),
        join_failures=state.failures,
        logical_hop_histogram={int(v): int(n) for v, n in zip(values, counts)},
    )
