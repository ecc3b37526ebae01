"""System state: origin servers, joined peers, and the flow ledger.

Rates are integer counts of the minimum unit. A joined peer receives
exactly ``stream_units`` units in total (the stream-rate equation) and no
node hands out more than its providing capacity (the capacity equation).
Node ids are dense: OSSes take ``0 .. oss_count-1``, peers follow in join
order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import numpy as np

from .errors import ConfigurationError, InvariantError
from .topology import AsTopology

UNIT_KBPS = 256
STREAM_UNITS = 4  # 1 Mbps taken as 1024 kbps
OSS_CAPACITY_UNITS = 100_000 // UNIT_KBPS  # 100 Mbps, decimal


class NodeKind(enum.Enum):
    OSS = "oss"
    PEER = "peer"


class Candidate(NamedTuple):
    id: int
    is_oss: bool
    home_as: int
    logical_hop: int
    remaining_units: int
    physical_hop: int


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    home_as: int
    capacity_units: int
    allocated_units: int
    logical_hop: int

    @property
    def remaining_units(self) -> int:
        return self.capacity_units - self.allocated_units


@dataclass(frozen=True)
class Flow:
    provider: int
    receiver: int
    units: int


@dataclass
class CandidateView:
    """Struct-of-arrays view of the nodes a joining peer may pick from."""

    ids: np.ndarray
    is_oss: np.ndarray
    home_as: np.ndarray
    logical_hop: np.ndarray
    remaining: np.ndarray
    physical_hop: np.ndarray

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self) -> Iterator[Candidate]:
        for row in zip(self.ids, self.is_oss, self.home_as, self.logical_hop,
                       self.remaining, self.physical_hop):
            yield Candidate(int(row[0]), bool(row[1]), *(int(x) for x in row[2:]))

    def take(self, index) -> "CandidateView":
        index = np.asarray(index, dtype=np.intp)
        return CandidateView(self.ids[index], self.is_oss[index], self.home_as[index],
                             self.logical_hop[index], self.remaining[index],
                             self.physical_hop[index])

    @classmethod
    def from_candidates(cls, candidates) -> "CandidateView":
        rows = list(candidates)
        cols = list(zip(*rows)) if rows else [()] * 6
        return cls(
            ids=np.array(cols[0], dtype=np.int64),
            is_oss=np.array(cols[1], dtype=bool),
            home_as=np.array(cols[2], dtype=np.int64),
            logical_hop=np.array(cols[3], dtype=np.int64),
            remaining=np.array(cols[4], dtype=np.int64),
            physical_hop=np.array(cols[5], dtype=np.int64),
        )


class _Column:
    """Append-only integer array with amortised growth."""

    def __init__(self, dtype=np.int64, size=64):
        self._data = np.zeros(size, dtype=dtype)
        self.n = 0

    def append(self, value):
        if self.n == len(self._data):
            self._data = np.concatenate([self._data, np.zeros_like(self._data)])
        self._data[self.n] = value
        self.n += 1

    @property
    def values(self) -> np.ndarray:
        return self._data[: self.n]


@dataclass
class SystemState:
    topology: AsTopology
    oss_count: int
    stream_units: int
    hop_bound: int
    hop_rule: str = "max"
    unit_kbps: int = UNIT_KBPS
    failures: int = 0
    _home: _Column = field(default_factory=_Column, repr=False)
    _capacity: _Column = field(default_factory=_Column, repr=False)
    _allocated: _Column = field(default_factory=_Column, repr=False)
    _lhop: _Column = field(default_factory=_Column, repr=False)
    _provider: _Column = field(default_factory=_Column, repr=False)
    _receiver: _Column = field(default_factory=_Column, repr=False)
    _units: _Column = field(default_factory=_Column, repr=False)
    _provider_lhop: _Column = field(default_factory=_Column, repr=False)

    @property
    def node_count(self) -> int:
        return self._home.n

    @property
    def peer_count(self) -> int:
        return self._home.n - self.oss_count

    @property
    def oss_ids(self) -> np.ndarray:
        return np.arange(self.oss_count)

    # read-only array views; callers must not write into them
    @property
    def home_as(self) -> np.ndarray:
        return self._home.values

    @property
    def capacity(self) -> np.ndarray:
        return self._capacity.values

    @property
    def allocated(self) -> np.ndarray:
        return self._allocated.values

    @property
    def logical_hop(self) -> np.ndarray:
        return self._lhop.values

    @property
    def flow_provider(self) -> np.ndarray:
        return self._provider.values

    @property
    def flow_receiver(self) -> np.ndarray:
        return self._receiver.values

    @property
    def flow_units(self) -> np.ndarray:
        return self._units.values

    @property
    def flow_provider_lhop(self) -> np.ndarray:
        """Provider logical hop recorded when each flow was created."""
        return self._provider_lhop.values

    def node(self, node_id: int) -> Node:
        kind = NodeKind.OSS if node_id < self.oss_count else NodeKind.PEER
        return Node(node_id, kind, int(self.home_as[node_id]), int(self.capacity[node_id]),
                    int(self.allocated[node_id]), int(self.logical_hop[node_id]))

    def flows(self) -> list[Flow]:
        return [Flow(int(p), int(r), int(u)) for p, r, u in
                zip(self.flow_provider, self.flow_receiver, self.flow_units)]

    def _add_node(self, home_as, capacity, lhop):
        self._home.append(home_as)
        self._capacity.append(capacity)
        self._allocated.append(0)
        self._lhop.append(lhop)
        return self._home.n - 1


def init_system(topology: AsTopology, oss_count: int = 10,
                oss_capacity_units: int = OSS_CAPACITY_UNITS,
                stream_units: int = STREAM_UNITS, hop_bound: int = 3, seed=None,
                oss_ases=None, hop_rule: str = "max") -> SystemState:
    """Place OSSes in distinct, uniformly chosen ASes.

    ``seed`` may be an int or a ``numpy.random.Generator``. Pass
    ``oss_ases`` to pin the placement instead.
    """
    if oss_count < 1:
        raise ConfigurationError("oss_count must be positive")
    if oss_count > topology.as_count:
        raise ConfigurationError(
            f"oss_count ({oss_count}) exceeds as_count ({topology.as_count})")
    if oss_capacity_units < 0 or stream_units < 1 or hop_bound < 1:
        raise ConfigurationError("capacities, stream_units and hop_bound must be positive")
    if hop_rule not in ("max", "min"):
        raise ConfigurationError(f"hop_rule must be 'max' or 'min', got {hop_rule!r}")
    if oss_ases is None:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        oss_ases = rng.choice(topology.as_count, size=oss_count, replace=False)
    elif len(oss_ases) != oss_count:
        raise ConfigurationError("oss_ases length must equal oss_count")
    state = SystemState(topology, oss_count, stream_units, hop_bound, hop_rule)
    for a in oss_ases:
        state._add_node(int(a), oss_capacity_units, 0)
    return state


def candidate_view(state: SystemState, joining_as: int) -> CandidateView:
    """Nodes with at least one free unit and logical hop below the bound."""
    if not 0 <= joining_as < state.topology.as_count:
        raise ConfigurationError(f"unknown AS {joining_as}")
    remaining = state.capacity - state.allocated
    lhop = state.logical_hop
    ids = np.flatnonzero((remaining >= 1) & (lhop < state.hop_bound))
    home = state.home_as[ids]
    return CandidateView(
        ids=ids,
        is_oss=ids < state.oss_count,
        home_as=home,
        logical_hop=lhop[ids],
        remaining=remaining[ids],
        physical_hop=state.topology.hop[joining_as, home].astype(np.int64),
    )


def commit_join(state: SystemState, joining_as: int, allocations,
                peer_capacity_units: int) -> int:
    """Append a peer fed by ``allocations`` [(provider, units), ...]."""
    allocations = [(int(p), int(u)) for p, u in allocations]
    if not allocations:
        raise InvariantError("a join needs at least one provider")
    total = sum(u for _, u in allocations)
    if total != state.stream_units:
        raise InvariantError(f"allocations sum to {total}, stream needs {state.stream_units}")
    providers = [p for p, _ in allocations]
    if len(set(providers)) != len(providers):
        raise InvariantError(f"duplicate provider in {allocations}")
    if peer_capacity_units < 0:
        raise InvariantError("negative peer capacity")
    remaining = state.capacity - state.allocated
    lhop = state.logical_hop
    for p, u in allocations:
        if not 0 <= p < state.node_count:
            raise InvariantError(f"unknown provider {p}")
        if u < 1:
            raise InvariantError(f"flow from {p} has {u} units")
        if u > remaining[p]:
            raise InvariantError(f"provider {p} has {remaining[p]} units, asked for {u}")
        if lhop[p] >= state.hop_bound:
            raise InvariantError(f"provider {p} logical hop {lhop[p]} >= {state.hop_bound}")
    hops = [int(lhop[p]) for p in providers]
    depth = 1 + (max(hops) if state.hop_rule == "max" else min(hops))
    new_id = state._add_node(joining_as, peer_capacity_units, depth)
    allocated = state._allocated._data
    for p, u in allocations:
        allocated[p] += u
        state._provider.append(p)
        state._receiver.append(new_id)
        state._units.append(u)
        state._provider_lhop.append(hops[providers.index(p)])
    return new_id


def record_failure(state: SystemState) -> int:
    state.failures += 1
    return state.failures
