"""Peer-selection policies as orderings over a candidate view.

Every policy sorts the candidate list and then hands it to the same
greedy head-of-list allocator. Remaining ties always fall back to
ascending node id, so orderings are deterministic.

- ``mh``:   physical hop
- ``md``:   logical hop
- ``mph``:  physical hop, then logical hop
- ``imph``: same-AS peers by logical hop, then OSSes by physical hop,
  then everything else in MPH order
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, InsufficientCapacity
from .model import CandidateView, SystemState, candidate_view


def _sorted(view: CandidateView, *keys) -> CandidateView:
    # np.lexsort treats the last key as primary
    return view.take(np.lexsort((view.ids,) + tuple(reversed(keys))))


def order_mh(view: CandidateView, joining_as: int | None = None) -> CandidateView:
    return _sorted(view, view.physical_hop)


def order_md(view: CandidateView, joining_as: int | None = None) -> CandidateView:
    return _sorted(view, view.logical_hop)


def order_mph(view: CandidateView, joining_as: int | None = None) -> CandidateView:
    return _sorted(view, view.physical_hop, view.logical_hop)


def imph_partition(view: CandidateView, joining_as: int, oss_ids=None):
    """Index arrays of the three IMPH lists (unsorted).

    ``oss_ids`` overrides the view's own OSS flags when given.
    """
    is_oss = view.is_oss if oss_ids is None else np.isin(view.ids, np.asarray(oss_ids))
    local = (view.home_as == joining_as) & ~is_oss
    rest = ~local & ~is_oss
    return np.flatnonzero(local), np.flatnonzero(is_oss), np.flatnonzero(rest)


def order_imph(view: CandidateView, joining_as: int, oss_ids=None) -> CandidateView:
    l1, l2, l3 = imph_partition(view, joining_as, oss_ids)
    ids, ph, lh = view.ids, view.physical_hop, view.logical_hop
    l1 = l1[np.lexsort((ids[l1], lh[l1]))]
    l2 = l2[np.lexsort((ids[l2], ph[l2]))]
    l3 = l3[np.lexsort((ids[l3], lh[l3], ph[l3]))]
    return view.take(np.concatenate([l1, l2, l3]))


STRATEGIES = {
    "mh": order_mh,
    "md": order_md,
    "mph": order_mph,
    "imph": order_imph,
}


def allocate_from_head(ordered: CandidateView, needed: int) -> list[tuple[int, int]]:
    """Take ``min(remaining, still needed)`` from each candidate in order.

    Raises :class:`InsufficientCapacity` when the whole list holds fewer
    than ``needed`` units.
    """
    if len(ordered) == 0:
        raise InsufficientCapacity(needed, 0)
    reached = np.cumsum(ordered.remaining)
    if reached[-1] < needed:
        raise InsufficientCapacity(needed, int(reached[-1]))
    last = int(np.searchsorted(reached, needed))
    out = []
    still = needed
    for cid, rem in zip(ordered.ids[: last + 1], ordered.remaining[: last + 1]):
        take = min(int(rem), still)
        out.append((int(cid), take))
        still -= take
    return out


def get_strategy(name: str):
    try:
        return STRATEGIES[name.lower()]
    except KeyError:
        raise ConfigurationError(
            f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}") from None


def select(strategy: str, state: SystemState, joining_as: int) -> list[tuple[int, int]]:
    """Pick providers for a peer joining in ``joining_as``; does not mutate state."""
    order = get_strategy(strategy)
    view = candidate_view(state, joining_as)
    return allocate_from_head(order(view, joining_as), state.stream_units)
