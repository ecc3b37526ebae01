import pytest

from aspeer.topology import from_edges

# AS ids 1..4 follow the walkthrough figures; AS 0 is an unused stub.
FIGURE_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4)]
FIGURE_OSS_AS = 1
# (joining AS, capacity) for peers 1..7; peers 1 and 2 are already in the
# system when the walkthrough starts
FIGURE_JOINS = [(1, 10), (3, 10), (4, 10), (4, 10), (4, 10), (1, 10), (1, 10)]


@pytest.fixture
def figure_topology():
    return from_edges(5, FIGURE_EDGES)


@pytest.fixture
def path_topology():
    return from_edges(3, [(0, 1), (1, 2)])


def random_view(rng, n=None, as_count=8):
    """A synthetic candidate view with some OSSes mixed in."""
    from aspeer.model import Candidate, CandidateView

    n = int(rng.integers(0, 51)) if n is None else n
    oss_count = int(rng.integers(0, 4))
    ids = sorted(rng.choice(10 * n + 10, size=n, replace=False).tolist())
    rows = []
    for cid in ids:
        is_oss = cid < oss_count * 3 and rng.random() < 0.5
        rows.append(Candidate(
            id=cid,
            is_oss=is_oss,
            home_as=int(rng.integers(as_count)),
            logical_hop=0 if is_oss else int(rng.integers(1, 5)),
            remaining_units=int(rng.integers(1, 6)),
            physical_hop=int(rng.integers(1, 6)),
        ))
    return CandidateView.from_candidates(rows)


def brute_force_order(strategy, candidates, joining_as):
    """Reference orderings written with plain sorted() and tuple keys."""
    cands = list(candidates)
    if strategy == "mh":
        return sorted(cands, key=lambda c: (c.physical_hop, c.id))
    if strategy == "md":
        return sorted(cands, key=lambda c: (c.logical_hop, c.id))
    if strategy == "mph":
        return sorted(cands, key=lambda c: (c.physical_hop, c.logical_hop, c.id))
    l1 = [c for c in cands if not c.is_oss and c.home_as == joining_as]
    l2 = [c for c in cands if c.is_oss]
    l3 = [c for c in cands if not c.is_oss and c.home_as != joining_as]
    return (sorted(l1, key=lambda c: (c.logical_hop, c.id))
            + sorted(l2, key=lambda c: (c.physical_hop, c.id))
            + sorted(l3, key=lambda c: (c.physical_hop, c.logical_hop, c.id)))
