import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aspeer import (
    ConfigurationError,
    InsufficientCapacity,
    allocate_from_head,
    candidate_view,
    commit_join,
    imph_partition,
    init_system,
    order_imph,
    order_md,
    order_mh,
    order_mph,
    run_scripted,
    select,
)
from aspeer.model import Candidate, CandidateView

from conftest import FIGURE_JOINS, FIGURE_OSS_AS, brute_force_order, random_view

ORDERS = {"mh": order_mh, "md": order_md, "mph": order_mph, "imph": order_imph}


def view_of(*rows):
    return CandidateView.from_candidates(Candidate(*r) for r in rows)


def ids(view):
    return view.ids.tolist()


# (id, is_oss, home_as, logical_hop, remaining, physical_hop) as seen from AS 4
FIG_PEER3 = [(0, True, 1, 0, 99, 4), (1, False, 1, 1, 9, 4), (2, False, 3, 1, 9, 2)]


def test_mph_figure_peer3():
    assert ids(order_mph(view_of(*FIG_PEER3), 4)) == [2, 0, 1]


def test_imph_figure_peer3():
    ordered = order_imph(view_of(*FIG_PEER3), 4)
    assert ids(ordered) == [0, 2, 1]
    assert allocate_from_head(ordered, 1) == [(0, 1)]


def test_imph_figure_peer4():
    rows = FIG_PEER3 + [(3, False, 4, 1, 9, 1)]
    ordered = order_imph(view_of(*rows), 4)
    assert ids(ordered) == [3, 0, 2, 1]
    assert allocate_from_head(ordered, 1) == [(3, 1)]


def test_imph_figure_peer6_paper_list():
    # the walkthrough lists peers 4 and 5 as well, although the hop bound
    # would filter them out of a real candidate view
    rows = [(0, True, 1, 0, 98, 1), (1, False, 1, 1, 9, 1), (2, False, 3, 1, 9, 3),
            (3, False, 4, 1, 8, 4), (4, False, 4, 2, 10, 4), (5, False, 4, 2, 10, 4)]
    ordered = order_imph(view_of(*rows), 1)
    assert ids(ordered) == [1, 0, 2, 3, 4, 5]
    assert allocate_from_head(ordered, 1)[0][0] == 1


def test_same_as_candidates_follow_logical_hop():
    rows = [(i, False, 2, lh, 1, 1) for i, lh in zip(range(5), [3, 1, 4, 2, 5])]
    assert ids(order_mph(view_of(*rows), 2)) == [1, 3, 0, 2, 4]


def test_mh_basic():
    assert ids(order_mh(view_of((0, False, 0, 1, 1, 2), (1, False, 1, 1, 1, 1)))) == [1, 0]
    assert ids(order_mh(view_of((5, False, 0, 3, 1, 2), (1, False, 1, 1, 1, 2)))) == [1, 5]


def test_md_basic():
    assert ids(order_md(view_of((3, False, 0, 1, 1, 1), (7, True, 1, 0, 1, 5)))) == [7, 3]
    assert ids(order_md(view_of((9, False, 0, 2, 1, 1), (4, False, 1, 2, 1, 5)))) == [4, 9]


@pytest.mark.parametrize("strategy", sorted(ORDERS))
@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force(strategy, seed):
    rng = np.random.default_rng(seed)
    view = random_view(rng, n=30)
    joining = int(rng.integers(8))
    got = list(ORDERS[strategy](view, joining))
    assert got == brute_force_order(strategy, view, joining)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), strategy=st.sampled_from(sorted(ORDERS)))
def test_orderings_are_permutations(seed, strategy):
    rng = np.random.default_rng(seed)
    view = random_view(rng)
    out = ORDERS[strategy](view, int(rng.integers(8)))
    assert sorted(out) == sorted(view)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_imph_partition_cover(seed):
    rng = np.random.default_rng(seed)
    view = random_view(rng)
    joining = int(rng.integers(8))
    l1, l2, l3 = imph_partition(view, joining)
    all_idx = np.concatenate([l1, l2, l3])
    assert sorted(all_idx.tolist()) == list(range(len(view)))
    assert (view.home_as[l1] == joining).all() and not view.is_oss[l1].any()
    assert view.is_oss[l2].all()
    assert (view.home_as[l3] != joining).all() and not view.is_oss[l3].any()


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_imph_equals_mph_without_oss_or_local(seed):
    rng = np.random.default_rng(seed)
    view = random_view(rng)
    joining = 99  # no candidate lives here
    keep = np.flatnonzero(~view.is_oss)
    view = view.take(keep)
    assert ids(order_imph(view, joining)) == ids(order_mph(view, joining))


def test_imph_explicit_oss_ids():
    view = view_of((0, False, 2, 1, 1, 3), (1, False, 5, 1, 1, 1))
    assert ids(order_imph(view, 5, oss_ids=[0])) == [1, 0]


@pytest.mark.parametrize("remaining,needed,expected", [
    ([4], 4, [(0, 4)]),
    ([2, 3], 4, [(0, 2), (1, 2)]),
    ([5, 5], 4, [(0, 4)]),
    ([1, 1, 1, 1, 9], 4, [(0, 1), (1, 1), (2, 1), (3, 1)]),
])
def test_allocate_from_head(remaining, needed, expected):
    view = view_of(*[(i, False, 0, 1, r, 1) for i, r in enumerate(remaining)])
    assert allocate_from_head(view, needed) == expected


def test_allocate_insufficient():
    view = view_of(*[(i, False, 0, 1, 1, 1) for i in range(3)])
    with pytest.raises(InsufficientCapacity) as err:
        allocate_from_head(view, 4)
    assert err.value.available == 3


def test_allocate_empty():
    with pytest.raises(InsufficientCapacity):
        allocate_from_head(view_of(), 1)


def test_select_empty_view_fails(path_topology):
    state = init_system(path_topology, 1, 0, stream_units=1, hop_bound=2, oss_ases=[0])
    with pytest.raises(InsufficientCapacity):
        select("imph", state, 1)


def test_select_unknown_strategy(path_topology):
    state = init_system(path_topology, 1, 5, stream_units=1, hop_bound=2, oss_ases=[0])
    with pytest.raises(ConfigurationError):
        select("cdn", state, 1)


def test_select_is_pure(path_topology):
    state = init_system(path_topology, 1, 50, stream_units=4, hop_bound=3, oss_ases=[0])
    commit_join(state, 2, [(0, 4)], 7)
    snapshot = (state.allocated.tolist(), state.flows())
    select("mph", state, 2)
    assert (state.allocated.tolist(), state.flows()) == snapshot


def provider_of(state, receiver):
    return [p for p, r in zip(state.flow_provider.tolist(), state.flow_receiver.tolist())
            if r == receiver]


def test_mph_figure_sequence(figure_topology):
    state = run_scripted(figure_topology, [FIGURE_OSS_AS], FIGURE_JOINS, "mph")
    assert [provider_of(state, r) for r in range(3, 8)] == [[2], [2], [2], [0], [0]]


def test_imph_figure_sequence(figure_topology):
    state = run_scripted(figure_topology, [FIGURE_OSS_AS], FIGURE_JOINS, "imph")
    assert [provider_of(state, r) for r in range(3, 8)] == [[0], [3], [3], [1], [1]]


def test_imph_figure_peer6_live_view(figure_topology):
    state = run_scripted(figure_topology, [FIGURE_OSS_AS], FIGURE_JOINS[:5], "imph")
    view = candidate_view(state, 1)
    # peers 4 and 5 sit at the hop bound and are filtered out
    assert ids(order_imph(view, 1)) == [1, 0, 2, 3]


def test_hop_bound_safety_random_runs():
    from aspeer import generate_ba_topology
    topo = generate_ba_topology(60, 2, seed=2)
    rng = np.random.default_rng(0)
    for strategy in ORDERS:
        state = init_system(topo, 3, 40, stream_units=4, hop_bound=3, seed=1)
        for _ in range(400):
            a = int(rng.integers(60))
            try:
                alloc = select(strategy, state, a)
            except InsufficientCapacity:
                continue
            assert all(state.logical_hop[p] < 3 for p, _ in alloc)
            commit_join(state, a, alloc, int(rng.integers(1, 11)))
