import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ekrw.family import are_isomorphic
from ekrw.separability import (
    SetSystem,
    build_prop1_family,
    build_prop2_family,
    complete_bipartite,
    complete_graph,
    cross_intersecting_partitions,
    cross_intersecting_partitions_bruteforce,
    disjointness_components,
    graph_family,
    is_cross_intersecting,
    non_separable,
    non_separable_bruteforce,
)


def test_cross_intersecting_examples():
    assert is_cross_intersecting([0b011], [0b110])
    assert not is_cross_intersecting([0b0011], [0b1100])
    assert is_cross_intersecting([], [0b1])


def test_star_graph_splits_freely():
    star = graph_family(4, [(0, 1), (0, 2), (0, 3)])
    assert not non_separable(star)
    parts = cross_intersecting_partitions(star)
    assert len(parts) == 4  # 2^3 ordered splits
    assert set(parts) == cross_intersecting_partitions_bruteforce(star)


def test_k23_and_deletions():
    k23 = complete_bipartite(2, 3)
    assert non_separable(k23)
    for e in k23.edges:
        sub = k23.with_edges(x for x in k23.edges if x != e)
        assert non_separable(sub)
        assert non_separable_bruteforce(sub)


def test_k5_minus_two_edges():
    k5 = complete_graph(5)
    count = 0
    for a, b in itertools.combinations(k5.edges, 2):
        sub = k5.with_edges(x for x in k5.edges if x not in (a, b))
        assert non_separable(sub)
        assert non_separable_bruteforce(sub)
        count += 1
    assert count == 45


def test_small_families_are_non_separable():
    assert non_separable(SetSystem(3, ()))
    assert non_separable(SetSystem(3, (0b011,)))
    assert cross_intersecting_partitions(SetSystem(3, ())) == [((), ())]


def test_prop1_examples():
    c = build_prop1_family(3, 1, 1)
    assert len(c) == 6
    assert non_separable(c)
    assert cross_intersecting_partitions(c) == [(c.edges, ())]
    assert non_separable(build_prop1_family(4, 1, 2))
    with pytest.raises(ValueError):
        build_prop1_family(2, 1, 1)
    with pytest.raises(ValueError):
        build_prop1_family(5, 0, 1)
    with pytest.raises(ValueError):
        build_prop1_family(5, 2, 2, s=3)


def test_prop1_mixed_sizes():
    c = build_prop1_family(4, 1, 2)
    sizes = {len(s) for s in c.as_sets()}
    assert sizes == {2, 3}


def test_prop2_examples():
    b = build_prop2_family(5, 2, 2)
    assert are_isomorphic(b, complete_bipartite(2, 3))
    assert non_separable(b)
    assert non_separable(build_prop2_family(7, 3, 3))
    assert len(build_prop2_family(5, 2, 1)) == 0
    with pytest.raises(ValueError):
        build_prop2_family(4, 2, 2)
    with pytest.raises(ValueError):
        build_prop2_family(7, 3, 1)


@st.composite
def systems(draw):
    n = draw(st.integers(2, 7))
    members = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=12, unique=True))
    return SetSystem(n, tuple(members))


@settings(max_examples=200, deadline=None)
@given(systems())
def test_components_match_bruteforce(b):
    fast = cross_intersecting_partitions(b)
    assert len(set(fast)) == len(fast)
    assert set(fast) == cross_intersecting_partitions_bruteforce(b)
    assert non_separable(b) == non_separable_bruteforce(b)
    assert non_separable(b) == (len(fast) == 1)
    for p1, p2 in fast:
        assert is_cross_intersecting(p1, p2)
        assert sorted(p1 + p2) == list(b.edges)


def test_component_limit():
    singles = SetSystem(40, tuple(1 << i for i in range(31)))  # 31 pairwise disjoint members
    assert len(disjointness_components(singles)) == 1
    # members that all intersect: every member is its own component
    many = SetSystem(40, tuple((1 << 39) | (1 << i) for i in range(31)))
    with pytest.raises(ValueError):
        cross_intersecting_partitions(many)


def test_random_graphs_agree_with_bruteforce():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randint(3, 7)
        pairs = list(itertools.combinations(range(n), 2))
        chosen = rng.sample(pairs, rng.randint(1, min(12, len(pairs))))
        g = graph_family(n, chosen)
        assert non_separable(g) == non_separable_bruteforce(g)
