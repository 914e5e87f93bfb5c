import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ekrw import canonical
from ekrw.corpus import random_family, random_intersecting
from ekrw.family import SetFamily, are_isomorphic, embeds_into, is_intersecting, k_subsets, mask_of, star
from ekrw.shifting import (
    ai_profile,
    classify_shift_outcome,
    default_window,
    enumerate_shift_preimages,
    enumerate_shift_preimages_bruteforce,
    guarded_stabilize,
    hm_or_ekr_centers,
    hm_triples,
    is_neither_ekr_nor_hm,
    is_stable,
    potential,
    preimage_parts,
    shift_edge,
    shift_family,
    stabilize,
    window_intersecting,
)

from oracles import centers_literal, shift_literal


def fam(n, k, sets):
    return SetFamily.from_sets(n, k, sets)


@st.composite
def intersecting_families(draw, max_n=10, max_k=4):
    k = draw(st.integers(2, max_k))
    n = draw(st.integers(2 * k, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_intersecting(random.Random(seed), n, k)


@st.composite
def shift_pairs(draw, n):
    x = draw(st.integers(0, n - 2))
    y = draw(st.integers(x + 1, n - 1))
    return x, y


def test_shift_edge_examples():
    f = fam(4, 3, [(1, 2, 3)])
    assert shift_edge(f, mask_of((1, 2, 3)), 0, 1) == mask_of((0, 2, 3))
    f = fam(4, 3, [(1, 2, 3), (0, 2, 3)])
    assert shift_edge(f, mask_of((1, 2, 3)), 0, 1) == mask_of((1, 2, 3))
    f = fam(4, 3, [(0, 2, 3)])
    assert shift_edge(f, mask_of((0, 2, 3)), 0, 1) == mask_of((0, 2, 3))
    with pytest.raises(ValueError):
        shift_edge(f, mask_of((0, 2, 3)), 1, 0)
    with pytest.raises(ValueError):
        shift_edge(f, mask_of((1, 2, 3)), 0, 1)


def test_shift_family_examples():
    assert shift_family(fam(4, 3, [(1, 2, 3)]), 0, 1) == fam(4, 3, [(0, 2, 3)])
    s = star(7, 3, 0)
    assert shift_family(s, 0, 1) == s
    with pytest.raises(ValueError):
        shift_family(s, 2, 2)


@settings(max_examples=200, deadline=None)
@given(intersecting_families(), st.data())
def test_shift_preserves_size_and_intersection(f, data):
    x, y = data.draw(shift_pairs(f.n))
    g = shift_family(f, x, y)
    assert len(g) == len(f)
    assert is_intersecting(g)
    assert g == shift_literal(f, x, y)
    if g != f:
        assert potential(g) < potential(f)


def test_stabilize_star_is_fixed():
    tr = stabilize(star(7, 3, 0))
    assert tr.final == star(7, 3, 0)
    assert tr.passes == 1
    assert all(c == 0 for _, _, c in tr.applied)


@settings(max_examples=100, deadline=None)
@given(intersecting_families(max_n=9), st.sets(st.integers(0, 8), max_size=3))
def test_stabilize_trace_invariants(f, ex):
    ex = {v for v in ex if v < f.n}
    tr = stabilize(f, ex)
    assert len(tr.final) == len(f)
    assert is_intersecting(tr.final)
    assert is_stable(tr.final, ex)
    assert tr.passes <= potential(f) + 1
    hist = tr.potential_history
    assert len(hist) == len(tr.applied) + 1
    for i, (x, y, changed) in enumerate(tr.applied):
        assert x < y and x not in ex and y not in ex
        if changed:
            assert hist[i + 1] < hist[i]
        else:
            assert hist[i + 1] == hist[i]


def test_stabilize_non_intersecting_inputs():
    rng = random.Random(5)
    for _ in range(50):
        k = rng.randint(2, 4)
        n = rng.randint(2 * k, 9)
        f = random_family(rng, n, k, rng.randint(1, 12))
        tr = stabilize(f)
        assert len(tr.final) == len(f)
        assert is_stable(tr.final)


def test_centers_examples():
    assert 0 in hm_or_ekr_centers(star(7, 3, 0))
    hm = canonical.build(canonical.CanonicalSpec("hm", 7, 3, center=4, base=(0, 1, 2)))
    assert 4 in hm_or_ekr_centers(hm)
    j2 = canonical.build(canonical.j_spec(7, 3, 2))
    assert hm_or_ekr_centers(j2) == frozenset()
    assert hm_triples(j2) == []
    t3 = canonical.build(canonical.CanonicalSpec("t3", 7, 3))
    assert (0, 1, 2) in hm_triples(t3)
    tri = fam(3, 2, [(0, 1), (1, 2), (0, 2)])
    assert hm_triples(tri) == [(0, 1, 2)]


@settings(max_examples=150, deadline=None)
@given(intersecting_families(max_n=9))
def test_centers_match_literal_count(f):
    assert set(hm_or_ekr_centers(f)) == centers_literal(f)


def _neither_corpus(seed, count, max_n=9, max_k=4):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = rng.randint(3, max_k)
        n = rng.randint(2 * k + 1, max(2 * k + 1, max_n))
        f = random_intersecting(rng, n, k, size=rng.randint(6, 40))
        if is_neither_ekr_nor_hm(f):
            out.append(f)
    return out


def test_classification_agrees_with_reapplying():
    """Oracle: shift with the literal implementation, then recount and embed."""
    rng = random.Random(11)
    for f in _neither_corpus(7, 120):
        for _ in range(5):
            x = rng.randrange(f.n - 1)
            y = rng.randrange(x + 1, f.n)
            out = classify_shift_outcome(f, x, y)
            image = shift_literal(f, x, y)
            assert out.image == image
            centers = centers_literal(image)
            if image == f:
                assert out.kind == "stable"
            elif centers:
                assert centers == {x}
                avoid = sum(1 for e in image.edges if not e >> x & 1)
                assert out.kind == ("ekr_at_x" if avoid == 0 else "hm_at_x")
                if avoid == 0:
                    assert embeds_into(image, star(f.n, f.k)) is not None
            elif f.k == 3 and hm_triples(image):
                assert out.kind == "hm_at_triple"
                assert embeds_into(image, canonical.build(canonical.CanonicalSpec("t3", f.n, 3))) is not None
            else:
                assert out.kind == "changed"


def test_classify_preconditions():
    with pytest.raises(ValueError):
        classify_shift_outcome(star(7, 3), 0, 1)
    j2 = canonical.build(canonical.j_spec(7, 3, 2))
    with pytest.raises(ValueError):
        classify_shift_outcome(j2, 3, 3)
    bad = fam(6, 3, [(0, 1, 2), (3, 4, 5)])
    with pytest.raises(ValueError):
        classify_shift_outcome(bad, 0, 1)


def test_stable_input_reports_stable_everywhere():
    for f in _neither_corpus(3, 15):
        g = stabilize(f).final
        if not is_neither_ekr_nor_hm(g):
            continue
        for x in range(g.n):
            for y in range(x + 1, g.n):
                assert classify_shift_outcome(g, x, y).kind == "stable"


def test_ai_profile_full_window():
    j2 = canonical.build(canonical.j_spec(7, 3, 2))
    prof = ai_profile(j2, range(7))
    assert prof.classes[3] == frozenset(j2.edges)
    assert prof.counts == {1: 0, 2: 0, 3: 12}
    assert prof.union_intersecting


def test_ai_profile_partial_window():
    f = fam(6, 3, [(0, 1, 2), (0, 1, 3), (0, 4, 5)])
    prof = ai_profile(f, {0, 1})
    assert prof.counts == {1: 1, 2: 1, 3: 0}
    assert prof.classes[2] == frozenset({mask_of((0, 1))})


def test_window_intersecting_examples():
    f = fam(5, 3, [(0, 1, 2), (0, 3, 4)])
    assert window_intersecting(f, range(5))
    assert not window_intersecting(f, {1, 2, 3, 4})


def test_default_window():
    assert default_window(9, 4) == frozenset(range(8))
    assert default_window(8, 3) == frozenset(range(7))
    assert default_window(10, 4, {8, 9}) == frozenset({8, 9, 0, 1, 2, 3, 4, 5})


def test_guarded_stabilization_on_saturated_families():
    """Maximal families keep the window property after guarded shifting."""
    rng = random.Random(2)
    seen = 0
    while seen < 150:
        k = rng.randint(3, 4)
        n = rng.randint(2 * k + 1, 10)
        f = random_intersecting(rng, n, k, size=10**6)
        if not is_neither_ekr_nor_hm(f):
            continue
        seen += 1
        g = guarded_stabilize(f)
        assert len(g.final) == len(f)
        assert is_neither_ekr_nor_hm(g.final)
        assert is_stable(g.final, g.exclusion)
        xm = mask_of(g.exclusion)
        if xm:
            assert all(e & xm for e in g.final.edges)
        assert window_intersecting(g.final, default_window(n, k, g.exclusion))
        for stage in g.stages:
            for x, y, _ in stage.applied:
                assert x not in stage.exclusion and y not in stage.exclusion


def test_guarded_rejects_ekr_input():
    with pytest.raises(ValueError):
        guarded_stabilize(star(7, 3))


def test_trivial_shift_has_single_preimage():
    s = star(7, 3, 0)
    moved, _ = preimage_parts(s, 1, 2)
    assert moved == []
    assert enumerate_shift_preimages(s, 1, 2) == [s]


@settings(max_examples=120, deadline=None)
@given(intersecting_families(max_n=8), st.data())
def test_preimages_match_bruteforce(f, data):
    x, y = data.draw(shift_pairs(f.n))
    _, base = preimage_parts(f, x, y)
    if len(base) > 15:
        return
    fast = enumerate_shift_preimages(f, x, y)
    slow = enumerate_shift_preimages_bruteforce(f, x, y)
    assert fast == slow
    for h in fast:
        assert shift_family(h, x, y) == f
        assert is_intersecting(h)


@pytest.mark.parametrize("label", ["J2", "G2"])
def test_preimages_of_extremal_families_are_rigid_73(label):
    spec = canonical.j_spec(7, 3, 2) if label == "J2" else canonical.g_spec(7, 3, 2)
    target = canonical.build(spec)
    for x in range(7):
        for y in range(x + 1, 7):
            for h in enumerate_shift_preimages(target, x, y):
                assert are_isomorphic(h, target)
