import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ekrw import canonical
from ekrw.canonical import (
    CanonicalSpec,
    all_bounds,
    build,
    ekr_bound,
    hm2_bound,
    hm2_cases,
    hm_bound,
    main_bound,
    parse_kind,
    s_cover_condition,
    s_cover_condition_bruteforce,
)
from ekrw.family import SetFamily, is_intersecting, k_subsets, max_degree, star

from oracles import binom, hm_count, j2_count, star_sets

# sizes counted by the literal-set constructions in oracles.py
FROZEN_SIZES = {
    ("star", 7, 3): 15,
    ("hm", 7, 3): 13,
    ("hm", 8, 3): 16,
    ("hm", 9, 4): 53,
    ("hm", 11, 5): 206,
    ("j2", 7, 3): 12,
    ("j2", 8, 3): 14,
    ("j2", 9, 4): 51,
    ("j2", 11, 5): 203,
    ("g2", 9, 4): 51,
    ("g3", 9, 4): 51,
}


def test_frozen_sizes_match_oracles():
    assert len(star_sets(7, 3, 0)) == FROZEN_SIZES[("star", 7, 3)]
    for n, k in [(7, 3), (8, 3), (9, 4), (11, 5)]:
        assert hm_count(n, k) == FROZEN_SIZES[("hm", n, k)]
    for n, k in [(7, 3), (8, 3), (9, 4), (11, 5)]:
        assert j2_count(n, k) == FROZEN_SIZES[("j2", n, k)]


@pytest.mark.parametrize("key", sorted(FROZEN_SIZES))
def test_build_sizes(key):
    kind, n, k = key
    spec = {
        "star": canonical.star_spec(n, k),
        "hm": canonical.hm_spec(n, k),
        "j2": canonical.j_spec(n, k, 2),
        "g2": canonical.g_spec(n, k, 2),
        "g3": canonical.g_spec(n, k, 3),
    }[kind]
    fam = build(spec)
    assert len(fam) == FROZEN_SIZES[key]
    assert is_intersecting(fam)


def test_g2_is_the_3set_family():
    for n, k in [(7, 3), (9, 4)]:
        assert build(canonical.g_spec(n, k, 2)) == build(CanonicalSpec("t3", n, k))


@pytest.mark.parametrize("n,k", [(7, 3), (9, 4), (10, 4)])
def test_all_canonical_families_intersect(n, k):
    specs = [canonical.star_spec(n, k), canonical.hm_spec(n, k), CanonicalSpec("t3", n, k)]
    specs += [canonical.g_spec(n, k, i) for i in range(2, k + 1)]
    specs += [canonical.j_spec(n, k, i) for i in range(1, k)]
    for spec in specs:
        assert is_intersecting(build(spec)), spec


def test_placement_errors():
    with pytest.raises(ValueError):
        build(CanonicalSpec("hm", 7, 3, center=1))  # center inside F
    with pytest.raises(ValueError):
        build(CanonicalSpec("g", 7, 3, i=4))
    with pytest.raises(ValueError):
        build(CanonicalSpec("j", 7, 3, i=2, jset=(0, 1)))
    with pytest.raises(ValueError):
        build(CanonicalSpec("j", 7, 3, i=2, jset=(0, 1, 3)))  # meets E = {3, 4}
    with pytest.raises(ValueError):
        build(CanonicalSpec("star", 7, 3, center=7))
    with pytest.raises(ValueError):
        build(CanonicalSpec("nope", 7, 3))
    with pytest.raises(ValueError):
        build(CanonicalSpec("g", 7, 3))


def test_custom_placement_is_isomorphic():
    from ekrw.family import are_isomorphic

    a = build(canonical.j_spec(8, 3, 2))
    b = build(CanonicalSpec("j", 8, 3, i=2, base=(6, 7), jset=(1, 2, 3), center=2))
    assert are_isomorphic(a, b)


def test_parse_kind():
    assert parse_kind("star") == ("star", None)
    assert parse_kind("g:3") == ("g", 3)
    assert parse_kind("j:2") == ("j", 2)
    for bad in ("g", "x:2", "star:1", "bogus"):
        with pytest.raises(ValueError):
            parse_kind(bad)


def test_bound_examples():
    assert ekr_bound(7, 3) == 15
    assert ekr_bound(8, 3) == 21
    for k in range(1, 7):
        assert ekr_bound(2 * k, k) == binom(2 * k - 1, k - 1)
    with pytest.raises(ValueError):
        ekr_bound(5, 3)
    assert hm_bound(7, 3) == 13
    # oracle-derived values (literal construction of the HM family)
    assert hm_bound(8, 3) == hm_count(8, 3) == 16
    assert hm_bound(9, 4) == hm_count(9, 4) == 53
    with pytest.raises(ValueError):
        hm_bound(6, 3)
    assert main_bound(7, 3) == 12
    assert main_bound(8, 3) == 14
    assert main_bound(9, 4) == 51 == j2_count(9, 4)
    with pytest.raises(ValueError):
        main_bound(7, 2)


def test_hm2_examples():
    assert hm2_bound(7, 3, 1) == 13
    # at k=3, s=2 only the first range applies; the second expression is the main bound
    assert hm2_cases(7, 3, 2) == {"first": 13}
    assert hm2_bound(7, 3, 2) == 13
    assert hm2_bound(7, 3, 2, case="second") == 12 == main_bound(7, 3)
    with pytest.raises(ValueError):
        hm2_bound(7, 4, 2)
    with pytest.raises(ValueError):
        hm2_bound(9, 4, 1, case="first")  # needs k <= s+2


def test_hm2_cases_agree_on_overlap():
    for s in range(0, 6):
        for k in range(max(3, s), 9):
            for n in range(2 * k, 21):
                cases = hm2_cases(n, k, s)
                if len(cases) == 2:
                    assert cases["first"] == cases["second"]


def test_hm2_s1_is_hm():
    for k in range(3, 8):
        for n in range(2 * k + 1, 20):
            assert hm2_bound(n, k, 1) == hm_bound(n, k)


def test_bound_chain():
    for k in range(3, 8):
        for n in range(2 * k + 1, 20):
            assert ekr_bound(n, k) >= hm_bound(n, k) >= main_bound(n, k)
            if k == 3:
                assert main_bound(n, k) == 2 * n - 2


def test_all_bounds_reports_errors():
    out = all_bounds(6, 3, 2)
    assert out["ekr"] == 10 and out["hm"] is None and "hm_error" in out
    assert all_bounds(9, 4, 2)["hm2"] == 51


def test_s_cover_examples():
    five = SetFamily(7, 3, star(7, 3).edges[:5])
    assert s_cover_condition(five, 0)
    assert not s_cover_condition(five, 1)
    assert s_cover_condition(build(canonical.j_spec(7, 3, 2)), 2)
    with pytest.raises(ValueError):
        s_cover_condition(SetFamily(7, 3, ()), 1)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.data())
def test_s_cover_degree_form_matches_subsets(n, data):
    k = data.draw(st.integers(1, min(3, n)))
    pool = k_subsets(n, k)
    edges = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=9, unique=True))
    f = SetFamily.from_masks(n, k, edges)
    s = data.draw(st.integers(0, len(f)))
    assert s_cover_condition(f, s) == s_cover_condition_bruteforce(f, s)
    assert s_cover_condition(f, s) == (max_degree(f) <= len(f) - s)
