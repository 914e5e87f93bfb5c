"""Named extremal families and closed-form size bounds."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .family import SetFamily, elements_of, k_subsets, mask_of, max_degree

KINDS = ("star", "hm", "t3", "g", "j")


@dataclass(frozen=True)
class CanonicalSpec:
    """A named family plus where it sits in the ground set.

    ``kind`` is one of ``star``, ``hm`` (Hilton-Milner), ``t3`` (all k-sets
    meeting a 3-set in two or more points), ``g`` and ``j``; the last two need
    the index ``i``.  Placement fields left as ``None`` take the default
    placement from :func:`default_placement`.
    """

    kind: str
    n: int
    k: int
    i: int | None = None
    center: int | None = None
    base: tuple[int, ...] | None = None
    jset: tuple[int, ...] | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def resolved(self) -> "CanonicalSpec":
        return default_placement(self)


def default_placement(spec: CanonicalSpec) -> CanonicalSpec:
    n, k, i = spec.n, spec.k, spec.i
    kind = spec.kind
    center, base, jset = spec.center, spec.base, spec.jset
    if kind == "star":
        center = 0 if center is None else center
    elif kind == "hm":
        center = 0 if center is None else center
        base = tuple(range(1, k + 1)) if base is None else base
    elif kind == "t3":
        base = (0, 1, 2) if base is None else base
    elif kind == "g":
        if i is None:
            raise ValueError("G_i needs the index i")
        center = 0 if center is None else center
        base = tuple(range(1, i + 1)) if base is None else base
    elif kind == "j":
        if i is None:
            raise ValueError("J_i needs the index i")
        base = tuple(range(3, k + 2)) if base is None else base
        if jset is None:
            used = set(base)
            jset = tuple(itertools.islice((x for x in range(n) if x not in used), i + 1))
        center = jset[0] if center is None else center
    else:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {KINDS}")
    return CanonicalSpec(kind, n, k, i, center, base, jset)


def _check_elements(n: int, elems, what: str) -> None:
    for x in elems:
        if not 0 <= x < n:
            raise ValueError(f"{what} element {x} outside ground set of size {n}")
    if len(set(elems)) != len(elems):
        raise ValueError(f"{what} has repeated elements")


def build(spec: CanonicalSpec) -> SetFamily:
    """Construct the family described by ``spec``."""
    s = default_placement(spec)
    n, k = s.n, s.k
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    universe = k_subsets(n, k)

    if s.kind == "star":
        _check_elements(n, (s.center,), "center")
        bit = 1 << s.center
        edges = [g for g in universe if g & bit]

    elif s.kind == "hm":
        _check_elements(n, s.base, "F")
        _check_elements(n, (s.center,), "center")
        if len(s.base) != k:
            raise ValueError(f"HM base set must have k={k} elements")
        if s.center in s.base:
            raise ValueError("HM center must lie outside F")
        f, x = mask_of(s.base), 1 << s.center
        edges = [g for g in universe if g == f or (g & x and g & f)]

    elif s.kind == "t3":
        _check_elements(n, s.base, "S")
        if len(s.base) != 3:
            raise ValueError("T(S) needs a 3-set S")
        if k < 2:
            raise ValueError("T(S) needs k >= 2")
        t = mask_of(s.base)
        edges = [g for g in universe if bin(g & t).count("1") >= 2]

    elif s.kind == "g":
        i = s.i
        if not 2 <= i <= k:
            raise ValueError(f"G_i needs 2 <= i <= k, got i={i}, k={k}")
        _check_elements(n, s.base, "E")
        _check_elements(n, (s.center,), "x0")
        if len(s.base) != i:
            raise ValueError(f"G_{i} needs an {i}-set E")
        if s.center in s.base:
            raise ValueError("x0 must lie outside E")
        e, x = mask_of(s.base), 1 << s.center
        edges = [g for g in universe if g & e == e or (g & x and g & e)]

    elif s.kind == "j":
        i = s.i
        if not 1 <= i <= k - 1:
            raise ValueError(f"J_i needs 1 <= i <= k-1, got i={i}, k={k}")
        _check_elements(n, s.base, "E")
        _check_elements(n, s.jset, "J")
        if len(s.base) != k - 1:
            raise ValueError(f"J_{i} needs a (k-1)-set E")
        if len(s.jset) != i + 1:
            raise ValueError(f"J_{i} needs an (i+1)-set J, got {len(s.jset)} elements")
        if set(s.base) & set(s.jset):
            raise ValueError("E and J must be disjoint")
        if s.center not in s.jset:
            raise ValueError("x0 must lie in J")
        e, j, x = mask_of(s.base), mask_of(s.jset), 1 << s.center
        edges = [
            g
            for g in universe
            if (g & e == e and g & j) or g & j == j or (g & x and g & e)
        ]
    else:
        raise ValueError(f"unknown family kind {s.kind!r}")
    return SetFamily(n, k, tuple(edges))


def star_spec(n: int, k: int, x: int = 0) -> CanonicalSpec:
    return CanonicalSpec("star", n, k, center=x)


def hm_spec(n: int, k: int) -> CanonicalSpec:
    return CanonicalSpec("hm", n, k)


def g_spec(n: int, k: int, i: int) -> CanonicalSpec:
    return CanonicalSpec("g", n, k, i=i)


def j_spec(n: int, k: int, i: int) -> CanonicalSpec:
    return CanonicalSpec("j", n, k, i=i)


def parse_kind(text: str) -> tuple[str, int | None]:
    """``star``, ``hm``, ``t3``, ``g:<i>`` or ``j:<i>``."""
    if ":" in text:
        kind, _, idx = text.partition(":")
        if kind not in ("g", "j"):
            raise ValueError(f"only g and j take an index, got {text!r}")
        return kind, int(idx)
    if text in ("g", "j"):
        raise ValueError(f"{text} needs an index, e.g. {text}:2")
    if text not in KINDS:
        raise ValueError(f"unknown family kind {text!r}")
    return text, None


# -- closed-form bounds ------------------------------------------------------


def ekr_bound(n: int, k: int) -> int:
    if not (k >= 1 and n >= 2 * k):
        raise ValueError(f"EKR needs n >= 2k >= 2, got n={n}, k={k}")
    return comb(n - 1, k - 1)


def hm_bound(n: int, k: int) -> int:
    if not (k >= 2 and n > 2 * k):
        raise ValueError(f"Hilton-Milner needs k >= 2 and n > 2k, got n={n}, k={k}")
    return comb(n - 1, k - 1) - comb(n - k - 1, k - 1) + 1


def _c(a: int, b: int) -> int:
    return comb(a, b) if a >= 0 and b >= 0 else 0


def hm2_cases(n: int, k: int, s: int) -> dict[str, int]:
    """Both branch expressions of the s-cover bound with the ones whose range holds."""
    first = _c(n - 1, k - 1) - _c(n - k, k - 1) + n - k
    second = _c(n - 1, k - 1) - _c(n - k, k - 1) + _c(n - k - s, k - s - 1) + s
    out = {}
    if 2 < k <= s + 2:
        out["first"] = first
    if k <= 2 or k >= s + 2:
        out["second"] = second
    return out


def hm2_second_expression(n: int, k: int, s: int) -> int:
    return _c(n - 1, k - 1) - _c(n - k, k - 1) + _c(n - k - s, k - s - 1) + s


def hm2_bound(n: int, k: int, s: int, case: str = "auto") -> int:
    """Bound on intersecting families where every element misses >= s members.

    ``case="auto"`` picks the branch whose range contains k (they agree when
    both do); ``case="second"`` evaluates the second expression regardless of
    range, which is the form that coincides with :func:`main_bound` at s=2.
    """
    if s < 0 or not (min(3, s) <= k and 2 * k <= n):
        raise ValueError(f"need min(3, s) <= k <= n/2, got n={n}, k={k}, s={s}")
    if case == "second":
        return hm2_second_expression(n, k, s)
    cases = hm2_cases(n, k, s)
    if case == "first":
        if "first" not in cases:
            raise ValueError(f"first case needs 2 < k <= s+2, got k={k}, s={s}")
        return cases["first"]
    if case != "auto":
        raise ValueError(f"unknown case {case!r}")
    if "first" in cases and "second" in cases:
        assert cases["first"] == cases["second"], cases
    return cases.get("first", cases.get("second"))


def main_bound(n: int, k: int) -> int:
    if not (k >= 3 and n > 2 * k):
        raise ValueError(f"need k >= 3 and n > 2k, got n={n}, k={k}")
    value = comb(n - 1, k - 1) - comb(n - k - 1, k - 1) - comb(n - k - 2, k - 2) + 2
    if k == 3:
        assert value == 2 * n - 2
    return value


def all_bounds(n: int, k: int, s: int | None = None) -> dict:
    out: dict = {"n": n, "k": k}
    for name, fn in (("ekr", ekr_bound), ("hm", hm_bound), ("main", main_bound)):
        try:
            out[name] = fn(n, k)
        except ValueError as exc:
            out[name] = None
            out[f"{name}_error"] = str(exc)
    if s is not None:
        out["s"] = s
        try:
            out["hm2"] = hm2_bound(n, k, s)
            out["hm2_second_expression"] = hm2_second_expression(n, k, s)
        except ValueError as exc:
            out["hm2"] = None
            out["hm2_error"] = str(exc)
    return out


def s_cover_condition(fam: SetFamily, s: int) -> bool:
    """Every subfamily of more than m - s members has empty intersection.

    Evaluated as ``max_degree <= m - s``: a subfamily with a common element
    can always be shrunk to edges through that element.
    """
    if not fam.edges:
        raise ValueError("s-cover condition needs a nonempty family")
    return max_degree(fam) <= len(fam) - s


def s_cover_condition_bruteforce(fam: SetFamily, s: int) -> bool:
    """Literal check over all subfamilies; exponential, for |edges| <= 20."""
    m = len(fam)
    if m > 20:
        raise ValueError("brute-force s-cover check limited to 20 edges")
    full = (1 << fam.n) - 1
    edges = fam.edges
    for size in range(max(m - s + 1, 1), m + 1):
        for sub in itertools.combinations(edges, size):
            common = full
            for e in sub:
                common &= e
            if common:
                return False
    return True


def describe(fam: SetFamily) -> list[tuple[int, ...]]:
    return [elements_of(e) for e in fam.edges]
