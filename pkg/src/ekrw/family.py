"""Uniform set families over a small ground set, stored as bitmasks.

Every member of a family is an ``int`` whose set bits are its elements, so a
ground set of size ``n`` needs at most ``n`` bits (``n <= 64``).  Families are
immutable and keep their edges strictly sorted by mask value, which gives
structural equality, stable hashing and byte-stable JSON.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 64


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def k_subsets(n: int, k: int) -> list[int]:
    """All k-subsets of range(n) as masks, ascending by mask value."""
    return sorted(mask_of(c) for c in itertools.combinations(range(n), k))


@dataclass(frozen=True)
class SetFamily:
    n: int
    k: int
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_GROUND:
            raise ValueError(f"ground set size must be in 1..{MAX_GROUND}, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"uniformity k={self.k} must satisfy 1 <= k <= n={self.n}")
        object.__setattr__(self, "edges", tuple(self.edges))
        limit = 1 << self.n
        prev = -1
        for e in self.edges:
            if e <= prev:
                raise ValueError("edges must be strictly increasing by mask value")
            if e >= limit or e <= 0:
                raise ValueError(f"edge {e:#x} uses elements outside range({self.n})")
            if popcount(e) != self.k:
                raise ValueError(f"edge {elements_of(e)} does not have {self.k} elements")
            prev = e

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        """Build from element collections; duplicates are merged."""
        return cls(n, k, tuple(sorted({mask_of(s) for s in sets})))

    @classmethod
    def from_masks(cls, n: int, k: int, masks: Iterable[int]) -> "SetFamily":
        return cls(n, k, tuple(sorted(set(masks))))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[int]:
        return iter(self.edges)

    def __contains__(self, mask: object) -> bool:
        return mask in self._edge_set

    @property
    def _edge_set(self) -> frozenset[int]:
        cached = self.__dict__.get("_edge_set_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached

    def as_sets(self) -> list[tuple[int, ...]]:
        return [elements_of(e) for e in self.edges]

    def with_edges(self, masks: Iterable[int]) -> "SetFamily":
        return SetFamily.from_masks(self.n, self.k, masks)

    def relabel(self, perm: Sequence[int], n: int | None = None) -> "SetFamily":
        """Image of the family under the element map ``i -> perm[i]``."""
        target = self.n if n is None else n
        return SetFamily.from_masks(
            target, self.k, (mask_of(perm[e] for e in elements_of(m)) for m in self.edges)
        )

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(s) for s in self.as_sets()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(", ", ": "))

    def __repr__(self) -> str:
        return f"SetFamily(n={self.n}, k={self.k}, edges={self.as_sets()})"


class FamilyFormatError(ValueError):
    """Malformed family JSON; the message names the offending field."""


def family_from_dict(data: object) -> SetFamily:
    if not isinstance(data, dict):
        raise FamilyFormatError("family JSON must be an object with keys n, k, edges")
    for key in ("n", "k", "edges"):
        if key not in data:
            raise FamilyFormatError(f"missing field '{key}'")
    n, k, edges = data["n"], data["k"], data["edges"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise FamilyFormatError("field 'n' must be an integer")
    if not isinstance(k, int) or isinstance(k, bool):
        raise FamilyFormatError("field 'k' must be an integer")
    if not isinstance(edges, list):
        raise FamilyFormatError("field 'edges' must be a list of lists")
    masks = []
    for i, edge in enumerate(edges):
        if not isinstance(edge, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in edge
        ):
            raise FamilyFormatError(f"edges[{i}] must be a list of integers")
        if any(b <= a for a, b in zip(edge, edge[1:])):
            raise FamilyFormatError(f"edges[{i}] must be strictly increasing")
        if edge and (edge[0] < 0 or edge[-1] >= n):
            raise FamilyFormatError(f"edges[{i}] has an element outside 0..{n - 1}")
        if len(edge) != k:
            raise FamilyFormatError(f"edges[{i}] has {len(edge)} elements, expected k={k}")
        masks.append(mask_of(edge))
    if len(set(masks)) != len(masks):
        raise FamilyFormatError("duplicate edges")
    try:
        return SetFamily.from_masks(n, k, masks)
    except ValueError as exc:
        raise FamilyFormatError(str(exc)) from exc


def family_from_json(text: str) -> SetFamily:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return family_from_dict(data)


def is_intersecting(fam: SetFamily) -> bool:
    edges = fam.edges
    for i, a in enumerate(edges):
        for b in edges[i + 1:]:
            if a & b == 0:
                return False
    return True


def is_trivial(fam: SetFamily) -> int | None:
    """Smallest element common to all edges, or None when the total intersection is empty."""
    if not fam.edges:
        raise ValueError("triviality is undefined for the empty family")
    common = (1 << fam.n) - 1
    for e in fam.edges:
        common &= e
    if common == 0:
        return None
    return (common & -common).bit_length() - 1


def degree(fam: SetFamily, x: int) -> int:
    if not 0 <= x < fam.n:
        raise ValueError(f"element {x} outside ground set of size {fam.n}")
    bit = 1 << x
    return sum(1 for e in fam.edges if e & bit)


def degrees(fam: SetFamily) -> list[int]:
    out = [0] * fam.n
    for e in fam.edges:
        for x in elements_of(e):
            out[x] += 1
    return out


def max_degree(fam: SetFamily) -> int:
    return max(degrees(fam), default=0) if fam.edges else 0


def _shadow(edges: Iterable[int]) -> set[int]:
    """Every subset of every edge (including the empty set)."""
    out: set[int] = set()
    for e in edges:
        elems = elements_of(e)
        for r in range(len(elems) + 1):
            for c in itertools.combinations(elems, r):
                out.add(mask_of(c))
    return out


def embeds_into(h: SetFamily, g: SetFamily) -> tuple[int, ...] | None:
    """Injective element map f with f(E) in g for all E in h, or None.

    The result is a tuple ``f`` of length ``h.n`` with ``f[i]`` the image of
    element ``i``.  Search is a backtracking over partial injections; an element
    of degree d can only go to an element of degree >= d in ``g``, and every
    partially mapped edge must land inside some edge of ``g``.
    """
    if h.k != g.k:
        raise ValueError(f"uniformity mismatch: {h.k} vs {g.k}")
    if h.n > g.n:
        raise ValueError("source ground set is larger than target ground set")
    if len(h) > len(g):
        return None
    dh, dg = degrees(h), degrees(g)
    if any(a > b for a, b in zip(sorted(dh, reverse=True), sorted(dg, reverse=True))):
        return None

    shadow = _shadow(g.edges)
    g_edges = g._edge_set
    h_sets = [elements_of(e) for e in h.edges]
    incident: list[list[int]] = [[] for _ in range(h.n)]
    for idx, s in enumerate(h_sets):
        for x in s:
            incident[x].append(idx)

    # Map busy elements first, preferring ones tied to already placed elements.
    active = [x for x in range(h.n) if dh[x] > 0]
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(active)
    while remaining:
        def score(x: int) -> tuple[int, int, int]:
            linked = sum(1 for i in incident[x] for y in h_sets[i] if y in placed)
            return (linked, dh[x], -x)

        nxt = max(remaining, key=score)
        order.append(nxt)
        placed.add(nxt)
        remaining.discard(nxt)

    image = [-1] * h.n
    used = [False] * g.n
    candidates = [[y for y in range(g.n) if dg[y] >= dh[x]] for x in range(h.n)]

    def consistent(x: int) -> bool:
        for i in incident[x]:
            part = 0
            complete = True
            for y in h_sets[i]:
                if image[y] < 0:
                    complete = False
                else:
                    part |= 1 << image[y]
            if complete:
                if part not in g_edges:
                    return False
            elif part not in shadow:
                return False
        return True

    def place(pos: int) -> bool:
        if pos == len(order):
            return True
        x = order[pos]
        for y in candidates[x]:
            if used[y]:
                continue
            image[x] = y
            used[y] = True
            if consistent(x) and place(pos + 1):
                return True
            used[y] = False
            image[x] = -1
        return False

    if not place(0):
        return None
    free = iter(y for y in range(g.n) if not used[y])
    for x in range(h.n):
        if image[x] < 0:
            image[x] = next(free)
    return tuple(image)


def are_isomorphic(a: SetFamily, b: SetFamily) -> bool:
    if a.k != b.k:
        raise ValueError(f"uniformity mismatch: {a.k} vs {b.k}")
    if a.n != b.n or len(a) != len(b):
        return False
    if sorted(degrees(a)) != sorted(degrees(b)):
        return False
    if embeds_into(a, b) is None:
        return False
    return embeds_into(b, a) is not None


def invariant(fam: SetFamily) -> tuple:
    """Isomorphism invariant used to bucket families before exact tests."""
    deg = degrees(fam)
    pair: dict[tuple[int, int], int] = {}
    for e in fam.edges:
        for x, y in itertools.combinations(elements_of(e), 2):
            pair[(x, y)] = pair.get((x, y), 0) + 1
    per_elem = []
    for x in range(fam.n):
        row = sorted(pair.get((min(x, y), max(x, y)), 0) for y in range(fam.n) if y != x)
        per_elem.append((deg[x], tuple(row)))
    return (fam.n, fam.k, len(fam), tuple(sorted(per_elem)))


def isomorphism_classes(families: Sequence[SetFamily]) -> list[SetFamily]:
    """One representative per isomorphism class, in order of first appearance."""
    reps: list[SetFamily] = []
    buckets: dict[tuple, list[SetFamily]] = {}
    for fam in families:
        key = invariant(fam)
        bucket = buckets.setdefault(key, [])
        if any(are_isomorphic(fam, r) for r in bucket):
            continue
        bucket.append(fam)
        reps.append(fam)
    return reps


def star(n: int, k: int, x: int = 0) -> SetFamily:
    bit = 1 << x
    return SetFamily(n, k, tuple(m for m in k_subsets(n, k) if m & bit))
