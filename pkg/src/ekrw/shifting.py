"""Compression (shifting) of uniform families and the tools built on it."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .family import SetFamily, elements_of, is_intersecting, mask_of, popcount


def potential(fam: SetFamily) -> int:
    """Sum over edges of the sum of their elements; every real shift lowers it."""
    return sum(sum(elements_of(e)) for e in fam.edges)


def _check_pair(x: int, y: int, n: int) -> None:
    if not x < y:
        raise ValueError(f"shift needs x < y, got x={x}, y={y}")
    if x < 0 or y >= n:
        raise ValueError(f"shift pair ({x}, {y}) outside ground set of size {n}")


def _shift_mask(e: int, x: int, y: int, members) -> int:
    bx, by = 1 << x, 1 << y
    if e & bx or not e & by:
        return e
    moved = (e ^ by) | bx
    return e if moved in members else moved


def shift_edge(fam: SetFamily, e: int, x: int, y: int) -> int:
    _check_pair(x, y, fam.n)
    if e not in fam:
        raise ValueError(f"edge {elements_of(e)} is not a member of the family")
    return _shift_mask(e, x, y, fam._edge_set)


def shift_family(fam: SetFamily, x: int, y: int) -> SetFamily:
    _check_pair(x, y, fam.n)
    members = fam._edge_set
    return fam.with_edges(_shift_mask(e, x, y, members) for e in fam.edges)


def _changed_count(fam: SetFamily, x: int, y: int) -> tuple[SetFamily, int]:
    members = fam._edge_set
    out, changed = [], 0
    for e in fam.edges:
        s = _shift_mask(e, x, y, members)
        changed += s != e
        out.append(s)
    return (fam.with_edges(out) if changed else fam), changed


@dataclass
class ShiftTrace:
    initial: SetFamily
    exclusion: frozenset[int]
    final: SetFamily | None = None
    applied: list[tuple[int, int, int]] = field(default_factory=list)
    potential_history: list[int] = field(default_factory=list)
    passes: int = 0

    def to_dict(self) -> dict:
        return {
            "initial": self.initial.to_dict(),
            "exclusion": sorted(self.exclusion),
            "final": self.final.to_dict() if self.final is not None else None,
            "applied": [list(a) for a in self.applied],
            "potential_history": self.potential_history,
            "passes": self.passes,
        }


def admissible_pairs(n: int, exclusion=()) -> list[tuple[int, int]]:
    ex = set(exclusion)
    free = [v for v in range(n) if v not in ex]
    return list(itertools.combinations(free, 2))


def stabilize(fam: SetFamily, exclusion=()) -> ShiftTrace:
    """Shift until no admissible pair changes the family.

    Pairs are visited in ascending lexicographic order, one full pass at a
    time.  ``potential_history[0]`` is the starting potential and one entry is
    appended per attempted shift.
    """
    ex = frozenset(exclusion)
    for v in ex:
        if not 0 <= v < fam.n:
            raise ValueError(f"excluded element {v} outside ground set")
    pairs = admissible_pairs(fam.n, ex)
    trace = ShiftTrace(initial=fam, exclusion=ex)
    current = fam
    pot = potential(fam)
    trace.potential_history.append(pot)
    while True:
        trace.passes += 1
        pass_changed = 0
        for x, y in pairs:
            current, changed = _changed_count(current, x, y)
            if changed:
                pot = potential(current)
            trace.applied.append((x, y, changed))
            trace.potential_history.append(pot)
            pass_changed += changed
        if not pass_changed:
            break
    trace.final = current
    return trace


def is_stable(fam: SetFamily, exclusion=()) -> bool:
    return all(shift_family(fam, x, y) == fam for x, y in admissible_pairs(fam.n, exclusion))


def avoiding_counts(fam: SetFamily) -> list[int]:
    return [sum(1 for e in fam.edges if not e >> x & 1) for x in range(fam.n)]


def hm_or_ekr_centers(fam: SetFamily) -> frozenset[int]:
    """Elements avoided by at most one edge: the family is EKR or HM there."""
    return frozenset(x for x, c in enumerate(avoiding_counts(fam)) if c <= 1)


def hm_triples(fam: SetFamily) -> list[tuple[int, int, int]]:
    """3-sets meeting every edge in at least two elements."""
    out = []
    for t in itertools.combinations(range(fam.n), 3):
        m = mask_of(t)
        if all(popcount(e & m) >= 2 for e in fam.edges):
            out.append(t)
    return out


@dataclass(frozen=True)
class ShiftOutcome:
    kind: str  # stable | changed | ekr_at_x | hm_at_x | hm_at_triple
    image: SetFamily
    center: int | None = None
    triple: tuple[int, int, int] | None = None


def is_neither_ekr_nor_hm(fam: SetFamily) -> bool:
    if hm_or_ekr_centers(fam):
        return False
    if fam.k == 3 and hm_triples(fam):
        return False
    return True


def classify_shift_outcome(fam: SetFamily, x: int, y: int) -> ShiftOutcome:
    _check_pair(x, y, fam.n)
    if not is_intersecting(fam):
        raise ValueError("classification needs an intersecting family")
    if not is_neither_ekr_nor_hm(fam):
        raise ValueError("classification needs a family that is neither EKR nor HM")
    image = shift_family(fam, x, y)
    if image == fam:
        return ShiftOutcome("stable", image)
    centers = hm_or_ekr_centers(image)
    if centers:
        # only x can become a center: every other element keeps two avoiding edges
        assert centers == {x}, (centers, x)
        avoid = sum(1 for e in image.edges if not e >> x & 1)
        return ShiftOutcome("ekr_at_x" if avoid == 0 else "hm_at_x", image, center=x)
    if fam.k == 3:
        triples = hm_triples(image)
        if triples:
            t = triples[0]
            assert x in t and y not in t, (t, x, y)
            return ShiftOutcome("hm_at_triple", image, triple=t)
    return ShiftOutcome("changed", image)


@dataclass
class GuardedTrace:
    stages: list[ShiftTrace]
    events: list[dict]
    final: SetFamily

    @property
    def exclusion(self) -> frozenset[int]:
        return self.stages[-1].exclusion

    def to_dict(self) -> dict:
        return {
            "stages": [s.to_dict() for s in self.stages],
            "events": self.events,
            "exclusion": sorted(self.exclusion),
            "final": self.final.to_dict(),
        }


def guarded_stabilize(fam: SetFamily, exclusion=()) -> GuardedTrace:
    """Stabilize while refusing shifts that make the family EKR or HM.

    When a shift S_xy would land the family in a star, a Hilton-Milner family
    or (k=3) inside some T(S), the shift is skipped, x and y join the exclusion
    set together with up to two witness elements, and shifting restarts on the
    admissible pairs that remain.
    """
    if not is_intersecting(fam) or not is_neither_ekr_nor_hm(fam):
        raise ValueError("guarded shifting needs an intersecting family that is neither EKR nor HM")
    ex = set(exclusion)
    current = fam
    stages: list[ShiftTrace] = []
    events: list[dict] = []
    while True:
        trace = ShiftTrace(initial=current, exclusion=frozenset(ex))
        trace.potential_history.append(potential(current))
        pairs = admissible_pairs(fam.n, ex)
        blocked = None
        while blocked is None:
            trace.passes += 1
            pass_changed = 0
            for x, y in pairs:
                outcome = classify_shift_outcome(current, x, y)
                if outcome.kind in ("ekr_at_x", "hm_at_x", "hm_at_triple"):
                    blocked = (x, y, outcome)
                    break
                changed = 0
                if outcome.kind == "changed":
                    changed = sum(1 for a, b in zip(current.edges, outcome.image.edges) if a != b)
                    changed = max(changed, 1)
                    current = outcome.image
                trace.applied.append((x, y, changed))
                trace.potential_history.append(potential(current))
                pass_changed += changed
            if blocked is None and not pass_changed:
                break
        trace.final = current
        stages.append(trace)
        if blocked is None:
            return GuardedTrace(stages, events, current)
        x, y, outcome = blocked
        witnesses: list[int] = []
        if outcome.kind == "hm_at_x":
            lone = next(e for e in outcome.image.edges if not e >> x & 1)
            limit = 2 if fam.k == 3 else 1
            witnesses = [z for z in elements_of(lone) if z != y and z not in ex][:limit]
        elif outcome.kind == "hm_at_triple":
            witnesses = [z for z in outcome.triple if z != x and z not in ex][:2]
        grown = [v for v in (x, y, *witnesses) if v not in ex]
        events.append(
            {"pair": [x, y], "outcome": outcome.kind, "added": grown,
             "triple": list(outcome.triple) if outcome.triple else None}
        )
        ex.update(grown)


@dataclass
class AiProfile:
    window: frozenset[int]
    classes: dict[int, frozenset[int]]
    union_intersecting: bool

    @property
    def counts(self) -> dict[int, int]:
        return {i: len(c) for i, c in self.classes.items()}

    def to_dict(self) -> dict:
        return {
            "window": sorted(self.window),
            "counts": {str(i): c for i, c in self.counts.items()},
            "classes": {str(i): [list(elements_of(m)) for m in sorted(c)] for i, c in self.classes.items()},
            "union_intersecting": self.union_intersecting,
        }


def ai_profile(fam: SetFamily, window) -> AiProfile:
    win = frozenset(window)
    for v in win:
        if not 0 <= v < fam.n:
            raise ValueError(f"window element {v} outside ground set")
    wmask = mask_of(win)
    classes: dict[int, set[int]] = {i: set() for i in range(1, fam.k + 1)}
    for e in fam.edges:
        t = e & wmask
        i = popcount(t)
        if i:
            classes[i].add(t)
    traces = set().union(*classes.values())
    pool = list(traces | set(fam.edges))
    union_ok = all(a & b for a, b in itertools.combinations(pool, 2))
    return AiProfile(win, {i: frozenset(c) for i, c in classes.items()}, union_ok)


def window_intersecting(fam: SetFamily, window) -> bool:
    """Every two edges, an edge with itself included, share an element of the window."""
    wmask = mask_of(window)
    traces = [e & wmask for e in fam.edges]
    if any(t == 0 for t in traces):
        return False
    return all(a & b for a, b in itertools.combinations(traces, 2))


def default_window(n: int, k: int, exclusion=()) -> frozenset[int]:
    """The counting window: the exclusion set padded with the first free elements.

    Padding brings the window to 2k elements for k >= 4 and to 7 for k = 3.
    """
    ex = sorted(set(exclusion))
    target = 7 if k == 3 else 2 * k
    free = [v for v in range(n) if v not in ex]
    need = target - len(ex)
    if need > len(free):
        raise ValueError("ground set too small for the requested window")
    return frozenset(ex) | frozenset(free[:need])


def preimage_parts(target: SetFamily, x: int, y: int) -> tuple[list[int], list[int]]:
    """The movable edges B_x of ``target`` and their (k-1)-sets with x removed."""
    _check_pair(x, y, target.n)
    bx, by = 1 << x, 1 << y
    members = target._edge_set
    moved = [e for e in target.edges if e & bx and not e & by and (e ^ bx) | by not in members]
    return moved, [e ^ bx for e in moved]


def enumerate_shift_preimages(target: SetFamily, x: int, y: int) -> list[SetFamily]:
    """All intersecting H with S_xy(H) = target, sorted by edge tuple."""
    from .separability import SetSystem, cross_intersecting_partitions

    moved, base = preimage_parts(target, x, y)
    bx, by = 1 << x, 1 << y
    fixed = [e for e in target.edges if e not in set(moved)]
    found: set[SetFamily] = set()
    parts = cross_intersecting_partitions(SetSystem(target.n, tuple(sorted(base))))
    for p1, p2 in parts:
        for to_y, to_x in ((p1, p2), (p2, p1)):
            cand = target.with_edges(fixed + [b | by for b in to_y] + [b | bx for b in to_x])
            if len(cand) != len(target):
                continue
            if is_intersecting(cand) and shift_family(cand, x, y) == target:
                found.add(cand)
    return sorted(found, key=lambda f: f.edges)


def enumerate_shift_preimages_bruteforce(target: SetFamily, x: int, y: int) -> list[SetFamily]:
    """Oracle: try every assignment of the movable edges (2^|B| candidates)."""
    moved, base = preimage_parts(target, x, y)
    if len(base) > 20:
        raise ValueError("brute-force preimage enumeration limited to |B| <= 20")
    bx, by = 1 << x, 1 << y
    fixed = [e for e in target.edges if e not in set(moved)]
    found = set()
    for bits in range(1 << len(base)):
        edges = list(fixed)
        for i, b in enumerate(base):
            edges.append(b | (by if bits >> i & 1 else bx))
        cand = target.with_edges(edges)
        if len(cand) == len(target) and is_intersecting(cand) and shift_family(cand, x, y) == target:
            found.add(cand)
    return sorted(found, key=lambda f: f.edges)
