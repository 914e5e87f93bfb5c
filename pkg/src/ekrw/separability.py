"""Cross-intersecting splits of a set system and the families that have none."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .family import SetFamily, elements_of, mask_of

MAX_COMPONENTS = 30


@dataclass(frozen=True)
class SetSystem:
    """Members of mixed sizes over range(n), kept sorted and distinct."""

    n: int
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(sorted(set(self.edges))))
        limit = 1 << self.n
        for e in self.edges:
            if not 0 < e < limit:
                raise ValueError(f"member {e:#x} is empty or outside range({self.n})")

    @classmethod
    def from_sets(cls, n: int, sets) -> "SetSystem":
        return cls(n, tuple(mask_of(s) for s in sets))

    def __len__(self) -> int:
        return len(self.edges)

    def as_sets(self) -> list[tuple[int, ...]]:
        return [elements_of(e) for e in self.edges]

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(s) for s in self.as_sets()]}


def as_system(fam) -> SetSystem:
    if isinstance(fam, SetSystem):
        return fam
    return SetSystem(fam.n, tuple(fam.edges))


def is_cross_intersecting(a, b) -> bool:
    ea = a.edges if hasattr(a, "edges") else a
    eb = b.edges if hasattr(b, "edges") else b
    return all(x & y for x in ea for y in eb)


def disjointness_components(fam) -> list[list[int]]:
    """Connected components (as member lists) of the graph joining disjoint members."""
    edges = list(as_system(fam).edges)
    seen = [False] * len(edges)
    comps = []
    for start in range(len(edges)):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            i = stack.pop()
            comp.append(edges[i])
            for j in range(len(edges)):
                if not seen[j] and edges[i] & edges[j] == 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def non_separable(fam) -> bool:
    """No split into two nonempty cross-intersecting parts exists."""
    return len(disjointness_components(fam)) <= 1


def cross_intersecting_partitions(fam) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All unordered splits (B1, B2) with B1, B2 cross-intersecting.

    Disjoint members must end up on the same side, so a split is a choice of
    side per component of the disjointness graph.  The component holding the
    smallest member always goes to B1, which lists each unordered split once;
    the trivial split (everything, nothing) comes first.
    """
    comps = disjointness_components(fam)
    if len(comps) > MAX_COMPONENTS:
        raise ValueError(
            f"{len(comps)} components give 2^{len(comps) - 1} splits; limit is {MAX_COMPONENTS}"
        )
    if not comps:
        return [((), ())]
    first, rest = comps[0], comps[1:]
    out = []
    for bits in range(1 << len(rest)):
        b1, b2 = list(first), []
        for i, comp in enumerate(rest):
            (b2 if bits >> i & 1 else b1).extend(comp)
        out.append((tuple(sorted(b1)), tuple(sorted(b2))))
    return out


def _canonical_split(b1, b2):
    b1, b2 = tuple(sorted(b1)), tuple(sorted(b2))
    if not b1 or (b2 and b2[0] < b1[0]):
        b1, b2 = b2, b1
    return b1, b2


def cross_intersecting_partitions_bruteforce(fam) -> set:
    """Oracle: test every one of the 2^|B| side assignments."""
    edges = list(as_system(fam).edges)
    if len(edges) > 20:
        raise ValueError("brute-force split enumeration limited to 20 members")
    out = set()
    for bits in range(1 << len(edges)):
        b1 = [e for i, e in enumerate(edges) if not bits >> i & 1]
        b2 = [e for i, e in enumerate(edges) if bits >> i & 1]
        if is_cross_intersecting(b1, b2):
            out.add(_canonical_split(b1, b2))
    return out


def non_separable_bruteforce(fam) -> bool:
    return len(cross_intersecting_partitions_bruteforce(fam)) <= 1


def build_prop1_family(c_size: int, a: int, b: int, s: int | None = None) -> SetSystem:
    """{z1} + D and {z2} + E over all a-sets D and b-sets E of C.

    C is range(c_size); z1 and z2 are the next two elements.
    """
    if s is None:
        s = a + b
    if a < 1 or b < 1:
        raise ValueError("a and b must be at least 1")
    if s < 2 or a + b > s:
        raise ValueError(f"need s >= 2 and a + b <= s, got a={a}, b={b}, s={s}")
    if c_size < s + 1:
        raise ValueError(f"need |C| >= s + 1 = {s + 1}, got {c_size}")
    z1, z2 = 1 << c_size, 1 << (c_size + 1)
    members = [mask_of(d) | z1 for d in itertools.combinations(range(c_size), a)]
    members += [mask_of(e) | z2 for e in itertools.combinations(range(c_size), b)]
    return SetSystem(c_size + 2, tuple(members))


def build_prop2_family(m: int, r: int, a_size: int) -> SetFamily:
    """r-subsets B of range(m) with 0 < |B & A| < |A|, where A = range(a_size)."""
    if r < 2:
        raise ValueError("need r >= 2")
    if m < 2 * r + 1:
        raise ValueError(f"need m >= 2r + 1 = {2 * r + 1}, got {m}")
    if a_size not in (r - 1, r):
        raise ValueError(f"|A| must be r-1 or r, got {a_size}")
    amask = (1 << a_size) - 1
    members = []
    for c in itertools.combinations(range(m), r):
        t = bin(mask_of(c) & amask).count("1")
        if 0 < t < a_size:
            members.append(mask_of(c))
    return SetFamily(m, r, tuple(sorted(members)))


def graph_family(n: int, pairs) -> SetFamily:
    """A simple graph as a 2-uniform family."""
    return SetFamily.from_sets(n, 2, pairs)


def complete_graph(n: int) -> SetFamily:
    return graph_family(n, itertools.combinations(range(n), 2))


def complete_bipartite(p: int, q: int) -> SetFamily:
    return graph_family(p + q, [(i, p + j) for i in range(p) for j in range(q)])
