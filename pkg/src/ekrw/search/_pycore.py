"""Pure-Python branch-and-bound kernel.

This is the reference implementation.  The compiled kernel in ``_core.pyx``
follows it step for step, so both visit the same nodes in the same order and
produce the same counters and trace digest.

Candidates are indexed 0..N-1 (the k-subsets in mask order) and candidate sets
are Python ints used as bitsets.  A search state is the tuple
``(chosen, pool, cells, deg, depth)``:

* ``chosen``  indices already in the family (pairwise intersecting),
* ``pool``    candidates that meet every chosen edge and are still allowed,
* ``cells``   the partition of the ground set generated by the chosen edges,
* ``deg``     element degrees inside ``chosen`` (only tracked with a degree cap).

Two pool members with the same intersection profile against ``cells`` are
swapped by a permutation that fixes every chosen edge and the pool, so when a
branch excludes one of them it excludes the whole orbit.
"""
from __future__ import annotations

import time

MASK64 = (1 << 64) - 1
FNV_PRIME = 1099511628211
FNV_OFFSET = 14695981039346656037

PRUNE_BOUND, PRUNE_INFEASIBLE, LEAF, BRANCH = 1, 2, 3, 4


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class SearchAborted(Exception):
    pass


class Tables:
    """Precomputed bitsets shared by both kernels."""

    def __init__(self, n: int, k: int, universe, min_avoid: int, g2: bool, cap: int):
        self.n, self.k = n, k
        self.universe = list(universe)
        N = self.N = len(self.universe)
        U = self.universe
        self.disj = [0] * N
        for i in range(N):
            row = 0
            for j in range(N):
                if U[i] & U[j] == 0:
                    row |= 1 << j
            self.disj[i] = row
        self.contains = [sum(1 << i for i in range(N) if U[i] >> x & 1) for x in range(n)]
        full = (1 << N) - 1
        self.avoid = [full ^ c for c in self.contains]
        self.min_avoid = min_avoid
        self.low3: list[int] = []
        if g2:
            for a in range(n):
                for b in range(a + 1, n):
                    for c in range(b + 1, n):
                        t = (1 << a) | (1 << b) | (1 << c)
                        self.low3.append(sum(1 << i for i in range(N) if _popcount(U[i] & t) <= 1))
        self.cap = cap
        # orbit keys are base-(k+1) numbers with one digit per cell
        self.use_orbits = (k + 1) ** n < (1 << 63)


class PyKernel:
    def __init__(self, tables: Tables, strict: bool, best: int, deadline: float = 0.0,
                 max_nodes: int = 0, log_limit: int = 0, max_solutions: int = 100000):
        self.t = tables
        self.strict = strict
        self.best = best
        self.deadline = deadline
        self.max_nodes = max_nodes
        self.log_limit = log_limit
        self.max_solutions = max_solutions
        self.solutions: list[int] = []
        self.overflow = False
        self.nodes = 0
        self.prunes_bound = 0
        self.prunes_infeasible = 0
        self.leaves = 0
        self.max_depth = 0
        self.digest = FNV_OFFSET
        self.events: list[tuple] = []
        self.complete = True

    # -- one node ---------------------------------------------------------

    def _mix(self, kind: int, v: int, ub: int) -> None:
        x = (kind << 24) | ((v + 1) << 12) | (ub & 0xFFF)
        self.digest = ((self.digest ^ x) * FNV_PRIME) & MASK64

    def _log(self, *event) -> None:
        if len(self.events) < self.log_limit:
            self.events.append(event)

    def _matching_bound(self, pool: int) -> int:
        disj = self.t.disj
        rest = pool
        m = 0
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            nb = disj[v] & rest
            if nb:
                rest ^= nb & -nb
                m += 1
        return _popcount(pool) - m

    def step(self, state):
        """Evaluate a node: returns (kind, info) and updates counters.

        kind is PRUNE_BOUND / PRUNE_INFEASIBLE / LEAF, or BRANCH with
        info = (v, orbit_bits).
        """
        chosen, pool, cells, deg, depth = state
        t = self.t
        self.nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth
        if (self.nodes & 1023) == 0:
            if self.deadline and time.monotonic() > self.deadline:
                raise SearchAborted
        if self.max_nodes and self.nodes > self.max_nodes:
            raise SearchAborted

        chosen_bits = 0
        for v in chosen:
            chosen_bits |= 1 << v
        alive = chosen_bits | pool
        if t.min_avoid:
            for a in t.avoid:
                if _popcount(alive & a) < t.min_avoid:
                    self.prunes_infeasible += 1
                    self._mix(PRUNE_INFEASIBLE, -1, 0)
                    self._log("infeasible", depth)
                    return PRUNE_INFEASIBLE, None
        for low in t.low3:
            if alive & low == 0:
                self.prunes_infeasible += 1
                self._mix(PRUNE_INFEASIBLE, -1, 0)
                self._log("infeasible", depth)
                return PRUNE_INFEASIBLE, None

        ub = len(chosen) + self._matching_bound(pool)
        if t.cap >= 0:
            tot = 0
            for x in range(t.n):
                d = deg[x] + _popcount(pool & t.contains[x])
                tot += d if d < t.cap else t.cap
            cub = tot // t.k
            if cub < ub:
                ub = cub
        if ub < self.best or (self.strict and ub <= self.best):
            self.prunes_bound += 1
            self._mix(PRUNE_BOUND, -1, ub)
            self._log("bound", depth, ub, self.best)
            return PRUNE_BOUND, None

        # orbits of the pool under permutations preserving every cell
        U = t.universe
        keys: list[int] = []
        orbit_bits: list[int] = []
        orbit_rep: list[int] = []
        orbit_size: list[int] = []
        base = t.k + 1
        for v in _bits(pool):
            if t.use_orbits:
                key = 0
                w = 1
                e = U[v]
                for c in cells:
                    key += _popcount(e & c) * w
                    w *= base
            else:
                key = v
            for i, kk in enumerate(keys):
                if kk == key:
                    orbit_bits[i] |= 1 << v
                    orbit_size[i] += 1
                    break
            else:
                keys.append(key)
                orbit_bits.append(1 << v)
                orbit_rep.append(v)
                orbit_size.append(1)

        pick = -1
        best_deg = 0
        for i, rep in enumerate(orbit_rep):
            d = _popcount(t.disj[rep] & pool)
            if d > best_deg or (d == best_deg and d > 0 and orbit_size[i] < orbit_size[pick]):
                best_deg = d
                pick = i

        if pick < 0 and t.cap >= 0:
            # conflict-free pool, but some element may exceed the cap
            for x in range(t.n):
                if deg[x] + _popcount(pool & t.contains[x]) > t.cap:
                    sub = pool & t.contains[x]
                    v = (sub & -sub).bit_length() - 1
                    pick = next(i for i, b in enumerate(orbit_bits) if b >> v & 1)
                    break

        if pick < 0:
            size = len(chosen) + _popcount(pool)
            self.leaves += 1
            self._mix(LEAF, -1, size)
            self._log("leaf", depth, size)
            fam = chosen_bits | pool
            if size > self.best:
                self.best = size
                self.solutions = [fam]
                self.overflow = False
            elif size == self.best and not self.strict:
                if len(self.solutions) < self.max_solutions:
                    self.solutions.append(fam)
                else:
                    self.overflow = True
            return LEAF, None

        v = orbit_rep[pick]
        self._mix(BRANCH, v, ub)
        self._log("branch", depth, v, orbit_size[pick], ub)
        return BRANCH, (v, orbit_bits[pick])

    def children(self, state, v: int, orbit: int):
        chosen, pool, cells, deg, depth = state
        t = self.t
        e = t.universe[v]
        inc_pool = pool & ~t.disj[v] & ~(1 << v)
        inc_deg = deg
        if t.cap >= 0:
            inc_deg = list(deg)
            for x in _bits(e):
                inc_deg[x] += 1
                if inc_deg[x] >= t.cap:
                    inc_pool &= ~t.contains[x]
            inc_deg = tuple(inc_deg)
        inc_cells = []
        for c in cells:
            a, b = c & e, c & ~e
            if a:
                inc_cells.append(a)
            if b:
                inc_cells.append(b)
        include = (chosen + (v,), inc_pool, tuple(inc_cells), inc_deg, depth + 1)
        exclude = (chosen, pool & ~orbit, cells, deg, depth + 1)
        return include, exclude

    # -- drivers ----------------------------------------------------------

    def _rec(self, state) -> None:
        kind, info = self.step(state)
        if kind != BRANCH:
            return
        inc, exc = self.children(state, *info)
        self._rec(inc)
        self._rec(exc)

    def run(self, state) -> None:
        try:
            self._rec(state)
        except SearchAborted:
            self.complete = False

    def expand(self, state, split_depth: int, out: list) -> None:
        """Process nodes above ``split_depth``; collect the states at that depth."""
        if state[4] >= split_depth:
            out.append(state)
            return
        kind, info = self.step(state)
        if kind != BRANCH:
            return
        inc, exc = self.children(state, *info)
        self.expand(inc, split_depth, out)
        self.expand(exc, split_depth, out)

    def result(self) -> dict:
        return {
            "best": self.best,
            "solutions": list(self.solutions),
            "overflow": self.overflow,
            "nodes": self.nodes,
            "prunes_bound": self.prunes_bound,
            "prunes_infeasible": self.prunes_infeasible,
            "leaves": self.leaves,
            "max_depth": self.max_depth,
            "digest": self.digest,
            "events": list(self.events),
            "complete": self.complete,
        }


def root_state(tables: Tables):
    """Fix the lexicographically first k-set as the first edge."""
    k, n = tables.k, tables.n
    first = tables.universe.index((1 << k) - 1)
    pool = ((1 << tables.N) - 1) & ~tables.disj[first] & ~(1 << first)
    cells = tuple(c for c in ((1 << k) - 1, ((1 << n) - 1) ^ ((1 << k) - 1)) if c)
    deg = None
    if tables.cap >= 0:
        deg = tuple(1 if x < k else 0 for x in range(n))
        for x in range(k):
            if deg[x] >= tables.cap:
                pool &= ~tables.contains[x]
    return ((first,), pool, cells, deg, 0)
