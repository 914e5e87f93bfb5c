# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch-and-bound kernel; mirrors ``_pycore.PyKernel`` node for node."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

import time

DEF W = 8            # 8 x 64 = 512 candidate bits
DEF MAXN = 64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef uint64_t FNV_PRIME = 1099511628211ULL
cdef uint64_t FNV_OFFSET = 14695981039346656037ULL

cdef enum:
    PRUNE_BOUND = 1
    PRUNE_INFEASIBLE = 2
    LEAF = 3
    BRANCH = 4


cdef inline int pc(const uint64_t* a) nogil:
    cdef int s = 0, w
    for w in range(W):
        s += __builtin_popcountll(a[w])
    return s


cdef inline int pc_and(const uint64_t* a, const uint64_t* b) nogil:
    cdef int s = 0, w
    for w in range(W):
        s += __builtin_popcountll(a[w] & b[w])
    return s


cdef inline bint any_and(const uint64_t* a, const uint64_t* b) nogil:
    cdef int w
    for w in range(W):
        if a[w] & b[w]:
            return True
    return False


cdef void to_words(object x, uint64_t* out):
    cdef int w
    for w in range(W):
        out[w] = <uint64_t>(x & 0xFFFFFFFFFFFFFFFF)
        x = x >> 64


cdef object from_words(const uint64_t* a):
    cdef int w
    x = 0
    for w in range(W - 1, -1, -1):
        x = (x << 64) | a[w]
    return x


class SearchAborted(Exception):
    pass


cdef class CKernel:
    cdef int n, k, N, cap, min_avoid, n_low3, use_orbits
    cdef uint64_t* universe
    cdef uint64_t* disj
    cdef uint64_t* contains
    cdef uint64_t* avoid
    cdef uint64_t* low3
    cdef int chosen[1024]
    # per-node scratch for orbit grouping
    cdef uint64_t okey[512]
    cdef int orep[512]
    cdef int osize[512]
    cdef uint64_t obits[512 * W]
    cdef uint64_t pick_bits[W]
    cdef int pick_v

    cdef public bint strict
    cdef public int best
    cdef public double deadline
    cdef public long long max_nodes
    cdef public int log_limit
    cdef public int max_solutions
    cdef public list solutions
    cdef public bint overflow
    cdef public long long nodes, prunes_bound, prunes_infeasible, leaves
    cdef public int max_depth
    cdef public uint64_t digest
    cdef public list events
    cdef public bint complete

    def __cinit__(self):
        self.universe = NULL
        self.disj = NULL
        self.contains = NULL
        self.avoid = NULL
        self.low3 = NULL

    def __init__(self, tables, bint strict, int best, double deadline=0.0,
                 long long max_nodes=0, int log_limit=0, int max_solutions=100000):
        cdef int i, x
        if tables.N > 512 or tables.n > MAXN:
            raise ValueError("compiled kernel handles at most 512 candidates")
        self.n, self.k, self.N = tables.n, tables.k, tables.N
        self.cap = tables.cap
        self.min_avoid = tables.min_avoid
        self.use_orbits = tables.use_orbits
        self.universe = <uint64_t*>malloc(self.N * sizeof(uint64_t))
        self.disj = <uint64_t*>malloc(self.N * W * sizeof(uint64_t))
        self.contains = <uint64_t*>malloc(self.n * W * sizeof(uint64_t))
        self.avoid = <uint64_t*>malloc(self.n * W * sizeof(uint64_t))
        self.n_low3 = len(tables.low3)
        self.low3 = <uint64_t*>malloc((self.n_low3 + 1) * W * sizeof(uint64_t))
        for i in range(self.N):
            self.universe[i] = tables.universe[i]
            to_words(tables.disj[i], &self.disj[i * W])
        for x in range(self.n):
            to_words(tables.contains[x], &self.contains[x * W])
            to_words(tables.avoid[x], &self.avoid[x * W])
        for i in range(self.n_low3):
            to_words(tables.low3[i], &self.low3[i * W])
        self.strict = strict
        self.best = best
        self.deadline = deadline
        self.max_nodes = max_nodes
        self.log_limit = log_limit
        self.max_solutions = max_solutions
        self.solutions = []
        self.overflow = False
        self.nodes = 0
        self.prunes_bound = 0
        self.prunes_infeasible = 0
        self.leaves = 0
        self.max_depth = 0
        self.digest = FNV_OFFSET
        self.events = []
        self.complete = True

    def __dealloc__(self):
        free(self.universe)
        free(self.disj)
        free(self.contains)
        free(self.avoid)
        free(self.low3)

    cdef inline void mix(self, int kind, int v, int ub):
        cdef uint64_t x = (<uint64_t>kind << 24) | (<uint64_t>(v + 1) << 12) | <uint64_t>(ub & 0xFFF)
        self.digest = (self.digest ^ x) * FNV_PRIME

    cdef int matching_bound(self, const uint64_t* pool):
        cdef uint64_t rest[W]
        cdef uint64_t nb
        cdef int w, v, u, ww, m = 0, total
        memcpy(rest, pool, W * sizeof(uint64_t))
        total = pc(pool)
        for w in range(W):
            while rest[w]:
                v = w * 64 + __builtin_ctzll(rest[w])
                rest[w] &= rest[w] - 1
                for ww in range(w, W):
                    nb = self.disj[v * W + ww] & rest[ww]
                    if nb:
                        rest[ww] &= ~(nb & (~nb + 1))
                        m += 1
                        break
        return total - m

    cdef int step(self, int nchosen, const uint64_t* pool, const uint64_t* cells, int ncells,
                  const int* deg, int depth) except -1:
        cdef int i, j, x, w, v, d, tot, cub, ub, size, norb, pick, best_deg, base
        cdef uint64_t alive[W]
        cdef uint64_t key, mult, e, b
        self.nodes += 1
        if depth > self.max_depth:
            self.max_depth = depth
        if (self.nodes & 1023) == 0:
            if self.deadline and time.monotonic() > self.deadline:
                raise SearchAborted()
        if self.max_nodes and self.nodes > self.max_nodes:
            raise SearchAborted()

        memcpy(alive, pool, W * sizeof(uint64_t))
        for i in range(nchosen):
            v = self.chosen[i]
            alive[v >> 6] |= (<uint64_t>1) << (v & 63)
        if self.min_avoid:
            for x in range(self.n):
                if pc_and(alive, &self.avoid[x * W]) < self.min_avoid:
                    self.prunes_infeasible += 1
                    self.mix(PRUNE_INFEASIBLE, -1, 0)
                    if len(self.events) < self.log_limit:
                        self.events.append(("infeasible", depth))
                    return PRUNE_INFEASIBLE
        for i in range(self.n_low3):
            if not any_and(alive, &self.low3[i * W]):
                self.prunes_infeasible += 1
                self.mix(PRUNE_INFEASIBLE, -1, 0)
                if len(self.events) < self.log_limit:
                    self.events.append(("infeasible", depth))
                return PRUNE_INFEASIBLE

        ub = nchosen + self.matching_bound(pool)
        if self.cap >= 0:
            tot = 0
            for x in range(self.n):
                d = deg[x] + pc_and(pool, &self.contains[x * W])
                tot += d if d < self.cap else self.cap
            cub = tot // self.k
            if cub < ub:
                ub = cub
        if ub < self.best or (self.strict and ub <= self.best):
            self.prunes_bound += 1
            self.mix(PRUNE_BOUND, -1, ub)
            if len(self.events) < self.log_limit:
                self.events.append(("bound", depth, ub, self.best))
            return PRUNE_BOUND

        # orbit grouping
        norb = 0
        base = self.k + 1
        for w in range(W):
            b = pool[w]
            while b:
                v = w * 64 + __builtin_ctzll(b)
                b &= b - 1
                if self.use_orbits:
                    key = 0
                    mult = 1
                    e = self.universe[v]
                    for i in range(ncells):
                        key += <uint64_t>__builtin_popcountll(e & cells[i]) * mult
                        mult *= base
                else:
                    key = v
                for i in range(norb):
                    if self.okey[i] == key:
                        self.obits[i * W + (v >> 6)] |= (<uint64_t>1) << (v & 63)
                        self.osize[i] += 1
                        break
                else:
                    self.okey[norb] = key
                    self.orep[norb] = v
                    self.osize[norb] = 1
                    memset(&self.obits[norb * W], 0, W * sizeof(uint64_t))
                    self.obits[norb * W + (v >> 6)] = (<uint64_t>1) << (v & 63)
                    norb += 1

        pick = -1
        best_deg = 0
        for i in range(norb):
            d = pc_and(&self.disj[self.orep[i] * W], pool)
            if d > best_deg or (d == best_deg and d > 0 and self.osize[i] < self.osize[pick]):
                best_deg = d
                pick = i

        if pick < 0 and self.cap >= 0:
            for x in range(self.n):
                if deg[x] + pc_and(pool, &self.contains[x * W]) > self.cap:
                    v = -1
                    for w in range(W):
                        b = pool[w] & self.contains[x * W + w]
                        if b:
                            v = w * 64 + __builtin_ctzll(b)
                            break
                    for i in range(norb):
                        if (self.obits[i * W + (v >> 6)] >> (v & 63)) & 1:
                            pick = i
                            break
                    break

        if pick < 0:
            size = nchosen + pc(pool)
            self.leaves += 1
            self.mix(LEAF, -1, size)
            if len(self.events) < self.log_limit:
                self.events.append(("leaf", depth, size))
            if size > self.best:
                self.best = size
                self.solutions = [from_words(alive)]
                self.overflow = False
            elif size == self.best and not self.strict:
                if len(self.solutions) < self.max_solutions:
                    self.solutions.append(from_words(alive))
                else:
                    self.overflow = True
            return LEAF

        v = self.orep[pick]
        self.mix(BRANCH, v, ub)
        if len(self.events) < self.log_limit:
            self.events.append(("branch", depth, v, self.osize[pick], ub))
        self.pick_v = v
        memcpy(self.pick_bits, &self.obits[pick * W], W * sizeof(uint64_t))
        return BRANCH

    cdef int rec(self, int nchosen, const uint64_t* pool, const uint64_t* cells, int ncells,
                 const int* deg, int depth) except -1:
        cdef uint64_t inc_pool[W]
        cdef uint64_t exc_pool[W]
        cdef uint64_t inc_cells[MAXN]
        cdef int inc_deg[MAXN]
        cdef int kind, v, w, x, i, nc
        cdef uint64_t e, a, b
        kind = self.step(nchosen, pool, cells, ncells, deg, depth)
        if kind != BRANCH:
            return 0
        v = self.pick_v
        for w in range(W):
            inc_pool[w] = pool[w] & ~self.disj[v * W + w]
            exc_pool[w] = pool[w] & ~self.pick_bits[w]
        inc_pool[v >> 6] &= ~((<uint64_t>1) << (v & 63))
        e = self.universe[v]
        if self.cap >= 0:
            memcpy(inc_deg, deg, self.n * sizeof(int))
            for x in range(self.n):
                if (e >> x) & 1:
                    inc_deg[x] += 1
                    if inc_deg[x] >= self.cap:
                        for w in range(W):
                            inc_pool[w] &= ~self.contains[x * W + w]
        nc = 0
        for i in range(ncells):
            a = cells[i] & e
            b = cells[i] & ~e
            if a:
                inc_cells[nc] = a
                nc += 1
            if b:
                inc_cells[nc] = b
                nc += 1
        self.chosen[nchosen] = v
        self.rec(nchosen + 1, inc_pool, inc_cells, nc, inc_deg, depth + 1)
        self.rec(nchosen, exc_pool, cells, ncells, deg, depth + 1)
        return 0

    def run(self, state):
        cdef uint64_t pool[W]
        cdef uint64_t cells[MAXN]
        cdef int deg[MAXN]
        cdef int i, nchosen
        chosen, pool_int, cell_list, deg_list, depth = state
        nchosen = len(chosen)
        for i in range(nchosen):
            self.chosen[i] = chosen[i]
        to_words(pool_int, pool)
        for i in range(len(cell_list)):
            cells[i] = cell_list[i]
        memset(deg, 0, MAXN * sizeof(int))
        if deg_list is not None:
            for i in range(self.n):
                deg[i] = deg_list[i]
        try:
            self.rec(nchosen, pool, cells, len(cell_list), deg, depth)
        except SearchAborted:
            self.complete = False

    def result(self):
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
