"""Exact maximum intersecting families under exclusion constraints.

The search is a branch-and-bound for a maximum independent set of the Kneser
graph on all k-subsets, i.e. a maximum family with no two disjoint members.
The first member is fixed to {0, ..., k-1}; deeper symmetry is cut with the
cell-orbit rule described in ``_pycore``.

Two modes share the kernel:

* strict (``max_family``): prune when the bound cannot beat the incumbent,
  report one witness;
* enumerate (``enumerate_maximum``): prune only when the bound is below the
  incumbent, keep every leaf of maximum size and reduce them up to isomorphism.
"""
from __future__ import annotations

import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

from .. import canonical
from ..family import SetFamily, is_intersecting, is_trivial, isomorphism_classes, k_subsets, max_degree
from ..shifting import hm_or_ekr_centers, hm_triples
from . import kernel as _kernel
from ._pycore import FNV_OFFSET, FNV_PRIME, MASK64, PyKernel, SearchAborted, Tables, root_state

MAX_UNIVERSE = 512
DEFAULT_BUDGET = 300.0
DEFAULT_SPLIT_DEPTH = 2


def default_budget() -> float:
    env = os.environ.get("EKRW_BUDGET_SECS")
    if env:
        try:
            return float(env)
        except ValueError:
            raise ValueError(f"EKRW_BUDGET_SECS must be a number of seconds, got {env!r}") from None
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class ConstraintSet:
    """Exclusions on top of the intersecting property.

    ``forbid_trivial``: some edge avoids each element (not inside a star);
    ``forbid_hm``: at least two edges avoid each element;
    ``forbid_g2``: every 3-set meets some edge in at most one element;
    ``max_degree_cap``: no element lies in more than this many edges;
    ``min_avoid``: at least this many edges avoid each element.
    """

    forbid_trivial: bool = False
    forbid_hm: bool = False
    forbid_g2: bool = False
    max_degree_cap: int | None = None
    min_avoid: int = 0
    require_intersecting: bool = field(default=True, init=False)

    def __post_init__(self) -> None:
        if self.max_degree_cap is not None and self.max_degree_cap < 0:
            raise ValueError("degree cap must be non-negative")
        if self.min_avoid < 0:
            raise ValueError("min_avoid must be non-negative")

    @property
    def effective_min_avoid(self) -> int:
        base = 2 if self.forbid_hm else 1 if self.forbid_trivial else 0
        return max(base, self.min_avoid)

    def satisfied_by(self, fam: SetFamily) -> bool:
        """Independent re-check of every active constraint on a finished family."""
        if not is_intersecting(fam):
            return False
        if not fam.edges:
            return not (self.forbid_trivial or self.forbid_hm or self.forbid_g2 or self.min_avoid)
        if self.forbid_trivial and is_trivial(fam) is not None:
            return False
        if self.forbid_hm and hm_or_ekr_centers(fam):
            return False
        if self.forbid_g2 and hm_triples(fam):
            return False
        if self.min_avoid and any(
            sum(1 for e in fam.edges if not e >> x & 1) < self.min_avoid for x in range(fam.n)
        ):
            return False
        if self.max_degree_cap is not None and max_degree(fam) > self.max_degree_cap:
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "forbid_trivial": self.forbid_trivial,
            "forbid_hm": self.forbid_hm,
            "forbid_g2": self.forbid_g2,
            "max_degree_cap": self.max_degree_cap,
            "min_avoid": self.min_avoid,
        }

    @classmethod
    def from_names(cls, names, cap: int | None = None, min_avoid: int = 0) -> "ConstraintSet":
        flags = {"trivial": False, "hm": False, "g2": False}
        for name in names:
            name = name.strip()
            if not name:
                continue
            if name not in flags:
                raise ValueError(f"unknown exclusion {name!r}; expected trivial, hm or g2")
            flags[name] = True
        return cls(flags["trivial"], flags["hm"], flags["g2"], cap, min_avoid)


@dataclass
class SearchOutcome:
    n: int
    k: int
    constraints: ConstraintSet
    mode: str
    optimum: int
    witnesses: list[SetFamily]
    explored_nodes: int
    elapsed: float
    complete: bool
    certificate: dict

    def to_dict(self, with_names: bool = True) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "mode": self.mode,
            "constraints": self.constraints.to_dict(),
            "optimum": self.optimum,
            "optimum_is_lower_bound": not self.complete,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "witness_classes": [name_family(w) for w in self.witnesses] if with_names else None,
            "explored_nodes": self.explored_nodes,
            "elapsed": round(self.elapsed, 3),
            "complete": self.complete,
            "certificate": self.certificate,
        }


# -- canonical families: seeds and names ------------------------------------


def canonical_catalogue(n: int, k: int) -> list[tuple[str, SetFamily]]:
    """Labelled canonical families that exist at (n, k), in a fixed order."""
    out = []
    specs = [("F0", canonical.star_spec(n, k)), ("F1", canonical.hm_spec(n, k))]
    specs += [(f"G{i}", canonical.g_spec(n, k, i)) for i in range(2, k + 1)]
    specs += [(f"J{i}", canonical.j_spec(n, k, i)) for i in range(1, k)]
    for label, spec in specs:
        try:
            out.append((label, canonical.build(spec)))
        except (ValueError, StopIteration, IndexError):
            continue
    return out


def name_family(fam: SetFamily) -> str:
    """Label of the first canonical family isomorphic to ``fam``, else ``unnamed``."""
    for label, cand in canonical_catalogue(fam.n, fam.k):
        if len(cand) == len(fam) and are_iso(cand, fam):
            return label
    return "unnamed"


def are_iso(a: SetFamily, b: SetFamily) -> bool:
    from ..family import are_isomorphic

    return are_isomorphic(a, b)


def best_seed(n: int, k: int, constraints: ConstraintSet) -> tuple[int, SetFamily | None, str | None]:
    best, fam, label = 0, None, None
    for lab, cand in canonical_catalogue(n, k):
        if len(cand) > best and constraints.satisfied_by(cand):
            best, fam, label = len(cand), cand, lab
    return best, fam, label


# -- driver ------------------------------------------------------------------

_WORKER: dict = {}


def _init_worker(tables, backend, strict, seed, deadline, log_limit, max_nodes):
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    _WORKER.update(tables=tables, backend=backend, strict=strict, seed=seed,
                   deadline=deadline, log_limit=log_limit, max_nodes=max_nodes)


def _solve_task(state) -> dict:
    w = _WORKER
    kern = _kernel.make_kernel(
        w["backend"], w["tables"], strict=w["strict"], best=w["seed"], deadline=w["deadline"],
        max_nodes=w["max_nodes"], log_limit=w["log_limit"],
    )
    kern.run(state)
    return kern.result()


def build_tables(n: int, k: int, constraints: ConstraintSet) -> Tables:
    cap = -1 if constraints.max_degree_cap is None else constraints.max_degree_cap
    return Tables(n, k, k_subsets(n, k), constraints.effective_min_avoid, constraints.forbid_g2, cap)


def _search(n, k, constraints, budget, workers, backend, split_depth, log_limit, max_nodes, mode):
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    size = comb(n, k)
    if size > MAX_UNIVERSE:
        raise ValueError(f"C({n},{k}) = {size} candidates exceeds the limit of {MAX_UNIVERSE}")
    if n <= 2 * k:
        warnings.warn(f"n={n} <= 2k={2 * k}: outside the range the bounds are stated for", stacklevel=3)
    constraints = constraints or ConstraintSet()
    budget = default_budget() if budget is None else float(budget)
    backend = backend or _kernel.default_backend()
    strict = mode == "strict"
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

    start = time.monotonic()
    deadline = start + budget if budget > 0 else 0.0
    seed, seed_fam, seed_label = best_seed(n, k, constraints)
    tables = build_tables(n, k, constraints)

    cap = constraints.max_degree_cap
    states: list = []
    prefix = PyKernel(tables, strict=strict, best=seed, deadline=deadline,
                      max_nodes=max_nodes, log_limit=log_limit)
    if cap != 0:
        try:
            prefix.expand(root_state(tables), split_depth, states)
        except SearchAborted:
            prefix.complete = False
            states = []
    results = [prefix.result()]
    if states:
        init = (tables, backend, strict, seed, deadline, log_limit, max_nodes)
        if workers and workers > 1 and len(states) > 1:
            with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=init) as ex:
                results += list(ex.map(_solve_task, states))
        else:
            _init_worker(*init)
            results += [_solve_task(s) for s in states]
    elapsed = time.monotonic() - start

    complete = all(r["complete"] for r in results)
    overflow = any(r["overflow"] for r in results)
    best = max([seed] + [r["best"] for r in results])
    raw: list[int] = []
    for r in results:
        if r["best"] == best and r["solutions"]:
            raw.extend(r["solutions"])
            if strict:
                break
    universe = tables.universe
    fams = [
        SetFamily(n, k, tuple(sorted(universe[i] for i in range(tables.N) if bits >> i & 1)))
        for bits in raw
    ]
    fams.sort(key=lambda f: f.edges)
    if not fams and seed_fam is not None and best == seed:
        fams = [seed_fam]
    witnesses = isomorphism_classes(fams)
    for w in witnesses:
        if not constraints.satisfied_by(w) or len(w) != best:
            raise AssertionError(f"search produced an invalid witness: {w}")

    digest = FNV_OFFSET
    for r in results:
        digest = ((digest ^ r["digest"]) * FNV_PRIME) & MASK64
    nodes = sum(r["nodes"] for r in results)
    certificate = {
        "method": "branch-and-bound over k-subsets, include/exclude",
        "backend": backend,
        "mode": mode,
        "universe_size": size,
        "fixed_first_edge": list(range(k)),
        "symmetry": "orbits of permutations preserving the cells cut out by chosen edges",
        "bounds": ["greedy matching on the disjointness graph of the pool"]
        + (["sum over elements of min(cap, reachable degree) / k"] if cap is not None else []),
        "feasibility": {
            "min_avoid": tables.min_avoid,
            "every_3set_met_in_at_most_one": constraints.forbid_g2,
            "degree_cap": cap,
        },
        "seed": {"size": seed, "family": seed_label},
        "split_depth": split_depth,
        "tasks": len(states),
        "nodes": nodes,
        "prunes": {
            "bound": sum(r["prunes_bound"] for r in results),
            "infeasible": sum(r["prunes_infeasible"] for r in results),
        },
        "leaves": sum(r["leaves"] for r in results),
        "max_depth": max(r["max_depth"] for r in results),
        "trace_digest": f"{digest:016x}",
        "raw_solutions": len(raw),
        "solution_overflow": overflow,
        "complete": complete,
        "proven": complete and not overflow,
    }
    if log_limit:
        events = []
        for r in results:
            events.extend(r["events"])
        certificate["events"] = [list(e) for e in events[:log_limit]]
    return SearchOutcome(n, k, constraints, mode, best, witnesses, nodes, elapsed,
                         complete and not overflow, certificate)


def max_family(n: int, k: int, constraints: ConstraintSet | None = None, budget: float | None = None,
               workers: int = 1, backend: str | None = None, split_depth: int = DEFAULT_SPLIT_DEPTH,
               log_limit: int = 0, max_nodes: int = 0) -> SearchOutcome:
    """Largest intersecting family meeting ``constraints``; one witness."""
    return _search(n, k, constraints, budget, workers, backend, split_depth, log_limit, max_nodes, "strict")


def enumerate_maximum(n: int, k: int, constraints: ConstraintSet | None = None, budget: float | None = None,
                      workers: int = 1, backend: str | None = None, split_depth: int = DEFAULT_SPLIT_DEPTH,
                      log_limit: int = 0, max_nodes: int = 0) -> SearchOutcome:
    """All maximum families meeting ``constraints``, one per isomorphism class."""
    return _search(n, k, constraints, budget, workers, backend, split_depth, log_limit, max_nodes, "enumerate")
