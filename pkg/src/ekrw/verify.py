"""Compare closed-form bounds with exact search results."""
from __future__ import annotations

from . import canonical
from .family import max_degree
from .search.engine import ConstraintSet, enumerate_maximum, max_family, name_family

THEOREMS = ("ekr", "hm", "hm2", "main", "maxdeg")

VERIFIED, MISMATCH, INCONCLUSIVE = "verified", "mismatch", "inconclusive"
EXIT_CODES = {VERIFIED: 0, MISMATCH: 2, INCONCLUSIVE: 3}


def parse_theorem(text: str) -> tuple[str, int | None]:
    """``ekr``, ``hm``, ``hm2:<s>``, ``main`` or ``maxdeg``."""
    name, _, arg = text.lower().partition(":")
    if name not in THEOREMS:
        raise ValueError(f"unknown theorem {text!r}; expected one of ekr, hm, hm2:<s>, main, maxdeg")
    if name == "hm2":
        if not arg:
            raise ValueError("hm2 needs the parameter s, e.g. hm2:2")
        return name, int(arg)
    if arg:
        raise ValueError(f"{name} takes no parameter")
    return name, None


def theorem_setup(name: str, n: int, k: int, s: int | None = None) -> dict:
    """Constraints, formula value and expected extremal classes for one check."""
    if name == "ekr":
        expected = ["F0"] if n > 2 * k else None
        return {"constraints": ConstraintSet(), "formula": canonical.ekr_bound(n, k), "expected": expected}
    if name == "hm":
        expected = ["F1"] if k == 2 else ["F1", "G2"] if k == 3 else ["F1"]
        return {"constraints": ConstraintSet(forbid_trivial=True), "formula": canonical.hm_bound(n, k),
                "expected": expected}
    if name == "hm2":
        if s is None:
            raise ValueError("hm2 needs s")
        extra = {"second_expression": canonical.hm2_second_expression(n, k, s), "cases": canonical.hm2_cases(n, k, s)}
        if s == 2 and k >= 3 and n > 2 * k:
            extra["main_bound"] = canonical.main_bound(n, k)
        return {"constraints": ConstraintSet(min_avoid=s), "formula": canonical.hm2_bound(n, k, s),
                "expected": None, "extra": extra}
    if name == "main":
        formula = canonical.main_bound(n, k)
        expected = ["J2", "G2", "G3"] if k == 4 else ["J2"]
        return {"constraints": ConstraintSet(forbid_trivial=True, forbid_hm=True, forbid_g2=(k == 3)),
                "formula": formula, "expected": expected}
    if name == "maxdeg":
        spec = canonical.j_spec(n, k, 2)
        j2 = canonical.build(spec)
        cap = max_degree(j2)
        expected = ["J2"] if k >= 5 else None
        return {"constraints": ConstraintSet(max_degree_cap=cap), "formula": len(j2), "expected": expected,
                "extra": {"degree_cap": cap}}
    raise ValueError(f"unknown theorem {name!r}")


def verify_theorem(name: str, n: int, k: int, s: int | None = None, budget: float | None = None,
                   workers: int = 1, backend: str | None = None) -> dict:
    """Run the matching search and compare it with the formula.

    Checks that claim a unique extremal structure run the full enumeration;
    the others only need the optimum.
    """
    if name == "hm2" and s is None:
        raise ValueError("hm2 needs s")
    setup = theorem_setup(name, n, k, s)
    search = enumerate_maximum if setup["expected"] is not None else max_family
    out = search(n, k, setup["constraints"], budget=budget, workers=workers, backend=backend)
    classes = [name_family(w) for w in out.witnesses]
    match = out.optimum == setup["formula"]
    classes_match = None
    if setup["expected"] is not None:
        classes_match = sorted(classes) == sorted(setup["expected"])
    if out.complete:
        ok = match and classes_match is not False
        status = VERIFIED if ok else MISMATCH
    else:
        status = MISMATCH if out.optimum > setup["formula"] else INCONCLUSIVE
    report = {
        "theorem": name if s is None else f"{name}:{s}",
        "n": n,
        "k": k,
        "formula": setup["formula"],
        "optimum": out.optimum,
        "match": match,
        "witness_classes": classes if search is enumerate_maximum else None,
        "example_witness": classes[:1] if search is max_family else None,
        "expected_classes": setup["expected"],
        "classes_match": classes_match,
        "complete": out.complete,
        "status": status,
        "explored_nodes": out.explored_nodes,
        "elapsed": round(out.elapsed, 3),
        "constraints": setup["constraints"].to_dict(),
        "certificate": out.certificate,
    }
    report.update(setup.get("extra", {}))
    return report


# the acceptance grid driven by ``verify-all``
DEFAULT_GRID = [
    ("ekr", 5, 2, None),
    ("ekr", 7, 3, None),
    ("ekr", 8, 3, None),
    ("ekr", 9, 4, None),
    ("hm", 7, 3, None),
    ("hm", 8, 3, None),
    ("hm", 9, 4, None),
    ("hm2", 7, 3, 2),
    ("main", 7, 3, None),
    ("main", 8, 3, None),
    ("main", 9, 4, None),
    ("maxdeg", 9, 4, None),
    ("maxdeg", 11, 5, None),
]


def worst_status(statuses) -> str:
    order = {VERIFIED: 0, INCONCLUSIVE: 1, MISMATCH: 2}
    return max(statuses, key=lambda s: order[s], default=VERIFIED)
