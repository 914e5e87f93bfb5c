"""Compare the compiled and pure-Python search kernels on identical workloads.

    python benchmarks/bench_core.py [--repeat N] [--quick]

Both kernels visit the same nodes in the same order, so node counts and trace
digests must agree; only wall time differs.
"""
import argparse
import time

from ekrw.search import ConstraintSet, available_backends, enumerate_maximum, max_family

CASES = [
    ("hm (7,3)", enumerate_maximum, 7, 3, ConstraintSet(forbid_trivial=True)),
    ("main (8,3)", enumerate_maximum, 8, 3, ConstraintSet(forbid_trivial=True, forbid_hm=True, forbid_g2=True)),
    ("hm (9,4)", max_family, 9, 4, ConstraintSet(forbid_trivial=True)),
    ("main (9,4)", enumerate_maximum, 9, 4, ConstraintSet(forbid_trivial=True, forbid_hm=True)),
    ("cap 49 (9,4)", max_family, 9, 4, ConstraintSet(max_degree_cap=49)),
]


def run_case(fn, n, k, cons, backend, repeat):
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(n, k, cons, backend=backend, budget=0)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return out, best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the cases that take minutes in pure Python")
    args = ap.parse_args()
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled kernel not built; only the pure-Python timings are shown")
    cases = CASES[:3] if args.quick else CASES
    print(f"{'case':14s} {'nodes':>10s} " + " ".join(f"{b + ' s':>12s}" for b in backends) + "   speedup  digests")
    for label, fn, n, k, cons in cases:
        results = {b: run_case(fn, n, k, cons, b, args.repeat) for b in backends}
        outs = [r[0] for r in results.values()]
        same = len({o.certificate["trace_digest"] for o in outs}) == 1
        times = [results[b][1] for b in backends]
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) == 2 and times[0] > 0 else "       -"
        print(f"{label:14s} {outs[0].explored_nodes:10d} " + " ".join(f"{t:12.3f}" for t in times)
              + f"  {speed}  {'equal' if same else 'DIFFER'}")


if __name__ == "__main__":
    main()
