"""Seeded random corpora of intersecting families."""
from __future__ import annotations

import random

from .family import SetFamily, k_subsets


def random_intersecting(rng: random.Random, n: int, k: int, size: int | None = None) -> SetFamily:
    """Greedy random intersecting family: shuffle all k-sets, keep compatible ones.

    Stops after ``size`` edges when given, otherwise at a random target between
    1 and the greedy maximum.
    """
    pool = k_subsets(n, k)
    rng.shuffle(pool)
    target = size if size is not None else rng.randint(1, len(pool))
    chosen: list[int] = []
    for e in pool:
        if len(chosen) >= target:
            break
        if all(e & c for c in chosen):
            chosen.append(e)
    return SetFamily.from_masks(n, k, chosen)


def random_family(rng: random.Random, n: int, k: int, size: int) -> SetFamily:
    """Uniformly random k-uniform family (not necessarily intersecting)."""
    pool = k_subsets(n, k)
    return SetFamily.from_masks(n, k, rng.sample(pool, min(size, len(pool))))


def corpus(seed: int, count: int, max_n: int = 10, max_k: int = 4) -> list[SetFamily]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(2, max_k)
        n = rng.randint(2 * k, max(2 * k, max_n))
        out.append(random_intersecting(rng, n, k))
    return out
