"""Shared test utilities: an exhaustive maximin oracle and instance suites.

The exhaustive oracle enumerates every assignment of goods to k bundles
with symmetry breaking, so it is an independent check on the search-based
oracle in the package. Suite builders produce the seeded random instances
used across tests, so every test that says "random suite" means the same
instances.
"""

from __future__ import annotations

import random
from typing import Sequence

from mmsalloc import Instance


def exhaustive_mms(values: Sequence[int], k: int) -> int:
    """Maximin share by trying every partition of the goods into k bundles.

    Empty bundles are allowed, which matches the definition: with fewer
    goods than bundles the worst bundle is empty and the share is 0.
    Symmetry breaking: good 0 goes to bundle 0, and good i may only open
    bundle u+1 when bundles 0..u are already in use.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    m = len(values)
    if m == 0:
        return 0
    best = 0

    def place(good: int, loads: list[int], used: int) -> None:
        nonlocal best
        if good == m:
            score = min(loads)
            if score > best:
                best = score
            return
        limit = min(used + 1, k)
        for b in range(limit):
            loads[b] += values[good]
            place(good + 1, loads, max(used, b + 1))
            loads[b] -= values[good]

    place(0, [0] * k, 0)
    return best


def random_instance(
    rng: random.Random, n: int, m: int, low: int = 0, high: int = 9
) -> Instance:
    rows = [[rng.randint(low, high) for _ in range(m)] for _ in range(n)]
    return Instance.from_rows(rows)


def random_suite(count: int = 300, seed: int = 90125) -> list[Instance]:
    """Seeded suite: n in 2..6, m in n..12, values uniform in 0..9."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 6)
        m = rng.randint(n, 12)
        out.append(random_instance(rng, n, m))
    return out


def small_oracle_suite(count: int = 200, seed: int = 31337) -> list[Instance]:
    """Instances small enough for the exhaustive oracle: n in 1..3, m in 1..8."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, 3)
        m = rng.randint(1, 8)
        out.append(random_instance(rng, n, m))
    return out


def binary_suite(count: int = 100, seed: int = 60901) -> list[Instance]:
    """Random 0/1 instances with n in 2..4 and m in n..12."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 4)
        m = rng.randint(n, 12)
        out.append(random_instance(rng, n, m, low=0, high=1))
    return out


def ternary_suite(count: int = 200, seed: int = 11235) -> list[Instance]:
    """Random 0/1/2 instances with n in 1..5 and m in 1..15."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, 5)
        m = rng.randint(1, 15)
        out.append(random_instance(rng, n, m, low=0, high=2))
    return out


def three_agent_suite(count: int = 200, seed: int = 424242) -> list[Instance]:
    """3-agent instances with m in 3..10, cycling three generation styles.

    The styles push instances toward different solver branches: iid rows,
    nearly shared rows (one common draw plus per-agent noise), and rows
    from a narrow value band where no single good dominates.
    """
    rng = random.Random(seed)
    out = []
    for t in range(count):
        m = 3 + (t % 8)
        style = t % 3
        if style == 0:
            rows = [[rng.randint(0, 9) for _ in range(m)] for _ in range(3)]
        elif style == 1:
            base = [rng.randint(0, 9) for _ in range(m)]
            rows = [
                [min(9, max(0, v + rng.randint(-1, 1))) for v in base]
                for _ in range(3)
            ]
        else:
            rows = [[rng.randint(1, 4) for _ in range(m)] for _ in range(3)]
        out.append(Instance.from_rows(rows))
    return out
