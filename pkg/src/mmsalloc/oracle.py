"""Single-agent maximin partition oracles.

Given one agent's values for a set of goods and a bundle count k, the maximin
value is the best worst-bundle total achievable by any k-partition.  Two modes:

* :func:`mms_exact` binary-searches the largest achievable floor, deciding
  each candidate with a bundle-by-bundle search over minimal covers.
* :func:`mms_approx` runs the same search on values rounded down to a coarse
  grain chosen so the rounding loss stays under half of eps times the
  optimum.  The returned certificate value is the recomputed true minimum of
  the witness, so it is at least (1-eps) times the exact optimum and never
  above it.

All arithmetic is on integers and Fractions; no floats touch any decision.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .core import InputError, Instance

#: Exact search refuses instances with more goods than this unless the caller
#: raises the cap explicitly.  Beyond it, use mms_approx.
EXACT_ITEM_CAP = 22

RationalLike = Union[int, str, Fraction]

Item = tuple[int, int]  # (value, position), kept sorted by value desc


@dataclass(frozen=True)
class MaximinCertificate:
    """A maximin query answer: the value, the bundle count, and a witness
    k-partition (bundles of positions into the queried value sequence) whose
    worst bundle attains exactly ``value``."""

    value: int
    k: int
    witness: tuple[frozenset[int], ...]
    mode: str
    eps: Optional[Fraction] = None


def _validated_values(values: Sequence[int], k: int) -> list[int]:
    if k < 1:
        raise InputError(f"bundle count must be positive, got k={k}")
    vals = list(values)
    for j, v in enumerate(vals):
        if not isinstance(v, int) or isinstance(v, bool):
            raise InputError(f"value at position {j} is not an integer: {v!r}")
        if v < 0:
            raise InputError(f"value at position {j} is negative: {v}")
    return vals


def _as_eps(eps: RationalLike) -> Fraction:
    try:
        frac = Fraction(eps)
    except (TypeError, ValueError) as exc:
        raise InputError(f"eps is not a rational: {eps!r}") from exc
    if not 0 < frac < 1:
        raise InputError(f"eps must lie strictly between 0 and 1, got {frac}")
    return frac


def _desc_items(vals: Sequence[int]) -> list[Item]:
    return sorted(
        ((v, j) for j, v in enumerate(vals) if v > 0), key=lambda t: (-t[0], t[1])
    )


def _lpt(items: list[Item], k: int) -> tuple[list[int], list[list[int]]]:
    """Longest-processing-time first: each item goes to the currently lightest
    bundle (ties to the lowest index).  Deterministic and a decent incumbent."""
    loads = [0] * k
    bundles: list[list[int]] = [[] for _ in range(k)]
    for v, j in items:
        b = min(range(k), key=lambda x: (loads[x], x))
        loads[b] += v
        bundles[b].append(j)
    return loads, bundles


# ---------------------------------------------------------------------------
# Decision core: can the pool be split into k bundles each worth >= t?
#
# Bundles are built one at a time.  The first bundle is the one containing
# the largest remaining item, and only minimal covers are tried: supersets of
# a cover waste items the later bundles may need, so if any partition at
# floor t exists, one with a minimal first cover does too.  Equal values are
# interchangeable, which gives two further cuts: when the search declines an
# item it declines all equal-valued followers at once, and pools that already
# failed are remembered by their value multiset.
# ---------------------------------------------------------------------------


def _minimal_covers(pool: list[Item], t: int) -> Iterator[list[Item]]:
    """Minimal covers of t drawn from pool that contain pool[0].

    Minimal means no member other than the forced first one could be dropped
    with the total still at t or above.
    """
    first = pool[0]
    rest = pool[1:]
    n = len(rest)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + rest[i][0]
    chosen: list[int] = []

    def go(i: int, acc: int) -> Iterator[list[Item]]:
        if acc >= t:
            over = acc - t
            if all(rest[c][0] > over for c in chosen):
                yield [first] + [rest[c] for c in chosen]
            return
        if i == n or acc + suffix[i] < t:
            return
        chosen.append(i)
        yield from go(i + 1, acc + rest[i][0])
        chosen.pop()
        skip = i + 1
        while skip < n and rest[skip][0] == rest[i][0]:
            skip += 1
        yield from go(skip, acc)

    yield from go(0, first[0])


def _cover_search(
    pool: list[Item], k: int, t: int, fail_memo: set
) -> Optional[list[list[int]]]:
    """Split pool into k bundles each totalling at least t, or None.

    Items the cover search leaves over are appended to the final bundle,
    where they can only help.
    """
    if t <= 0:
        bundles = [[j for _, j in pool]]
        bundles.extend([] for _ in range(k - 1))
        return bundles
    total = sum(v for v, _ in pool)
    if total < k * t or len(pool) < k:
        return None
    if k == 1:
        return [[j for _, j in pool]]
    if pool[0][0] >= t:
        sub = _cover_search(pool[1:], k - 1, t, fail_memo)
        if sub is None:
            return None
        return [[pool[0][1]]] + sub
    key = (k, tuple(v for v, _ in pool))
    if key in fail_memo:
        return None
    for cover in _minimal_covers(pool, t):
        taken = {j for _, j in cover}
        remainder = [it for it in pool if it[1] not in taken]
        sub = _cover_search(remainder, k - 1, t, fail_memo)
        if sub is not None:
            return [[j for _, j in cover]] + sub
    fail_memo.add(key)
    return None


def _search_maximin(
    items: list[Item], k: int, lo: int, lo_witness: list[list[int]]
) -> tuple[int, list[list[int]]]:
    """Largest t with a k-cover at floor t, by binary search from a known
    achievable lo up to the averaging bound."""
    total = sum(v for v, _ in items)
    hi = total // k
    witness = lo_witness
    depth = len(items) + 1000
    if sys.getrecursionlimit() < depth:
        sys.setrecursionlimit(depth)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        got = _cover_search(items, k, mid, set())
        if got is None:
            hi = mid - 1
        else:
            lo = mid
            witness = got
    return lo, witness


def mms_exact(
    values: Sequence[int], k: int, *, max_items: int = EXACT_ITEM_CAP
) -> MaximinCertificate:
    """Exact maximin over k bundles.

    >>> mms_exact([4, 3, 2, 1], 2).value
    5
    """
    vals = _validated_values(values, k)
    if len(vals) > max_items:
        raise InputError(
            f"{len(vals)} goods exceeds the exact search cap of {max_items}; "
            "use mms_approx or raise max_items"
        )
    items = _desc_items(vals)
    zeros = [j for j, v in enumerate(vals) if v == 0]

    if k == 1:
        witness = (frozenset(range(len(vals))),)
        return MaximinCertificate(
            value=sum(vals), k=1, witness=witness, mode="exact"
        )

    loads0, bundles0 = _lpt(items, k)
    value, best = _search_maximin(items, k, min(loads0), bundles0)

    best[0].extend(zeros)
    witness = tuple(frozenset(b) for b in best)
    assert min(sum(vals[j] for j in b) for b in witness) == value
    return MaximinCertificate(value=value, k=k, witness=witness, mode="exact")


def mms_approx(
    values: Sequence[int], k: int, eps: RationalLike
) -> MaximinCertificate:
    """Maximin over k bundles to within a factor (1 - eps), with a witness.

    Values are rounded down to multiples of a grain u <= eps*G/(2m), where G
    is the minimum load of a greedy partition (so G never exceeds the
    optimum) and m counts the positive values.  An optimal bundle loses less
    than m*u <= eps/2 times the optimum to rounding, hence the exact search
    on rounded values yields a witness whose true minimum is at least
    (1 - eps) times the optimum.  The certificate value is that recomputed
    true minimum, so it never exceeds the optimum either.

    >>> mms_approx([1, 1, 1, 1], 2, Fraction(1, 10)).value
    2
    """
    vals = _validated_values(values, k)
    frac = _as_eps(eps)
    items = _desc_items(vals)
    zeros = [j for j, v in enumerate(vals) if v == 0]
    total = sum(v for v, _ in items)

    if k == 1:
        witness = (frozenset(range(len(vals))),)
        return MaximinCertificate(
            value=total, k=1, witness=witness, mode="ptas", eps=frac
        )

    loads0, bundles0 = _lpt(items, k)
    value = min(loads0)
    best = [list(b) for b in bundles0]
    upper = total // k
    p, q = frac.numerator, frac.denominator

    # The greedy split is already optimal when it meets the averaging bound,
    # and certifiably within (1 - eps) when no single item exceeds eps*G:
    # greedy's minimum is at least the optimum minus the largest item.
    sharp = value == upper or not items or q * items[0][0] <= p * value
    if value > 0 and not sharp:
        grain = max(1, (p * value) // (2 * len(items) * q))
        rounded = [(v // grain, j) for v, j in items if v // grain >= 1]
        dust = [j for v, j in items if v // grain < 1]
        r_loads, r_bundles = _lpt(rounded, k)
        _, r_best = _search_maximin(rounded, k, min(r_loads), r_bundles)
        sums = [sum(vals[j] for j in b) for b in r_best]
        if dust:
            dump = min(range(k), key=lambda b: (sums[b], b))
            r_best[dump].extend(dust)
            sums[dump] += sum(vals[j] for j in dust)
        r_min = min(sums)
        if r_min > value:
            value = r_min
            best = r_best

    assert value <= upper
    best[0].extend(zeros)
    witness = tuple(frozenset(b) for b in best)
    assert min(sum(vals[j] for j in b) for b in witness) == value
    return MaximinCertificate(
        value=value, k=k, witness=witness, mode="ptas", eps=frac
    )


def feasible_cover(
    values: Sequence[int],
    k: int,
    target: int,
    eps: RationalLike = Fraction(1, 10),
) -> Optional[tuple[frozenset[int], ...]]:
    """A k-partition with every bundle worth at least ``target``, or None.

    Never returns None when target <= (1 - eps) * maximin; may return None
    for feasible targets inside that last eps sliver.

    >>> feasible_cover([3, 1, 1, 1], 2, 3) is None
    False
    >>> feasible_cover([3, 1, 1, 1], 2, 4) is None
    True
    """
    if not isinstance(target, int) or isinstance(target, bool):
        raise InputError(f"target must be an integer, got {target!r}")
    if target < 0:
        raise InputError(f"target must be non-negative, got {target}")
    cert = mms_approx(values, k, eps)
    if cert.value < target:
        return None
    return cert.witness


def greedy_floor(values: Sequence[int], k: int) -> int:
    """Fast certified lower bound on the k-maximin share: the minimum
    bundle value of the longest-first greedy partition.

    Any concrete partition's worst bundle is at most the maximin value, so
    this is always sound, and it has no item-count cap.

    >>> greedy_floor([3, 1, 1, 1], 2)
    3
    >>> greedy_floor([5, 1], 3)
    0
    """
    vals = _validated_values(values, k)
    loads, _ = _lpt(_desc_items(vals), k)
    return min(loads)


def xi_vector(
    instance: Instance,
    k: int,
    eps: Optional[RationalLike] = None,
    mode: str = "ptas",
) -> tuple[MaximinCertificate, ...]:
    """Per-agent maximin certificates over all goods and k bundles.

    Agents with identical valuation rows share one oracle call.
    """
    if mode not in ("exact", "ptas"):
        raise InputError(f"unknown oracle mode: {mode!r}")
    if mode == "ptas" and eps is None:
        raise InputError("ptas mode requires eps")
    cache: dict[tuple[int, ...], MaximinCertificate] = {}
    certs = []
    for i in instance.agents:
        row = instance.row(i)
        cert = cache.get(row)
        if cert is None:
            if mode == "exact":
                cert = mms_exact(row, k)
            else:
                cert = mms_approx(row, k, eps)
            cache[row] = cert
        certs.append(cert)
    return tuple(certs)
