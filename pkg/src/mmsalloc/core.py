"""Core data model for allocation of indivisible goods.

All values are non-negative integers on a per-instance grid: an instance with
``scale = S`` reads value ``v`` as the rational ``v / S``.  Every comparison a
solver makes happens on integers or on :class:`fractions.Fraction`, never on
floats, so results are exact and reproducible bit for bit.

Agents and goods are indexed from 0 in code.  The JSON file formats index
goods (and agents in certificate rows) from 1; the loaders and dumpers here do
the translation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Iterable, Sequence, Union

Number = Union[int, Fraction]


class InputError(ValueError):
    """Malformed instance, allocation, or parameter (CLI exit code 2)."""


class PartitionError(InputError):
    """Bundles that do not form a partition of the good set."""


class GuaranteeError(RuntimeError):
    """A solver's self-checked guarantee failed to hold (CLI exit code 1)."""


@dataclass(frozen=True)
class Instance:
    """An additive valuation profile: ``valuations[i][j]`` is agent i's value
    for good j, an integer on the grid ``1/scale``.

    >>> inst = Instance.from_rows([[4, 3, 2, 1], [1, 1, 1, 1]])
    >>> inst.n, inst.m
    (2, 4)
    """

    n: int
    m: int
    scale: int
    valuations: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"need at least one agent, got n={self.n}")
        if self.m < 0:
            raise InputError(f"negative number of goods: m={self.m}")
        if self.scale < 1:
            raise InputError(f"scale must be a positive integer, got {self.scale}")
        if len(self.valuations) != self.n:
            raise InputError(
                f"valuation matrix has {len(self.valuations)} rows, expected n={self.n}"
            )
        for i, row in enumerate(self.valuations):
            if len(row) != self.m:
                raise InputError(
                    f"valuation row {i} has {len(row)} entries, expected m={self.m}"
                )
            for j, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool):
                    raise InputError(f"valuation[{i}][{j}] is not an integer: {v!r}")
                if v < 0:
                    raise InputError(f"valuation[{i}][{j}] is negative: {v}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], scale: int = 1) -> "Instance":
        rows_t = tuple(tuple(row) for row in rows)
        n = len(rows_t)
        m = len(rows_t[0]) if rows_t else 0
        return cls(n=n, m=m, scale=scale, valuations=rows_t)

    @property
    def agents(self) -> range:
        return range(self.n)

    @property
    def goods(self) -> range:
        return range(self.m)

    def row(self, agent: int) -> tuple[int, ...]:
        if not 0 <= agent < self.n:
            raise InputError(f"agent index {agent} out of range for n={self.n}")
        return self.valuations[agent]


@dataclass(frozen=True)
class Allocation:
    """An ordered tuple of bundles, one per agent; ``bundles[i]`` holds agent
    i's goods as a frozenset of good indices."""

    bundles: tuple[frozenset[int], ...]

    @classmethod
    def of(cls, bundles: Iterable[Iterable[int]]) -> "Allocation":
        return cls(tuple(frozenset(b) for b in bundles))

    @classmethod
    def checked(cls, bundles: Iterable[Iterable[int]], m: int) -> "Allocation":
        """Build an allocation and verify it partitions goods 0..m-1."""
        alloc = cls.of(bundles)
        alloc.require_partition(m)
        return alloc

    def require_partition(self, m: int) -> None:
        seen: dict[int, int] = {}
        for i, bundle in enumerate(self.bundles):
            for g in bundle:
                if not 0 <= g < m:
                    raise PartitionError(f"good index {g} out of range for m={m}")
                if g in seen:
                    raise PartitionError(
                        f"good {g} appears in bundles {seen[g]} and {i}"
                    )
                seen[g] = i
        if len(seen) != m:
            missing = sorted(set(range(m)) - seen.keys())
            raise PartitionError(f"goods missing from allocation: {missing}")

    def __iter__(self):
        return iter(self.bundles)

    def __len__(self) -> int:
        return len(self.bundles)


def bundle_value(instance: Instance, agent: int, goods: Iterable[int]) -> int:
    """Agent's total value for a set of goods, as an exact scaled integer.

    >>> inst = Instance.from_rows([[4, 3, 2, 1], [1, 1, 1, 1]])
    >>> bundle_value(inst, 0, {0, 2})
    6
    """
    row = instance.row(agent)
    total = 0
    for g in goods:
        if not 0 <= g < instance.m:
            raise InputError(f"good index {g} out of range for m={instance.m}")
        total += row[g]
    return total


def proportional_upper_bound(
    instance: Instance, agent: int, goods: Iterable[int], k: int
) -> Fraction:
    """The bound v_i(goods) / k, an exact rational.

    No k-partition of ``goods`` can give every bundle more than this, so the
    agent's maximin value over k bundles never exceeds it.

    >>> inst = Instance.from_rows([[4, 3, 2, 1]])
    >>> proportional_upper_bound(inst, 0, range(4), 3)
    Fraction(10, 3)
    """
    if k < 1:
        raise InputError(f"bundle count must be positive, got k={k}")
    return Fraction(bundle_value(instance, agent, goods), k)


@dataclass(frozen=True)
class AgentCheck:
    agent: int
    value: int
    threshold: Fraction
    ok: bool


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[AgentCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> tuple[AgentCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)


def verify_allocation(
    instance: Instance,
    allocation: Allocation,
    thresholds: Sequence[Number],
) -> VerificationReport:
    """Check that every agent's bundle meets a per-agent value threshold.

    Structural problems (wrong bundle count, overlap, missing goods) raise
    :class:`PartitionError` before any value comparison.  Thresholds may be
    integers or Fractions; comparisons are exact.

    >>> inst = Instance.from_rows([[4, 3, 2, 1], [1, 1, 1, 1]])
    >>> alloc = Allocation.of([{0, 2}, {1, 3}])
    >>> verify_allocation(inst, alloc, [5, 2]).ok
    True
    >>> report = verify_allocation(inst, alloc, [7, 2])
    >>> [c.agent for c in report.failures()]
    [0]
    """
    if len(allocation.bundles) != instance.n:
        raise PartitionError(
            f"allocation has {len(allocation.bundles)} bundles, expected n={instance.n}"
        )
    allocation.require_partition(instance.m)
    if len(thresholds) != instance.n:
        raise InputError(
            f"got {len(thresholds)} thresholds for n={instance.n} agents"
        )
    checks = []
    for i in instance.agents:
        value = bundle_value(instance, i, allocation.bundles[i])
        thr = Fraction(thresholds[i])
        checks.append(AgentCheck(agent=i, value=value, threshold=thr, ok=value >= thr))
    return VerificationReport(checks=tuple(checks))


# ---------------------------------------------------------------------------
# JSON file formats.  Instances: {"n", "m", "scale", "valuations"}.
# Allocations: {"bundles": [[good, ...], ...], "certificates": [...]} with
# goods and agents indexed from 1 in files.  Certificate thresholds are stored
# as the integer ceiling of the exact rational threshold; since bundle values
# are integers, v >= p/q holds exactly when v >= ceil(p/q), so the stored
# check is equivalent to the exact one.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """One agent's guarantee row: her bundle value and the threshold the
    solver promises it meets."""

    agent: int
    value: int
    threshold: Fraction

    @property
    def threshold_int(self) -> int:
        return math.ceil(self.threshold)


def instance_to_json(instance: Instance) -> str:
    payload = {
        "n": instance.n,
        "m": instance.m,
        "scale": instance.scale,
        "valuations": [list(row) for row in instance.valuations],
    }
    return json.dumps(payload, indent=2) + "\n"


def instance_from_json(text: str) -> Instance:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"instance file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise InputError("instance file must contain a JSON object")
    missing = {"n", "m", "scale", "valuations"} - payload.keys()
    if missing:
        raise InputError(f"instance file missing keys: {sorted(missing)}")
    n, m, scale = payload["n"], payload["m"], payload["scale"]
    rows = payload["valuations"]
    if not isinstance(n, int) or not isinstance(m, int) or not isinstance(scale, int):
        raise InputError("instance n, m, scale must be integers")
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError("instance valuations must be a list of lists")
    return Instance(n=n, m=m, scale=scale, valuations=tuple(tuple(r) for r in rows))


def load_instance(source: Union[str, IO[str]]) -> Instance:
    """Read an instance from a path or an open text file."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return instance_from_json(fh.read())
    return instance_from_json(source.read())


def save_instance(instance: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(instance))


def allocation_to_json(
    allocation: Allocation, certificates: Sequence[Certificate] = ()
) -> str:
    payload = {
        "bundles": [sorted(g + 1 for g in bundle) for bundle in allocation.bundles],
        "certificates": [
            {"agent": c.agent + 1, "value": c.value, "threshold": c.threshold_int}
            for c in certificates
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def allocation_from_json(text: str) -> tuple[Allocation, tuple[Certificate, ...]]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"allocation file is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "bundles" not in payload:
        raise InputError("allocation file must be a JSON object with a 'bundles' key")
    raw_bundles = payload["bundles"]
    if not isinstance(raw_bundles, list) or not all(
        isinstance(b, list) for b in raw_bundles
    ):
        raise InputError("allocation bundles must be a list of lists")
    bundles = []
    for b in raw_bundles:
        for g in b:
            if not isinstance(g, int) or g < 1:
                raise InputError(f"good index {g!r} is not a positive integer")
        bundles.append(frozenset(g - 1 for g in b))
    certs = []
    for row in payload.get("certificates", []):
        try:
            certs.append(
                Certificate(
                    agent=int(row["agent"]) - 1,
                    value=int(row["value"]),
                    threshold=Fraction(int(row["threshold"])),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate row: {row!r}") from exc
    return Allocation(tuple(bundles)), tuple(certs)


def load_allocation(source: Union[str, IO[str]]) -> tuple[Allocation, tuple[Certificate, ...]]:
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return allocation_from_json(fh.read())
    return allocation_from_json(source.read())


def save_allocation(
    allocation: Allocation, path: str, certificates: Sequence[Certificate] = ()
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(allocation_to_json(allocation, certificates))
