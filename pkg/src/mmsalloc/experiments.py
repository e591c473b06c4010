"""Monte Carlo studies of round-robin allocation on random instances.

Instances are drawn with every value independent and uniform on the
integer grid {0, 1, ..., scale}, a discrete stand-in for unit-interval
draws.  A trial succeeds when every agent clears the configured
per-agent threshold, either her proportional share v_i(M)/n or her exact
maximin share.  Checking goes through core.verify_allocation so success
has a single definition everywhere.  All ratios are kept as exact
fractions until they are serialized.
"""

from __future__ import annotations

import csv
import io
import json
import random
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Sequence, Union

from .core import Instance, InputError, verify_allocation
from .oracle import EXACT_ITEM_CAP, mms_exact
from .round_robin import greedy_round_robin, modified_greedy_round_robin

ALGORITHMS = ("rr", "rr-modified")
PREDICATES = ("proportional", "mms")

DEFAULT_SCALE = 10**6
MIN_SCALE = 10**4

# Keeps the modified round robin's internal randomness decorrelated from
# the value-generation stream that shares the same trial seed.
_ALGO_SEED_SALT = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of one Monte Carlo run."""

    n: int
    m: int
    trials: int
    seed: int
    scale: int = DEFAULT_SCALE
    algorithm: str = "rr"
    predicate: str = "proportional"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError(f"need at least one agent, got n={self.n}")
        if self.m < 0:
            raise InputError(f"negative number of goods: m={self.m}")
        if self.trials < 1:
            raise InputError(f"need at least one trial, got {self.trials}")
        if self.scale < MIN_SCALE:
            raise InputError(
                f"scale must be at least {MIN_SCALE} for a fine grid, got {self.scale}"
            )
        if self.algorithm not in ALGORITHMS:
            raise InputError(
                f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}"
            )
        if self.predicate not in PREDICATES:
            raise InputError(
                f"predicate must be one of {PREDICATES}, got {self.predicate!r}"
            )


@dataclass(frozen=True)
class TrialStats:
    """Aggregated outcome of run_existence_trials."""

    config: TrialConfig
    successes: int
    failures: int
    min_ratio: Fraction
    median_ratio: Fraction

    def __post_init__(self) -> None:
        if self.successes + self.failures != self.config.trials:
            raise InputError(
                f"{self.successes} successes + {self.failures} failures "
                f"!= {self.config.trials} trials"
            )

    @property
    def rate(self) -> Fraction:
        return Fraction(self.successes, self.config.trials)


def gen_uniform_instance(n: int, m: int, seed: int, scale: int = DEFAULT_SCALE) -> Instance:
    """Draw each value independently and uniformly from {0, 1, ..., scale}.

    Deterministic for a given seed; rows are filled agent by agent.

    >>> gen_uniform_instance(2, 3, seed=7, scale=10**4) == \\
    ...     gen_uniform_instance(2, 3, seed=7, scale=10**4)
    True
    >>> set(gen_uniform_instance(1, 8, seed=0, scale=1).row(0)) <= {0, 1}
    True
    """
    if scale < 1:
        raise InputError(f"scale must be a positive integer, got {scale}")
    rng = random.Random(seed)
    rows = [[rng.randint(0, scale) for _ in range(m)] for _ in range(n)]
    return Instance(
        n=n, m=m, scale=scale, valuations=tuple(tuple(row) for row in rows)
    )


def _trial_thresholds(instance: Instance, predicate: str) -> list:
    if predicate == "proportional":
        return [
            Fraction(sum(instance.row(i)), instance.n) for i in instance.agents
        ]
    return [mms_exact(instance.row(i), instance.n).value for i in instance.agents]


def run_existence_trials(config: TrialConfig) -> TrialStats:
    """Run the configured algorithm on fresh random instances and count
    how often every agent clears the predicate threshold.

    Trial t uses seed ``config.seed ^ t``.  The mms predicate needs the
    exact oracle, so it is limited to m at most EXACT_ITEM_CAP goods.
    """
    if config.predicate == "mms" and config.m > EXACT_ITEM_CAP:
        raise InputError(
            f"mms predicate needs m <= {EXACT_ITEM_CAP}, got m={config.m}"
        )
    successes = 0
    trial_minima: list[Fraction] = []
    for t in range(config.trials):
        trial_seed = config.seed ^ t
        instance = gen_uniform_instance(config.n, config.m, trial_seed, config.scale)
        if config.algorithm == "rr":
            allocation = greedy_round_robin(instance)
        else:
            allocation = modified_greedy_round_robin(
                instance, seed=trial_seed ^ _ALGO_SEED_SALT
            )
        thresholds = _trial_thresholds(instance, config.predicate)
        report = verify_allocation(instance, allocation, thresholds)
        if report.ok:
            successes += 1
        ratios = []
        for i in instance.agents:
            total = sum(instance.row(i))
            if total == 0:
                continue
            received = sum(instance.row(i)[g] for g in allocation.bundles[i])
            ratios.append(Fraction(received * instance.n, total))
        trial_minima.append(min(ratios) if ratios else Fraction(1))
    return TrialStats(
        config=config,
        successes=successes,
        failures=config.trials - successes,
        min_ratio=min(trial_minima),
        median_ratio=statistics.median(trial_minima),
    )


_CSV_COLUMNS = (
    "n", "m", "T", "seed", "algo", "predicate", "successes", "rate", "min_ratio",
)


def _stats_row(stats: TrialStats) -> dict:
    cfg = stats.config
    return {
        "n": cfg.n,
        "m": cfg.m,
        "T": cfg.trials,
        "seed": cfg.seed,
        "algo": cfg.algorithm,
        "predicate": cfg.predicate,
        "successes": stats.successes,
        "rate": float(stats.rate),
        "min_ratio": float(stats.min_ratio),
    }


def emit_report(
    stats: Union[TrialStats, Sequence[TrialStats]],
    fmt: str,
    destination: Union[str, IO[str]],
) -> None:
    """Write one row per TrialStats as CSV or JSON.

    The CSV header is fixed to n,m,T,seed,algo,predicate,successes,rate,
    min_ratio; the JSON form is a list of objects with the same keys.
    """
    if fmt not in ("csv", "json"):
        raise InputError(f"format must be 'csv' or 'json', got {fmt!r}")
    batch = [stats] if isinstance(stats, TrialStats) else list(stats)
    rows = [_stats_row(s) for s in batch]
    if isinstance(destination, (str, bytes)):
        with open(destination, "w", encoding="utf-8", newline="") as handle:
            _write_report(rows, fmt, handle)
    else:
        _write_report(rows, fmt, destination)


def _write_report(rows: list, fmt: str, handle: IO[str]) -> None:
    if fmt == "csv":
        writer = csv.DictWriter(handle, fieldnames=_CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            out = dict(row)
            out["rate"] = repr(row["rate"])
            out["min_ratio"] = repr(row["min_ratio"])
            writer.writerow(out)
    else:
        json.dump(rows, handle, indent=2)
        handle.write("\n")


def report_text(stats: Union[TrialStats, Sequence[TrialStats]], fmt: str) -> str:
    """Return the emit_report payload as a string."""
    buffer = io.StringIO()
    emit_report(stats, fmt, buffer)
    return buffer.getvalue()
