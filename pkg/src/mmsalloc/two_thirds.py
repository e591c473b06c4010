"""Recursive bundle-matching solver with a rho(n) guarantee.

The driver computes every agent's n-way maximin estimate xi_i once, then
recursively satisfies agents: at each level the lowest-indexed active agent
partitions the remaining goods into |K| bundles as well as she can, a
bipartite preference graph records which active agents accept which bundles
at threshold (1 - eps') * rho(n) * xi_i, and a maximum matching hands
bundles to every agent outside the Hall violator X+.  The agents in X+
recurse on the unallocated goods.  The guarantee rests on a balance
invariant: entering any level, the goods already gone are worth at most
(n - |K|) * rho(n) * xi_i to each remaining agent, so the partitioner's own
|K|-maximin value over the residual is still at least rho(n) * xi_i and her
bundles all clear her threshold.

With an exact oracle each agent ends with at least rho(n) times her true
maximin value; rho(n) = 2*odd(n) / (3*odd(n) - 1) exceeds 2/3 for every
n >= 2.  In ptas mode with parameter eps the guarantee is (2/3 - eps).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import Allocation, GuaranteeError, InputError, Instance
from .matching import build_preference_graph, compute_x_plus, maximum_matching
from .oracle import mms_approx, mms_exact, xi_vector

RationalLike = Union[int, str, Fraction]


@dataclass(frozen=True)
class RhoN:
    """The residual guarantee factor for n agents: with odd(n) the largest
    odd integer <= n, the factor is 2*odd(n) / (3*odd(n) - 1)."""

    n: int
    value: Fraction


def rho(n: int) -> RhoN:
    """Guarantee factor for n >= 2 agents; always above 2/3.

    >>> rho(3).value
    Fraction(3, 4)
    >>> rho(2).value
    Fraction(1, 1)
    >>> rho(5).value
    Fraction(5, 7)
    """
    if n < 2:
        raise InputError(f"the guarantee factor needs n >= 2, got n={n}")
    odd = n if n % 2 == 1 else n - 1
    return RhoN(n=n, value=Fraction(2 * odd, 3 * odd - 1))


@dataclass(frozen=True)
class RecursionState:
    """One level of the recursion: active agents, unallocated goods, and the
    quantities fixed by the top-level call."""

    instance: Instance
    agents: tuple[int, ...]
    goods: tuple[int, ...]
    xi: tuple[int, ...]
    eps_prime: Fraction
    n: int
    oracle_mode: str


@dataclass(frozen=True)
class LevelTrace:
    """What one recursion level did, for inspection and trace output."""

    agents: tuple[int, ...]
    goods: tuple[int, ...]
    partitioner: int
    partition: tuple[tuple[int, ...], ...]
    thresholds: tuple[Fraction, ...]
    adjacency: tuple[tuple[int, ...], ...]
    matching: tuple[tuple[int, int], ...]
    x_plus: tuple[int, ...]
    gamma: tuple[int, ...]
    restricted_matching: tuple[tuple[int, int], ...]


def rec_mms(
    state: RecursionState, trace: Optional[list] = None
) -> dict[int, frozenset[int]]:
    """Allocate the state's goods among its active agents recursively.

    Returns a bundle per active agent; the bundles partition state.goods.
    Raises GuaranteeError if the partitioner fails her own threshold on one
    of her bundles or ends up unmatched, which the balance invariant rules
    out for inputs reachable from apx_mms.
    """
    agents = state.agents
    goods = state.goods
    if len(agents) == 1:
        return {agents[0]: frozenset(goods)}

    partitioner = agents[0]
    k = len(agents)
    local_values = [state.instance.row(partitioner)[g] for g in goods]
    if state.oracle_mode == "exact":
        cert = mms_exact(local_values, k)
    else:
        cert = mms_approx(local_values, k, state.eps_prime)
    bundles = tuple(
        tuple(sorted(goods[pos] for pos in bundle)) for bundle in cert.witness
    )

    factor = (1 - state.eps_prime) * rho(state.n).value
    thresholds = tuple(factor * state.xi[i] for i in agents)
    rows = [state.instance.row(i) for i in agents]
    graph = build_preference_graph(rows, bundles, thresholds)
    if graph.adj[0] != tuple(range(k)):
        raise GuaranteeError(
            f"agent {partitioner}'s own partition misses her threshold; "
            "the balance invariant does not hold for this call"
        )
    matching = maximum_matching(graph)
    decomposition = compute_x_plus(graph, matching)
    if 0 in decomposition.x_plus:
        raise GuaranteeError(
            f"agent {partitioner} ended up in the deferred set of her own level"
        )
    if trace is not None:
        trace.append(
            LevelTrace(
                agents=agents,
                goods=goods,
                partitioner=partitioner,
                partition=bundles,
                thresholds=thresholds,
                adjacency=graph.adj,
                matching=matching,
                x_plus=tuple(agents[u] for u in decomposition.x_plus),
                gamma=decomposition.gamma,
                restricted_matching=tuple(
                    (agents[u], v) for u, v in decomposition.restricted_matching
                ),
            )
        )

    result: dict[int, frozenset[int]] = {}
    taken = set()
    for left, right in decomposition.restricted_matching:
        result[agents[left]] = frozenset(bundles[right])
        taken.add(right)
    if decomposition.x_plus:
        leftover = tuple(
            sorted(
                g
                for j, bundle in enumerate(bundles)
                if j not in taken
                for g in bundle
            )
        )
        deferred = RecursionState(
            instance=state.instance,
            agents=tuple(agents[u] for u in decomposition.x_plus),
            goods=leftover,
            xi=state.xi,
            eps_prime=state.eps_prime,
            n=state.n,
            oracle_mode=state.oracle_mode,
        )
        result.update(rec_mms(deferred, trace))
    return result


def apx_mms(
    instance: Instance,
    eps: RationalLike,
    oracle_mode: str = "ptas",
    trace: Optional[list] = None,
) -> Allocation:
    """Allocate all goods with per-agent guarantee (2/3 - eps) times her
    maximin value, or rho(n) times it when oracle_mode is "exact".

    eps must lie in (0, 1/3) so the advertised factor stays above 1/3.  In
    ptas mode the internal accuracy is eps' = 3*eps/4, spent once on the xi
    estimates and once on each level's partition.  ``trace``, if given,
    collects a LevelTrace per recursion level.

    >>> inst = Instance.from_rows([[4, 3, 2, 1], [1, 1, 1, 1]])
    >>> alloc = apx_mms(inst, Fraction(1, 10), oracle_mode="exact")
    >>> sorted(len(b) for b in alloc)
    [2, 2]
    """
    eps = Fraction(eps)
    if not 0 < eps < Fraction(1, 3):
        raise InputError(f"eps must be in (0, 1/3), got {eps}")
    if oracle_mode not in ("exact", "ptas"):
        raise InputError(f"oracle_mode must be 'exact' or 'ptas', got {oracle_mode!r}")
    if instance.n == 1:
        return Allocation.of([tuple(instance.goods)])
    if oracle_mode == "exact":
        eps_prime = Fraction(0)
        certs = xi_vector(instance, instance.n, mode="exact")
    else:
        eps_prime = 3 * eps / 4
        certs = xi_vector(instance, instance.n, eps=eps_prime, mode="ptas")
    state = RecursionState(
        instance=instance,
        agents=tuple(instance.agents),
        goods=tuple(instance.goods),
        xi=tuple(c.value for c in certs),
        eps_prime=eps_prime,
        n=instance.n,
        oracle_mode=oracle_mode,
    )
    result = rec_mms(state, trace)
    return Allocation.of(result[i] for i in instance.agents)
