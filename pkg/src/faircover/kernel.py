"""Polynomial kernelization for colour-budgeted vertex cover.

Rules, applied to fixpoint after a one-shot colour-deficit check: the
zero-budget edge check, deletion of surplus isolated vertices, and the
large-neighbourhood rule (a vertex with more colour-i neighbours than the
colour-i budget is forced into every solution).  A returned kernel has at
most k^2 + k*(1 + 2^t) vertices and k^2 edges for k the total budget.

The isolated-vertex reserve is maintained dynamically: per exact colour set
we keep the ``max current budget`` smallest-id isolated vertices and delete
the rest.  Keeping the reserve in step with shrinking budgets is what makes
deletion of late-isolated vertices safe (a fair cover never needs more
interchangeable isolated vertices of one colour set than the largest budget)
and makes the whole procedure idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .branching import solve_branching
from .graph import (
    ColourBudget,
    ColouredGraph,
    InputError,
    SolveOutcome,
    colour_counts,
    induced_subgraph,
    is_t_fair,
)
from .oracle import is_vertex_cover


@dataclass(frozen=True)
class KernelResult:
    """Either a proven no-instance or an equivalent bounded-size instance.

    ``orig_ids`` maps kernel vertex ids back to the input graph; ``forced``
    are input-graph vertices that belong to every fair cover, and have been
    charged against the budgets already.
    """

    answer_no: bool
    graph: ColouredGraph | None = None
    budget: ColourBudget | None = None
    orig_ids: tuple[int, ...] = ()
    forced: frozenset[int] = frozenset()
    removed_isolated: frozenset[int] = frozenset()
    bound_v: int = 0
    bound_e: int = 0
    iterations: int = 0


def _zero_budget_edge(masks, alive_adj, alive, budgets) -> bool:
    zero_mask = 0
    for i, k in enumerate(budgets):
        if k == 0:
            zero_mask |= 1 << i
    if zero_mask == 0:
        return False
    for u in alive:
        if masks[u] & zero_mask:
            for v in alive_adj[u]:
                if masks[v] & zero_mask:
                    return True
    return False


def build_isolated_reserve(graph: ColouredGraph, budget: ColourBudget) -> frozenset[int]:
    """Initial reserve: per exact colour set, the max-budget smallest isolated ids."""
    k_max = max(budget.budgets)
    groups: dict[int, list[int]] = {}
    for v in graph.vertices():
        if graph.degree(v) == 0:
            groups.setdefault(graph.colour_masks[v], []).append(v)
    reserve: set[int] = set()
    for members in groups.values():
        reserve.update(sorted(members)[:k_max])
    return frozenset(reserve)


def kernelize(graph: ColouredGraph, budget: ColourBudget) -> KernelResult:
    """Shrink the instance to its kernel or prove it a no-instance."""
    if budget.t != graph.t:
        raise InputError("budget length differs from palette size")
    totals = colour_counts(graph, graph.vertices())
    if any(total < k for total, k in zip(totals, budget)):
        return KernelResult(answer_no=True)

    t = graph.t
    masks = graph.colour_masks
    alive: set[int] = set(graph.vertices())
    adj: dict[int, set[int]] = {v: set(graph.adj[v]) for v in alive}
    budgets = list(budget.budgets)
    forced: set[int] = set()
    removed: set[int] = set()
    iterations = 0

    def surplus_isolated() -> int | None:
        k_max = max(budgets)
        groups: dict[int, list[int]] = {}
        for v in alive:
            if not adj[v]:
                groups.setdefault(masks[v], []).append(v)
        for members in groups.values():
            if len(members) > k_max:
                return sorted(members)[k_max]
        return None

    def delete(v: int) -> None:
        alive.discard(v)
        for w in adj.pop(v):
            adj[w].discard(v)

    while True:
        iterations += 1
        if _zero_budget_edge(masks, adj, alive, budgets):
            return KernelResult(answer_no=True, iterations=iterations)

        v = surplus_isolated()
        if v is not None:
            removed.add(v)
            delete(v)
            continue

        fired = False
        for v in sorted(alive):
            if not adj[v]:
                continue
            counts = [0] * t
            for w in adj[v]:
                wm = masks[w]
                i = 0
                while wm:
                    if wm & 1:
                        counts[i] += 1
                    wm >>= 1
                    i += 1
            if any(c > k for c, k in zip(counts, budgets)):
                vm = masks[v]
                for i in range(t):
                    if (vm >> i) & 1:
                        budgets[i] -= 1
                if any(k < 0 for k in budgets):
                    return KernelResult(answer_no=True, iterations=iterations)
                forced.add(v)
                delete(v)
                fired = True
                break
        if fired:
            continue
        break

    k_now = sum(budgets)
    bound_v = k_now * k_now + k_now * (1 + 2**t)
    bound_e = k_now * k_now
    m_alive = sum(len(adj[v]) for v in alive) // 2
    if len(alive) > bound_v or m_alive > bound_e:
        return KernelResult(
            answer_no=True,
            bound_v=bound_v,
            bound_e=bound_e,
            iterations=iterations,
        )
    sub, orig_ids = induced_subgraph(graph, alive)
    return KernelResult(
        answer_no=False,
        graph=sub,
        budget=ColourBudget(tuple(budgets)),
        orig_ids=orig_ids,
        forced=frozenset(forced),
        removed_isolated=frozenset(removed),
        bound_v=bound_v,
        bound_e=bound_e,
        iterations=iterations,
    )


def solve_kernel_branch(
    graph: ColouredGraph, budget: ColourBudget, want_witness: bool = False
) -> SolveOutcome:
    """Kernelize, then run the branching solver on the kernel.

    A kernel witness lifts to the input graph by adding the forced vertices;
    discarded isolated vertices are never needed.
    """
    result = kernelize(graph, budget)
    stats: dict[str, object] = {
        "kernel_iterations": result.iterations,
        "forced": len(result.forced),
        "removed_isolated": len(result.removed_isolated),
    }
    if result.answer_no:
        stats["kernel_no"] = True
        return SolveOutcome(answer=False, stats=stats)
    inner = solve_branching(result.graph, result.budget, want_witness=want_witness)
    stats.update(inner.stats)
    stats["kernel_vertices"] = result.graph.n
    stats["kernel_edges"] = result.graph.m
    if not inner.answer:
        return SolveOutcome(answer=False, stats=stats)
    if want_witness:
        witness = frozenset(
            {result.orig_ids[v - 1] for v in inner.witness} | result.forced
        )
        if not (is_vertex_cover(graph, witness) and is_t_fair(graph, witness, budget)):
            raise AssertionError("lifted kernel witness failed verification")
        return SolveOutcome(answer=True, witness=witness, stats=stats)
    return SolveOutcome(answer=True, stats=stats)
