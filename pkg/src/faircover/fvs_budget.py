"""Fair feedback vertex set parameterized by the total colour budget.

A polynomial 2-approximation of minimum FVS either certifies a no-instance
(approximate set larger than twice the total budget) or yields a decomposition
of width at most twice the total budget plus one, on which the treewidth
solver finishes the job.

The approximation is the local-ratio scheme for unweighted FVS: shave degree
at most 1 vertices, pay down weights uniformly along semidisjoint cycles when
one exists and proportionally to degree - 1 otherwise, collect zero-weight
vertices, and finally drop redundant picks in reverse order.  Exact rational
weights keep the run deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .decomposition import td_from_fvs
from .fvs_dp import solve_fvs_tw
from .graph import ColourBudget, ColouredGraph, SolveOutcome
from .oracle import is_fvs


@dataclass(frozen=True)
class ApproxFvsResult:
    f_apx: frozenset[int]
    certified: bool


def _semidisjoint_cycle(adj: dict[int, set[int]]) -> list[int] | None:
    """A cycle in which at most one vertex has degree above 2, or None.

    Assumes minimum degree 2.  Either a whole component is a plain cycle, or
    a maximal chain of degree-2 vertices closes back on the same higher-degree
    vertex at both ends.
    """
    deg2 = [v for v in sorted(adj) if len(adj[v]) == 2]
    seen: set[int] = set()
    for start in deg2:
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        ends = []
        for first in sorted(adj[start]):
            prev, cur = start, first
            while len(adj[cur]) == 2 and cur != start:
                seen.add(cur)
                chain.append(cur)
                nxt = next(w for w in adj[cur] if w != prev)
                prev, cur = cur, nxt
            ends.append(cur)
            if cur == start:  # walked all the way around a plain cycle
                return chain
        if ends[0] == ends[1]:
            return chain + [ends[0]]
    return None


def approx_fvs_2(graph: ColouredGraph) -> ApproxFvsResult:
    """Feedback vertex set of size at most twice the optimum, inclusion-minimal."""
    adj: dict[int, set[int]] = {v: set(graph.adj[v]) for v in graph.vertices()}
    weight: dict[int, Fraction] = {v: Fraction(1) for v in graph.vertices()}
    picked: list[int] = []

    def drop(v: int) -> None:
        for w in adj.pop(v):
            adj[w].discard(v)

    def cleanup() -> None:
        queue = [v for v in sorted(adj) if len(adj[v]) <= 1]
        while queue:
            v = queue.pop()
            if v not in adj or len(adj[v]) > 1:
                continue
            nbrs = list(adj[v])
            drop(v)
            queue.extend(w for w in nbrs if w in adj and len(adj[w]) <= 1)

    cleanup()
    while adj:
        cycle = _semidisjoint_cycle(adj)
        if cycle is not None:
            eps = min(weight[v] for v in cycle)
            for v in cycle:
                weight[v] -= eps
        else:
            eps = min(weight[v] / (len(adj[v]) - 1) for v in adj)
            for v in adj:
                weight[v] -= eps * (len(adj[v]) - 1)
        for v in sorted(adj):
            if v in adj and weight[v] == 0:
                picked.append(v)
                drop(v)
        cleanup()

    keep = set(picked)
    for v in reversed(picked):  # reverse deletion keeps the set minimal
        if is_fvs(graph, keep - {v}):
            keep.discard(v)
    f_apx = frozenset(keep)
    return ApproxFvsResult(f_apx=f_apx, certified=is_fvs(graph, f_apx))


def solve_fvs_tcb(
    graph: ColouredGraph,
    budget: ColourBudget,
    want_witness: bool = False,
    use_reduce: bool = True,
) -> SolveOutcome:
    """Fair FVS decision via approximation cutoff plus the treewidth solver."""
    apx = approx_fvs_2(graph)
    if len(apx.f_apx) > 2 * budget.total:
        # the optimum already exceeds the total budget
        return SolveOutcome(
            answer=False,
            stats={"f_apx": len(apx.f_apx), "cutoff": True},
        )
    ntd = td_from_fvs(graph, apx.f_apx)
    outcome = solve_fvs_tw(
        graph, ntd, budget, want_witness=want_witness, use_reduce=use_reduce
    )
    stats = dict(outcome.stats)
    stats["f_apx"] = len(apx.f_apx)
    stats["cutoff"] = False
    return SolveOutcome(answer=outcome.answer, witness=outcome.witness, stats=stats)
