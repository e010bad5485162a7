"""Branching solver for colour-budgeted vertex cover.

Each recursion node runs two no-instance checks and a saturated-colour
reduction to fixpoint, then either branches on a vertex of degree at least 3
(take the vertex, or take its whole open neighbourhood) or hands surviving
path/cycle graphs to the treewidth solver.  Branches whose budget would go
negative are pruned immediately: no fair solution can carry more than k_i
vertices of colour i.
"""

from __future__ import annotations

from .decomposition import td_paths_cycles
from .graph import (
    ColourBudget,
    ColouredGraph,
    InputError,
    SolveOutcome,
    colour_counts,
    is_t_fair,
    remove_vertices,
)
from .oracle import is_vertex_cover
from .vc_dp import solve_vc_tw


def check_colour_deficit(graph: ColouredGraph, budget: ColourBudget) -> bool:
    """True iff some colour occurs fewer times in the graph than its budget."""
    totals = colour_counts(graph, graph.vertices())
    return any(total < k for total, k in zip(totals, budget))


def check_zero_budget_edge(graph: ColouredGraph, budget: ColourBudget) -> bool:
    """True iff some edge joins two vertices that both carry exhausted colours."""
    zero_mask = 0
    for i, k in enumerate(budget):
        if k == 0:
            zero_mask |= 1 << i
    if zero_mask == 0:
        return False
    masks = graph.colour_masks
    return any(masks[u] & zero_mask and masks[v] & zero_mask for u, v in graph.edges)


def reduce_saturated_colour(graph: ColouredGraph, budget: ColourBudget):
    """Apply the forced-colour reduction once.

    If some colour's total occurrence equals its budget, every vertex of that
    colour belongs to any fair cover.  Returns one of::

        ("no", None)
        ("unchanged", None)
        ("reduced", (subgraph, new_budget, orig_ids, taken_vertices))

    ``taken_vertices`` are ids in the *input* graph.
    """
    totals = colour_counts(graph, graph.vertices())
    for i, (total, k) in enumerate(zip(totals, budget)):
        if total != k or total == 0:
            continue
        bit = 1 << i
        taken = [v for v in graph.vertices() if graph.colour_masks[v] & bit]
        used = colour_counts(graph, taken)
        new_budgets = tuple(k_j - u for k_j, u in zip(budget, used))
        if any(b < 0 for b in new_budgets):
            return ("no", None)
        sub, orig_ids = remove_vertices(graph, taken)
        return ("reduced", (sub, ColourBudget(new_budgets), orig_ids, tuple(taken)))
    return ("unchanged", None)


def base_case_paths_cycles(
    graph: ColouredGraph, budget: ColourBudget, want_witness: bool = False
) -> SolveOutcome:
    """Solve a max-degree-2 graph through its width-2 nice decomposition."""
    if graph.max_degree() > 2:
        raise InputError("base case requires maximum degree at most 2")
    return solve_vc_tw(graph, td_paths_cycles(graph), budget, want_witness=want_witness)


def solve_branching(
    graph: ColouredGraph, budget: ColourBudget, want_witness: bool = False
) -> SolveOutcome:
    """Decide whether the graph has a budget-exact fair vertex cover.

    ``stats["branch_nodes"]`` counts applications of the branching rule; the
    count stays within ceil(1.4656 ** total_budget) + 1 on small budgets
    because the neighbourhood branch spends at least three budget units.
    """
    if budget.t != graph.t:
        raise InputError("budget length differs from palette size")
    stats = {"branch_nodes": 0, "reductions": 0, "base_cases": 0, "dp_cells": 0}

    def solve(g: ColouredGraph, b: ColourBudget, orig, partial: frozenset[int]):
        while True:
            if check_colour_deficit(g, b):
                return None
            if check_zero_budget_edge(g, b):
                return None
            status, payload = reduce_saturated_colour(g, b)
            if status == "no":
                return None
            if status == "reduced":
                stats["reductions"] += 1
                sub, b2, sub_orig, taken = payload
                partial = partial | {orig[v - 1] for v in taken}
                g, b = sub, b2
                orig = tuple(orig[v - 1] for v in sub_orig)
                continue
            break

        if g.max_degree() >= 3:
            stats["branch_nodes"] += 1
            v = max(g.vertices(), key=lambda u: (g.degree(u), -u))
            vmask = g.colour_masks[v]
            take_v = tuple(
                k - ((vmask >> i) & 1) for i, k in enumerate(b)
            )
            if all(k >= 0 for k in take_v):
                sub, sub_orig = remove_vertices(g, (v,))
                res = solve(
                    sub,
                    ColourBudget(take_v),
                    tuple(orig[u - 1] for u in sub_orig),
                    partial | {orig[v - 1]},
                )
                if res is not None:
                    return res
            nb = sorted(g.adj[v])
            nb_counts = colour_counts(g, nb)
            take_nb = tuple(k - c for k, c in zip(b, nb_counts))
            if all(k >= 0 for k in take_nb):
                sub, sub_orig = remove_vertices(g, nb)
                return solve(
                    sub,
                    ColourBudget(take_nb),
                    tuple(orig[u - 1] for u in sub_orig),
                    partial | {orig[u - 1] for u in nb},
                )
            return None

        stats["base_cases"] += 1
        outcome = base_case_paths_cycles(g, b, want_witness=want_witness)
        stats["dp_cells"] += outcome.stats.get("dp_cells", 0)
        if not outcome.answer:
            return None
        if want_witness:
            return partial | {orig[u - 1] for u in outcome.witness}
        return partial  # placeholder marking YES in decision mode

    result = solve(graph, budget, tuple(graph.vertices()), frozenset())
    if result is None:
        return SolveOutcome(answer=False, stats=stats)
    if want_witness:
        witness = frozenset(result)
        if not (is_vertex_cover(graph, witness) and is_t_fair(graph, witness, budget)):
            raise AssertionError("branching witness failed verification")
        return SolveOutcome(answer=True, witness=witness, stats=stats)
    return SolveOutcome(answer=True, stats=stats)
