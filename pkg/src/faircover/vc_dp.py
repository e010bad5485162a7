"""Treewidth dynamic program for colour-budgeted vertex cover.

Per decomposition node the table holds Boolean cells keyed by (S, r): S is
the intersection of a partial cover with the bag and r the per-colour counts
it has used so far in the subtree.  Only true cells are stored.  Any lookup
with a count outside 0..k_i reads as false, which keeps the join recurrence
total without special cases.
"""

from __future__ import annotations

from .decomposition import EDGE, FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition
from .graph import ColourBudget, ColouredGraph, InputError, SolveOutcome, colour_counts
from .oracle import is_vertex_cover
from .graph import is_t_fair

State = tuple[frozenset[int], tuple[int, ...]]


def _bump(r: tuple[int, ...], mask: int, budgets: tuple[int, ...]) -> tuple[int, ...] | None:
    """r plus one for every colour in the mask, or None on budget overflow."""
    out = list(r)
    i = 0
    while mask:
        if mask & 1:
            if out[i] + 1 > budgets[i]:
                return None
            out[i] += 1
        mask >>= 1
        i += 1
    return tuple(out)


def run_vc_tables(
    graph: ColouredGraph,
    ntd: NiceTreeDecomposition,
    budget: ColourBudget,
    track_origin: bool = False,
):
    """Fill all node tables bottom-up; returns (tables, origins, total_cells).

    ``tables[i]`` is the set of true states of node ``i``.  With
    ``track_origin`` each true state records how it was first derived, for
    witness replay.
    """
    if budget.t != graph.t:
        raise InputError("budget length differs from palette size")
    budgets = tuple(budget.budgets)
    zero = (0,) * graph.t
    masks = graph.colour_masks
    tables: list[set[State]] = []
    origins: list[dict[State, tuple]] = []
    total_cells = 0

    for idx in ntd.bottom_up():
        nd = ntd.nodes[idx]
        table: set[State] = set()
        origin: dict[State, tuple] = {}

        def put(state: State, how: tuple) -> None:
            if state not in table:
                table.add(state)
                if track_origin:
                    origin[state] = how

        if nd.kind == LEAF:
            put((frozenset(), zero), ("leaf",))
        elif nd.kind == INTRODUCE:
            c = nd.children[0]
            v = nd.vertex
            vmask = masks[v]
            for S, r in sorted(tables[c], key=_state_key):
                put((S, r), ("same", c, (S, r)))
                r2 = _bump(r, vmask, budgets)
                if r2 is not None:
                    put((S | {v}, r2), ("take", v, c, (S, r)))
        elif nd.kind == FORGET:
            c = nd.children[0]
            v = nd.vertex
            for S, r in sorted(tables[c], key=_state_key):
                put((S - {v}, r), ("same", c, (S, r)))
        elif nd.kind == EDGE:
            c = nd.children[0]
            u, v = nd.edge
            for S, r in sorted(tables[c], key=_state_key):
                if u in S or v in S:
                    put((S, r), ("same", c, (S, r)))
        elif nd.kind == JOIN:
            cy, cz = nd.children
            by_s: dict[frozenset[int], list[tuple[int, ...]]] = {}
            for S, r in tables[cz]:
                by_s.setdefault(S, []).append(r)
            for S, a in sorted(tables[cy], key=_state_key):
                if S not in by_s:
                    continue
                s_counts = colour_counts(graph, S)
                for b in sorted(by_s[S]):
                    r = tuple(ai + bi - ci for ai, bi, ci in zip(a, b, s_counts))
                    if all(0 <= ri <= ki for ri, ki in zip(r, budgets)):
                        put((S, r), ("join", cy, (S, a), cz, (S, b)))
        else:  # pragma: no cover - validated decompositions only
            raise InputError(f"unknown node kind {nd.kind!r}")

        tables.append(table)
        origins.append(origin)
        total_cells += len(table)
    return tables, origins, total_cells


def _state_key(state: State):
    S, r = state
    return (tuple(sorted(S)), r)


def _replay_witness(
    ntd: NiceTreeDecomposition,
    origins: list[dict[State, tuple]],
    root_state: State,
) -> frozenset[int]:
    witness: set[int] = set()
    stack = [(ntd.root, root_state)]
    while stack:
        node, state = stack.pop()
        how = origins[node][state]
        if how[0] == "leaf":
            continue
        if how[0] == "same":
            stack.append((how[1], how[2]))
        elif how[0] == "take":
            witness.add(how[1])
            stack.append((how[2], how[3]))
        else:  # join
            stack.append((how[1], how[2]))
            stack.append((how[3], how[4]))
    return frozenset(witness)


def solve_vc_tw(
    graph: ColouredGraph,
    ntd: NiceTreeDecomposition,
    budget: ColourBudget,
    want_witness: bool = False,
) -> SolveOutcome:
    """Decide whether the graph has a budget-exact fair vertex cover.

    The decomposition must be a valid nice decomposition of the graph; the
    answer is read off the root cell (empty bag, full budget tuple).
    """
    tables, origins, cells = run_vc_tables(graph, ntd, budget, track_origin=want_witness)
    root_state: State = (frozenset(), tuple(budget.budgets))
    answer = root_state in tables[ntd.root]
    stats = {
        "dp_cells": cells,
        "max_table": max((len(t) for t in tables), default=0),
        "nodes": len(ntd.nodes),
        "width": ntd.width,
    }
    if answer and want_witness:
        witness = _replay_witness(ntd, origins, root_state)
        if not (is_vertex_cover(graph, witness) and is_t_fair(graph, witness, budget)):
            raise AssertionError("reconstructed witness failed verification")
        return SolveOutcome(answer=True, witness=witness, stats=stats)
    return SolveOutcome(answer=answer, stats=stats)
