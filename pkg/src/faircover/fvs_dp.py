"""Partition-family treewidth DP for colour-budgeted feedback vertex set.

The instance is recast through a universal vertex v0 adjacent to everything
and carrying every colour: the graph has a fair deletion set exactly when the
kept vertices plus v0, together with all kept ordinary edges and a chosen
subset of v0-edges, form a single tree.  Per decomposition node the table
maps (S, j1, j2, r) to a family of partitions of S: S is the kept part of the
bag, j1/j2 count kept vertices/edges so far, r the per-colour kept counts,
and each partition records which bag vertices the kept subgraph currently
connects.  Families are trimmed with the representative-set reduction, which
preserves exactly the completions to a single block that the root condition
asks for.

Cells referencing j1 - 1, j2 - 1 or r_i - 1 below zero read as empty
families.  With pruning enabled (the default), cells with j2 >= j1 + 1 are
dropped: the kept subgraph must end up a subgraph of a tree, so any state
carrying more edges than vertices can never reach the root condition.  The
"paranoid" mode (prune=False, use_reduce=False) keeps table contents exactly
at the defining semantics, which the test suite checks by brute force.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decomposition import (
    EDGE,
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    NiceBuilder,
    NiceTreeDecomposition,
)
from .graph import (
    ColourBudget,
    ColouredGraph,
    InputError,
    SolveOutcome,
    colour_counts,
    is_t_fair,
    make_graph,
)
from .oracle import is_fvs
from .partitions import (
    glue_positions,
    insert_position,
    meet_blocks,
    project_position,
    representative_indices,
)


@dataclass(frozen=True)
class AugmentedInstance:
    """Input graph extended with the all-colours universal vertex v0."""

    graph: ColouredGraph  # G plus v0 (id n + 1)
    v0: int
    colour_totals: tuple[int, ...]  # per-colour counts of the original graph
    ntd: NiceTreeDecomposition  # nice decomposition of the extended graph


def augment_with_v0(graph: ColouredGraph, ntd: NiceTreeDecomposition) -> AugmentedInstance:
    """Add v0 to the graph and thread it through every bag of the decomposition.

    v0 is re-introduced above each leaf (leaf bags must stay empty), each
    v0-edge is introduced directly below the forget of its other endpoint,
    and v0 itself is forgotten at the new root.  Width grows by one.
    """
    v0 = graph.n + 1
    full_mask = (1 << graph.t) - 1
    colours = [graph.colour_masks[v] for v in graph.vertices()] + [full_mask]
    edges = list(graph.edges) + [(v, v0) for v in graph.vertices()]
    extended = make_graph(graph.n + 1, graph.t, colours, edges)

    builder = NiceBuilder()
    mapped: dict[int, int] = {}
    for idx in ntd.bottom_up():
        nd = ntd.nodes[idx]
        if nd.kind == LEAF:
            chain = builder.leaf()
            chain = builder.introduce(chain, v0)
        elif nd.kind == INTRODUCE:
            chain = builder.introduce(mapped[nd.children[0]], nd.vertex)
        elif nd.kind == FORGET:
            chain = builder.edge(mapped[nd.children[0]], nd.vertex, v0)
            chain = builder.forget(chain, nd.vertex)
        elif nd.kind == EDGE:
            chain = builder.edge(mapped[nd.children[0]], *nd.edge)
        elif nd.kind == JOIN:
            chain = builder.join(mapped[nd.children[0]], mapped[nd.children[1]])
        else:  # pragma: no cover
            raise InputError(f"unknown node kind {nd.kind!r}")
        mapped[idx] = chain
    top = builder.forget(mapped[ntd.root], v0)
    return AugmentedInstance(
        graph=extended,
        v0=v0,
        colour_totals=colour_counts(graph, graph.vertices()),
        ntd=builder.build(top),
    )


def _family_threshold(bag_kept: int) -> int:
    return 1 if bag_kept == 0 else 1 << (bag_kept - 1)


def run_fvs_tables(
    graph: ColouredGraph,
    ntd: NiceTreeDecomposition,
    *,
    budget: ColourBudget | None = None,
    track_witness: bool = False,
    use_reduce: bool = True,
    prune: bool = True,
    keep_tables: bool = False,
):
    """Fill every node table of the extended instance.

    Returns ``(aug, tables, stats)``.  ``tables[i]`` maps the kept bag subset
    (a sorted tuple) to ``{(j1, j2, r): family}`` where a family maps a
    canonical partition to one witness fragment ``(kept_mask, v0_edge_mask)``
    (or None in decision mode).  Unless ``keep_tables`` is set, child tables
    are released once consumed.

    When pruning is on and a budget is supplied, cells that have already
    dropped more than k_i vertices of some colour are discarded as well:
    per-colour deficits (introduced count minus kept count) never decrease
    through any recurrence and the root condition needs them to equal k_i
    exactly, so such cells are as unreachable as the j2 > j1 ones.
    """
    aug = augment_with_v0(graph, ntd)
    g2 = aug.graph
    v0 = aug.v0
    t = g2.t
    caps = tuple(n + 1 for n in aug.colour_totals)
    masks = g2.colour_masks
    zero_r = (0,) * t

    nodes = aug.ntd.nodes
    tables: list[dict | None] = [None] * len(nodes)
    pending = [0] * len(nodes)
    for nd in nodes:
        for c in nd.children:
            pending[c] += 1
    # the answer is read off the root's child (bag {v0}); never release it
    protected = {aug.ntd.root, *nodes[aug.ntd.root].children}
    stats = {"dp_cells": 0, "max_family": 0, "width": aug.ntd.width, "nodes": len(nodes)}

    # per-colour counts of everything introduced below each node, for the
    # deficit prune; join children overlap exactly in the bag
    intro: list[tuple[int, ...]] = [()] * len(nodes)
    min_r: list[tuple[int, ...] | None] = [None] * len(nodes)
    deficit_caps = tuple(budget.budgets) if (prune and budget is not None) else None
    for i, nd in enumerate(nodes):
        if nd.kind == LEAF:
            intro[i] = zero_r
        elif nd.kind == INTRODUCE:
            base = intro[nd.children[0]]
            vm = masks[nd.vertex]
            intro[i] = tuple(
                b + ((vm >> c) & 1) for c, b in enumerate(base)
            )
        elif nd.kind == JOIN:
            bag_counts = colour_counts(g2, nd.bag)
            intro[i] = tuple(
                a + b - c
                for a, b, c in zip(
                    intro[nd.children[0]], intro[nd.children[1]], bag_counts
                )
            )
        else:
            intro[i] = intro[nd.children[0]]
        if deficit_caps is not None:
            min_r[i] = tuple(
                max(0, n_c - k) for n_c, k in zip(intro[i], deficit_caps)
            )

    def merge_cell(cells: dict, key, fam: dict) -> None:
        cur = cells.get(key)
        if cur is None:
            cells[key] = fam
        else:
            merged = dict(fam)
            merged.update(cur)  # existing fragments win: first writer kept
            cells[key] = merged

    for idx, nd in enumerate(nodes):
        kind = nd.kind
        floor_r = min_r[idx]
        if kind == LEAF:
            frag = (0, 0) if track_witness else None
            table = {(): {(0, 0, zero_r): {(): frag}}}
        elif kind == INTRODUCE:
            child = tables[nd.children[0]]
            v = nd.vertex
            vmask = masks[v]
            vbit = 1 << v
            bump_memo: dict[tuple[int, ...], tuple[int, ...] | None] = {}
            table = {}
            for s_t, cells in child.items():
                ins_memo: dict[tuple, tuple] = {}  # insertion point varies per slice
                if v != v0:
                    # v stays out of the kept set: its colours add to the deficit
                    if floor_r is None:
                        table[s_t] = cells
                    else:
                        kept_cells = {
                            key: fam
                            for key, fam in cells.items()
                            if all(x >= m for x, m in zip(key[2], floor_r))
                        }
                        if kept_cells:
                            table[s_t] = kept_cells
                pos = 0
                while pos < len(s_t) and s_t[pos] < v:
                    pos += 1
                new_s = s_t[:pos] + (v,) + s_t[pos:]
                new_cells = {}
                for key, fam in cells.items():
                    r = key[2]
                    if r in bump_memo:
                        r2 = bump_memo[r]
                    else:
                        out = list(r)
                        m = vmask
                        i = 0
                        ok = True
                        while m:
                            if m & 1:
                                if out[i] + 1 > caps[i]:
                                    ok = False
                                    break
                                out[i] += 1
                            m >>= 1
                            i += 1
                        r2 = tuple(out) if ok else None
                        if r2 is not None and floor_r is not None and not all(
                            x >= mn for x, mn in zip(r2, floor_r)
                        ):
                            r2 = None
                        bump_memo[r] = r2
                    if r2 is None:
                        continue
                    new_fam = {}
                    for b, f in fam.items():
                        nb = ins_memo.get(b)
                        if nb is None:
                            nb = insert_position(b, pos)
                            ins_memo[b] = nb
                        new_fam[nb] = (f[0] | vbit, f[1]) if track_witness else None
                    new_cells[(key[0] + 1, key[1], r2)] = new_fam
                if new_cells:
                    table[new_s] = new_cells
        elif kind == FORGET:
            child = tables[nd.children[0]]
            v = nd.vertex
            table = {}
            for s_t, cells in child.items():
                if v not in s_t:
                    table[s_t] = cells
            for s_t, cells in child.items():
                if v not in s_t:
                    continue
                pos = s_t.index(v)
                proj_memo: dict[tuple, tuple | None] = {}  # position varies per slice
                new_s = s_t[:pos] + s_t[pos + 1 :]
                target = table.get(new_s)
                if target is None:
                    target = {}
                    table[new_s] = target
                elif target is child.get(new_s):
                    target = dict(target)  # copy-on-write of the shared slice
                    table[new_s] = target
                for key, fam in cells.items():
                    new_fam = {}
                    for b, f in fam.items():
                        nb = proj_memo.get(b, False)
                        if nb is False:
                            reduced, singleton = project_position(b, pos)
                            nb = None if singleton else reduced
                            proj_memo[b] = nb
                        if nb is None:
                            continue  # a kept component lost bag contact
                        if nb not in new_fam:
                            new_fam[nb] = f
                    if new_fam:
                        merge_cell(target, key, new_fam)
                if not target:
                    del table[new_s]
        elif kind == EDGE:
            child = tables[nd.children[0]]
            u, w = nd.edge
            is_v0_edge = u == v0 or w == v0
            other = u + w - v0 if is_v0_edge else None
            table = {}
            glue_memo: dict[tuple, tuple] = {}
            for s_t, cells in child.items():
                if u not in s_t or w not in s_t:
                    table[s_t] = cells
                    continue
                pu = s_t.index(u)
                pw = s_t.index(w)
                glue_memo.clear()
                if is_v0_edge:
                    new_cells = dict(cells)  # the edge may be skipped
                    obit = 1 << other
                    for key, fam in cells.items():
                        j1, j2, r = key
                        if prune and j2 + 1 > j1:
                            continue
                        glued = {}
                        for b, f in fam.items():
                            gb = glue_memo.get(b)
                            if gb is None:
                                gb = glue_positions(b, pu, pw)
                                glue_memo[b] = gb
                            if prune and gb is b:
                                continue  # endpoints already connected: a cycle
                            if gb not in glued:
                                glued[gb] = (f[0], f[1] | obit) if track_witness else None
                        if glued:
                            merge_cell(new_cells, (j1, j2 + 1, r), glued)
                    table[s_t] = new_cells
                else:
                    # a kept ordinary edge is always part of the kept subgraph
                    new_cells = {}
                    for key, fam in cells.items():
                        j1, j2, r = key
                        if prune and j2 + 1 > j1:
                            continue
                        glued = {}
                        for b, f in fam.items():
                            gb = glue_memo.get(b)
                            if gb is None:
                                gb = glue_positions(b, pu, pw)
                                glue_memo[b] = gb
                            if prune and gb is b:
                                continue  # endpoints already connected: a cycle
                            if gb not in glued:
                                glued[gb] = f
                        if glued:
                            merge_cell(new_cells, (j1, j2 + 1, r), glued)
                    if new_cells:
                        table[s_t] = new_cells
        elif kind == JOIN:
            left = tables[nd.children[0]]
            right = tables[nd.children[1]]
            table = {}
            for s_t, ycells in left.items():
                zcells = right.get(s_t)
                if zcells is None:
                    continue
                s_counts = colour_counts(g2, s_t)
                size_s = len(s_t)
                new_cells: dict = {}
                for (j1y, j2y, ry), fam_y in ycells.items():
                    for (j1z, j2z, rz), fam_z in zcells.items():
                        j1 = j1y + j1z - size_s
                        j2 = j2y + j2z
                        if prune and j2 > j1:
                            continue
                        r = tuple(a + b - c for a, b, c in zip(ry, rz, s_counts))
                        if any(x < 0 or x > cap for x, cap in zip(r, caps)):
                            continue
                        if floor_r is not None and not all(
                            x >= mn for x, mn in zip(r, floor_r)
                        ):
                            continue
                        joined = {}
                        # under prune, keep only rank-additive merges: losing
                        # fewer blocks than the bag overlap closes a cycle
                        for by, fy in fam_y.items():
                            bcy = (max(by) + 1) if by else 0
                            for bz, fz in fam_z.items():
                                b = meet_blocks(by, bz)
                                if prune:
                                    bcz = (max(bz) + 1) if bz else 0
                                    bc = (max(b) + 1) if b else 0
                                    if bc != bcy + bcz - size_s:
                                        continue
                                if b not in joined:
                                    joined[b] = (
                                        (fy[0] | fz[0], fy[1] | fz[1])
                                        if track_witness
                                        else None
                                    )
                        if joined:
                            merge_cell(new_cells, (j1, j2, r), joined)
                if new_cells:
                    table[s_t] = new_cells
        else:  # pragma: no cover
            raise InputError(f"unknown node kind {kind!r}")

        # family reduction plus stats in one pass; shared slices were reduced
        # when first built, so the rewrite below never touches a shared dict
        cell_count = 0
        max_family = stats["max_family"]
        for s_t, cells in table.items():
            cell_count += len(cells)
            limit = _family_threshold(len(s_t)) if use_reduce else None
            for key, fam in list(cells.items()) if use_reduce else cells.items():
                size = len(fam)
                if limit is not None and size > limit:
                    members = sorted(fam)
                    kept = representative_indices(members, len(s_t))
                    cells[key] = {members[i]: fam[members[i]] for i in kept}
                    size = len(cells[key])
                if size > max_family:
                    max_family = size
        stats["max_family"] = max_family
        stats["dp_cells"] += cell_count
        tables[idx] = table
        if not keep_tables:
            for c in nd.children:
                pending[c] -= 1
                if pending[c] == 0 and c not in protected:
                    tables[c] = None
    return aug, tables, stats


def certificate_subgraph(
    aug: AugmentedInstance, kept_mask: int, v0_edge_mask: int
) -> tuple[list[int], list[tuple[int, int]]]:
    """Vertices and edges of the kept subgraph encoded by a witness fragment."""
    kept = [v for v in aug.graph.vertices() if kept_mask >> v & 1]
    kept_set = set(kept)
    edges = [
        (u, w)
        for u, w in aug.graph.edges
        if aug.v0 not in (u, w) and u in kept_set and w in kept_set
    ]
    edges += [
        (v, aug.v0)
        for v in aug.graph.vertices()
        if v != aug.v0 and v0_edge_mask >> v & 1
    ]
    return kept, edges


def _is_tree(vertices: list[int], edges: list[tuple[int, int]]) -> bool:
    if len(edges) != len(vertices) - 1:
        return False
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, w in edges:
        adj[u].append(w)
        adj[w].append(u)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vertices)


def solve_fvs_tw(
    graph: ColouredGraph,
    ntd: NiceTreeDecomposition,
    budget: ColourBudget,
    want_witness: bool = False,
    use_reduce: bool = True,
    prune: bool = True,
) -> SolveOutcome:
    """Decide whether the graph has a budget-exact fair feedback vertex set.

    YES iff, at the node whose bag is {v0}, some cell with j2 = j1 - 1 and
    kept colour counts n_i - k_i + 1 holds a nonempty family: the kept
    subgraph is then one spanning tree, so the kept ordinary vertices induce
    a forest and their complement is the fair deletion set.
    """
    if budget.t != graph.t:
        raise InputError("budget length differs from palette size")
    totals = colour_counts(graph, graph.vertices())
    if any(k > n for k, n in zip(budget, totals)):
        return SolveOutcome(
            answer=False, stats={"short_circuit": "budget exceeds colour count"}
        )
    aug, tables, stats = run_fvs_tables(
        graph, ntd, budget=budget, track_witness=want_witness,
        use_reduce=use_reduce, prune=prune,
    )
    root_child = aug.ntd.nodes[aug.ntd.root].children[0]
    target_r = tuple(n - k + 1 for n, k in zip(aug.colour_totals, budget))
    answer_frag = None
    slice_v0 = tables[root_child].get((aug.v0,), {})
    for j1 in range(1, graph.n + 2):
        fam = slice_v0.get((j1, j1 - 1, target_r))
        if fam:
            answer_frag = next(iter(sorted(fam))) if want_witness else True
            if want_witness:
                answer_frag = fam[answer_frag]
            break
    if answer_frag is None:
        return SolveOutcome(answer=False, stats=stats)
    if not want_witness:
        return SolveOutcome(answer=True, stats=stats)
    kept_mask, v0_edges = answer_frag
    kept, edges = certificate_subgraph(aug, kept_mask, v0_edges)
    if not _is_tree(kept, edges):
        raise AssertionError("accepted kept subgraph is not a tree")
    witness = frozenset(
        v for v in graph.vertices() if not (kept_mask >> v & 1)
    )
    if not (is_fvs(graph, witness) and is_t_fair(graph, witness, budget)):
        raise AssertionError("reconstructed deletion set failed verification")
    return SolveOutcome(answer=True, witness=witness, stats=stats)
