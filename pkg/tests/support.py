"""Shared builders and independent oracles for the test suite.

Everything here is deliberately separate from the library code paths it
checks: the gray-code scan, the subset checkers and the certificate
enumerator only use the raw graph model.
"""

from __future__ import annotations

import random
from itertools import combinations

from faircover.graph import ColourBudget, ColouredGraph, make_graph


def graph(n, colours, edges, t=None):
    """Compact builder: colours as list of tuples, palette inferred."""
    if t is None:
        t = max((c for cs in colours for c in cs), default=1)
    return make_graph(n, t, colours, edges)


def uniform(n, edges, t=1):
    return make_graph(n, t, [(1,)] * n, edges)


def path_edges(vertices):
    return [(vertices[i], vertices[i + 1]) for i in range(len(vertices) - 1)]


def cycle_edges(vertices):
    return path_edges(vertices) + [(vertices[-1], vertices[0])]


def random_budget(rng, graph_t, total_max):
    ks = [0] * graph_t
    for _ in range(rng.randint(0, total_max)):
        ks[rng.randrange(graph_t)] += 1
    return ColourBudget(tuple(ks))


def random_corpus(count, seed, n_max, t_max, budget_max, p_choices=(0.15, 0.3, 0.5)):
    """Deterministic list of (graph, budget) instances."""
    from faircover.graph import random_instance

    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, n_max)
        t = rng.randint(1, t_max)
        g = random_instance(
            n, rng.choice(p_choices), t, min(2, t), seed=seed * 100003 + i
        )
        out.append((g, random_budget(rng, t, budget_max)))
    return out


def connected_graph_sample(minimum, seed):
    """At least ``minimum`` connected graphs with 2..7 vertices.

    Walks edge masks of each size with a fixed stride so the sample is
    deterministic and spread over the enumeration.
    """
    rng = random.Random(seed)
    out = []
    for n in range(2, 8):
        pairs = list(combinations(range(1, n + 1), 2))
        total = 1 << len(pairs)
        stride = max(1, total // (minimum // 6 + 1)) | 1
        mask = rng.randrange(total)
        produced = 0
        while produced <= minimum // 6:
            mask = (mask + stride) % total
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            if _connected(n, edges):
                out.append((n, edges))
                produced += 1
    return out


def _connected(n, edges):
    if n == 0:
        return True
    adj = {v: set() for v in range(1, n + 1)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {1}
    stack = [1]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def colour_everything(n_edges_pairs, rng, t_max, budget_max):
    """Attach colours and budgets to bare (n, edges) pairs."""
    out = []
    for n, edges in n_edges_pairs:
        t = rng.randint(1, t_max)
        colours = [
            tuple(sorted(rng.sample(range(1, t + 1), rng.randint(1, min(2, t)))))
            for _ in range(n)
        ]
        g = make_graph(n, t, colours, edges)
        out.append((g, random_budget(rng, t, budget_max)))
    return out


def gray_scan_fair(g: ColouredGraph, budget: ColourBudget, predicate) -> bool:
    """Independent enumeration in gray-code order with incremental counts."""
    n = g.n
    counts = [0] * g.t
    members: set[int] = set()
    budgets = tuple(budget.budgets)
    if tuple(counts) == budgets and predicate(g, members):
        return True
    prev = 0
    for i in range(1, 1 << n):
        code = i ^ (i >> 1)
        v = (prev ^ code).bit_length()  # flipped vertex id
        prev = code
        mask = g.colour_masks[v]
        delta = 1 if v not in members else -1
        if delta == 1:
            members.add(v)
        else:
            members.discard(v)
        c = 0
        while mask:
            if mask & 1:
                counts[c] += delta
            mask >>= 1
            c += 1
        if tuple(counts) == budgets and predicate(g, members):
            return True
    return False


def subset_is_cover(g, s):
    s = set(s)
    return all(u in s or v in s for u, v in g.edges)


def subset_is_acyclic_complement(g, s):
    removed = set(s)
    seen = set()
    for start in g.vertices():
        if start in removed or start in seen:
            continue
        stack = [(start, 0)]
        seen.add(start)
        while stack:
            v, parent = stack.pop()
            for w in g.adj[v]:
                if w in removed or w == parent:
                    continue
                if w in seen:
                    return False
                seen.add(w)
                stack.append((w, v))
    return True


def tree_certificate_exists(g: ColouredGraph, budget: ColourBudget) -> bool:
    """Exhaustive search for the universal-vertex spanning-tree certificate.

    Looks for kept vertices X (containing the new universal vertex) and a
    subset of universal edges such that kept ordinary edges plus the chosen
    ones form a tree and the kept per-colour counts hit total - k_i + 1.
    """
    n = g.n
    v0 = n + 1
    totals = [0] * g.t
    for v in g.vertices():
        m = g.colour_masks[v]
        c = 0
        while m:
            if m & 1:
                totals[c] += 1
            m >>= 1
            c += 1
    target = tuple(t_c - k + 1 for t_c, k in zip(totals, budget))
    for keep_mask in range(1 << n):
        kept = [v for v in g.vertices() if keep_mask >> (v - 1) & 1]
        counts = [1] * g.t  # v0 carries every colour
        for v in kept:
            m = g.colour_masks[v]
            c = 0
            while m:
                if m & 1:
                    counts[c] += 1
                m >>= 1
                c += 1
        if tuple(counts) != target:
            continue
        base_edges = [
            (u, v) for u, v in g.edges if u in set(kept) and v in set(kept)
        ]
        for sub in range(1 << len(kept)):
            chosen = [
                (kept[i], v0) for i in range(len(kept)) if sub >> i & 1
            ]
            vertices = kept + [v0]
            edges = base_edges + chosen
            if len(edges) != len(vertices) - 1:
                continue
            adj = {v: [] for v in vertices}
            for u, v in edges:
                adj[u].append(v)
                adj[v].append(u)
            seen = {vertices[0]}
            stack = [vertices[0]]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) == len(vertices):
                return True
    return False
