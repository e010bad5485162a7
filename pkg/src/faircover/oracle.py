"""Brute-force reference solvers: ground truth for every algorithm in the repo.

Deliberately simple.  Enumeration is a depth-first include/exclude scan over
vertices in increasing id order, pruned as soon as any colour count exceeds
its budget; the witness kept is the fair solution whose sorted vertex tuple
is lexicographically smallest, which makes goldens reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import ColourBudget, ColouredGraph, InputError, SolveOutcome

VC = "vc"
FVS = "fvs"


@dataclass(frozen=True)
class OracleConfig:
    max_n: int = 20
    enumerate_all: bool = False

    def __post_init__(self) -> None:
        if self.max_n < 1:
            raise InputError("max_n must be at least 1")


def is_vertex_cover(graph: ColouredGraph, vertices) -> bool:
    """True iff every edge has an endpoint in the set."""
    s = set(vertices)
    return all(u in s or v in s for u, v in graph.edges)


def is_fvs(graph: ColouredGraph, vertices) -> bool:
    """True iff deleting the set leaves an acyclic graph (checked by traversal)."""
    removed = set(vertices)
    seen: set[int] = set()
    for start in graph.vertices():
        if start in removed or start in seen:
            continue
        # iterative DFS with parent tracking; a visited non-parent means a cycle
        stack = [(start, 0)]
        seen.add(start)
        while stack:
            v, parent = stack.pop()
            for w in graph.adj[v]:
                if w in removed or w == parent:
                    continue
                if w in seen:
                    return False
                seen.add(w)
                stack.append((w, v))
    return True


def _predicate(problem: str):
    if problem == VC:
        return is_vertex_cover
    if problem == FVS:
        return is_fvs
    raise InputError(f"unknown problem {problem!r}")


def brute_force_fair(
    graph: ColouredGraph,
    budget: ColourBudget,
    problem: str,
    config: OracleConfig = OracleConfig(),
) -> SolveOutcome:
    """Exhaustive search for a fair solution of the given problem.

    YES iff some vertex subset satisfies the problem predicate and carries
    exactly the budgeted number of vertices of every colour.  The witness is
    the lexicographically smallest such set.  With ``enumerate_all`` the
    number of fair solutions is reported under ``stats["solutions"]``.
    """
    if graph.n > config.max_n:
        raise InputError(
            f"instance with {graph.n} vertices exceeds oracle cap {config.max_n}"
        )
    if budget.t != graph.t:
        raise InputError("budget length differs from palette size")
    check = _predicate(problem)
    budgets = tuple(budget.budgets)
    masks = graph.colour_masks
    t = graph.t
    best: tuple[int, ...] | None = None
    found = 0

    def scan(v: int, counts: list[int], chosen: list[int]) -> None:
        nonlocal best, found
        if v > graph.n:
            if tuple(counts) == budgets and check(graph, chosen):
                found += 1
                key = tuple(chosen)
                if best is None or key < best:
                    best = key
            return
        # include v unless some colour budget would overflow
        mask = masks[v]
        ok = True
        i = 0
        while mask:
            if mask & 1:
                if counts[i] + 1 > budgets[i]:
                    ok = False
                    break
                counts[i] += 1
            mask >>= 1
            i += 1
        if ok:
            chosen.append(v)
            scan(v + 1, counts, chosen)
            chosen.pop()
        mask = masks[v]
        j = 0
        while j < i:
            if (mask >> j) & 1:
                counts[j] -= 1
            j += 1
        scan(v + 1, counts, chosen)

    scan(1, [0] * t, [])
    stats: dict[str, object] = {"subset_space": 2**graph.n}
    if config.enumerate_all:
        stats["solutions"] = found
    if best is None:
        return SolveOutcome(answer=False, stats=stats)
    return SolveOutcome(answer=True, witness=frozenset(best), stats=stats)


def enumerate_fair(
    graph: ColouredGraph,
    budget: ColourBudget,
    problem: str,
    config: OracleConfig = OracleConfig(),
) -> list[frozenset[int]]:
    """All fair solutions, sorted by their sorted vertex tuples."""
    if graph.n > config.max_n:
        raise InputError(
            f"instance with {graph.n} vertices exceeds oracle cap {config.max_n}"
        )
    check = _predicate(problem)
    budgets = tuple(budget.budgets)
    out = []
    for mask in range(2**graph.n):
        subset = [v for v in graph.vertices() if mask >> (v - 1) & 1]
        counts = [0] * graph.t
        for v in subset:
            cm = graph.colour_masks[v]
            i = 0
            while cm:
                if cm & 1:
                    counts[i] += 1
                cm >>= 1
                i += 1
        if tuple(counts) == budgets and check(graph, subset):
            out.append(frozenset(subset))
    return sorted(out, key=lambda s: tuple(sorted(s)))


def brute_force_min_fvs_size(
    graph: ColouredGraph, config: OracleConfig = OracleConfig()
) -> int:
    """Minimum size of a feedback vertex set, by exhaustive search."""
    from itertools import combinations

    if graph.n > config.max_n:
        raise InputError(
            f"instance with {graph.n} vertices exceeds oracle cap {config.max_n}"
        )
    if is_fvs(graph, ()):
        return 0
    verts = list(graph.vertices())
    for size in range(1, graph.n + 1):
        for combo in combinations(verts, size):
            if is_fvs(graph, combo):
                return size
    raise AssertionError("unreachable: V(G) is always an fvs")
