"""Coloured-graph data model, colour accounting, instance IO and random generation.

Vertices are dense 1-based integers.  Every vertex carries a nonempty set of
colours from the palette ``1..t``; colour sets are stored as bitmasks (bit
``i - 1`` set means colour ``i``), which caps the palette at 64 colours.
Graphs are simple and undirected, and immutable after construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

MAX_COLOURS = 64


class InputError(ValueError):
    """Raised for arguments that violate an operation's precondition."""


class ParseError(ValueError):
    """Raised for malformed instance or decomposition text."""


def colour_mask(colours: Iterable[int], t: int) -> int:
    """Pack colour ids from ``1..t`` into a bitmask."""
    mask = 0
    for c in colours:
        if not 1 <= c <= t:
            raise InputError(f"colour {c} out of range 1..{t}")
        mask |= 1 << (c - 1)
    return mask


def mask_colours(mask: int) -> tuple[int, ...]:
    """Unpack a colour bitmask into sorted colour ids."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class ColouredGraph:
    """Simple undirected graph with a nonempty colour set per vertex.

    ``colour_masks[v]`` is the bitmask of vertex ``v`` (index 0 unused) and
    ``edges`` is canonically ordered: each edge as ``(min, max)``, sorted.
    """

    n: int
    t: int
    colour_masks: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    adj: tuple[frozenset[int], ...] = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbours(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def colour_set(self, v: int) -> tuple[int, ...]:
        return mask_colours(self.colour_masks[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj[1:]), default=0)


def make_graph(
    n: int,
    t: int,
    colours: Mapping[int, Iterable[int]] | Sequence[Iterable[int]],
    edges: Iterable[tuple[int, int]],
) -> ColouredGraph:
    """Build a validated, canonicalized ``ColouredGraph``.

    ``colours`` maps each vertex ``1..n`` to an iterable of colour ids, or is
    a sequence indexed ``0..n-1`` in vertex order.
    """
    if n < 0:
        raise InputError("vertex count must be non-negative")
    if not 1 <= t <= MAX_COLOURS:
        raise InputError(f"palette size must be in 1..{MAX_COLOURS}, got {t}")
    masks = [0] * (n + 1)
    for v in range(1, n + 1):
        raw = colours[v] if isinstance(colours, Mapping) else colours[v - 1]
        mask = raw if isinstance(raw, int) else colour_mask(raw, t)
        if mask == 0:
            raise InputError(f"vertex {v} has no colours")
        if mask >> t:
            raise InputError(f"vertex {v} uses a colour beyond {t}")
        masks[v] = mask
    canon = set()
    for u, v in edges:
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(f"edge ({u},{v}) references a vertex outside 1..{n}")
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        e = (u, v) if u < v else (v, u)
        if e in canon:
            raise InputError(f"duplicate edge ({e[0]},{e[1]})")
        canon.add(e)
    edge_tuple = tuple(sorted(canon))
    nbrs: list[set[int]] = [set() for _ in range(n + 1)]
    for u, v in edge_tuple:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return ColouredGraph(
        n=n,
        t=t,
        colour_masks=tuple(masks),
        edges=edge_tuple,
        adj=tuple(frozenset(s) for s in nbrs),
    )


@dataclass(frozen=True)
class ColourBudget:
    """Per-colour budget tuple; the total is the sum of the entries."""

    budgets: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(k < 0 for k in self.budgets):
            raise InputError("budgets must be non-negative")

    @property
    def t(self) -> int:
        return len(self.budgets)

    @property
    def total(self) -> int:
        return sum(self.budgets)

    def __getitem__(self, i: int) -> int:
        return self.budgets[i]

    def __iter__(self):
        return iter(self.budgets)


@dataclass(frozen=True)
class SolveOutcome:
    """Decision answer with optional witness (original vertex ids) and counters."""

    answer: bool
    witness: frozenset[int] | None = None
    stats: Mapping[str, object] = field(default_factory=dict)


def colour_counts(graph: ColouredGraph, vertices: Iterable[int]) -> tuple[int, ...]:
    """Per-colour occurrence counts of a vertex set, as a length-t tuple."""
    counts = [0] * graph.t
    masks = graph.colour_masks
    for v in vertices:
        mask = masks[v]
        i = 0
        while mask:
            if mask & 1:
                counts[i] += 1
            mask >>= 1
            i += 1
    return tuple(counts)


def colour_count(graph: ColouredGraph, vertices: Iterable[int], colour: int) -> int:
    """Number of vertices in the set carrying the given colour."""
    if not 1 <= colour <= graph.t:
        raise InputError(f"colour {colour} out of range 1..{graph.t}")
    bit = 1 << (colour - 1)
    return sum(1 for v in vertices if graph.colour_masks[v] & bit)


def is_t_fair(graph: ColouredGraph, vertices: Iterable[int], budget: ColourBudget) -> bool:
    """True iff the set contains exactly ``budget[i]`` vertices of each colour."""
    return colour_counts(graph, vertices) == tuple(budget.budgets)


def colour_neighbourhood(graph: ColouredGraph, v: int, colour: int) -> frozenset[int]:
    """Neighbours of ``v`` that carry the given colour."""
    if not 1 <= colour <= graph.t:
        raise InputError(f"colour {colour} out of range 1..{graph.t}")
    bit = 1 << (colour - 1)
    return frozenset(w for w in graph.adj[v] if graph.colour_masks[w] & bit)


def induced_subgraph(
    graph: ColouredGraph, keep: Iterable[int]
) -> tuple[ColouredGraph, tuple[int, ...]]:
    """Induced subgraph on ``keep`` with dense 1-based ids.

    Returns the subgraph and the id map: position ``v`` (1-based) holds the
    original id of new vertex ``v``, so witnesses can be mapped back.
    """
    kept = sorted(set(keep))
    index = {orig: i + 1 for i, orig in enumerate(kept)}
    colours = [graph.colour_masks[orig] for orig in kept]
    edges = [
        (index[u], index[v])
        for u, v in graph.edges
        if u in index and v in index
    ]
    sub = make_graph(len(kept), graph.t, colours, edges)
    return sub, tuple(kept)


def remove_vertices(
    graph: ColouredGraph, drop: Iterable[int]
) -> tuple[ColouredGraph, tuple[int, ...]]:
    """Complement view of :func:`induced_subgraph`."""
    dropped = set(drop)
    return induced_subgraph(graph, (v for v in graph.vertices() if v not in dropped))


def parse_instance(text: str) -> tuple[ColouredGraph, ColourBudget]:
    """Parse the line-oriented ``.fgr`` instance format.

    Layout (``#`` starts a comment, blank lines ignored)::

        fgr <n> <m> <t>
        v <id> <c1> [<c2> ...]     one line per vertex
        e <u> <v>                  one line per edge
        b <k1> ... <kt>

    Raises :class:`ParseError` with a distinct message per defect.
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty instance: missing 'fgr' header")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "fgr":
        raise ParseError(f"malformed header: {lines[0]!r}")
    try:
        n, m, t = int(header[1]), int(header[2]), int(header[3])
    except ValueError as exc:
        raise ParseError(f"non-integer field in header: {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise ParseError("header counts must be non-negative")
    if not 1 <= t <= MAX_COLOURS:
        raise ParseError(f"palette size must be in 1..{MAX_COLOURS}, got {t}")

    expected = 1 + n + m + 1
    if len(lines) != expected:
        raise ParseError(
            f"expected {expected} content lines for n={n}, m={m}, found {len(lines)}"
        )
    colour_lists: dict[int, tuple[int, ...]] = {}
    for line in lines[1 : 1 + n]:
        parts = line.split()
        if parts[0] != "v":
            raise ParseError(f"expected vertex line, got {line!r}")
        if len(parts) < 3:
            raise ParseError(f"vertex without colours: {line!r}")
        try:
            vid = int(parts[1])
            cols = tuple(int(p) for p in parts[2:])
        except ValueError as exc:
            raise ParseError(f"non-integer field in vertex line {line!r}") from exc
        if not 1 <= vid <= n:
            raise ParseError(f"vertex id {vid} outside 1..{n}")
        if vid in colour_lists:
            raise ParseError(f"duplicate vertex line for id {vid}")
        for c in cols:
            if not 1 <= c <= t:
                raise ParseError(f"colour {c} out of range 1..{t} on vertex {vid}")
        colour_lists[vid] = cols
    if len(colour_lists) != n:
        missing = next(v for v in range(1, n + 1) if v not in colour_lists)
        raise ParseError(f"no colour line for vertex {missing}")

    edges = []
    seen = set()
    for line in lines[1 + n : 1 + n + m]:
        parts = line.split()
        if parts[0] != "e" or len(parts) != 3:
            raise ParseError(f"expected edge line, got {line!r}")
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ParseError(f"non-integer field in edge line {line!r}") from exc
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"edge ({u},{v}) references a vertex outside 1..{n}")
        if u == v:
            raise ParseError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge ({key[0]},{key[1]})")
        seen.add(key)
        edges.append(key)

    bparts = lines[1 + n + m].split()
    if bparts[0] != "b":
        raise ParseError(f"expected budget line, got {lines[1 + n + m]!r}")
    try:
        budgets = tuple(int(p) for p in bparts[1:])
    except ValueError as exc:
        raise ParseError(f"non-integer field in budget line") from exc
    if len(budgets) != t:
        raise ParseError(f"budget line has {len(budgets)} entries, palette has {t}")
    if any(k < 0 for k in budgets):
        raise ParseError("budgets must be non-negative")

    graph = make_graph(n, t, {v: colour_lists[v] for v in range(1, n + 1)}, edges)
    return graph, ColourBudget(budgets)


def serialize_instance(graph: ColouredGraph, budget: ColourBudget) -> str:
    """Emit ``.fgr`` text in canonical order; inverse of :func:`parse_instance`."""
    if budget.t != graph.t:
        raise InputError(f"budget has {budget.t} entries, graph palette is {graph.t}")
    out = [f"fgr {graph.n} {graph.m} {graph.t}"]
    for v in graph.vertices():
        cols = " ".join(str(c) for c in graph.colour_set(v))
        out.append(f"v {v} {cols}")
    for u, v in graph.edges:
        out.append(f"e {u} {v}")
    out.append("b " + " ".join(str(k) for k in budget.budgets))
    return "\n".join(out) + "\n"


def random_instance(
    n: int,
    edge_probability: float,
    t: int,
    max_colours_per_vertex: int,
    seed: int,
) -> ColouredGraph:
    """Random graph with uniform nonempty colour sets of bounded size.

    Deterministic for a fixed seed.  Each vertex's colour set is uniform over
    all nonempty subsets of ``1..t`` with at most ``max_colours_per_vertex``
    elements (size picked with probability proportional to the number of sets
    of that size, then a uniform combination of that size).
    """
    if n < 1:
        raise InputError("n must be at least 1")
    if not 1 <= max_colours_per_vertex <= t:
        raise InputError("max_colours_per_vertex must be in 1..t")
    rng = random.Random(seed)
    from math import comb

    size_weights = [comb(t, s) for s in range(1, max_colours_per_vertex + 1)]
    colours = []
    for _ in range(n):
        size = rng.choices(range(1, max_colours_per_vertex + 1), weights=size_weights)[0]
        colours.append(tuple(sorted(rng.sample(range(1, t + 1), size))))
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < edge_probability
    ]
    return make_graph(n, t, colours, edges)
