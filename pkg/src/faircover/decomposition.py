"""Tree decompositions: validation, nicification, and the constructions the solvers need.

A nice decomposition is stored as a flat node array in bottom-up order (every
child index is smaller than its parent's), which is also the evaluation order
used by the dynamic programs.  Node kinds: ``leaf``, ``introduce`` (vertex),
``forget``, ``edge`` (introduce-edge) and ``join``.  Root and leaf bags are
empty and every graph edge is introduced exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import ColouredGraph, InputError, ParseError
from .oracle import is_fvs

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
EDGE = "edge"
JOIN = "join"


@dataclass(frozen=True)
class TreeDecomposition:
    """Raw decomposition: one bag per node, tree edges between node indices (0-based)."""

    bags: tuple[frozenset[int], ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...] = ()
    vertex: int | None = None
    edge: tuple[int, int] | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    nodes: tuple[NiceNode, ...]
    root: int

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def bottom_up(self) -> range:
        """Valid evaluation order: children always precede parents."""
        return range(len(self.nodes))


class NiceBuilder:
    """Appends nodes bottom-up; child indices are always smaller than parents'."""

    def __init__(self) -> None:
        self.nodes: list[NiceNode] = []

    def _add(self, node: NiceNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def leaf(self) -> int:
        return self._add(NiceNode(LEAF, frozenset()))

    def introduce(self, child: int, v: int) -> int:
        bag = self.nodes[child].bag
        if v in bag:
            raise InputError(f"introduce of {v} already in bag")
        return self._add(NiceNode(INTRODUCE, bag | {v}, (child,), vertex=v))

    def forget(self, child: int, v: int) -> int:
        bag = self.nodes[child].bag
        if v not in bag:
            raise InputError(f"forget of {v} not in bag")
        return self._add(NiceNode(FORGET, bag - {v}, (child,), vertex=v))

    def edge(self, child: int, u: int, v: int) -> int:
        bag = self.nodes[child].bag
        if u not in bag or v not in bag:
            raise InputError(f"edge ({u},{v}) endpoints not both in bag")
        e = (u, v) if u < v else (v, u)
        return self._add(NiceNode(EDGE, bag, (child,), edge=e))

    def join(self, left: int, right: int) -> int:
        if self.nodes[left].bag != self.nodes[right].bag:
            raise InputError("join children must have equal bags")
        return self._add(NiceNode(JOIN, self.nodes[left].bag, (left, right)))

    def build(self, root: int | None = None) -> NiceTreeDecomposition:
        return NiceTreeDecomposition(
            nodes=tuple(self.nodes),
            root=len(self.nodes) - 1 if root is None else root,
        )


def validate_td(td: TreeDecomposition, graph: ColouredGraph) -> list[str]:
    """Check the three decomposition conditions; returns violation messages."""
    problems = []
    nnodes = len(td.bags)
    if nnodes == 0:
        return ["decomposition has no nodes"]
    adj: list[list[int]] = [[] for _ in range(nnodes)]
    for a, b in td.edges:
        if not (0 <= a < nnodes and 0 <= b < nnodes):
            return [f"tree edge ({a},{b}) references a missing node"]
        adj[a].append(b)
        adj[b].append(a)
    if len(td.edges) != nnodes - 1:
        problems.append(f"tree has {len(td.edges)} edges for {nnodes} nodes")
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nnodes:
        problems.append("decomposition tree is disconnected")
        return problems

    covered: set[int] = set()
    for bag in td.bags:
        covered |= bag
    for v in graph.vertices():
        if v not in covered:
            problems.append(f"vertex {v} appears in no bag")
    for u, v in graph.edges:
        if not any(u in bag and v in bag for bag in td.bags):
            problems.append(f"edge ({u},{v}) has no common bag")
    for v in graph.vertices():
        holders = [i for i, bag in enumerate(td.bags) if v in bag]
        if not holders:
            continue
        hset = set(holders)
        reach = {holders[0]}
        stack = [holders[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hset and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != hset:
            problems.append(f"bags containing vertex {v} are not connected")
    return problems


def validate_nice(ntd: NiceTreeDecomposition, graph: ColouredGraph) -> list[str]:
    """Check kind-specific invariants plus exactly-once edge introduction."""
    problems = []
    nodes = ntd.nodes
    indegree = [0] * len(nodes)
    for i, nd in enumerate(nodes):
        for c in nd.children:
            if c >= i:
                problems.append(f"node {i} has child {c} not preceding it")
            indegree[c] += 1
    for i, deg in enumerate(indegree):
        if i == ntd.root:
            if deg != 0:
                problems.append("root has a parent")
        elif deg != 1:
            problems.append(f"node {i} has {deg} parents")

    introduced_edges: list[tuple[int, int]] = []
    for i, nd in enumerate(nodes):
        if nd.kind == LEAF:
            if nd.children or nd.bag:
                problems.append(f"leaf node {i} must have empty bag and no children")
        elif nd.kind == INTRODUCE:
            (c,) = nd.children
            cb = nodes[c].bag
            if nd.vertex is None or nd.vertex in cb or nd.bag != cb | {nd.vertex}:
                problems.append(f"introduce node {i} bag mismatch")
        elif nd.kind == FORGET:
            (c,) = nd.children
            cb = nodes[c].bag
            if nd.vertex is None or nd.vertex not in cb or nd.bag != cb - {nd.vertex}:
                problems.append(f"forget node {i} bag mismatch")
        elif nd.kind == EDGE:
            (c,) = nd.children
            if nd.bag != nodes[c].bag:
                problems.append(f"edge node {i} changes the bag")
            if nd.edge is None or not set(nd.edge) <= nd.bag:
                problems.append(f"edge node {i} endpoints not in bag")
            else:
                introduced_edges.append(nd.edge)
        elif nd.kind == JOIN:
            if len(nd.children) != 2:
                problems.append(f"join node {i} needs two children")
            elif not (nodes[nd.children[0]].bag == nodes[nd.children[1]].bag == nd.bag):
                problems.append(f"join node {i} bags differ")
        else:
            problems.append(f"node {i} has unknown kind {nd.kind!r}")
    if nodes[ntd.root].bag:
        problems.append("root bag is not empty")

    expected = sorted(graph.edges)
    if sorted(introduced_edges) != expected:
        from collections import Counter

        have = Counter(introduced_edges)
        want = Counter(expected)
        for e in want - have:
            problems.append(f"edge {e} never introduced")
        for e in have - want:
            problems.append(f"edge {e} introduced more than once or unknown")

    covered: set[int] = set()
    for nd in nodes:
        covered |= nd.bag
    for v in graph.vertices():
        if v not in covered:
            problems.append(f"vertex {v} appears in no bag")
    # Since the root bag is empty, each maximal run of bags containing v ends
    # at a forget of v, so the runs form one connected region iff v is
    # forgotten exactly once.
    for v in covered:
        forgets = sum(1 for nd in nodes if nd.kind == FORGET and nd.vertex == v)
        if forgets != 1:
            problems.append(f"vertex {v} forgotten {forgets} times")
    return problems


def node_subgraphs(
    ntd: NiceTreeDecomposition,
) -> list[tuple[frozenset[int], tuple[tuple[int, int], ...]]]:
    """Per node, the vertices and edges introduced in its subtree."""
    out: list[tuple[frozenset[int], tuple[tuple[int, int], ...]]] = []
    for nd in ntd.nodes:
        verts: set[int] = set(nd.bag)
        edges: list[tuple[int, int]] = []
        for c in nd.children:
            cv, ce = out[c]
            verts |= cv
            edges.extend(ce)
        if nd.kind == EDGE and nd.edge is not None:
            edges.append(nd.edge)
        out.append((frozenset(verts), tuple(sorted(edges))))
    return out


class _Nicifier:
    """Shared machinery: raises chains between bags and anchors edge introduction.

    Each graph edge is introduced directly below the forget node of whichever
    endpoint is forgotten first; at that point the other endpoint is still in
    the bag, and every vertex is forgotten exactly once, so each edge lands
    exactly once.
    """

    def __init__(self, graph: ColouredGraph) -> None:
        self.graph = graph
        self.builder = NiceBuilder()
        self.assigned: set[tuple[int, int]] = set()

    def forget_with_edges(self, chain: int, v: int) -> int:
        bag = self.builder.nodes[chain].bag
        for u in sorted(self.graph.adj[v]):
            if u in bag:
                e = (u, v) if u < v else (v, u)
                if e not in self.assigned:
                    self.assigned.add(e)
                    chain = self.builder.edge(chain, *e)
        return self.builder.forget(chain, v)

    def raise_chain(self, chain: int, target: frozenset[int]) -> int:
        bag = self.builder.nodes[chain].bag
        for v in sorted(bag - target):
            chain = self.forget_with_edges(chain, v)
        for v in sorted(target - bag):
            chain = self.builder.introduce(chain, v)
        return chain

    def grow_from_empty(self, chain: int, target: frozenset[int]) -> int:
        for v in sorted(target):
            chain = self.builder.introduce(chain, v)
        return chain


def make_nice(td: TreeDecomposition, graph: ColouredGraph) -> NiceTreeDecomposition:
    """Turn a valid decomposition into a nice one of the same width.

    Joins are binarized with the parent's bag; transitions between bags forget
    first and introduce second, so no intermediate bag exceeds the larger of
    the two.  Node count is O(width * n + m).
    """
    problems = validate_td(td, graph)
    if problems:
        raise InputError("invalid tree decomposition: " + "; ".join(problems))
    nnodes = len(td.bags)
    adj: list[list[int]] = [[] for _ in range(nnodes)]
    for a, b in td.edges:
        adj[a].append(b)
        adj[b].append(a)
    root = 0
    parent: list[int | None] = [None] * nnodes
    order = [root]
    seen = {root}
    for x in order:
        for y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
    children: list[list[int]] = [[] for _ in range(nnodes)]
    for y in order[1:]:
        children[parent[y]].append(y)

    nic = _Nicifier(graph)
    result: dict[int, int] = {}
    for x in reversed(order):
        bag = td.bags[x]
        if not children[x]:
            chain = nic.grow_from_empty(nic.builder.leaf(), bag)
        else:
            raised = [nic.raise_chain(result[c], bag) for c in children[x]]
            chain = raised[0]
            for other in raised[1:]:
                chain = nic.builder.join(chain, other)
        result[x] = chain
    top = nic.raise_chain(result[root], frozenset())
    ntd = nic.builder.build(top)
    return ntd


def td_paths_cycles(graph: ColouredGraph) -> NiceTreeDecomposition:
    """Nice decomposition (width <= 2) of a graph with maximum degree <= 2.

    Components are handled one by one along a single chain, passing through an
    empty bag between them, so the result has no join nodes.
    """
    if graph.max_degree() > 2:
        raise InputError("graph has a vertex of degree greater than 2")
    seen: set[int] = set()
    components: list[list[int]] = []
    for start in graph.vertices():
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for w in graph.adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        components.append(sorted(comp))

    nic = _Nicifier(graph)
    b = nic.builder
    chain = b.leaf()
    for comp in components:
        degs = {v: graph.degree(v) for v in comp}
        if len(comp) == 1:
            v = comp[0]
            chain = b.introduce(chain, v)
            chain = nic.forget_with_edges(chain, v)
            continue
        endpoints = [v for v in comp if degs[v] == 1]
        if endpoints:  # path: walk from the smallest endpoint
            cur = min(endpoints)
            prev = None
            chain = b.introduce(chain, cur)
            while True:
                nxt = [w for w in graph.adj[cur] if w != prev]
                if not nxt:
                    chain = nic.forget_with_edges(chain, cur)
                    break
                w = nxt[0]
                chain = b.introduce(chain, w)
                chain = nic.forget_with_edges(chain, cur)
                prev, cur = cur, w
        else:  # cycle: keep the anchor vertex in the bag until the end
            anchor = comp[0]
            cur = min(graph.adj[anchor])
            chain = b.introduce(chain, anchor)
            chain = b.introduce(chain, cur)
            prev = anchor
            while True:
                nxt = [w for w in graph.adj[cur] if w != prev]
                w = nxt[0]
                if w == anchor:
                    chain = nic.forget_with_edges(chain, cur)
                    chain = nic.forget_with_edges(chain, anchor)
                    break
                chain = b.introduce(chain, w)
                chain = nic.forget_with_edges(chain, cur)
                prev, cur = cur, w
    return b.build(chain)


def td_from_fvs(graph: ColouredGraph, fvs: frozenset[int] | set[int]) -> NiceTreeDecomposition:
    """Nice decomposition of width at most |fvs| + 1 from a feedback vertex set.

    Builds a width-1 decomposition of the forest left after deleting the set
    (a bag per forest vertex holding it and its parent), adds the set to every
    bag, chains the per-component trees, and nicifies.
    """
    fset = frozenset(fvs)
    if not fset <= set(graph.vertices()):
        raise InputError("fvs contains unknown vertices")
    if not is_fvs(graph, fset):
        raise InputError("given set is not a feedback vertex set")
    forest = [v for v in graph.vertices() if v not in fset]

    bags: list[frozenset[int]] = []
    tree_edges: list[tuple[int, int]] = []
    node_of: dict[int, int] = {}
    seen: set[int] = set()
    prev_tail: int | None = None
    for start in forest:
        if start in seen:
            continue
        # component leaves first: root at the smallest-id vertex of minimum
        # forest-degree so path components nicify without joins
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for w in graph.adj[v]:
                if w not in fset and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        fdeg = {v: sum(1 for w in graph.adj[v] if w not in fset) for v in comp}
        min_deg = min(fdeg.values())
        root = min(v for v in comp if fdeg[v] == min_deg)
        node_of[root] = len(bags)
        bags.append(frozenset({root}) | fset)
        if prev_tail is not None:
            tree_edges.append((prev_tail, node_of[root]))
        order = [root]
        visited = {root}
        for v in order:
            for w in sorted(x for x in graph.adj[v] if x not in fset):
                if w not in visited:
                    visited.add(w)
                    node_of[w] = len(bags)
                    bags.append(frozenset({w, v}) | fset)
                    tree_edges.append((node_of[v], node_of[w]))
                    order.append(w)
        prev_tail = node_of[order[-1]]
    if not bags:
        bags.append(fset if fset else frozenset())
    td = TreeDecomposition(bags=tuple(bags), edges=tuple(tree_edges))
    return make_nice(td, graph)


def min_degree_td(graph: ColouredGraph) -> TreeDecomposition:
    """Minimum-degree elimination heuristic; valid but with no width guarantee."""
    if graph.n == 0:
        return TreeDecomposition(bags=(frozenset(),), edges=())
    nbrs: dict[int, set[int]] = {v: set(graph.adj[v]) for v in graph.vertices()}
    order: list[int] = []
    position: dict[int, int] = {}
    bags: list[frozenset[int]] = []
    while nbrs:
        v = min(nbrs, key=lambda u: (len(nbrs[u]), u))
        bag = frozenset({v} | nbrs[v])
        position[v] = len(order)
        order.append(v)
        bags.append(bag)
        around = nbrs.pop(v)
        for a in around:
            nbrs[a].discard(v)
            nbrs[a] |= around - {a}
    edges = []
    for i, v in enumerate(order):
        later = [u for u in bags[i] if u != v and position[u] > i]
        if later:
            target = min(later, key=lambda u: position[u])
            edges.append((i, position[target]))
        elif i + 1 < len(order):
            edges.append((i, i + 1))
    return TreeDecomposition(bags=tuple(bags), edges=tuple(edges))


def parse_td(text: str, graph: ColouredGraph) -> TreeDecomposition:
    """Parse the PACE 2017 ``.td`` format and validate against the graph."""
    header = None
    bag_lines: dict[int, frozenset[int]] = {}
    tree_edges: list[tuple[int, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ParseError("duplicate 's td' header")
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(f"malformed 's td' header: {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            except ValueError as exc:
                raise ParseError(f"non-integer field in header {line!r}") from exc
        elif parts[0] == "b":
            if header is None:
                raise ParseError("bag line before 's td' header")
            try:
                bid = int(parts[1])
                verts = frozenset(int(p) for p in parts[2:])
            except (ValueError, IndexError) as exc:
                raise ParseError(f"malformed bag line {line!r}") from exc
            if not 1 <= bid <= header[0]:
                raise ParseError(f"bag id {bid} outside 1..{header[0]}")
            if bid in bag_lines:
                raise ParseError(f"duplicate bag id {bid}")
            for v in verts:
                if not 1 <= v <= header[2]:
                    raise ParseError(f"bag {bid} references unknown vertex {v}")
            bag_lines[bid] = verts
        else:
            if header is None:
                raise ParseError("tree edge before 's td' header")
            if len(parts) != 2:
                raise ParseError(f"malformed tree edge line {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ParseError(f"non-integer tree edge {line!r}") from exc
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise ParseError(f"tree edge ({a},{b}) references a missing bag")
            tree_edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td' header")
    num_bags, _max_bag, n = header
    if n != graph.n:
        raise ParseError(f"decomposition is for {n} vertices, graph has {graph.n}")
    bags = tuple(bag_lines.get(i, frozenset()) for i in range(1, num_bags + 1))
    td = TreeDecomposition(bags=bags, edges=tuple(tree_edges))
    problems = validate_td(td, graph)
    if problems:
        raise ParseError("invalid decomposition: " + "; ".join(problems))
    return td


def emit_td(td: TreeDecomposition, n: int) -> str:
    """Emit PACE 2017 ``.td`` text; inverse of :func:`parse_td`."""
    lines = [f"s td {len(td.bags)} {max((len(b) for b in td.bags), default=0)} {n}"]
    for i, bag in enumerate(td.bags, start=1):
        lines.append("b " + " ".join([str(i)] + [str(v) for v in sorted(bag)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"
