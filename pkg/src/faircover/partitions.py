"""Partitions of a ground set and the representative-set reduction.

A partition over a sorted ground tuple is stored positionally: entry ``i`` is
the block id of the i-th ground element, with block ids renumbered by first
occurrence.  That canonical form is unique per set-partition, so tuple
equality is partition equality, and it coincides with sorting blocks by their
minimum element.

``reduce_family`` shrinks a family to at most ``2^(|U|-1)`` members while
preserving, for every way of completing a member to the single-block
partition, at least one surviving member that also completes.  It builds the
cut matrix over GF(2) (rows: members; columns: the bipartitions of U that fix
the first element's side) and keeps a row basis: the number of cuts refined
by both p and q is ``2^(blocks(p join q) - 1)``, which is odd exactly when
p join q is the single block, so row-span membership preserves completions.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .graph import InputError

Blocks = tuple[int, ...]

MAX_GROUND = 26  # bit-packed cut rows get 2**(|U|-1) columns


def canon_blocks(raw: Sequence[int]) -> Blocks:
    """Renumber block labels by first occurrence."""
    seen: dict[int, int] = {}
    out = []
    for label in raw:
        if label not in seen:
            seen[label] = len(seen)
        out.append(seen[label])
    return tuple(out)


def block_count(blocks: Blocks) -> int:
    return max(blocks) + 1 if blocks else 0


def meet_blocks(p: Blocks, q: Blocks) -> Blocks:
    """Finest common coarsening: connected components of the union of blocks."""
    s = len(p)
    parent = list(range(s))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for labels in (p, q):
        first: dict[int, int] = {}
        for i, b in enumerate(labels):
            if b in first:
                ra, rb = find(first[b]), find(i)
                if ra != rb:
                    parent[rb] = ra
            else:
                first[b] = i
    return canon_blocks([find(i) for i in range(s)])


def insert_position(p: Blocks, pos: int) -> Blocks:
    """New singleton block at the given ground position."""
    return canon_blocks(p[:pos] + (len(p) + 1,) + p[pos:])


def project_position(p: Blocks, pos: int) -> tuple[Blocks, bool]:
    """Drop a ground position; also reports whether it was a singleton block."""
    singleton = p.count(p[pos]) == 1
    return canon_blocks(p[:pos] + p[pos + 1 :]), singleton


def glue_positions(p: Blocks, i: int, j: int) -> Blocks:
    """Merge the blocks holding positions i and j."""
    bi, bj = p[i], p[j]
    if bi == bj:
        return p
    return canon_blocks([bi if b == bj else b for b in p])


def all_partitions(size: int) -> Iterator[Blocks]:
    """Every canonical partition of a ground set of the given size."""
    if size == 0:
        yield ()
        return

    def grow(prefix: list[int], used: int) -> Iterator[Blocks]:
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for label in range(used + 1):
            prefix.append(label)
            yield from grow(prefix, max(used, label + 1))
            prefix.pop()

    yield from grow([], 0)


def _cut_row(blocks: Blocks, size: int) -> int:
    """Bitset over cuts (subsets of U containing element 0) refined by the partition."""
    base = 0
    others: list[int] = []
    per_block: dict[int, int] = {}
    for pos in range(1, size):
        per_block[blocks[pos]] = per_block.get(blocks[pos], 0) | (1 << (pos - 1))
    block0 = blocks[0]
    for label, mask in per_block.items():
        if label == block0:
            base = mask
        else:
            others.append(mask)
    row = 0
    for combo in range(1 << len(others)):
        cut = base
        rest = combo
        idx = 0
        while rest:
            if rest & 1:
                cut |= others[idx]
            rest >>= 1
            idx += 1
        row |= 1 << cut
    return row


def representative_indices(members: Sequence[Blocks], ground_size: int) -> list[int]:
    """Indices of a GF(2) row basis of the cut matrix, in input order."""
    if ground_size > MAX_GROUND:
        raise InputError(f"ground set larger than {MAX_GROUND} not supported")
    if ground_size == 0:
        return [0] if members else []
    basis: dict[int, int] = {}
    kept: list[int] = []
    for idx, p in enumerate(members):
        cur = _cut_row(p, ground_size)
        while cur:
            pivot = cur.bit_length() - 1
            if pivot in basis:
                cur ^= basis[pivot]
            else:
                basis[pivot] = cur
                kept.append(idx)
                break
    return kept


@dataclass(frozen=True)
class Partition:
    """Canonical partition of a sorted ground tuple."""

    ground: tuple[int, ...]
    blocks: Blocks

    @staticmethod
    def from_sets(sets: Iterable[Iterable[int]]) -> "Partition":
        groups = [sorted(s) for s in sets]
        if any(not g for g in groups):
            raise InputError("empty block")
        ground = sorted(x for g in groups for x in g)
        if len(set(ground)) != len(ground):
            raise InputError("blocks are not disjoint")
        label_of = {}
        for i, g in enumerate(groups):
            for x in g:
                label_of[x] = i
        return Partition(tuple(ground), canon_blocks([label_of[x] for x in ground]))

    def blocks_as_sets(self) -> tuple[frozenset[int], ...]:
        out: dict[int, set[int]] = {}
        for x, b in zip(self.ground, self.blocks):
            out.setdefault(b, set()).add(x)
        return tuple(frozenset(out[b]) for b in sorted(out))


@dataclass(frozen=True)
class PartitionFamily:
    """Duplicate-free set of partitions over one ground set."""

    ground: tuple[int, ...]
    members: frozenset[Blocks]

    @staticmethod
    def of(partitions: Iterable[Partition]) -> "PartitionFamily":
        parts = list(partitions)
        if not parts:
            raise InputError("cannot infer ground set from an empty iterable")
        ground = parts[0].ground
        for p in parts:
            if p.ground != ground:
                raise InputError("partitions have different ground sets")
        return PartitionFamily(ground, frozenset(p.blocks for p in parts))

    @staticmethod
    def empty(ground: Iterable[int]) -> "PartitionFamily":
        return PartitionFamily(tuple(sorted(ground)), frozenset())

    def partitions(self) -> tuple[Partition, ...]:
        return tuple(
            Partition(self.ground, b) for b in sorted(self.members)
        )

    def __len__(self) -> int:
        return len(self.members)


def meet_join(p: Partition, q: Partition) -> Partition:
    """Merge two partitions of the same ground set into their join."""
    if p.ground != q.ground:
        raise InputError("ground-set mismatch")
    return Partition(p.ground, meet_blocks(p.blocks, q.blocks))


def ins(v: int, family: PartitionFamily) -> PartitionFamily:
    """Add v to the ground set as a singleton block of every member."""
    if v in family.ground:
        raise InputError(f"{v} already in the ground set")
    pos = bisect_left(family.ground, v)
    ground = family.ground[:pos] + (v,) + family.ground[pos:]
    return PartitionFamily(
        ground, frozenset(insert_position(m, pos) for m in family.members)
    )


def proj(v: int, family: PartitionFamily) -> PartitionFamily:
    """Remove v everywhere, discarding members where v was a singleton block."""
    if v not in family.ground:
        raise InputError(f"{v} not in the ground set")
    pos = family.ground.index(v)
    ground = family.ground[:pos] + family.ground[pos + 1 :]
    members = set()
    for m in family.members:
        reduced, singleton = project_position(m, pos)
        if not singleton:
            members.add(reduced)
    return PartitionFamily(ground, frozenset(members))


def glue(u: int, v: int, family: PartitionFamily) -> PartitionFamily:
    """Merge the blocks of u and v in every member, extending the ground set as needed."""
    if u == v:
        raise InputError("glue endpoints must differ")
    base = family
    for x in (u, v):
        if x not in base.ground:
            base = ins(x, base)
    pu = base.ground.index(u)
    pv = base.ground.index(v)
    return PartitionFamily(
        base.ground, frozenset(glue_positions(m, pu, pv) for m in base.members)
    )


def join_families(a: PartitionFamily, b: PartitionFamily) -> PartitionFamily:
    """All pairwise joins, deduplicated."""
    if a.ground != b.ground:
        raise InputError("ground-set mismatch")
    return PartitionFamily(
        a.ground,
        frozenset(meet_blocks(p, q) for p in a.members for q in b.members),
    )


def reduce_family(family: PartitionFamily) -> PartitionFamily:
    """Representative subset of size at most 2^(|U|-1); see the module docstring."""
    members = sorted(family.members)
    kept = representative_indices(members, len(family.ground))
    return PartitionFamily(family.ground, frozenset(members[i] for i in kept))
