"""Interval relaxation of the exact budgets, by enumeration of exact tuples.

A set is (alpha, beta)-fair when its size is at most the total budget and
each colour count lies in [alpha * k_i, beta * k_i].  Since colour counts are
integers, the candidate exact budgets per colour are ceil(alpha * k_i) up to
floor(beta * k_i); tuples are enumerated in lexicographic order, skipping
those whose sum exceeds the total budget, and each is handed to an exact
solver.  The first hit wins, which keeps witnesses deterministic.

With multiple colours per vertex the sum cap can exclude sets whose colour
counts add up beyond the total budget even though every per-colour count is
in range; reports flag such instances so downstream users can tell.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Callable, Iterator

from .graph import ColourBudget, ColouredGraph, InputError, SolveOutcome


@dataclass(frozen=True)
class RelaxationSpec:
    alpha: Fraction
    beta: Fraction
    budget: ColourBudget

    def __post_init__(self) -> None:
        if not 0 <= self.alpha <= 1:
            raise InputError("alpha must lie in [0, 1]")
        if self.beta < 1:
            raise InputError("beta must be at least 1")


def enumerate_tuples(spec: RelaxationSpec) -> Iterator[ColourBudget]:
    """All integer tuples in the per-colour boxes whose sum respects the cap."""
    lows = [ceil(spec.alpha * k) for k in spec.budget]
    highs = [floor(spec.beta * k) for k in spec.budget]
    cap = spec.budget.total
    t = spec.budget.t

    def walk(i: int, prefix: list[int], used: int) -> Iterator[tuple[int, ...]]:
        if i == t:
            yield tuple(prefix)
            return
        remaining_min = sum(lows[i + 1 :])
        for value in range(lows[i], highs[i] + 1):
            if used + value + remaining_min > cap:
                break
            prefix.append(value)
            yield from walk(i + 1, prefix, used + value)
            prefix.pop()

    for tup in walk(0, [], 0):
        yield ColourBudget(tup)


def count_tuples(spec: RelaxationSpec) -> int:
    return sum(1 for _ in enumerate_tuples(spec))


def has_multi_colour_vertex(graph: ColouredGraph) -> bool:
    return any(
        bin(graph.colour_masks[v]).count("1") > 1 for v in graph.vertices()
    )


def solve_ab_fair(
    graph: ColouredGraph,
    spec: RelaxationSpec,
    exact_solver: Callable[[ColouredGraph, ColourBudget], SolveOutcome],
    want_witness: bool = False,
) -> SolveOutcome:
    """Run the exact solver over every candidate tuple; first YES wins."""
    tuples_tried = 0
    for candidate in enumerate_tuples(spec):
        tuples_tried += 1
        outcome = exact_solver(graph, candidate)
        if outcome.answer:
            stats = dict(outcome.stats)
            stats.update(
                tuples_tried=tuples_tried,
                matched_budgets=tuple(candidate.budgets),
                multi_colour_caveat=has_multi_colour_vertex(graph),
            )
            return SolveOutcome(
                answer=True,
                witness=outcome.witness if want_witness else None,
                stats=stats,
            )
    return SolveOutcome(
        answer=False,
        stats={
            "tuples_tried": tuples_tried,
            "multi_colour_caveat": has_multi_colour_vertex(graph),
        },
    )


def parse_rational(text: str) -> Fraction:
    """Accept '2/3', '0.5' or '1' on the command line."""
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational number: {text!r}") from exc
