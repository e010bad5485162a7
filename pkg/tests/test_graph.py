from __future__ import annotations

import random

import pytest

from faircover.graph import (
    ColourBudget,
    InputError,
    ParseError,
    colour_count,
    colour_counts,
    colour_neighbourhood,
    induced_subgraph,
    is_t_fair,
    make_graph,
    parse_instance,
    random_instance,
    serialize_instance,
)
from support import graph


def test_colour_count_empty_set_is_zero():
    g = graph(3, [(1,), (1,), (2,)], [(1, 2)], t=2)
    assert colour_count(g, (), 1) == 0


def test_colour_count_membership():
    g = graph(1, [(1, 2)], [], t=2)
    assert colour_count(g, {1}, 2) == 1
    assert colour_count(g, {1}, 1) == 1


def test_colour_count_out_of_range_rejected():
    g = graph(1, [(1,)], [])
    with pytest.raises(InputError):
        colour_count(g, {1}, 2)


def test_colour_count_matches_scan_on_random_instances():
    rng = random.Random(1)
    for trial in range(30):
        g = random_instance(8, 0.4, 3, 2, seed=trial)
        verts = [v for v in g.vertices() if rng.random() < 0.5]
        for i in (1, 2, 3):
            scan = sum(1 for v in verts if i in g.colour_set(v))
            assert colour_count(g, verts, i) == scan


def test_is_t_fair_examples():
    g = graph(2, [(1,), (2,)], [(1, 2)], t=2)
    assert is_t_fair(g, (), ColourBudget((0, 0)))
    assert is_t_fair(g, {1}, ColourBudget((1, 0)))
    assert not is_t_fair(g, {1}, ColourBudget((1, 1)))


def test_colour_neighbourhood_isolated_and_star():
    g = graph(1, [(1,)], [])
    assert colour_neighbourhood(g, 1, 1) == frozenset()
    star = graph(4, [(1,), (2,), (2,), (2,)], [(1, 2), (1, 3), (1, 4)], t=2)
    assert colour_neighbourhood(star, 1, 2) == frozenset({2, 3, 4})
    assert colour_neighbourhood(star, 1, 1) == frozenset()


def test_colour_neighbourhood_matches_filter():
    for trial in range(20):
        g = random_instance(7, 0.5, 2, 2, seed=100 + trial)
        for v in g.vertices():
            for i in (1, 2):
                expect = frozenset(w for w in g.neighbours(v) if i in g.colour_set(w))
                assert colour_neighbourhood(g, v, i) == expect


def test_sum_of_colour_counts_bounds_set_size():
    for trial in range(20):
        g = random_instance(8, 0.3, 3, 2, seed=200 + trial)
        verts = list(g.vertices())[: trial % 9]
        total = sum(colour_counts(g, verts))
        assert total >= len(verts)
        single = all(len(g.colour_set(v)) == 1 for v in verts)
        assert (total == len(verts)) == single


def test_colour_counts_additive_over_disjoint_sets():
    g = random_instance(8, 0.3, 3, 3, seed=9)
    a, b = [1, 3, 5], [2, 4]
    joint = colour_counts(g, a + b)
    split = tuple(x + y for x, y in zip(colour_counts(g, a), colour_counts(g, b)))
    assert joint == split


def test_parse_minimal_instance():
    g, budget = parse_instance("fgr 1 0 1\nv 1 1\nb 0\n")
    assert g.n == 1 and g.m == 0 and g.t == 1
    assert budget.budgets == (0,)


def test_parse_serialize_round_trip_random():
    rng = random.Random(5)
    for trial in range(100):
        t = rng.randint(1, 4)
        g = random_instance(rng.randint(1, 9), 0.4, t, min(2, t), seed=trial)
        budget = ColourBudget(tuple(rng.randint(0, 3) for _ in range(g.t)))
        text = serialize_instance(g, budget)
        g2, b2 = parse_instance(text)
        assert g2 == g
        assert b2 == budget
        assert serialize_instance(g2, b2) == text


def test_parse_ignores_comments_and_blank_lines():
    text = "# hello\nfgr 2 1 1\n\nv 1 1\nv 2 1  # trailing\ne 1 2\nb 1\n"
    g, budget = parse_instance(text)
    assert g.m == 1 and budget.total == 1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("fgr 1 0\nv 1 1\nb 0", "malformed header"),
        ("fgr 2 1 1\nv 1 1\nv 2 1\ne 0 2\nb 1", "outside 1..2"),
        ("fgr 1 0 1\nv 1\nb 0", "without colours"),
        ("fgr 1 0 1\nv 1 3\nb 0", "out of range"),
        ("fgr 2 2 1\nv 1 1\nv 2 1\ne 1 2\ne 2 1\nb 0", "duplicate edge"),
        ("fgr 1 0 2\nv 1 1\nb 0", "budget line has 1 entries"),
        ("fgr 1 0 1\nv 1 1\nv 1 1\nb 0", "expected"),
        ("fgr 2 1 1\nv 1 1\nv 2 1\ne 1 1\nb 0", "self-loop"),
    ],
)
def test_parse_rejects_each_defect_distinctly(text, fragment):
    with pytest.raises(ParseError) as err:
        parse_instance(text)
    assert fragment in str(err.value)


def test_palette_cap_enforced():
    with pytest.raises(InputError):
        make_graph(1, 65, [(1,)], [])


def test_random_instance_deterministic_and_extreme_probabilities():
    a = random_instance(7, 0.5, 2, 2, seed=77)
    b = random_instance(7, 0.5, 2, 2, seed=77)
    assert a == b
    assert random_instance(6, 0.0, 1, 1, seed=1).m == 0
    assert random_instance(6, 1.0, 1, 1, seed=1).m == 15


def test_induced_subgraph_remaps_ids():
    g = graph(4, [(1,), (2,), (1,), (2,)], [(1, 2), (2, 3), (3, 4)], t=2)
    sub, orig = induced_subgraph(g, {2, 4})
    assert sub.n == 2 and orig == (2, 4)
    assert sub.m == 0
    assert sub.colour_set(1) == (2,)


def test_budget_rejects_negative():
    with pytest.raises(InputError):
        ColourBudget((1, -1))
