from __future__ import annotations

import random
from collections import Counter

import pytest

from faircover.decomposition import (
    EDGE,
    JOIN,
    TreeDecomposition,
    emit_td,
    make_nice,
    min_degree_td,
    node_subgraphs,
    parse_td,
    td_from_fvs,
    td_paths_cycles,
    validate_nice,
    validate_td,
)
from faircover.fvs_budget import approx_fvs_2
from faircover.graph import InputError, ParseError, random_instance
from support import cycle_edges, path_edges, uniform


def test_validate_td_accepts_single_vertex_and_reports_missing_edge():
    g = uniform(1, [])
    td = TreeDecomposition(bags=(frozenset(), frozenset({1})), edges=((0, 1),))
    assert validate_td(td, g) == []
    g2 = uniform(2, [(1, 2)])
    td2 = TreeDecomposition(bags=(frozenset({1}), frozenset({2})), edges=((0, 1),))
    problems = validate_td(td2, g2)
    assert any("(1,2)" in p for p in problems)


def test_validate_td_detects_disconnected_vertex_region():
    g = uniform(3, [(1, 2), (2, 3)])
    td = TreeDecomposition(
        bags=(frozenset({1, 2}), frozenset({2, 3}), frozenset({1})),
        edges=((0, 1), (1, 2)),
    )
    problems = validate_td(td, g)
    assert any("vertex 1" in p for p in problems)


def test_make_nice_p3_from_natural_width1_td():
    g = uniform(3, path_edges([1, 2, 3]))
    td = TreeDecomposition(
        bags=(frozenset({1, 2}), frozenset({2, 3})), edges=((0, 1),)
    )
    ntd = make_nice(td, g)
    assert validate_nice(ntd, g) == []
    assert ntd.width == 1


def test_make_nice_preserves_width_on_random_graphs():
    for trial in range(25):
        g = random_instance(random.Random(trial).randint(2, 9), 0.4, 1, 1, seed=trial)
        ntd = td_from_fvs(g, approx_fvs_2(g).f_apx)
        assert validate_nice(ntd, g) == []
        raw = min_degree_td(g)
        nice = make_nice(raw, g)
        assert validate_nice(nice, g) == []
        assert nice.width == raw.width


def test_make_nice_node_count_linear_in_width_n_m():
    for trial in range(15):
        g = random_instance(10, 0.35, 1, 1, seed=50 + trial)
        raw = min_degree_td(g)
        ntd = make_nice(raw, g)
        width = max(1, ntd.width)
        assert len(ntd.nodes) <= 6 * (width * g.n + g.m) + 8


def test_nice_td_introduces_each_edge_exactly_once():
    g = random_instance(9, 0.5, 1, 1, seed=3)
    ntd = make_nice(min_degree_td(g), g)
    introduced = Counter(nd.edge for nd in ntd.nodes if nd.kind == EDGE)
    assert set(introduced) == set(g.edges)
    assert all(count == 1 for count in introduced.values())


def test_node_subgraphs_monotone_and_complete_at_root():
    g = random_instance(8, 0.4, 1, 1, seed=11)
    ntd = make_nice(min_degree_td(g), g)
    info = node_subgraphs(ntd)
    for idx, nd in enumerate(ntd.nodes):
        verts, edges = info[idx]
        for c in nd.children:
            cv, ce = info[c]
            assert cv <= verts
            assert set(ce) <= set(edges)
    root_verts, root_edges = info[ntd.root]
    assert root_verts == frozenset(g.vertices())
    assert set(root_edges) == set(g.edges)


def test_td_paths_cycles_widths():
    path = uniform(4, path_edges([1, 2, 3, 4]))
    assert td_paths_cycles(path).width == 1
    cyc = uniform(5, cycle_edges([1, 2, 3, 4, 5]))
    ntd = td_paths_cycles(cyc)
    assert ntd.width == 2
    assert validate_nice(ntd, cyc) == []


def test_td_paths_cycles_mixed_components():
    edges = (
        path_edges([1, 2, 3])
        + path_edges([4, 5])
        + path_edges([6])
        + cycle_edges([7, 8, 9])
        + cycle_edges([10, 11, 12, 13])
    )
    g = uniform(13, edges)
    ntd = td_paths_cycles(g)
    assert validate_nice(ntd, g) == []
    assert ntd.width == 2
    assert not any(nd.kind == JOIN for nd in ntd.nodes)


def test_td_paths_cycles_rejects_high_degree():
    star = uniform(4, [(1, 2), (1, 3), (1, 4)])
    with pytest.raises(InputError):
        td_paths_cycles(star)


def test_td_from_fvs_widths():
    forest = uniform(5, path_edges([1, 2, 3]) + [(4, 5)])
    assert td_from_fvs(forest, frozenset()).width <= 1
    c5 = uniform(5, cycle_edges([1, 2, 3, 4, 5]))
    assert td_from_fvs(c5, frozenset({1})).width <= 2
    for trial in range(20):
        g = random_instance(9, 0.45, 1, 1, seed=600 + trial)
        f = approx_fvs_2(g).f_apx
        ntd = td_from_fvs(g, f)
        assert validate_nice(ntd, g) == []
        assert ntd.width <= len(f) + 1


def test_td_from_fvs_requires_a_feedback_set():
    c4 = uniform(4, cycle_edges([1, 2, 3, 4]))
    with pytest.raises(InputError):
        td_from_fvs(c4, frozenset())


def test_parse_td_minimal_and_errors():
    g = uniform(1, [])
    td = parse_td("s td 1 1 1\nb 1 1\n", g)
    assert td.bags == (frozenset({1}),)
    with pytest.raises(ParseError):
        parse_td("s td 1 1 1\nb 1 2\n", g)
    with pytest.raises(ParseError):
        parse_td("b 1 1\n", g)


def test_emit_parse_round_trip():
    g = random_instance(7, 0.4, 1, 1, seed=8)
    td = min_degree_td(g)
    again = parse_td(emit_td(td, g.n), g)
    assert again.bags == td.bags
    assert sorted(again.edges) == sorted(td.edges)


def test_min_degree_td_is_valid_on_random_graphs():
    for trial in range(20):
        g = random_instance(random.Random(trial).randint(1, 10), 0.4, 1, 1,
                            seed=700 + trial)
        assert validate_td(min_degree_td(g), g) == []
