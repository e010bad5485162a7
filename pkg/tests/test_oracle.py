from __future__ import annotations

import random
from itertools import combinations

import pytest

from faircover.graph import ColourBudget, InputError, random_instance
from faircover.oracle import (
    OracleConfig,
    brute_force_fair,
    brute_force_min_fvs_size,
    enumerate_fair,
    is_fvs,
    is_vertex_cover,
)
from support import (
    cycle_edges,
    gray_scan_fair,
    graph,
    path_edges,
    random_corpus,
    subset_is_acyclic_complement,
    subset_is_cover,
    uniform,
)


def test_is_vertex_cover_basics():
    g = uniform(3, cycle_edges([1, 2, 3]))
    assert is_vertex_cover(g, {1, 2, 3})
    assert not is_vertex_cover(uniform(2, [(1, 2)]), set())
    for pair in combinations((1, 2, 3), 2):
        assert is_vertex_cover(g, pair)


def test_is_fvs_basics():
    forest = uniform(4, path_edges([1, 2, 3, 4]))
    assert is_fvs(forest, set())
    c4 = uniform(4, cycle_edges([1, 2, 3, 4]))
    assert not is_fvs(c4, set())
    for v in c4.vertices():
        assert is_fvs(c4, {v})


def test_brute_force_k3_budget_two_is_yes():
    g = uniform(3, cycle_edges([1, 2, 3]))
    outcome = brute_force_fair(g, ColourBudget((2,)), "vc")
    assert outcome.answer
    assert outcome.witness == frozenset({1, 2})  # lexicographically smallest


def test_brute_force_two_triangles_single_budget_fvs_is_no():
    g = uniform(6, cycle_edges([1, 2, 3]) + cycle_edges([4, 5, 6]))
    assert not brute_force_fair(g, ColourBudget((1,)), "fvs").answer


def test_brute_force_matches_gray_code_scan():
    # independent re-implementation enumerating in a different subset order
    for problem, checker in (
        ("vc", subset_is_cover),
        ("fvs", subset_is_acyclic_complement),
    ):
        for g, budget in random_corpus(100, seed=31 if problem == "vc" else 32,
                                       n_max=8, t_max=3, budget_max=4):
            expect = gray_scan_fair(g, budget, checker)
            assert brute_force_fair(g, budget, problem).answer == expect


def test_brute_force_edgeless_vc_equals_fvs():
    for g, budget in random_corpus(30, seed=33, n_max=8, t_max=3, budget_max=4,
                                   p_choices=(0.0,)):
        assert (
            brute_force_fair(g, budget, "vc").answer
            == brute_force_fair(g, budget, "fvs").answer
        )


def test_single_colour_fairness_is_exact_size_cover():
    rng = random.Random(4)
    for trial in range(40):
        g = random_instance(rng.randint(1, 7), 0.4, 1, 1, seed=400 + trial)
        k = rng.randint(0, 4)
        expect = any(
            subset_is_cover(g, combo) and len(combo) == k
            for combo in combinations(list(g.vertices()), k)
        ) if k <= g.n else False
        assert brute_force_fair(g, ColourBudget((k,)), "vc").answer == expect


def test_min_fvs_sizes():
    assert brute_force_min_fvs_size(uniform(4, path_edges([1, 2, 3, 4]))) == 0
    assert brute_force_min_fvs_size(uniform(5, cycle_edges([1, 2, 3, 4, 5]))) == 1
    k4 = uniform(4, list(combinations((1, 2, 3, 4), 2)))
    assert brute_force_min_fvs_size(k4) == 2


def test_oracle_refuses_oversized_instances():
    g = random_instance(9, 0.2, 1, 1, seed=1)
    with pytest.raises(InputError):
        brute_force_fair(g, ColourBudget((1,)), "vc", OracleConfig(max_n=8))


def test_enumerate_all_counts_solutions():
    g = uniform(3, cycle_edges([1, 2, 3]))
    outcome = brute_force_fair(
        g, ColourBudget((2,)), "vc", OracleConfig(enumerate_all=True)
    )
    assert outcome.stats["solutions"] == 3
    assert len(enumerate_fair(g, ColourBudget((2,)), "vc")) == 3


def test_witness_is_lexicographically_smallest():
    g = graph(4, [(1,), (1,), (1,), (1,)], [(3, 4)])
    outcome = brute_force_fair(g, ColourBudget((1,)), "vc")
    # vertex 3 or 4 must be picked; {3} < {4}
    assert outcome.witness == frozenset({3})
