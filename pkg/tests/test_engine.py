import math
import warnings

import pytest

from mosp.core import Graph, UNBOUNDED, unbounded_vec, zero_vec
from mosp.engine import (
    EXPLORED,
    PREV_EXPLORED,
    PRUNED,
    UNEXPLORED,
    InconsistentHeuristicError,
    SearchConfig,
    SearchMetrics,
    Terminated,
    classify_children,
    pidmoa_star,
    reconstruct_path,
    rme_moa_star,
    validate_heuristic,
)
from mosp.problems import GridSpec, compute_heuristic, gen_grid

from conftest import assert_valid_solutions, make_g1


def cfg(m, C=None, D=0, **kw):
    Cv = unbounded_vec(m) if C is None else (C,) * m
    Dv = unbounded_vec(m) if D is None else (D,) * m
    return SearchConfig(C=Cv, D=Dv, **kw)


def solve(graph, config):
    h = compute_heuristic(graph)
    return rme_moa_star(graph, h, config)


# -- main loop ------------------------------------------------------------

def test_g1_solutions_all_configs(g1):
    expected = {(2, 6), (6, 2), (5, 5)}
    for C in (None, 0, 3):
        for D in (0, 2, None):
            res = solve(g1, cfg(2, C=C, D=D, debug_checks=True))
            assert res.cost_set() == expected, (C, D)
            assert res.terminated is Terminated.COMPLETED
            assert_valid_solutions(g1, res)


def test_single_edge_graph():
    g = Graph(2, 2, [[(1, (4, 7))], []], 0, 1)
    res = solve(g, cfg(2, C=0, D=0))
    assert res.cost_set() == {(4, 7)}
    assert res.solutions[0].path == (0, 1)
    assert res.metrics.expansions == 1


def test_g1_path_reconstruction(g1):
    res = solve(g1, cfg(2, C=None, D=0))
    paths = {s.cost: s.path for s in res.solutions}
    assert paths[(5, 5)] == (0, 3)
    assert paths[(2, 6)] == (0, 1, 3)
    assert paths[(6, 2)] == (0, 2, 3)


def test_g1_pure_dfs_paths_from_store(g1):
    res = solve(g1, cfg(2, C=0, D=None))
    assert res.cost_set() == {(2, 6), (6, 2), (5, 5)}
    paths = {s.cost: s.path for s in res.solutions}
    assert paths[(2, 6)] == (0, 1, 3)
    # the whole search ran depth-first: nothing was ever re-queued
    assert res.metrics.reexpansions == 0
    assert res.metrics.dfs_expansions > 0


def test_start_equals_goal():
    g = Graph(1, 2, [[]], 0, 0)
    res = solve(g, cfg(2, C=None, D=0))
    assert res.cost_set() == {(0, 0)}
    assert res.solutions[0].path == (0,)


def test_unreachable_goal_returns_empty():
    g = Graph(2, 2, [[], []], 0, 1)
    res = solve(g, cfg(2, C=None, D=0))
    assert res.solutions == []
    assert res.terminated is Terminated.COMPLETED


def test_time_limit_zero_times_out():
    g = gen_grid(GridSpec(rows=8, cols=8, k=3, M=2, seed=1))
    h = compute_heuristic(g)
    res = rme_moa_star(g, h, SearchConfig(C=(0, 0), D=(0, 0), time_limit=0.0))
    assert res.terminated is Terminated.TIMED_OUT


def test_inconsistent_heuristic_rejected(g1):
    h = compute_heuristic(g1)
    h[0] = (50, 50)
    with pytest.raises(InconsistentHeuristicError):
        rme_moa_star(g1, h, cfg(2, C=None, D=0, validate_heuristic=True))
    validate_heuristic(g1, compute_heuristic(g1))


def test_zero_cost_warning_only_with_dfs_enabled():
    g = Graph(2, 2, [[(1, (0, 1))], []], 0, 1)
    h = compute_heuristic(g)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rme_moa_star(g, h, SearchConfig(C=(0, 0), D=(0, 0)))
    with pytest.warns(UserWarning):
        rme_moa_star(g, h, SearchConfig(C=(0, 0), D=(1, 1)))


def test_bad_config_rejected(g1):
    with pytest.raises(ValueError):
        rme_moa_star(g1, compute_heuristic(g1), SearchConfig(C=(1,), D=(0, 0)))
    with pytest.raises(ValueError):
        rme_moa_star(g1, compute_heuristic(g1), SearchConfig(C=(1, -1), D=(0, 0)))


# -- partial expansion check ----------------------------------------------

def test_classify_children_example_windows():
    tags, r_next = classify_children([(4, 1), (5, 9), (7, 0)], (4, 4), (2, 2))
    assert tags == [PREV_EXPLORED, EXPLORED, UNEXPLORED]
    assert r_next == (7, 0)


def test_classify_children_unbounded_window():
    fs = [(0, 5), (3, 3), (9, 9)]
    tags, r_next = classify_children(fs, (0, 0), (UNBOUNDED, UNBOUNDED))
    assert tags == [EXPLORED, EXPLORED, EXPLORED]
    assert r_next is None


def test_classify_children_boundary():
    tags, r_next = classify_children([(4, 4), (4, 5)], (4, 4), (0, 0))
    assert tags == [EXPLORED, UNEXPLORED]
    assert r_next == (4, 5)


def test_classify_children_prune_callback_order():
    calls = []

    def prune(i):
        calls.append(i)
        return i == 1

    fs = [(1, 1), (5, 5), (9, 9)]
    tags, r_next = classify_children(fs, (2, 2), (1, 1), prune)
    # index 0 is previously explored and must not be dominance-checked;
    # index 1 is pruned before the window test despite being unexplored
    assert calls == [1, 2]
    assert tags == [PREV_EXPLORED, PRUNED, UNEXPLORED]
    assert r_next == (9, 9)


def test_classify_children_r_next_is_lex_min():
    fs = [(9, 9), (7, 0), (8, 1)]
    tags, r_next = classify_children(fs, (1, 1), (0, 0))
    assert tags == [UNEXPLORED, UNEXPLORED, UNEXPLORED]
    assert r_next == (7, 0)


# -- depth-first subroutine -------------------------------------------------

def test_pidmoa_degenerate_start_at_goal(g1):
    h = compute_heuristic(g1)
    res = pidmoa_star(g1, h, v_p=3, g_p=(5, 5))
    assert res.cost_set() == {(5, 5)}
    assert res.solutions[0].path == (3,)


def test_pidmoa_chain():
    g = Graph(3, 2, [[(1, (1, 1))], [(2, (1, 1))], []], 0, 2)
    h = compute_heuristic(g)
    res = pidmoa_star(g, h, v_p=0, g_p=(0, 0))
    assert res.cost_set() == {(2, 2)}
    assert res.solutions[0].path == (0, 1, 2)


def test_pidmoa_diamond_keeps_incomparable():
    adjacency = [[(1, (1, 3)), (2, (3, 1))], [(3, (1, 3))], [(3, (3, 1))], []]
    g = Graph(4, 2, adjacency, 0, 3)
    h = compute_heuristic(g)
    res = pidmoa_star(g, h, v_p=0, g_p=(0, 0))
    assert res.cost_set() == {(2, 6), (6, 2)}
    paths = {s.cost: s.path for s in res.solutions}
    assert paths[(2, 6)] == (0, 1, 3)
    assert paths[(6, 2)] == (0, 2, 3)


def test_pidmoa_threshold_init_flag_equivalence():
    for seed in range(6):
        g = gen_grid(GridSpec(rows=6, cols=6, k=3, M=2, seed=seed))
        h = compute_heuristic(g)
        a = rme_moa_star(g, h, cfg(2, C=0, D=None))
        b = rme_moa_star(g, h, cfg(2, C=0, D=None, literal_threshold_init=True))
        assert a.cost_set() == b.cost_set()


# -- traces, ordering, metrics ----------------------------------------------

def test_trace_format(g1):
    res = solve(g1, cfg(2, C=None, D=0, trace_expansions=True))
    assert res.trace[0] == "expand 0 g=0,0"
    for line in res.trace:
        parts = line.split()
        assert parts[0] == "expand"
        int(parts[1])
        assert parts[2].startswith("g=")


def test_trace_counts_each_label_once():
    g = gen_grid(GridSpec(rows=6, cols=6, k=3, M=2, seed=3))
    h = compute_heuristic(g)
    res = rme_moa_star(g, h, cfg(2, C=0, D=0, trace_expansions=True))
    assert len(res.trace) == len(set(res.trace))
    assert res.metrics.reexpansions > 0


def test_trace_identical_across_windows():
    for seed in range(12):
        g = gen_grid(GridSpec(rows=8, cols=8, k=2, M=2, seed=100 + seed))
        h = compute_heuristic(g)
        traces = []
        for C in (None, 0, 1, 3):
            res = rme_moa_star(g, h, cfg(2, C=C, D=0, trace_expansions=True))
            traces.append(res.trace)
        assert traces.count(traces[0]) == len(traces)


def test_pop_keys_monotone_debug_mode():
    g = gen_grid(GridSpec(rows=7, cols=7, k=3, M=2, seed=9))
    h = compute_heuristic(g)
    rme_moa_star(g, h, cfg(2, C=1, D=2, debug_checks=True))


def test_metrics_mutation_tracking():
    m = SearchMetrics()
    m.record_mutation("open", 1)
    assert m.stored_total() == 1 and m.max_stored_labels == 1
    m.record_mutation("frontier", 2)
    m.record_mutation("open", -1)
    assert m.stored_total() == 2
    assert m.max_stored_labels == 3
    m.record_mutation("solution_path", 4)
    assert m.max_stored_labels == 6
    with pytest.raises(AssertionError):
        m.record_mutation("open_dfs", -1)


def test_metrics_counters_on_g1(g1):
    res = solve(g1, cfg(2, C=None, D=0))
    assert res.metrics.expansions == 3  # s, a, b; goal pops never expand
    assert res.metrics.reexpansions == 0
    assert res.metrics.generated == 5
    assert res.metrics.max_stored_labels > 0
    sizes = res.metrics.sizes
    assert sizes["open"] == 0 and sizes["open_dfs"] == 0
    assert sizes["threshold"] == 0 and sizes["threshold_next"] == 0


def test_reexpansions_counted(g1):
    res = solve(g1, cfg(2, C=0, D=0))
    assert res.metrics.reexpansions > 0
    assert res.cost_set() == {(2, 6), (6, 2), (5, 5)}


def test_fault_injection_breaks_result(g1):
    # G1 plus a dominated fourth path; dropping the solution checks must
    # surface it
    g1.adjacency[1].append((3, (9, 9)))
    g1.adjacency[1].sort()
    h = compute_heuristic(g1)
    good = rme_moa_star(g1, h, cfg(2, C=None, D=0))
    assert good.cost_set() == {(2, 6), (6, 2), (5, 5)}
    bad = rme_moa_star(g1, h, cfg(2, C=None, D=0, drop_solution_check=True))
    assert bad.cost_set() != good.cost_set()


def test_reconstruct_path_segment_validation():
    from mosp.core import Label
    a = Label(0, 2, (0, 0), (0, 0))
    with pytest.raises(AssertionError):
        reconstruct_path(a, path_segment=(5, 6))
    assert reconstruct_path(a, path_segment=(2, 6)) == (2, 6)
    assert reconstruct_path(a) == (2,)
