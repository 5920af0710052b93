"""Best-first multi-objective search with partial expansion and an
embedded iterative-deepening depth-first subroutine.

The main loop pops the label with the lexicographically smallest
re-expansion key ``r`` from OPEN. On expansion, only children whose ``f``
falls inside the window ``[r, r + C]`` (lexicographically) are pushed;
the parent is re-queued at the smallest ``f`` of the remaining children.
Labels whose vertex is heuristically within ``D`` of the destination in
every component are instead handed to the depth-first subroutine, which
runs threshold-bounded DFS rounds until no deferrals remain.

``C = (inf,...)`` disables partial expansion (plain best-first behavior);
``D = (0,...)`` disables the depth-first subroutine; ``D = (inf,...)``
runs the whole search depth-first from the start label.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from enum import Enum
from heapq import heappop, heappush
from operator import add
from time import perf_counter
from typing import Callable, Optional, Sequence

from .core import (
    BoundVec,
    CostVec,
    Graph,
    InternalInvariantError,
    Label,
    is_zero,
    unbounded_vec,
    zero_vec,
)
from .frontiers import (
    NondomSet,
    ParetoFrontier,
    SolutionSet,
    frontier_check,
    solution_check,
    threshold_check,
    update_frontier,
    update_solution,
    update_threshold,
)

# child classifications produced by the partial expansion check
PREV_EXPLORED = 0
PRUNED = 1
EXPLORED = 2
UNEXPLORED = 3

_TIME_CHECK_MASK = 1023  # wall clock consulted every 1024 pops


class Terminated(Enum):
    COMPLETED = "completed"
    TIMED_OUT = "timed_out"


class InconsistentHeuristicError(ValueError):
    """The supplied heuristic table violates consistency on some edge."""


class _TimeLimit(Exception):
    pass


@dataclass
class SearchConfig:
    """User knobs for one search run.

    ``C`` widens the partial-expansion window, ``D`` sets the heuristic
    radius around the destination inside which the depth-first subroutine
    takes over. Both are length-M tuples of non-negative ints or
    ``math.inf``.
    """

    C: BoundVec
    D: BoundVec
    time_limit: Optional[float] = None
    trace_expansions: bool = False
    # initialize the DFS threshold with h(v_p) instead of f(l_p); changes
    # only the number of deepening rounds, never the solution set
    literal_threshold_init: bool = False
    validate_heuristic: bool = False
    debug_checks: bool = False
    debug_seed: int = 0
    # testing hook for the verification harness: skip all solution-set
    # dominance checks, which corrupts the result on purpose
    drop_solution_check: bool = False


@dataclass
class SearchMetrics:
    """Counters plus the running stored-label accounting.

    ``generated`` counts child labels actually materialized, i.e. those
    that pass the previously-explored filter during (re)expansions.
    ``max_stored_labels`` tracks the peak of
    |OPEN| + |OPEN_DFS| + |T| + |T_next| + sum of frontier sizes + sum of
    stored solution path lengths, refreshed on every mutation.
    """

    expansions: int = 0
    reexpansions: int = 0
    dfs_expansions: int = 0
    generated: int = 0
    max_stored_labels: int = 0
    runtime: float = 0.0
    sizes: dict = field(default_factory=lambda: {
        "open": 0,
        "open_dfs": 0,
        "threshold": 0,
        "threshold_next": 0,
        "frontier": 0,
        "solution_path": 0,
    })
    _total: int = 0

    def record_mutation(self, structure: str, delta: int) -> None:
        sizes = self.sizes
        new = sizes[structure] + delta
        if new < 0:
            raise InternalInvariantError(
                "stored-label counter underflow for %s" % structure)
        sizes[structure] = new
        total = self._total + delta
        self._total = total
        if total > self.max_stored_labels:
            self.max_stored_labels = total

    def stored_total(self) -> int:
        return self._total


@dataclass
class Solution:
    cost: CostVec
    path: tuple


@dataclass
class SearchResult:
    """Final non-dominated solution costs with reconstructed paths.

    When ``terminated`` is TIMED_OUT the solutions found so far are
    returned but are not authoritative.
    """

    solutions: list
    metrics: SearchMetrics
    terminated: Terminated
    trace: Optional[list] = None

    def cost_set(self):
        return {s.cost for s in self.solutions}


def classify_children(children_f: Sequence[CostVec], r: CostVec, C: BoundVec,
                      prune: Optional[Callable[[int], bool]] = None):
    """Partial expansion check for one (re)expansion.

    Children with ``f`` lexicographically below ``r`` were handled by an
    earlier expansion and are discarded without further checks. The
    remaining children are dominance-checked via ``prune`` *before* the
    window test, then split into explored (``f <= r + C``) and unexplored
    ones. Returns the per-child tags and the lexicographic minimum ``f``
    of the unexplored children (None when there are none).
    """
    window = tuple(map(add, r, C))
    tags = []
    append = tags.append
    r_next = None
    for i, f in enumerate(children_f):
        if f < r:
            append(PREV_EXPLORED)
            continue
        if prune is not None and prune(i):
            append(PRUNED)
            continue
        if f > window:
            if r_next is None or f < r_next:
                r_next = f
            append(UNEXPLORED)
            continue
        append(EXPLORED)
    return tags, r_next


def reconstruct_path(anchor: Label, path_segment=None) -> tuple:
    """Vertex sequence from the search start to the destination.

    Follows parent references from ``anchor`` back to the start; when a
    stored depth-first segment is present it supplies the tail of the
    path from the anchor's vertex onward.
    """
    rev = []
    node = anchor
    while node is not None:
        rev.append(node.vertex)
        node = node.parent
    path = rev[::-1]
    if path_segment is not None:
        if path_segment[0] != anchor.vertex:
            raise InternalInvariantError(
                "stored segment does not start at its anchor vertex")
        path.extend(path_segment[1:])
    return tuple(path)


def validate_heuristic(graph: Graph, h) -> None:
    """Edge sweep: h(v) <= c(v,v') + h(v') componentwise, h(goal) = 0."""
    hg = h[graph.goal]
    if hg is None or not is_zero(hg):
        raise InconsistentHeuristicError("h(goal) must be the zero vector")
    for u, adj in enumerate(graph.adjacency):
        hu = h[u]
        for v, c in adj:
            hv = h[v]
            if hv is None:
                continue
            if hu is None:
                raise InconsistentHeuristicError(
                    "h(%d) unset but %d reaches the goal via %d" % (u, u, v))
            if any(a > b + e for a, b, e in zip(hu, c, hv)):
                raise InconsistentHeuristicError(
                    "edge %d -> %d violates consistency" % (u, v))


class _Search:
    def __init__(self, graph: Graph, h, config: SearchConfig):
        m = graph.M
        if len(config.C) != m or len(config.D) != m:
            raise ValueError("C and D must have length M=%d" % m)
        for x in (*config.C, *config.D):
            if x != math.inf and (not isinstance(x, int) or x < 0):
                raise ValueError("C/D components must be non-negative ints or inf")
        self.graph = graph
        self.h = h
        self.config = config
        self.metrics = SearchMetrics()
        rec = self.metrics.record_mutation
        self.sols = SolutionSet(
            m,
            on_change=None,  # solution entries are counted via their paths
            on_path_change=lambda d: rec("solution_path", d),
        )
        self.alpha = [None] * graph.vertex_count
        self._frontier_hook = lambda d: rec("frontier", d)
        self.heap = []
        self.stack = []
        self.T = None
        self.Tn = None
        self.trace = [] if config.trace_expansions else None
        self._next_id = 0
        self._pops = 0
        self._deadline = None
        self._last_key_r = None
        self._rng = random.Random(config.debug_seed) if config.debug_checks else None
        if config.validate_heuristic:
            validate_heuristic(graph, h)
        if not all(x == 0 for x in config.D) and graph.has_zero_cost_component():
            warnings.warn(
                "graph has zero edge-cost components and D is non-zero; "
                "depth-first rounds rely on strictly increasing cycle costs",
                stacklevel=3)

    def _new_label(self, vertex, g, f, parent) -> Label:
        lab = Label(self._next_id, vertex, g, f, parent)
        self._next_id += 1
        return lab

    def _push_open(self, lab: Label, reexpansion: bool = False) -> None:
        # ties on r pop re-expansions first, then destination labels, then
        # fresh labels ordered by (vertex, g); this keeps the sequence of
        # first expansions identical across partial-expansion windows
        cls = 0 if reexpansion else (1 if lab.vertex == self.graph.goal else 2)
        heappush(self.heap, ((lab.r, cls, lab.vertex, lab.g, lab.id), lab))
        self.metrics.record_mutation("open", 1)

    def _tick(self) -> None:
        self._pops += 1
        if (self._pops & _TIME_CHECK_MASK) == 1 and self._deadline is not None:
            if perf_counter() > self._deadline:
                raise _TimeLimit
        if self._rng is not None and self._rng.random() < 0.015625:
            self._debug_recount()

    def _debug_recount(self) -> None:
        live = {
            "open": len(self.heap),
            "open_dfs": len(self.stack),
            "threshold": len(self.T) if self.T is not None else 0,
            "threshold_next": len(self.Tn) if self.Tn is not None else 0,
            "frontier": sum(len(a) for a in self.alpha if a is not None),
            "solution_path": self.sols.path_store.total_stored(),
        }
        if live != self.metrics.sizes:
            raise InternalInvariantError(
                "stored-label recount mismatch: %r vs %r" % (live, self.metrics.sizes))
        if sum(live.values()) != self.metrics.stored_total():
            raise InternalInvariantError("stored-label total mismatch")

    def run(self) -> SearchResult:
        t0 = perf_counter()
        if self.config.time_limit is not None:
            self._deadline = t0 + self.config.time_limit
        status = Terminated.COMPLETED
        try:
            self._main_loop()
        except _TimeLimit:
            status = Terminated.TIMED_OUT
        self.metrics.runtime = perf_counter() - t0
        solutions = []
        for cost in self.sols.set:
            anchor, segment, _ = self.sols.records[cost]
            solutions.append(Solution(cost, reconstruct_path(anchor, segment)))
        if self.config.debug_checks:
            for s in solutions:
                if self.graph.path_cost(s.path) != s.cost:
                    raise InternalInvariantError(
                        "reconstructed path cost mismatch for %r" % (s.cost,))
        return SearchResult(solutions, self.metrics, status, self.trace)

    def _main_loop(self) -> None:
        graph = self.graph
        h = self.h
        goal = graph.goal
        adjacency = graph.adjacency
        metrics = self.metrics
        rec = metrics.record_mutation
        sols = self.sols
        alpha = self.alpha
        C = self.config.C
        D = self.config.D
        dfs_enabled = not all(x == 0 for x in D)
        check_solutions = not self.config.drop_solution_check
        debug = self.config.debug_checks
        heap = self.heap
        trace = self.trace

        h_start = h[graph.start]
        if h_start is None:
            return
        start = self._new_label(graph.start, zero_vec(graph.M), h_start, None)
        self._push_open(start)

        while heap:
            self._tick()
            key, lab = heappop(heap)
            rec("open", -1)
            if debug:
                if self._last_key_r is not None and key[0] < self._last_key_r:
                    raise InternalInvariantError("pop keys went backwards")
                self._last_key_r = key[0]
            v = lab.vertex
            av = alpha[v]
            if av is not None and frontier_check(av, lab):
                continue
            if check_solutions and solution_check(sols, lab):
                continue
            if v == goal:
                update_solution(sols, lab)
                continue
            if av is None:
                av = alpha[v] = ParetoFrontier(graph.M, self._frontier_hook)
            first_expansion = not lab.in_frontier
            update_frontier(av, lab)
            if first_expansion and trace is not None:
                trace.append("expand %d g=%s" % (v, ",".join(map(str, lab.g))))
            hv = h[v]
            if dfs_enabled and all(a < b for a, b in zip(hv, D)):
                self._pidmoa(v, lab.g, lab)
                continue

            metrics.expansions += 1
            g = lab.g
            vs = []
            gs = []
            fs = []
            for v2, c in adjacency[v]:
                hv2 = h[v2]
                if hv2 is None:
                    continue
                g2 = tuple(map(add, g, c))
                vs.append(v2)
                gs.append(g2)
                fs.append(tuple(map(add, g2, hv2)))
            slots = [None] * len(vs)

            def prune(i, _vs=vs, _gs=gs, _fs=fs, _slots=slots, _parent=lab):
                child = self._new_label(_vs[i], _gs[i], _fs[i], _parent)
                _slots[i] = child
                metrics.generated += 1
                a2 = alpha[_vs[i]]
                if a2 is not None and frontier_check(a2, child):
                    return True
                return check_solutions and solution_check(sols, child)

            tags, r_next = classify_children(fs, lab.r, C, prune)
            for i, tag in enumerate(tags):
                if tag == EXPLORED:
                    self._push_open(slots[i])
            if r_next is not None:
                lab.set_r(r_next)
                metrics.reexpansions += 1
                self._push_open(lab, reexpansion=True)

    def _pidmoa(self, v_p: int, g_p: CostVec, caller: Optional[Label]) -> None:
        graph = self.graph
        h = self.h
        goal = graph.goal
        adjacency = graph.adjacency
        metrics = self.metrics
        rec = metrics.record_mutation
        sols = self.sols
        check_solutions = not self.config.drop_solution_check
        stack = self.stack

        f_p = tuple(map(add, g_p, h[v_p]))
        T = self.T = NondomSet(graph.M, lambda d: rec("threshold", d))
        Tn = None
        T.insert(h[v_p] if self.config.literal_threshold_init else f_p)
        sol_front = sols.set
        while len(T):
            Tn = self.Tn = NondomSet(graph.M, lambda d: rec("threshold_next", d))
            lp = self._new_label(v_p, g_p, f_p, None)
            stack.append(lp)
            rec("open_dfs", 1)
            while stack:
                self._tick()
                lab = stack.pop()
                rec("open_dfs", -1)
                if check_solutions and sol_front.weakly_dominates(lab.f):
                    continue
                if lab.vertex == goal:
                    # only the degenerate v_p == goal case reaches here
                    update_solution(sols, lab, path_segment=(goal,),
                                    anchor=caller if caller is not None else lab)
                    continue
                metrics.dfs_expansions += 1
                g = lab.g
                for v2, c in adjacency[lab.vertex]:
                    hv2 = h[v2]
                    if hv2 is None:
                        continue
                    g2 = tuple(map(add, g, c))
                    f2 = tuple(map(add, g2, hv2))
                    metrics.generated += 1
                    if check_solutions and sol_front.weakly_dominates(f2):
                        continue
                    if T.strictly_dominates(f2):
                        if not Tn.weakly_dominates(f2):
                            Tn.insert(f2)
                        continue
                    child = self._new_label(v2, g2, f2, lab)
                    if v2 == goal:
                        segment = self._dfs_segment(child)
                        update_solution(
                            sols, child, path_segment=segment,
                            anchor=caller if caller is not None else
                            self._new_label(v_p, g_p, f_p, None))
                        continue
                    stack.append(child)
                    rec("open_dfs", 1)
            T.adopt(Tn)
        self.T = None
        self.Tn = None

    @staticmethod
    def _dfs_segment(label: Label) -> tuple:
        rev = []
        node = label
        while node is not None:
            rev.append(node.vertex)
            node = node.parent
        return tuple(rev[::-1])


def rme_moa_star(graph: Graph, h, config: SearchConfig) -> SearchResult:
    """Run the full search and return solutions, metrics and status.

    ``h`` is a per-vertex table of consistent heuristic vectors
    (None for vertices that cannot reach the destination).
    """
    return _Search(graph, h, config).run()


def pidmoa_star(graph: Graph, h, v_p: int, g_p: CostVec,
                config: Optional[SearchConfig] = None) -> SearchResult:
    """Run only the iterative-deepening subroutine from ``(v_p, g_p)``.

    Solution paths are relative to ``v_p``. Used directly by tests; the
    main loop invokes the same machinery internally.
    """
    if config is None:
        config = SearchConfig(C=unbounded_vec(graph.M), D=unbounded_vec(graph.M))
    search = _Search(graph, h, config)
    t0 = perf_counter()
    if config.time_limit is not None:
        search._deadline = t0 + config.time_limit
    status = Terminated.COMPLETED
    try:
        if h[v_p] is not None:
            search._pidmoa(v_p, g_p, None)
    except _TimeLimit:
        status = Terminated.TIMED_OUT
    search.metrics.runtime = perf_counter() - t0
    solutions = []
    for cost in search.sols.set:
        anchor, segment, _ = search.sols.records[cost]
        solutions.append(Solution(cost, reconstruct_path(anchor, segment)))
    return SearchResult(solutions, search.metrics, status, None)
