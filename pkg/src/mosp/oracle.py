"""Brute-force Pareto reference for small instances.

Exhaustive label-correcting search with full-vector dominance pruning at
every vertex: no heuristic, no truncation, no lazy checks, no ordered
extraction. Per-vertex frontiers are flat arrays scanned linearly
(vectorized with numpy for throughput), deliberately sharing nothing with
the search engine's structures so the two cannot share a bug.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import Graph


class OracleGuardError(RuntimeError):
    """The instance exceeds the oracle's size guard."""


@dataclass
class OracleResult:
    costs: set
    witnesses: dict  # cost -> vertex sequence

    def sorted_costs(self):
        return sorted(self.costs)


class _Frontier:
    """Flat non-dominated cost array with parallel witness references."""

    __slots__ = ("arr", "nodes", "lookup")

    def __init__(self, m):
        self.arr = np.empty((0, m), dtype=np.int64)
        self.nodes = []
        self.lookup = set()

    def dominated(self, cost_row) -> bool:
        if not self.nodes:
            return False
        return bool((self.arr <= cost_row).all(axis=1).any())

    def add(self, cost_row, cost, node):
        if self.nodes:
            keep = ~((cost_row <= self.arr).all(axis=1))
            if not keep.all():
                self.arr = self.arr[keep]
                kept_nodes = []
                for flag, nd in zip(keep, self.nodes):
                    if flag:
                        kept_nodes.append(nd)
                    else:
                        self.lookup.discard(nd[1])
                self.nodes = kept_nodes
        self.arr = np.vstack([self.arr, cost_row[None, :]])
        self.nodes.append(node)
        self.lookup.add(cost)


def oracle_pareto(graph: Graph, max_vertices: int = 5000,
                  max_labels: int = 5_000_000) -> OracleResult:
    """Exact non-dominated start-to-goal cost set with one witness path
    per cost.

    Refuses instances beyond the configurable guards instead of running
    unbounded.
    """
    if graph.vertex_count > max_vertices:
        raise OracleGuardError(
            "instance has %d vertices, guard is %d"
            % (graph.vertex_count, max_vertices))

    m = graph.M
    adjacency = graph.adjacency
    fronts = [_Frontier(m) for _ in range(graph.vertex_count)]

    start_cost = (0,) * m
    # node = (vertex, cost, parent node or None)
    root = (graph.start, start_cost, None)
    fronts[graph.start].add(np.zeros(m, dtype=np.int64), start_cost, root)
    queue = deque([root])
    processed = 0

    while queue:
        node = queue.popleft()
        v, cost, _ = node
        if cost not in fronts[v].lookup:
            continue  # superseded while queued
        processed += 1
        if processed > max_labels:
            raise OracleGuardError(
                "oracle processed more than %d labels" % max_labels)
        if v == graph.goal:
            continue
        for v2, c in adjacency[v]:
            cost2 = tuple(a + b for a, b in zip(cost, c))
            row = np.asarray(cost2, dtype=np.int64)
            front = fronts[v2]
            if front.dominated(row):
                continue
            child = (v2, cost2, node)
            front.add(row, cost2, child)
            queue.append(child)

    goal_front = fronts[graph.goal]
    costs = set()
    witnesses = {}
    for nd in goal_front.nodes:
        rev = []
        cur = nd
        while cur is not None:
            rev.append(cur[0])
            cur = cur[2]
        costs.add(nd[1])
        witnesses[nd[1]] = tuple(rev[::-1])
    return OracleResult(costs, witnesses)
