"""Benchmark instance generators, per-objective heuristics, and instance IO.

Two families: grids whose cells have 2^k neighbors (k selects the move
set, from the 4-neighborhood up to 32 moves), and robot state lattices
whose vertices are (row, col, heading) poses connected by a fixed table
of motion primitives. Both are deterministic functions of their spec.
"""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field
from typing import Optional

from .core import Graph

__all__ = [
    "GridSpec", "LatticeSpec", "InvalidSpecError", "ParseError",
    "gen_grid", "gen_lattice", "compute_heuristic",
    "write_instance", "read_instance",
    "GRID_OFFSETS", "LATTICE_PRIMITIVES",
]


class InvalidSpecError(ValueError):
    """A generator spec violates one or more of its constraints."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid spec: " + "; ".join(self.violations))


class ParseError(ValueError):
    """An instance file could not be parsed or failed validation."""


# Move tables for the 2^k neighborhoods. Each level adds the in-between
# moves of the previous level's angularly adjacent directions.
_N4 = ((-1, 0), (1, 0), (0, -1), (0, 1))
_N8 = _N4 + ((-1, -1), (-1, 1), (1, -1), (1, 1))
_N16 = _N8 + ((-1, -2), (-1, 2), (1, -2), (1, 2),
              (-2, -1), (-2, 1), (2, -1), (2, 1))
_N32 = _N16 + ((-1, -3), (-1, 3), (1, -3), (1, 3),
               (-3, -1), (-3, 1), (3, -1), (3, 1),
               (-2, -3), (-2, 3), (2, -3), (2, 3),
               (-3, -2), (-3, 2), (3, -2), (3, 2))

GRID_OFFSETS = {2: _N4, 3: _N8, 4: _N16, 5: _N32}


@dataclass
class GridSpec:
    rows: int
    cols: int
    k: int
    M: int
    cost_range: tuple = (1, 10)
    seed: int = 0
    obstacle_density: float = 0.0

    def validate(self):
        bad = []
        if not 2 <= self.k <= 5:
            bad.append("k must be in [2, 5]")
        if self.rows < 2 or self.cols < 2:
            bad.append("rows and cols must be >= 2")
        if self.M < 1:
            bad.append("M must be >= 1")
        lo, hi = self.cost_range
        if lo < 1 or hi < lo:
            bad.append("cost_range must satisfy 1 <= min <= max")
        if not 0.0 <= self.obstacle_density < 1.0:
            bad.append("obstacle_density must be in [0, 1)")
        if bad:
            raise InvalidSpecError(bad)


def gen_grid(spec: GridSpec) -> Graph:
    """Grid with 2^k moves per cell and uniformly sampled integer costs.

    Start is the top-left cell, goal the bottom-right; only costs (and
    obstacles, when density > 0) vary with the seed.
    """
    spec.validate()
    rows, cols, m = spec.rows, spec.cols, spec.M
    lo, hi = spec.cost_range
    offsets = GRID_OFFSETS[spec.k]
    rng = random.Random(spec.seed)
    n = rows * cols
    start = 0
    goal = n - 1

    blocked = [False] * n
    if spec.obstacle_density > 0.0:
        for cell in range(n):
            blocked[cell] = rng.random() < spec.obstacle_density
        blocked[start] = blocked[goal] = False

    adjacency = [[] for _ in range(n)]
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            if blocked[u]:
                continue
            for dr, dc in offsets:
                r2, c2 = r + dr, c + dc
                if not (0 <= r2 < rows and 0 <= c2 < cols):
                    continue
                v = r2 * cols + c2
                if blocked[v]:
                    continue
                cost = tuple(rng.randint(lo, hi) for _ in range(m))
                adjacency[u].append((v, cost))
    for adj in adjacency:
        adj.sort()

    meta = {
        "family": "grid",
        "rows": rows,
        "cols": cols,
        "k": spec.k,
        "M": m,
        "cost_range": [lo, hi],
        "obstacle_density": spec.obstacle_density,
        "seed": spec.seed,
    }
    return Graph(n, m, adjacency, start, goal, meta)


# Motion primitives, per start heading. Headings are 45-degree steps,
# 0 = east, counted counter-clockwise. Each primitive lists the cells it
# sweeps as heading offsets relative to the current heading, plus the
# heading change and the turn magnitude in 45-degree units. Straight axis
# segments cost 10 length units, diagonal segments 14.
LATTICE_PRIMITIVES = (
    ("straight1", (0,), 0, 0),
    ("straight2", (0, 0), 0, 0),
    ("straight3", (0, 0, 0), 0, 0),
    ("arc_short_l", (1,), 1, 1),
    ("arc_short_r", (-1,), -1, 1),
    ("arc_long_l", (0, 1), 1, 1),
    ("arc_long_r", (0, -1), -1, 1),
    ("sharp_l", (1,), 2, 2),
    ("sharp_r", (-1,), -2, 2),
    ("swerve_l", (1,), 0, 2),
    ("swerve_r", (-1,), 0, 2),
    ("spin_l", (), 1, 1),
    ("spin_r", (), -1, 1),
    ("spin_l2", (), 2, 2),
    ("spin_r2", (), -2, 2),
)

_HEADING_VECS = ((0, 1), (-1, 1), (-1, 0), (-1, -1),
                 (0, -1), (1, -1), (1, 0), (1, 1))
_SEG_LEN = (10, 14, 10, 14, 10, 14, 10, 14)  # axis vs diagonal headings


@dataclass
class LatticeSpec:
    rows: int
    cols: int
    M: int = 2
    obstacle_density: float = 0.2
    headings: int = 8
    seed: int = 0

    def validate(self):
        bad = []
        if self.rows < 2 or self.cols < 2:
            bad.append("rows and cols must be >= 2")
        if self.M not in (2, 3):
            bad.append("M must be 2 or 3")
        if not 0.0 <= self.obstacle_density < 1.0:
            bad.append("obstacle_density must be in [0, 1)")
        if self.headings != 8:
            bad.append("headings must be 8")
        if bad:
            raise InvalidSpecError(bad)


def _lattice_obstacles(spec: LatticeSpec, attempt: int):
    rng = random.Random(spec.seed * 1000003 + attempt)
    rows, cols = spec.rows, spec.cols
    blocked = [[rng.random() < spec.obstacle_density for _ in range(cols)]
               for _ in range(rows)]
    blocked[0][0] = False
    blocked[rows - 1][cols - 1] = False
    return blocked


def _vicinity_obstacles(blocked, r, c, rows, cols) -> int:
    count = 0
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            r2, c2 = r + dr, c + dc
            if 0 <= r2 < rows and 0 <= c2 < cols and blocked[r2][c2]:
                count += 1
    return count


def _build_lattice(spec: LatticeSpec, blocked) -> Graph:
    rows, cols, m = spec.rows, spec.cols, spec.M
    n_poses = rows * cols * 8
    virtual_goal = n_poses
    adjacency = [[] for _ in range(n_poses + 1)]

    for r in range(rows):
        for c in range(cols):
            if blocked[r][c]:
                continue
            for heading in range(8):
                u = (r * cols + c) * 8 + heading
                for _, steps, dtheta, turn in LATTICE_PRIMITIVES:
                    r2, c2 = r, c
                    length = 0
                    ok = True
                    for off in steps:
                        d = (heading + off) % 8
                        dr, dc = _HEADING_VECS[d]
                        r2 += dr
                        c2 += dc
                        if not (0 <= r2 < rows and 0 <= c2 < cols) or blocked[r2][c2]:
                            ok = False
                            break
                        length += _SEG_LEN[d]
                    if not ok:
                        continue
                    h2 = (heading + dtheta) % 8
                    v = (r2 * cols + c2) * 8 + h2
                    if m == 2:
                        cost = (length, turn)
                    else:
                        cost = (length, turn,
                                _vicinity_obstacles(blocked, r2, c2, rows, cols))
                    adjacency[u].append((v, cost))

    goal_cell = ((rows - 1) * cols + (cols - 1)) * 8
    zero = (0,) * m
    for heading in range(8):
        adjacency[goal_cell + heading].append((virtual_goal, zero))
    for adj in adjacency:
        adj.sort()
    return Graph(n_poses + 1, m, adjacency, start=0, goal=virtual_goal)


def _goal_reachable(graph: Graph) -> bool:
    rev = [[] for _ in range(graph.vertex_count)]
    for u, adj in enumerate(graph.adjacency):
        for v, _ in adj:
            rev[v].append(u)
    seen = [False] * graph.vertex_count
    stack = [graph.goal]
    seen[graph.goal] = True
    while stack:
        v = stack.pop()
        for u in rev[v]:
            if not seen[u]:
                seen[u] = True
                stack.append(u)
    return seen[graph.start]


def gen_lattice(spec: LatticeSpec) -> Graph:
    """State lattice over (row, col, heading) poses with ~15 primitives
    per pose; any-heading arrival at the bottom-right cell is modeled by
    a virtual goal vertex fed by zero-cost edges.

    Obstacle layouts that disconnect start from goal are rejected and
    regenerated from the next sub-seed (the attempt count is recorded in
    the instance metadata).
    """
    spec.validate()
    attempt = 0
    while True:
        blocked = _lattice_obstacles(spec, attempt)
        graph = _build_lattice(spec, blocked)
        if _goal_reachable(graph):
            break
        attempt += 1
        if attempt > 1000:
            raise InvalidSpecError(["no connected obstacle layout found"])
    graph.meta = {
        "family": "lattice",
        "rows": spec.rows,
        "cols": spec.cols,
        "M": spec.M,
        "obstacle_density": spec.obstacle_density,
        "headings": spec.headings,
        "seed": spec.seed,
        "regen_attempts": attempt,
    }
    return graph


def compute_heuristic(graph: Graph):
    """Per-objective exact cost-to-go table.

    One single-objective Dijkstra per component on the reversed graph,
    rooted at the goal. Vertices that cannot reach the goal get None and
    are never expanded by the search.
    """
    n = graph.vertex_count
    rev = [[] for _ in range(n)]
    for u, adj in enumerate(graph.adjacency):
        for v, c in adj:
            rev[v].append((u, c))

    dists = []
    for i in range(graph.M):
        dist = [None] * n
        dist[graph.goal] = 0
        heap = [(0, graph.goal)]
        while heap:
            d, v = heapq.heappop(heap)
            if d > dist[v]:
                continue
            for u, c in rev[v]:
                nd = d + c[i]
                if dist[u] is None or nd < dist[u]:
                    dist[u] = nd
                    heapq.heappush(heap, (nd, u))
        dists.append(dist)

    table = []
    for v in range(n):
        if dists[0][v] is None:
            table.append(None)
        else:
            table.append(tuple(dists[i][v] for i in range(graph.M)))
    return table


def write_instance(graph: Graph, path) -> None:
    """Canonical JSON serialization; identical graphs yield identical bytes."""
    edges = []
    for u, adj in enumerate(graph.adjacency):
        for v, c in adj:
            edges.append([u, v, list(c)])
    edges.sort()
    doc = {
        "M": graph.M,
        "vertex_count": graph.vertex_count,
        "start": graph.start,
        "goal": graph.goal,
        "edges": edges,
        "meta": graph.meta,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def read_instance(path) -> Graph:
    """Inverse of :func:`write_instance`, with field-level validation."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError("%s: invalid JSON: %s" % (path, exc)) from exc

    def need(key, kind):
        if key not in doc:
            raise ParseError("%s: missing field %r" % (path, key))
        val = doc[key]
        if not isinstance(val, kind):
            raise ParseError("%s: field %r must be %s" % (path, key, kind.__name__))
        return val

    m = need("M", int)
    n = need("vertex_count", int)
    start = need("start", int)
    goal = need("goal", int)
    edges = need("edges", list)
    meta = doc.get("meta")
    if m < 1 or n < 1:
        raise ParseError("%s: M and vertex_count must be >= 1" % path)
    if not (0 <= start < n and 0 <= goal < n):
        raise ParseError("%s: start/goal out of range" % path)

    adjacency = [[] for _ in range(n)]
    seen = set()
    for idx, edge in enumerate(edges):
        where = "%s: edges[%d]" % (path, idx)
        if not (isinstance(edge, list) and len(edge) == 3):
            raise ParseError(where + ": expected [u, v, cost]")
        u, v, cost = edge
        if not (isinstance(u, int) and isinstance(v, int)):
            raise ParseError(where + ": endpoints must be ints")
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(where + ": endpoint out of range")
        if not isinstance(cost, list) or len(cost) != m:
            raise ParseError(where + ": cost length != M=%d" % m)
        if any((not isinstance(x, int)) or x < 0 for x in cost):
            raise ParseError(where + ": cost components must be ints >= 0")
        if (u, v) in seen:
            raise ParseError(where + ": duplicate edge %d -> %d" % (u, v))
        seen.add((u, v))
        adjacency[u].append((v, tuple(cost)))
    for adj in adjacency:
        adj.sort()
    return Graph(n, m, adjacency, start, goal, meta)
