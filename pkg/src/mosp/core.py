"""Cost vectors, dominance relations, search labels, and the graph container.

Cost vectors are plain tuples of non-negative ints so dominance checks are
exact and runs are reproducible. Bound vectors additionally allow
``math.inf`` components meaning "no limit"; mixed int/inf tuples compare
correctly under Python's native lexicographic tuple ordering, which is the
ordering used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

UNBOUNDED = math.inf

# Length-M tuple of non-negative ints.
CostVec = tuple
# Length-M tuple of non-negative ints or UNBOUNDED.
BoundVec = tuple


class InternalInvariantError(AssertionError):
    """A structural invariant of the search was violated (library bug)."""


def _require_same_length(a, b):
    if len(a) != len(b):
        raise ValueError("vector length mismatch: %d vs %d" % (len(a), len(b)))


def dominates(a: CostVec, b: CostVec) -> bool:
    """True iff a <= b componentwise and a != b."""
    _require_same_length(a, b)
    if a == b:
        return False
    return all(x <= y for x, y in zip(a, b))


def weakly_dominates(a: CostVec, b: CostVec) -> bool:
    """True iff a <= b componentwise."""
    _require_same_length(a, b)
    return all(x <= y for x, y in zip(a, b))


def lex_compare(a: CostVec, b: CostVec) -> int:
    """Lexicographic order: -1 if a < b, 0 if equal, +1 if a > b."""
    _require_same_length(a, b)
    if a < b:
        return -1
    if a == b:
        return 0
    return 1


def vec_add(a: CostVec, b: CostVec) -> CostVec:
    """Componentwise sum."""
    _require_same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def zero_vec(m: int) -> CostVec:
    return (0,) * m


def unbounded_vec(m: int) -> BoundVec:
    return (UNBOUNDED,) * m


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


class Label:
    """A partial path: vertex plus accumulated cost ``g``, lower bound
    ``f = g + h(vertex)``, and re-expansion key ``r``.

    ``r == f`` on creation; afterwards ``r`` only moves lexicographically
    forward, towards the cheapest still-unexplored child.
    """

    __slots__ = ("id", "vertex", "g", "f", "r", "parent", "in_frontier")

    def __init__(self, id: int, vertex: int, g: CostVec, f: CostVec,
                 parent: Optional["Label"] = None):
        self.id = id
        self.vertex = vertex
        self.g = g
        self.f = f
        self.r = f
        self.parent = parent
        self.in_frontier = False

    def set_r(self, r_new: CostVec) -> None:
        if r_new < self.r:
            raise InternalInvariantError(
                "re-expansion key moved backwards: %r -> %r" % (self.r, r_new))
        self.r = r_new

    def __repr__(self):
        return "Label(id=%d, v=%d, g=%r, f=%r, r=%r)" % (
            self.id, self.vertex, self.g, self.f, self.r)


@dataclass
class Graph:
    """Directed graph with fixed-length integer cost vectors on edges.

    ``adjacency[u]`` is a list of ``(v, cost)`` pairs in a deterministic
    order fixed by the generator (sorted by target, then cost).
    """

    vertex_count: int
    M: int
    adjacency: list
    start: int
    goal: int
    meta: Optional[dict] = field(default=None)

    def succs(self, v: int):
        return self.adjacency[v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def edge_cost(self, u: int, v: int) -> CostVec:
        for w, c in self.adjacency[u]:
            if w == v:
                return c
        raise ValueError("no edge %d -> %d" % (u, v))

    def path_cost(self, path) -> CostVec:
        """Sum of edge costs along ``path``; raises if a step has no edge."""
        total = zero_vec(self.M)
        for u, v in zip(path, path[1:]):
            total = vec_add(total, self.edge_cost(u, v))
        return total

    def has_zero_cost_component(self) -> bool:
        return any(0 in c for adj in self.adjacency for _, c in adj)

    def validate(self) -> None:
        problems = []
        if self.vertex_count < 1:
            problems.append("vertex_count must be >= 1")
        if self.M < 1:
            problems.append("M must be >= 1")
        if not (0 <= self.start < self.vertex_count):
            problems.append("start out of range")
        if not (0 <= self.goal < self.vertex_count):
            problems.append("goal out of range")
        if len(self.adjacency) != self.vertex_count:
            problems.append("adjacency length != vertex_count")
        for u, adj in enumerate(self.adjacency):
            for v, c in adj:
                if not (0 <= v < self.vertex_count):
                    problems.append("edge %d -> %d: target out of range" % (u, v))
                if len(c) != self.M:
                    problems.append("edge %d -> %d: cost length %d != M" % (u, v, len(c)))
                if any((not isinstance(x, int)) or x < 0 for x in c):
                    problems.append("edge %d -> %d: non-negative int costs required" % (u, v))
        if problems:
            raise ValueError("invalid graph: " + "; ".join(problems))
