"""Non-dominated set machinery.

Per-vertex Pareto frontiers store truncated cost vectors (first component
dropped), which is sound because the best-first loop pops labels in
non-decreasing lexicographic order. The solution set and the threshold
sets used by the depth-first subroutine keep full vectors: depth-first
solutions arrive out of lexicographic order, so the truncation argument
does not apply to them.

Everything is backed by :class:`NondomSet`, a lexicographically sorted
list of mutually non-dominated integer tuples with fast paths for one- and
two-dimensional entries (the M=2 and M=3 cases).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right, insort
from typing import Callable, Optional

from .core import CostVec, Label

_INF = math.inf


class NondomSet:
    """Sorted set of mutually non-dominated, cost-unique integer tuples.

    ``on_change`` (if given) is called with a signed size delta on every
    insertion/removal, which is how the stored-label accounting hooks in.
    """

    __slots__ = ("dim", "entries", "on_change")

    def __init__(self, dim: int, on_change: Optional[Callable[[int], None]] = None):
        self.dim = dim
        self.entries = []
        self.on_change = on_change

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def weakly_dominates(self, x) -> bool:
        """True iff some entry is componentwise <= x."""
        e = self.entries
        if not e:
            return False
        if self.dim == 1:
            return e[0][0] <= x[0]
        if self.dim == 2:
            i = bisect_right(e, (x[0], _INF))
            # entries are sorted by first component ascending, second strictly
            # descending, so the candidate with the smallest second component
            # among first <= x[0] sits at i-1
            return i > 0 and e[i - 1][1] <= x[1]
        if self.dim == 3:
            # every entry lexicographically <= x already has first component
            # <= x[0], so only the last two need checking
            x1 = x[1]
            x2 = x[2]
            for ent in e[:bisect_right(e, x)]:
                if ent[1] <= x1 and ent[2] <= x2:
                    return True
            return False
        i = bisect_right(e, x)
        for ent in e[:i]:
            if all(a <= b for a, b in zip(ent, x)):
                return True
        return False

    def strictly_dominates(self, x) -> bool:
        """True iff some entry is componentwise <= x and differs from x."""
        e = self.entries
        if not e:
            return False
        if self.dim == 1:
            return e[0][0] < x[0]
        if self.dim == 2:
            i = bisect_right(e, (x[0], _INF))
            if i == 0:
                return False
            best = e[i - 1]
            # any other weak dominator has a larger second component, so only
            # ``best`` can witness strict dominance
            return best[1] <= x[1] and best != x
        if self.dim == 3:
            x1 = x[1]
            x2 = x[2]
            for ent in e[:bisect_right(e, x)]:
                if ent[1] <= x1 and ent[2] <= x2 and ent != x:
                    return True
            return False
        i = bisect_right(e, x)
        for ent in e[:i]:
            if ent != x and all(a <= b for a, b in zip(ent, x)):
                return True
        return False

    def insert(self, x) -> list:
        """Insert x, removing every entry weakly dominated by it.

        The caller guarantees that no existing entry weakly dominates x.
        Returns the removed entries.
        """
        e = self.entries
        j = bisect_left(e, x)
        if self.dim == 1:
            removed = e[j:]
            del e[j:]
        elif self.dim == 2:
            k = j
            n = len(e)
            x1 = x[1]
            # second components descend, so dominated entries are contiguous
            while k < n and e[k][1] >= x1:
                k += 1
            removed = e[j:k]
            del e[j:k]
        elif self.dim == 3:
            # entries at or past j have first component >= x[0]
            x1 = x[1]
            x2 = x[2]
            removed = [ent for ent in e[j:] if ent[1] >= x1 and ent[2] >= x2]
            if removed:
                e[j:] = [ent for ent in e[j:] if not (ent[1] >= x1 and ent[2] >= x2)]
        else:
            removed = [ent for ent in e[j:] if all(a <= b for a, b in zip(x, ent))]
            if removed:
                kept = [ent for ent in e[j:] if not all(a <= b for a, b in zip(x, ent))]
                e[j:] = kept
        insort(e, x)
        if self.on_change is not None:
            self.on_change(1 - len(removed))
        return removed

    def adopt(self, other: "NondomSet") -> None:
        """Replace this set's contents with other's, emptying other."""
        if self.on_change is not None:
            self.on_change(len(other.entries) - len(self.entries))
        self.entries = other.entries
        if other.on_change is not None:
            other.on_change(-len(other.entries))
        other.entries = []


# The threshold sets of the iterative-deepening subroutine are plain
# full-vector non-dominated sets.
ThresholdSet = NondomSet


class ParetoFrontier:
    """Pareto frontier at one vertex.

    Dominance checks run against the truncated entries (``set``, holding
    the last M-1 components with the label id that contributed each one).
    ``full`` keeps the non-dominated set of complete g vectors accepted at
    the vertex; it is what the stored-label accounting counts, since those
    are the labels the frontier retains.
    """

    __slots__ = ("set", "full", "label_ids")

    def __init__(self, m: int, on_change=None):
        self.set = NondomSet(m - 1)
        self.full = NondomSet(m, on_change)
        self.label_ids = {}

    def __len__(self):
        return len(self.full)


class PathStore:
    """Explicit vertex sequences kept for solutions found by the
    depth-first subroutine; best-first solutions store a one-vertex
    marker."""

    __slots__ = ("paths", "on_change")

    def __init__(self, on_change=None):
        self.paths = {}
        self.on_change = on_change

    def add(self, label_id: int, segment) -> None:
        self.paths[label_id] = segment
        if self.on_change is not None:
            self.on_change(len(segment))

    def remove(self, label_id: int) -> None:
        segment = self.paths.pop(label_id)
        if self.on_change is not None:
            self.on_change(-len(segment))

    def total_stored(self) -> int:
        return sum(len(p) for p in self.paths.values())


class SolutionSet:
    """Full-vector non-dominated solution costs at the destination, each
    with the label that reached it and an optional stored path segment."""

    __slots__ = ("set", "records", "path_store")

    def __init__(self, m: int, on_change=None, on_path_change=None):
        self.set = NondomSet(m, on_change)
        # cost -> (anchor label, segment or None, path-store key)
        self.records = {}
        self.path_store = PathStore(on_path_change)

    def __len__(self):
        return len(self.set)

    def costs(self):
        return list(self.set.entries)


def truncate(g: CostVec) -> tuple:
    """Drop the first component (dimensionality reduction)."""
    return g[1:]


def frontier_check(alpha_v: ParetoFrontier, l: Label) -> bool:
    """True iff the frontier weakly dominates l's truncated g.

    Labels already belonging to the frontier are exempt: a re-expanded
    label must not be blocked by its own frontier entry.
    """
    if l.in_frontier:
        return False
    return alpha_v.set.weakly_dominates(l.g[1:])


def update_frontier(alpha_v: ParetoFrontier, l: Label) -> None:
    """Add l to the frontier, filtering entries it weakly dominates.

    No-op when l is already a member (re-expansion).
    """
    if l.in_frontier:
        return
    tg = l.g[1:]
    removed = alpha_v.set.insert(tg)
    ids = alpha_v.label_ids
    for ent in removed:
        del ids[ent]
    ids[tg] = l.id
    alpha_v.full.insert(l.g)
    l.in_frontier = True


def solution_check(sols: SolutionSet, l: Label) -> bool:
    """True iff some solution cost weakly dominates l.f (full vectors)."""
    return sols.set.weakly_dominates(l.f)


def update_solution(sols: SolutionSet, l: Label, path_segment=None,
                    anchor: Optional[Label] = None) -> None:
    """Record l.g as a new solution cost, filtering dominated entries.

    ``path_segment`` is the explicit vertex sequence found by the
    depth-first subroutine (from its local start to the destination);
    best-first solutions pass None and store a one-vertex marker.
    ``anchor`` is the label whose parent chain reconstructs the prefix of
    the path (defaults to l itself).
    """
    removed = sols.set.insert(l.g)
    for ent in removed:
        _, _, old_key = sols.records.pop(ent)
        sols.path_store.remove(old_key)
    if anchor is None:
        anchor = l
    sols.records[l.g] = (anchor, path_segment, l.id)
    sols.path_store.add(l.id, path_segment if path_segment is not None
                        else (l.vertex,))


def threshold_check(thresh: ThresholdSet, l: Label) -> bool:
    """True iff some threshold vector strictly dominates l.f."""
    return thresh.strictly_dominates(l.f)


def update_threshold(thresh_next: ThresholdSet, l: Label) -> None:
    """Fold l.f into the next-iteration threshold set, keeping it
    non-dominated and cost-unique."""
    if thresh_next.weakly_dominates(l.f):
        return
    thresh_next.insert(l.f)
