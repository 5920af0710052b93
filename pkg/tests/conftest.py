import pytest

from mosp.core import Graph, dominates, weakly_dominates


class NaiveNondom:
    """Plain-list reference for every non-dominated-set operation."""

    def __init__(self):
        self.items = []

    def weakly_dominates(self, x):
        return any(weakly_dominates(e, x) for e in self.items)

    def strictly_dominates(self, x):
        return any(dominates(e, x) for e in self.items)

    def insert(self, x):
        self.items = [e for e in self.items if not weakly_dominates(x, e)]
        self.items.append(x)

    def sorted(self):
        return sorted(self.items)


def make_g1() -> Graph:
    """Four-vertex diamond with a direct edge: three mutually
    non-dominated start-goal paths, costs (2,6), (6,2), (5,5)."""
    s, a, b, d = 0, 1, 2, 3
    adjacency = [[] for _ in range(4)]
    adjacency[s] = [(a, (1, 3)), (b, (3, 1)), (d, (5, 5))]
    adjacency[a] = [(d, (1, 3))]
    adjacency[b] = [(d, (3, 1))]
    return Graph(4, 2, adjacency, start=s, goal=d)


@pytest.fixture
def g1() -> Graph:
    return make_g1()


def assert_valid_solutions(graph, result):
    """Every reported path re-sums to its cost; the cost set is mutually
    non-dominated and cost-unique."""
    costs = [sol.cost for sol in result.solutions]
    assert len(costs) == len(set(costs)), "duplicate solution costs"
    for sol in result.solutions:
        assert sol.path[0] == graph.start
        assert sol.path[-1] == graph.goal
        assert graph.path_cost(sol.path) == sol.cost
    for i, x in enumerate(costs):
        for j, y in enumerate(costs):
            if i != j:
                assert not (all(p <= q for p, q in zip(x, y)) and x != y), \
                    "solution %r dominates %r" % (x, y)
