"""Multi-objective shortest path search with tunable memory/runtime
trade-offs, plus instance generators, an exact oracle, and a benchmark
harness."""

from .core import (
    BoundVec,
    CostVec,
    Graph,
    Label,
    UNBOUNDED,
    dominates,
    lex_compare,
    vec_add,
    weakly_dominates,
)
from .engine import (
    SearchConfig,
    SearchMetrics,
    SearchResult,
    Solution,
    Terminated,
    pidmoa_star,
    rme_moa_star,
)
from .oracle import OracleResult, oracle_pareto
from .problems import (
    GridSpec,
    LatticeSpec,
    compute_heuristic,
    gen_grid,
    gen_lattice,
    read_instance,
    write_instance,
)

__all__ = [
    "BoundVec", "CostVec", "Graph", "Label", "UNBOUNDED",
    "dominates", "lex_compare", "vec_add", "weakly_dominates",
    "SearchConfig", "SearchMetrics", "SearchResult", "Solution", "Terminated",
    "pidmoa_star", "rme_moa_star",
    "OracleResult", "oracle_pareto",
    "GridSpec", "LatticeSpec", "compute_heuristic", "gen_grid", "gen_lattice",
    "read_instance", "write_instance",
]
