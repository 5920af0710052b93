"""Command-line driver: generate instances, solve, benchmark, verify.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O or
instance error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from io import StringIO
from statistics import fmean
from time import perf_counter

from .core import UNBOUNDED, Graph
from .engine import SearchConfig, SearchResult, Terminated, rme_moa_star
from .oracle import OracleGuardError, oracle_pareto
from .problems import (
    GridSpec,
    LatticeSpec,
    InvalidSpecError,
    ParseError,
    compute_heuristic,
    gen_grid,
    gen_lattice,
    read_instance,
    write_instance,
)

RESULT_COLUMNS = [
    "instance_id", "family", "rows", "cols", "k_or_density", "M", "C", "D",
    "runtime_seconds", "max_stored_labels", "num_solutions", "expansions",
    "reexpansions", "dfs_expansions", "status",
]

BASELINE = ("inf", "0")  # plain best-first configuration


@dataclass
class ResultRow:
    instance_id: str
    family: str
    rows: int
    cols: int
    k_or_density: str
    M: int
    C: str
    D: str
    runtime_seconds: float
    max_stored_labels: int
    num_solutions: int
    expansions: int
    reexpansions: int
    dfs_expansions: int
    status: str

    def to_list(self):
        return [getattr(self, c) for c in RESULT_COLUMNS]

    @classmethod
    def from_list(cls, values):
        if len(values) != len(RESULT_COLUMNS):
            raise ValueError("expected %d columns, got %d"
                             % (len(RESULT_COLUMNS), len(values)))
        kw = dict(zip(RESULT_COLUMNS, values))
        for key in ("rows", "cols", "M", "max_stored_labels", "num_solutions",
                    "expansions", "reexpansions", "dfs_expansions"):
            kw[key] = int(kw[key])
        kw["runtime_seconds"] = float(kw["runtime_seconds"])
        return cls(**kw)


def parse_bound(text: str, m: int):
    """Parse a C/D flag: scalar replicated across M, 'inf', or a
    '|'-separated full vector."""
    parts = text.split("|")
    if len(parts) == 1:
        parts = parts * m
    if len(parts) != m:
        raise ValueError("bound %r has %d components, expected %d"
                         % (text, len(parts), m))
    out = []
    for p in parts:
        p = p.strip().lower()
        if p == "inf":
            out.append(UNBOUNDED)
        else:
            val = int(p)
            if val < 0:
                raise ValueError("bound components must be >= 0")
            out.append(val)
    return tuple(out)


def format_bound(vec) -> str:
    rendered = ["inf" if x == UNBOUNDED else str(x) for x in vec]
    if len(set(rendered)) == 1:
        return rendered[0]
    return "|".join(rendered)


def parse_configs(text: str, m: int):
    """Parse 'C:D;C:D;...' into a list of (C, D) bound-vector pairs."""
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            c_txt, d_txt = chunk.split(":")
        except ValueError:
            raise ValueError("config %r must look like C:D" % chunk) from None
        pairs.append((parse_bound(c_txt, m), parse_bound(d_txt, m)))
    if not pairs:
        raise ValueError("no configs given")
    return pairs


def _instance_meta(graph: Graph, path: str):
    meta = graph.meta or {}
    family = meta.get("family", "unknown")
    if family == "grid":
        kd = str(meta.get("k", "?"))
    elif family == "lattice":
        kd = str(meta.get("obstacle_density", "?"))
    else:
        kd = "?"
    return {
        "instance_id": os.path.splitext(os.path.basename(path))[0],
        "family": family,
        "rows": int(meta.get("rows", 0)),
        "cols": int(meta.get("cols", 0)),
        "k_or_density": kd,
        "M": graph.M,
    }


def solve_to_row(graph: Graph, h, C, D, info, time_limit=None,
                 **config_kwargs):
    config = SearchConfig(C=C, D=D, time_limit=time_limit, **config_kwargs)
    result = rme_moa_star(graph, h, config)
    row = ResultRow(
        instance_id=info["instance_id"],
        family=info["family"],
        rows=info["rows"],
        cols=info["cols"],
        k_or_density=info["k_or_density"],
        M=info["M"],
        C=format_bound(C),
        D=format_bound(D),
        runtime_seconds=result.metrics.runtime,
        max_stored_labels=result.metrics.max_stored_labels,
        num_solutions=len(result.solutions),
        expansions=result.metrics.expansions,
        reexpansions=result.metrics.reexpansions,
        dfs_expansions=result.metrics.dfs_expansions,
        status=result.terminated.value,
    )
    return row, result


def _cmd_gen(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    written = []
    for i in range(args.count):
        seed = args.seed + i
        if args.family == "grid":
            spec = GridSpec(rows=args.rows, cols=args.cols, k=args.k,
                            M=args.m, cost_range=(args.cost_min, args.cost_max),
                            seed=seed, obstacle_density=args.density)
            graph = gen_grid(spec)
        else:
            spec = LatticeSpec(rows=args.rows, cols=args.cols, M=args.m,
                               obstacle_density=args.density, seed=seed)
            graph = gen_lattice(spec)
        path = os.path.join(args.out, "%s_%d.json" % (args.family, seed))
        write_instance(graph, path)
        written.append(path)
    print("wrote %d instance(s) to %s" % (len(written), args.out))
    return 0


def _cmd_solve(args) -> int:
    graph = read_instance(args.instance)
    h = compute_heuristic(graph)
    C = parse_bound(args.C, graph.M)
    D = parse_bound(args.D, graph.M)
    info = _instance_meta(graph, args.instance)
    row, result = solve_to_row(
        graph, h, C, D, info, time_limit=args.time_limit,
        trace_expansions=args.trace is not None,
        literal_threshold_init=args.literal_threshold_init,
        debug_checks=args.debug_checks,
    )
    if args.format == "json":
        print(json.dumps(dict(zip(RESULT_COLUMNS, row.to_list()))))
    else:
        out = StringIO()
        writer = csv.writer(out)
        writer.writerow(RESULT_COLUMNS)
        writer.writerow(row.to_list())
        print(out.getvalue(), end="")
    if args.paths:
        for sol in result.solutions:
            print("%s %s" % (",".join(map(str, sol.cost)),
                             " ".join(map(str, sol.path))))
    if args.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for line in result.trace or []:
                fh.write(line + "\n")
    return 0


def geometric_mean(values):
    return math.exp(fmean(math.log(v) for v in values))


def summarize_rows(rows):
    """Per-config geometric-mean runtime/memory ratios vs the plain
    best-first baseline, excluding timed-out rows on either side."""
    baseline = {}
    for row in rows:
        if (row.C, row.D) == BASELINE:
            baseline[row.instance_id] = row
    configs = {}
    for row in rows:
        configs.setdefault((row.C, row.D), []).append(row)

    summary = {"baseline": {"C": BASELINE[0], "D": BASELINE[1]},
               "baseline_present": bool(baseline), "configs": []}
    for (c, d), config_rows in sorted(configs.items()):
        entry = {"C": c, "D": d, "runs": len(config_rows)}
        timed_out = sum(1 for r in config_rows if r.status != "completed")
        entry["timed_out"] = timed_out
        if baseline and (c, d) != BASELINE:
            rt, mem, excluded = [], [], 0
            for row in config_rows:
                base = baseline.get(row.instance_id)
                if base is None or base.status != "completed" \
                        or row.status != "completed":
                    excluded += 1
                    continue
                rt.append(max(row.runtime_seconds, 1e-9)
                          / max(base.runtime_seconds, 1e-9))
                mem.append(row.max_stored_labels / base.max_stored_labels)
            entry["excluded"] = excluded
            if rt:
                entry["runtime_ratio_geomean"] = geometric_mean(rt)
                entry["memory_ratio_geomean"] = geometric_mean(mem)
        summary["configs"].append(entry)
    return summary


def run_bench(family, rows, cols, k, m, density, cost_range, count, seed,
              configs, time_limit=None, jobs=1):
    """Run the full (instance x config) matrix and return result rows."""
    tasks = [seed + i for i in range(count)]
    if jobs > 1:
        from multiprocessing import Pool
        payload = [(family, rows, cols, k, m, density, cost_range, s,
                    configs, time_limit) for s in tasks]
        with Pool(jobs) as pool:
            chunks = pool.map(_bench_one_star, payload)
    else:
        chunks = [_bench_one(family, rows, cols, k, m, density, cost_range, s,
                             configs, time_limit) for s in tasks]
    return [row for chunk in chunks for row in chunk]


def _bench_one_star(payload):
    return _bench_one(*payload)


def _bench_one(family, rows, cols, k, m, density, cost_range, seed, configs,
               time_limit):
    if family == "grid":
        graph = gen_grid(GridSpec(rows=rows, cols=cols, k=k, M=m,
                                  cost_range=cost_range, seed=seed,
                                  obstacle_density=density))
    else:
        graph = gen_lattice(LatticeSpec(rows=rows, cols=cols, M=m,
                                        obstacle_density=density, seed=seed))
    h = compute_heuristic(graph)
    info = _instance_meta(graph, "%s_%d.json" % (family, seed))
    out = []
    for C, D in configs:
        row, _ = solve_to_row(graph, h, C, D, info, time_limit=time_limit)
        out.append(row)
    return out


def write_rows_csv(rows, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_COLUMNS)
        for row in rows:
            writer.writerow(row.to_list())


def read_rows_csv(path):
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RESULT_COLUMNS:
            raise ValueError("unexpected CSV header in %s" % path)
        return [ResultRow.from_list(vals) for vals in reader]


def _cmd_bench(args) -> int:
    m = args.m
    configs = parse_configs(args.configs, m)
    cost_range = (args.cost_min, args.cost_max)
    rows = run_bench(args.family, args.rows, args.cols, args.k, m,
                     args.density, cost_range, args.count, args.seed,
                     configs, time_limit=args.time_limit, jobs=args.jobs)
    write_rows_csv(rows, args.out)
    summary = summarize_rows(rows)
    if not summary["baseline_present"]:
        print("warning: baseline config (C=inf, D=0) absent; "
              "summary omits ratios", file=sys.stderr)
    summary_path = args.summary or (args.out + ".summary.json")
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("wrote %d rows to %s (summary: %s)"
          % (len(rows), args.out, summary_path))
    return 0


def _cmd_verify(args) -> int:
    graph = read_instance(args.instance)
    try:
        reference = oracle_pareto(graph, max_vertices=args.max_vertices)
    except OracleGuardError as exc:
        print("oracle guard: %s" % exc, file=sys.stderr)
        return 3
    h = compute_heuristic(graph)
    configs = parse_configs(args.configs, graph.M)
    failures = 0
    for C, D in configs:
        config = SearchConfig(C=C, D=D, time_limit=args.time_limit,
                              drop_solution_check=args.inject_fault ==
                              "drop-solution-check")
        result = rme_moa_star(graph, h, config)
        got = result.cost_set()
        ok = got == reference.costs \
            and result.terminated == Terminated.COMPLETED
        for sol in result.solutions:
            if graph.path_cost(sol.path) != sol.cost:
                ok = False
        label = "C=%s D=%s" % (format_bound(C), format_bound(D))
        if ok:
            print("PASS %s (%d solutions)" % (label, len(got)))
        else:
            failures += 1
            print("FAIL %s: engine=%s oracle=%s"
                  % (label, sorted(got), sorted(reference.costs)))
    return 1 if failures else 0


def _cmd_oracle(args) -> int:
    graph = read_instance(args.instance)
    try:
        reference = oracle_pareto(graph, max_vertices=args.max_vertices)
    except OracleGuardError as exc:
        print("oracle guard: %s" % exc, file=sys.stderr)
        return 3
    for cost in reference.sorted_costs():
        print(",".join(map(str, cost)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mosp",
        description="Multi-objective shortest path search suite")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate benchmark instances")
    gen.add_argument("family", choices=["grid", "lattice"])
    gen.add_argument("--rows", type=int, default=20)
    gen.add_argument("--cols", type=int, default=20)
    gen.add_argument("--k", type=int, default=2, help="grid connectedness exponent")
    gen.add_argument("--m", type=int, default=2, help="number of objectives")
    gen.add_argument("--cost-min", type=int, default=1)
    gen.add_argument("--cost-max", type=int, default=10)
    gen.add_argument("--density", type=float, default=None,
                     help="obstacle density (default 0 for grid, 0.2 for lattice)")
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="solve one instance")
    solve.add_argument("instance")
    solve.add_argument("--C", default="inf")
    solve.add_argument("--D", default="0")
    solve.add_argument("--time-limit", type=float, default=None)
    solve.add_argument("--format", choices=["csv", "json"], default="csv")
    solve.add_argument("--paths", action="store_true",
                       help="also print each solution cost and vertex sequence")
    solve.add_argument("--trace", default=None,
                       help="write the expansion trace to this file")
    solve.add_argument("--literal-threshold-init", action="store_true")
    solve.add_argument("--debug-checks", action="store_true")
    solve.set_defaults(func=_cmd_solve)

    bench = sub.add_parser("bench", help="run an (instance x config) matrix")
    bench.add_argument("--family", choices=["grid", "lattice"], default="grid")
    bench.add_argument("--rows", type=int, default=20)
    bench.add_argument("--cols", type=int, default=20)
    bench.add_argument("--k", type=int, default=2)
    bench.add_argument("--m", type=int, default=2)
    bench.add_argument("--cost-min", type=int, default=1)
    bench.add_argument("--cost-max", type=int, default=10)
    bench.add_argument("--density", type=float, default=None)
    bench.add_argument("--count", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--configs", default="inf:0;0:0",
                       help="semicolon-separated C:D pairs, e.g. 'inf:0;0:0;3:0'")
    bench.add_argument("--time-limit", type=float, default=None)
    bench.add_argument("--jobs", type=int, default=1)
    bench.add_argument("--out", required=True)
    bench.add_argument("--summary", default=None)
    bench.set_defaults(func=_cmd_bench)

    verify = sub.add_parser("verify",
                            help="check engine output against the oracle")
    verify.add_argument("instance")
    verify.add_argument("--configs", default="inf:0;0:0;0:inf")
    verify.add_argument("--max-vertices", type=int, default=5000)
    verify.add_argument("--time-limit", type=float, default=None)
    verify.add_argument("--inject-fault", choices=["drop-solution-check"],
                        default=None, help="testing hook: corrupt the engine")
    verify.set_defaults(func=_cmd_verify)

    orc = sub.add_parser("oracle", help="print the exact Pareto cost set")
    orc.add_argument("instance")
    orc.add_argument("--max-vertices", type=int, default=5000)
    orc.set_defaults(func=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "density", None) is None and hasattr(args, "density"):
        args.density = 0.2 if getattr(args, "family", "") == "lattice" else 0.0
    try:
        return args.func(args)
    except (OSError, ParseError, InvalidSpecError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
