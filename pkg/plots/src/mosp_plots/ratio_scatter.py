"""Log-log scatter of per-instance metric values against the best-first
baseline, with dashed multiplier guide lines.

Every point is one (instance, config) run plotted at
(baseline metric, config metric); a point on the "0.5x" line used half
the baseline's runtime or stored labels. Baseline runs themselves are not
plotted since they would all sit on the "1x" line.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

RESULT_COLUMNS = [
    "instance_id", "family", "rows", "cols", "k_or_density", "M", "C", "D",
    "runtime_seconds", "max_stored_labels", "num_solutions", "expansions",
    "reexpansions", "dfs_expansions", "status",
]

METRIC_COLUMNS = {
    "runtime": "runtime_seconds",
    "memory": "max_stored_labels",
}

BASELINE = ("inf", "0")

DEFAULT_MULTIPLIERS = (0.25, 0.5, 1.0, 2.0, 4.0)


class PlotDataError(ValueError):
    """The CSV is malformed or does not support the requested plot."""


@dataclass
class PlotConfig:
    csv_path: str
    metric: str
    out_path: str
    configs: Optional[list] = None  # [(C, D), ...] filter; None plots all
    multipliers: tuple = DEFAULT_MULTIPLIERS


def load_rows(path):
    """Strictly parse a results CSV; any malformed row is an error."""
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotDataError("%s: empty file" % path) from None
        if header != RESULT_COLUMNS:
            raise PlotDataError("%s: unexpected header %r" % (path, header))
        rows = []
        for lineno, values in enumerate(reader, start=2):
            if len(values) != len(RESULT_COLUMNS):
                raise PlotDataError("%s:%d: expected %d fields, got %d"
                                    % (path, lineno, len(RESULT_COLUMNS),
                                       len(values)))
            row = dict(zip(RESULT_COLUMNS, values))
            try:
                row["runtime_seconds"] = float(row["runtime_seconds"])
                row["max_stored_labels"] = int(row["max_stored_labels"])
            except ValueError as exc:
                raise PlotDataError("%s:%d: %s" % (path, lineno, exc)) from None
            if row["status"] not in ("completed", "timed_out"):
                raise PlotDataError("%s:%d: unknown status %r"
                                    % (path, lineno, row["status"]))
            if row["max_stored_labels"] < 0 or row["runtime_seconds"] < 0:
                raise PlotDataError("%s:%d: negative metric" % (path, lineno))
            rows.append(row)
    return rows


def _collect_points(rows, metric_col, config_filter):
    baseline = {}
    for row in rows:
        if (row["C"], row["D"]) == BASELINE and row["status"] == "completed":
            baseline[row["instance_id"]] = row[metric_col]

    by_config = {}
    missing = set()
    skipped_timeouts = 0
    for row in rows:
        key = (row["C"], row["D"])
        if key == BASELINE:
            continue
        if config_filter is not None and key not in config_filter:
            continue
        if row["status"] != "completed":
            skipped_timeouts += 1
            continue
        if row["instance_id"] not in baseline:
            missing.add(row["instance_id"])
            continue
        by_config.setdefault(key, []).append(
            (row["instance_id"], baseline[row["instance_id"]], row[metric_col]))
    if missing:
        raise PlotDataError("no baseline (C=inf, D=0) row for instance(s): "
                            + ", ".join(sorted(missing)))
    if not by_config:
        raise PlotDataError("no plottable rows after filtering")
    for key in by_config:
        by_config[key].sort()
    return by_config, skipped_timeouts


def render_ratio_scatter(config: PlotConfig):
    """Render the chart to ``config.out_path``.

    Returns (figure, axes, points-by-config) so tests can inspect the
    rendered geometry through the axes transforms.
    """
    metric_col = METRIC_COLUMNS.get(config.metric)
    if metric_col is None:
        raise PlotDataError("metric must be one of %s"
                            % sorted(METRIC_COLUMNS))
    rows = load_rows(config.csv_path)
    config_filter = set(map(tuple, config.configs)) if config.configs else None
    by_config, skipped = _collect_points(rows, metric_col, config_filter)
    if skipped:
        print("note: skipped %d timed-out run(s)" % skipped, file=sys.stderr)

    fig, ax = plt.subplots(figsize=(6.4, 5.6))
    ax.set_xscale("log")
    ax.set_yscale("log")

    xs_all = [x for pts in by_config.values() for _, x, _ in pts]
    ys_all = [y for pts in by_config.values() for _, _, y in pts]
    lo = min(xs_all + ys_all)
    hi = max(xs_all + ys_all)
    span = (max(lo * 0.8, 1e-12), hi * 1.25)

    for mult in config.multipliers:
        ax.plot(span, (span[0] * mult, span[1] * mult), linestyle="--",
                linewidth=0.8, color="grey", zorder=1)
        ax.annotate("%gx" % mult, (span[1], span[1] * mult),
                    fontsize=7, color="grey",
                    xytext=(2, 0), textcoords="offset points")

    for key in sorted(by_config):
        pts = by_config[key]
        ax.scatter([x for _, x, _ in pts], [y for _, _, y in pts],
                   s=14, zorder=2, label="C=%s, D=%s" % key)

    label = {"runtime": "runtime (s)", "memory": "max stored labels"}[config.metric]
    ax.set_xlabel("baseline %s" % label)
    ax.set_ylabel("configured %s" % label)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(config.out_path)
    return fig, ax, by_config
