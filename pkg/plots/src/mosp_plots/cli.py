"""Command-line front end: ``mosp-plot --csv results.csv --metric memory
--out mem.png``.

Exits 1 on malformed or unplottable input.
"""

from __future__ import annotations

import argparse
import sys

from .ratio_scatter import (
    DEFAULT_MULTIPLIERS,
    PlotConfig,
    PlotDataError,
    render_ratio_scatter,
)


def parse_config_filter(text):
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            c, d = chunk.split(":")
        except ValueError:
            raise PlotDataError("config filter %r must look like C:D" % chunk) \
                from None
        out.append((c.strip(), d.strip()))
    if not out:
        raise PlotDataError("empty config filter")
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mosp-plot",
        description="Ratio scatter charts over mosp benchmark CSVs")
    parser.add_argument("--csv", required=True, help="results CSV path")
    parser.add_argument("--metric", choices=["runtime", "memory"],
                        required=True)
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--configs", default=None,
                        help="only plot these C:D pairs, e.g. '0:0;3:0'")
    parser.add_argument("--multipliers",
                        default=",".join(str(m) for m in DEFAULT_MULTIPLIERS),
                        help="comma-separated guide-line multipliers")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        multipliers = tuple(float(x) for x in args.multipliers.split(","))
        if any(m <= 0 for m in multipliers):
            raise PlotDataError("multipliers must be positive")
        config = PlotConfig(
            csv_path=args.csv,
            metric=args.metric,
            out_path=args.out,
            configs=parse_config_filter(args.configs) if args.configs else None,
            multipliers=multipliers,
        )
        render_ratio_scatter(config)
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    print("wrote %s" % args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
