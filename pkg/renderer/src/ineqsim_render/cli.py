"""Standalone render command over simulator artifacts.

    render <kind> --in PATH [--group-by n|ns] --out PATH [--vector]

Kinds: timeseries, sweep_curves, heatmap, snapshot_montage. Exit codes
follow the simulator's convention: 0 success, 1 usage/input error,
2 unexpected runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import (
    render_snapshots,
    render_sweep_curves,
    render_sweep_heatmap,
    render_timeseries,
    save_figure,
)
from .io import RenderInputError

KINDS = ("timeseries", "sweep_curves", "heatmap", "snapshot_montage")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def main(argv: list[str] | None = None) -> int:
    parser = _Parser(prog="render", description=__doc__)
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="input", required=True, metavar="PATH",
                        help="timeseries/sweep CSV, or a snapshot directory")
    parser.add_argument("--out", required=True, metavar="PATH",
                        help="output image path (lossless raster)")
    parser.add_argument("--group-by", choices=("n", "ns"), default="ns",
                        help="curve grouping key for sweep_curves")
    parser.add_argument("--vector", action="store_true",
                        help="also write an .svg next to the raster")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        src = Path(args.input)
        if args.kind == "timeseries":
            fig = render_timeseries(src)
        elif args.kind == "sweep_curves":
            fig = render_sweep_curves(src, group_by=args.group_by)
        elif args.kind == "heatmap":
            fig = render_sweep_heatmap(src)
        else:
            fig = render_snapshots(src)
        written = save_figure(fig, Path(args.out), vector=args.vector)
    except RenderInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
