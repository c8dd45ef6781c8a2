"""Command-line front door: run one simulation or a parameter sweep.

Artifacts are staged in a sibling directory and swapped into place on
success, so a failed invocation never leaves partial output. Exit codes:
0 success, 1 usage or configuration error, 2 runtime or I/O error.
"""

from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

import yaml

from . import __version__
from .config import ConfigError, SimConfig, SweepSpec, parse_config, resolved_doc, with_seed
from .experiment import run_experiment, write_timeseries_csv, columns_from_records
from .lattice import run_simulation_lattice
from .wellmixed import run_simulation_mixed

USAGE_ERROR = 1
RUNTIME_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ineqsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("run", "execute one simulation and write its timeseries"),
        ("sweep", "expand a parameter sweep and write per-run and aggregate CSVs"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, metavar="PATH",
                       help="YAML config document")
        p.add_argument("--out", required=True, metavar="DIR",
                       help="output directory (created; refused if non-empty without --force)")
        p.add_argument("--seed", type=int, default=None, metavar="U64",
                       help="override the config's seed (run) or master_seed (sweep)")
        p.add_argument("--force", action="store_true",
                       help="replace a non-empty output directory")
        if name == "sweep":
            p.add_argument("--parallelism", type=int, default=1, metavar="K",
                           help="number of concurrent simulations")

    sub.add_parser("version", help="print the package version")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "version":
        print(f"ineqsim {__version__}")
        return 0

    try:
        cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
        if args.command == "run" and not isinstance(cfg, SimConfig):
            raise ConfigError("run requires a single-run config, got a sweep spec")
        if args.command == "sweep" and not isinstance(cfg, SweepSpec):
            raise ConfigError("sweep requires a sweep spec, got a single-run config")
        if args.seed is not None:
            cfg = with_seed(cfg, args.seed)
            cfg.validate()
        out_dir = _check_out_dir(Path(args.out), args.force)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    staging = out_dir.parent / f".{out_dir.name}.staging"
    try:
        if staging.exists():
            shutil.rmtree(staging)
        staging.mkdir(parents=True)
        if args.command == "run":
            _run_single(cfg, staging)
        else:
            run_experiment(cfg, staging, parallelism=args.parallelism)
        _write_metadata(cfg, staging)
        if out_dir.exists():
            shutil.rmtree(out_dir)
        staging.rename(out_dir)
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports everything
        shutil.rmtree(staging, ignore_errors=True)
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    return 0


def _check_out_dir(out_dir: Path, force: bool) -> Path:
    if out_dir.exists():
        if not out_dir.is_dir():
            raise ConfigError(f"--out {out_dir} exists and is not a directory")
        if any(out_dir.iterdir()) and not force:
            raise ConfigError(
                f"--out {out_dir} is not empty; pass --force to replace it"
            )
    return out_dir


def _run_single(cfg: SimConfig, staging: Path) -> None:
    if cfg.model == "mixed":
        records = run_simulation_mixed(cfg)
        snapshots = []
    else:
        result = run_simulation_lattice(cfg)
        records = result.records
        snapshots = result.snapshots
    write_timeseries_csv(staging / "timeseries.csv", columns_from_records(0, records))
    if snapshots:
        snap_dir = staging / "snapshots"
        snap_dir.mkdir()
        lines = ["generation,largest_coop_cluster"]
        for snap in snapshots:
            (snap_dir / f"gen_{snap.generation:05d}.txt").write_text(
                snap.text + "\n", encoding="utf-8"
            )
            lines.append(f"{snap.generation},{snap.largest_coop_cluster}")
        (snap_dir / "clusters.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_metadata(cfg, staging: Path) -> None:
    doc = resolved_doc(cfg)
    (staging / "config.yaml").write_text(
        yaml.safe_dump(doc, sort_keys=True, default_flow_style=False),
        encoding="utf-8",
    )


if __name__ == "__main__":
    sys.exit(main())
