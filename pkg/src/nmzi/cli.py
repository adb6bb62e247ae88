"""Command-line front end.

Three subcommands::

    nmzi analytic    evaluate the closed forms on a grid and write a CSV
    nmzi montecarlo  same grid, plus photon-counting estimates side by side
    nmzi verify      run the invariant checks and report pass/fail

Grids come from ``--preset fig2|fig3|fig4`` or explicit
``--sweep param=start:stop:step`` / ``--fix param=value`` flags, optionally
seeded from a ``--config`` file (flags win).  ``--degrees`` switches the
interpretation of angle values on the way in; everything is stored and
written in radians.

Exit codes: 0 success, 1 usage or configuration error, 2 verification
failure.  ``NMZI_OUT_DIR`` names the default output directory when ``--out``
is not given.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .config import ConfigError, RunConfig, build_sweep_spec, parse_config
from .correlation import record_at, sweep_settings
from .elements import DEFAULT_CONVENTIONS, ElementConventions
from .montecarlo import SourceParams, run_experiment
from .output import emit_csv, emit_gnuplot
from .verify import run_verification

OUT_DIR_ENV = "NMZI_OUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; this tool reserves 2 for
    # verification failures, so route usage problems through exit code 1.
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="nmzi",
        description="Paired-interferometer correlation simulator",
        epilog="Default output directory: $" + OUT_DIR_ENV + " (else '.').",
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--config", help="flat key = value config file")
    grid.add_argument("--preset", help="named sweep: fig2, fig3, or fig4")
    grid.add_argument(
        "--sweep",
        action="append",
        metavar="PARAM=START:STOP:STEP",
        help="sweep axis; repeatable, row-major in the order given",
    )
    grid.add_argument(
        "--fix",
        action="append",
        metavar="PARAM=VALUE",
        help="hold a parameter fixed; repeatable",
    )
    grid.add_argument("--out", help="output CSV path")
    grid.add_argument(
        "--degrees",
        action="store_true",
        help="interpret angle values (sweep/fix) as degrees",
    )
    grid.add_argument(
        "--gnuplot",
        action="store_true",
        help="also write a gnuplot script next to the CSV",
    )

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--mu", help="mean photon number per time bin")
    source.add_argument("--bins", help="number of time bins")
    source.add_argument("--seed", help="run seed (unsigned 64-bit)")
    source.add_argument("--streams", help="independent sampling streams")
    source.add_argument("--routing", help="pair routing: paired or binomial")

    sub.add_parser(
        "analytic", parents=[grid], help="closed-form sweep to CSV"
    )
    mc = sub.add_parser(
        "montecarlo",
        parents=[grid, source],
        help="photon-counting sweep to CSV",
    )
    mc.add_argument(
        "--normalization",
        choices=("analytic", "measured"),
        help="coincidence normalization (default analytic)",
    )
    ver = sub.add_parser(
        "verify", parents=[source], help="run the invariant checks"
    )
    ver.add_argument("--config", help="flat key = value config file")
    ver.add_argument(
        "--skip-montecarlo",
        action="store_true",
        help="only the exact analytic identities",
    )
    ver.add_argument(
        "--corrupt-conventions", action="store_true", help=argparse.SUPPRESS
    )
    return parser


def _split_assignment(flag: str, item: str) -> tuple[str, str]:
    name, sep, value = item.partition("=")
    if not sep or not name.strip() or not value.strip():
        raise ConfigError(
            f"{flag} expects PARAM=VALUE syntax, got {item!r}"
        )
    return name.strip(), value.strip()


def _overrides_from_args(args: argparse.Namespace) -> dict:
    overrides = {"mode": args.mode}
    if getattr(args, "preset", None):
        overrides["preset"] = args.preset
    for item in getattr(args, "sweep", None) or []:
        name, value = _split_assignment("--sweep", item)
        overrides[f"sweep.{name}"] = value
    for item in getattr(args, "fix", None) or []:
        name, value = _split_assignment("--fix", item)
        overrides[f"fix.{name}"] = value
    for key in ("mu", "bins", "seed", "streams", "routing", "normalization", "out"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "degrees", False):
        overrides["angles"] = "degrees"
    if getattr(args, "gnuplot", False):
        overrides["gnuplot"] = "true"
    return overrides


def _load_config(args: argparse.Namespace) -> RunConfig:
    text = None
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}")
    return parse_config(text, _overrides_from_args(args))


def _resolve_out_path(config: RunConfig) -> str:
    if config.out_path:
        return config.out_path
    name = f"{config.mode}_{config.preset or 'sweep'}.csv"
    return os.path.join(os.environ.get(OUT_DIR_ENV, "."), name)


def _run_sweep_mode(config: RunConfig) -> int:
    spec = build_sweep_spec(config)
    settings = sweep_settings(spec)
    records = [record_at(s) for s in settings]
    mc_results = None
    if config.mode == "montecarlo":
        source = config.source or SourceParams(
            mean_photon_number=0.05, n_time_bins=1_000_000
        )
        mc_results = run_experiment(settings, source, config.normalization)
    out_path = _resolve_out_path(config)
    emit_csv(records, out_path, mc_results)
    written = [out_path]
    if config.gnuplot:
        script_path = os.path.splitext(out_path)[0] + ".gp"
        axis_names = [axis.name for axis in spec.axes]
        emit_gnuplot(out_path, script_path, axis_names, mc_results is not None)
        written.append(script_path)
    print(f"wrote {len(records)} grid points to {', '.join(written)}")
    return EXIT_OK


def _run_verify(config: RunConfig, args: argparse.Namespace) -> int:
    conventions = DEFAULT_CONVENTIONS
    if args.corrupt_conventions:
        # Negative-control hook: break the polarizing splitter's reflection
        # phase and prove the composed-model check notices.
        conventions = ElementConventions(pbs_reflection_phase=1.0)
    report = run_verification(
        include_montecarlo=not args.skip_montecarlo,
        source=config.source,
        conventions=conventions,
    )
    for line in report.lines():
        print(line)
    return EXIT_OK if report.all_passed else EXIT_VERIFY_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = _load_config(args)
        if config.mode == "verify":
            return _run_verify(config, args)
        return _run_sweep_mode(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
