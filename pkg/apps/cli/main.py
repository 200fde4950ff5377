"""
LyapEx - Kommandozeile
lyapex run | verify | reproduce mit stabilen Exit-Codes (0 ok, 2 Konfiguration, 3 Laufzeit)
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import ValidationError

from apps.benettin.runner import run
from apps.cli.config import LyapexSettings, get_settings, validate_settings
from apps.cli.csv_out import write_result_csv
from apps.cli.models import ExperimentConfig
from apps.cli.reproduce import SCALES, available_bundles, reproduce
from apps.cli.verify import available_suites, run_suites
from apps.errors import ConfigError, InvalidArgumentError, LyapexError, RunAbortedError, UnsupportedOperationError
from apps.monitor.metrics import write_metrics_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_CONFIG_ERRORS = (ConfigError, InvalidArgumentError, UnsupportedOperationError, ValidationError)


def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="lyapex", description="Lyapunov spectra with varying stepsizes")
    parser.add_argument("--log-level", default=None, help="Override LYAPEX_LOG_LEVEL")
    parser.add_argument("--metrics-file", type=Path, default=None, help="Write Prometheus metrics to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="Run one experiment config and write its CSV")
    run_parser.add_argument("config", type=Path, help="Flat key = value config file")

    verify_parser = sub.add_parser("verify", help="Run property suites")
    verify_parser.add_argument("suite", help=f"One of {', '.join(available_suites())}")
    verify_parser.add_argument("--seed", type=int, default=None, help="Seed for randomized cases")

    repro_parser = sub.add_parser("reproduce", help="Compute a figure bundle as CSV files")
    repro_parser.add_argument("bundle", help=f"One of {', '.join(available_bundles())}")
    repro_parser.add_argument("--scale", choices=list(SCALES), default="desk", help="desk (minutes) or full (hours)")
    repro_parser.add_argument("--out", type=Path, default=None, help="Output directory")
    repro_parser.add_argument("--jobs", type=int, default=None, help="Worker processes for independent curves")
    repro_parser.add_argument("--seed", type=int, default=None, help="Seed for random initial vectors")
    return parser.parse_args(argv)


def _seed(args_seed: Optional[int], settings: LyapexSettings) -> int:
    if args_seed is not None:
        return args_seed
    return settings.seed if settings.seed is not None else 0


def cmd_run(config_path: Path, settings: LyapexSettings) -> int:
    try:
        config = ExperimentConfig.from_file(config_path)
        if settings.seed is not None:
            logger.info(f"Seed aus LYAPEX_SEED: {settings.seed} (Datei: {config.seed})")
            config = config.with_seed(settings.seed)
        run_config = config.to_run_config(progress_every=settings.progress_every, label=config_path.stem)
    except _CONFIG_ERRORS as exc:
        logger.error(f"Ungültige Konfiguration {config_path}: {exc}")
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    output = Path(config.output_path) if config.output_path else settings.output_dir / f"{config_path.stem}.csv"
    try:
        result = run(run_config)
        write_result_csv(output, result, config.weights)
    except RunAbortedError as exc:
        print(f"run aborted at step {exc.step}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (LyapexError, OSError) as exc:
        logger.error(f"Lauf fehlgeschlagen: {exc}")
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    print(f"{output}: mu = {np.array2string(result.final_mu, precision=7)}")
    return EXIT_OK


def cmd_verify(suite: str, seed: int) -> int:
    try:
        results = run_suites(suite, seed=seed)
    except InvalidArgumentError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LyapexError as exc:
        logger.error(f"Verifikation abgebrochen: {exc}")
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    for check in results:
        print(check.format_line())
    passed = sum(check.passed for check in results)
    print(f"{passed}/{len(results)} checks passed")
    return EXIT_OK if passed == len(results) else EXIT_RUNTIME


def cmd_reproduce(args: argparse.Namespace, settings: LyapexSettings) -> int:
    out_dir = args.out if args.out is not None else settings.output_dir / args.bundle
    jobs = args.jobs if args.jobs is not None else settings.jobs
    if jobs < 1:
        print(f"config error: --jobs must be >= 1, got {jobs}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = reproduce(
            args.bundle, args.scale, out_dir, jobs=jobs,
            seed=_seed(args.seed, settings), progress_every=settings.progress_every,
        )
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LyapexError, OSError) as exc:
        logger.error(f"Reproduktion fehlgeschlagen: {exc}")
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    for path in report.files:
        print(path)
    print(report.manifest)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    args = parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as exc:
        print(f"config error: invalid LYAPEX_* environment: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format="%(asctime)s - %(levelname)s - %(message)s")
    for warning in validate_settings(settings):
        logger.warning(warning)

    if args.command == "run":
        code = cmd_run(args.config, settings)
    elif args.command == "verify":
        code = cmd_verify(args.suite, _seed(args.seed, settings))
    else:
        code = cmd_reproduce(args, settings)

    metrics_file = args.metrics_file or settings.metrics_file
    if metrics_file is not None:
        try:
            write_metrics_file(metrics_file)
        except OSError as exc:
            logger.warning(f"Metrics-Datei nicht schreibbar: {metrics_file}: {exc}")
    return code


if __name__ == "__main__":
    sys.exit(main())
