"""Command-line entry point: ``tto-sections run|validate|list-families``.

Exit status:

* 0 -- every asserted invariant held
* 1 -- an asserted invariant failed
* 2 -- configuration or domain error
* 3 -- resolution cap hit
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from tto_sections.__about__ import __version__
from tto_sections._catalog import render_catalog
from tto_sections._config import ExperimentConfig
from tto_sections._errors import ConfigError, DomainError, ResolutionError, TTOSectionsError
from tto_sections._experiments import run_experiment
from tto_sections._tables import ResultDocument

logger = logging.getLogger(__name__)

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_RESOLUTION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tto-sections",
        description="Finite sections of truncated Toeplitz operators on model spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one experiment and write its result document and tables")
    run.add_argument("config", type=Path, help="JSON experiment configuration")
    run.add_argument("--parallel", type=int, default=None, metavar="N", help="worker threads for per-n work")
    run.add_argument("--output-dir", default=None, help="overrides the environment and the config")

    validate = commands.add_parser("validate", help="check a configuration without running it")
    validate.add_argument("config", type=Path)

    commands.add_parser("list-families", help="print the named zero families and symbols")
    return parser


def _error_record(error: TTOSectionsError) -> dict:
    record = {"type": type(error).__name__, "message": str(error)}
    if isinstance(error, ConfigError) and error.field is not None:
        record["field"] = error.field
    if isinstance(error, ResolutionError):
        record["max_modulus"] = error.max_modulus
        record["cap"] = error.cap
    return record


def _write_error(
    directory: Path,
    name: str,
    kind: str,
    status: int,
    error: TTOSectionsError,
    config: Optional[ExperimentConfig] = None,
) -> None:
    document = ResultDocument(
        name=name,
        kind=kind,
        status=status,
        passed=False,
        config=config.raw if config is not None else {},
        error=_error_record(error),
    )
    try:
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{name}.json").write_text(document.render())
    except OSError as e:
        logger.warning("could not write the error record to %s: %s", directory, e.strerror)


def _run(args: argparse.Namespace) -> int:
    if args.parallel is not None and args.parallel < 1:
        print("error: --parallel must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    try:
        config = ExperimentConfig.load(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        directory = Path(args.output_dir) if args.output_dir else ExperimentConfig.default_output_dir()
        _write_error(directory, args.config.stem, "unknown", EXIT_CONFIG, e)
        return EXIT_CONFIG

    try:
        directory = config.prepare_output_dir(args.output_dir)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        _write_error(ExperimentConfig.default_output_dir(), config.name, config.kind, EXIT_CONFIG, e, config)
        return EXIT_CONFIG

    try:
        result = run_experiment(config, workers=args.parallel)
    except ResolutionError as e:
        print(f"error: {e}", file=sys.stderr)
        _write_error(directory, config.name, config.kind, EXIT_RESOLUTION, e, config)
        return EXIT_RESOLUTION
    except (ConfigError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        _write_error(directory, config.name, config.kind, EXIT_CONFIG, e, config)
        return EXIT_CONFIG

    status = EXIT_PASSED if result.passed else EXIT_FAILED
    table_files = [f"{config.name}.{table.name}.csv" for table in result.tables]
    document = ResultDocument(
        name=config.name,
        kind=result.kind,
        status=status,
        passed=result.passed,
        summary=result.summary,
        tables=tuple(table_files),
        config=config.raw,
    )
    try:
        for table, file_name in zip(result.tables, table_files):
            (directory / file_name).write_text(table.render())
        (directory / f"{config.name}.json").write_text(document.render())
    except OSError as e:
        error = ConfigError(f"cannot write results to {directory}: {e.strerror}", field="output.directory")
        print(f"error: {error}", file=sys.stderr)
        _write_error(ExperimentConfig.default_output_dir(), config.name, config.kind, EXIT_CONFIG, error, config)
        return EXIT_CONFIG
    logger.info("wrote %s results to %s", config.name, directory)
    print(f"{config.name}: {'passed' if result.passed else 'FAILED'} ({directory / f'{config.name}.json'})")
    return status


def _validate(args: argparse.Namespace) -> int:
    try:
        config = ExperimentConfig.load(args.config)
        config.blaschke()
        config.symbol_a()
        config.symbol_second()
    except (ConfigError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"{config.name}: valid {config.kind} experiment")
    return EXIT_PASSED


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "list-families":
        sys.stdout.write(render_catalog())
        return EXIT_PASSED
    if args.command == "validate":
        return _validate(args)
    return _run(args)
