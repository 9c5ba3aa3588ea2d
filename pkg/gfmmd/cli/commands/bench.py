import argparse
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ValidationError

from gfmmd.core.exceptions import ConfigurationError
from gfmmd.schemas.bench import BenchmarkReport, GridConfig, LocalizationConfig, SwissRollConfig
from gfmmd.schemas.common import BenchmarkKind, EngineKind
from gfmmd.schemas.run_config import RunConfig, Subcommand
from gfmmd.services.bench_harness import (
    format_report_text,
    run_grid_experiment,
    run_localization_suite,
    run_swissroll_benchmark,
    write_report_json,
    write_report_text,
    write_scatter_csv,
)
from gfmmd.cli.commands.common import (
    add_engine_flags,
    add_output_flag,
    build_run_config,
    format_validation_error,
    print_header,
    print_success,
)

BENCH_CONFIGS = {
    BenchmarkKind.SWISSROLL: SwissRollConfig,
    BenchmarkKind.GRID: GridConfig,
    BenchmarkKind.LOCALIZATION: LocalizationConfig,
}

RUNNERS = {
    BenchmarkKind.SWISSROLL: run_swissroll_benchmark,
    BenchmarkKind.GRID: run_grid_experiment,
    BenchmarkKind.LOCALIZATION: run_localization_suite,
}


def register(subparsers, parents):
    parser = subparsers.add_parser("bench", parents=parents, help="Run a desk-scale experiment")
    parser.add_argument("suite", choices=[kind.value for kind in BenchmarkKind], help="Experiment to run")
    parser.add_argument("--config", default=None, help="Configuration JSON (defaults when omitted)")
    add_engine_flags(parser)
    add_output_flag(parser, "Report JSON; the text report and scatter CSV are written next to it")
    parser.set_defaults(handler=handle, engine=None)


def handle(args: argparse.Namespace) -> int:
    engine_given = args.engine is not None
    if not engine_given:
        args.engine = "exact"
    config = build_run_config(args, Subcommand.BENCH, bench=args.suite, config=args.config)
    return bench(config, engine_given)


def load_bench_config(kind: BenchmarkKind, path: Optional[Path]) -> BaseModel:
    """
    Read a benchmark configuration, defaults when ``path`` is None

    Raises:
        ConfigurationError: On a schema violation
    """
    schema = BENCH_CONFIGS[kind]
    try:
        if path is None:
            return schema()
        return schema.model_validate_json(Path(path).read_text())
    except ValidationError as e:
        raise ConfigurationError(f"{path}: {format_validation_error(e)}")
    except OSError as e:
        raise ConfigurationError(f"Cannot read {path}: {e}")


def bench(config: RunConfig, engine_given: bool = False) -> int:
    suite = load_bench_config(config.bench, config.config)
    updates = {}
    if config.bench == BenchmarkKind.SWISSROLL:
        if engine_given and config.engine.kind != EngineKind.EXACT:
            raise ConfigurationError("swissroll runs every configured path; set 'orders' in the config instead")
        if config.seed is not None:
            updates["seeds"] = [config.seed]
    elif engine_given:
        updates["engine"] = config.engine
    if updates:
        suite = type(suite).model_validate({**suite.model_dump(), **updates})

    report = RUNNERS[config.bench](suite, threads=config.threads)

    out = Path(config.out)
    write_report_json(report, out)
    write_report_text(report, out.with_suffix(".txt"))
    if isinstance(report, BenchmarkReport):
        write_scatter_csv(report, out.with_name(f"{out.stem}_scatter.csv"))

    print_header(format_report_text(report).rstrip())
    print_success(f"Wrote {out}")
    return 0
