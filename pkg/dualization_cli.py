#!/usr/bin/env python3
"""
Command-line interface for parallel dualization.

Subcommands: gen, dualize, oracle, estimate, validate, schedule, bench.
Results go to stdout (or --output); logs, tables and drawn seeds go to stderr.

Exit codes: 0 success, 1 usage error or malformed input, 2 verification
mismatch, 3 resource cap exceeded, 4 runtime failure.
"""

import os
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import typer
from dotenv import load_dotenv
from rich.console import Console
from rich.markup import escape
from rich.table import Table

# Load environment variables (LOG_LEVEL, CONFIG_DIR) before the logger is configured
load_dotenv()

# Add the repo root to the path to import modules
sys.path.insert(0, str(Path(__file__).parent))

from src.dualization.oracle import DEFAULT_MAX_COLUMNS, brute_force_dualize
from src.dualization.runcm import dualize, run_enumeration
from src.dualization.schema import EnumConfig, EnumStats
from src.estimation.sampler import SubtaskEstimator
from src.estimation.schema import parse_estimate
from src.estimation.validation import ValidationExperiment, table1_layout
from src.matrix.generator import GenSpec, draw_seed, generate_matrix
from src.matrix.io import format_covering, format_matrix, read_matrix
from src.parallel.benchmark import BenchmarkHarness, detect_plateau
from src.parallel.scheduler import build_schedule
from src.utils.errors import (
    DualizationError,
    MatrixFormatError,
    OracleCapExceededError,
    SamplingError,
    TimerResolutionError,
    WorkerFailureError
)
from src.utils.helpers import format_error, load_config, parse_shape, save_csv
from src.utils.logger import get_logger, set_log_level, setup_file_logging

logger = get_logger(__name__)
console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_CAP = 3
EXIT_RUNTIME = 4

app = typer.Typer(
    help="Enumerate irreducible coverings of Boolean matrices and parallelize the enumeration.",
    add_completion=False,
    no_args_is_help=True
)


def _fail(error: Exception, code: int) -> typer.Exit:
    details = format_error(error)
    logger.debug(f"Exiting with code {code}: {details}")
    console.print(f"[bold red]error:[/bold red] {escape(details['error'])}")
    return typer.Exit(code)


@contextmanager
def handle_errors() -> Iterator[None]:
    """Map toolkit exceptions to exit codes with a one-line diagnostic."""
    try:
        yield
    except OracleCapExceededError as e:
        raise _fail(e, EXIT_CAP)
    except (SamplingError, WorkerFailureError, TimerResolutionError) as e:
        raise _fail(e, EXIT_RUNTIME)
    except (MatrixFormatError, ValueError, OSError) as e:
        raise _fail(e, EXIT_USAGE)
    except DualizationError as e:
        raise _fail(e, EXIT_RUNTIME)


def _section(ctx: typer.Context, name: str) -> Dict[str, Any]:
    config = ctx.obj or {}
    return config.get(name) or {}


def _seed(seed: Optional[int]) -> int:
    if seed is None:
        seed = draw_seed()
        console.print(f"seed: {seed}")
    return seed


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"expected a comma-separated list of integers, got {text!r}")


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        output.parent.mkdir(exist_ok=True, parents=True)
        output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")


def _enum_config(ctx: typer.Context, tie_break: Optional[str], column_order: Optional[str]) -> EnumConfig:
    section = dict(_section(ctx, 'enumeration'))
    if tie_break is not None:
        section['min_row_tie_break'] = tie_break
    if column_order is not None:
        section['column_order'] = column_order
    return EnumConfig.from_config(section)


def _print_stats(stats: EnumStats) -> None:
    table = Table(title="Enumeration")
    table.add_column("Counter", style="cyan")
    table.add_column("Value", justify="right", style="green")
    for key, value in stats.model_dump().items():
        table.add_row(key, f"{value:.4f}" if isinstance(value, float) else str(value))
    console.print(table)


@app.callback()
def configure(ctx: typer.Context,
              config: Optional[Path] = typer.Option(None, "--config", help="Path to config.yaml"),
              log_level: Optional[str] = typer.Option(None, "--log-level", help="debug, info, warning, error"),
              log_dir: Optional[Path] = typer.Option(None, "--log-dir", help="Also log to a file in this directory")):
    """Load configuration and set up logging."""
    with handle_errors():
        ctx.obj = load_config(config, required=config is not None)
        section = ctx.obj.get('logging') or {}
        if log_level is None and 'LOG_LEVEL' not in os.environ:
            log_level = section.get('level')
        if log_level is not None:
            set_log_level(log_level)
        log_dir = log_dir or section.get('log_dir')
        if log_dir is not None:
            setup_file_logging(str(log_dir))


@app.command()
def gen(ctx: typer.Context,
        m: int = typer.Argument(..., help="Row count"),
        n: int = typer.Argument(..., help="Column count"),
        density: Optional[float] = typer.Option(None, help="Probability of a 1 entry"),
        forbid_zero_rows: Optional[bool] = typer.Option(None, "--forbid-zero-rows/--allow-zero-rows"),
        seed: Optional[int] = typer.Option(None, help="Random seed (drawn and printed if omitted)"),
        output: Optional[Path] = typer.Option(None, "--output", "-o")):
    """Generate a random matrix in the matrix text format."""
    section = _section(ctx, 'generator')
    with handle_errors():
        spec = GenSpec(
            m=m,
            n=n,
            density=density if density is not None else section.get('density', 0.5),
            forbid_zero_rows=(forbid_zero_rows if forbid_zero_rows is not None
                              else section.get('forbid_zero_rows', False)),
            seed=_seed(seed)
        )
        _write(format_matrix(generate_matrix(spec)), output)


@app.command("dualize")
def dualize_command(ctx: typer.Context,
                    matrix_file: Path = typer.Argument(..., help="Matrix file"),
                    subtask: Optional[int] = typer.Option(None, "--subtask", help="Only coverings with least index j"),
                    count_only: bool = typer.Option(False, "--count-only", help="Print only the covering count"),
                    stats: bool = typer.Option(False, "--stats", help="Print search counters to stderr"),
                    tie_break: Optional[str] = typer.Option(None, help="lowest or highest"),
                    column_order: Optional[str] = typer.Option(None, help="ascending or descending"),
                    output: Optional[Path] = typer.Option(None, "--output", "-o")):
    """Enumerate the irreducible coverings of a matrix."""
    with handle_errors():
        matrix = read_matrix(matrix_file)
        config = _enum_config(ctx, tie_break, column_order)
        lines: List[str] = []

        def sink(covering) -> bool:
            if not count_only:
                lines.append(format_covering(covering) + "\n")
            return True

        result = run_enumeration(matrix, sink, config, subtask=subtask)
        _write(f"{result.coverings}\n" if count_only else "".join(lines), output)
        if stats:
            _print_stats(result)


@app.command()
def oracle(ctx: typer.Context,
           matrix_file: Path = typer.Argument(..., help="Matrix file"),
           max_columns: Optional[int] = typer.Option(None, help="Refuse matrices with more columns"),
           output: Optional[Path] = typer.Option(None, "--output", "-o")):
    """Brute-force dualization, compared against RUNC-M (exit 2 on mismatch)."""
    cap = max_columns if max_columns is not None else _section(ctx, 'oracle').get('max_columns', DEFAULT_MAX_COLUMNS)
    with handle_errors():
        matrix = read_matrix(matrix_file)
        expected = brute_force_dualize(matrix, cap)
        produced = dualize(matrix, _enum_config(ctx, None, None))
        match = len(produced) == len(set(produced)) and set(produced) == expected

        text = "".join(format_covering(c) + "\n" for c in sorted(expected))
        _write(text + ("MATCH\n" if match else "MISMATCH\n"), output)
        if not match:
            missing = sorted(expected - set(produced))
            extra = sorted(set(produced) - expected)
            console.print(f"[bold red]MISMATCH[/bold red]: {len(missing)} missing, {len(extra)} extra, "
                          f"{len(produced) - len(set(produced))} duplicates")
            raise typer.Exit(EXIT_MISMATCH)


@app.command()
def estimate(ctx: typer.Context,
             matrix_file: Path = typer.Argument(..., help="Matrix file"),
             r: Optional[int] = typer.Option(None, help="Rows per submatrix (default ceil(m/2))"),
             t: Optional[int] = typer.Option(None, help="Number of submatrices"),
             u: Optional[int] = typer.Option(None, help="Coverings drawn per submatrix"),
             seed: Optional[int] = typer.Option(None, help="Random seed (drawn and printed if omitted)"),
             workers: Optional[int] = typer.Option(None, help="Processes for the submatrix dualizations"),
             output: Optional[Path] = typer.Option(None, "--output", "-o")):
    """Estimate subtask sizes f* from random row-submatrices."""
    section = dict(_section(ctx, 'estimator'))
    if workers is not None:
        section['workers'] = workers
    with handle_errors():
        matrix = read_matrix(matrix_file)
        estimator = SubtaskEstimator(section, _enum_config(ctx, None, None))
        result = estimator.estimate(matrix, _seed(seed), r=r, t=t, u=u)
        _write(result.to_dump(), output)


@app.command()
def validate(ctx: typer.Context,
             shapes: Optional[str] = typer.Option(None, help="Comma-separated shapes, e.g. 20x60,30x120"),
             r_values: Optional[str] = typer.Option(None, "--r-values", help="Comma-separated r values"),
             matrices: Optional[int] = typer.Option(None, help="Random matrices per shape"),
             t: Optional[int] = typer.Option(None),
             u: Optional[int] = typer.Option(None),
             density: Optional[float] = typer.Option(None),
             dof_mode: Optional[str] = typer.Option(None, help="support or literal"),
             seed: Optional[int] = typer.Option(None, help="Random seed (drawn and printed if omitted)"),
             output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV path (stdout if omitted)")):
    """Chi-squared validation of the estimator against exact subtask sizes."""
    section = dict(_section(ctx, 'estimator'))
    validation = dict(section.get('validation') or {})
    for key, value in (('t', t), ('u', u), ('dof_mode', dof_mode)):
        if value is not None:
            section[key] = value
    if density is not None:
        validation['density'] = density
    section['validation'] = validation

    with handle_errors():
        experiment = ValidationExperiment(section, _enum_config(ctx, None, None))
        frame = experiment.run(
            _seed(seed),
            shapes=[parse_shape(s) for s in shapes.split(",")] if shapes else None,
            r_values=_int_list(r_values) if r_values else None,
            matrices_per_shape=matrices,
            progress=True
        )
        if output is None:
            _write(frame.to_csv(index=False), None)
        else:
            save_csv(frame, output)

        layout = table1_layout(frame)
        table = Table(title="Median (Z, p-value)")
        for column in layout.columns:
            table.add_column(str(column), justify="right")
        for row in layout.itertuples(index=False):
            table.add_row(*[str(value) for value in row])
        console.print(table)


@app.command()
def schedule(ctx: typer.Context,
             estimate_file: Path = typer.Argument(..., help="Estimate dump ('j f_star_j' lines)"),
             p: int = typer.Option(..., "--p", help="Worker count"),
             strategy: Optional[str] = typer.Option(None, help="estimated, lpt, round_robin or block"),
             output: Optional[Path] = typer.Option(None, "--output", "-o")):
    """Assign subtasks to workers from estimated sizes."""
    strategy = strategy or _section(ctx, 'scheduler').get('strategy', 'estimated')
    with handle_errors():
        f_star = parse_estimate(estimate_file.read_text(encoding="utf-8"))
        result = build_schedule(strategy, p, len(f_star), f_star)
        _write(result.to_dump(), output)


@app.command()
def bench(ctx: typer.Context,
          shapes: Optional[str] = typer.Option(None, help="Comma-separated shapes, e.g. 25x60,30x80"),
          p_values: Optional[str] = typer.Option(None, "--p-values", help="Comma-separated worker counts"),
          t: Optional[int] = typer.Option(None),
          u: Optional[int] = typer.Option(None),
          r: Optional[int] = typer.Option(None, help="Rows per submatrix (default ceil(m/2))"),
          repetitions: Optional[int] = typer.Option(None),
          strategy: Optional[str] = typer.Option(None, help="estimated, lpt, exact, round_robin or block"),
          backend: Optional[str] = typer.Option(None, help="process or inline"),
          allow_oversubscribe: bool = typer.Option(False, "--allow-oversubscribe"),
          seed: Optional[int] = typer.Option(None, help="Random seed (drawn and printed if omitted)"),
          output_dir: Optional[Path] = typer.Option(None, "--output-dir", help="Directory for the CSVs")):
    """Measure speedup and efficiency over a grid of shapes and worker counts."""
    estimator_section = dict(_section(ctx, 'estimator'))
    for key, value in (('t', t), ('u', u)):
        if value is not None:
            estimator_section[key] = value
    runner_section = dict(_section(ctx, 'runner'))
    if backend is not None:
        runner_section['backend'] = backend
    if allow_oversubscribe:
        runner_section['allow_oversubscribe'] = True

    with handle_errors():
        harness = BenchmarkHarness(_section(ctx, 'benchmark'), estimator_section, runner_section,
                                   _enum_config(ctx, None, None))
        result = harness.run(
            _seed(seed),
            shapes=[parse_shape(s) for s in shapes.split(",")] if shapes else None,
            p_values=_int_list(p_values) if p_values else None,
            r=r,
            repetitions=repetitions,
            strategy=strategy
        )
        paths = result.save(output_dir or harness.output_dir)

        table = Table(title="Scaling")
        for column in ("shape", "p", "T_seconds", "S", "E"):
            table.add_column(column, justify="right")
        for row in result.summary.itertuples(index=False):
            table.add_row(row.shape, str(row.p), f"{row.T_seconds:.4f}", f"{row.S:.3f}", f"{row.E:.3f}")
        console.print(table)
        for shape in result.summary['shape'].unique():
            rows = result.summary[result.summary['shape'] == shape]
            plateau = detect_plateau(dict(zip(rows['p'], rows['T_seconds'])))
            if plateau is not None:
                console.print(f"{shape}: T(p) stops improving beyond p*={plateau}")
        console.print(f"Summary written to {paths['summary']}")


def main() -> int:
    """Entry point; usage errors exit with 1 instead of the default 2."""
    try:
        result = app(standalone_mode=False)
    except typer.Abort:
        return EXIT_USAGE
    except typer.Exit as e:
        return e.exit_code
    except Exception as e:
        # usage errors raised by the bundled click: anything that can show itself and carries an exit code
        if not (callable(getattr(e, "show", None)) and hasattr(e, "exit_code")):
            raise
        e.show()
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
