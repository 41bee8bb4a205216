#!/usr/bin/env python3
"""
Walk Search CLI
Run spatial-search experiments with the staggered Dirac walk, tune s, fit
scaling laws and compare against the published tables
"""

import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

# Add parent directory to path to import walksearch modules
sys.path.append(str(Path(__file__).parent.parent))

from walksearch.config import Settings, configure_logging, current_settings, load_settings
from walksearch.evolve import WalkParams, peak_snapshot, return_amplitude, run_search
from walksearch.exceptions import ContractViolation, FitError, NoPeakError
from walksearch.experiment import (
    FitConfig,
    ReproduceConfig,
    ReturnAmpConfig,
    ScanConfig,
    SearchConfig,
    parse_marked,
)
from walksearch.export import (
    RETURN_AMP_FIELDS,
    SCAN_FIELDS,
    SNAPSHOT_FIELDS,
    TRACE_FIELDS,
    append_result,
    format_value,
    read_samples,
    write_csv,
    write_json,
)
from walksearch.fitting import (
    FitResult,
    ScalingRow,
    ScalingSample,
    fit_dimension_scaling,
    fit_queries_vs_inverse_d_at_fixed_L,
    fit_ratio_vs_inverse_d,
    scaling_table,
    select,
)
from walksearch.kernels import set_threads
from walksearch.reproduce import reproduce as run_reproduction
from walksearch.tune import scan_return_amplitude, scan_s, theta

app = typer.Typer(help="Quantum spatial search with the staggered Dirac walk")
console = Console()

EXIT_USAGE = 1
EXIT_CONTRACT = 2


def prepare(log_level: Optional[str], threads: Optional[int]) -> Settings:
    """Load settings, install logging and size the block-level thread pool"""
    try:
        settings = current_settings()
    except ValidationError as e:
        console.print(f"[red]Error: invalid WALKSEARCH_* environment: {escape(str(e))}[/red]")
        raise typer.Exit(EXIT_USAGE)
    configure_logging(log_level or settings.log_level)
    set_threads(threads or settings.threads)
    return settings


def build_config(factory: Callable, **kwargs):
    """Validate command flags; invalid values are a usage error"""
    try:
        return factory(**kwargs)
    except (ValidationError, ValueError) as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]")
        raise typer.Exit(EXIT_USAGE)


def contract_failure(e: Exception) -> typer.Exit:
    console.print(f"[red]Error: {escape(str(e))}[/red]")
    return typer.Exit(EXIT_CONTRACT)


def marked_option(values: Optional[List[str]]) -> list:
    try:
        return parse_marked(values or [])
    except ValueError as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]")
        raise typer.Exit(EXIT_USAGE)


def fit_table(title: str, fits: List[FitResult]) -> Table:
    table = Table(title=title)
    table.add_column("Fit", style="cyan")
    table.add_column("Intercept", style="magenta")
    table.add_column("Slope", style="magenta")
    table.add_column("RMS", style="green")
    table.add_column("Points")
    for fit in fits:
        label = " ".join(f"{k}={v}" for k, v in fit.labels.items())
        table.add_row(label, f"{fit.intercept:.4f}", f"{fit.slope:.4f}", f"{fit.rms:.3g}", str(fit.n))
    return table


@app.command()
def search(
    d: int = typer.Option(..., "--d", "-d", help="Lattice dimension"),
    L: int = typer.Option(..., "--L", "-L", help="Lattice side (even, >= 4)"),
    t1: int = typer.Option(3, "--t1", help="Walk steps per oracle query"),
    s: float = typer.Option(..., "--s", help="Mixing amplitude s in [0, 1]"),
    marked: Optional[List[str]] = typer.Option(
        None, "--marked", "-m", help="Marked vertex as x1,...,xd (repeatable; default origin)"
    ),
    max_queries: Optional[int] = typer.Option(
        None, "--max-queries", help="Query budget (default ceil(3 sqrt(N)))"
    ),
    trace: Optional[Path] = typer.Option(None, "--trace", help="Trace CSV (t2,prob,norm_err)"),
    summary: Optional[Path] = typer.Option(None, "--summary", help="Summary JSON"),
    append_results: Optional[Path] = typer.Option(
        None, "--append-results", help="Append a d,L,s,t1,P,t2 row for the fit command"
    ),
    snapshot: Optional[Path] = typer.Option(
        None, "--snapshot", help="Probability on the x1-x2 plane at the peak (x1,x2,prob)"
    ),
    threads: Optional[int] = typer.Option(None, "--threads", help="Block-level threads"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
):
    """Run the search iteration [W^t1 R]^t2 and report the first peak"""
    settings = prepare(log_level, threads)
    config = build_config(
        SearchConfig,
        d=d,
        L=L,
        t1=t1,
        s=s,
        marked=marked_option(marked),
        max_queries=max_queries,
        threads=threads,
        trace=trace or settings.output_dir / "trace.csv",
        summary=summary or settings.output_dir / "summary.json",
        append_results=append_results,
        snapshot=snapshot,
    )
    cfg = config.lattice
    console.print(f"[cyan]Searching d={d} L={L} (N={cfg.N}) s={s} t1={t1}[/cyan]")

    try:
        result, outcome = run_search(cfg, config.params, config.marked_set, config.stop)
    except ContractViolation as e:
        raise contract_failure(e)

    write_csv(config.trace, TRACE_FIELDS, result.rows())
    peak = outcome.peak
    write_json(
        config.summary,
        {
            "config": config.model_dump(mode="json"),
            "d": d,
            "L": L,
            "s": s,
            "t1": t1,
            "marked": [list(x) for x in config.marked],
            "P": peak.P,
            "t2": peak.t2,
            "effective_queries": outcome.effective_queries,
            "valid": peak.valid,
            "queries_run": outcome.queries_run,
            "per_vertex": [
                {"marked": list(x), "P": p.P, "t2": p.t2, "valid": p.valid}
                for x, p in zip(config.marked, outcome.per_vertex)
            ],
        },
    )

    if peak.valid and append_results:
        append_result(append_results, ScalingSample(d, L, s, t1, peak.P, peak.t2))
    if snapshot:
        if not peak.valid:
            console.print("[yellow]No confirmed peak; snapshot skipped.[/yellow]")
        elif d < 2:
            console.print("[yellow]Snapshots need d >= 2; skipped.[/yellow]")
        else:
            rows = peak_snapshot(cfg, config.params, config.marked_set, peak.t2)
            write_csv(snapshot, SNAPSHOT_FIELDS, rows)

    if not peak.valid:
        console.print(f"[yellow]No confirmed peak within {outcome.queries_run} queries.[/yellow]")

    table = Table(title="Search Outcome")
    table.add_column("Marked", style="cyan")
    table.add_column("P", style="magenta")
    table.add_column("t2", style="magenta")
    table.add_column("Valid", style="green")
    for coords, p in zip(config.marked, outcome.per_vertex):
        table.add_row(str(tuple(coords)), format_value(p.P), str(p.t2), str(p.valid))
    console.print(table)
    if outcome.effective_queries is not None:
        console.print(f"Effective queries t2/sqrt(P): {outcome.effective_queries:.2f}")
    console.print(f"[green]✓ Trace written to {config.trace}[/green]")


@app.command("scan-s")
def scan_s_command(
    d: int = typer.Option(..., "--d", "-d", help="Lattice dimension"),
    L: int = typer.Option(..., "--L", "-L", help="Lattice side (even, >= 4)"),
    t1: int = typer.Option(3, "--t1", help="Walk steps per oracle query"),
    s_lo: float = typer.Option(0.05, "--s-lo", help="Lower end of the s grid"),
    s_hi: float = typer.Option(1.0, "--s-hi", help="Upper end of the s grid"),
    step: float = typer.Option(0.05, "--step", help="Coarse grid step"),
    marked: Optional[List[str]] = typer.Option(None, "--marked", "-m", help="Marked vertex x1,...,xd"),
    max_queries: Optional[int] = typer.Option(None, "--max-queries", help="Query budget per point"),
    workers: int = typer.Option(1, "--workers", help="Grid points evaluated in parallel processes"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Scan CSV (s,P,t2,theta)"),
    summary: Optional[Path] = typer.Option(None, "--summary", help="Best-point JSON"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Block-level threads"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
):
    """Scan s for the largest first-cycle peak probability"""
    settings = prepare(log_level, threads)
    config = build_config(
        ScanConfig,
        d=d,
        L=L,
        t1=t1,
        s_lo=s_lo,
        s_hi=s_hi,
        step=step,
        marked=marked_option(marked),
        max_queries=max_queries,
        workers=workers,
        threads=threads,
        output=output or settings.output_dir / "scan.csv",
        summary=summary or settings.output_dir / "scan_summary.json",
    )
    console.print(f"[cyan]Scanning s in [{s_lo}, {s_hi}] for d={d} L={L} t1={t1}[/cyan]")

    try:
        result = scan_s(
            config.lattice,
            t1,
            config.marked_set,
            s_lo,
            s_hi,
            step,
            max_queries=max_queries,
            workers=workers,
        )
    except NoPeakError as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]")
        raise typer.Exit(EXIT_USAGE)
    except ContractViolation as e:
        raise contract_failure(e)

    write_csv(config.output, SCAN_FIELDS, result.rows())
    write_json(
        config.summary,
        {
            "config": config.model_dump(mode="json"),
            "s": result.best_s,
            "P": result.best.P,
            "t2": result.best.t2,
            "theta": result.theta,
            "points": len(result.samples),
        },
    )

    table = Table(title="Best Point")
    table.add_column("s", style="cyan")
    table.add_column("P", style="magenta")
    table.add_column("t2", style="magenta")
    table.add_column("theta", style="green")
    table.add_row(
        f"{result.best_s:.4f}", format_value(result.best.P), str(result.best.t2), f"{result.theta:.3f}"
    )
    console.print(table)
    console.print(f"[green]✓ {len(result.samples)} grid points written to {config.output}[/green]")


@app.command("return-amp")
def return_amp_command(
    d: int = typer.Option(..., "--d", "-d", help="Lattice dimension"),
    L: int = typer.Option(..., "--L", "-L", help="Lattice side (even, >= 4)"),
    t1: int = typer.Option(3, "--t1", help="Walk steps"),
    s: Optional[float] = typer.Option(None, "--s", help="Single mixing amplitude"),
    s_lo: Optional[float] = typer.Option(None, "--s-lo", help="Lower end of the s grid"),
    s_hi: Optional[float] = typer.Option(None, "--s-hi", help="Upper end of the s grid"),
    step: Optional[float] = typer.Option(None, "--step", help="Coarse grid step"),
    start: Optional[str] = typer.Option(None, "--start", help="Start vertex x1,...,xd (default origin)"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Scan CSV (s,A,theta)"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Block-level threads"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
):
    """Return amplitude A(t1) for one s, or its minimum over an s grid"""
    settings = prepare(log_level, threads)
    start_coords = marked_option([start])[0] if start else None
    config = build_config(
        ReturnAmpConfig,
        d=d,
        L=L,
        t1=t1,
        s=s,
        s_lo=s_lo,
        s_hi=s_hi,
        step=step,
        start=start_coords,
        threads=threads,
        output=output,
    )
    cfg = config.lattice

    try:
        if not config.is_scan:
            origin = config.start or (0,) * d
            amp = return_amplitude(cfg, WalkParams(s=s, t1=t1), origin)
            console.print(f"A({t1}) = {format_value(amp)} at s={s} (theta={theta(s, t1):.3f})")
            return
        result = scan_return_amplitude(cfg, t1, s_lo, s_hi, step)
    except ContractViolation as e:
        raise contract_failure(e)

    target = config.output or settings.output_dir / "return_amp.csv"
    write_csv(target, RETURN_AMP_FIELDS, result.rows())
    console.print(
        f"Minimum A({t1}) = {format_value(result.A_min)} at s={result.s_min:.4f} "
        f"(theta={theta(result.s_min, t1):.3f})"
    )
    console.print(f"[green]✓ {len(result.samples)} grid points written to {target}[/green]")


def dimension_fits(model: str, rows: List[ScalingRow]) -> List[FitResult]:
    """Fits across dimensions, one batch per (s, t1) tuning"""
    groups: Dict[tuple, List[ScalingRow]] = {}
    for row in rows:
        groups.setdefault((round(row.s, 6), row.t1), []).append(row)

    fits = []
    for (s_key, t1_key), group in sorted(groups.items()):
        if model == "log2-d":
            fits.append(
                fit_dimension_scaling({r.d: r.a1 for r in group}, quantity="a1", s=s_key, t1=t1_key)
            )
            fits.append(
                fit_dimension_scaling({r.d: r.a2 for r in group}, quantity="a2", s=s_key, t1=t1_key)
            )
        else:
            fits.append(fit_ratio_vs_inverse_d({r.d: r.ratio for r in group}, s=s_key, t1=t1_key))
    return fits


def scaling_rows_table(rows: List[ScalingRow]) -> Table:
    table = Table(title="Finite-Size Fits")
    for column in ("t1", "d", "L", "a1", "b1", "a2", "b2", "a2/sqrt(a1)", "vs pi/4"):
        table.add_column(column, style="cyan" if column in ("t1", "d") else "magenta")
    for row in rows:
        table.add_row(
            str(row.t1),
            str(row.d),
            " ".join(map(str, row.sides)),
            f"{row.a1:.4f}",
            "---" if row.b1 is None else f"{row.b1:.4f}",
            f"{row.a2:.4f}",
            "---" if row.b2 is None else f"{row.b2:.4f}",
            f"{row.ratio:.3f}",
            f"{row.grover_excess:+.1%}",
        )
    return table


@app.command()
def fit(
    input: Path = typer.Option(..., "--input", "-i", help="Results CSV with d,L,s,t1,P,t2"),
    model: str = typer.Option(
        "inverse-L", "--model", help="inverse-L, log2-d, inverse-d or fixed-L"
    ),
    d: Optional[int] = typer.Option(None, "--d", "-d", help="Select one dimension"),
    t1: Optional[int] = typer.Option(None, "--t1", help="Select one t1"),
    s: Optional[float] = typer.Option(None, "--s", help="Select one s"),
    L: Optional[int] = typer.Option(None, "--L", "-L", help="Lattice side (fixed-L model)"),
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="Fit report (.csv or .json)"
    ),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
):
    """Least-squares scaling fits over collected search results"""
    prepare(log_level, None)
    config = build_config(
        FitConfig, input=input, model=model, d=d, t1=t1, s=s, L=L, output=output
    )

    try:
        samples = select(read_samples(config.input), d=d, t1=t1, s=s)
        if config.model == "fixed-L":
            fits = [fit_queries_vs_inverse_d_at_fixed_L(samples, L, t1, s)]
        else:
            rows = scaling_table(samples)
            fits = [] if config.model == "inverse-L" else dimension_fits(config.model, rows)
    except (FitError, ValueError) as e:
        console.print(f"[red]Error: {escape(str(e))}[/red]")
        raise typer.Exit(EXIT_USAGE)

    if config.model == "inverse-L":
        if not rows:
            console.print("[red]Error: no (s, t1, d) group has two usable lattice sizes[/red]")
            raise typer.Exit(EXIT_USAGE)
        report = [row.as_row() for row in rows]
        console.print(scaling_rows_table(rows))
    else:
        report = [f.as_row() for f in fits]
        console.print(fit_table(f"Fits ({config.model})", fits))

    if config.output:
        if config.output.suffix == ".csv":
            fieldnames: List[str] = []
            for row in report:
                fieldnames.extend(k for k in row if k not in fieldnames)
            write_csv(config.output, fieldnames, report)
        else:
            write_json(config.output, {"config": config.model_dump(mode="json"), "fits": report})
        console.print(f"[green]✓ Fit report written to {config.output}[/green]")


@app.command()
def reproduce(
    table: int = typer.Option(..., "--table", "-t", help="Published table: 1, 2, 3 or 5"),
    t1: Optional[int] = typer.Option(None, "--t1", help="Only rows with this t1"),
    full: bool = typer.Option(False, "--full", help="Lift the desk-scale size cap"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Comparison CSV"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Block-level threads"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level"),
):
    """Rerun a published experiment and compare value by value"""
    prepare(log_level, threads)
    config = build_config(ReproduceConfig, table=table, t1=t1, full=full, threads=threads, output=output)
    console.print(f"[cyan]Reproducing table {config.table}{' (full)' if full else ''}[/cyan]")

    try:
        report = run_reproduction(config.table, t1=config.t1, full=config.full)
    except ContractViolation as e:
        raise contract_failure(e)

    summary = Table(title=f"Table {config.table} Comparison")
    summary.add_column("Case", style="cyan")
    summary.add_column("Quantity")
    summary.add_column("Published", style="magenta")
    summary.add_column("Computed", style="magenta")
    summary.add_column("Tolerance")
    summary.add_column("Pass")
    for row in report.rows:
        summary.add_row(
            row.case,
            row.quantity,
            format_value(row.published),
            format_value(row.computed),
            row.as_row()["tolerance"],
            "[green]✓[/green]" if row.passed else "[red]✗[/red]",
        )
    console.print(summary)

    if config.output:
        rows = [row.as_row() for row in report.rows]
        write_csv(config.output, list(rows[0]) if rows else ["table"], rows)
        console.print(f"[green]✓ Comparison written to {config.output}[/green]")
    passed = sum(row.passed for row in report.rows)
    colour = "green" if report.passed else "yellow"
    console.print(f"[{colour}]{passed}/{len(report.rows)} values within tolerance[/{colour}]")


@app.command()
def init():
    """Write a .env file with the WALKSEARCH_* settings"""
    console.print("[cyan]Initializing walk-search settings...[/cyan]")

    env_path = Path(".env")
    if env_path.exists():
        overwrite = typer.confirm("An .env file already exists. Overwrite?")
        if not overwrite:
            raise typer.Exit(0)

    output_dir = typer.prompt("Directory for results", default="results")
    threads = typer.prompt("Block-level threads (blank for all cores)", default="", show_default=False)
    log_level = typer.prompt("Log level", default="INFO")

    with open(env_path, "w") as f:
        f.write(f"WALKSEARCH_OUTPUT_DIR={output_dir}\n")
        if threads.strip():
            f.write(f"WALKSEARCH_THREADS={threads.strip()}\n")
        f.write(f"WALKSEARCH_LOG_LEVEL={log_level.upper()}\n")
        f.write("# WALKSEARCH_DENSE_LIMIT=4096\n")

    try:
        load_settings(env_path)
    except ValidationError as e:
        console.print(f"[red]Error: the new .env is invalid: {escape(str(e))}[/red]")
        raise typer.Exit(EXIT_USAGE)

    Path(output_dir).mkdir(parents=True, exist_ok=True)

    console.print(f"\n[green]✓ Initialization complete![/green]")
    console.print(f"  - Created .env with output directory {output_dir}")
    console.print(f"\nNext steps:")
    console.print(f"  1. Run [cyan]walk-search search --d 3 --L 32 --s 0.7015[/cyan]")
    console.print(f"  2. Run [cyan]walk-search reproduce --table 1 --t1 3[/cyan]")


def main() -> None:
    """Console entry point; click usage errors exit with status 1"""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        console.print("[red]Aborted.[/red]")
        sys.exit(EXIT_USAGE)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()
