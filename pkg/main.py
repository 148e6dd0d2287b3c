import logging
import os
import sys
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from dotenv import load_dotenv

from nestcat.core.errors import NestcatError
from nestcat.harness.config import describe_error, load_code_description, load_experiment
from nestcat.harness.manager import run_experiment, save_summary, verify_description
from nestcat.harness.serializer import TrialSerializer, render_summary
from nestcat.side_info.bounds import bound_table

load_dotenv()

app = typer.Typer(help="Nested concatenated codes for side-information coding.", no_args_is_help=True)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


class BoundKind(str, Enum):
    gp = "gp"
    wz = "wz"


@app.callback()
def setup() -> None:
    logging.basicConfig(
        level=os.getenv("NESTCAT_LOG_LEVEL", "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _fail(exc: NestcatError) -> None:
    typer.echo(describe_error(exc), err=True)
    raise typer.Exit(EXIT_ERROR)


@app.command()
def verify(config: Path = typer.Option(..., "--config", help="Code description (INI).")) -> None:
    """Check the nested-code clauses and, with [concat], preservation under concatenation."""
    try:
        reports = verify_description(load_code_description(config))
    except NestcatError as exc:
        _fail(exc)
    for report in reports:
        typer.echo(report.render())
    if not all(r.passed for r in reports):
        raise typer.Exit(EXIT_FAILED)


@app.command()
def bounds(
    problem: BoundKind = typer.Argument(..., help="gp (weight W) or wz (distortion D)."),
    p: float = typer.Option(..., "--p", help="Crossover probability in [0, 1/2)."),
    points: int = typer.Option(101, "--points", min=2),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Raw curve and convex envelope on an even grid over [0, 1/2]."""
    try:
        rows = bound_table(problem.value, p, points)
    except NestcatError as exc:
        _fail(exc)
    fh = out.open("w", newline="") if out else sys.stdout
    try:
        writer = TrialSerializer.writer(fh)
        writer.writerow(("x", "raw_curve", "envelope"))
        writer.writerows([TrialSerializer.format_value(v) for v in row] for row in rows)
    finally:
        if out:
            fh.close()


@app.command()
def run(
    config: Path = typer.Option(..., "--config", help="Experiment config (INI)."),
    seed: Optional[int] = typer.Option(None, "--seed", min=0),
    trials: Optional[int] = typer.Option(None, "--trials", min=1),
    out: Optional[Path] = typer.Option(None, "--out", help="Trial CSV; defaults to [experiment] output."),
) -> None:
    """Monte-Carlo trials of a CCSI or SCSI experiment; trial CSV plus a summary."""
    try:
        cfg = load_experiment(config)
        target = out or (Path(cfg.experiment.output) if cfg.experiment.output else None)
        if target is None:
            summary = run_experiment(cfg, sys.stdout, trials=trials, seed=seed)
        else:
            target.parent.mkdir(parents=True, exist_ok=True)
            with target.open("w", newline="") as fh:
                summary = run_experiment(cfg, fh, trials=trials, seed=seed)
            save_summary(summary, target)
    except NestcatError as exc:
        _fail(exc)
    # stdout carries the trial CSV when there is no target file
    typer.echo(render_summary(summary), err=target is None)


if __name__ == "__main__":
    app()
