import logging
import sys
from typing import List, Optional, Sequence, Tuple

import click

from app.config import DEFAULT_HEIGHT_BOUND, DEFAULT_MAX_ORBIT_SIZE, DEFAULT_SEED, LOG_FORMAT, LOG_LEVEL
from app.errors import LatticeError
from app.formats import read_lattice_file, read_matrix_file, serialize_lattice_file
from app.reports import (
    BUILD_NAMES,
    EXIT_INVALID,
    EXIT_OK,
    build_file,
    build_inputs,
    build_report,
    certify_report,
    error_report,
    float_text,
    jscan_report,
    parse_entries,
    render,
    sp_gen_report,
    spinor_report,
)

logger = logging.getLogger(__name__)


def _finish(ctx: click.Context, code: int, text: str) -> Optional[Tuple[int, str]]:
    if ctx.obj and ctx.obj.get("capture"):
        return code, text
    click.echo(text, nl=False)
    ctx.exit(code)


def _run(ctx: click.Context, command: str, inputs: dict, runner) -> Optional[Tuple[int, str]]:
    try:
        code, report = runner()
    except LatticeError as e:
        logger.error(f"{command} failed: {e}")
        return _finish(ctx, EXIT_INVALID, render(error_report(command, inputs, e)))
    return _finish(ctx, code, render(report))


@click.group()
@click.option("--log-level", default=LOG_LEVEL, show_default=True, help="Logging level (written to stderr)")
@click.pass_context
def cli(ctx: click.Context, log_level: str):
    """Lattice, monodromy and j-family checks for elliptic surfaces."""
    logging.basicConfig(level=log_level.upper(), format=LOG_FORMAT, stream=sys.stderr)
    ctx.ensure_object(dict)


@cli.command()
@click.argument("name", type=click.Choice(BUILD_NAMES))
@click.option("--entries", default=None, help='Diagonal entries, e.g. "-2,0,0"')
@click.option("--q", "q", default=1, show_default=True, type=int)
@click.option("--g", "g", default=0, show_default=True, type=int)
@click.option("--chi", default=1, show_default=True, type=int)
@click.option("--report", "as_report", is_flag=True, help="Write a JSON report instead of the lattice file")
@click.pass_context
def build(ctx, name, entries, q, g, chi, as_report):
    """Build a named lattice with its distinguished vectors."""
    inputs = {"name": name}
    try:
        values = parse_entries(entries) if entries else None
        inputs = build_inputs(name, values, q, g, chi)
        if as_report:
            code, report = build_report(name, entries=values, q=q, g=g, chi=chi)
            return _finish(ctx, code, render(report))
        lf, label = build_file(name, entries=values, q=q, g=g, chi=chi)
    except LatticeError as e:
        logger.error(f"build failed: {e}")
        return _finish(ctx, EXIT_INVALID, render(error_report("build", inputs, e)))
    return _finish(ctx, EXIT_OK, serialize_lattice_file(lf, comment=label))


@cli.command()
@click.argument("source", type=click.File("r"))
@click.option("--height", default=DEFAULT_HEIGHT_BOUND, show_default=True, type=int)
@click.option("--max-size", default=DEFAULT_MAX_ORBIT_SIZE, show_default=True, type=int)
@click.pass_context
def certify(ctx, source, height, max_size):
    """Check the complete-vanishing-lattice conditions for the seeds in SOURCE ("-" for stdin)."""
    text = source.read()
    inputs = {"height": height, "max_size": max_size}
    return _run(ctx, "certify", inputs, lambda: certify_report(read_lattice_file(text), height, max_size))


@cli.command()
@click.argument("source", type=click.File("r"))
@click.option("--matrix", "matrix_source", required=True, type=click.File("r"))
@click.pass_context
def spinor(ctx, source, matrix_source):
    """Spinor norm of a matrix, and O'_f membership when SOURCE marks a vector f."""
    text, matrix_text = source.read(), matrix_source.read()
    return _run(
        ctx,
        "spinor",
        {},
        lambda: spinor_report(read_lattice_file(text), read_matrix_file(matrix_text)),
    )


@cli.command("sp-gen")
@click.option("--q", "q", required=True, type=int)
@click.option("--p", "p", required=True, type=int)
@click.option("--sums/--no-sums", default=True, show_default=True, help="Include transvections in a_i + a_(i+1)")
@click.pass_context
def sp_gen(ctx, q, p, sums):
    """Order of the transvection group mod p against |Sp(2q, F_p)|."""
    inputs = {"q": q, "p": p, "with_sums": sums}
    return _run(ctx, "sp-gen", inputs, lambda: sp_gen_report(q, p, with_sums=sums))


@cli.command()
@click.option("--chi", required=True, type=int)
@click.option("--radius", required=True, type=float)
@click.option("--samples", required=True, type=int)
@click.option("--seed", default=DEFAULT_SEED, show_default=True, type=int)
@click.option("--csv", "csv", default=None, help="Write one row per sample to this CSV file")
@click.pass_context
def jscan(ctx, chi, radius, samples, seed, csv):
    """Sample the j-family over a polydisc of parameters."""
    inputs = {"chi": chi, "radius": float_text(radius), "samples": samples, "seed": seed}
    return _run(ctx, "jscan", inputs, lambda: jscan_report(chi, radius, samples, seed, csv=csv))


def run_command(argv: Sequence[str]) -> Tuple[int, str]:
    """Run one command and return (exit code, standard output text)."""
    try:
        outcome = cli.main(args=list(argv), prog_name="ellmono", standalone_mode=False, obj={"capture": True})
    except click.ClickException as e:
        return EXIT_INVALID, e.format_message() + "\n"
    if isinstance(outcome, tuple):
        return outcome
    # --help and similar print directly and return nothing
    return EXIT_OK, ""


if __name__ == "__main__":
    cli()
