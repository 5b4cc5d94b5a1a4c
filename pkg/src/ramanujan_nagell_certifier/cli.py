"""Command-line front end: ``rnc <subcommand> ...``.

Exit codes: 0 for ``NoSolutions`` or a finished computation, 1 for
``Inconclusive`` (or a failed replay), 2 for usage errors and rejected
inputs, 3 when a work budget ran out.
"""

import csv
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

import click

from ramanujan_nagell_certifier.certificate import Certificate, Rule, Status
from ramanujan_nagell_certifier.constants import SUPPORTED_Y
from ramanujan_nagell_certifier.engine import (
    SWEEP_COLUMNS,
    Verdict,
    analyze_both,
    brute_force,
    density_sweep,
    replay_certificate,
    sweep,
)
from ramanujan_nagell_certifier.engine import analyze as analyze_verdict
from ramanujan_nagell_certifier.errors import BudgetExceededError
from ramanujan_nagell_certifier.intpoly import IntPolynomial
from ramanujan_nagell_certifier.limits import Limits
from ramanujan_nagell_certifier.normrep import enumerate_fundamental, height_bound
from ramanujan_nagell_certifier.pell import least_solution
from ramanujan_nagell_certifier.qforms import class_number
from ramanujan_nagell_certifier.sandwich import decide_no_solutions

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

RULE_TITLES = {
    Rule.EVEN_Z_EXCLUDED: "Even-z exclusion (square sandwich fixtures)",
    Rule.JACOBI_DIVISOR: "Divisor criterion (p | 2k - 1, p = 3, 5 mod 8)",
    Rule.SQUARE_K: "Square criterion (k = l^2, odd z)",
    Rule.CLASS_NUMBER: "Class number h(4k) and admissible Z1",
    Rule.PELL_LEAST: "Least solution of U^2 - kV^2 = 1",
    Rule.FUNDAMENTAL_SET: "Fundamental solutions of X^2 - kY^2 = 1 - 2k",
    Rule.CONGRUENCE_ELIM: "Congruence elimination (V mod p)",
    Rule.STRUCTURE_ONLY: "Structure constraints (undecided)",
}


def decimal(value: Fraction, places: int = 6) -> str:
    """Render a nonnegative fraction with ``places`` decimals, rounding half up."""
    scale = 10**places
    scaled = (2 * value.numerator * scale + value.denominator) // (
        2 * value.denominator
    )
    whole, fraction = divmod(scaled, scale)
    return f"{whole}.{fraction:0{places}d}"


def _limits(ctx: click.Context) -> Limits:
    return ctx.obj


def _exit_code(verdicts: Sequence[Verdict]) -> int:
    if any(v.budget_exceeded for v in verdicts if v.status == Status.INCONCLUSIVE):
        return EXIT_BUDGET
    if any(v.status == Status.INCONCLUSIVE for v in verdicts):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _echo_verdict(verdict: Verdict) -> None:
    click.echo(f"k={verdict.k}, y={verdict.y}: {verdict.status}")
    for step in verdict.certificate.steps:
        click.echo(f"  {RULE_TITLES[step.rule]} [{step.rule}]")
        for key, value in step.inputs.items():
            click.echo(f"    input {key} = {value}")
        for key, value in step.constants.items():
            click.echo(f"    {key} = {json.dumps(value, ensure_ascii=False)}")
    for x, y, z in verdict.solutions:
        click.echo(f"  solution x={x}, y={y}, z={z}")
    for line in verdict.certificate.diagnostics:
        click.echo(f"  diagnostic: {line}")


@click.group()
@click.option("--threads", type=click.IntRange(min=1), default=1, help="Worker threads")
@click.option(
    "--trial-limit",
    type=click.IntRange(min=2),
    default=None,
    help="Largest trial divisor before Pollard rho",
)
@click.option(
    "--rho-iterations",
    type=click.IntRange(min=1),
    default=None,
    help="Iterations per Pollard rho attempt",
)
@click.option("--verbose", "-v", is_flag=True, default=False, help="Debug logging")
@click.pass_context
def cli(
    ctx: click.Context,
    threads: int,
    trial_limit: int | None,
    rho_iterations: int | None,
    *,
    verbose: bool,
) -> None:
    """Certify x^2 + (2k-1)^y = k^z for y in {3, 5}."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    overrides: dict[str, int] = {"threads": threads}
    if trial_limit is not None:
        overrides["trial_division_limit"] = trial_limit
    if rho_iterations is not None:
        overrides["rho_iterations"] = rho_iterations
    ctx.obj = Limits(**overrides)


@cli.command()
@click.option("--k", "k", type=int, required=True, help="The base k > 1")
@click.option(
    "--y",
    "y",
    type=click.Choice(["3", "5", "both"]),
    default="both",
    help="Exponent of 2k-1",
)
@click.option("--json", "as_json", is_flag=True, default=False, help="Emit JSON")
@click.option("--zmax", type=click.IntRange(min=1), default=None, help="Oracle bound")
@click.pass_context
def analyze(
    ctx: click.Context,
    k: int,
    y: str,
    zmax: int | None,
    *,
    as_json: bool,
) -> int:
    """Run the decision pipeline and print the certificate."""
    limits = _limits(ctx)
    if y == "both":
        verdicts = analyze_both(k, z_max=zmax, limits=limits)
    else:
        verdicts = (analyze_verdict(k, int(y), z_max=zmax, limits=limits),)

    if as_json:
        if len(verdicts) == 1:
            click.echo(verdicts[0].certificate.to_json())
        else:
            payload = [v.certificate.model_dump(mode="json") for v in verdicts]
            text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)
            click.echo(text)
    else:
        for verdict in verdicts:
            _echo_verdict(verdict)
    return _exit_code(verdicts)


@cli.command()
@click.option("--k", "k", type=int, required=True, help="The base k > 1")
@click.option("--y", "y", type=click.IntRange(min=1), required=True, help="Exponent")
@click.option("--zmax", type=click.IntRange(min=1), required=True, help="Largest z")
def verify(k: int, y: int, zmax: int) -> int:
    """Brute-force search for solutions with z <= zmax."""
    solutions = brute_force(k, y, zmax)
    click.echo(f"k={k}, y={y}, z<={zmax}: {len(solutions)} solution(s)")
    for x, z in solutions:
        click.echo(f"  x={x}, z={z}")
    return EXIT_OK


@cli.command("sweep")
@click.option("--from", "k_from", type=int, required=True, help="First k")
@click.option("--to", "k_to", type=int, required=True, help="Last k")
@click.option(
    "--y",
    "y",
    type=click.Choice(["3", "5", "both"]),
    default="both",
    help="Exponent of 2k-1",
)
@click.option("--zmax", type=click.IntRange(min=1), default=None, help="Oracle bound")
@click.option(
    "--csv",
    "csv_path",
    type=click.Path(dir_okay=False, writable=True, path_type=Path),
    default=None,
    help="Write rows to this CSV file",
)
@click.pass_context
def sweep_command(
    ctx: click.Context,
    k_from: int,
    k_to: int,
    y: str,
    zmax: int | None,
    csv_path: Path | None,
) -> int:
    """Analyze a range of k and summarize the verdicts."""
    ys = SUPPORTED_Y if y == "both" else (int(y),)
    rows = sweep(k_from, k_to, ys, z_max=zmax, limits=_limits(ctx))

    if csv_path is not None:
        with csv_path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(SWEEP_COLUMNS)
            writer.writerows(row.csv_row() for row in rows)

    counts = {status: 0 for status in Status}
    for row in rows:
        counts[row.status] += 1
    click.echo(", ".join(f"{status}: {count}" for status, count in counts.items()))

    conflicts = [row for row in rows if row.conflict]
    if conflicts:
        pairs = ", ".join(f"(k={row.k}, y={row.y})" for row in conflicts)
        msg = f"Brute-force witnesses contradict NoSolutions for {pairs}"
        raise click.ClickException(msg)
    return EXIT_OK


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Sweep bound")
@click.pass_context
def density(ctx: click.Context, n: int) -> int:
    """Share of k <= n whose 2k-1 has a prime factor 3 or 5 mod 8."""
    report = density_sweep(n, limits=_limits(ctx))
    click.echo(f"N = {report.n}")
    click.echo(f"N0 = {report.n0}")
    click.echo(f"ratio = {report.ratio} ~ {decimal(report.ratio)}")
    click.echo(f"unknown = {len(report.unknown)}")
    for prefix, ratio in report.prefix_ratios.items():
        click.echo(f"  ratio at {prefix} = {decimal(ratio)}")
    click.echo(f"monotone = {str(report.monotone).lower()}")
    click.echo(
        f"partial product (p <= {report.prime_cutoff}) = "
        f"{decimal(report.partial_product)}",
    )
    return EXIT_OK


@cli.command()
@click.option(
    "--coeffs",
    required=True,
    help="Comma-separated coefficients of F, constant term first",
)
@click.pass_context
def sandwich(ctx: click.Context, coeffs: str) -> int:
    """Decide X^2 = F(Y) with the square-sandwich criterion."""
    verdict = decide_no_solutions(IntPolynomial.parse(coeffs), limits=_limits(ctx))
    click.echo(f"F = {verdict.polynomial}")
    if verdict.threshold is None:
        click.echo(f"inapplicable: {verdict.reason}")
        return EXIT_INCONCLUSIVE
    threshold = verdict.threshold
    click.echo(f"G = {threshold.g}")
    click.echo(f"R = {threshold.r}")
    click.echo(f"branch = {threshold.branch}")
    click.echo(f"thresholds = {list(threshold.components)}, Y0 = {threshold.y0}")
    click.echo(f"scanned Y <= {verdict.scanned_max}")
    for x, y in verdict.solutions_found:
        click.echo(f"  solution X={x}, Y={y}")
    return EXIT_OK


@cli.command()
@click.option("--d", "d", type=int, required=True, help="Nonsquare D >= 2")
@click.pass_context
def pell(ctx: click.Context, d: int) -> int:
    """Least solution of U^2 - D*V^2 = 1."""
    solution = least_solution(d, limits=_limits(ctx))
    click.echo(f"D = {d}")
    click.echo(f"sqrt(D) = [{solution.a0}; {', '.join(map(str, solution.cf_period))}]")
    click.echo(f"(U1, V1) = ({solution.u1}, {solution.v1})")
    return EXIT_OK


@cli.command("classnumber")
@click.option("--disc", type=int, required=True, help="Positive nonsquare discriminant")
@click.option("--cycles", is_flag=True, default=False, help="Print the cycles")
@click.pass_context
def class_number_command(ctx: click.Context, disc: int, *, cycles: bool) -> int:
    """Class number of indefinite forms of a discriminant."""
    data = class_number(disc, limits=_limits(ctx))
    click.echo(f"discriminant = {data.discriminant}")
    click.echo(f"h = {data.h}")
    click.echo(f"narrow = {data.narrow}")
    if cycles:
        for index, cycle in enumerate(data.cycles, start=1):
            forms = " -> ".join(str(form.as_tuple()) for form in cycle)
            click.echo(f"  cycle {index}: {forms}")
    return EXIT_OK


@cli.command()
@click.option("--d", "d", type=int, required=True, help="Nonsquare D >= 2")
@click.option("--K", "big_k", type=int, required=True, help="Odd K with |K| > 1")
@click.option("--z1", type=click.IntRange(min=1), default=1, help="Exponent Z1")
@click.pass_context
def fundsols(ctx: click.Context, d: int, big_k: int, z1: int) -> int:
    """Fundamental solutions of X^2 - D*Y^2 = K^Z1."""
    limits = _limits(ctx)
    unit = least_solution(d, limits=limits)
    bound = height_bound(d, big_k, z1, unit)
    found = enumerate_fundamental(d, big_k, z1, unit, limits=limits)
    click.echo(f"(U1, V1) = ({unit.u1}, {unit.v1})")
    click.echo(f"bound: {bound.describe()}")
    click.echo(f"{len(found)} fundamental solution(s)")
    for rep in found:
        click.echo(f"  ({rep.x1}, {rep.y1}, {rep.z1})")
    return EXIT_OK


@cli.command()
@click.option(
    "--certificate",
    "path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="Certificate JSON written by analyze --json",
)
@click.pass_context
def replay(ctx: click.Context, path: Path) -> int:
    """Recompute every step of a certificate."""
    certificate = Certificate.from_json(path.read_text(encoding="utf-8"))
    if replay_certificate(certificate, limits=_limits(ctx)):
        click.echo(f"{len(certificate.steps)} step(s) replayed")
        return EXIT_OK
    click.echo("replay failed", err=True)
    return EXIT_INCONCLUSIVE


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code."""
    try:
        result = cli.main(args=argv, prog_name="rnc", standalone_mode=False)
    except click.UsageError as error:
        error.show()
        return EXIT_USAGE
    except click.ClickException as error:
        error.show()
        return error.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_INCONCLUSIVE
    except BudgetExceededError as error:
        click.echo(f"Error: {error}", err=True)
        return EXIT_BUDGET
    except ValueError as error:
        click.echo(f"Error: {error}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
