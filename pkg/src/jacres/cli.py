"""CLI interface for jacres - exact Jacobian, residue and closure computations."""

from __future__ import annotations

import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import click
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from . import __version__
from .artin import build_quotient, in_span, jacobian_test, socle, trace_residue
from .closure import arc_report, default_arcs, hessian_criterion, loja_certificate, samuel_bounds
from .config import DEFAULT_LIMITS, ComputeLimits, load_limits
from .errors import EXIT_INVALID, InvalidInputError, InvariantViolation, JacresError
from .local import containment_index, ideal_member, quotient_dimension, standard_basis
from .macaulay import macaulay_dimension, macaulay_member
from .models import Outcome, Report, format_number, to_jsonable
from .newton import is_monomial_ideal, newton_polyhedron
from .parser import System, load_arcs, load_system, parse_polynomial
from .poly import Arc, format_poly, jacobian_data, monomial, to_fraction
from .relative import (
    CoeffKind,
    CoeffRingSpec,
    relative_member,
    theorem31_check,
    theorem33_probe,
    trace_over_A,
)
from .sharp import nondegeneracy_check, residue_functional, residue_power, trace_cross_check

app = typer.Typer(
    name="jacres",
    help="Exact Jacobian, residue and integral-closure computations for local complete intersections.",
    no_args_is_help=True,
    add_completion=False,
)

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger(__name__)

SYSTEM_ARGUMENT = typer.Argument(..., help="System file (ring:, optional coeff:, f: lines).")
JSON_OPTION = typer.Option(False, "--json", help="Output the report as JSON.")
ARCS_OPTION = typer.Option(None, "--arcs", help="Arc file; defaults to a family of monomial arcs.")
MCAP_OPTION = typer.Option(None, "--mcap", help="Largest power m tried for ord_I(u^m)/m.")


def _configure_logging(verbosity: int) -> None:
    """Route the jacres loggers to stderr through rich."""
    if verbosity <= 0:
        level = logging.WARNING
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = logging.DEBUG
    root = logging.getLogger("jacres")
    root.handlers.clear()
    root.addHandler(RichHandler(console=err_console, show_path=False, show_time=False))
    root.setLevel(level)
    root.propagate = False


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Path = typer.Option(
        None,
        "--config",
        help="YAML file of resource limits.",
    ),
    verbose: int = typer.Option(
        0,
        "--verbose", "-v",
        count=True,
        help="Log progress to stderr (-vv for debug).",
    ),
) -> None:
    """Exact computations in the local ring k[[X]] of a polynomial system."""
    _configure_logging(verbose)
    try:
        ctx.obj = load_limits(config)
    except JacresError as exc:
        _fail(exc)


def _fail(exc: JacresError) -> None:
    err_console.print(f"[red]Error:[/red] {escape(str(exc))}")
    raise typer.Exit(exc.exit_code)


def _limits(ctx: typer.Context) -> ComputeLimits:
    return ctx.obj if isinstance(ctx.obj, ComputeLimits) else DEFAULT_LIMITS


def _text_value(value: Any) -> str:
    value = to_jsonable(value)
    if isinstance(value, list):
        return ", ".join(_text_value(v) for v in value) or "-"
    if isinstance(value, dict):
        return "; ".join(f"{k}={_text_value(v)}" for k, v in value.items())
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _emit(report: Report, json_output: bool) -> None:
    if json_output:
        typer.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return
    if report.headline is not None:
        typer.echo(report.headline)
        return
    table = Table(title=f"{report.command} {report.source}")
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    for key, value in report.fields.items():
        table.add_row(key, escape(_text_value(value)))
    console.print(table)


def _execute(
    ctx: typer.Context,
    command: str,
    path: Path,
    json_output: bool,
    compute: Callable[[System, ComputeLimits], Report],
    relative: bool = False,
) -> None:
    """Load the system, run the computation and print the report; errors become exit codes."""
    limits = _limits(ctx)
    try:
        system = load_system(path, limits=limits)
        if system.coeff is not None and not relative:
            raise InvalidInputError(f"'{command}' works over a field; use 'relative' for coefficient rings")
        report = compute(system, limits)
    except JacresError as exc:
        _fail(exc)
        return
    logger.info("%s %s done", command, path)
    _emit(report, json_output)


def _poly_option(system: System, text: str | None, limits: ComputeLimits, default: Any = None) -> Any:
    if text is None:
        return default
    return parse_polynomial(text, system.ambient, limits)


def _jacobian(system: System) -> Any:
    return jacobian_data(system.generators).det


def _arcs(system: System, path: Path | None, limits: ComputeLimits) -> list[Arc]:
    if path is not None:
        return load_arcs(path, system.field, limits)
    F = system.generators
    polyhedron = newton_polyhedron(F) if is_monomial_ideal(F) else None
    return default_arcs(system.ring.n, system.field, limits, polyhedron)


def _parse_powers(text: str | None, n: int) -> tuple[int, ...]:
    if text is None:
        return (1,) * n
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InvalidInputError(f"--powers expects comma-separated integers, got {text!r}") from None


@app.command("dim")
def dim_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    json_output: bool = JSON_OPTION,
) -> None:
    """Dimension of k[[X]]/I, or the variable with no pure power when it is infinite."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        basis = standard_basis(F, limits=limits)
        qd = quotient_dimension(F, basis=basis, limits=limits)
        fields: dict[str, Any] = {
            "dim_finite": qd.finite,
            "dim": qd.dim,
            "witness": qd.witness,
            "standard_monomials": [format_poly(monomial(F[0].ring, m)) for m in qd.standard_monomials],
            "leading_monomials": [format_poly(monomial(F[0].ring, m)) for m in qd.leading_monomials],
        }
        if qd.finite and qd.dim:
            fields["containment_index"] = containment_index(F, basis=basis, limits=limits)
            oracle = macaulay_dimension(F, limits=limits)
            if oracle != qd.dim:
                raise InvariantViolation(f"standard basis dimension {qd.dim} but Macaulay corank {oracle}")
            fields["macaulay_dim"] = oracle
        return Report("dim", str(system), str(qd.dim) if qd.finite else "inf", fields)

    _execute(ctx, "dim", system, json_output, compute)


@app.command("member")
def member_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    poly: str = typer.Option(..., "--poly", help="Polynomial g to test for g in I."),
    json_output: bool = JSON_OPTION,
) -> None:
    """Decide g in I with a re-multiplying certificate."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        g = parse_polynomial(poly, s.ring, limits)
        basis = standard_basis(F, limits=limits)
        member, cert = ideal_member(g, F, basis=basis, limits=limits)
        if not cert.verify():
            raise InvariantViolation(f"the certificate for {format_poly(g)} does not re-multiply")
        fields: dict[str, Any] = {
            "member": member,
            "poly": g,
            "unit": cert.unit,
            "cofactors": list(cert.cofactors),
            "remainder": cert.remainder,
        }
        if quotient_dimension(F, basis=basis, limits=limits).finite:
            oracle = macaulay_member(g, F, limits=limits)
            if oracle != member:
                raise InvariantViolation(f"standard basis says {member}, Macaulay matrix says {oracle}")
            fields["macaulay_member"] = oracle
        return Report("member", str(system), "true" if member else "false", fields)

    _execute(ctx, "member", system, json_output, compute)


@app.command("jactest")
def jactest_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    json_output: bool = JSON_OPTION,
) -> None:
    """Jacobian membership against positive dimension, and socle generation."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        verdict = jacobian_test(s.generators, limits=limits)
        if verdict.jacobian_in_ideal and not verdict.certificate.verify():
            raise InvariantViolation("the Jacobian membership certificate does not re-multiply")
        fields = {
            "dim_finite": verdict.dim_finite,
            "dim": verdict.dim,
            "dim_positive": verdict.dim_positive,
            "jacobian": verdict.jacobian,
            "jacobian_in_ideal": verdict.jacobian_in_ideal,
            "socle_generated": verdict.socle_generated,
            "socle_dim": verdict.socle_dim,
            "annihilates_maximal_ideal": verdict.annihilates_maximal_ideal,
            "witness": verdict.witness,
            "char_caveat": verdict.char_caveat,
        }
        return Report("jactest", str(system), None, fields)

    _execute(ctx, "jactest", system, json_output, compute)


@app.command("socle")
def socle_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    json_output: bool = JSON_OPTION,
) -> None:
    """Basis of the socle of the finite quotient and whether J spans it."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        A = build_quotient(s.generators, limits=limits)
        sc = socle(A)
        fields: dict[str, Any] = {
            "dim": A.dim,
            "socle_dim": sc.dim,
            "socle": list(sc.basis),
            "gorenstein": sc.is_simple,
        }
        if len(s.generators) == s.ring.n:
            J = _jacobian(s)
            fields["jacobian"] = A.reduce(J)
            fields["jacobian_spans_socle"] = sc.is_simple and not A.is_zero(J) and in_span(A, sc.basis, J)
        return Report("socle", str(system), None, fields)

    _execute(ctx, "socle", system, json_output, compute)


@app.command("residue")
def residue_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    poly: str = typer.Option(None, "--poly", help="Numerator r (default 1)."),
    powers: str = typer.Option(None, "--powers", help="Exponents m1,...,mn of the denominators (default all 1)."),
    json_output: bool = JSON_OPTION,
) -> None:
    """Res[r df / f_1^m_1 ... f_n^m_n] from the f-adic expansion of r."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        r = _poly_option(s, poly, limits, F[0].ring.one)
        m = _parse_powers(powers, len(F))
        A = build_quotient(F, limits=limits)
        value = to_fraction(residue_power(r, F, m, algebra=A, limits=limits), A.domain)
        fields: dict[str, Any] = {"poly": r, "powers": list(m), "residue": value}
        if all(v == 1 for v in m):
            trace = to_fraction(trace_residue(A, r), A.domain)
            if trace != value:
                raise InvariantViolation(f"sharp residue {value} differs from the trace {trace}")
            fields["trace"] = trace
        return Report("residue", str(system), format_number(value), fields)

    _execute(ctx, "residue", system, json_output, compute)


@app.command("pairing")
def pairing_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    json_output: bool = JSON_OPTION,
) -> None:
    """Residue functional from the Bezoutian, and non-degeneracy of the residue pairing."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        A = build_quotient(F, limits=limits)
        ell = residue_functional(F, algebra=A, limits=limits)
        probes = list(F) + list(A.basis_elements) + [b * x for b in A.basis_elements for x in A.ring.gens]
        verdict = nondegeneracy_check(F, probes, functional=ell, limits=limits)
        for b in A.basis_elements:
            lhs, rhs = trace_cross_check(F, b, functional=ell, limits=limits)
            if lhs != rhs:
                raise InvariantViolation(f"l(J*{format_poly(b)}) = {lhs} but the trace is {rhs}")
            if not ell.identity_check(b):
                raise InvariantViolation(f"the Bezoutian does not reproduce {format_poly(b)}")
        fields = {
            "dim": A.dim,
            "pairing_invertible": verdict.pairing_invertible,
            "probes": len(verdict.probes),
            "probes_in_ideal": sum(1 for p in verdict.probes if p.in_ideal),
            "functional": {format_poly(b): to_fraction(v, A.domain) for b, v in zip(A.basis_elements, ell.values)},
            "residue_of_jacobian": to_fraction(ell(_jacobian(s)), A.domain),
        }
        return Report("pairing", str(system), None, fields)

    _execute(ctx, "pairing", system, json_output, compute)


@app.command("samuel")
def samuel_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    poly: str = typer.Option(None, "--poly", help="Element u (default the Jacobian)."),
    arcs: Path = ARCS_OPTION,
    mcap: int = MCAP_OPTION,
    json_output: bool = JSON_OPTION,
) -> None:
    """Asymptotic Samuel function of u: exact for monomial ideals, bracketed otherwise."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        u = _poly_option(s, poly, limits) if poly is not None else _jacobian(s)
        family = _arcs(s, arcs, limits)
        bounds = samuel_bounds(F, u, family, mcap=mcap, limits=limits)
        value = bounds.value
        headline = format_number(value) if value is not None else (
            f"[{format_number(bounds.lower)}, {format_number(bounds.upper)}]"
        )
        fields = {
            "poly": u,
            "lower": bounds.lower,
            "upper": bounds.upper,
            "exact": bounds.exact,
            "value": value,
            "lower_power": bounds.lower_power,
            "arcs_used": bounds.arcs_used,
        }
        return Report("samuel", str(system), headline, fields)

    _execute(ctx, "samuel", system, json_output, compute)


@app.command("arcs")
def arcs_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    poly: str = typer.Option(None, "--poly", help="Element u (default the Jacobian)."),
    arcs: Path = ARCS_OPTION,
    json_output: bool = JSON_OPTION,
) -> None:
    """Orders along arcs and the Cramer identity for the Jacobian."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        u = _poly_option(s, poly, limits)
        reports = [arc_report(F, arc, u=u) for arc in _arcs(s, arcs, limits)]
        failed = [r.arc for r in reports if r.cramer_ok is False]
        if failed:
            raise InvariantViolation(f"Cramer identity fails along {failed[0]}")
        ratios = [r.ratio for r in reports if r.ratio is not None]
        fields = {
            "arcs": reports,
            "cramer_ok": all(r.cramer_ok for r in reports) if reports and reports[0].cramer_ok is not None else None,
            "least_ratio": min(ratios) if ratios else None,
        }
        return Report("arcs", str(system), None, fields)

    _execute(ctx, "arcs", system, json_output, compute)


@app.command("loja")
def loja_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    arcs: Path = ARCS_OPTION,
    mcap: int = MCAP_OPTION,
    json_output: bool = JSON_OPTION,
) -> None:
    """Lower bound theta with J in the integral closure of I^theta."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        family = load_arcs(arcs, s.field, limits) if arcs is not None else None
        cert = loja_certificate(s.generators, arcs=family, mcap=mcap, limits=limits)
        headline = format_number(cert.theta_lb) if cert.theta_lb is not None else "no statement"
        fields = {
            "n": cert.n,
            "rank0": cert.rank0,
            "case": cert.case,
            "s": cert.s,
            "min_order": cert.min_order,
            "strict": cert.strict,
            "theta_lb": cert.theta_lb,
            "theta_refined": cert.theta_refined,
            "jacobian_in_closure": cert.jacobian_in_closure,
            "bounds": cert.bounds,
            "reduced_variables": list(cert.reduced_variables),
            "note": cert.note,
        }
        return Report("loja", str(system), headline, fields)

    _execute(ctx, "loja", system, json_output, compute)


@app.command("hessian")
def hessian_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    json_output: bool = JSON_OPTION,
) -> None:
    """Isolated singularity test through the Hessian of a single f."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        if len(s.generators) != 1:
            raise InvalidInputError(f"'hessian' takes one f: line, got {len(s.generators)}")
        hv = hessian_criterion(s.generators[0], limits=limits)
        fields = {
            "isolated": hv.isolated,
            "hessian": hv.hessian,
            "hessian_in_jacobian_ideal": hv.hessian_in_jacobian_ideal,
            "milnor_number": hv.milnor_number,
            "jacobian_ideal_closed": hv.jacobian_ideal_closed,
            "hessian_rank0": hv.hessian_rank0,
            "morse_type": hv.morse_type,
        }
        return Report("hessian", str(system), None, fields)

    _execute(ctx, "hessian", system, json_output, compute)


def _overall(outcomes: Sequence[Outcome]) -> Outcome:
    if Outcome.NOT_OBSERVED in outcomes:
        return Outcome.NOT_OBSERVED
    if Outcome.OBSERVED in outcomes:
        return Outcome.OBSERVED
    return Outcome.NOT_APPLICABLE


@app.command("relative")
def relative_command(
    ctx: typer.Context,
    system: Path = SYSTEM_ARGUMENT,
    poly: str = typer.Option(None, "--poly", help="Element g for membership and the trace over A (default 1)."),
    witness: list[str] = typer.Option(None, "--witness", help="Radical witness w with w^k in I (repeatable)."),
    json_output: bool = JSON_OPTION,
) -> None:
    """Membership, trace over A and the radical / non-Artinian probes over a coefficient ring."""

    def compute(s: System, limits: ComputeLimits) -> Report:
        F = s.generators
        A = s.coeff if s.coeff is not None else CoeffRingSpec(s.field)
        g = _poly_option(s, poly, limits, F[0].ring.one)
        witnesses = [parse_polynomial(w, s.ambient, limits) for w in witness or ()]
        member, _ = relative_member(g, F, A, limits=limits)
        fields: dict[str, Any] = {
            "coefficient_ring": str(A),
            "coefficient_kind": A.kind,
            "poly": g,
            "member": member,
        }
        try:
            fields["trace"] = trace_over_A(F, A, g, limits=limits)
        except InvalidInputError as exc:
            fields["trace"] = None
            fields["trace_note"] = str(exc)
        radical = theorem31_check(F, A, witnesses, limits=limits)
        fields["radical_check"] = radical
        outcomes = [radical.outcome]
        if A.kind is not CoeffKind.DOMAIN_POLYNOMIAL:
            try:
                probe = theorem33_probe(F, A, limits=limits)
            except InvalidInputError as exc:
                fields["non_artinian_probe"] = None
                fields["probe_note"] = str(exc)
            else:
                fields["non_artinian_probe"] = probe
                outcomes += [probe.non_artinian_outcome, probe.equivalence_outcome]
        overall = _overall(outcomes)
        fields["outcome"] = overall
        return Report("relative", str(system), None, fields)

    _execute(ctx, "relative", system, json_output, compute, relative=True)


@app.command("version")
def version_command() -> None:
    """Show version information."""
    console.print(f"jacres version {__version__}")


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI on ``argv`` and return the exit code; usage errors map to 3."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = app(args=args, prog_name="jacres", standalone_mode=False)
    except click.exceptions.UsageError as exc:
        exc.show(file=sys.stderr)
        return EXIT_INVALID
    except click.exceptions.Abort:
        return 1
    if isinstance(result, int):
        return result
    return 0


def main() -> None:
    """Entry point for the CLI."""
    raise SystemExit(run())


if __name__ == "__main__":
    main()
