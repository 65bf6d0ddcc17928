"""Command-line front end.

Exit codes: 0 for completed computations (including refused certificates
and failed hypotheses, which appear as status fields), 1 for input errors,
2 for numerical failures, 3 for selection exhaustion.
"""

import sys

import click
import numpy as np

from . import basis as basis_mod
from .basis import eta_analysis, grunblum_certificate, unconditional_constant
from .bvs import _parse_norm, parse_bvs, serialize_bvs
from .errors import (
    HypothesisError,
    InputError,
    NumericalError,
    SelectionFailure,
)
from .generators import FAMILIES, FamilySpec, generate
from .norms import NormSpec, SampleConfig, fmt_float, norm_value
from .oracle import brute_force_operator_norm
from .perturbation import perturbation_lambda, perturbed_constant_bound, sandwich_check
from .selection import CandidateSequence, SelectionParams, gliding_hump_select


class Report:
    """Ordered key/value rows, each optionally carrying method and
    uncertainty, rendered as text or csv with identical numeric content."""

    def __init__(self):
        self.rows = []

    def add(self, key, value, method=None, uncertainty=None):
        self.rows.append((key, value, method, uncertainty))

    @staticmethod
    def _fmt(value):
        if isinstance(value, float):
            return fmt_float(value)
        if isinstance(value, (tuple, list, np.ndarray)):
            return " ".join(Report._fmt(v) for v in value)
        return str(value)

    def render(self, fmt):
        if fmt == "csv":
            lines = ["key,value,method,uncertainty"]
            for key, value, method, unc in self.rows:
                lines.append(
                    f"{key},{self._fmt(value)},{method or ''},"
                    f"{'' if unc is None else fmt_float(unc)}"
                )
            return "\n".join(lines) + "\n"
        lines = []
        for key, value, method, unc in self.rows:
            lines.append(f"{key} = {self._fmt(value)}")
            if method is not None:
                lines.append(f"{key}.method = {method}")
            if unc is not None:
                lines.append(f"{key}.uncertainty = {fmt_float(unc)}")
        return "\n".join(lines) + "\n"


def _norms_equal(a: NormSpec, b: NormSpec):
    if a.kind != b.kind or a.p != b.p:
        return False
    if a.kind == "wlp":
        return a.weights.size == b.weights.size and bool(np.all(a.weights == b.weights))
    return True


def _load_basis(path):
    return parse_bvs(path).to_basis()


def _load_candidates(path, basis, delta=None):
    vf = parse_bvs(path)
    if not _norms_equal(vf.norm, basis.norm):
        raise InputError(
            f"candidate file norm ({vf.norm.describe()}) differs from basis "
            f"norm ({basis.norm.describe()})"
        )
    if vf.dim != basis.dim:
        raise InputError(
            f"candidate dimension {vf.dim} differs from basis dimension {basis.dim}"
        )
    return vf.to_candidates(delta=delta)


def _certificate_rows(report, cert):
    report.add("K", cert.basis_constant, cert.method, cert.uncertainty)
    report.add("M", cert.grunblum_constant, cert.method, cert.uncertainty)
    for m, (v, meth, unc) in enumerate(
        zip(cert.projection_norms, cert.projection_methods, cert.projection_uncertainties),
        start=1,
    ):
        report.add(f"P_{m}", float(v), meth, float(unc))


@click.group()
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv"]), default="text",
              show_default=True)
@click.pass_context
def cli(ctx, seed, samples, tol, fmt):
    """Basis-constant, perturbation, and selection certificates."""
    if tol <= 0:
        raise InputError("--tol must be positive")
    ctx.obj = {"seed": seed, "samples": samples, "tol": tol, "fmt": fmt}


def _emit(ctx, report):
    click.echo(report.render(ctx.obj["fmt"]), nl=False)


@cli.command()
@click.argument("basis_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def analyze(ctx, basis_file):
    """Full certificate for one basis file."""
    b = _load_basis(basis_file)
    cert = grunblum_certificate(b)
    functionals = basis_mod.coefficient_functionals(b)
    eta = eta_analysis(b, np.ones(b.count), cert=cert)
    report = Report()
    report.add("file", basis_file)
    report.add("norm", b.norm.describe())
    report.add("dim", b.dim)
    report.add("count", b.count)
    _certificate_rows(report, cert)
    for k in range(1, b.count + 1):
        report.add(f"dual_norm_{k}", float(functionals.norms[k - 1]))
    report.add("t_norm", eta.t_norm)
    report.add("t_inv_norm", eta.t_inv_norm)
    products = [
        norm_value(b.vector(k), b.norm) * float(functionals.norms[k - 1])
        for k in range(1, b.count + 1)
    ]
    limit = 2.0 * eta.t_inv_norm
    report.add("max_norm_product", max(products))
    report.add("functional_bound_limit", limit)
    report.add(
        "functional_bound_ok",
        "yes" if max(products) <= limit + ctx.obj["tol"] else "no",
    )
    _emit(ctx, report)


@cli.command()
@click.argument("basis_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def grunblum(ctx, basis_file):
    """Projection norms, basis constant K, Grunblum constant M."""
    b = _load_basis(basis_file)
    report = Report()
    report.add("file", basis_file)
    _certificate_rows(report, grunblum_certificate(b))
    _emit(ctx, report)


@cli.command()
@click.argument("basis_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("candidate_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def perturb(ctx, basis_file, candidate_file):
    """Perturbation certificate for a candidate family; refusal is data."""
    b = _load_basis(basis_file)
    vf = parse_bvs(candidate_file)
    if not _norms_equal(vf.norm, b.norm):
        raise InputError("candidate file norm differs from basis norm")
    y = list(vf.vectors)
    cert = perturbation_lambda(b, y)
    report = Report()
    report.add("status", cert.status)
    report.add("lambda", cert.lambda_total)
    report.add("lower", cert.lower)
    report.add("upper", cert.upper)
    for i, (diff, fnorm) in enumerate(cert.per_term, start=1):
        report.add(f"diff_norm_{i}", diff)
        report.add(f"functional_norm_{i}", fnorm)
    if cert.certified:
        report.add("perturbed_bound", cert.perturbed_bound)
        cfg = SampleConfig(seed=ctx.obj["seed"], count=ctx.obj["samples"])
        sw = sandwich_check(b, y, cert, cfg, eps=ctx.obj["tol"])
        report.add("sandwich_samples", sw.samples)
        report.add("sandwich_slack_lower", sw.slack_lower)
        report.add("sandwich_slack_upper", sw.slack_upper)
        report.add("sandwich_violations", sw.violations)
        bound, k_y = perturbed_constant_bound(b, y, cert)
        report.add("perturbed_K", k_y)
        report.add("perturbed_K_bound", bound)
    _emit(ctx, report)


@cli.command()
@click.argument("basis_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("candidate_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--delta", type=float, default=None,
              help="Claimed norm floor; defaults to the smallest candidate norm.")
@click.option("--eps0", type=float, default=None,
              help="Initial hump budget; defaults to delta / 4.")
@click.option("--min-blocks", type=click.IntRange(min=1), default=3, show_default=True)
@click.pass_context
def select(ctx, basis_file, candidate_file, delta, eps0, min_blocks):
    """Gliding-hump selection of a certified basic subsequence."""
    b = _load_basis(basis_file)
    c = _load_candidates(candidate_file, b, delta=delta)
    params = SelectionParams(delta=c.delta, eps0=eps0, min_blocks=min_blocks)
    report = Report()
    try:
        result = gliding_hump_select(b, c, params)
    except HypothesisError as exc:
        report.add("status", "hypothesis-failed")
        if exc.witness_coordinate is not None:
            report.add("witness_coordinate", exc.witness_coordinate)
        report.add("detail", str(exc))
        _emit(ctx, report)
        return
    report.add("status", result.certificate.status)
    report.add("selected_indices", result.selected_indices)
    report.add("breakpoints", result.blocks.breakpoints)
    report.add("lambda_sel", result.lambda_sel)
    report.add("retries_used", result.retries_used)
    cfg = SampleConfig(seed=ctx.obj["seed"], count=ctx.obj["samples"])
    selected = [c.vectors[i - 1] for i in result.selected_indices]
    sw = sandwich_check(
        result.block_system, selected, result.certificate, cfg, eps=ctx.obj["tol"]
    )
    report.add("sandwich_samples", sw.samples)
    report.add("sandwich_slack_lower", sw.slack_lower)
    report.add("sandwich_slack_upper", sw.slack_upper)
    report.add("sandwich_violations", sw.violations)
    _emit(ctx, report)


@cli.command()
@click.argument("basis_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--exact-max-n", type=click.IntRange(min=1), default=16, show_default=True,
              help="Enumerate all sign patterns up to this many vectors.")
@click.pass_context
def uncond(ctx, basis_file, exact_max_n):
    """Unconditional constant via sign-pattern enumeration or sampling."""
    b = _load_basis(basis_file)
    cfg = SampleConfig(seed=ctx.obj["seed"], count=max(1, ctx.obj["samples"] // 40))
    value, method, uncertainty = unconditional_constant(b, exact_limit=exact_max_n, cfg=cfg)
    report = Report()
    report.add("unconditional_constant", value, method, uncertainty)
    _emit(ctx, report)


@cli.group()
def oracle():
    """Brute-force estimators."""


@oracle.command("opnorm")
@click.argument("basis_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--m", "m", type=click.IntRange(min=1), required=True,
              help="Projection index to estimate.")
@click.pass_context
def oracle_opnorm(ctx, basis_file, m):
    """Sampling + ascent lower bound for one projection norm."""
    b = _load_basis(basis_file)
    if m > b.count:
        raise InputError(f"projection index {m} exceeds count {b.count}")
    num = np.array(b.matrix)
    num[:, m:] = 0.0
    cfg = SampleConfig(seed=ctx.obj["seed"], count=ctx.obj["samples"])
    est = brute_force_operator_norm(
        num @ np.linalg.pinv(b.matrix), domain_basis=b.matrix, spec=b.norm, cfg=cfg
    )
    report = Report()
    report.add(f"P_{m}", est.value, "oracle-estimate", est.last_improvement)
    report.add("is_lower_bound", "yes" if est.is_lower_bound else "no")
    report.add("samples_used", est.samples_used)
    report.add("ascent_steps", est.ascent_steps)
    _emit(ctx, report)


@cli.command()
@click.argument("family", type=click.Choice(FAMILIES))
@click.option("--dim", type=click.IntRange(min=1), required=True)
@click.option("--count", type=click.IntRange(min=1), required=True)
@click.option("--norm", "norm_text", default=None,
              help='Norm declaration as in a BVS file, e.g. "lp 2" or "sup".')
@click.option("--magnitude", type=float, default=0.0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def gen(ctx, family, dim, count, norm_text, magnitude, output):
    """Generate a family and emit it as BVS."""
    norm = _parse_norm(norm_text.split(), None) if norm_text else None
    spec = FamilySpec(
        family=family, dim=dim, count=count, norm=norm,
        magnitude=magnitude, seed=ctx.obj["seed"],
    )
    obj = generate(spec)
    if isinstance(obj, CandidateSequence):
        text = serialize_bvs(obj.norm, obj.vectors)
    else:
        text = serialize_bvs(obj.norm, obj.matrix.T)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, click.FileError) as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        return 1
    except NumericalError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 2
    except SelectionFailure as exc:
        click.echo(f"selection failure: {exc}", err=True)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
