"""
Command line interface.

    hahnfield realize --q q1,q2,q3 --p q2
    hahnfield rank --couple couple.json
    hahnfield axioms --couple couple.json --seed 7
    hahnfield derive --series "1*t{-1@(q1,0)}"
    hahnfield qo --a "(q1,0)" --b "(q1,9)"
    hahnfield residue --couple couple.json --segment "{q1:all,q2:tail(-1)}"

Exit status is 0 when every asserted property holds, 1 when a check fails
(the failing report goes to stdout as JSON) and 2 for unparsable input.
"""

import json
import logging
import re
import sys
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional

import click

from .chain import DEFAULT_WINDOW, Chain
from .config import DEFAULT_SEED, RESIDUE_SAMPLES, SEED_ENV_VAR
from .couple import AsymptoticCouple, couple_from_shift
from .derivation import DerivationConfig
from .errors import CheckFailure, HahnFieldError, ParseError
from .grammar import (
    load_chain,
    load_couple,
    parse_group_element,
    parse_labels,
    parse_point,
    parse_segment,
    parse_series,
    parse_window,
)
from .ranks import psi_rank, unfolded_rank
from .realization import RealizationSpec, realize
from .reports import with_schema

logger = logging.getLogger(__name__)

_VERBOSITY = {0: logging.WARNING, 1: logging.INFO}
_POINT_LABEL = re.compile(r"\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*,")


@contextmanager
def _reported(ctx: click.Context) -> Iterator[None]:
    try:
        yield
    except ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        ctx.exit(2)
    except CheckFailure as exc:
        click.echo(json.dumps(with_schema({"error": str(exc), "report": exc.report}), indent=2))
        ctx.exit(1)
    except (HahnFieldError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(2)


def _emit(ctx: click.Context, payload: Dict[str, Any], text: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(with_schema(payload), indent=2))
    else:
        click.echo(text)


def _fail_unless(suites, message: str) -> None:
    suites = list(suites)
    if not all(s.passed for s in suites):
        raise CheckFailure(message, report={"checks": [s.to_dict() for s in suites]})


def _couple_or_default(path: Optional[str]) -> AsymptoticCouple:
    if path is None:
        return couple_from_shift(Chain.product(["q1"]))
    return load_couple(path)


window_option = click.option(
    "--window",
    "window_text",
    default=str(DEFAULT_WINDOW),
    show_default=True,
    help="Z-window LO:HI bounding the enumerations on ProductQZ.",
)
couple_option = click.option(
    "--couple",
    "couple_path",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON couple descriptor.",
)


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging on stderr.")
@click.option(
    "--seed",
    type=int,
    default=DEFAULT_SEED,
    envvar=SEED_ENV_VAR,
    show_default=True,
    help=f"Seed for the sampled checks (also read from {SEED_ENV_VAR}).",
)
@click.pass_context
def cli(ctx: click.Context, as_json: bool, verbose: int, seed: int):
    """Hahn-series fields with prescribed differential ranks."""
    logging.basicConfig(
        level=_VERBOSITY.get(verbose, logging.DEBUG),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json
    ctx.obj["seed"] = seed


@cli.command("realize")
@click.option("--q", "q_text", required=True, help="Labels of Q in increasing order, e.g. q1,q2,q3.")
@click.option("--p", "p_generator", default=None, help="Generator of P; P = Q when omitted.")
@window_option
@click.option("--samples", type=int, default=None, help="Override the sample budget of every check.")
@click.pass_context
def realize_command(ctx: click.Context, q_text: str, p_generator: Optional[str], window_text: str, samples: Optional[int]):
    """Build and certify a field with principal rank P and unfolded rank Q."""
    with _reported(ctx):
        spec = RealizationSpec.from_labels(parse_labels(q_text), p_generator)
        certificate = realize(spec, parse_window(window_text), ctx.obj["seed"], samples)
        text = "\n".join(
            [
                f"Q = {','.join(spec.q_labels)}, P = {','.join(spec.p_labels)}",
                f"couple: {certificate.couple!r}",
                "principal rank: " + ", ".join(str(s) for s in certificate.rank.principal),
                "principal unfolded rank: " + ", ".join(str(s) for s in certificate.unfolded.principal),
                "certified" if certificate.passed else "FAILED",
            ]
        )
        _emit(ctx, certificate.to_dict(), text)


@cli.command()
@couple_option
@window_option
@click.option("--unfolded/--no-unfolded", default=True, show_default=True, help="Also compute the unfolded rank.")
@click.pass_context
def rank(ctx: click.Context, couple_path: Optional[str], window_text: str, unfolded: bool):
    """Compatible segments of a couple, certified against the oracle."""
    with _reported(ctx):
        couple = _couple_or_default(couple_path)
        window = parse_window(window_text)
        report = psi_rank(couple, window, certify=True)
        payload: Dict[str, Any] = {"couple": couple.to_dict(), "rank": report.to_dict()}
        lines = ["rank: " + ", ".join(str(s) for s in report.segments)]
        lines.append("principal: " + ", ".join(str(s) for s in report.principal))
        if unfolded:
            unfolded_report = unfolded_rank(couple, window)
            suite = unfolded_report.verify(couple)
            payload["unfolded_rank"] = unfolded_report.to_dict()
            payload["checks"] = suite.to_dict()
            lines.append("unfolded: " + ", ".join(str(s) for s in unfolded_report.segments))
            lines.append("unfolded principal: " + ", ".join(str(s) for s in unfolded_report.principal))
            _fail_unless([suite], "unfolded rank structure failed")
        _emit(ctx, payload, "\n".join(lines))


@cli.command()
@couple_option
@window_option
@click.option("--samples", type=int, default=None, help="Random samples per check.")
@click.pass_context
def axioms(ctx: click.Context, couple_path: Optional[str], window_text: str, samples: Optional[int]):
    """Couple axioms plus the differential-valued and H-field axioms of its derivation."""
    with _reported(ctx):
        couple = _couple_or_default(couple_path)
        window = None if couple.chain.is_finite else parse_window(window_text)
        seed = ctx.obj["seed"]
        derivation = DerivationConfig(couple)
        extra = {} if samples is None else {"samples": samples}
        suites = [
            couple.check_axioms(window, seed=seed, **extra),
            derivation.check_dv_axioms(window, seed=seed, **extra),
            derivation.check_h_axioms(window, seed=seed, **extra),
        ]
        _fail_unless(suites, "axiom check failed")
        text = "\n".join(_suite_lines(suites))
        _emit(ctx, {"seed": seed, "checks": [s.to_dict() for s in suites]}, text)


def _suite_lines(suites) -> Iterator[str]:
    for suite in suites:
        for report in suite:
            yield f"{suite.name} {report.axiom}: {'pass' if report.passed else 'FAIL'} ({report.samples} samples)"


@cli.command()
@couple_option
@click.option("--series", "series_text", required=True, help='A series such as "3*t{2@(q1,0)} + -1/2*t{0}".')
@click.option("--log-bound", "bound_text", default=None, help="Also print D(a)/a below this group element.")
@click.pass_context
def derive(ctx: click.Context, couple_path: Optional[str], series_text: str, bound_text: Optional[str]):
    """Apply the derivation (by default over ProductQZ[q1] with offset 0)."""
    with _reported(ctx):
        couple = _couple_or_default(couple_path)
        derivation = DerivationConfig(couple)
        a = parse_series(series_text, couple.chain)
        da = derivation.derive(a)
        payload: Dict[str, Any] = {"series": a.to_dict(), "derivative": da.to_dict()}
        text = str(da)
        if bound_text is not None:
            log = derivation.log_derivative(a, parse_group_element(bound_text, couple.chain))
            payload["log_derivative"] = log.to_dict()
            text += f"\n{log}"
        _emit(ctx, payload, text)


def _natural_key(label: str):
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", label)]


def _inferred_chain(*texts: str) -> Chain:
    """ProductQZ over the labels named in the points, q2 < q10 style."""
    labels = {label for text in texts for label in _POINT_LABEL.findall(text)}
    if not labels:
        raise ParseError("expected a ProductQZ point such as (q1,0)", texts[0], 0)
    return Chain.product(sorted(labels, key=_natural_key))


@cli.command()
@click.option("--chain", "chain_path", type=click.Path(exists=True, dir_okay=False), help="JSON chain descriptor.")
@click.option("--q", "q_text", default=None, help="Q-labels of a ProductQZ chain.")
@click.option("--a", "a_text", required=True, help="First point.")
@click.option("--b", "b_text", required=True, help="Second point.")
@click.pass_context
def qo(ctx: click.Context, chain_path: Optional[str], q_text: Optional[str], a_text: str, b_text: str):
    """Compare two points in the quasi-order of the shift."""
    with _reported(ctx):
        if chain_path is not None:
            chain = load_chain(chain_path)
        elif q_text is not None:
            chain = Chain.product(parse_labels(q_text))
        else:
            chain = _inferred_chain(a_text, b_text)
        a, b = parse_point(a_text, chain), parse_point(b_text, chain)
        verdict = chain.qo_verdict(a, b)
        _emit(ctx, {"chain": chain.to_dict(), "a": str(a), "b": str(b), "result": verdict}, verdict)


@cli.command()
@couple_option
@click.option("--segment", "segment_text", required=True, help='A final segment such as "{q1:all,q2:tail(3)}".')
@window_option
@click.option("--samples", type=int, default=RESIDUE_SAMPLES, show_default=True, help="Random samples.")
@click.pass_context
def residue(ctx: click.Context, couple_path: Optional[str], segment_text: str, window_text: str, samples: int):
    """Classify the coarsening of the valuation defined by a final segment."""
    with _reported(ctx):
        couple = _couple_or_default(couple_path)
        segment = parse_segment(segment_text, couple.chain)
        window = None if couple.chain.is_finite else parse_window(window_text)
        report = DerivationConfig(couple).coarsen_residue(segment, window, samples, ctx.obj["seed"])
        if not report.certified:
            raise CheckFailure(f"coarsening {segment} could not be certified", report=report.to_dict())
        lines = [f"{segment}: {report.classification}"]
        if report.context.is_trivial_valuation:
            lines.append("note: the full segment gives the trivial valuation")
        lines += [f"{key}: {value}" for key, value in report.witness.items()]
        _emit(ctx, report.to_dict(), "\n".join(lines))


def main():
    cli(prog_name="hahnfield", obj={})


if __name__ == "__main__":
    main()
