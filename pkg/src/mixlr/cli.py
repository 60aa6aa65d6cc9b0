"""Command-line interface.

Exit codes: 0 success, 1 internal failure or validation mismatch,
2 schema/contract errors, 3 impossible evidence, 4 enumeration cap.
``MIXLR_SEED`` overrides the default oracle seed when --seed is absent.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import scenarios
from .balls import single_profile_analysis
from .bayes import as_fraction
from .errors import MixlrError, SchemaError
from .genotypes import DEFAULT_COMBINATION_CAP
from .oracle import DEFAULT_SEED, OracleConfig, run_validation_suite
from .outcomes import caveat_text
from .report import (
    RenderedReport,
    ReportLine,
    ReportSection,
    build_report,
    render_json,
    render_text,
)
from .scenarios import (
    KIND_BALL_K,
    KIND_BALL_TWO,
    KIND_CASE_REPORT,
    KIND_LOTTERY,
    KIND_MIXTURE,
    KIND_SCREENING,
    BallKScenario,
    BallTwoScenario,
    load_scenario,
)


def parse_k_spec(text: str) -> tuple[int, ...]:
    """Expand "1..10,15,20" into an explicit tuple of contributor counts."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError("empty segment in k specification")
        if ".." in part:
            lo_text, _, hi_text = part.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            if lo > hi:
                raise ValueError(f"bad range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    if any(v < 1 for v in values):
        raise ValueError("contributor counts must be at least 1")
    return tuple(values)


def _rational_flag(text: str) -> Fraction:
    return as_fraction(text)


def _emit(report, args) -> int:
    if args.format == "json":
        sys.stdout.write(render_json(report))
    else:
        sys.stdout.write(render_text(report))
    return 0


def _scenario_command(args, expected_kind: str) -> int:
    scenario = load_scenario(args.scenario)
    actual = _scenario_kind(scenario)
    if actual != expected_kind:
        raise SchemaError(
            f"scenario kind {actual!r} does not match the {expected_kind!r} command",
            path="kind",
        )
    kwargs = {}
    if hasattr(args, "max_combinations"):
        kwargs["max_combinations"] = args.max_combinations
    return _emit(build_report(scenario, **kwargs), args)


def _scenario_kind(scenario) -> str:
    return {
        scenarios.ScreeningScenario: KIND_SCREENING,
        scenarios.LotteryScenario: KIND_LOTTERY,
        scenarios.MixtureScenario: KIND_MIXTURE,
        scenarios.BallTwoScenario: KIND_BALL_TWO,
        scenarios.BallKScenario: KIND_BALL_K,
        scenarios.CaseReportScenario: KIND_CASE_REPORT,
    }[type(scenario)]


def _cmd_screening(args) -> int:
    return _scenario_command(args, KIND_SCREENING)


def _cmd_lottery(args) -> int:
    return _scenario_command(args, KIND_LOTTERY)


def _cmd_mixture(args) -> int:
    return _scenario_command(args, KIND_MIXTURE)


def _cmd_report(args) -> int:
    return _scenario_command(args, KIND_CASE_REPORT)


def _cmd_ball_single(args) -> int:
    result = single_profile_analysis(args.n, args.alphabet, args.population)
    section = ReportSection(
        "Single-profile match",
        lines=(
            ReportLine("LR", result.lr),
            ReportLine("prior P(H)", result.prior.value),
            ReportLine("posterior P(H)", result.posterior.value),
            ReportLine("direction:", result.direction.value),
        ),
    )
    report = RenderedReport(
        title="Single-source profile match",
        assumptions=(
            f"profiles have {args.n} positions over an alphabet of {args.alphabet}",
            f"candidate population of {args.population}",
        ),
        sections=(section,),
        caveats=(caveat_text(True, result.direction),),
    )
    return _emit(report, args)


def _cmd_ball_two(args) -> int:
    if args.scenario is not None:
        return _scenario_command(args, KIND_BALL_TWO)
    if args.n is None:
        raise SchemaError("provide a scenario file or --n", path="n")
    scenario = BallTwoScenario(
        title="Two-contributor mixture analysis",
        positions=args.n,
        alphabet_size=args.alphabet,
    )
    return _emit(build_report(scenario), args)


def _cmd_ball_table(args) -> int:
    if args.scenario is not None:
        return _scenario_command(args, KIND_BALL_K)
    scenario = BallKScenario(
        title="Contributor-count sensitivity table",
        k_values=args.k,
        pots=args.pots,
        genotype_frequency=args.freq,
    )
    return _emit(build_report(scenario), args)


def _cmd_validate(args) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("MIXLR_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise SchemaError(
                    f"MIXLR_SEED must be an integer, got {env!r}", path="MIXLR_SEED"
                ) from None
        else:
            seed = DEFAULT_SEED
    config = OracleConfig(mc_samples=args.samples, seed=seed)
    ok = run_validation_suite(config, jobs=args.jobs, out=sys.stdout)
    return 0 if ok else 1


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="output style (default: text)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixlr",
        description=(
            "Exact-arithmetic analysis of likelihood-ratio claims about "
            "mixed DNA profile evidence."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("screening", help="Bayes update for a screening-test scenario")
    p.add_argument("scenario", help="scenario JSON file")
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_screening)

    p = sub.add_parser("lottery", help="hypothesis-pair analysis on a finite outcome space")
    p.add_argument("scenario", help="scenario JSON file")
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_lottery)

    p = sub.add_parser("mixture", help="genotype mixture contributor analysis")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument(
        "--max-combinations",
        type=int,
        default=DEFAULT_COMBINATION_CAP,
        help="cap on materialized contributor combinations",
    )
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_mixture)

    p = sub.add_parser("report", help="corrected expert statement for a casework table")
    p.add_argument("scenario", help="scenario JSON file")
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_report)

    ball = sub.add_parser("ball", help="numbered-ball closed-form models")
    ball_sub = ball.add_subparsers(dest="ball_command", required=True)

    p = ball_sub.add_parser("single", help="single-source profile match")
    p.add_argument("--n", type=int, required=True, help="positions per profile")
    p.add_argument("--alphabet", type=int, default=10, help="alphabet size (default 10)")
    p.add_argument("--population", type=int, default=1, help="candidate population")
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_ball_single)

    p = ball_sub.add_parser("two", help="two-contributor mixture inclusion")
    p.add_argument("scenario", nargs="?", default=None, help="scenario JSON file")
    p.add_argument("--n", type=int, default=None, help="positions per profile")
    p.add_argument("--alphabet", type=int, default=10, help="alphabet size (default 10)")
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_ball_two)

    p = ball_sub.add_parser("table", help="likelihood ratios by contributor count")
    p.add_argument("scenario", nargs="?", default=None, help="scenario JSON file")
    p.add_argument(
        "--k",
        type=parse_k_spec,
        default=parse_k_spec("1..10,15,20,25,40,80"),
        help='contributor counts, e.g. "1..10,15,20" (ranges expand inclusively)',
    )
    p.add_argument("--pots", type=int, default=20, help="positions per profile")
    p.add_argument(
        "--freq",
        type=_rational_flag,
        default=Fraction(1, 10),
        help='per-position match frequency as an exact rational, e.g. "1/10"',
    )
    _add_format_flag(p)
    p.set_defaults(handler=_cmd_ball_table)

    p = sub.add_parser("validate", help="run the oracle-vs-analytic validation suite")
    p.add_argument("--seed", type=int, default=None, help="oracle seed (overrides MIXLR_SEED)")
    p.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo sample budget")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for sampling chunks")
    p.set_defaults(handler=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except MixlrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
