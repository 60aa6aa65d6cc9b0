"""Report construction and rendering, human text and machine JSON.

Reports carry exact rationals; rendering derives every decimal from the
exact value, so the two output styles can never disagree on a number.
Both renderings are deterministic byte-for-byte for a given scenario.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import balls, genotypes
from .bayes import Prob, Ratio, likelihood_ratio, posterior_from_prior, probative_direction
from .display import decimal_text, exact_text
from .errors import SchemaError, ValidationError
from .genotypes import ReportAssumptions, render_expert_report
from .outcomes import (
    AnalysisResult,
    Event,
    analyze_pair,
    caveat_text,
    complement_event,
)
from .scenarios import (
    BallKScenario,
    BallTwoScenario,
    CaseReportScenario,
    LotteryScenario,
    MixtureScenario,
    Scenario,
    ScreeningScenario,
)

Cell = str | Fraction | Ratio


@dataclass(frozen=True)
class ReportLine:
    label: str
    value: Cell


@dataclass(frozen=True)
class ReportTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[Cell, ...], ...]


@dataclass(frozen=True)
class ReportSection:
    heading: str
    lines: tuple[ReportLine, ...] = ()
    table: ReportTable | None = None


@dataclass(frozen=True)
class RenderedReport:
    title: str
    assumptions: tuple[str, ...]
    sections: tuple[ReportSection, ...]
    caveats: tuple[str, ...]
    statement: str | None = None


def _human_value(value: Cell) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, Ratio):
        if value.is_infinite:
            return "infinite"
        value = value.value
    exact = exact_text(value)
    decimal = decimal_text(value, "human")
    if exact == decimal:
        return exact
    return f"{exact} (= {decimal})"


def _table_value(value: Cell) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, Ratio):
        if value.is_infinite:
            return "infinite"
        value = value.value
    return decimal_text(value, "human")


def render_text(report: RenderedReport) -> str:
    """Human-readable rendering, deterministic for a given report."""
    out: list[str] = [report.title, "=" * len(report.title)]
    if report.assumptions:
        out.append("")
        out.append("Assumptions:")
        out.extend(f"  - {a}" for a in report.assumptions)
    for section in report.sections:
        out.append("")
        out.append(section.heading)
        for line in section.lines:
            out.append(f"  {line.label} {_human_value(line.value)}")
        if section.table is not None:
            out.extend(_render_table(section.table))
    if report.caveats:
        out.append("")
        out.append("Caveats:")
        out.extend(f"  - {c}" for c in report.caveats)
    if report.statement is not None:
        out.append("")
        out.append("Corrected expert statement:")
        out.append(f"  {report.statement}")
    out.append("")
    return "\n".join(out)


def _render_table(table: ReportTable) -> list[str]:
    cells = [list(table.columns)]
    for row in table.rows:
        cells.append([_table_value(v) for v in row])
    widths = [max(len(r[i]) for r in cells) for i in range(len(table.columns))]
    lines = []
    for r, row in enumerate(cells):
        line = "  " + "  ".join(v.ljust(widths[i]) for i, v in enumerate(row))
        lines.append(line.rstrip())
        if r == 0:
            lines.append("  " + "  ".join("-" * w for w in widths))
    return lines


def _json_cell(value: Cell) -> object:
    if isinstance(value, str):
        return {"text": value}
    if isinstance(value, Ratio):
        if value.is_infinite:
            return {"exact": "inf", "decimal": "inf"}
        value = value.value
    return {"exact": exact_text(value), "decimal": decimal_text(value, "machine")}


def render_json(report: RenderedReport) -> str:
    """Machine-readable rendering: exact rational strings plus decimals."""
    sections = []
    for section in report.sections:
        entry: dict[str, object] = {"heading": section.heading}
        if section.lines:
            entry["lines"] = [
                {"label": line.label, **_json_cell(line.value)} for line in section.lines
            ]
        if section.table is not None:
            entry["table"] = {
                "columns": list(section.table.columns),
                "rows": [[_json_cell(v) for v in row] for row in section.table.rows],
            }
        sections.append(entry)
    document = {
        "title": report.title,
        "assumptions": list(report.assumptions),
        "sections": sections,
        "caveats": list(report.caveats),
        "statement": report.statement,
    }
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def _cell_from_json(data: dict) -> Cell:
    if "text" in data:
        return data["text"]
    exact = data["exact"]
    if exact == "inf":
        return Ratio.infinite()
    return Fraction(exact)


def parse_json_report(text: str) -> RenderedReport:
    """Rebuild a report from its machine rendering (for round-trip checks)."""
    data = json.loads(text)
    sections = []
    for entry in data["sections"]:
        lines = tuple(
            ReportLine(item["label"], _cell_from_json(item))
            for item in entry.get("lines", ())
        )
        table = None
        if "table" in entry:
            table = ReportTable(
                columns=tuple(entry["table"]["columns"]),
                rows=tuple(
                    tuple(_cell_from_json(v) for v in row)
                    for row in entry["table"]["rows"]
                ),
            )
        sections.append(ReportSection(entry["heading"], lines=lines, table=table))
    return RenderedReport(
        title=data["title"],
        assumptions=tuple(data["assumptions"]),
        sections=tuple(sections),
        caveats=tuple(data["caveats"]),
        statement=data["statement"],
    )


def _direction_text(result: AnalysisResult) -> str:
    return result.direction.value if result.direction is not None else "not determined"


def _result_lines(result: AnalysisResult, hypothesis: str) -> list[ReportLine]:
    lines = [ReportLine("LR", result.lr)]
    if result.prior is not None:
        lines.append(ReportLine(f"prior P({hypothesis})", result.prior.value))
    if result.posterior is not None:
        lines.append(ReportLine(f"posterior P({hypothesis})", result.posterior.value))
    lines.append(ReportLine("direction:", _direction_text(result)))
    lines.append(ReportLine("hypotheses exhaustive:", "yes" if result.exhaustive else "no"))
    return lines


def _build_screening(scenario: ScreeningScenario) -> RenderedReport:
    lr = likelihood_ratio(
        Prob(scenario.p_evidence_given_h), Prob(scenario.p_evidence_given_not_h)
    )
    posterior = posterior_from_prior(
        Prob(scenario.prior),
        Prob(scenario.p_evidence_given_h),
        Prob(scenario.p_evidence_given_not_h),
    )
    direction = probative_direction(Prob(scenario.prior), posterior)
    section = ReportSection(
        "Evidence update",
        lines=(
            ReportLine("P(E | H)", scenario.p_evidence_given_h),
            ReportLine("P(E | not H)", scenario.p_evidence_given_not_h),
            ReportLine("LR", lr),
            ReportLine("prior P(H)", scenario.prior),
            ReportLine("posterior P(H | E)", posterior.value),
            ReportLine("direction:", direction.value),
        ),
    )
    return RenderedReport(
        title=scenario.title,
        assumptions=("the hypothesis and its negation are the only possibilities",),
        sections=(section,),
        caveats=(caveat_text(True, direction),),
    )


def _build_lottery(scenario: LotteryScenario) -> RenderedReport:
    sections = []
    caveats: list[str] = []
    for query in scenario.queries:
        evidence = scenario.event(query.evidence)
        prosecution = scenario.event(query.prosecution)
        if query.defence is None:
            defence = complement_event(scenario.space, prosecution)
            defence_label = f"not {query.prosecution}"
        else:
            defence = scenario.event(query.defence)
            defence_label = query.defence
        result = analyze_pair(scenario.space, evidence, prosecution, defence)
        heading = (
            f"{query.prosecution} vs {defence_label} "
            f"(evidence: {query.evidence})"
        )
        sections.append(
            ReportSection(heading, lines=tuple(_result_lines(result, query.prosecution)))
        )
        if result.caveat not in caveats:
            caveats.append(result.caveat)
    return RenderedReport(
        title=scenario.title,
        assumptions=(),
        sections=tuple(sections),
        caveats=tuple(caveats),
    )


def _genotype_pair_text(pair: genotypes.GenotypePair) -> str:
    return f"{pair[0].text()}+{pair[1].text()}"


def _profile_pair_text(pair: genotypes.ProfilePair) -> str:
    return f"[{pair[0].text()}] + [{pair[1].text()}]"


_LISTING_LIMIT = 12


def _build_mixture(scenario: MixtureScenario, max_combinations: int) -> RenderedReport:
    sections = []
    caveats: list[str] = []
    for locus in scenario.mixture.loci:
        universe = scenario.universe.locus(locus)
        alleles = scenario.mixture.alleles_at(locus)
        suspect = scenario.suspect.genotype_at(locus)
        pairs = genotypes.compatible_pairs(alleles, universe)
        allele_text = "{" + ",".join(str(a) for a in sorted(alleles)) + "}"
        lines = [
            ReportLine("mixture alleles", allele_text),
            ReportLine("suspect genotype", suspect.text()),
            ReportLine("compatible contributor pairs:", str(len(pairs))),
        ]
        if pairs:
            lines.append(
                ReportLine("pairs:", "; ".join(_genotype_pair_text(p) for p in pairs))
            )
        sections.append(ReportSection(f"Locus {locus}", lines=tuple(lines)))

        if pairs:
            inclusion = genotypes.analyze_profile_in_mixture(alleles, suspect, universe)
            p_e_h, p_e_not_h = genotypes.inclusion_likelihoods(alleles, suspect, universe)
            lines = [
                ReportLine("P(E | included)", p_e_h),
                ReportLine(
                    "P(E | not included)",
                    p_e_not_h if p_e_not_h is not None else "undefined",
                ),
            ]
            lines.extend(_result_lines(inclusion, "included"))
            sections.append(
                ReportSection(
                    f"Genotype inclusion at {locus} "
                    f"(a person with the suspect's genotype contributed)",
                    lines=tuple(lines),
                )
            )
            if inclusion.caveat not in caveats:
                caveats.append(inclusion.caveat)

            if scenario.population_size is not None:
                contributor = genotypes.analyze_suspect_is_contributor(
                    alleles, suspect, universe, scenario.population_size
                )
                c_p_e_h, c_p_e_not_h = genotypes.contributor_likelihoods(
                    alleles, suspect, universe
                )
                lines = [
                    ReportLine("P(E | suspect contributed)", c_p_e_h),
                    ReportLine("P(E | suspect did not contribute)", c_p_e_not_h),
                ]
                lines.extend(_result_lines(contributor, "suspect contributed"))
                sections.append(
                    ReportSection(
                        f"Suspect inclusion at {locus} "
                        f"(population of {scenario.population_size} candidates)",
                        lines=tuple(lines),
                    )
                )
                if contributor.caveat not in caveats:
                    caveats.append(contributor.caveat)

    total_pairs = genotypes.count_compatible_profile_pairs(
        scenario.mixture, scenario.universe
    )
    exclusion_count = genotypes.count_exclusion_combinations(
        scenario.mixture, scenario.suspect, scenario.universe
    )
    lines = [
        ReportLine("compatible contributor profile pairs:", str(total_pairs)),
        ReportLine("pairs excluding the suspect everywhere:", str(exclusion_count)),
    ]
    if exclusion_count:
        listing = genotypes.exclusion_combinations(
            scenario.mixture,
            scenario.suspect,
            scenario.universe,
            max_combinations=max_combinations,
        )
        shown = listing[:_LISTING_LIMIT]
        for pair in shown:
            lines.append(ReportLine("-", _profile_pair_text(pair)))
        if len(listing) > len(shown):
            lines.append(ReportLine("...", f"and {len(listing) - len(shown)} more"))
    sections.append(ReportSection("Exclusion combinations", lines=tuple(lines)))

    void_count, void_loci = genotypes.count_voids(scenario.mixture, scenario.suspect)
    sections.append(
        ReportSection(
            "Voids",
            lines=(
                ReportLine("count:", str(void_count)),
                ReportLine("loci:", ", ".join(void_loci) if void_loci else "none"),
            ),
        )
    )

    assumptions = ["exactly two contributors", "genotype frequencies as declared"]
    if scenario.population_size is not None:
        assumptions.append(f"candidate population of {scenario.population_size}")
    return RenderedReport(
        title=scenario.title,
        assumptions=tuple(assumptions),
        sections=tuple(sections),
        caveats=tuple(caveats),
    )


def _build_ball_two(scenario: BallTwoScenario) -> RenderedReport:
    result = balls.two_contributor_analysis(scenario.positions, scenario.alphabet_size)
    pair_count = balls.mixture_pair_count(scenario.positions, 0)
    section = ReportSection(
        "Profile inclusion",
        lines=(
            ReportLine("profile pairs producing the mixture:", str(pair_count)),
            ReportLine("prior P(H)", result.prior_h.value),
            ReportLine("P(E | H)", result.p_e_given_h.value),
            ReportLine("P(E | not H)", result.p_e_given_not_h.value),
            ReportLine("LR", result.lr),
            ReportLine("posterior P(H)", result.posterior_h.value),
        ),
    )
    return RenderedReport(
        title=scenario.title,
        assumptions=(
            "exactly two contributors",
            f"profiles have {scenario.positions} positions over an alphabet of "
            f"{scenario.alphabet_size}",
            "every position of the mixture shows two distinct values",
            "H: a profile matching the suspect's is one of the two contributor profiles",
        ),
        sections=(section,),
        caveats=(caveat_text(True, None),),
    )


BALL_K_CAVEAT = (
    "Each row conditions on a different number of contributors; at most one "
    "of those hypotheses can be true, yet every row can carry a very large "
    "likelihood ratio for the same evidence."
)


def _build_ball_k(scenario: BallKScenario) -> RenderedReport:
    rows = balls.contributor_table(
        scenario.k_values, scenario.pots, scenario.genotype_frequency
    )
    table = ReportTable(
        columns=("k", "P(E | H1)", "P(E | H2)", "LR"),
        rows=tuple(
            (str(row.k), row.p_e_h1, row.p_e_h2, row.lr) for row in rows
        ),
    )
    section = ReportSection(
        "Likelihood ratios by assumed contributor count", table=table
    )
    return RenderedReport(
        title=scenario.title,
        assumptions=(
            f"{scenario.pots} positions, one ball drawn per position",
            f"match frequency {exact_text(scenario.genotype_frequency)} per position",
            "H1: the suspect is among the k contributors; H2: k unknowns",
        ),
        sections=(section,),
        caveats=(BALL_K_CAVEAT,),
    )


def _build_case_report(scenario: CaseReportScenario) -> RenderedReport:
    void_count, void_loci = genotypes.count_voids(scenario.mixture, scenario.suspect)
    result = AnalysisResult(
        lr=Ratio(scenario.external_lr),
        prior=None,
        posterior=None,
        exhaustive=False,
        direction=None,
        caveat=caveat_text(False, None),
    )
    statement = render_expert_report(
        result,
        ReportAssumptions(
            assumed_contributors=scenario.assumed_contributors,
            void_count=void_count,
        ),
    )
    section = ReportSection(
        "Mixture summary",
        lines=(
            ReportLine("loci tested:", str(len(scenario.mixture.loci))),
            ReportLine("reported LR", Ratio(scenario.external_lr)),
            ReportLine("voids:", str(void_count)),
            ReportLine("void loci:", ", ".join(void_loci) if void_loci else "none"),
        ),
    )
    return RenderedReport(
        title=scenario.title,
        assumptions=(
            f"assumed number of contributors: {scenario.assumed_contributors}",
            "likelihood ratio supplied by external genotyping software, not recomputed",
            "contributors assumed unrelated to the suspect",
        ),
        sections=(section,),
        caveats=(result.caveat,),
        statement=statement,
    )


def build_report(
    scenario: Scenario,
    *,
    max_combinations: int = genotypes.DEFAULT_COMBINATION_CAP,
) -> RenderedReport:
    """Construct the report for any scenario kind."""
    if isinstance(scenario, ScreeningScenario):
        return _build_screening(scenario)
    if isinstance(scenario, LotteryScenario):
        return _build_lottery(scenario)
    if isinstance(scenario, MixtureScenario):
        return _build_mixture(scenario, max_combinations)
    if isinstance(scenario, BallTwoScenario):
        return _build_ball_two(scenario)
    if isinstance(scenario, BallKScenario):
        return _build_ball_k(scenario)
    if isinstance(scenario, CaseReportScenario):
        return _build_case_report(scenario)
    raise ValidationError(f"unknown scenario type: {type(scenario).__name__}")
