"""Scenario documents: JSON schema, exact parsing, strict validation.

A scenario is a JSON object with a ``kind`` discriminator and kind-specific
fields. Rational quantities must be JSON strings ("1/10", "0.55", "4e6")
or integers; JSON floats are rejected so nothing silently rounds. Unknown
fields are errors, and every schema error names the offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import SchemaError, ValidationError
from .genotypes import (
    Allele,
    Genotype,
    GenotypeUniverse,
    LocusUniverse,
    MixtureProfile,
    Profile,
)
from .outcomes import Event, OutcomeSpace

KIND_SCREENING = "screening"
KIND_LOTTERY = "lottery"
KIND_MIXTURE = "genotype-mixture"
KIND_BALL_TWO = "ball-two"
KIND_BALL_K = "ball-k"
KIND_CASE_REPORT = "table-1-report"

NEGATION = "negation"  # defence value meaning "the negation of the prosecution event"


def _join(path: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _object(value: object, path: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError("expected an object", path=path)
    return value


def _array(value: object, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError("expected an array", path=path)
    return value


def _string(value: object, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise SchemaError("expected a non-empty string", path=path)
    return value


def _integer(value: object, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError("expected an integer", path=path)
    if minimum is not None and value < minimum:
        raise SchemaError(f"must be at least {minimum}", path=path)
    return value


def _rational(value: object, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError("expected an exact rational", path=path)
    if isinstance(value, float):
        raise SchemaError(
            "floats are not exact; write the value as a string like \"1/10\" or \"0.55\"",
            path=path,
        )
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not a rational number: {value!r}", path=path) from None
    raise SchemaError("expected an exact rational", path=path)


def _no_unknown_fields(obj: dict, allowed: set[str], path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        names = ", ".join(sorted(unknown))
        raise SchemaError(f"unknown field(s): {names}", path=path)


def _require(obj: dict, key: str, path: str) -> object:
    if key not in obj:
        raise SchemaError("missing required field", path=_join(path, key))
    return obj[key]


@dataclass(frozen=True)
class ScreeningScenario:
    title: str
    prior: Fraction
    p_evidence_given_h: Fraction
    p_evidence_given_not_h: Fraction


@dataclass(frozen=True)
class LotteryQuery:
    evidence: str
    prosecution: str
    defence: str | None  # None means the negation of the prosecution event


@dataclass(frozen=True)
class LotteryScenario:
    title: str
    space: OutcomeSpace
    events: tuple[tuple[str, Event], ...]
    queries: tuple[LotteryQuery, ...]

    def event(self, name: str) -> Event:
        for label, event in self.events:
            if label == name:
                return event
        raise SchemaError(f"unknown event {name!r}", path="queries")


@dataclass(frozen=True)
class MixtureScenario:
    title: str
    universe: GenotypeUniverse
    mixture: MixtureProfile
    suspect: Profile
    population_size: int | None


@dataclass(frozen=True)
class BallTwoScenario:
    title: str
    positions: int
    alphabet_size: int


@dataclass(frozen=True)
class BallKScenario:
    title: str
    k_values: tuple[int, ...]
    pots: int
    genotype_frequency: Fraction


@dataclass(frozen=True)
class CaseReportScenario:
    title: str
    mixture: MixtureProfile
    suspect: Profile
    external_lr: Fraction
    assumed_contributors: int


Scenario = (
    ScreeningScenario
    | LotteryScenario
    | MixtureScenario
    | BallTwoScenario
    | BallKScenario
    | CaseReportScenario
)


def _parse_screening(obj: dict) -> ScreeningScenario:
    _no_unknown_fields(
        obj,
        {"kind", "title", "prior", "p_evidence_given_h", "p_evidence_given_not_h"},
        path="",
    )
    prior = _rational(_require(obj, "prior", ""), "prior")
    p_h = _rational(_require(obj, "p_evidence_given_h", ""), "p_evidence_given_h")
    p_not = _rational(
        _require(obj, "p_evidence_given_not_h", ""), "p_evidence_given_not_h"
    )
    for name, value in (
        ("prior", prior),
        ("p_evidence_given_h", p_h),
        ("p_evidence_given_not_h", p_not),
    ):
        if not 0 <= value <= 1:
            raise SchemaError("probability out of range [0, 1]", path=name)
    return ScreeningScenario(
        title=_string(obj.get("title", "Screening analysis"), "title"),
        prior=prior,
        p_evidence_given_h=p_h,
        p_evidence_given_not_h=p_not,
    )


def _parse_lottery(obj: dict) -> LotteryScenario:
    _no_unknown_fields(obj, {"kind", "title", "outcomes", "events", "queries"}, path="")
    outcome_items = _array(_require(obj, "outcomes", ""), "outcomes")
    outcomes = []
    for i, item in enumerate(outcome_items):
        path = _join("outcomes", i)
        entry = _object(item, path)
        _no_unknown_fields(entry, {"label", "weight"}, path)
        outcomes.append(
            (
                _string(_require(entry, "label", path), _join(path, "label")),
                _rational(_require(entry, "weight", path), _join(path, "weight")),
            )
        )
    try:
        space = OutcomeSpace(tuple(outcomes))
    except ValidationError as exc:
        raise SchemaError(str(exc), path="outcomes") from None

    events_obj = _object(_require(obj, "events", ""), "events")
    events = []
    for name, members in events_obj.items():
        path = _join("events", name)
        labels = [_string(m, _join(path, i)) for i, m in enumerate(_array(members, path))]
        event = Event(frozenset(labels))
        unknown = event.members - space.labels
        if unknown:
            raise SchemaError(
                f"unknown outcome label(s): {', '.join(sorted(unknown))}", path=path
            )
        events.append((name, event))

    names = {name for name, _ in events}
    queries = []
    for i, item in enumerate(_array(_require(obj, "queries", ""), "queries")):
        path = _join("queries", i)
        entry = _object(item, path)
        _no_unknown_fields(entry, {"evidence", "prosecution", "defence"}, path)
        evidence = _string(_require(entry, "evidence", path), _join(path, "evidence"))
        prosecution = _string(
            _require(entry, "prosecution", path), _join(path, "prosecution")
        )
        defence = _string(_require(entry, "defence", path), _join(path, "defence"))
        for field, name in (("evidence", evidence), ("prosecution", prosecution)):
            if name not in names:
                raise SchemaError(f"unknown event {name!r}", path=_join(path, field))
        if defence != NEGATION and defence not in names:
            raise SchemaError(
                f"unknown event {defence!r} (use \"{NEGATION}\" for the negation)",
                path=_join(path, "defence"),
            )
        queries.append(
            LotteryQuery(
                evidence=evidence,
                prosecution=prosecution,
                defence=None if defence == NEGATION else defence,
            )
        )
    return LotteryScenario(
        title=_string(obj.get("title", "Lottery analysis"), "title"),
        space=space,
        events=tuple(events),
        queries=tuple(queries),
    )


def _parse_genotype(value: object, path: str) -> Genotype:
    pair = _array(value, path)
    if len(pair) != 2:
        raise SchemaError("a genotype is a two-element array of allele strings", path=path)
    return Genotype(
        Allele(_string(pair[0], _join(path, 0))),
        Allele(_string(pair[1], _join(path, 1))),
    )


def _parse_locus_map(obj: dict, loci: tuple[str, ...], field: str) -> dict:
    value = _object(_require(obj, field, ""), field)
    if set(value) != set(loci):
        raise SchemaError(
            "locus keys must match the declared loci exactly", path=field
        )
    return value


def _parse_loci(obj: dict) -> tuple[str, ...]:
    loci = tuple(
        _string(item, _join("loci", i))
        for i, item in enumerate(_array(_require(obj, "loci", ""), "loci"))
    )
    if len(set(loci)) != len(loci):
        raise SchemaError("duplicate locus", path="loci")
    return loci


def _parse_mixture_profile(obj: dict, loci: tuple[str, ...]) -> MixtureProfile:
    raw = _parse_locus_map(obj, loci, "mixture")
    observed = []
    for locus in loci:
        path = _join("mixture", locus)
        alleles = [
            Allele(_string(a, _join(path, i)))
            for i, a in enumerate(_array(raw[locus], path))
        ]
        if not alleles:
            raise SchemaError("allele set is empty", path=path)
        observed.append(frozenset(alleles))
    return MixtureProfile(loci, tuple(observed))


def _parse_suspect_profile(obj: dict, loci: tuple[str, ...]) -> Profile:
    raw = _parse_locus_map(obj, loci, "suspect")
    return Profile(
        loci,
        tuple(_parse_genotype(raw[locus], _join("suspect", locus)) for locus in loci),
    )


def _parse_mixture(obj: dict) -> MixtureScenario:
    _no_unknown_fields(
        obj,
        {"kind", "title", "loci", "universe", "mixture", "suspect", "population_size"},
        path="",
    )
    loci = _parse_loci(obj)
    universe_raw = _parse_locus_map(obj, loci, "universe")
    universes = []
    for locus in loci:
        path = _join("universe", locus)
        entries = []
        for i, item in enumerate(_array(universe_raw[locus], path)):
            entry_path = _join(path, i)
            entry = _object(item, entry_path)
            _no_unknown_fields(entry, {"genotype", "frequency"}, entry_path)
            entries.append(
                (
                    _parse_genotype(
                        _require(entry, "genotype", entry_path),
                        _join(entry_path, "genotype"),
                    ),
                    _rational(
                        _require(entry, "frequency", entry_path),
                        _join(entry_path, "frequency"),
                    ),
                )
            )
        try:
            universes.append(LocusUniverse(locus, tuple(entries)))
        except ValidationError as exc:
            raise SchemaError(str(exc), path=path) from None
    universe = GenotypeUniverse(tuple(universes))
    mixture = _parse_mixture_profile(obj, loci)
    suspect = _parse_suspect_profile(obj, loci)
    for locus in loci:
        genotype = suspect.genotype_at(locus)
        if genotype not in universe.locus(locus):
            raise SchemaError(
                f"suspect genotype {genotype.text()} is not in the universe",
                path=_join("suspect", locus),
            )
    population = obj.get("population_size")
    if population is not None:
        population = _integer(population, "population_size", minimum=2)
    return MixtureScenario(
        title=_string(obj.get("title", "Mixture analysis"), "title"),
        universe=universe,
        mixture=mixture,
        suspect=suspect,
        population_size=population,
    )


def _parse_ball_two(obj: dict) -> BallTwoScenario:
    _no_unknown_fields(obj, {"kind", "title", "positions", "alphabet_size"}, path="")
    return BallTwoScenario(
        title=_string(obj.get("title", "Two-contributor mixture analysis"), "title"),
        positions=_integer(_require(obj, "positions", ""), "positions", minimum=1),
        alphabet_size=_integer(obj.get("alphabet_size", 10), "alphabet_size", minimum=2),
    )


def _parse_ball_k(obj: dict) -> BallKScenario:
    _no_unknown_fields(
        obj, {"kind", "title", "k_values", "pots", "genotype_frequency"}, path=""
    )
    k_values = tuple(
        _integer(item, _join("k_values", i), minimum=1)
        for i, item in enumerate(_array(_require(obj, "k_values", ""), "k_values"))
    )
    frequency = _rational(obj.get("genotype_frequency", "1/10"), "genotype_frequency")
    if not 0 < frequency <= 1:
        raise SchemaError("must be in (0, 1]", path="genotype_frequency")
    return BallKScenario(
        title=_string(obj.get("title", "Contributor-count sensitivity table"), "title"),
        k_values=k_values,
        pots=_integer(obj.get("pots", 20), "pots", minimum=1),
        genotype_frequency=frequency,
    )


def _parse_case_report(obj: dict) -> CaseReportScenario:
    _no_unknown_fields(
        obj,
        {"kind", "title", "loci", "mixture", "suspect", "external_lr", "assumed_contributors"},
        path="",
    )
    loci = _parse_loci(obj)
    mixture = _parse_mixture_profile(obj, loci)
    suspect = _parse_suspect_profile(obj, loci)
    external_lr = _rational(_require(obj, "external_lr", ""), "external_lr")
    if external_lr < 0:
        raise SchemaError("must be nonnegative", path="external_lr")
    return CaseReportScenario(
        title=_string(obj.get("title", "Casework report"), "title"),
        mixture=mixture,
        suspect=suspect,
        external_lr=external_lr,
        assumed_contributors=_integer(
            _require(obj, "assumed_contributors", ""), "assumed_contributors", minimum=1
        ),
    )


_PARSERS: dict[str, object] = {
    KIND_SCREENING: _parse_screening,
    KIND_LOTTERY: _parse_lottery,
    KIND_MIXTURE: _parse_mixture,
    KIND_BALL_TWO: _parse_ball_two,
    KIND_BALL_K: _parse_ball_k,
    KIND_CASE_REPORT: _parse_case_report,
}


def parse_scenario(data: object) -> Scenario:
    """Validate and build a scenario from decoded JSON."""
    obj = _object(data, "")
    kind = _string(_require(obj, "kind", ""), "kind")
    parser = _PARSERS.get(kind)
    if parser is None:
        known = ", ".join(sorted(_PARSERS))
        raise SchemaError(f"unknown kind {kind!r}; expected one of: {known}", path="kind")
    return parser(obj)


def parse_scenario_text(text: str, *, source: str = "scenario") -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}", path=source) from None
    return parse_scenario(data)


def load_scenario(path: str | Path) -> Scenario:
    """Read, validate, and build a scenario from a JSON file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read scenario file: {exc}", path=str(path)) from None
    return parse_scenario_text(text, source=str(path))
