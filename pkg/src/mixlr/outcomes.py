"""Finite weighted outcome spaces and hypothesis-pair analysis.

A space is an explicit list of labelled outcomes with exact rational
weights summing to 1; hypotheses and evidence are subsets of the labels.
The point of the machinery is to make the gap between "the likelihood
ratio favours H over this particular alternative" and "the evidence makes
H more probable" directly computable: ``analyze_pair`` reports the ratio
for any disjoint pair of hypotheses alongside the posterior of the first
hypothesis against the *whole* space, and flags whether the pair actually
exhausts the possibilities. When it does not, the two can disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .bayes import (
    Prob,
    ProbativeDirection,
    Ratio,
    Rational,
    as_fraction,
    likelihood_ratio,
    probative_direction,
)
from .errors import (
    ConditioningOnNull,
    HypothesisOverlap,
    ImpossibleEvidence,
    SchemaError,
    ValidationError,
)


@dataclass(frozen=True)
class OutcomeSpace:
    """An ordered list of (label, weight) outcomes with weights summing to 1."""

    outcomes: tuple[tuple[str, Fraction], ...]

    def __post_init__(self) -> None:
        coerced = []
        seen: set[str] = set()
        for item in self.outcomes:
            label, weight = item
            if not isinstance(label, str) or not label:
                raise ValidationError("outcome labels must be non-empty strings")
            if label in seen:
                raise ValidationError(f"duplicate outcome label {label!r}")
            seen.add(label)
            w = as_fraction(weight)
            if w < 0:
                raise ValidationError(f"negative weight for outcome {label!r}")
            coerced.append((label, w))
        if sum((w for _, w in coerced), Fraction(0)) != 1:
            raise ValidationError("outcome weights must sum to exactly 1")
        object.__setattr__(self, "outcomes", tuple(coerced))
        object.__setattr__(self, "_weights", dict(coerced))

    @classmethod
    def uniform(cls, labels: Iterable[str]) -> OutcomeSpace:
        labels = tuple(labels)
        if not labels:
            raise ValidationError("an outcome space needs at least one outcome")
        n = len(labels)
        return cls(tuple((label, Fraction(1, n)) for label in labels))

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self._weights)

    def weight(self, label: str) -> Fraction:
        try:
            return self._weights[label]
        except KeyError:
            raise SchemaError(f"unknown outcome label {label!r}") from None


@dataclass(frozen=True)
class Event:
    """A subset of a space's outcome labels."""

    members: frozenset[str]

    def __post_init__(self) -> None:
        members = frozenset(self.members)
        for label in members:
            if not isinstance(label, str):
                raise ValidationError("event members must be strings")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, *labels: str) -> Event:
        return cls(frozenset(labels))


@dataclass(frozen=True)
class AnalysisResult:
    """Outcome of weighing evidence for one hypothesis against another.

    ``prior``, ``posterior``, and ``direction`` are None only for results
    built around an externally supplied likelihood ratio, where no prior
    exists to update.
    """

    lr: Ratio
    prior: Prob | None
    posterior: Prob | None
    exhaustive: bool
    direction: ProbativeDirection | None
    caveat: str


EXHAUSTIVE_CAVEAT = (
    "The hypotheses are mutually exclusive and exhaustive, so a likelihood "
    "ratio above 1 genuinely raises the probability of the prosecution "
    "hypothesis. How probable it ends up is still a question about the "
    "prior: with a low prior, even a very large likelihood ratio can leave "
    "the hypothesis unlikely."
)

NON_EXHAUSTIVE_CAVEAT = (
    "The hypotheses are not exhaustive, so this likelihood ratio is not a "
    "measure of the probative value of the evidence. It appears to provide "
    "support for the prosecution hypothesis over this particular defence "
    "hypothesis but may not provide support that the prosecution hypothesis "
    "is more likely to be true."
)

_DIRECTION_NOTES = {
    ProbativeDirection.SUPPORTS: (
        " Here the evidence in fact raises the probability of the "
        "prosecution hypothesis."
    ),
    ProbativeDirection.NEUTRAL: (
        " Here the evidence in fact leaves the probability of the "
        "prosecution hypothesis unchanged."
    ),
    ProbativeDirection.UNDERMINES: (
        " Here the evidence in fact lowers the probability of the "
        "prosecution hypothesis."
    ),
}


def caveat_text(exhaustive: bool, direction: ProbativeDirection | None = None) -> str:
    """Deterministic caveat wording for a result, from its flags alone."""
    if exhaustive:
        return EXHAUSTIVE_CAVEAT
    text = NON_EXHAUSTIVE_CAVEAT
    if direction is not None:
        text += _DIRECTION_NOTES[direction]
    return text


def _validated_members(space: OutcomeSpace, event: Event, what: str) -> frozenset[str]:
    unknown = event.members - space.labels
    if unknown:
        names = ", ".join(sorted(unknown))
        raise SchemaError(f"unknown outcome label(s): {names}", path=what)
    return event.members


def _mass(space: OutcomeSpace, members: frozenset[str]) -> Fraction:
    return sum((space.weight(label) for label in members), Fraction(0))


def probability(space: OutcomeSpace, event: Event) -> Prob:
    """Exact probability of an event: the sum of its members' weights."""
    return Prob(_mass(space, _validated_members(space, event, "event")))


def conditional(space: OutcomeSpace, event: Event, given: Event) -> Prob:
    """P(event | given), exactly."""
    e = _validated_members(space, event, "event")
    h = _validated_members(space, given, "given")
    p_h = _mass(space, h)
    if p_h == 0:
        raise ConditioningOnNull("conditioning event has probability zero")
    return Prob(_mass(space, e & h) / p_h)


def complement_event(space: OutcomeSpace, event: Event) -> Event:
    """The negation of an event within its space."""
    members = _validated_members(space, event, "event")
    return Event(space.labels - members)


def analyze_pair(
    space: OutcomeSpace,
    evidence: Event,
    h_pros: Event,
    h_def: Event,
) -> AnalysisResult:
    """Weigh evidence for a prosecution hypothesis against a defence hypothesis.

    The likelihood ratio compares the two hypotheses as given. The prior,
    posterior, and direction always describe ``h_pros`` against the whole
    space, because that is the quantity the ratio is commonly (and, for
    non-exhaustive pairs, wrongly) taken to speak to.
    """
    e = _validated_members(space, evidence, "evidence")
    hp = _validated_members(space, h_pros, "h_pros")
    hd = _validated_members(space, h_def, "h_def")
    if hp & hd:
        overlap = ", ".join(sorted(hp & hd))
        raise HypothesisOverlap(f"hypotheses overlap on: {overlap}")
    p_e = _mass(space, e)
    if p_e == 0:
        raise ImpossibleEvidence("evidence event has probability zero")
    lr = likelihood_ratio(
        conditional(space, evidence, h_pros),
        conditional(space, evidence, h_def),
    )
    prior = Prob(_mass(space, hp))
    posterior = Prob(_mass(space, hp & e) / p_e)
    exhaustive = (hp | hd) == space.labels
    direction = probative_direction(prior, posterior)
    return AnalysisResult(
        lr=lr,
        prior=prior,
        posterior=posterior,
        exhaustive=exhaustive,
        direction=direction,
        caveat=caveat_text(exhaustive, direction),
    )
