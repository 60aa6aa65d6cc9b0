"""Exact probability, odds, and likelihood-ratio arithmetic.

Every quantity here is an arbitrary-precision rational. No operation
rounds, and floats are refused outright so nothing on the analytic path
can silently lose exactness; decimal strings exist only in the display
layer.

The likelihood ratio of evidence E for hypothesis H against alternative A
is P(E|H) / P(E|A). Only when A is the negation of H does the ratio carry
its usual meaning: posterior odds of H equal the prior odds times the
ratio, so a ratio above 1 raises the probability of H. The operations
below implement both the probability form and the odds form of that
update; they agree exactly, which the test suite checks property-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

from .errors import (
    ImpossibleEvidence,
    IndeterminateLikelihoodRatio,
    ValidationError,
)

Rational = Fraction | int | str


def as_fraction(value: Rational) -> Fraction:
    """Coerce to an exact rational; floats are refused to avoid silent rounding."""
    if isinstance(value, bool):
        raise ValidationError(f"expected a rational number, got {value!r}")
    if isinstance(value, float):
        raise ValidationError(
            "floats are not accepted on the analytic path; "
            "pass a Fraction, an int, or an 'a/b' string"
        )
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational number: {value!r}") from exc
    raise ValidationError(f"expected a rational number, got {type(value).__name__}")


@dataclass(frozen=True, order=True)
class Prob:
    """An exact probability in [0, 1]."""

    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", as_fraction(self.value))
        if not 0 <= self.value <= 1:
            raise ValidationError(f"probability out of range [0, 1]: {self.value}")

    def complement(self) -> Prob:
        return Prob(1 - self.value)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Odds:
    """Odds in favour of a hypothesis, normalized to lowest terms."""

    in_favour: int
    against: int

    def __post_init__(self) -> None:
        f, a = self.in_favour, self.against
        if isinstance(f, bool) or isinstance(a, bool):
            raise ValidationError("odds must be a pair of integers")
        if not isinstance(f, int) or not isinstance(a, int):
            raise ValidationError("odds must be a pair of integers")
        if f < 0 or a < 0:
            raise ValidationError(f"odds must be nonnegative, got {f}:{a}")
        if f == 0 and a == 0:
            raise ValidationError("odds 0:0 are meaningless")
        g = gcd(f, a)
        object.__setattr__(self, "in_favour", f // g)
        object.__setattr__(self, "against", a // g)

    def __str__(self) -> str:
        return f"{self.in_favour}:{self.against}"


@dataclass(frozen=True)
class Ratio:
    """A nonnegative likelihood ratio; ``value is None`` marks an infinite one.

    An infinite ratio arises legitimately when the evidence is possible
    under the hypothesis but impossible under the alternative.
    """

    value: Fraction | None

    def __post_init__(self) -> None:
        if self.value is None:
            return
        v = as_fraction(self.value)
        if v < 0:
            raise ValidationError(f"likelihood ratio must be nonnegative: {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def infinite(cls) -> Ratio:
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def as_fraction(self) -> Fraction:
        if self.value is None:
            raise ValidationError("an infinite ratio has no finite value")
        return self.value

    def compare_to_one(self) -> int:
        """-1, 0, or 1 as the ratio is below, at, or above 1; infinite counts as above."""
        if self.value is None:
            return 1
        return (self.value > 1) - (self.value < 1)

    def __mul__(self, other: object) -> Ratio:
        if not isinstance(other, Ratio):
            return NotImplemented
        if self.is_infinite or other.is_infinite:
            finite = other if self.is_infinite else self
            if not finite.is_infinite and finite.value == 0:
                raise IndeterminateLikelihoodRatio(
                    "product of a zero and an infinite ratio is undefined"
                )
            return Ratio.infinite()
        return Ratio(self.value * other.value)

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)


class ProbativeDirection(Enum):
    """Whether evidence raised, left unchanged, or lowered a hypothesis's probability."""

    SUPPORTS = "supports"
    NEUTRAL = "neutral"
    UNDERMINES = "undermines"


def _prob(value: Prob | Rational) -> Prob:
    return value if isinstance(value, Prob) else Prob(as_fraction(value))


def likelihood_ratio(p_e_given_h: Prob | Rational, p_e_given_alt: Prob | Rational) -> Ratio:
    """P(E|H) / P(E|alternative), exactly; infinite when only the alternative is 0."""
    num = _prob(p_e_given_h).value
    den = _prob(p_e_given_alt).value
    if den == 0:
        if num == 0:
            raise IndeterminateLikelihoodRatio(
                "evidence is impossible under both hypotheses"
            )
        return Ratio.infinite()
    return Ratio(num / den)


def posterior_from_prior(
    prior: Prob | Rational,
    p_e_given_h: Prob | Rational,
    p_e_given_not_h: Prob | Rational,
) -> Prob:
    """P(H|E) = P(E|H)P(H) / (P(E|H)P(H) + P(E|not H)P(not H)), exactly."""
    p = _prob(prior).value
    eh = _prob(p_e_given_h).value
    enh = _prob(p_e_given_not_h).value
    numerator = eh * p
    denominator = numerator + enh * (1 - p)
    if denominator == 0:
        raise ImpossibleEvidence("evidence has probability zero under both branches")
    return Prob(numerator / denominator)


def update_odds(prior: Odds, lr: Ratio) -> Odds:
    """Posterior odds = likelihood ratio × prior odds, in lowest terms."""
    if lr.is_infinite:
        if prior.in_favour == 0:
            raise ValidationError("cannot apply an infinite ratio to odds of 0")
        return Odds(1, 0)
    v = lr.value
    return Odds(prior.in_favour * v.numerator, prior.against * v.denominator)


def odds_to_prob(odds: Odds) -> Prob:
    """Odds a:b become probability a/(a+b)."""
    return Prob(Fraction(odds.in_favour, odds.in_favour + odds.against))


def prob_to_odds(p: Prob | Rational) -> Odds:
    """Probability n/d (lowest terms) becomes odds n:(d-n)."""
    v = _prob(p).value
    return Odds(v.numerator, v.denominator - v.numerator)


def probative_direction(prior: Prob | Rational, posterior: Prob | Rational) -> ProbativeDirection:
    """Exact three-way comparison of posterior against prior."""
    a = _prob(prior).value
    b = _prob(posterior).value
    if b > a:
        return ProbativeDirection.SUPPORTS
    if b < a:
        return ProbativeDirection.UNDERMINES
    return ProbativeDirection.NEUTRAL
