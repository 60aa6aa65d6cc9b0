"""Closed-form analyses for numbered-ball mixture analogies.

A profile is a sequence of values, one per position, each drawn uniformly
from a finite alphabet. A two-contributor mixture reveals, per position,
only the *set* of the two contributors' values. These closed forms make a
point that generalizes to mixed DNA profiles: a suspect whose value
appears in every position of the mixture earns an enormous likelihood
ratio, yet the probability that the suspect's full profile is actually one
of the two contributing profiles is only 1/2^(n-1), because every way of
splitting the per-position values between two contributors is equally
good. The single-source case has no such splitting ambiguity, which is
why its high ratios really do translate into high posteriors once a
population prior is supplied.

All arithmetic is exact; position counts are capped at ``MAX_POSITIONS``
to bound the size of the big integers involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .bayes import (
    Prob,
    Ratio,
    Rational,
    as_fraction,
    odds_to_prob,
    prob_to_odds,
    probative_direction,
    update_odds,
)
from .errors import ValidationError
from .outcomes import AnalysisResult, caveat_text

MAX_POSITIONS = 256


def _check_int(value: object, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer")
    if value < minimum:
        raise ValidationError(f"{name} must be at least {minimum}, got {value}")
    return value


def _check_positions(n: int, name: str = "n_positions") -> int:
    _check_int(n, name, 1)
    if n > MAX_POSITIONS:
        raise ValidationError(f"{name} is capped at {MAX_POSITIONS}, got {n}")
    return n


@dataclass(frozen=True)
class BallScenario:
    """Parameters of a numbered-ball model.

    ``repeated_positions`` counts positions whose two contributor values
    coincide, so the mixture shows a single value there.
    """

    n_positions: int
    alphabet_size: int = 10
    k_contributors: int = 2
    repeated_positions: int = 0

    def __post_init__(self) -> None:
        _check_positions(self.n_positions)
        _check_int(self.alphabet_size, "alphabet_size", 2)
        _check_int(self.k_contributors, "k_contributors", 1)
        _check_int(self.repeated_positions, "repeated_positions", 0)
        if self.repeated_positions > self.n_positions:
            raise ValidationError(
                "repeated_positions cannot exceed n_positions "
                f"({self.repeated_positions} > {self.n_positions})"
            )


def single_profile_analysis(
    n_positions: int,
    alphabet_size: int = 10,
    population_size: int = 1,
) -> AnalysisResult:
    """Single-source trace whose profile matches the suspect's exactly.

    The likelihood ratio is alphabet_size^n (the inverse random-match
    probability); the prior is 1/population_size.
    """
    _check_positions(n_positions)
    _check_int(alphabet_size, "alphabet_size", 2)
    _check_int(population_size, "population_size", 1)
    lr = Ratio(Fraction(alphabet_size) ** n_positions)
    prior = Prob(Fraction(1, population_size))
    posterior = odds_to_prob(update_odds(prob_to_odds(prior), lr))
    direction = probative_direction(prior, posterior)
    return AnalysisResult(
        lr=lr,
        prior=prior,
        posterior=posterior,
        exhaustive=True,
        direction=direction,
        caveat=caveat_text(True, direction),
    )


def mixture_pair_count(n_positions: int, repeated_positions: int = 0) -> int:
    """Unordered profile pairs that reproduce a two-contributor mixture.

    2^(n-1-r) with r repeated positions: each position showing two values
    can hand either value to either contributor, and the global swap of
    the two contributors halves the count. When every position repeats,
    both profiles are forced and the count is 1.
    """
    _check_positions(n_positions)
    _check_int(repeated_positions, "repeated_positions", 0)
    if repeated_positions > n_positions:
        raise ValidationError(
            "repeated_positions cannot exceed n_positions "
            f"({repeated_positions} > {n_positions})"
        )
    if repeated_positions == n_positions:
        return 1
    return 2 ** (n_positions - 1 - repeated_positions)


@dataclass(frozen=True)
class TwoContributorResult:
    """Exact quantities for the two-contributor, all-positions-match case."""

    n_positions: int
    alphabet_size: int
    prior_h: Prob
    p_e_given_h: Prob
    p_e_given_not_h: Prob
    lr: Ratio
    posterior_h: Prob


def two_contributor_analysis(n_positions: int, alphabet_size: int = 10) -> TwoContributorResult:
    """Suspect's values appear at every position of a two-contributor mixture.

    H is "a profile matching the suspect's is one of the two contributor
    profiles", with every position showing two distinct values. The prior
    treats all unordered pairs of profiles as equally likely. For a single
    position the only compatible pair contains the matching profile, so
    the ratio is infinite and the posterior is 1; that case is reported,
    not rejected.
    """
    _check_positions(n_positions)
    _check_int(alphabet_size, "alphabet_size", 2)
    total = Fraction(alphabet_size) ** n_positions
    if total < 3:
        raise ValidationError(
            "alphabet_size^n_positions must be at least 3 for the pair prior"
        )
    prior = Prob(2 / (total - 1))
    p_e_given_h = Prob(1 / total)
    if n_positions == 1:
        p_e_given_not_h = Prob(Fraction(0))
        lr = Ratio.infinite()
    else:
        splits = 2 ** (n_positions - 1) - 1
        p_e_given_not_h = Prob(Fraction(splits) / ((total / 2) * (total - 3)))
        lr = Ratio((total - 3) / (2 * splits))
    posterior = odds_to_prob(update_odds(prob_to_odds(prior), lr))
    return TwoContributorResult(
        n_positions=n_positions,
        alphabet_size=alphabet_size,
        prior_h=prior,
        p_e_given_h=p_e_given_h,
        p_e_given_not_h=p_e_given_not_h,
        lr=lr,
        posterior_h=posterior,
    )


@dataclass(frozen=True)
class ContributorTableRow:
    """One row of the contributor-count sensitivity table."""

    k: int
    p_e_h1: Fraction
    p_e_h2: Fraction
    lr: Fraction


def k_contributor_analysis(
    k: int,
    n_pots: int = 20,
    genotype_freq: Rational = Fraction(1, 10),
) -> ContributorTableRow:
    """Single-draw mixture with k contributors, one of them hypothetically the suspect.

    One ball is drawn per pot. Under H1 (suspect among the k contributors)
    the drawn value matches the suspect's at a pot with probability
    1/k + (k-1)·f/k; under H2 (k unknowns) with probability f. Raising to
    the number of pots gives the likelihoods; their ratio falls rapidly
    with k even though it stays large for a long time.

    ``genotype_freq`` may be 1, in which case the evidence is uninformative
    and the ratio is exactly 1.
    """
    _check_int(k, "k", 1)
    _check_positions(n_pots, "n_pots")
    f = as_fraction(genotype_freq)
    if not 0 < f <= 1:
        raise ValidationError(f"genotype_freq must be in (0, 1], got {f}")
    per_pot = (1 + (k - 1) * f) / Fraction(k)
    p_e_h1 = per_pot**n_pots
    p_e_h2 = f**n_pots
    return ContributorTableRow(k=k, p_e_h1=p_e_h1, p_e_h2=p_e_h2, lr=p_e_h1 / p_e_h2)


def contributor_table(
    k_values: Iterable[int] | Sequence[int],
    n_pots: int = 20,
    genotype_freq: Rational = Fraction(1, 10),
) -> tuple[ContributorTableRow, ...]:
    """One table row per contributor count, in input order.

    An empty ``k_values`` yields an empty table, which downstream
    renderers accept as a valid (empty) document.
    """
    return tuple(k_contributor_analysis(k, n_pots, genotype_freq) for k in k_values)
