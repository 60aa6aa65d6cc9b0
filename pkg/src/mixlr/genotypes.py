"""Genotype and mixture data model with exact contributor enumeration.

A two-person mixture shows, per locus, only the set of alleles present.
This module enumerates every unordered pair of genotypes whose combined
alleles reproduce that set exactly, and turns weighted counts over those
pairs into priors, likelihood ratios, and posteriors for the two inclusion
hypotheses that are habitually conflated:

* "a person with the suspect's genotype is one of the contributors", which
  has a well-defined prior with no extra assumptions, and
* "the suspect personally is a contributor", whose prior only exists once
  a candidate population size is assumed.

Contributor pairs are modelled as unordered multisets of genotypes (order
of contributors carries no information) weighted by the product of the two
genotype frequencies. With uniform frequencies every multiset is equally
likely, so probabilities reduce to counting multisets. An independent
enumeration of the same quantities lives in the oracle module.

Allele designations are opaque strings compared by exact equality, so
microvariants like "9.3" survive round-trips. Sorting is numeric-aware
when a designation parses as a number, purely for stable human-friendly
output ordering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .bayes import (
    Prob,
    Ratio,
    as_fraction,
    odds_to_prob,
    prob_to_odds,
    probative_direction,
    update_odds,
)
from .display import decimal_text
from .errors import (
    EnumerationTooLarge,
    ImpossibleEvidence,
    SchemaError,
    ValidationError,
)
from .outcomes import AnalysisResult, caveat_text

DEFAULT_COMBINATION_CAP = 10_000_000


@dataclass(frozen=True)
class Allele:
    """One observed allele designation at a locus, e.g. "14" or "9.3"."""

    designation: str

    def __post_init__(self) -> None:
        if not isinstance(self.designation, str) or not self.designation:
            raise ValidationError("allele designations must be non-empty strings")

    @property
    def sort_key(self) -> tuple[int, Fraction, str]:
        try:
            return (0, Fraction(self.designation), self.designation)
        except ValueError:
            return (1, Fraction(0), self.designation)

    def __lt__(self, other: "Allele") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.designation


def _as_allele(value: Allele | str) -> Allele:
    return value if isinstance(value, Allele) else Allele(value)


@dataclass(frozen=True)
class Genotype:
    """An unordered pair of alleles, stored in canonical order."""

    first: Allele
    second: Allele

    def __post_init__(self) -> None:
        a = _as_allele(self.first)
        b = _as_allele(self.second)
        if b.sort_key < a.sort_key:
            a, b = b, a
        object.__setattr__(self, "first", a)
        object.__setattr__(self, "second", b)

    @property
    def homozygous(self) -> bool:
        return self.first == self.second

    @property
    def alleles(self) -> frozenset[Allele]:
        return frozenset((self.first, self.second))

    @property
    def sort_key(self) -> tuple:
        return (self.first.sort_key, self.second.sort_key)

    def text(self) -> str:
        return f"({self.first},{self.second})"

    def __lt__(self, other: "Genotype") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class LocusUniverse:
    """The genotypes that exist at one locus, with exact frequencies summing to 1."""

    locus: str
    entries: tuple[tuple[Genotype, Fraction], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.locus, str) or not self.locus:
            raise ValidationError("locus names must be non-empty strings")
        coerced = []
        seen: set[Genotype] = set()
        for genotype, frequency in self.entries:
            if not isinstance(genotype, Genotype):
                raise ValidationError("universe entries must pair a Genotype with a frequency")
            if genotype in seen:
                raise ValidationError(
                    f"duplicate genotype {genotype.text()} at locus {self.locus}"
                )
            seen.add(genotype)
            f = as_fraction(frequency)
            if f <= 0:
                raise ValidationError(
                    f"genotype frequency must be positive, got {f} for {genotype.text()}"
                )
            coerced.append((genotype, f))
        if not coerced:
            raise ValidationError(f"locus {self.locus} has no genotypes")
        if sum((f for _, f in coerced), Fraction(0)) != 1:
            raise ValidationError(
                f"genotype frequencies at locus {self.locus} must sum to exactly 1"
            )
        object.__setattr__(self, "entries", tuple(coerced))
        object.__setattr__(self, "_frequencies", dict(coerced))

    @classmethod
    def uniform(cls, locus: str, genotypes: Iterable[Genotype]) -> LocusUniverse:
        genotypes = tuple(genotypes)
        n = len(genotypes)
        if n == 0:
            raise ValidationError(f"locus {locus} has no genotypes")
        return cls(locus, tuple((g, Fraction(1, n)) for g in genotypes))

    @property
    def genotypes(self) -> tuple[Genotype, ...]:
        return tuple(g for g, _ in self.entries)

    def frequency(self, genotype: Genotype) -> Fraction:
        try:
            return self._frequencies[genotype]
        except KeyError:
            raise ValidationError(
                f"genotype {genotype.text()} is not in the universe at locus {self.locus}"
            ) from None

    def __contains__(self, genotype: Genotype) -> bool:
        return genotype in self._frequencies


@dataclass(frozen=True)
class GenotypeUniverse:
    """Per-locus genotype universes over an ordered locus list."""

    universes: tuple[LocusUniverse, ...]

    def __post_init__(self) -> None:
        names = [u.locus for u in self.universes]
        if len(names) != len(set(names)):
            raise ValidationError("duplicate locus in genotype universe")
        object.__setattr__(self, "_by_locus", {u.locus: u for u in self.universes})

    @property
    def loci(self) -> tuple[str, ...]:
        return tuple(u.locus for u in self.universes)

    def locus(self, name: str) -> LocusUniverse:
        try:
            return self._by_locus[name]
        except KeyError:
            raise SchemaError(f"unknown locus {name!r}") from None


@dataclass(frozen=True)
class Profile:
    """One genotype per locus, over an ordered locus list."""

    loci: tuple[str, ...]
    genotypes: tuple[Genotype, ...]

    def __post_init__(self) -> None:
        if len(self.loci) != len(self.genotypes):
            raise ValidationError("profile loci and genotypes differ in length")
        if len(set(self.loci)) != len(self.loci):
            raise ValidationError("duplicate locus in profile")
        object.__setattr__(self, "_by_locus", dict(zip(self.loci, self.genotypes)))

    def genotype_at(self, locus: str) -> Genotype:
        try:
            return self._by_locus[locus]
        except KeyError:
            raise SchemaError(f"profile has no locus {locus!r}") from None

    @property
    def sort_key(self) -> tuple:
        return tuple(g.sort_key for g in self.genotypes)

    def text(self) -> str:
        return " ".join(g.text() for g in self.genotypes)


@dataclass(frozen=True)
class MixtureProfile:
    """Per-locus sets of alleles observed in a mixed sample."""

    loci: tuple[str, ...]
    observed: tuple[frozenset[Allele], ...]

    def __post_init__(self) -> None:
        if len(self.loci) != len(self.observed):
            raise ValidationError("mixture loci and allele sets differ in length")
        if len(set(self.loci)) != len(self.loci):
            raise ValidationError("duplicate locus in mixture profile")
        coerced = []
        for locus, alleles in zip(self.loci, self.observed):
            alleles = frozenset(_as_allele(a) for a in alleles)
            if not alleles:
                raise ValidationError(f"mixture allele set at locus {locus} is empty")
            coerced.append(alleles)
        object.__setattr__(self, "observed", tuple(coerced))
        object.__setattr__(self, "_by_locus", dict(zip(self.loci, coerced)))

    def alleles_at(self, locus: str) -> frozenset[Allele]:
        try:
            return self._by_locus[locus]
        except KeyError:
            raise SchemaError(f"mixture has no locus {locus!r}") from None


GenotypePair = tuple[Genotype, Genotype]
ProfilePair = tuple[Profile, Profile]


def _allele_set(values: Iterable[Allele | str]) -> frozenset[Allele]:
    alleles = frozenset(_as_allele(v) for v in values)
    if not alleles:
        raise ValidationError("mixture allele set is empty")
    return alleles


def _ordered_genotype_pair(a: Genotype, b: Genotype) -> GenotypePair:
    return (a, b) if a.sort_key <= b.sort_key else (b, a)


def compatible_pairs(
    mixture_alleles: Iterable[Allele | str],
    universe: LocusUniverse,
) -> tuple[GenotypePair, ...]:
    """All unordered genotype pairs whose combined alleles equal the mixture set.

    A pair may repeat a genotype (both contributors can share it). Output
    order is canonical regardless of universe order.
    """
    target = _allele_set(mixture_alleles)
    genotypes = universe.genotypes
    found = []
    for i, g1 in enumerate(genotypes):
        for g2 in genotypes[i:]:
            if g1.alleles | g2.alleles == target:
                found.append(_ordered_genotype_pair(g1, g2))
    found.sort(key=lambda pair: (pair[0].sort_key, pair[1].sort_key))
    return tuple(found)


def _pair_weight(pair: GenotypePair, universe: LocusUniverse) -> Fraction:
    return universe.frequency(pair[0]) * universe.frequency(pair[1])


def _total_pair_weight(universe: LocusUniverse) -> Fraction:
    # sum over unordered multisets {g1,g2} of f1*f2 = (1 + sum f^2) / 2
    square_sum = sum((f * f for _, f in universe.entries), Fraction(0))
    return (1 + square_sum) / 2


def inclusion_posterior(
    mixture_alleles: Iterable[Allele | str],
    suspect_genotype: Genotype,
    universe: LocusUniverse,
) -> Prob:
    """Probability that a compatible contributor pair contains the suspect's genotype.

    Weighted share of the compatible pairs that contain the genotype; with
    uniform frequencies this is a plain count ratio.
    """
    if suspect_genotype not in universe:
        raise ValidationError(
            f"suspect genotype {suspect_genotype.text()} is not in the universe "
            f"at locus {universe.locus}"
        )
    combos = compatible_pairs(mixture_alleles, universe)
    if not combos:
        raise ImpossibleEvidence(
            "no pair of genotypes in the universe reproduces the mixture"
        )
    total = sum((_pair_weight(c, universe) for c in combos), Fraction(0))
    containing = sum(
        (_pair_weight(c, universe) for c in combos if suspect_genotype in c),
        Fraction(0),
    )
    return Prob(containing / total)


def inclusion_likelihoods(
    mixture_alleles: Iterable[Allele | str],
    suspect_genotype: Genotype,
    universe: LocusUniverse,
) -> tuple[Fraction, Fraction | None]:
    """(P(E | genotype included), P(E | genotype not included)).

    The second term is None when every genotype pair contains the suspect
    genotype (a single-genotype universe), where the conditioning event is
    empty.
    """
    if suspect_genotype not in universe:
        raise ValidationError(
            f"suspect genotype {suspect_genotype.text()} is not in the universe "
            f"at locus {universe.locus}"
        )
    combos = compatible_pairs(mixture_alleles, universe)
    if not combos:
        raise ImpossibleEvidence(
            "no pair of genotypes in the universe reproduces the mixture"
        )
    f_s = universe.frequency(suspect_genotype)
    total = _total_pair_weight(universe)
    with_s = f_s  # sum over g of f_s * f_g
    without_s = total - with_s
    e_with = sum(
        (_pair_weight(c, universe) for c in combos if suspect_genotype in c),
        Fraction(0),
    )
    e_without = sum(
        (_pair_weight(c, universe) for c in combos if suspect_genotype not in c),
        Fraction(0),
    )
    p_e_given_h = e_with / with_s
    if without_s == 0:
        return p_e_given_h, None
    return p_e_given_h, e_without / without_s


def analyze_profile_in_mixture(
    mixture_alleles: Iterable[Allele | str],
    suspect_genotype: Genotype,
    universe: LocusUniverse,
) -> AnalysisResult:
    """Analysis for: a person with the suspect's genotype is one of the two contributors.

    The hypothesis and its negation are exhaustive, and the prior is fixed
    by the contributor model itself (the weighted share of genotype pairs
    containing the genotype), so the posterior is meaningful without any
    information about the suspect. It equals ``inclusion_posterior``.
    """
    p_e_h, p_e_not_h = inclusion_likelihoods(mixture_alleles, suspect_genotype, universe)
    f_s = universe.frequency(suspect_genotype)
    prior = Prob(f_s / _total_pair_weight(universe))
    if p_e_not_h is None:
        lr = Ratio.infinite()
    elif p_e_not_h == 0:
        lr = Ratio.infinite()
    else:
        lr = Ratio(p_e_h / p_e_not_h)
    if lr.is_infinite and p_e_h == 0:
        raise ImpossibleEvidence("evidence impossible whether or not the genotype is included")
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


def contributor_likelihoods(
    mixture_alleles: Iterable[Allele | str],
    suspect_genotype: Genotype,
    universe: LocusUniverse,
) -> tuple[Fraction, Fraction]:
    """(P(E | suspect contributes), P(E | suspect does not contribute)).

    The non-contributor term follows the conventional casework arithmetic:
    pairs without the suspect's genotype keep their weight among
    no-suspect-genotype pairs, and each compatible pair that does contain
    the genotype contributes its weight discounted by the genotype
    frequency once per occurrence (a non-suspect person has to carry it).
    That construction is a heuristic, not a normalized distribution, and
    the quantity it yields can exceed 1 for common genotypes; it is kept
    exactly as practised because the whole point of computing it is to
    show what the resulting ratio does and does not mean.
    """
    if suspect_genotype not in universe:
        raise ValidationError(
            f"suspect genotype {suspect_genotype.text()} is not in the universe "
            f"at locus {universe.locus}"
        )
    combos = compatible_pairs(mixture_alleles, universe)
    if not combos:
        raise ImpossibleEvidence(
            "no pair of genotypes in the universe reproduces the mixture"
        )
    f_s = universe.frequency(suspect_genotype)
    total = _total_pair_weight(universe)
    without_s = total - f_s
    if without_s == 0:
        raise ValidationError(
            "the universe needs at least two genotypes to form the "
            "non-contributor likelihood"
        )
    e_with = Fraction(0)
    e_without = Fraction(0)
    carried = Fraction(0)
    for c in combos:
        w = _pair_weight(c, universe)
        occurrences = (c[0] == suspect_genotype) + (c[1] == suspect_genotype)
        if occurrences:
            e_with += w
            carried += w * f_s**occurrences
        else:
            e_without += w
    p_e_given_h = e_with / f_s
    p_e_given_not_h = (e_without + carried) / without_s
    return p_e_given_h, p_e_given_not_h


def analyze_suspect_is_contributor(
    mixture_alleles: Iterable[Allele | str],
    suspect_genotype: Genotype,
    universe: LocusUniverse,
    population_size: int,
) -> AnalysisResult:
    """Analysis for: the suspect personally is one of the two contributors.

    The likelihood ratio does not depend on the population; only the prior
    does. With ``population_size`` candidates, two of whom contribute, the
    prior that the suspect is one of them is 2/population_size.
    """
    if isinstance(population_size, bool) or not isinstance(population_size, int):
        raise ValidationError("population_size must be an integer")
    if population_size < 2:
        raise ValidationError("population_size must be at least 2")
    p_e_h, p_e_not_h = contributor_likelihoods(mixture_alleles, suspect_genotype, universe)
    if p_e_not_h == 0:
        if p_e_h == 0:
            raise ImpossibleEvidence("evidence impossible with or without the suspect")
        lr = Ratio.infinite()
    else:
        lr = Ratio(p_e_h / p_e_not_h)
    prior = Prob(Fraction(2, population_size))
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


def _per_locus_pairs(
    mixture: MixtureProfile,
    universe: GenotypeUniverse,
) -> list[tuple[GenotypePair, ...]]:
    return [
        compatible_pairs(mixture.alleles_at(locus), universe.locus(locus))
        for locus in mixture.loci
    ]


def _pair_counts(per_locus: list[tuple[GenotypePair, ...]]) -> tuple[int, int]:
    """(ordered assignment count, diagonal count) across loci."""
    ordered = 1
    diagonal = 1
    for pairs in per_locus:
        ordered *= sum(1 if g1 == g2 else 2 for g1, g2 in pairs)
        diagonal *= sum(1 for g1, g2 in pairs if g1 == g2)
    return ordered, diagonal


def _materialize_profile_pairs(
    loci: tuple[str, ...],
    per_locus: list[tuple[GenotypePair, ...]],
) -> tuple[ProfilePair, ...]:
    variant_lists = []
    for pairs in per_locus:
        variants = []
        for g1, g2 in pairs:
            variants.append((g1, g2))
            if g1 != g2:
                variants.append((g2, g1))
        variant_lists.append(variants)
    seen: set[ProfilePair] = set()
    for assignment in itertools.product(*variant_lists):
        first = Profile(loci, tuple(a for a, _ in assignment))
        second = Profile(loci, tuple(b for _, b in assignment))
        if second.sort_key < first.sort_key:
            first, second = second, first
        seen.add((first, second))
    return tuple(sorted(seen, key=lambda p: (p[0].sort_key, p[1].sort_key)))


def count_compatible_profile_pairs(
    mixture: MixtureProfile,
    universe: GenotypeUniverse,
) -> int:
    """Number of unordered contributor profile pairs reproducing the mixture."""
    ordered, diagonal = _pair_counts(_per_locus_pairs(mixture, universe))
    return (ordered + diagonal) // 2


def compatible_profile_pairs(
    mixture: MixtureProfile,
    universe: GenotypeUniverse,
    *,
    max_combinations: int = DEFAULT_COMBINATION_CAP,
) -> tuple[ProfilePair, ...]:
    """All unordered contributor profile pairs reproducing the mixture at every locus.

    Refuses to materialize more than ``max_combinations`` pairs; the exact
    count is still available from ``count_compatible_profile_pairs``.
    """
    per_locus = _per_locus_pairs(mixture, universe)
    ordered, diagonal = _pair_counts(per_locus)
    count = (ordered + diagonal) // 2
    if count > max_combinations:
        raise EnumerationTooLarge(
            f"{count} compatible profile pairs exceed the cap of {max_combinations}",
            count=count,
        )
    return _materialize_profile_pairs(mixture.loci, per_locus)


def count_exclusion_combinations(
    mixture: MixtureProfile,
    suspect: Profile,
    universe: GenotypeUniverse,
) -> int:
    """Number of compatible pairs in which neither contributor ever matches the suspect."""
    per_locus = _exclusion_per_locus(mixture, suspect, universe)
    ordered, diagonal = _pair_counts(per_locus)
    return (ordered + diagonal) // 2


def _exclusion_per_locus(
    mixture: MixtureProfile,
    suspect: Profile,
    universe: GenotypeUniverse,
) -> list[tuple[GenotypePair, ...]]:
    if mixture.loci != suspect.loci:
        raise SchemaError(
            "mixture and suspect profiles list different loci", path="loci"
        )
    per_locus = []
    for locus in mixture.loci:
        s = suspect.genotype_at(locus)
        pairs = compatible_pairs(mixture.alleles_at(locus), universe.locus(locus))
        per_locus.append(tuple(p for p in pairs if s not in p))
    return per_locus


def exclusion_combinations(
    mixture: MixtureProfile,
    suspect: Profile,
    universe: GenotypeUniverse,
    *,
    max_combinations: int = DEFAULT_COMBINATION_CAP,
) -> tuple[ProfilePair, ...]:
    """Contributor profile pairs where neither contributor matches the suspect anywhere.

    Each returned pair reproduces the mixture at every locus while both
    contributor genotypes differ from the suspect's genotype at every
    locus, i.e. pairs that would exclude the suspect outright.
    """
    per_locus = _exclusion_per_locus(mixture, suspect, universe)
    ordered, diagonal = _pair_counts(per_locus)
    count = (ordered + diagonal) // 2
    if count > max_combinations:
        raise EnumerationTooLarge(
            f"{count} exclusion combinations exceed the cap of {max_combinations}",
            count=count,
        )
    return _materialize_profile_pairs(mixture.loci, per_locus)


def count_voids(mixture: MixtureProfile, suspect: Profile) -> tuple[int, tuple[str, ...]]:
    """Loci at which some suspect allele is absent from the mixture's allele set."""
    if mixture.loci != suspect.loci:
        raise SchemaError(
            "mixture and suspect profiles list different loci", path="loci"
        )
    voids = [
        locus
        for locus, observed, genotype in zip(mixture.loci, mixture.observed, suspect.genotypes)
        if not genotype.alleles <= observed
    ]
    return len(voids), tuple(voids)


@dataclass(frozen=True)
class ReportAssumptions:
    """What the corrected expert statement should condition on."""

    assumed_contributors: int | None = None
    void_count: int = 0


CONTRIBUTOR_COUNT_CAVEAT = (
    "However, we cannot be certain of the number of contributors; if there "
    "were a different number then it is possible that the suspect could be "
    "definitively excluded."
)

LOW_POSTERIOR_CAVEAT = (
    "Even if we are sure of the number of contributors and can exclude the "
    "possibility of people related to the suspect being contributors then, "
    "in the absence of any other evidence linking the suspect to the DNA "
    "sample, it is still very unlikely that he is a contributor."
)

NON_EXHAUSTIVE_FLAG = (
    "This appears to provide support for the prosecution hypothesis over "
    "this particular defence hypothesis but may not provide support that "
    "the prosecution hypothesis is more likely to be true."
)


def relatedness_caveat(void_count: int = 0) -> str:
    if void_count:
        return (
            f"Also, because the suspect's alleles were not detected at "
            f"{void_count} of the tested loci, it is possible that there are "
            f"people related to the suspect who are more likely to have been "
            f"contributors."
        )
    return (
        "It is also possible that there are people related to the suspect "
        "who are more likely to have been contributors."
    )


def _lr_sentence(result: AnalysisResult, assumptions: ReportAssumptions) -> str:
    if result.lr.is_infinite:
        return "The DNA results could only have been obtained if the suspect is a contributor."
    lr_text = decimal_text(result.lr.value, "human")
    k = assumptions.assumed_contributors
    if k is not None:
        return (
            f"If we could be certain that there were exactly {k} contributors "
            f"to this mixture, then it is {lr_text} times more likely to "
            f"obtain the DNA results if the suspect is a contributor than if "
            f"{k} people unrelated to the suspect were the contributors."
        )
    return (
        f"It is {lr_text} times more likely to obtain the DNA results if the "
        f"suspect is a contributor than if the suspect is not a contributor."
    )


def render_expert_report(result: AnalysisResult, assumptions: ReportAssumptions) -> str:
    """Deterministic corrected expert statement for a mixture result.

    States the likelihood ratio conditionally on the declared assumptions
    and spells out the caveats the bare ratio hides. Exhaustive-hypothesis
    results skip the contributor-count and relatedness caveats but keep
    the one about the prior.
    """
    parts = [_lr_sentence(result, assumptions)]
    if not result.exhaustive:
        if assumptions.assumed_contributors is not None:
            parts.append(CONTRIBUTOR_COUNT_CAVEAT)
        parts.append(relatedness_caveat(assumptions.void_count))
        parts.append(NON_EXHAUSTIVE_FLAG)
    parts.append(LOW_POSTERIOR_CAVEAT)
    return " ".join(parts)
