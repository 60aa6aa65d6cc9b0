import itertools
import random
from fractions import Fraction

import pytest

from mixlr.bayes import Prob, ProbativeDirection, Ratio
from mixlr.errors import (
    EnumerationTooLarge,
    ImpossibleEvidence,
    SchemaError,
    ValidationError,
)
from mixlr.genotypes import (
    Allele,
    Genotype,
    GenotypeUniverse,
    LocusUniverse,
    MixtureProfile,
    Profile,
    ReportAssumptions,
    CONTRIBUTOR_COUNT_CAVEAT,
    LOW_POSTERIOR_CAVEAT,
    NON_EXHAUSTIVE_FLAG,
    analyze_profile_in_mixture,
    analyze_suspect_is_contributor,
    compatible_pairs,
    compatible_profile_pairs,
    count_compatible_profile_pairs,
    count_exclusion_combinations,
    count_voids,
    exclusion_combinations,
    inclusion_likelihoods,
    inclusion_posterior,
    relatedness_caveat,
    render_expert_report,
)
from mixlr.outcomes import AnalysisResult, caveat_text


def g(a: str, b: str) -> Genotype:
    return Genotype(Allele(a), Allele(b))


def alleles(*names: str) -> frozenset[Allele]:
    return frozenset(Allele(n) for n in names)


TEN_GENOTYPES = LocusUniverse.uniform(
    "L1",
    (
        g("7", "8"), g("7", "9"), g("7", "10"), g("8", "9"), g("8", "10"),
        g("9", "10"), g("5", "6"), g("6", "7"), g("10", "11"), g("11", "12"),
    ),
)


def brute_force_pairs(universe: LocusUniverse, target: frozenset[Allele]):
    """Independent reference enumeration over all genotype multisets."""
    found = set()
    for g1, g2 in itertools.combinations_with_replacement(universe.genotypes, 2):
        if g1.alleles | g2.alleles == target:
            found.add(tuple(sorted((g1, g2), key=lambda x: x.sort_key)))
    return found


class TestGenotypeBasics:
    def test_canonical_order(self):
        assert g("8", "7") == g("7", "8")
        assert g("8", "7").first == Allele("7")

    def test_homozygous(self):
        assert g("15", "15").homozygous
        assert not g("15", "16").homozygous

    def test_microvariant_sorting(self):
        assert g("9.3", "9") == g("9", "9.3")
        assert sorted([Allele("10"), Allele("9.3"), Allele("9")]) == [
            Allele("9"), Allele("9.3"), Allele("10"),
        ]

    def test_empty_designation_rejected(self):
        with pytest.raises(ValidationError):
            Allele("")


class TestLocusUniverse:
    def test_frequencies_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            LocusUniverse("L1", ((g("1", "2"), Fraction(1, 2)),))

    def test_duplicate_genotypes_rejected(self):
        with pytest.raises(ValidationError):
            LocusUniverse(
                "L1",
                ((g("1", "2"), Fraction(1, 2)), (g("2", "1"), Fraction(1, 2))),
            )

    def test_zero_frequency_rejected(self):
        with pytest.raises(ValidationError):
            LocusUniverse(
                "L1",
                ((g("1", "2"), Fraction(0)), (g("1", "3"), Fraction(1))),
            )


class TestCompatiblePairs:
    def test_four_allele_mixture_has_three_pairs(self):
        pairs = compatible_pairs(alleles("7", "8", "9", "10"), TEN_GENOTYPES)
        assert pairs == (
            (g("7", "8"), g("9", "10")),
            (g("7", "9"), g("8", "10")),
            (g("7", "10"), g("8", "9")),
        )

    def test_two_allele_mixture_repeats_the_genotype(self):
        target = alleles("7", "8")
        pairs = compatible_pairs(target, TEN_GENOTYPES)
        assert pairs == ((g("7", "8"), g("7", "8")),)
        assert set(pairs) == brute_force_pairs(TEN_GENOTYPES, target)

    def test_uncoverable_mixture_is_empty(self):
        target = alleles("5", "9")
        assert compatible_pairs(target, TEN_GENOTYPES) == ()
        assert brute_force_pairs(TEN_GENOTYPES, target) == set()

    def test_matches_brute_force_on_random_universes(self):
        rnd = random.Random(2024)
        pool = [str(i) for i in range(1, 8)]
        for _ in range(30):
            all_pairs = [
                g(a, b) for i, a in enumerate(pool) for b in pool[i:]
            ]
            universe = LocusUniverse.uniform("L1", rnd.sample(all_pairs, rnd.randint(3, 8)))
            g1, g2 = rnd.choice(universe.genotypes), rnd.choice(universe.genotypes)
            target = g1.alleles | g2.alleles
            assert set(compatible_pairs(target, universe)) == brute_force_pairs(universe, target)

    def test_every_pair_covers_the_mixture_exactly(self):
        target = alleles("7", "8", "9", "10")
        for pair in compatible_pairs(target, TEN_GENOTYPES):
            assert pair[0].alleles | pair[1].alleles == target


class TestInclusionPosterior:
    def test_one_third(self):
        assert inclusion_posterior(alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES) == Prob("1/3")

    def test_certain_when_mixture_is_suspects_alleles(self):
        assert inclusion_posterior(alleles("7", "8"), g("7", "8"), TEN_GENOTYPES) == Prob(1)

    def test_zero_when_genotype_covers_nothing(self):
        assert inclusion_posterior(alleles("7", "8", "9", "10"), g("5", "6"), TEN_GENOTYPES) == Prob(0)

    def test_impossible_mixture(self):
        with pytest.raises(ImpossibleEvidence):
            inclusion_posterior(alleles("5", "9"), g("5", "6"), TEN_GENOTYPES)

    def test_three_genotype_universe_by_hand(self):
        # multisets: {12,12} {12,13} {12,23} {13,13} {13,23} {23,23};
        # compatible with {1,2,3}: {12,13} {12,23} {13,23}; two contain (1,2)
        universe = LocusUniverse.uniform("L1", (g("1", "2"), g("1", "3"), g("2", "3")))
        assert inclusion_posterior(alleles("1", "2", "3"), g("1", "2"), universe) == Prob("2/3")

    def test_weighted_universe_against_brute_force(self):
        universe = LocusUniverse(
            "L1",
            (
                (g("1", "2"), Fraction(1, 2)),
                (g("1", "3"), Fraction(1, 4)),
                (g("2", "3"), Fraction(1, 8)),
                (g("3", "3"), Fraction(1, 8)),
            ),
        )
        target = alleles("1", "2", "3")
        total = Fraction(0)
        containing = Fraction(0)
        for g1, g2 in itertools.combinations_with_replacement(universe.genotypes, 2):
            if g1.alleles | g2.alleles != target:
                continue
            w = universe.frequency(g1) * universe.frequency(g2)
            total += w
            if g("1", "2") in (g1, g2):
                containing += w
        expected = Prob(containing / total)
        assert inclusion_posterior(target, g("1", "2"), universe) == expected


class TestProfileInMixture:
    def test_single_locus_numbers(self):
        result = analyze_profile_in_mixture(alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES)
        assert result.prior == Prob("2/11")
        assert result.lr == Ratio(Fraction(9, 4))
        assert result.posterior == Prob("1/3")
        assert result.exhaustive
        assert result.direction is ProbativeDirection.SUPPORTS

    def test_likelihoods(self):
        p_h, p_not_h = inclusion_likelihoods(alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES)
        assert p_h == Fraction(1, 10)
        assert p_not_h == Fraction(2, 45)

    def test_suspect_absent_from_universe(self):
        with pytest.raises(ValidationError):
            analyze_profile_in_mixture(alleles("7", "8", "9", "10"), g("1", "2"), TEN_GENOTYPES)

    def test_posterior_equals_direct_enumeration(self):
        rnd = random.Random(77)
        pool = [str(i) for i in range(1, 8)]
        for _ in range(25):
            all_pairs = [g(a, b) for i, a in enumerate(pool) for b in pool[i:]]
            genotypes = rnd.sample(all_pairs, rnd.randint(3, 7))
            weights = [rnd.randint(1, 9) for _ in genotypes]
            universe = LocusUniverse(
                "L1",
                tuple(
                    (geno, Fraction(w, sum(weights)))
                    for geno, w in zip(genotypes, weights)
                ),
            )
            g1, g2 = rnd.choice(universe.genotypes), rnd.choice(universe.genotypes)
            target = g1.alleles | g2.alleles
            suspect = rnd.choice(universe.genotypes)
            result = analyze_profile_in_mixture(target, suspect, universe)
            assert result.posterior == inclusion_posterior(target, suspect, universe)


class TestSuspectIsContributor:
    def test_single_locus_numbers(self):
        result = analyze_suspect_is_contributor(
            alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES, 1000
        )
        assert result.lr == Ratio(Fraction(45, 21))
        assert result.prior == Prob("1/500")
        assert result.posterior == Prob(Fraction(15, 3508))
        assert result.exhaustive

    def test_posterior_matches_direct_bayes(self):
        from mixlr.bayes import posterior_from_prior
        from mixlr.genotypes import contributor_likelihoods

        p_h, p_not_h = contributor_likelihoods(alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES)
        assert p_h == Fraction(1, 10)
        assert p_not_h == Fraction(21, 450)
        direct = posterior_from_prior(Prob("1/500"), Prob(p_h), Prob(p_not_h))
        result = analyze_suspect_is_contributor(
            alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES, 1000
        )
        assert result.posterior == direct

    def test_lr_independent_of_population(self):
        mixture = alleles("7", "8", "9", "10")
        small = analyze_suspect_is_contributor(mixture, g("7", "8"), TEN_GENOTYPES, 10)
        large = analyze_suspect_is_contributor(mixture, g("7", "8"), TEN_GENOTYPES, 10**9)
        assert small.lr == large.lr
        assert small.posterior != large.posterior

    def test_population_two_forced_genotype(self):
        # mixture {7,8}: the only compatible pair is the suspect genotype twice
        result = analyze_suspect_is_contributor(alleles("7", "8"), g("7", "8"), TEN_GENOTYPES, 2)
        assert result.prior == Prob(1)
        assert result.posterior == Prob(1)

    def test_population_validation(self):
        with pytest.raises(ValidationError):
            analyze_suspect_is_contributor(alleles("7", "8"), g("7", "8"), TEN_GENOTYPES, 1)


THREE_LOCUS_UNIVERSE = GenotypeUniverse(
    (
        LocusUniverse.uniform(
            "D3S1358",
            (g("14", "14"), g("14", "15"), g("14", "16"), g("15", "15"), g("15", "16"), g("16", "16")),
        ),
        LocusUniverse.uniform(
            "vWA",
            (g("16", "16"), g("16", "17"), g("16", "18"), g("17", "17"), g("17", "18"), g("18", "18")),
        ),
        LocusUniverse.uniform(
            "D16S539",
            (
                g("9", "9"), g("9", "10"), g("9", "11"), g("9", "12"), g("10", "10"),
                g("10", "11"), g("10", "12"), g("11", "11"), g("11", "12"), g("12", "12"),
            ),
        ),
    )
)

THREE_LOCUS_MIXTURE = MixtureProfile(
    ("D3S1358", "vWA", "D16S539"),
    (alleles("14", "15", "16"), alleles("16", "17", "18"), alleles("9", "10", "11", "12")),
)

THREE_LOCUS_SUSPECT = Profile(
    ("D3S1358", "vWA", "D16S539"),
    (g("15", "16"), g("17", "17"), g("9", "11")),
)


def profile(*genotypes: Genotype) -> Profile:
    return Profile(("D3S1358", "vWA", "D16S539"), tuple(genotypes))


class TestExclusionCombinations:
    def test_single_locus_two_non_suspect_pairs(self):
        universe = GenotypeUniverse((TEN_GENOTYPES,))
        mixture = MixtureProfile(("L1",), (alleles("7", "8", "9", "10"),))
        suspect = Profile(("L1",), (g("7", "8"),))
        combos = exclusion_combinations(mixture, suspect, universe)
        texts = {tuple(p.text() for p in pair) for pair in combos}
        assert texts == {("(7,9)", "(8,10)"), ("(7,10)", "(8,9)")}

    def test_three_locus_contains_published_pairings(self):
        combos = exclusion_combinations(THREE_LOCUS_MIXTURE, THREE_LOCUS_SUSPECT, THREE_LOCUS_UNIVERSE)
        assert combos
        expected = [
            (
                profile(g("14", "16"), g("16", "17"), g("9", "10")),
                profile(g("14", "15"), g("17", "18"), g("11", "12")),
            ),
            (
                profile(g("14", "16"), g("16", "17"), g("9", "12")),
                profile(g("15", "15"), g("18", "18"), g("10", "11")),
            ),
            (
                profile(g("14", "15"), g("16", "16"), g("9", "12")),
                profile(g("16", "16"), g("17", "18"), g("10", "11")),
            ),
        ]
        as_sets = {frozenset(pair) for pair in combos}
        for first, second in expected:
            assert frozenset((first, second)) in as_sets

    def test_no_contributor_matches_anywhere(self):
        combos = exclusion_combinations(THREE_LOCUS_MIXTURE, THREE_LOCUS_SUSPECT, THREE_LOCUS_UNIVERSE)
        for pair in combos:
            for contributor in pair:
                for locus in THREE_LOCUS_MIXTURE.loci:
                    assert contributor.genotype_at(locus) != THREE_LOCUS_SUSPECT.genotype_at(locus)

    def test_counts_match_materialization(self):
        combos = exclusion_combinations(THREE_LOCUS_MIXTURE, THREE_LOCUS_SUSPECT, THREE_LOCUS_UNIVERSE)
        assert len(combos) == count_exclusion_combinations(
            THREE_LOCUS_MIXTURE, THREE_LOCUS_SUSPECT, THREE_LOCUS_UNIVERSE
        )
        everything = compatible_profile_pairs(THREE_LOCUS_MIXTURE, THREE_LOCUS_UNIVERSE)
        assert len(everything) == count_compatible_profile_pairs(
            THREE_LOCUS_MIXTURE, THREE_LOCUS_UNIVERSE
        )

    def test_partition_of_compatible_pairs(self):
        """Exclusions, full-profile matches, and partial matches partition everything."""
        everything = set(compatible_profile_pairs(THREE_LOCUS_MIXTURE, THREE_LOCUS_UNIVERSE))
        exclusions = set(
            exclusion_combinations(THREE_LOCUS_MIXTURE, THREE_LOCUS_SUSPECT, THREE_LOCUS_UNIVERSE)
        )

        def matches_nowhere(pair):
            return all(
                contributor.genotype_at(locus) != THREE_LOCUS_SUSPECT.genotype_at(locus)
                for contributor in pair
                for locus in THREE_LOCUS_MIXTURE.loci
            )

        assert exclusions == {pair for pair in everything if matches_nowhere(pair)}
        full_match = {pair for pair in everything if THREE_LOCUS_SUSPECT in pair}
        partial = everything - exclusions - full_match
        assert not (exclusions & full_match)
        assert exclusions | full_match | partial == everything
        for pair in partial:
            assert THREE_LOCUS_SUSPECT not in pair
            assert any(
                contributor.genotype_at(locus) == THREE_LOCUS_SUSPECT.genotype_at(locus)
                for contributor in pair
                for locus in THREE_LOCUS_MIXTURE.loci
            )

    def test_suspect_forced_at_some_locus_gives_empty(self):
        universe = GenotypeUniverse((TEN_GENOTYPES,))
        mixture = MixtureProfile(("L1",), (alleles("7", "8"),))
        suspect = Profile(("L1",), (g("7", "8"),))
        assert exclusion_combinations(mixture, suspect, universe) == ()

    def test_cap_enforced(self):
        with pytest.raises(EnumerationTooLarge) as exc:
            exclusion_combinations(
                THREE_LOCUS_MIXTURE,
                THREE_LOCUS_SUSPECT,
                THREE_LOCUS_UNIVERSE,
                max_combinations=10,
            )
        assert exc.value.count == 120
        assert exc.value.exit_code == 4

    def test_locus_mismatch(self):
        suspect = Profile(("D3S1358",), (g("15", "16"),))
        with pytest.raises(SchemaError):
            exclusion_combinations(THREE_LOCUS_MIXTURE, suspect, THREE_LOCUS_UNIVERSE)


TABLE_LOCI = (
    "D3S1358", "vWA", "D16S539", "D8S1179", "D18S51",
    "D5S818", "D13S317", "D7S820", "D12S391", "D2S1338",
)

TABLE_MIXTURE = MixtureProfile(
    TABLE_LOCI,
    (
        alleles("14", "15", "16"),
        alleles("15", "16", "17", "19"),
        alleles("10", "11", "12"),
        alleles("11", "12", "13", "14"),
        alleles("12", "14", "17", "25"),
        alleles("7", "10", "11", "12", "13"),
        alleles("8", "9", "10", "12", "13"),
        alleles("8", "8.3", "9", "9.3", "10", "12"),
        alleles("15", "16", "18", "19"),
        alleles("16", "17", "19", "20", "24", "25"),
    ),
)

TABLE_SUSPECT = Profile(
    TABLE_LOCI,
    (
        g("15", "15"), g("17", "19"), g("12", "12"), g("11", "12"), g("13", "25"),
        g("10", "11"), g("9", "10"), g("10", "11"), g("18", "18"), g("23", "25"),
    ),
)


class TestVoids:
    def test_casework_excerpt_has_three_voids(self):
        count, loci = count_voids(TABLE_MIXTURE, TABLE_SUSPECT)
        assert count == 3
        assert loci == ("D18S51", "D7S820", "D2S1338")

    def test_fully_contained_profile_has_none(self):
        mixture = MixtureProfile(("L1", "L2"), (alleles("14", "15", "16"), alleles("9", "10")))
        suspect = Profile(("L1", "L2"), (g("15", "15"), g("9", "10")))
        assert count_voids(mixture, suspect) == (0, ())

    def test_homozygote_inside_mixture_is_not_a_void(self):
        mixture = MixtureProfile(("L1",), (alleles("14", "15", "16"),))
        suspect = Profile(("L1",), (g("15", "15"),))
        assert count_voids(mixture, suspect) == (0, ())

    def test_locus_mismatch_rejected(self):
        mixture = MixtureProfile(("L1",), (alleles("14", "15"),))
        suspect = Profile(("L2",), (g("14", "15"),))
        with pytest.raises(SchemaError):
            count_voids(mixture, suspect)

    def test_monotone_under_mixture_growth(self):
        rnd = random.Random(11)
        pool = [str(i) for i in range(1, 9)]
        for _ in range(50):
            loci = ("L1", "L2", "L3")
            observed = tuple(
                frozenset(Allele(a) for a in rnd.sample(pool, rnd.randint(1, 4)))
                for _ in loci
            )
            mixture = MixtureProfile(loci, observed)
            suspect = Profile(loci, tuple(g(rnd.choice(pool), rnd.choice(pool)) for _ in loci))
            grown = MixtureProfile(
                loci,
                tuple(
                    obs | {Allele(rnd.choice(pool))}
                    for obs in observed
                ),
            )
            assert count_voids(grown, suspect)[0] <= count_voids(mixture, suspect)[0]


class TestExpertReport:
    def _external_result(self) -> AnalysisResult:
        return AnalysisResult(
            lr=Ratio(Fraction(4_000_000)),
            prior=None,
            posterior=None,
            exhaustive=False,
            direction=None,
            caveat=caveat_text(False, None),
        )

    def test_casework_statement_has_all_caveats(self):
        statement = render_expert_report(
            self._external_result(),
            ReportAssumptions(assumed_contributors=4, void_count=3),
        )
        assert "4×10^6 times more likely" in statement
        assert CONTRIBUTOR_COUNT_CAVEAT in statement
        assert relatedness_caveat(3) in statement
        assert LOW_POSTERIOR_CAVEAT in statement
        assert "exactly 4 contributors" in statement

    def test_exhaustive_branch_keeps_only_prior_caveat(self):
        result = analyze_profile_in_mixture(alleles("7", "8", "9", "10"), g("7", "8"), TEN_GENOTYPES)
        statement = render_expert_report(result, ReportAssumptions())
        assert CONTRIBUTOR_COUNT_CAVEAT not in statement
        assert relatedness_caveat(0) not in statement
        assert NON_EXHAUSTIVE_FLAG not in statement
        assert LOW_POSTERIOR_CAVEAT in statement

    def test_non_exhaustive_undermining_result_is_flagged(self):
        result = AnalysisResult(
            lr=Ratio(Fraction(4, 3)),
            prior=Prob("3/10"),
            posterior=Prob("2/7"),
            exhaustive=False,
            direction=ProbativeDirection.UNDERMINES,
            caveat=caveat_text(False, ProbativeDirection.UNDERMINES),
        )
        statement = render_expert_report(result, ReportAssumptions())
        assert "may not provide support that the prosecution hypothesis" in statement

    def test_infinite_ratio_branch(self):
        result = AnalysisResult(
            lr=Ratio.infinite(),
            prior=Prob("1/2"),
            posterior=Prob(1),
            exhaustive=True,
            direction=ProbativeDirection.SUPPORTS,
            caveat=caveat_text(True, ProbativeDirection.SUPPORTS),
        )
        statement = render_expert_report(result, ReportAssumptions())
        assert "could only have been obtained" in statement

    def test_statement_is_deterministic(self):
        result = self._external_result()
        assumptions = ReportAssumptions(assumed_contributors=4, void_count=3)
        assert render_expert_report(result, assumptions) == render_expert_report(result, assumptions)
