import io
import random
from fractions import Fraction

import pytest

from mixlr.balls import k_contributor_analysis, mixture_pair_count, two_contributor_analysis
from mixlr.bayes import Prob
from mixlr.errors import EnumerationTooLarge, ImpossibleEvidence, InconclusiveSampling
from mixlr.genotypes import Allele, Genotype, analyze_profile_in_mixture, inclusion_posterior
from mixlr.oracle import (
    BallPosteriorScenario,
    KContributorScenario,
    OracleConfig,
    ball_check_cases,
    build_ball_case,
    canonical_locus_universe,
    enumerate_ball_posterior,
    enumerate_genotype_analysis,
    enumerate_genotype_posterior_iid,
    monte_carlo_check,
    random_genotype_case,
    run_validation_suite,
)

FAST_MC = OracleConfig(mc_samples=200_000)


class TestBallEnumeration:
    def test_three_positions_published_case(self):
        suspect = (1, 2, 3)
        mixture = [{1, 7}, {2, 8}, {3, 9}]
        assert enumerate_ball_posterior(3, 10, suspect, mixture) == Prob("1/4")

    def test_formula_across_all_cases(self):
        for n, alphabet, repeated in ball_check_cases():
            suspect, mixture = build_ball_case(n, alphabet, repeated)
            posterior = enumerate_ball_posterior(n, alphabet, suspect, mixture)
            assert posterior.value == Fraction(1, mixture_pair_count(n, repeated))

    def test_agrees_with_closed_form(self):
        for n in (2, 3):
            suspect, mixture = build_ball_case(n, 10, 0)
            enumerated = enumerate_ball_posterior(n, 10, suspect, mixture)
            assert enumerated == two_contributor_analysis(n).posterior_h
        suspect, mixture = build_ball_case(4, 4, 0)
        enumerated = enumerate_ball_posterior(4, 4, suspect, mixture)
        assert enumerated == two_contributor_analysis(4, alphabet_size=4).posterior_h

    def test_all_repeated_positions_force_the_profile(self):
        suspect, mixture = build_ball_case(2, 10, 2)
        assert enumerate_ball_posterior(2, 10, suspect, mixture) == Prob(1)

    def test_cap_enforced(self):
        config = OracleConfig(max_enumeration=100)
        with pytest.raises(EnumerationTooLarge):
            enumerate_ball_posterior(2, 10, (0, 1), [{0, 1}, {1, 2}], config)

    def test_impossible_mixture(self):
        # a pot showing a value the suspect pot cannot complete is fine, but
        # three distinct values can never come from two contributors
        from mixlr.errors import ValidationError

        with pytest.raises(ValidationError):
            enumerate_ball_posterior(1, 10, (0,), [{0, 1, 2}])

    def test_absent_suspect_gives_zero(self):
        posterior = enumerate_ball_posterior(2, 4, (3, 3), [{0, 1}, {1, 2}])
        assert posterior == Prob(0)


class TestGenotypeEnumeration:
    def test_canonical_universe(self):
        universe = canonical_locus_universe()
        mixture = frozenset(Allele(a) for a in ("7", "8", "9", "10"))
        suspect = Genotype(Allele("7"), Allele("8"))
        prior, posterior, lr = enumerate_genotype_analysis(universe, mixture, suspect)
        assert prior == Prob("2/11")
        assert posterior == Prob("1/3")
        assert lr.as_fraction() == Fraction(9, 4)

    def test_single_genotype_universe(self):
        from mixlr.genotypes import LocusUniverse

        universe = LocusUniverse.uniform("L1", (Genotype(Allele("1"), Allele("2")),))
        mixture = frozenset((Allele("1"), Allele("2")))
        suspect = Genotype(Allele("1"), Allele("2"))
        prior, posterior, lr = enumerate_genotype_analysis(universe, mixture, suspect)
        assert prior == Prob(1)
        assert posterior == Prob(1)
        assert lr.is_infinite

    def test_matches_analytics_on_randomized_universes(self):
        rnd = random.Random(424242)
        for _ in range(25):
            universe, mixture, suspect = random_genotype_case(rnd)
            prior, posterior, lr = enumerate_genotype_analysis(universe, mixture, suspect)
            analytic = analyze_profile_in_mixture(mixture, suspect, universe)
            assert analytic.prior == prior
            assert analytic.posterior == posterior
            assert analytic.lr == lr
            assert inclusion_posterior(mixture, suspect, universe) == posterior

    def test_iid_model_agrees_on_posterior(self):
        rnd = random.Random(31337)
        for _ in range(25):
            universe, mixture, suspect = random_genotype_case(rnd)
            _, posterior, _ = enumerate_genotype_analysis(universe, mixture, suspect)
            assert enumerate_genotype_posterior_iid(universe, mixture, suspect) == posterior

    def test_impossible_mixture(self):
        universe = canonical_locus_universe()
        with pytest.raises(ImpossibleEvidence):
            enumerate_genotype_analysis(
                universe, frozenset((Allele("5"), Allele("9"))), Genotype(Allele("5"), Allele("6"))
            )


class TestMonteCarlo:
    def test_reproducible_and_parallel_invariant(self):
        scenario = KContributorScenario(k=2)
        first = monte_carlo_check(scenario, FAST_MC)
        second = monte_carlo_check(scenario, FAST_MC)
        threaded = monte_carlo_check(scenario, FAST_MC, jobs=3)
        assert first == second == threaded

    def test_seed_changes_the_stream(self):
        scenario = KContributorScenario(k=2, n_pots=3, genotype_freq=Fraction(1, 2))
        a = monte_carlo_check(scenario, OracleConfig(mc_samples=50_000, seed=1))
        b = monte_carlo_check(scenario, OracleConfig(mc_samples=50_000, seed=2))
        assert a != b

    def test_k_two_estimate_within_three_standard_errors(self):
        exact = float(k_contributor_analysis(2).p_e_h1)
        result = monte_carlo_check(KContributorScenario(k=2), OracleConfig())
        assert result.std_error > 0
        assert abs(result.estimate - exact) <= 3 * result.std_error

    def test_degenerate_frequency_is_exactly_one(self):
        result = monte_carlo_check(
            KContributorScenario(k=3, genotype_freq=Fraction(1)), FAST_MC
        )
        assert result.estimate == 1.0
        assert result.std_error == 0.0

    def test_ball_posterior_within_three_standard_errors(self):
        suspect, mixture = build_ball_case(3, 10, 0)
        result = monte_carlo_check(
            BallPosteriorScenario(3, 10, suspect, mixture), OracleConfig(mc_samples=1 << 22)
        )
        assert not result.inconclusive
        assert abs(result.estimate - 0.25) <= 3 * max(result.std_error, 1e-9)

    def test_inconclusive_sampling_warns(self):
        suspect, mixture = build_ball_case(4, 10, 0)
        config = OracleConfig(mc_samples=100)
        with pytest.warns(InconclusiveSampling):
            result = monte_carlo_check(BallPosteriorScenario(4, 10, suspect, mixture), config)
        assert result.inconclusive
        assert result.estimate is None and result.std_error is None

    def test_convergence_rate(self):
        scenario = KContributorScenario(k=5, n_pots=3, genotype_freq=Fraction(1, 2))
        small = monte_carlo_check(scenario, OracleConfig(mc_samples=30_000))
        large = monte_carlo_check(scenario, OracleConfig(mc_samples=90_000))
        assert large.std_error <= small.std_error / (2**0.5)


class TestValidationSuite:
    def test_runs_clean_and_deterministically(self):
        config = OracleConfig(mc_samples=200_000)
        first = io.StringIO()
        assert run_validation_suite(config, out=first)
        second = io.StringIO()
        assert run_validation_suite(config, out=second)
        threaded = io.StringIO()
        assert run_validation_suite(config, jobs=4, out=threaded)
        assert first.getvalue() == second.getvalue() == threaded.getvalue()

    def test_seed_appears_in_output(self):
        config = OracleConfig(mc_samples=65_536, seed=99)
        buf = io.StringIO()
        run_validation_suite(config, out=buf)
        assert "seed 99" in buf.getvalue()
