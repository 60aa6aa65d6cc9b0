"""mixlr: exact-arithmetic analysis of likelihood-ratio claims for DNA mixtures."""

from .balls import (
    BallScenario,
    ContributorTableRow,
    TwoContributorResult,
    contributor_table,
    k_contributor_analysis,
    mixture_pair_count,
    single_profile_analysis,
    two_contributor_analysis,
)
from .bayes import (
    Odds,
    Prob,
    ProbativeDirection,
    Ratio,
    likelihood_ratio,
    odds_to_prob,
    posterior_from_prior,
    prob_to_odds,
    probative_direction,
    update_odds,
)
from .errors import (
    ConditioningOnNull,
    EnumerationTooLarge,
    HypothesisOverlap,
    ImpossibleEvidence,
    InconclusiveSampling,
    IndeterminateLikelihoodRatio,
    MixlrError,
    SchemaError,
    ValidationError,
)
from .genotypes import (
    Allele,
    Genotype,
    GenotypeUniverse,
    LocusUniverse,
    MixtureProfile,
    Profile,
    ReportAssumptions,
    analyze_profile_in_mixture,
    analyze_suspect_is_contributor,
    compatible_pairs,
    compatible_profile_pairs,
    count_compatible_profile_pairs,
    count_exclusion_combinations,
    count_voids,
    exclusion_combinations,
    inclusion_posterior,
    render_expert_report,
)
from .oracle import (
    BallPosteriorScenario,
    KContributorScenario,
    MonteCarloResult,
    OracleConfig,
    enumerate_ball_posterior,
    enumerate_genotype_analysis,
    enumerate_genotype_posterior_iid,
    monte_carlo_check,
    run_validation_suite,
)
from .outcomes import (
    AnalysisResult,
    Event,
    OutcomeSpace,
    analyze_pair,
    complement_event,
    conditional,
    probability,
)

__version__ = "0.1.0"
