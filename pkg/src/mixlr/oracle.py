"""Independent validators: exhaustive enumeration and seeded Monte Carlo.

Everything here recomputes results along a second path so the closed forms
and combinatorial analyses can be checked against brute force. The ball
enumerator walks every ordered pair of i.i.d. profiles; the genotype
enumerator walks every unordered genotype multiset (and, as a cross-check
of the modelling convention, every ordered frequency-weighted pair).

Monte Carlo sampling uses NumPy's Philox counter-based generator. The
sample budget is split into fixed 65536-draw chunks and chunk i draws from
the substream SeedSequence(seed, spawn_key=(i,)), so for a given seed the
result is bit-identical no matter how many workers process the chunks or
in what order they finish.
"""

from __future__ import annotations

import math
import random
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from . import balls
from .bayes import Prob, Ratio
from .display import decimal_text
from .errors import (
    EnumerationTooLarge,
    ImpossibleEvidence,
    InconclusiveSampling,
    ValidationError,
)
from .genotypes import Allele, Genotype, LocusUniverse, analyze_profile_in_mixture

DEFAULT_SEED = 0x6D69786C72  # "mixlr" as hex bytes
CHUNK_SAMPLES = 1 << 16


@dataclass(frozen=True)
class OracleConfig:
    """Budget and seeding for the validators."""

    max_enumeration: int = 10_000_000
    mc_samples: int = 1_000_000
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.max_enumeration < 1:
            raise ValidationError("max_enumeration must be positive")
        if self.mc_samples < 1:
            raise ValidationError("mc_samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must fit in an unsigned 64-bit integer")


DEFAULT_CONFIG = OracleConfig()


def _normalize_mixture(
    mixture: Sequence[Sequence[int] | frozenset[int] | set[int]],
    n_positions: int,
    alphabet_size: int,
) -> tuple[frozenset[int], ...]:
    if len(mixture) != n_positions:
        raise ValidationError("mixture must list one value set per position")
    pots = []
    for pot in mixture:
        values = frozenset(pot)
        if not 1 <= len(values) <= 2:
            raise ValidationError("a two-contributor pot shows one or two values")
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ValidationError("mixture values must be integers")
            if not 0 <= v < alphabet_size:
                raise ValidationError(
                    f"mixture value {v} outside alphabet [0, {alphabet_size})"
                )
        pots.append(frozenset(int(v) for v in values))
    return tuple(pots)


def enumerate_ball_posterior(
    n_positions: int,
    alphabet_size: int,
    suspect_profile: Sequence[int],
    mixture: Sequence[Sequence[int] | frozenset[int] | set[int]],
    config: OracleConfig = DEFAULT_CONFIG,
) -> Prob:
    """Exact posterior that the suspect profile is one of two contributors.

    Enumerates every ordered pair of profiles (each value i.i.d. uniform
    over the alphabet), keeps the pairs whose per-position value sets equal
    the mixture, and returns the exact fraction of those containing the
    suspect profile in either slot.
    """
    posterior, _, _ = _enumerate_ball(
        n_positions, alphabet_size, suspect_profile, mixture, config
    )
    return posterior


def _enumerate_ball(
    n_positions: int,
    alphabet_size: int,
    suspect_profile: Sequence[int],
    mixture: Sequence[Sequence[int] | frozenset[int] | set[int]],
    config: OracleConfig,
) -> tuple[Prob, int, int]:
    """(posterior, ordered producing pairs, distinct unordered producing pairs)."""
    if len(suspect_profile) != n_positions:
        raise ValidationError("suspect profile length must equal n_positions")
    pots = _normalize_mixture(mixture, n_positions, alphabet_size)
    total_pairs = alphabet_size ** (2 * n_positions)
    if total_pairs > config.max_enumeration:
        raise EnumerationTooLarge(
            f"{total_pairs} ordered profile pairs exceed the cap of "
            f"{config.max_enumeration}",
            count=total_pairs,
        )
    suspect = tuple(int(v) for v in suspect_profile)
    profiles = list(product(range(alphabet_size), repeat=n_positions))
    producing = 0
    containing = 0
    identical = 0
    for p1 in profiles:
        for p2 in profiles:
            ok = True
            for i in range(n_positions):
                if {p1[i], p2[i]} != pots[i]:
                    ok = False
                    break
            if not ok:
                continue
            producing += 1
            if p1 == p2:
                identical += 1
            if p1 == suspect or p2 == suspect:
                containing += 1
    if producing == 0:
        raise ImpossibleEvidence("no ordered profile pair produces this mixture")
    unordered = (producing + identical) // 2
    return Prob(Fraction(containing, producing)), producing, unordered


def enumerate_genotype_analysis(
    universe: LocusUniverse,
    mixture_alleles: Sequence[Allele | str] | frozenset[Allele],
    suspect_genotype: Genotype,
    config: OracleConfig = DEFAULT_CONFIG,
) -> tuple[Prob, Prob, Ratio]:
    """(prior, posterior, lr) for genotype inclusion, by exhaustive multiset walk.

    Walks every unordered genotype multiset with weight f1·f2 and builds
    the three quantities purely by weighted counting; must agree exactly
    with the analytic path.
    """
    genotypes = universe.genotypes
    count = len(genotypes) * (len(genotypes) + 1) // 2
    if count > config.max_enumeration:
        raise EnumerationTooLarge(
            f"{count} genotype multisets exceed the cap of {config.max_enumeration}",
            count=count,
        )
    target = frozenset(
        a if isinstance(a, Allele) else Allele(a) for a in mixture_alleles
    )
    total = Fraction(0)
    with_s = Fraction(0)
    e_total = Fraction(0)
    e_with = Fraction(0)
    e_without = Fraction(0)
    for i, g1 in enumerate(genotypes):
        for g2 in genotypes[i:]:
            w = universe.frequency(g1) * universe.frequency(g2)
            contains = suspect_genotype in (g1, g2)
            total += w
            if contains:
                with_s += w
            if g1.alleles | g2.alleles == target:
                e_total += w
                if contains:
                    e_with += w
                else:
                    e_without += w
    if e_total == 0:
        raise ImpossibleEvidence("no genotype multiset reproduces the mixture")
    prior = Prob(with_s / total)
    posterior = Prob(e_with / e_total)
    without_s = total - with_s
    if without_s == 0 or e_without == 0:
        lr = Ratio.infinite() if e_with > 0 else Ratio(Fraction(0))
    else:
        lr = Ratio((e_with / with_s) / (e_without / without_s))
    return prior, posterior, lr


def enumerate_genotype_posterior_iid(
    universe: LocusUniverse,
    mixture_alleles: Sequence[Allele | str] | frozenset[Allele],
    suspect_genotype: Genotype,
) -> Prob:
    """Inclusion posterior under ordered i.i.d. frequency-weighted draws.

    A different contributor model from the unordered-multiset one; the
    priors and likelihoods differ, but the posterior must coincide.
    """
    target = frozenset(
        a if isinstance(a, Allele) else Allele(a) for a in mixture_alleles
    )
    e_total = Fraction(0)
    e_with = Fraction(0)
    for g1 in universe.genotypes:
        for g2 in universe.genotypes:
            if g1.alleles | g2.alleles != target:
                continue
            w = universe.frequency(g1) * universe.frequency(g2)
            e_total += w
            if suspect_genotype in (g1, g2):
                e_with += w
    if e_total == 0:
        raise ImpossibleEvidence("no ordered genotype pair reproduces the mixture")
    return Prob(e_with / e_total)


@dataclass(frozen=True)
class KContributorScenario:
    """Estimate P(evidence | suspect plus k-1 unknowns) for the single-draw model."""

    k: int
    n_pots: int = 20
    genotype_freq: Fraction = Fraction(1, 10)


@dataclass(frozen=True)
class BallPosteriorScenario:
    """Estimate the two-contributor inclusion posterior by rejection sampling."""

    n_positions: int
    alphabet_size: int
    suspect_profile: tuple[int, ...]
    mixture: tuple[frozenset[int], ...]


MonteCarloScenario = KContributorScenario | BallPosteriorScenario


@dataclass(frozen=True)
class MonteCarloResult:
    """A seeded estimate with its standard error.

    ``effective`` is the number of draws behind the estimate (all draws
    for unconditional estimates, accepted draws for rejection sampling).
    When it is zero the sampling was inconclusive and both the estimate
    and the standard error are None.
    """

    estimate: float | None
    std_error: float | None
    draws: int
    effective: int

    @property
    def inconclusive(self) -> bool:
        return self.effective == 0


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return np.random.Generator(np.random.Philox(ss))


def _chunk_sizes(total: int) -> list[int]:
    sizes = [CHUNK_SAMPLES] * (total // CHUNK_SAMPLES)
    if total % CHUNK_SAMPLES:
        sizes.append(total % CHUNK_SAMPLES)
    return sizes


def _run_chunks(
    worker: Callable[[int, int], tuple[int, ...]],
    total: int,
    jobs: int,
) -> list[tuple[int, ...]]:
    sizes = _chunk_sizes(total)
    if jobs <= 1:
        return [worker(i, size) for i, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, range(len(sizes)), sizes))


def _k_contributor_chunk(
    scenario: KContributorScenario, seed: int, index: int, count: int
) -> tuple[int, ...]:
    rng = _chunk_rng(seed, index)
    a = scenario.genotype_freq.numerator
    b = scenario.genotype_freq.denominator
    shape = (count, scenario.n_pots)
    selector = rng.integers(0, scenario.k, size=shape)
    carrier = rng.integers(0, b, size=shape)
    pot_matches = (selector == 0) | (carrier < a)
    return (int(pot_matches.all(axis=1).sum()),)


def _ball_posterior_chunk(
    scenario: BallPosteriorScenario, seed: int, index: int, count: int
) -> tuple[int, ...]:
    rng = _chunk_rng(seed, index)
    n = scenario.n_positions
    shape = (count, n)
    p1 = rng.integers(0, scenario.alphabet_size, size=shape)
    p2 = rng.integers(0, scenario.alphabet_size, size=shape)
    accept = np.ones(count, dtype=bool)
    for i, pot in enumerate(scenario.mixture):
        values = sorted(pot)
        if len(values) == 1:
            x = values[0]
            accept &= (p1[:, i] == x) & (p2[:, i] == x)
        else:
            x, y = values
            accept &= ((p1[:, i] == x) & (p2[:, i] == y)) | (
                (p1[:, i] == y) & (p2[:, i] == x)
            )
    suspect = np.asarray(scenario.suspect_profile)
    contains = (p1 == suspect).all(axis=1) | (p2 == suspect).all(axis=1)
    return (int(accept.sum()), int((accept & contains).sum()))


def monte_carlo_check(
    scenario: MonteCarloScenario,
    config: OracleConfig = DEFAULT_CONFIG,
    jobs: int = 1,
) -> MonteCarloResult:
    """Seeded, reproducible estimate of a scenario's target probability.

    Same seed, same result, bit for bit, regardless of ``jobs``.
    """
    if isinstance(scenario, KContributorScenario):
        if scenario.k < 1:
            raise ValidationError("k must be at least 1")
        if not 0 < scenario.genotype_freq <= 1:
            raise ValidationError("genotype_freq must be in (0, 1]")
        chunks = _run_chunks(
            lambda i, size: _k_contributor_chunk(scenario, config.seed, i, size),
            config.mc_samples,
            jobs,
        )
        successes = sum(c[0] for c in chunks)
        n = config.mc_samples
        estimate = successes / n
        std_error = math.sqrt(estimate * (1 - estimate) / n)
        return MonteCarloResult(estimate, std_error, draws=n, effective=n)
    if isinstance(scenario, BallPosteriorScenario):
        pots = _normalize_mixture(
            scenario.mixture, scenario.n_positions, scenario.alphabet_size
        )
        normalized = BallPosteriorScenario(
            scenario.n_positions,
            scenario.alphabet_size,
            tuple(int(v) for v in scenario.suspect_profile),
            pots,
        )
        chunks = _run_chunks(
            lambda i, size: _ball_posterior_chunk(normalized, config.seed, i, size),
            config.mc_samples,
            jobs,
        )
        accepted = sum(c[0] for c in chunks)
        successes = sum(c[1] for c in chunks)
        if accepted == 0:
            warnings.warn(
                InconclusiveSampling(
                    f"conditioning event never hit in {config.mc_samples} draws"
                )
            )
            return MonteCarloResult(None, None, draws=config.mc_samples, effective=0)
        estimate = successes / accepted
        std_error = math.sqrt(estimate * (1 - estimate) / accepted)
        return MonteCarloResult(
            estimate, std_error, draws=config.mc_samples, effective=accepted
        )
    raise ValidationError(f"unknown Monte Carlo scenario: {type(scenario).__name__}")


def canonical_locus_universe() -> LocusUniverse:
    """The ten-genotype uniform single-locus universe used by the bundled fixtures."""
    pairs = [
        ("7", "8"), ("7", "9"), ("7", "10"), ("8", "9"), ("8", "10"),
        ("9", "10"), ("5", "6"), ("6", "7"), ("10", "11"), ("11", "12"),
    ]
    return LocusUniverse.uniform("L1", (Genotype(Allele(a), Allele(b)) for a, b in pairs))


def random_locus_universe(rnd: random.Random, locus: str = "L1") -> LocusUniverse:
    """A small random universe with exact rational frequencies summing to 1."""
    pool = [str(v) for v in range(1, 9)]
    count = rnd.randint(3, 7)
    all_pairs = [
        Genotype(Allele(a), Allele(b))
        for i, a in enumerate(pool)
        for b in pool[i:]
    ]
    genotypes = rnd.sample(all_pairs, count)
    weights = [rnd.randint(1, 9) for _ in genotypes]
    total = sum(weights)
    entries = tuple(
        (g, Fraction(w, total)) for g, w in zip(genotypes, weights)
    )
    return LocusUniverse(locus, entries)


def random_genotype_case(
    rnd: random.Random,
) -> tuple[LocusUniverse, frozenset[Allele], Genotype]:
    """(universe, mixture alleles, suspect) with at least one compatible pair."""
    universe = random_locus_universe(rnd)
    genotypes = universe.genotypes
    g1 = rnd.choice(genotypes)
    g2 = rnd.choice(genotypes)
    mixture = g1.alleles | g2.alleles
    suspect = rnd.choice(genotypes)
    return universe, mixture, suspect


def ball_check_cases() -> tuple[tuple[int, int, int], ...]:
    """(n_positions, alphabet_size, repeated_positions) kept within the default cap."""
    return (
        (1, 10, 0),
        (2, 10, 0),
        (2, 10, 1),
        (3, 10, 0),
        (3, 6, 1),
        (3, 6, 2),
        (4, 4, 0),
        (4, 4, 1),
        (4, 4, 2),
    )


def build_ball_case(
    n_positions: int, alphabet_size: int, repeated_positions: int
) -> tuple[tuple[int, ...], tuple[frozenset[int], ...]]:
    """A suspect profile and mixture with the requested repeated-position count."""
    suspect = tuple(i % alphabet_size for i in range(n_positions))
    pots = []
    for i, value in enumerate(suspect):
        if i < repeated_positions:
            pots.append(frozenset((value,)))
        else:
            pots.append(frozenset((value, (value + 1) % alphabet_size)))
    return suspect, tuple(pots)


def run_validation_suite(
    config: OracleConfig = DEFAULT_CONFIG,
    jobs: int = 1,
    out=None,
    random_cases: int = 25,
) -> bool:
    """Recompute the closed forms and analytic results by brute force.

    Prints one line per check and a summary; returns True when every check
    agrees. Output is deterministic for a given config, independent of
    ``jobs``.
    """
    out = out if out is not None else sys.stdout
    failures = 0
    checks = 0

    def report(label: str, ok: bool, detail: str) -> None:
        nonlocal failures, checks
        checks += 1
        if not ok:
            failures += 1
        status = "ok" if ok else "MISMATCH"
        print(f"{label}: {detail} ... {status}", file=out)

    print(f"validation suite (seed {config.seed}, {config.mc_samples} samples)", file=out)

    for n, alphabet, repeated in ball_check_cases():
        suspect, mixture = build_ball_case(n, alphabet, repeated)
        posterior, _, unordered = _enumerate_ball(n, alphabet, suspect, mixture, config)
        expected = Prob(Fraction(1, balls.mixture_pair_count(n, repeated)))
        report(
            f"ball posterior n={n} alphabet={alphabet} repeated={repeated}",
            posterior == expected,
            f"enumerated {posterior.value}, closed form {expected.value}",
        )
        report(
            f"ball pair count n={n} alphabet={alphabet} repeated={repeated}",
            unordered == balls.mixture_pair_count(n, repeated),
            f"enumerated {unordered}, closed form {balls.mixture_pair_count(n, repeated)}",
        )
        if repeated == 0:
            closed = balls.two_contributor_analysis(n, alphabet)
            report(
                f"two-contributor posterior n={n} alphabet={alphabet}",
                closed.posterior_h == posterior,
                f"closed form {closed.posterior_h.value}, enumerated {posterior.value}",
            )

    universe = canonical_locus_universe()
    mixture_alleles = frozenset(Allele(a) for a in ("7", "8", "9", "10"))
    suspect = Genotype(Allele("7"), Allele("8"))
    cases = [(universe, mixture_alleles, suspect)]
    rnd = random.Random(config.seed)
    cases.extend(random_genotype_case(rnd) for _ in range(random_cases))
    for index, (uni, mix, susp) in enumerate(cases):
        prior, posterior, lr = enumerate_genotype_analysis(uni, mix, susp, config)
        analytic = analyze_profile_in_mixture(mix, susp, uni)
        agree = (
            analytic.prior == prior
            and analytic.posterior == posterior
            and analytic.lr == lr
        )
        report(
            f"genotype multiset case {index}",
            agree,
            f"prior {prior.value}, posterior {posterior.value}, lr {lr}",
        )
        iid = enumerate_genotype_posterior_iid(uni, mix, susp)
        report(
            f"genotype i.i.d. posterior case {index}",
            iid == posterior,
            f"multiset {posterior.value}, i.i.d. {iid.value}",
        )

    row = balls.k_contributor_analysis(2)
    target = float(row.p_e_h1)
    mc = monte_carlo_check(KContributorScenario(k=2), config, jobs=jobs)
    within = abs(mc.estimate - target) <= 3 * mc.std_error if mc.std_error else False
    report(
        "monte carlo k=2 likelihood",
        within,
        f"estimate {mc.estimate!r} (se {mc.std_error!r}) vs exact "
        f"{decimal_text(row.p_e_h1, 'machine')}",
    )

    certain = monte_carlo_check(
        KContributorScenario(k=2, genotype_freq=Fraction(1)), config, jobs=jobs
    )
    report(
        "monte carlo degenerate frequency 1",
        certain.estimate == 1.0,
        f"estimate {certain.estimate!r}",
    )

    # alphabet 4 keeps the acceptance rate high enough for small budgets
    suspect_profile, pots = build_ball_case(3, 4, 0)
    mc_ball = monte_carlo_check(
        BallPosteriorScenario(3, 4, suspect_profile, pots), config, jobs=jobs
    )
    if mc_ball.inconclusive:
        report("monte carlo ball posterior n=3 alphabet=4", False, "inconclusive sampling")
    else:
        within = abs(mc_ball.estimate - 0.25) <= 3 * max(mc_ball.std_error, 1e-9)
        report(
            "monte carlo ball posterior n=3 alphabet=4",
            within,
            f"estimate {mc_ball.estimate!r} (se {mc_ball.std_error!r}, "
            f"{mc_ball.effective} accepted) vs exact 0.25",
        )

    if failures:
        print(f"validation: FAILED ({failures} of {checks} checks)", file=out)
        return False
    print(f"validation: OK ({checks} checks)", file=out)
    return True
