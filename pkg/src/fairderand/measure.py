"""Estimators, exact oracles, and closed-form bounds for every audited quantity.

Exact mode enumerates the full classifier family and reports rationals
(integer counts over family-size denominators), so comparisons against
bounds like 1/k are free of float noise.  Monte Carlo mode samples
classifiers with a seeded numpy generator, vectorized over trials, and
reports standard errors; the acceptance convention is agreement within
four standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    Dataset,
    DeterministicClassifier,
    Point,
    StochasticScorer,
    threshold_count,
)
from .derandomize import (
    Derandomizer,
    LsDerandomizer,
    PiDerandomizer,
    RtDerandomizer,
)
from .errors import (
    EmptyPairSetError,
    InvalidParameterError,
    NotEnumerableError,
)
from .hashing import MinHashFamily, SimHashFamily
from .metrics import Metric, binary_support
from .rng import CountingRng

Number = Union[Fraction, float, int]

DEFAULT_PAIRS_CAP = 200_000


@dataclass
class EstimatorConfig:
    """How a quantity is estimated: exact family enumeration or seeded
    Monte Carlo with a trial budget."""

    mode: str = "exact"
    trials: int = 100_000
    seed: int = 0
    pair_threshold: float = 1.0
    confidence: float = 0.25
    pairs_cap: int = DEFAULT_PAIRS_CAP

    def __post_init__(self):
        if self.mode not in ("exact", "mc"):
            raise InvalidParameterError(f"unknown estimator mode {self.mode!r}")
        if self.trials < 1:
            raise InvalidParameterError("trials must be at least 1")
        if not 0 < self.confidence < 1:
            raise InvalidParameterError("confidence must lie in (0, 1)")
        if not 0 <= self.pair_threshold <= 1:
            raise InvalidParameterError("pair threshold must lie in [0, 1]")

    @property
    def exact(self) -> bool:
        return self.mode == "exact"


@dataclass(frozen=True)
class Estimate:
    """A measured quantity: exact rational, or float with a standard error."""

    value: Number
    stderr: Optional[float] = None

    def __float__(self) -> float:
        return float(self.value)


class FairnessReport:
    """Named measured quantities next to the theoretical bounds they are
    checked against.  Serializes to
    {quantity: {value, stderr?, bound?, bound_source, satisfied?}}."""

    def __init__(self):
        self.quantities: dict[str, dict] = {}

    def add(
        self,
        name: str,
        value: Number,
        stderr: Optional[float] = None,
        bound: Optional[Number] = None,
        bound_source: Optional[str] = None,
        satisfied: Optional[bool] = None,
    ) -> None:
        entry: dict = {"value": value}
        if stderr is not None:
            entry["stderr"] = stderr
        if bound is not None:
            entry["bound"] = bound
            entry["bound_source"] = bound_source or "unspecified"
        if satisfied is not None:
            entry["satisfied"] = satisfied
        self.quantities[name] = entry

    def __getitem__(self, name: str) -> dict:
        return self.quantities[name]

    def __contains__(self, name: str) -> bool:
        return name in self.quantities

    @property
    def all_satisfied(self) -> bool:
        return all(e.get("satisfied", True) for e in self.quantities.values())

    def to_json_dict(self) -> dict:
        out = {}
        for name, entry in self.quantities.items():
            row = dict(entry)
            for key in ("value", "bound"):
                if key in row and isinstance(row[key], Fraction):
                    row[key] = float(row[key])
            out[name] = row
        return out


# ---------------------------------------------------------------------------
# pair selection

def select_pairs(
    n_points: int, cap: int = DEFAULT_PAIRS_CAP, seed: int = 0
) -> tuple[list[tuple[int, int]], Optional[int]]:
    """Unordered distinct index pairs; uniformly subsampled without
    replacement above the cap (the seed used is returned for the report)."""
    total = n_points * (n_points - 1) // 2
    if total <= cap:
        return [(i, j) for i in range(n_points) for j in range(i + 1, n_points)], None
    gen = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < cap:
        i = int(gen.integers(0, n_points))
        j = int(gen.integers(0, n_points))
        if i != j:
            chosen.add((min(i, j), max(i, j)))
    return sorted(chosen), seed


# ---------------------------------------------------------------------------
# exact enumeration internals

def _enumerated_bits(derand: Derandomizer, point: Point) -> np.ndarray:
    """Prediction bit of every family member at the point, in enumeration
    order.  This is the exact-expectation oracle's workhorse."""
    derand._check_enumerable()
    t = threshold_count(derand.scorer.score(point), derand.k)
    k = derand.k
    if isinstance(derand, RtDerandomizer):
        u = np.arange(1, k + 1, dtype=np.int64)
    elif isinstance(derand, PiDerandomizer):
        e = derand.pi_family.embed_value(derand.bucketer.bucket(point))
        a = np.repeat(np.arange(k, dtype=np.int64), k)
        c = np.tile(np.arange(k, dtype=np.int64), k)
        u = (a * e + c) % k + 1
    elif isinstance(derand, LsDerandomizer):
        members = derand.lsh_family.enumerate()
        embeds = np.array(
            [derand.pi_family.embed_value(m.apply(point)) for m in members],
            dtype=np.int64,
        )
        a = np.repeat(np.arange(k, dtype=np.int64), k)
        c = np.tile(np.arange(k, dtype=np.int64), k)
        u = ((embeds[:, None] * a[None, :] + c[None, :]) % k + 1).reshape(-1)
    else:
        raise NotEnumerableError(f"cannot enumerate {type(derand).__name__}")
    return u <= t


def _exact_mean(derand: Derandomizer, point: Point) -> Fraction:
    bits = _enumerated_bits(derand, point)
    return Fraction(int(bits.sum()), bits.size)


# ---------------------------------------------------------------------------
# Monte Carlo internals

class _ClassifierBatch:
    """A vectorized batch of classifiers sampled uniformly from the family.

    Parameters are drawn once and shared across point evaluations, so
    pairwise quantities see each sampled classifier at both points.
    """

    def __init__(self, derand: Derandomizer, trials: int, gen: np.random.Generator):
        self.derand = derand
        self.trials = trials
        k = derand.k
        if isinstance(derand, RtDerandomizer):
            self.u = gen.integers(1, k + 1, size=trials, dtype=np.int64)
        elif isinstance(derand, PiDerandomizer):
            self.a = gen.integers(0, k, size=trials, dtype=np.int64)
            self.c = gen.integers(0, k, size=trials, dtype=np.int64)
        elif isinstance(derand, LsDerandomizer):
            self.a = gen.integers(0, k, size=trials, dtype=np.int64)
            self.c = gen.integers(0, k, size=trials, dtype=np.int64)
            fam = derand.lsh_family
            if isinstance(fam, SimHashFamily):
                self.normals = gen.standard_normal((trials, fam.dim))
            elif fam.enumerable_size is not None:
                self.members = fam.enumerate()
                self.member_idx = gen.integers(0, len(self.members), size=trials)
            elif isinstance(fam, MinHashFamily):
                # uniform permutations, one row per trial
                self.ranks = np.argsort(
                    gen.random((trials, fam.universe_size)), axis=1
                ).argsort(axis=1)
            else:
                raise NotEnumerableError(f"cannot sample {type(fam).__name__} in batch")
        else:
            raise InvalidParameterError(f"unknown family {type(derand).__name__}")

    def _embeds(self, point: Point) -> np.ndarray:
        derand = self.derand
        fam = derand.lsh_family
        if isinstance(fam, SimHashFamily):
            x = np.asarray(point.fairness_vector)
            return (self.normals @ x >= 0.0).astype(np.int64)
        if hasattr(self, "members"):
            per_member = np.array(
                [derand.pi_family.embed_value(m.apply(point)) for m in self.members],
                dtype=np.int64,
            )
            return per_member[self.member_idx]
        support = sorted(binary_support(point.fairness_vector))
        if not support:
            raise InvalidParameterError("min-wise hashing is undefined on the empty set")
        cols = self.ranks[:, support]
        return np.asarray(support, dtype=np.int64)[np.argmin(cols, axis=1)]

    def bits(self, point: Point) -> np.ndarray:
        derand = self.derand
        t = threshold_count(derand.scorer.score(point), derand.k)
        k = derand.k
        if isinstance(derand, RtDerandomizer):
            return self.u <= t
        if isinstance(derand, PiDerandomizer):
            e = derand.pi_family.embed_value(derand.bucketer.bucket(point))
            return (self.a * e + self.c) % k + 1 <= t
        e = self._embeds(point)
        return (self.a * e + self.c) % k + 1 <= t


def _mean_with_stderr(bits: np.ndarray) -> Estimate:
    p = float(bits.mean())
    return Estimate(p, math.sqrt(max(p * (1.0 - p), 0.0) / bits.size))


# ---------------------------------------------------------------------------
# bias and variance

def family_mean_prediction(derand: Derandomizer, point: Point, cfg: EstimatorConfig) -> Estimate:
    """Mean prediction at the point over the classifier family."""
    if cfg.exact:
        return Estimate(_exact_mean(derand, point))
    batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    return _mean_with_stderr(batch.bits(point))


def pointwise_bias(derand: Derandomizer, point: Point, cfg: EstimatorConfig) -> Estimate:
    """Family-mean prediction at the point minus the score."""
    score = derand.scorer.score(point)
    mean = family_mean_prediction(derand, point, cfg)
    if cfg.exact:
        return Estimate(mean.value - score)
    return Estimate(mean.value - float(score), mean.stderr)


def aggregate_bias(derand: Derandomizer, dataset: Dataset, cfg: EstimatorConfig) -> Estimate:
    """Dataset average of the pointwise bias."""
    if cfg.exact:
        total = Fraction(0)
        for point in dataset:
            total += _exact_mean(derand, point) - derand.scorer.score(point)
        return Estimate(total / len(dataset))
    batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    acc = np.zeros(cfg.trials)
    mean_score = 0.0
    for point in dataset:
        acc += batch.bits(point)
        mean_score += float(derand.scorer.score(point))
    mu = acc / len(dataset)
    mean_score /= len(dataset)
    return Estimate(float(mu.mean()) - mean_score, float(mu.std(ddof=1)) / math.sqrt(cfg.trials))


def pointwise_variance(derand: Derandomizer, point: Point, cfg: EstimatorConfig) -> Estimate:
    """Variance of the prediction bit across family members."""
    if cfg.exact:
        p = _exact_mean(derand, point)
        return Estimate(p * (1 - p))
    batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    bits = batch.bits(point).astype(float)
    return Estimate(float(bits.var(ddof=1)), _variance_stderr(bits))


def aggregate_variance(derand: Derandomizer, dataset: Dataset, cfg: EstimatorConfig) -> Estimate:
    """Variance, across family members, of the member's dataset-mean
    prediction."""
    n = len(dataset)
    if cfg.exact:
        derand._check_enumerable()
        sums = None
        size = 0
        for point in dataset:
            bits = _enumerated_bits(derand, point)
            size = bits.size
            sums = bits.astype(np.int64) if sums is None else sums + bits
        total = int(sums.sum())
        total_sq = int((sums * sums).sum())  # S_m <= len(dataset): no overflow
        mean_sq = Fraction(total_sq, size * n * n)
        mean = Fraction(total, size * n)
        return Estimate(mean_sq - mean * mean)
    batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    acc = np.zeros(cfg.trials)
    for point in dataset:
        acc += batch.bits(point)
    mu = acc / n
    return Estimate(float(mu.var(ddof=1)), _variance_stderr(mu))


def _variance_stderr(samples: np.ndarray) -> float:
    """Asymptotic standard error of the sample variance via the fourth
    central moment."""
    m = samples.size
    centered = samples - samples.mean()
    m4 = float((centered**4).mean())
    var = float(centered.var())
    return math.sqrt(max(m4 - var * var, 0.0) / m)


# ---------------------------------------------------------------------------
# pairwise and aggregate fairness

def pairwise_unfairness(
    derand: Derandomizer, x: Point, y: Point, cfg: EstimatorConfig
) -> Estimate:
    """Expected absolute prediction gap E[|f(x) - f(y)|] over the family."""
    if cfg.exact:
        bx = _enumerated_bits(derand, x)
        by = _enumerated_bits(derand, y)
        return Estimate(Fraction(int((bx != by).sum()), bx.size))
    batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    return _mean_with_stderr(batch.bits(x) != batch.bits(y))


def metric_fairness_check(
    derand: Derandomizer,
    dataset: Dataset,
    metric: Metric,
    alpha: Number,
    beta: Number,
    cfg: EstimatorConfig,
) -> FairnessReport:
    """Check E[|f(x) - f(x')|] <= alpha*d + beta on every pair (or a
    seeded subsample above the pair cap)."""
    pairs, pair_seed = select_pairs(len(dataset), cfg.pairs_cap, cfg.seed)
    batch = None
    cache: dict[int, np.ndarray] = {}

    def bits_for(i: int) -> np.ndarray:
        if i not in cache:
            cache[i] = (
                _enumerated_bits(derand, dataset[i])
                if cfg.exact
                else batch.bits(dataset[i])
            )
        return cache[i]

    if not cfg.exact:
        batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))

    violations = 0
    worst_excess: Number = -math.inf
    for i, j in pairs:
        bx, by = bits_for(i), bits_for(j)
        n_diff = int((bx != by).sum())
        value: Number = Fraction(n_diff, bx.size) if cfg.exact else n_diff / bx.size
        d = metric.distance(dataset[i], dataset[j])
        excess = value - (alpha * d + beta)
        if excess > 0:
            violations += 1
        if excess > worst_excess:
            worst_excess = excess

    report = FairnessReport()
    report.add("pairs_checked", len(pairs))
    if pair_seed is not None:
        report.add("pair_sample_seed", pair_seed)
    report.add(
        "fairness_violations",
        violations,
        bound=0,
        bound_source="pairwise fairness definition",
        satisfied=violations == 0,
    )
    report.add("worst_excess", worst_excess)
    return report


def aggregate_fairness(
    classifier: DeterministicClassifier,
    dataset: Dataset,
    metric: Metric,
    tau: float,
) -> Fraction:
    """Fraction of tau-close pairs to which the classifier assigns
    different predictions."""
    bits = [classifier.predict(p) for p in dataset]
    close = 0
    split = 0
    for i, j in dataset.index_pairs():
        if metric.distance(dataset[i], dataset[j]) <= tau:
            close += 1
            if bits[i] != bits[j]:
                split += 1
    if close == 0:
        raise EmptyPairSetError(f"no pairs within distance {tau}")
    return Fraction(split, close)


def sampled_aggregate_fairness(
    derand: Derandomizer,
    dataset: Dataset,
    metric: Metric,
    tau: float,
    n_classifiers: int,
    rng: CountingRng,
) -> list[Fraction]:
    """Split fraction of tau-close pairs for each of n sampled classifiers."""
    close_pairs = [
        (i, j)
        for i, j in dataset.index_pairs()
        if metric.distance(dataset[i], dataset[j]) <= tau
    ]
    if not close_pairs:
        raise EmptyPairSetError(f"no pairs within distance {tau}")
    values = []
    for _ in range(n_classifiers):
        clf = derand.sample(rng)
        bits = [clf.predict(p) for p in dataset]
        split = sum(bits[i] != bits[j] for i, j in close_pairs)
        values.append(Fraction(split, len(close_pairs)))
    return values


def aggregate_fairness_tail_check(
    derand: Derandomizer,
    dataset: Dataset,
    metric: Metric,
    alpha: Number,
    tau: float,
    delta: float,
    n_classifiers: int,
    rng: CountingRng,
    cfg: EstimatorConfig,
    slack: float = 0.05,
) -> FairnessReport:
    """Sample classifiers and check the high-probability aggregate bound:
    at most a delta fraction may split more than (1 + 1/sqrt(delta)) times
    the family's certified pairwise budget (alpha*tau + beta)."""
    beta = family_beta(derand, dataset, metric, alpha, cfg)
    bound = aggregate_tail_bound(alpha, beta, tau, delta)
    rhos = sampled_aggregate_fairness(derand, dataset, metric, tau, n_classifiers, rng)
    violating = sum(float(r) > bound for r in rhos)
    fraction = violating / n_classifiers
    report = FairnessReport()
    report.add("certified_beta", beta)
    report.add("split_fraction_bound", bound, bound_source="aggregate fairness tail bound")
    report.add(
        "violating_classifier_fraction",
        fraction,
        bound=delta + slack,
        bound_source="sampling tail probability (plus sampling slack)",
        satisfied=fraction <= delta + slack,
    )
    return report


def threshold_fairness_check(
    derand: Derandomizer,
    dataset: Dataset,
    metric: Metric,
    sigma: float,
    tau: float,
    cfg: EstimatorConfig,
) -> FairnessReport:
    """Over pairs within distance sigma, check the family's expected
    prediction gap against tau; for the locality-sensitive scheme with
    k >= 4/sigma, also against the preserved guarantee sigma + tau."""
    if not (0 < sigma < 1 and 0 < tau < 1):
        raise InvalidParameterError("sigma and tau must lie in (0, 1)")
    close = [
        (i, j)
        for i, j in dataset.index_pairs()
        if metric.distance(dataset[i], dataset[j]) <= sigma
    ]
    report = FairnessReport()
    report.add("pairs_within_sigma", len(close))
    if not close:
        report.add("max_gap", 0, bound=tau, bound_source="threshold fairness (vacuous)", satisfied=True)
        return report

    worst: Number = 0
    scorer_worst: Number = 0
    for i, j in close:
        value = pairwise_unfairness(derand, dataset[i], dataset[j], cfg).value
        if value > worst:
            worst = value
        gap = abs(derand.scorer.score(dataset[i]) - derand.scorer.score(dataset[j]))
        if gap > scorer_worst:
            scorer_worst = gap

    report.add("scorer_max_gap", scorer_worst)
    report.add(
        "max_gap",
        worst,
        bound=tau,
        bound_source="threshold fairness target",
        satisfied=worst <= tau,
    )
    if isinstance(derand, LsDerandomizer) and derand.k >= 4 / sigma:
        preserved = ls_threshold_fairness_bound(sigma, tau)
        report.add(
            "max_gap_vs_preserved_guarantee",
            worst,
            bound=preserved,
            bound_source="threshold fairness preservation (k >= 4/sigma)",
            satisfied=worst <= preserved,
        )
    if isinstance(derand, RtDerandomizer):
        grid = rt_threshold_fairness_bound(tau, derand.k)
        report.add(
            "max_gap_vs_grid_guarantee",
            worst,
            bound=grid,
            bound_source="threshold fairness preservation (1/k grid)",
            satisfied=worst <= grid,
        )
    return report


# ---------------------------------------------------------------------------
# loss approximation

MISCLASSIFICATION = {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0}


def all_loss_tables() -> list[dict[tuple[int, int], int]]:
    """All 16 binary loss tables l: {0,1}^2 -> {0,1}."""
    tables = []
    for code in range(16):
        bits = [(code >> i) & 1 for i in range(4)]
        tables.append({(0, 0): bits[0], (0, 1): bits[1], (1, 0): bits[2], (1, 1): bits[3]})
    return tables


def loss_value(source, point: Point, y: int, loss: dict[tuple[int, int], int]) -> Fraction:
    """Expected loss of a scorer (or realized loss of a classifier):
    f(x) * l(1, y) + (1 - f(x)) * l(0, y)."""
    if y not in (0, 1):
        raise InvalidParameterError("label must be a bit")
    if isinstance(source, StochasticScorer):
        score = source.score(point)
    else:
        score = Fraction(source.predict(point))
    return score * loss[(1, y)] + (1 - score) * loss[(0, y)]


def loss_bias_variance(
    derand: Derandomizer,
    point: Point,
    y: int,
    loss: dict[tuple[int, int], int],
    cfg: EstimatorConfig,
) -> tuple[Estimate, Estimate]:
    """(|E[L(family)] - L(scorer)|, Var[L(family)]) at the labeled point."""
    base = loss_value(derand.scorer, point, y, loss)
    if cfg.exact:
        bits = _enumerated_bits(derand, point)
        ones = int(bits.sum())
        losses = Fraction(ones * loss[(1, y)] + (bits.size - ones) * loss[(0, y)], bits.size)
        return Estimate(abs(losses - base)), Estimate(losses * (1 - losses))
    batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    bits = batch.bits(point)
    lvals = np.where(bits, loss[(1, y)], loss[(0, y)]).astype(float)
    mean = _mean_with_stderr(lvals)
    return (
        Estimate(abs(mean.value - float(base)), mean.stderr),
        Estimate(float(lvals.var(ddof=1)), _variance_stderr(lvals)),
    )


# ---------------------------------------------------------------------------
# bias-variance decomposition

def decomposition_check(
    derand: Derandomizer, point: Point, cfg: EstimatorConfig
) -> FairnessReport:
    """Joint Monte Carlo check of the error decomposition: the expected gap
    between a sampled member and a Bernoulli realization of the score is at
    most |bias| + 2 * (score variance + family variance)^(2/3).

    The Bernoulli variance is score*(1 - score) analytically; the family
    variance and bias come from enumeration when available.
    """
    score = derand.scorer.score(point)
    var_bern = score * (1 - score)
    exact_cfg = EstimatorConfig(mode="exact", seed=cfg.seed)
    try:
        bias = pointwise_bias(derand, point, exact_cfg).value
        var_family = pointwise_variance(derand, point, exact_cfg).value
    except NotEnumerableError:
        mc_cfg = EstimatorConfig(mode="mc", trials=cfg.trials, seed=cfg.seed)
        bias = pointwise_bias(derand, point, mc_cfg).value
        var_family = pointwise_variance(derand, point, mc_cfg).value

    rhs = decomposition_bound(abs(bias), var_bern, var_family)
    gen = np.random.default_rng(cfg.seed)
    batch = _ClassifierBatch(derand, cfg.trials, gen)
    member_bits = batch.bits(point)
    bern_bits = gen.random(cfg.trials) < float(score)
    lhs = _mean_with_stderr(member_bits != bern_bits)

    report = FairnessReport()
    report.add("bias_abs", abs(bias))
    report.add("score_variance", var_bern)
    report.add("family_variance", var_family)
    report.add(
        "expected_gap",
        lhs.value,
        stderr=lhs.stderr,
        bound=rhs,
        bound_source="bias-variance decomposition",
        satisfied=lhs.value <= rhs + 4 * lhs.stderr,
    )
    return report


# ---------------------------------------------------------------------------
# empirical fairness curve and certification

def empirical_fairness_curve(
    source,
    dataset: Dataset,
    metric: Metric,
    alphas: Sequence[float],
    cfg: Optional[EstimatorConfig] = None,
) -> list[tuple[float, float]]:
    """For each slope a on the grid, the mean residual additive unfairness
    b(a) = mean over pairs of max(gap - a*d, 0).

    ``source`` is a scorer (gap = |score difference|) or a derandomizer
    (gap = expected prediction gap over the family).
    """
    cfg = cfg or EstimatorConfig()
    pairs, _ = select_pairs(len(dataset), cfg.pairs_cap, cfg.seed)
    if not pairs:
        raise InvalidParameterError("need at least 2 points")
    gaps, dists = [], []
    for i, j in pairs:
        if isinstance(source, StochasticScorer):
            gaps.append(float(abs(source.score(dataset[i]) - source.score(dataset[j]))))
        else:
            gaps.append(float(pairwise_unfairness(source, dataset[i], dataset[j], cfg).value))
        dists.append(float(metric.distance(dataset[i], dataset[j])))
    g = np.asarray(gaps)
    d = np.asarray(dists)
    return [(float(a), float(np.maximum(g - float(a) * d, 0.0).mean())) for a in alphas]


def scorer_beta(
    scorer: StochasticScorer, dataset: Dataset, metric: Metric, alpha: Number
) -> Number:
    """Smallest beta for which the scorer is (alpha, beta)-fair on the
    dataset: max over pairs of (|score gap| - alpha*d)+."""
    worst: Number = 0
    for i, j in dataset.index_pairs():
        gap = abs(scorer.score(dataset[i]) - scorer.score(dataset[j]))
        excess = gap - alpha * metric.distance(dataset[i], dataset[j])
        if excess > worst:
            worst = excess
    return worst


def family_beta(
    derand: Derandomizer,
    dataset: Dataset,
    metric: Metric,
    alpha: Number,
    cfg: EstimatorConfig,
) -> Number:
    """Smallest beta for which the family is (alpha, beta)-fair on the
    dataset pairs, from exact (or estimated) pairwise gaps."""
    worst: Number = 0
    cache: dict[int, np.ndarray] = {}
    batch = None
    if not cfg.exact:
        batch = _ClassifierBatch(derand, cfg.trials, np.random.default_rng(cfg.seed))
    for i, j in dataset.index_pairs():
        for idx in (i, j):
            if idx not in cache:
                cache[idx] = (
                    _enumerated_bits(derand, dataset[idx])
                    if cfg.exact
                    else batch.bits(dataset[idx])
                )
        n_diff = int((cache[i] != cache[j]).sum())
        gap: Number = (
            Fraction(n_diff, cache[i].size) if cfg.exact else n_diff / cache[i].size
        )
        excess = gap - alpha * metric.distance(dataset[i], dataset[j])
        if excess > worst:
            worst = excess
    return worst


# ---------------------------------------------------------------------------
# closed-form bounds

def _check_fairness_params(alpha: Number, beta: Number):
    if alpha < 1:
        raise InvalidParameterError("alpha must be at least 1")
    if beta < 0:
        raise InvalidParameterError("beta must be non-negative")


def _check_unit(name: str, value: Number):
    if not 0 <= value <= 1:
        raise InvalidParameterError(f"{name} must lie in [0, 1]")


def bias_bound(k: int) -> Fraction:
    """1/k: bias budget of the hashed-threshold schemes (and the grid
    random threshold on arbitrary scores)."""
    if k < 1:
        raise InvalidParameterError("k must be positive")
    return Fraction(1, k)


def pi_variance_bound(max_bucket_mass: Number, mean_score_variance: Number, k: int) -> Number:
    """Hashed-threshold variance budget: (max bucket mass) * E[f(1-f)] + 1/k."""
    _check_unit("max_bucket_mass", max_bucket_mass)
    return max_bucket_mass * mean_score_variance + bias_bound(k)


def ls_variance_bound(
    mean_max_bucket_mass: Number, mean_score_variance: Number, k: int
) -> Number:
    """Same form with the bucket-mass term averaged over the hash family."""
    _check_unit("mean_max_bucket_mass", mean_max_bucket_mass)
    return mean_max_bucket_mass * mean_score_variance + bias_bound(k)


def rt_variance_bound(mean_score_variance: Number) -> Number:
    """Random-threshold variance budget: E[f(1-f)] (inequality only; no
    tightness or cross-scheme ordering is claimed)."""
    return mean_score_variance


def ls_pairwise_exact_band(
    fx: Fraction, fy: Fraction, d: Number, k: int
) -> tuple[Number, Number]:
    """Exact-expectation band for the locality-sensitive scheme:
    |fx - fy| + 2*min(1-max)*d, plus or minus 2/k."""
    _check_unit("d", d)
    lo_score, hi_score = min(fx, fy), max(fx, fy)
    center = (hi_score - lo_score) + 2 * lo_score * (1 - hi_score) * d
    halfwidth = 2 * bias_bound(k)
    return center - halfwidth, center + halfwidth


def ls_pairwise_bound(
    alpha: Number, beta: Number, d: Number, k: int, fx: Number, fy: Number
) -> Number:
    """Score-dependent pairwise fairness budget:
    (alpha + 2*min(1-max)) * d + beta + 2/k."""
    _check_fairness_params(alpha, beta)
    _check_unit("d", d)
    lo_score, hi_score = min(fx, fy), max(fx, fy)
    return (alpha + 2 * lo_score * (1 - hi_score)) * d + beta + 2 * bias_bound(k)


def worst_case_pairwise_bound(alpha: Number, beta: Number, d: Number, epsilon: Number) -> Number:
    """Worst case over scores (min(1-max) <= 1/4):
    (alpha + 1/2) * d + beta + epsilon, with epsilon >= 2/k."""
    _check_fairness_params(alpha, beta)
    _check_unit("d", d)
    if epsilon <= 0:
        raise InvalidParameterError("epsilon must be positive")
    return (alpha + Fraction(1, 2)) * d + beta + epsilon


def aggregate_tail_bound(alpha: Number, beta: Number, tau: Number, delta: float) -> float:
    """(1 + 1/sqrt(delta)) * (alpha*tau + beta): the split-fraction level
    that at most a delta fraction of sampled classifiers may exceed."""
    _check_fairness_params(alpha, beta)
    _check_unit("tau", tau)
    if not 0 < delta < 1:
        raise InvalidParameterError("delta must lie in (0, 1)")
    return (1.0 + 1.0 / math.sqrt(delta)) * float(alpha * tau + beta)


def worst_case_aggregate_bound(
    alpha: Number, beta: Number, tau: Number, delta: float, epsilon: Number
) -> float:
    """Aggregate version of the worst-case pairwise budget:
    (1 + 1/sqrt(delta)) * (alpha*tau + tau/2 + beta + epsilon)."""
    if epsilon <= 0:
        raise InvalidParameterError("epsilon must be positive")
    return aggregate_tail_bound(
        alpha, beta + tau * Fraction(1, 2) + epsilon, tau, delta
    )


def decomposition_bound(
    bias_abs: Number, bernoulli_variance: Number, family_variance: Number
) -> float:
    """|bias| + 2 * (variance sum)^(2/3)."""
    if bias_abs < 0 or bernoulli_variance < 0 or family_variance < 0:
        raise InvalidParameterError("decomposition inputs must be non-negative")
    return float(bias_abs) + 2.0 * float(bernoulli_variance + family_variance) ** (2.0 / 3.0)


def manipulation_gain_bound(alpha: Number, beta: Number, cost: Number) -> Number:
    """(alpha - 1) * cost + beta: utility gain budget for a fair classifier."""
    _check_fairness_params(alpha, beta)
    if cost < 0:
        raise InvalidParameterError("cost must be non-negative")
    return (alpha - 1) * cost + beta


def rt_threshold_fairness_bound(tau: Number, k: int) -> Number:
    """tau + 1/k: grid random threshold preserves threshold fairness up to
    the grid precision."""
    _check_unit("tau", tau)
    return tau + bias_bound(k)


def ls_threshold_fairness_bound(sigma: Number, tau: Number) -> Number:
    """sigma + tau: the preserved threshold-fairness budget for the
    locality-sensitive scheme with k >= 4/sigma."""
    _check_unit("sigma", sigma)
    _check_unit("tau", tau)
    return sigma + tau


BOUND_REGISTRY = {
    "bias": bias_bound,
    "pi_variance": pi_variance_bound,
    "ls_variance": ls_variance_bound,
    "rt_variance": rt_variance_bound,
    "ls_pairwise": ls_pairwise_bound,
    "worst_case_pairwise": worst_case_pairwise_bound,
    "aggregate_tail": aggregate_tail_bound,
    "worst_case_aggregate": worst_case_aggregate_bound,
    "decomposition": decomposition_bound,
    "manipulation_gain": manipulation_gain_bound,
    "rt_threshold_fairness": rt_threshold_fairness_bound,
    "ls_threshold_fairness": ls_threshold_fairness_bound,
}


def compute_bound(name: str, **inputs) -> Number:
    """Evaluate a named closed-form bound (CLI entry point)."""
    try:
        fn = BOUND_REGISTRY[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown bound {name!r}; choose from {sorted(BOUND_REGISTRY)}"
        ) from None
    return fn(**inputs)
