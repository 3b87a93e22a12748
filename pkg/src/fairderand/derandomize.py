"""The three derandomization schemes.

Each scheme is a uniform family of deterministic threshold classifiers:

* random threshold: one shared threshold u/k, u uniform in {1..k};
* hashed threshold: per-point threshold h(pi(x))/k from a pairwise-
  independent hash of a fixed bucketing of the input;
* locality-sensitive threshold: per-point threshold h(g(x))/k where g is
  a sampled locality-sensitive hash, so close points usually share a
  threshold.

All three use the closed comparison score >= u/k, realized exactly as
u <= floor(score * k).  Samplers draw through a CountingRng and attach
the consumed bit budget to the classifier they return.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

from .core import (
    Dataset,
    DeterministicClassifier,
    Point,
    StochasticScorer,
    threshold_count,
)
from .errors import InvalidParameterError, NotEnumerableError
from .hashing import (
    ENUMERATION_CAP,
    BitBudget,
    FamilyTooLargeError,
    LshFamily,
    LshMember,
    PiFamily,
    PiHash,
)
from .rng import CountingRng


class Bucketer:
    """Deterministic discretization of the input space; equal points map to
    equal buckets."""

    def bucket(self, point: Point) -> Hashable:
        raise NotImplementedError


@dataclass(frozen=True)
class GridBucketer(Bucketer):
    """Quantize inference features to a grid of the given resolution.

    The resolution controls the largest bucket mass, which is the leading
    term of the hashed-threshold scheme's variance bound.
    """

    resolution: float

    def __post_init__(self):
        if self.resolution <= 0:
            raise InvalidParameterError("resolution must be positive")

    def bucket(self, point: Point) -> tuple[int, ...]:
        return tuple(math.floor(v / self.resolution) for v in point.features)


class IdentityBucketer(Bucketer):
    """Each point id is its own bucket (finite, id-keyed domains)."""

    def bucket(self, point: Point) -> str:
        return point.id


def default_bucketer(dataset: Dataset, resolution: float) -> GridBucketer:
    del dataset  # resolution fully determines the grid
    return GridBucketer(resolution)


def realized_buckets(bucketer: Bucketer, dataset: Dataset) -> tuple[Hashable, ...]:
    """Bucket keys realized on the dataset, in first-seen order."""
    seen: dict[Hashable, None] = {}
    for point in dataset:
        seen.setdefault(bucketer.bucket(point), None)
    return tuple(seen)


@dataclass(frozen=True)
class RtClassifier(DeterministicClassifier):
    scorer: StochasticScorer
    k: int
    u: int
    budget: BitBudget | None = None

    def predict(self, point: Point) -> int:
        return 1 if self.u <= threshold_count(self.scorer.score(point), self.k) else 0


@dataclass(frozen=True)
class PiClassifier(DeterministicClassifier):
    scorer: StochasticScorer
    bucketer: Bucketer
    family: PiFamily
    h: PiHash
    budget: BitBudget | None = None

    def predict(self, point: Point) -> int:
        u = self.family.value(self.h, self.bucketer.bucket(point))
        return 1 if u <= threshold_count(self.scorer.score(point), self.family.k) else 0


@dataclass(frozen=True)
class LsClassifier(DeterministicClassifier):
    scorer: StochasticScorer
    member: LshMember
    family: PiFamily
    h: PiHash
    budget: BitBudget | None = None

    def predict(self, point: Point) -> int:
        u = self.family.value(self.h, self.member.apply(point))
        return 1 if u <= threshold_count(self.scorer.score(point), self.family.k) else 0


class Derandomizer:
    """A sampleable family of deterministic classifiers."""

    scorer: StochasticScorer
    k: int

    def sample(self, rng: CountingRng) -> DeterministicClassifier:
        raise NotImplementedError

    @property
    def family_size(self) -> int | None:
        """Number of members, or None when the family is not finite."""
        raise NotImplementedError

    def enumerate_members(self) -> list[DeterministicClassifier]:
        """The full uniform family, for exact-expectation oracles."""
        raise NotImplementedError

    def _check_enumerable(self):
        size = self.family_size
        if size is None:
            raise NotEnumerableError(f"{type(self).__name__} family is not enumerable")
        if size > ENUMERATION_CAP:
            raise FamilyTooLargeError(f"{size} members exceeds cap {ENUMERATION_CAP}")


class RtDerandomizer(Derandomizer):
    """Shared random threshold on the fixed-precision grid {1/k, ..., k/k}.

    The grid makes the family finite (k members) and sampleable with
    O(log k) bits, at the cost of an additive 1/k in the guarantees.
    """

    def __init__(self, scorer: StochasticScorer, k: int):
        if k < 1:
            raise InvalidParameterError("k must be positive")
        self.scorer = scorer
        self.k = k

    def sample(self, rng: CountingRng) -> RtClassifier:
        before = rng.bits_consumed
        u = rng.uniform_int(self.k) + 1
        budget = BitBudget(pi_bits=rng.bits_consumed - before, lsh_bits=0)
        return RtClassifier(self.scorer, self.k, u, budget)

    @property
    def family_size(self) -> int:
        return self.k

    def enumerate_members(self) -> list[RtClassifier]:
        self._check_enumerable()
        return [RtClassifier(self.scorer, self.k, u) for u in range(1, self.k + 1)]


class PiDerandomizer(Derandomizer):
    """Per-point pseudo-random threshold via a pairwise-independent hash of
    a fixed bucketing."""

    def __init__(self, scorer: StochasticScorer, bucketer: Bucketer, pi_family: PiFamily):
        self.scorer = scorer
        self.bucketer = bucketer
        self.pi_family = pi_family
        self.k = pi_family.k

    @classmethod
    def build(
        cls,
        scorer: StochasticScorer,
        dataset: Dataset,
        bucketer: Bucketer,
        k: int,
    ) -> "PiDerandomizer":
        """Fix the bucket set to those realized on the working dataset."""
        return cls(scorer, bucketer, PiFamily(k, realized_buckets(bucketer, dataset)))

    def sample(self, rng: CountingRng) -> PiClassifier:
        before = rng.bits_consumed
        h = self.pi_family.sample(rng)
        budget = BitBudget(pi_bits=rng.bits_consumed - before, lsh_bits=0)
        return PiClassifier(self.scorer, self.bucketer, self.pi_family, h, budget)

    @property
    def family_size(self) -> int:
        return self.pi_family.size

    def enumerate_members(self) -> list[PiClassifier]:
        self._check_enumerable()
        return [
            PiClassifier(self.scorer, self.bucketer, self.pi_family, h)
            for h in self.pi_family.enumerate()
        ]


class LsDerandomizer(Derandomizer):
    """Locality-sensitive bucketing composed with a pairwise-independent
    threshold hash.

    When points carry dedicated fairness features, the locality-sensitive
    hash (and the fairness metric) reads those, while the scorer keeps
    reading inference features; the fairness guarantees are then stated
    against the fairness-feature metric.
    """

    def __init__(self, scorer: StochasticScorer, lsh_family: LshFamily, k: int):
        self.scorer = scorer
        self.lsh_family = lsh_family
        self.pi_family = PiFamily(k, lsh_family.bucket_values)
        self.k = k

    def sample(self, rng: CountingRng) -> LsClassifier:
        start = rng.bits_consumed
        member = self.lsh_family.sample(rng)
        lsh_bits = rng.bits_consumed - start
        h = self.pi_family.sample(rng)
        pi_bits = rng.bits_consumed - start - lsh_bits
        return LsClassifier(
            self.scorer, member, self.pi_family, h, BitBudget(pi_bits, lsh_bits)
        )

    @property
    def family_size(self) -> int | None:
        lsh_size = self.lsh_family.enumerable_size
        if lsh_size is None:
            return None
        return lsh_size * self.pi_family.size

    def enumerate_members(self) -> list[LsClassifier]:
        self._check_enumerable()
        hashes = self.pi_family.enumerate()
        return [
            LsClassifier(self.scorer, member, self.pi_family, h)
            for member in self.lsh_family.enumerate()
            for h in hashes
        ]


def enumerate_family(derandomizer: Derandomizer) -> list[DeterministicClassifier]:
    """Module-level alias for the family enumeration oracle."""
    return derandomizer.enumerate_members()
