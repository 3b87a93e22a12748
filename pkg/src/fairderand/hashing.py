"""Hash families with exactly known distributional properties.

Two kinds live here:

* an affine pairwise-independent family over Z_k: for any two embedded
  buckets, the joint distribution of their hash values is exactly uniform
  over [k]^2 (each cell hit by exactly one (a, c) coefficient pair);

* atomic locality-sensitive families (bit sampling, min-wise permutation
  hashing, random-hyperplane signs) whose collision probability for a
  uniformly sampled member equals exactly 1 - d(x, x') for the paired
  metric.  Members are never concatenated: amplification would turn the
  collision probability into (1 - d)^m and break the fairness analysis.

Both support full-family enumeration at small scale, which is the exact
expectation oracle the audits are built on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

from .core import Point
from .errors import (
    FamilyTooLargeError,
    InvalidParameterError,
    NotEnumerableError,
    UnknownBucketError,
)
from .metrics import binary_support
from .rng import CountingRng

ENUMERATION_CAP = 10**6
MINHASH_ENUM_MAX = 7


@dataclass(frozen=True)
class BitBudget:
    """Random bits consumed to sample one classifier.

    ``pi_bits`` counts the [k]-range draws (the affine hash coefficients,
    or the single threshold index of the random-threshold scheme);
    ``lsh_bits`` counts the locality-sensitive member draw.
    """

    pi_bits: int
    lsh_bits: int

    @property
    def total(self) -> int:
        return self.pi_bits + self.lsh_bits

    def as_dict(self) -> dict:
        return {"pi_bits": self.pi_bits, "lsh_bits": self.lsh_bits, "total": self.total}


@dataclass(frozen=True)
class PiHash:
    """One member of the affine family: b -> ((a * embed(b) + c) mod k) + 1."""

    a: int
    c: int


class PiFamily:
    """Affine pairwise-independent hash family from a finite bucket set into [k].

    Exact pairwise independence on the embedded domain requires every
    pairwise difference of embedded values to be a unit mod k.  Buckets are
    embedded as consecutive integers 0..|B|-1, so the condition is
    gcd(j, k) = 1 for j = 1..|B|-1; any prime k >= |B| qualifies, and so
    does any k when there are at most two buckets.
    """

    def __init__(self, k: int, buckets: Sequence[Hashable]):
        if k < 1:
            raise InvalidParameterError("k must be positive")
        buckets = tuple(buckets)
        if not buckets:
            raise InvalidParameterError("bucket set must be non-empty")
        if len(set(buckets)) != len(buckets):
            raise InvalidParameterError("buckets must be distinct")
        if k < len(buckets):
            raise InvalidParameterError(f"k={k} smaller than bucket count {len(buckets)}")
        for j in range(1, len(buckets)):
            if math.gcd(j, k) != 1:
                raise InvalidParameterError(
                    f"embedded difference {j} is not a unit mod {k}; "
                    f"pairwise independence would fail (use a prime k >= {len(buckets)})"
                )
        self.k = k
        self.buckets = buckets
        self.embed = {b: i for i, b in enumerate(buckets)}

    def embed_value(self, bucket: Hashable) -> int:
        try:
            return self.embed[bucket]
        except KeyError:
            raise UnknownBucketError(bucket) from None

    def value(self, h: PiHash, bucket: Hashable) -> int:
        """Hash value in [1..k]."""
        return (h.a * self.embed_value(bucket) + h.c) % self.k + 1

    def sample(self, rng: CountingRng) -> PiHash:
        """Uniform (a, c) over Z_k^2; rejection keeps uniformity exact."""
        return PiHash(rng.uniform_int(self.k), rng.uniform_int(self.k))

    @property
    def size(self) -> int:
        return self.k * self.k

    def enumerate(self) -> list[PiHash]:
        """All k^2 members, each of weight 1/k^2."""
        if self.size > ENUMERATION_CAP:
            raise FamilyTooLargeError(f"{self.size} members exceeds cap {ENUMERATION_CAP}")
        return [PiHash(a, c) for a in range(self.k) for c in range(self.k)]


class LshMember:
    """One sampled locality-sensitive hash function."""

    def apply(self, point: Point) -> Hashable:
        raise NotImplementedError


class LshFamily:
    """A family with Pr_h[h(x) != h(x')] exactly equal to the paired metric."""

    bucket_values: tuple[Hashable, ...]

    def sample(self, rng: CountingRng) -> LshMember:
        raise NotImplementedError

    def enumerate(self) -> list[LshMember]:
        raise NotImplementedError

    @property
    def enumerable_size(self) -> int | None:
        """Family size when enumeration is supported, else None."""
        return None


@dataclass(frozen=True)
class BitSamplingMember(LshMember):
    index: int

    def apply(self, point: Point) -> int:
        vector = point.fairness_vector
        value = vector[self.index]
        if value not in (0.0, 1.0):
            raise InvalidParameterError("bit sampling requires 0/1 features")
        return int(value)


class BitSamplingFamily(LshFamily):
    """Sample one coordinate of a {0,1}^n vector; paired with normalized
    Hamming distance."""

    def __init__(self, n: int):
        if n < 1:
            raise InvalidParameterError("dimension must be positive")
        self.n = n
        self.bucket_values = (0, 1)

    def sample(self, rng: CountingRng) -> BitSamplingMember:
        return BitSamplingMember(rng.uniform_int(self.n))

    @property
    def enumerable_size(self) -> int:
        return self.n

    def enumerate(self) -> list[BitSamplingMember]:
        return [BitSamplingMember(i) for i in range(self.n)]


@dataclass(frozen=True)
class MinHashMember(LshMember):
    """A permutation of the universe, stored as rank[element]; a set hashes
    to its minimum-rank element."""

    ranks: tuple[int, ...]

    def apply(self, point: Point) -> int:
        support = binary_support(point.fairness_vector)
        if not support:
            raise InvalidParameterError("min-wise hashing is undefined on the empty set")
        return min(support, key=lambda e: self.ranks[e])


class MinHashFamily(LshFamily):
    """Min-wise permutation hashing over a universe of feature indices;
    paired with Jaccard distance.  Buckets are the universe elements."""

    def __init__(self, universe_size: int):
        if universe_size < 1:
            raise InvalidParameterError("universe must be non-empty")
        self.universe_size = universe_size
        self.bucket_values = tuple(range(universe_size))

    def sample(self, rng: CountingRng) -> MinHashMember:
        return MinHashMember(rng.permutation(self.universe_size))

    @property
    def enumerable_size(self) -> int | None:
        if self.universe_size > MINHASH_ENUM_MAX:
            return None
        return math.factorial(self.universe_size)

    def enumerate(self) -> list[MinHashMember]:
        if self.universe_size > MINHASH_ENUM_MAX:
            raise NotEnumerableError(
                f"universe of {self.universe_size} has too many permutations to enumerate"
            )
        return [MinHashMember(p) for p in itertools.permutations(range(self.universe_size))]


@dataclass(frozen=True)
class SimHashMember(LshMember):
    normal: tuple[float, ...]

    def apply(self, point: Point) -> int:
        vector = point.fairness_vector
        if len(vector) != len(self.normal):
            raise InvalidParameterError("dimension mismatch in hyperplane hash")
        dot = sum(a * b for a, b in zip(self.normal, vector))
        return 1 if dot >= 0.0 else 0


class SimHashFamily(LshFamily):
    """Random-hyperplane sign hashing; paired with angular distance.
    The family is continuous, so enumeration is unsupported."""

    def __init__(self, dim: int):
        if dim < 1:
            raise InvalidParameterError("dimension must be positive")
        self.dim = dim
        self.bucket_values = (0, 1)

    def sample(self, rng: CountingRng) -> SimHashMember:
        return SimHashMember(rng.unit_vector(self.dim))

    def enumerate(self) -> list[LshMember]:
        raise NotEnumerableError("hyperplane families are continuous")


def exact_collision_probability(family: LshFamily, x: Point, y: Point) -> Fraction:
    """Collision probability of a uniform member, by full enumeration.

    Exact-rational oracle; raises NotEnumerableError for families without
    finite enumeration.
    """
    members = family.enumerate()
    hits = sum(m.apply(x) == m.apply(y) for m in members)
    return Fraction(hits, len(members))
