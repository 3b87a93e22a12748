"""Distance metrics on point pairs, each mapping into [0, 1].

The combinatorial metrics (normalized Hamming, Jaccard distance) return
exact rationals so downstream fairness-band comparisons stay free of
float noise; angular and scaled Euclidean distances return floats.

Metrics read each point's fairness vector (dedicated fairness features
when present, inference features otherwise), matching what the
locality-sensitive hashes see.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .core import Point
from .errors import DimensionMismatchError, InvalidParameterError, ZeroVectorError

Distance = Union[Fraction, float]


def _vectors(x: Point, y: Point) -> tuple[tuple[float, ...], tuple[float, ...]]:
    u, v = x.fairness_vector, y.fairness_vector
    if len(u) != len(v):
        raise DimensionMismatchError(
            f"points {x.id!r} and {y.id!r} have dimensions {len(u)} and {len(v)}"
        )
    return u, v


def binary_support(vector: tuple[float, ...]) -> frozenset[int]:
    """Indices of the 1-entries of a {0,1}-valued vector."""
    support = set()
    for i, value in enumerate(vector):
        if value == 1.0:
            support.add(i)
        elif value != 0.0:
            raise InvalidParameterError("set-valued features must be 0/1")
    return frozenset(support)


class Metric:
    def distance(self, x: Point, y: Point) -> Distance:
        raise NotImplementedError


class NormalizedHamming(Metric):
    """(# differing coordinates) / n, exact."""

    def __init__(self, n: int):
        if n < 1:
            raise InvalidParameterError("dimension must be positive")
        self.n = n

    def distance(self, x: Point, y: Point) -> Fraction:
        u, v = _vectors(x, y)
        if len(u) != self.n:
            raise DimensionMismatchError(f"expected dimension {self.n}, got {len(u)}")
        return Fraction(sum(a != b for a, b in zip(u, v)), self.n)


class Angular(Metric):
    """Angle between vectors divided by pi; the metric whose hyperplane-hash
    collision probability is exactly 1 - distance."""

    def distance(self, x: Point, y: Point) -> float:
        u, v = _vectors(x, y)
        nu = math.sqrt(sum(a * a for a in u))
        nv = math.sqrt(sum(b * b for b in v))
        if nu == 0.0 or nv == 0.0:
            raise ZeroVectorError("angular distance undefined on the zero vector")
        if u == v:
            return 0.0  # keep the identity axiom exact despite acos noise
        cos = sum(a * b for a, b in zip(u, v)) / (nu * nv)
        return math.acos(min(1.0, max(-1.0, cos))) / math.pi


class JaccardDistance(Metric):
    """1 - |A n B| / |A u B| on set-valued ({0,1}) features, exact.

    Two empty sets are at distance 0.
    """

    def distance(self, x: Point, y: Point) -> Fraction:
        u, v = _vectors(x, y)
        a, b = binary_support(u), binary_support(v)
        union = a | b
        if not union:
            return Fraction(0)
        return Fraction(1) - Fraction(len(a & b), len(union))


class ScaledEuclidean(Metric):
    """min(||x - y||_2 / scale, 1).  Supports constructions and strategic
    costs on real vectors; it has no locality-sensitive hash family here."""

    def __init__(self, scale: float = 1.0):
        if scale <= 0:
            raise InvalidParameterError("scale must be positive")
        self.scale = float(scale)

    def distance(self, x: Point, y: Point) -> float:
        u, v = _vectors(x, y)
        norm = math.sqrt(sum((a - b) ** 2 for a, b in zip(u, v)))
        return min(norm / self.scale, 1.0)
