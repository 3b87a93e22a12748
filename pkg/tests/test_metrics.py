import math
import random
from fractions import Fraction

import pytest

from fairderand import Angular, JaccardDistance, NormalizedHamming, Point, ScaledEuclidean
from fairderand.errors import DimensionMismatchError, ZeroVectorError


def pt(*coords, z=None):
    return Point("x" + str(hash(coords) % 10**6), tuple(coords), fairness_features=z)


class TestValues:
    def test_hamming(self):
        d = NormalizedHamming(4)
        assert d.distance(pt(0, 0, 1, 1), pt(0, 1, 1, 0)) == Fraction(1, 2)

    def test_angular_right_angle(self):
        assert Angular().distance(pt(1, 0), pt(0, 1)) == pytest.approx(0.5)

    def test_jaccard(self):
        # indicator vectors of {1,2,3} and {2,3,4} over a 5-element universe
        a = pt(0, 1, 1, 1, 0)
        b = pt(0, 0, 1, 1, 1)
        assert JaccardDistance().distance(a, b) == Fraction(1, 2)

    def test_jaccard_empty_union_is_zero(self):
        assert JaccardDistance().distance(pt(0, 0), pt(0, 0)) == 0

    def test_scaled_euclidean_clamps(self):
        d = ScaledEuclidean(2.0)
        assert d.distance(pt(0, 0), pt(0, 1)) == pytest.approx(0.5)
        assert d.distance(pt(0, 0), pt(0, 100)) == 1.0


class TestErrors:
    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            NormalizedHamming(2).distance(pt(0, 1), pt(0, 1, 1))

    def test_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            Angular().distance(pt(0, 0), pt(1, 0))

    def test_hamming_wrong_width(self):
        with pytest.raises(DimensionMismatchError):
            NormalizedHamming(3).distance(pt(0, 1), pt(0, 1))


def test_metric_reads_fairness_features_when_present():
    d = NormalizedHamming(2)
    a = Point("a", (9.0, 9.0, 9.0), fairness_features=(0.0, 1.0))
    b = Point("b", (9.0, 9.0, 9.0), fairness_features=(1.0, 1.0))
    assert d.distance(a, b) == Fraction(1, 2)


class TestAxioms:
    """Symmetry, identity, range, and triangle inequality on random triples."""

    N_TRIPLES = 10_000
    FLOAT_SLACK = 1e-9

    def _check(self, metric, make_point):
        rng = random.Random(1729)
        for _ in range(self.N_TRIPLES):
            x, y, z = make_point(rng), make_point(rng), make_point(rng)
            dxy = metric.distance(x, y)
            assert metric.distance(x, x) == 0
            assert dxy == metric.distance(y, x)
            assert 0 <= dxy <= 1
            assert dxy <= metric.distance(x, z) + metric.distance(z, y) + self.FLOAT_SLACK

    def test_hamming_axioms(self):
        self._check(
            NormalizedHamming(6),
            lambda rng: pt(*[rng.randint(0, 1) for _ in range(6)]),
        )

    def test_jaccard_axioms(self):
        self._check(
            JaccardDistance(),
            lambda rng: pt(*[rng.randint(0, 1) for _ in range(6)]),
        )

    def test_angular_axioms(self):
        def nonzero(rng):
            while True:
                v = [rng.uniform(-1, 1) for _ in range(3)]
                if math.sqrt(sum(c * c for c in v)) > 1e-6:
                    return pt(*v)

        self._check(Angular(), nonzero)

    def test_scaled_euclidean_axioms(self):
        self._check(
            ScaledEuclidean(4.0),
            lambda rng: pt(*[rng.uniform(-1, 1) for _ in range(3)]),
        )
