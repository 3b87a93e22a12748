"""Derandomization of stochastic binary classifiers, with audits of the
output-approximation and metric-fairness guarantees of each scheme."""

__version__ = "0.1.0"

from .core import (
    AffineScorer,
    ConstantScorer,
    Dataset,
    DeterministicClassifier,
    FairnessParams,
    Point,
    StochasticScorer,
    TableClassifier,
    TabularScorer,
    as_score,
    threshold_count,
)
from .derandomize import (
    GridBucketer,
    IdentityBucketer,
    LsClassifier,
    LsDerandomizer,
    PiClassifier,
    PiDerandomizer,
    RtClassifier,
    RtDerandomizer,
    default_bucketer,
    enumerate_family,
)
from .hashing import (
    BitBudget,
    BitSamplingFamily,
    MinHashFamily,
    PiFamily,
    PiHash,
    SimHashFamily,
)
from .measure import Estimate, EstimatorConfig, FairnessReport
from .metrics import Angular, JaccardDistance, Metric, NormalizedHamming, ScaledEuclidean
from .rng import CountingRng
