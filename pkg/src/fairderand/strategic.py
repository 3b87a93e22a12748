"""Strategic-agent analysis: utility of feature manipulation, best
responses over a finite candidate set, and the manipulation-incentive
budget implied by metric fairness.

An agent at x who presents x' instead receives utility
score(x') - cost(x, x').  When the classifier is (alpha, beta)-fair under
the cost metric, no move can gain more than (alpha - 1)*cost + beta; for
a classifier family the same holds for the family-mean prediction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .core import Dataset, Point, StochasticScorer
from .derandomize import Derandomizer
from .errors import InvalidParameterError
from .measure import EstimatorConfig, family_mean_prediction, manipulation_gain_bound
from .metrics import Metric

Number = Union[Fraction, float, int]

EXACT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class UtilityReport:
    """Best response of one origin: the chosen candidate, the utility
    gained over staying put, and the fairness-implied gain budget."""

    origin_id: str
    response_id: str
    utility_gain: Number
    bound: Number
    within_bound: bool

    def as_dict(self) -> dict:
        return {
            "origin": self.origin_id,
            "response": self.response_id,
            "gain": float(self.utility_gain),
            "bound": float(self.bound),
            "ok": self.within_bound,
        }


def _mean_prediction(source, point: Point, cfg: EstimatorConfig) -> Number:
    if isinstance(source, StochasticScorer):
        return source.score(point)
    if isinstance(source, Derandomizer):
        return family_mean_prediction(source, point, cfg).value
    raise InvalidParameterError(f"cannot score with {type(source).__name__}")


def utility(source, x: Point, target: Point, cost: Metric, cfg: EstimatorConfig | None = None) -> Number:
    """score(target) - cost(x, target); family sources use the family mean."""
    cfg = cfg or EstimatorConfig()
    return _mean_prediction(source, target, cfg) - cost.distance(x, target)


def best_response(
    source,
    origin: Point,
    candidates: Dataset,
    cost: Metric,
    alpha: Number,
    beta: Number,
    cfg: EstimatorConfig | None = None,
) -> UtilityReport:
    """Utility-maximizing move over the candidate set (ties broken by
    lowest id), with the gain checked against (alpha - 1)*cost + beta."""
    cfg = cfg or EstimatorConfig()
    predictions = {p.id: _mean_prediction(source, p, cfg) for p in candidates}

    best = None
    best_utility = None
    for p in sorted(candidates, key=lambda q: q.id):
        value = predictions[p.id] - cost.distance(origin, p)
        if best_utility is None or value > best_utility:
            best, best_utility = p, value

    stay = _mean_prediction(source, origin, cfg)  # zero cost to stay put
    gain = best_utility - stay
    move_cost = cost.distance(origin, best)
    bound = manipulation_gain_bound(alpha, beta, move_cost)
    return UtilityReport(
        origin_id=origin.id,
        response_id=best.id,
        utility_gain=gain,
        bound=bound,
        within_bound=gain <= bound + EXACT_TOLERANCE,
    )


def best_responses(
    source,
    candidates: Dataset,
    cost: Metric,
    alpha: Number,
    beta: Number,
    cfg: EstimatorConfig | None = None,
) -> list[UtilityReport]:
    """Best response of every candidate treated as an origin."""
    return [
        best_response(source, origin, candidates, cost, alpha, beta, cfg)
        for origin in candidates
    ]
