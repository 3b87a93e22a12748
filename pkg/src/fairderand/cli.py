"""Batch experiment driver.

Subcommands: derandomize | audit | adversarial | strategic | bounds.
Configuration is a single JSON file; --seed/--out/--mode/--trials/
--pairs-cap flags override the file.  Every command is a pure function of
(config, dataset, seed): re-running writes identical files.

Exit codes: 0 success, 2 config error, 3 data error, 4 exact mode on a
non-enumerable family.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .adversarial import (
    SphereConstruction,
    finite_family_violation_search,
    sphere_counterexample,
    verify_sphere_counterexample,
)
from .core import AffineScorer, ConstantScorer, Dataset, Point
from .dataio import load_dataset, save_dataset
from .derandomize import (
    GridBucketer,
    IdentityBucketer,
    LsClassifier,
    LsDerandomizer,
    PiClassifier,
    PiDerandomizer,
    RtClassifier,
    RtDerandomizer,
)
from .errors import (
    DataFormatError,
    FairderandError,
    FamilyTooLargeError,
    InvalidParameterError,
    NotEnumerableError,
    UnknownPointError,
)
from .hashing import BitSamplingFamily, MinHashFamily, SimHashFamily
from .measure import (
    EstimatorConfig,
    aggregate_bias,
    aggregate_fairness_tail_check,
    aggregate_variance,
    bias_bound,
    compute_bound,
    empirical_fairness_curve,
    metric_fairness_check,
    rt_variance_bound,
    select_pairs,
    worst_case_aggregate_bound,
)
from .metrics import Angular, JaccardDistance, NormalizedHamming, ScaledEuclidean
from .rng import CountingRng
from .strategic import best_responses

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NOT_ENUMERABLE = 4


class ConfigError(FairderandError):
    pass


def _load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc


def _resolve(config: dict, args) -> dict:
    merged = dict(config)
    for key in ("seed", "out", "mode", "trials"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "pairs_cap", None) is not None:
        merged["pairs_cap"] = args.pairs_cap
    merged.setdefault("seed", 0)
    merged.setdefault("out", "reports")
    merged.setdefault("mode", "exact")
    merged.setdefault("trials", 100_000)
    merged.setdefault("pairs_cap", 200_000)
    return merged


def _estimator(config: dict) -> EstimatorConfig:
    return EstimatorConfig(
        mode=config["mode"],
        trials=int(config["trials"]),
        seed=int(config["seed"]),
        pair_threshold=float(config.get("tau", 1.0)),
        confidence=float(config.get("delta", 0.25)),
        pairs_cap=int(config["pairs_cap"]),
    )


def _build_metric(config: dict, dataset: Dataset):
    spec = config.get("metric", {"kind": "hamming"})
    kind = spec.get("kind", "hamming")
    dim = len(dataset[0].fairness_vector)
    if kind == "hamming":
        return NormalizedHamming(spec.get("n", dim))
    if kind == "angular":
        return Angular()
    if kind == "jaccard":
        return JaccardDistance()
    if kind == "scaled_euclidean":
        return ScaledEuclidean(spec.get("scale", 1.0))
    raise ConfigError(f"unknown metric kind {kind!r}")


def _build_scorer(config: dict, scorer_from_csv):
    spec = config.get("scorer")
    if spec is not None:
        kind = spec.get("kind")
        if kind == "affine":
            return AffineScorer(spec["weights"], spec.get("bias", 0.0))
        if kind == "constant":
            return ConstantScorer(str(spec["value"]))
        raise ConfigError(f"unknown scorer kind {kind!r}")
    if scorer_from_csv is None:
        raise DataFormatError(
            "dataset has no 'score' column and the config defines no scorer"
        )
    return scorer_from_csv


def _build_derandomizer(config: dict, dataset: Dataset, scorer):
    scheme = config.get("scheme")
    k = int(config.get("k", 0))
    if scheme == "rt":
        return RtDerandomizer(scorer, k)
    if scheme == "pi":
        spec = config.get("bucketer", {"kind": "grid", "resolution": 1.0})
        if spec.get("kind", "grid") == "grid":
            bucketer = GridBucketer(float(spec.get("resolution", 1.0)))
        elif spec["kind"] == "identity":
            bucketer = IdentityBucketer()
        else:
            raise ConfigError(f"unknown bucketer kind {spec['kind']!r}")
        return PiDerandomizer.build(scorer, dataset, bucketer, k)
    if scheme == "ls":
        spec = config.get("lsh", {"kind": "bit_sampling"})
        kind = spec.get("kind", "bit_sampling")
        dim = len(dataset[0].fairness_vector)
        if kind == "bit_sampling":
            family = BitSamplingFamily(spec.get("n", dim))
        elif kind == "minhash":
            family = MinHashFamily(spec.get("universe_size", dim))
        elif kind == "simhash":
            family = SimHashFamily(spec.get("dim", dim))
        else:
            raise ConfigError(f"unknown lsh kind {kind!r}")
        return LsDerandomizer(scorer, family, k)
    raise ConfigError(f"scheme must be one of pi|rt|ls, got {scheme!r}")


def _classifier_params(clf) -> dict:
    if isinstance(clf, RtClassifier):
        return {"u": clf.u, "k": clf.k}
    if isinstance(clf, PiClassifier):
        return {"a": clf.h.a, "c": clf.h.c, "k": clf.family.k}
    if isinstance(clf, LsClassifier):
        params = {"a": clf.h.a, "c": clf.h.c, "k": clf.family.k}
        member = clf.member
        if hasattr(member, "index"):
            params["lsh_member"] = {"kind": "coordinate", "index": member.index}
        elif hasattr(member, "ranks"):
            params["lsh_member"] = {"kind": "permutation", "ranks": list(member.ranks)}
        else:
            params["lsh_member"] = {"kind": "hyperplane", "normal": list(member.normal)}
        return params
    return {}


def _jsonable(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_report(out_dir: Path, name: str, payload: dict) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _report_skeleton(config: dict) -> dict:
    return {"version": __version__, "config": config}


def cmd_derandomize(config: dict) -> Path:
    dataset, csv_scorer = load_dataset(config["input"])
    scorer = _build_scorer(config, csv_scorer)
    derand = _build_derandomizer(config, dataset, scorer)
    rng = CountingRng(int(config["seed"]))
    clf = derand.sample(rng)
    payload = _report_skeleton(config)
    payload.update(
        {
            "scheme": config["scheme"],
            "seed": int(config["seed"]),
            "classifier": _classifier_params(clf),
            "bit_budget": clf.budget.as_dict(),
            "predictions": {p.id: clf.predict(p) for p in dataset},
        }
    )
    return _write_report(Path(config["out"]), "derandomize.json", payload)


def cmd_audit(config: dict) -> Path:
    dataset, csv_scorer = load_dataset(config["input"])
    scorer = _build_scorer(config, csv_scorer)
    derand = _build_derandomizer(config, dataset, scorer)
    metric = _build_metric(config, dataset)
    cfg = _estimator(config)
    alpha = config.get("alpha", 1.0)
    beta = config.get("beta", 0.0)

    payload = _report_skeleton(config)
    quantities: dict = {}

    bias = aggregate_bias(derand, dataset, cfg)
    entry = {"value": float(bias.value), "bound": float(bias_bound(derand.k)),
             "bound_source": "family bias budget 1/k",
             "satisfied": abs(bias.value) <= bias_bound(derand.k)
             or (bias.stderr is not None and abs(bias.value) <= float(bias_bound(derand.k)) + 4 * bias.stderr)}
    if bias.stderr is not None:
        entry["stderr"] = bias.stderr
    quantities["aggregate_bias"] = entry

    variance = aggregate_variance(derand, dataset, cfg)
    entry = {"value": float(variance.value)}
    if variance.stderr is not None:
        entry["stderr"] = variance.stderr
    if isinstance(derand, RtDerandomizer):
        mean_fvar = sum(
            (s := scorer.score(p)) * (1 - s) for p in dataset
        ) / len(dataset)
        entry["bound"] = float(rt_variance_bound(mean_fvar)) + float(bias_bound(derand.k))
        entry["bound_source"] = "mean score variance budget (grid slack 1/k)"
        entry["satisfied"] = entry["value"] <= entry["bound"] + 4 * (variance.stderr or 0.0)
    quantities["aggregate_variance"] = entry

    fairness = metric_fairness_check(derand, dataset, metric, alpha, beta, cfg)
    quantities["metric_fairness"] = fairness.to_json_dict()

    if isinstance(derand, LsDerandomizer):
        tau = float(config.get("tau", 0.05))
        delta = float(config.get("delta", 0.25))
        quantities["worst_case_aggregate_bound"] = {
            "value": worst_case_aggregate_bound(
                alpha, beta, tau, delta, Fraction(2, derand.k)
            ),
            "bound_source": "worst-case aggregate fairness budget",
        }
        n_classifiers = int(config.get("n_classifiers", 0))
        if n_classifiers:
            tail = aggregate_fairness_tail_check(
                derand, dataset, metric, alpha, tau, delta, n_classifiers,
                CountingRng(int(config["seed"])), cfg,
            )
            quantities["aggregate_fairness_tail"] = tail.to_json_dict()

    payload["quantities"] = quantities

    alphas = config.get("curve_alphas")
    out_dir = Path(config["out"])
    if alphas:
        curve = empirical_fairness_curve(derand, dataset, metric, alphas, cfg)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "fairness_curve.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha_hat", "beta_hat"])
            writer.writerows(curve)
        payload["fairness_curve"] = "fairness_curve.csv"

    n_pairs = len(dataset) * (len(dataset) - 1) // 2
    if n_pairs > cfg.pairs_cap:
        payload["pair_sample_seed"] = select_pairs(len(dataset), cfg.pairs_cap, cfg.seed)[1]

    return _write_report(out_dir, "audit.json", payload)


def cmd_adversarial(config: dict) -> Path:
    spec = config.get("adversarial", {})
    construction = spec.get("construction", "sphere")
    out_dir = Path(config["out"])
    payload = _report_skeleton(config)

    if construction == "sphere":
        cons = SphereConstruction(
            n_points=int(spec.get("n_points", 10)),
            dimension=int(spec.get("dimension", 2)),
            delta_sphere=float(spec.get("delta_sphere", 0.15)),
            eps_gap=float(spec.get("eps_gap", 0.05)),
            k=int(config.get("k", 101)),
            alpha=float(config.get("alpha", 1.0)),
            beta=float(config.get("beta", 0.0)),
        )
        dataset, scorer, metric = sphere_counterexample(cons)
        out_dir.mkdir(parents=True, exist_ok=True)
        save_dataset(out_dir / "sphere.csv", dataset, scorer)
        report = verify_sphere_counterexample(cons, dataset, scorer, metric)
        payload["dataset"] = "sphere.csv"
        payload["quantities"] = report.to_json_dict()
        return _write_report(out_dir, "adversarial.json", payload)

    if construction == "violation_search":
        dataset, csv_scorer = load_dataset(config["input"])
        scorer = _build_scorer(config, csv_scorer)
        derand = _build_derandomizer(config, dataset, scorer)
        family = derand.enumerate_members()
        metric = _build_metric(config, dataset)
        steps = int(spec.get("grid_steps", 1001))
        start = np.asarray(spec.get("grid_start", [0.0] * dataset.dimension), dtype=float)
        stop = np.asarray(spec.get("grid_stop", [1.0] * dataset.dimension), dtype=float)
        grid = [
            Point(f"g{i:05d}", tuple(start + (stop - start) * (i / (steps - 1))))
            for i in range(steps)
        ]
        found = finite_family_violation_search(
            family, metric, grid,
            float(config.get("alpha", 1.0)), float(config.get("beta", 0.0)),
        )
        payload["violation"] = (
            None
            if found is None
            else {
                "x": {"id": found[0].id, "features": list(found[0].features)},
                "x_star": {"id": found[1].id, "features": list(found[1].features)},
            }
        )
        return _write_report(out_dir, "adversarial.json", payload)

    raise ConfigError(f"unknown construction {construction!r}")


def cmd_strategic(config: dict) -> Path:
    dataset, csv_scorer = load_dataset(config["input"])
    scorer = _build_scorer(config, csv_scorer)
    cost = _build_metric(config, dataset)
    reports = best_responses(
        scorer, dataset, cost,
        config.get("alpha", 1.0), config.get("beta", 0.0),
        _estimator(config),
    )
    payload = _report_skeleton(config)
    payload["responses"] = [r.as_dict() for r in reports]
    payload["all_within_bound"] = all(r.within_bound for r in reports)
    return _write_report(Path(config["out"]), "strategic.json", payload)


def cmd_bounds(config: dict) -> Path:
    specs = config.get("bounds", [])
    if not isinstance(specs, list) or not specs:
        raise ConfigError("config must provide a non-empty 'bounds' list")
    results = []
    for spec in specs:
        spec = dict(spec)
        name = spec.pop("name", None)
        if name is None:
            raise ConfigError("each bounds entry needs a 'name'")
        results.append({"name": name, "inputs": spec, "value": float(compute_bound(name, **spec))})
    payload = _report_skeleton(config)
    payload["bounds"] = results
    return _write_report(Path(config["out"]), "bounds.json", payload)


COMMANDS = {
    "derandomize": cmd_derandomize,
    "audit": cmd_audit,
    "adversarial": cmd_adversarial,
    "strategic": cmd_strategic,
    "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairderand",
        description="Derandomize stochastic classifiers and audit the guarantees.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON experiment config")
        cmd.add_argument("--seed", type=int, default=None, help="override config seed")
        cmd.add_argument("--out", default=None, help="override output directory")
        cmd.add_argument("--mode", choices=("exact", "mc"), default=None)
        cmd.add_argument("--trials", type=int, default=None)
        cmd.add_argument("--pairs-cap", type=int, default=None, dest="pairs_cap")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve(_load_config(args.config), args)
        path = COMMANDS[args.command](config)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataFormatError, UnknownPointError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NotEnumerableError, FamilyTooLargeError) as exc:
        print(f"not enumerable in exact mode: {exc}", file=sys.stderr)
        return EXIT_NOT_ENUMERABLE
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
