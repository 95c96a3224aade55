"""Monte Carlo estimates of the No. 6 crossing bound for random tanglegram layouts."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .rng import GENERATOR_ID, make_rng
from .tanglegram import (
    AUTOMORPHISM_LIMIT,
    no6_lower_bound,
    random_tanglegram_layout,
    tanglegram_automorphism_order,
)

DEFAULT_THETA = Fraction(2, 441)
CSV_COLUMNS = ["n", "trials", "seed", "mean_bound", "var_bound", "q10", "q50", "q90", "frac_ge_theta", "theta"]


@dataclass
class ExperimentResult:
    n: int
    trials: int
    seed: int
    theta: float
    mean_bound: float
    var_estimate: float
    quantiles: dict[float, float]
    fraction_above_threshold: float
    weighting: str = "layout"
    generator: str = GENERATOR_ID
    values: np.ndarray = field(default=None, repr=False)

    def row(self) -> dict:
        g = lambda x: format(float(x), ".12g")  # noqa: E731
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "mean_bound": g(self.mean_bound),
            "var_bound": g(self.var_estimate),
            "q10": g(self.quantiles[0.1]),
            "q50": g(self.quantiles[0.5]),
            "q90": g(self.quantiles[0.9]),
            "frac_ge_theta": g(self.fraction_above_threshold),
            "theta": g(self.theta),
        }


def results_to_csv(results: list[ExperimentResult]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow(r.row())
    return buf.getvalue()


def run_trial(n: int, seed: int, index: int, weighting: str = "layout") -> tuple[float, int]:
    """Bound value and weight for one sampled layout."""
    t = random_tanglegram_layout(n, make_rng(seed, index))
    weight = tanglegram_automorphism_order(t) if weighting == "automorphism" else 1
    return float(no6_lower_bound(t)), weight


def _run_chunk(args) -> list[tuple[float, int]]:
    n, seed, indices, weighting = args
    return [run_trial(n, seed, i, weighting) for i in indices]


def weighted_quantile(values: np.ndarray, weights: np.ndarray, q: float) -> float:
    order = np.argsort(values, kind="stable")
    v, w = values[order], weights[order]
    cum = np.cumsum(w)
    return float(v[np.searchsorted(cum, q * cum[-1], side="left")])


def expectation_experiment(
    n: int,
    trials: int,
    seed: int,
    theta: float | Fraction = DEFAULT_THETA,
    jobs: int = 1,
    weighting: str = "layout",
) -> ExperimentResult:
    """Sample layouts uniformly and summarise the No. 6 bound ``X``.

    ``weighting="automorphism"`` reweights each layout by the order of its
    automorphism group, which turns layout-uniform samples into
    tanglegram-uniform estimates (``n <= 12`` only).
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    if trials < 1:
        raise ValueError("trials must be positive")
    if weighting not in ("layout", "automorphism"):
        raise ValueError(f"unknown weighting {weighting!r}")
    if weighting == "automorphism" and n > AUTOMORPHISM_LIMIT:
        raise ValueError(f"automorphism weighting needs n <= {AUTOMORPHISM_LIMIT}")
    if jobs > 1:
        chunks = [(n, seed, list(range(i, trials, jobs)), weighting) for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, chunks))
        # reassemble in trial order regardless of scheduling
        out = [None] * trials
        for j, part in enumerate(parts):
            for i, r in zip(range(j, trials, jobs), part):
                out[i] = r
    else:
        out = [run_trial(n, seed, i, weighting) for i in range(trials)]
    values = np.array([x for x, _ in out], dtype=float)
    weights = np.array([w for _, w in out], dtype=float)
    theta = float(theta)
    mean = float(np.average(values, weights=weights))
    if weighting == "layout":
        var = float(np.var(values, ddof=1)) if trials > 1 else 0.0
        quantiles = {q: float(np.quantile(values, q)) for q in (0.1, 0.5, 0.9)}
    else:
        var = float(np.average((values - mean) ** 2, weights=weights))
        quantiles = {q: weighted_quantile(values, weights, q) for q in (0.1, 0.5, 0.9)}
    frac = float(np.average(values >= theta * n * n, weights=weights))
    return ExperimentResult(n, trials, seed, theta, mean, var, quantiles, frac, weighting, GENERATOR_ID, values)
