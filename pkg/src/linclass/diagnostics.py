"""Assumption statistics and bound quantities for fitted linear classifiers.

Everything here is computed from fitted model parameters and datasets:
the variance/probability floor rho0, the per-feature KL-separation beta,
the per-feature log-likelihood-ratio variance alpha, the near-boundary
mass curve g_tilde, the logistic surrogate transform and its precondition
threshold, and the closed-form logistic generalization bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .logistic import mean_log_loss, zero_one_error
from .naive_bayes import (
    DiscreteNBModel,
    GaussianNBModel,
    LinearHypothesis,
    activations,
)

RHO0_CAP = 0.1


@dataclass(frozen=True)
class AssumptionReport:
    rho0: float
    beta: float        # min over ordered pairs and classes of |beta_{k1,k2,k}|
    zeta: float        # equals beta under class balance
    alpha_stat: float  # max over triples of alpha_{k1,k2,k}
    beta_table: dict   # (k1, k2, k) -> |beta|
    alpha_table: dict  # (k1, k2, k) -> alpha
    prior_gap: float   # max prior - min prior, balance check for zeta = beta


@dataclass(frozen=True)
class HConsistencyResult:
    lhs: float
    rhs: float
    precondition_ok: bool
    r_log: float
    r_01: float
    threshold: float


def _kl_matrix(model) -> np.ndarray:
    """kl[a, b] = sum_i KL(p(x_i | y=a+1) || p(x_i | y=b+1)), closed form."""
    k = model.k
    kl = np.zeros((k, k))
    if isinstance(model, GaussianNBModel):
        for a in range(k):
            for b in range(k):
                kl[a, b] = np.sum((model.mu[a] - model.mu[b]) ** 2 / (2.0 * model.sigma2))
        return kl
    if isinstance(model, DiscreteNBModel):
        p = model.cond_prob
        for a in range(k):
            for b in range(k):
                kl[a, b] = np.sum(p[a] * np.log(p[a] / p[b])
                                  + (1 - p[a]) * np.log((1 - p[a]) / (1 - p[b])))
        return kl
    raise TypeError(f"not a naive Bayes model: {type(model).__name__}")


def _log_ratio(model, x: np.ndarray, k1: int, k2: int) -> np.ndarray:
    """sum_i log(p(x_i|y=k1) / p(x_i|y=k2)) per sample, from fitted parameters."""
    if isinstance(model, GaussianNBModel):
        w = (model.mu[k1 - 1] - model.mu[k2 - 1]) / model.sigma2
        c = np.sum((model.mu[k2 - 1] ** 2 - model.mu[k1 - 1] ** 2) / (2.0 * model.sigma2))
        return x @ w + c
    if isinstance(model, DiscreteNBModel):
        p1, p2 = model.cond_prob[k1 - 1], model.cond_prob[k2 - 1]
        return x @ np.log(p1 / p2) + (1 - x) @ np.log((1 - p1) / (1 - p2))
    raise TypeError(f"not a naive Bayes model: {type(model).__name__}")


def assumption_stats(model, d: Dataset) -> AssumptionReport:
    """Estimate the assumption constants from a fitted model and its data.

    beta_{k1,k2,k} is the per-feature-normalized absolute difference of
    summed KL divergences; alpha_{k1,k2,k} is the per-feature-normalized
    variance of the class-k log-likelihood ratio between k1 and k2. rho0 is
    the variance (Gaussian) or probability (Bernoulli) floor clamped at 1/10.
    """
    if model.k < 2:
        raise ValueError("need K >= 2")
    counts = np.bincount(d.labels - 1, minlength=d.k)
    if counts.min() < 2:
        small = int(np.argmin(counts)) + 1
        raise ValueError(f"class {small} has fewer than 2 samples; variance undefined")

    if isinstance(model, GaussianNBModel):
        rho0 = min(float(model.sigma2.min()), RHO0_CAP)
    else:
        p = model.cond_prob
        rho0 = min(float(np.minimum(p, 1 - p).min()), RHO0_CAP)

    kl = _kl_matrix(model)
    n = model.n
    beta_table, alpha_table = {}, {}
    ratios = {}
    for k in range(1, model.k + 1):
        rows = d.features[d.labels == k]
        for k1 in range(1, model.k + 1):
            for k2 in range(1, model.k + 1):
                if k1 == k2:
                    continue
                beta_table[(k1, k2, k)] = abs(kl[k - 1, k1 - 1] - kl[k - 1, k2 - 1]) / n
                key = (k, k1, k2)
                if key not in ratios:
                    ratios[key] = _log_ratio(model, rows, k1, k2)
                alpha_table[(k1, k2, k)] = float(np.var(ratios[key])) / n

    beta = min(beta_table.values())
    alpha_stat = max(alpha_table.values())
    prior_gap = float(model.prior.max() - model.prior.min())
    return AssumptionReport(rho0, beta, beta, alpha_stat, beta_table, alpha_table, prior_gap)


def g_tilde(model, d: Dataset, tau: float) -> float:
    """Worst-pair fraction of samples within margin tau*n of the pair boundary."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if isinstance(model, LinearHypothesis):
        a = model.scores(d.features)
    else:
        a = activations(model, d.features)
    worst = 0.0
    for k1 in range(model.k):
        for k2 in range(model.k):
            if k1 == k2:
                continue
            frac = float(np.mean(np.abs(a[:, k1] - a[:, k2]) <= tau * model.n))
            worst = max(worst, frac)
    return worst


def j_transform_log(t):
    """Surrogate-regret transform of the logistic loss at zero-one regret t.

    Equals (1+t)/2 log(1+t) + (1-t)/2 log(1-t); continuous limit log 2 at
    t = 1. Accepts scalars or arrays on [0, 1].
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0) or np.any(t > 1):
        raise ValueError("t must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        upper = np.where(t < 1, (1 - t) * np.log1p(-t), 0.0)
    val = 0.5 * ((1 + t) * np.log1p(t) + upper)
    return float(val) if val.ndim == 0 else val


def logistic_precondition_threshold(b: float, k: int) -> float:
    """Surrogate-gap threshold 0.5 * ((e^{2B}-1) / (e^{2B}+K-1))^2."""
    if b < 0 or k < 2:
        raise ValueError("need b >= 0 and k >= 2")
    e2b = math.exp(2.0 * b)
    return 0.5 * ((e2b - 1.0) / (e2b + k - 1.0)) ** 2


def hconsistency_check(h: LinearHypothesis, reference_star_log: float,
                       reference_star_01: float, d: Dataset) -> HConsistencyResult:
    """Evaluate the zero-one vs. logistic excess-risk inequality empirically.

    Reference minimal risks come from an external long-budget optimization;
    the unestimable class-approximation constants are taken as zero under
    the small-approximation-error assumption.
    """
    if reference_star_log < 0 or reference_star_01 < 0:
        raise ValueError("reference risks must be >= 0")
    r_log = mean_log_loss(h, d)
    r_01 = zero_one_error(h, d)
    gap_log = r_log - reference_star_log
    lhs = r_01 - reference_star_01
    rhs = math.sqrt(2.0) * math.sqrt(max(0.0, gap_log))
    thr = logistic_precondition_threshold(h.bias_bound, h.k)
    return HConsistencyResult(lhs, rhs, gap_log <= thr, r_log, r_01, thr)


def lr_generalization_bound(w: float, b: float, k: int, n: int, m: int,
                            delta: float) -> float:
    """Closed-form logistic generalization bound.

    2W(sqrt(2K^3 n/m) + sqrt(K^2 n/m))
      + 2 log(1 + (K-1) exp(2(W sqrt(n) + B))) sqrt(log(4/delta) / (2m)).
    """
    if w <= 0 or b < 0 or k < 2 or n < 1 or m < 1:
        raise ValueError("arguments out of domain")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    first = 2.0 * w * (math.sqrt(2.0 * k ** 3 * n / m) + math.sqrt(k ** 2 * n / m))
    z = 2.0 * (w * math.sqrt(n) + b)
    if z > 700.0:  # exp would overflow; log1p((K-1)e^z) ~ z + log(K-1)
        log_term = z + math.log(k - 1)
    else:
        log_term = math.log1p((k - 1) * math.exp(z))
    return first + 2.0 * log_term * math.sqrt(math.log(4.0 / delta) / (2.0 * m))
