"""Closed-form generative linear classifiers.

Discrete Bernoulli naive Bayes with Laplace smoothing and shared-variance
Gaussian naive Bayes, both exportable to an explicit linear hypothesis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import Dataset

VARIANCE_FLOOR = 1e-10


@dataclass(frozen=True)
class LinearHypothesis:
    """Affine scorer: class score is <weights[k], x> + biases[k]."""

    weights: np.ndarray  # (K, n)
    biases: np.ndarray   # (K,)

    @property
    def k(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.weights.shape[1]

    @property
    def weight_norm_bound(self) -> float:
        """Max over classes of the l2 norm of the weight row."""
        return float(np.linalg.norm(self.weights, axis=1).max())

    @property
    def bias_bound(self) -> float:
        """Max over classes of the absolute bias."""
        return float(np.abs(self.biases).max())

    def scores(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} features, got {x.shape[-1]}")
        return x @ self.weights.T + self.biases


@dataclass(frozen=True)
class DiscreteNBModel:
    """Bernoulli naive Bayes parameters: cond_prob[k, i] = p(x_i=1 | y=k+1)."""

    cond_prob: np.ndarray  # (K, n)
    prior: np.ndarray      # (K,)
    alpha: float

    @property
    def k(self) -> int:
        return self.cond_prob.shape[0]

    @property
    def n(self) -> int:
        return self.cond_prob.shape[1]


@dataclass(frozen=True)
class GaussianNBModel:
    """Gaussian naive Bayes with per-feature variance shared across classes."""

    mu: np.ndarray      # (K, n)
    sigma2: np.ndarray  # (n,)
    prior: np.ndarray   # (K,)

    @property
    def k(self) -> int:
        return self.mu.shape[0]

    @property
    def n(self) -> int:
        return self.mu.shape[1]


def class_counts(d: Dataset):
    """Per-class sample counts and per-class-per-feature positive counts."""
    counts = np.bincount(d.labels - 1, minlength=d.k)
    positives = np.zeros((d.k, d.n), dtype=np.int64)
    for k in range(d.k):
        positives[k] = d.features[d.labels == k + 1].sum(axis=0)
    return counts, positives


def fit_discrete(d: Dataset, alpha: float = 1.0) -> DiscreteNBModel:
    """Fit Bernoulli naive Bayes with Laplace smoothing parameter ``alpha``."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    vals = np.unique(d.features)
    if not np.all(np.isin(vals, (0.0, 1.0))):
        raise ValueError("discrete fitting requires feature values in {0, 1}")
    counts, positives = class_counts(d)
    if alpha == 0 and counts.min() == 0:
        raise ValueError("empty class with alpha=0")
    cond = (positives + alpha) / (counts[:, None] + d.k * alpha)
    prior = (counts + alpha) / (d.m + d.k * alpha)
    return DiscreteNBModel(cond, prior, float(alpha))


def fit_gaussian(d: Dataset) -> GaussianNBModel:
    """Fit shared-variance Gaussian naive Bayes.

    Per-class means, pooled MLE within-class variances weighted by the
    empirical class frequencies, and unsmoothed class priors. Variances are
    floored at VARIANCE_FLOOR so constant features stay usable.
    """
    counts = np.bincount(d.labels - 1, minlength=d.k)
    if counts.min() == 0:
        empty = int(np.argmin(counts)) + 1
        raise ValueError(f"empty class {empty}")
    mu = np.empty((d.k, d.n))
    sigma2 = np.zeros(d.n)
    for k in range(d.k):
        rows = d.features[d.labels == k + 1]
        mu[k] = rows.mean(axis=0)
        # MLE within-class variance, weighted by empirical class frequency
        sigma2 += (counts[k] / d.m) * np.mean((rows - mu[k]) ** 2, axis=0)
    sigma2 = np.maximum(sigma2, VARIANCE_FLOOR)
    prior = counts / d.m
    return GaussianNBModel(mu, sigma2, prior)


def activations(model, x: np.ndarray) -> np.ndarray:
    """Per-class log joint scores: sum_i log p(x_i|y=k) + log p(y=k).

    ``x`` may be a single feature vector or an (m, n) batch; returns scores
    with one entry per class on the last axis.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.n:
        raise ValueError(f"expected {model.n} features, got {x.shape[-1]}")
    if isinstance(model, DiscreteNBModel):
        p = model.cond_prob
        logp = np.log(p)
        log1mp = np.log1p(-p)
        return x @ logp.T + (1.0 - x) @ log1mp.T + np.log(model.prior)
    if isinstance(model, GaussianNBModel):
        s2 = model.sigma2
        const = -0.5 * np.sum(np.log(2.0 * np.pi * s2))
        quad = -0.5 * ((x[..., None, :] - model.mu) ** 2 / s2).sum(axis=-1)
        return quad + const + np.log(model.prior)
    raise TypeError(f"not a naive Bayes model: {type(model).__name__}")


def activation(model, x: np.ndarray, k: int) -> float:
    """Log joint score of class ``k`` (1-based) at a single point."""
    if not 1 <= k <= model.k:
        raise ValueError(f"class {k} out of range 1..{model.k}")
    return float(activations(model, x)[..., k - 1])


def pair_activation(model, x: np.ndarray, k1: int, k2: int) -> float:
    """Difference of class log joint scores; positive favors ``k1``."""
    a = activations(model, x)
    for k in (k1, k2):
        if not 1 <= k <= model.k:
            raise ValueError(f"class {k} out of range 1..{model.k}")
    return float(a[..., k1 - 1] - a[..., k2 - 1])


def predict(model, x: np.ndarray) -> np.ndarray:
    """Class maximizing the activation; ties go to the lowest class index."""
    a = activations(model, x)
    return np.argmax(a, axis=-1) + 1


def to_linear(model) -> LinearHypothesis:
    """Export the fitted model as an explicit linear hypothesis.

    Class-independent additive terms of the log density are dropped; the
    argmax is unchanged. The discrete model needs alpha > 0 so the log-odds
    stay finite.
    """
    if isinstance(model, DiscreteNBModel):
        p = model.cond_prob
        if np.any(p <= 0) or np.any(p >= 1):
            raise ValueError("saturated conditional probability; refit with alpha > 0")
        w = np.log(p) - np.log1p(-p)
        b = np.log1p(-p).sum(axis=1) + np.log(model.prior)
        return LinearHypothesis(w, b)
    if isinstance(model, GaussianNBModel):
        w = model.mu / model.sigma2
        b = -0.5 * (model.mu ** 2 / model.sigma2).sum(axis=1) + np.log(model.prior)
        return LinearHypothesis(w, b)
    raise TypeError(f"not a naive Bayes model: {type(model).__name__}")


def model_to_doc(model) -> dict:
    """JSON-compatible document for a fitted model; round-trip is bit-exact."""
    if isinstance(model, DiscreteNBModel):
        params = {"cond_prob": model.cond_prob.tolist(), "prior": model.prior.tolist()}
        return {"kind": "discrete_nb", "K": model.k, "n": model.n,
                "parameters": params, "alpha": model.alpha}
    if isinstance(model, GaussianNBModel):
        params = {"mu": model.mu.tolist(), "sigma2": model.sigma2.tolist(),
                  "prior": model.prior.tolist()}
        return {"kind": "gaussian_nb", "K": model.k, "n": model.n,
                "parameters": params, "alpha": None}
    if isinstance(model, LinearHypothesis):
        params = {"weights": model.weights.tolist(), "biases": model.biases.tolist()}
        return {"kind": "logistic", "K": model.k, "n": model.n,
                "parameters": params, "alpha": None}
    raise TypeError(f"unsupported model: {type(model).__name__}")


def model_from_doc(doc: dict):
    kind = doc["kind"]
    p = doc["parameters"]
    if kind == "discrete_nb":
        return DiscreteNBModel(np.array(p["cond_prob"]), np.array(p["prior"]),
                               float(doc["alpha"]))
    if kind == "gaussian_nb":
        return GaussianNBModel(np.array(p["mu"]), np.array(p["sigma2"]),
                               np.array(p["prior"]))
    if kind == "logistic":
        return LinearHypothesis(np.array(p["weights"]), np.array(p["biases"]))
    raise ValueError(f"unknown model kind: {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_doc(model), fh)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_doc(json.load(fh))
