"""Multiclass softmax logistic regression trained by in-house L-BFGS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lbfgs
from .data import Dataset
from .naive_bayes import LinearHypothesis, activations as nb_activations
from .naive_bayes import DiscreteNBModel, GaussianNBModel


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 1000
    memory: int = 10
    gradient_tolerance: float = 1e-6

    def __post_init__(self):
        if self.max_iterations < 1 or self.memory < 1 or self.gradient_tolerance <= 0:
            raise ValueError("invalid optimizer configuration")


@dataclass(frozen=True)
class LogisticModel:
    hypothesis: LinearHypothesis
    trace: tuple       # objective per accepted iteration
    status: str        # optimizer termination status
    n_iter: int

    @property
    def k(self) -> int:
        return self.hypothesis.k

    @property
    def n(self) -> int:
        return self.hypothesis.n


def _unpack(params: np.ndarray, k: int, n: int):
    w = params[: k * n].reshape(k, n)
    b = params[k * n:]
    return w, b


def loss_and_gradient(params: np.ndarray, d: Dataset, l2_weight: float):
    """Mean softmax cross-entropy plus (l2/2)*||W||^2, with exact gradient.

    Parameter layout: K*n weights then K biases. Biases are not regularized.
    Log-sum-exp is computed stably.
    """
    params = np.asarray(params, dtype=np.float64)
    if not np.all(np.isfinite(params)):
        raise ValueError("non-finite parameters")
    k, n, m = d.k, d.n, d.m
    w, b = _unpack(params, k, n)
    scores = d.features @ w.T + b
    smax = scores.max(axis=1, keepdims=True)
    logz = smax[:, 0] + np.log(np.exp(scores - smax).sum(axis=1))
    y0 = d.labels - 1
    loss = float(np.mean(logz - scores[np.arange(m), y0]))
    loss += 0.5 * l2_weight * float(np.sum(w * w))

    probs = np.exp(scores - logz[:, None])
    probs[np.arange(m), y0] -= 1.0
    gw = probs.T @ d.features / m + l2_weight * w
    gb = probs.mean(axis=0)
    return loss, np.concatenate([gw.ravel(), gb])


def mean_log_loss(h: LinearHypothesis, d: Dataset) -> float:
    """Unregularized mean softmax cross-entropy of a linear hypothesis."""
    scores = h.scores(d.features)
    smax = scores.max(axis=1, keepdims=True)
    logz = smax[:, 0] + np.log(np.exp(scores - smax).sum(axis=1))
    return float(np.mean(logz - scores[np.arange(d.m), d.labels - 1]))


def fit(d: Dataset, l2_weight: float = 1.0,
        config: OptimizerConfig = OptimizerConfig()) -> LogisticModel:
    """Train softmax regression from the all-zero start.

    Deterministic: the optimizer uses no randomness, so two runs on the same
    dataset produce identical parameters.
    """
    if l2_weight < 0:
        raise ValueError("l2_weight must be >= 0")
    x0 = np.zeros(d.k * d.n + d.k)
    res = lbfgs.minimize(lambda p: loss_and_gradient(p, d, l2_weight), x0,
                         max_iter=config.max_iterations, memory=config.memory,
                         gtol=config.gradient_tolerance)
    if res.status == "line_search_failed":
        import warnings
        warnings.warn("line search failed; returning best parameters so far")
    w, b = _unpack(res.x, d.k, d.n)
    return LogisticModel(LinearHypothesis(w, b), tuple(res.trace), res.status, res.n_iter)


def predict(model, x: np.ndarray) -> np.ndarray:
    """Argmax of affine scores; ties go to the lowest class index."""
    h = model.hypothesis if isinstance(model, LogisticModel) else model
    return np.argmax(h.scores(x), axis=-1) + 1


def predict_any(model, x: np.ndarray) -> np.ndarray:
    """Predict with a logistic model, linear hypothesis, or naive Bayes model."""
    if isinstance(model, (DiscreteNBModel, GaussianNBModel)):
        return np.argmax(nb_activations(model, x), axis=-1) + 1
    return predict(model, x)


def zero_one_error(model, d: Dataset) -> float:
    """Fraction of misclassified samples; accepts any supported model."""
    return float(np.mean(predict_any(model, d.features) != d.labels))
