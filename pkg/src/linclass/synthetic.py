"""Balanced Gaussian-mixture benchmark with exact Bayes oracles.

Class 1 has mean -1 in every coordinate; class k > 1 has mean 2^(k-2).
The diagonal covariance is n in the first n/2 coordinates and 1 in the
rest, shared by all classes; priors are uniform. For K > 2 an affine
scale map x -> x / 2^(K-3) - 1 is applied by default, which places the
class means inside [-1, 1].

Sampling uses the counter-based Philox PRNG (numpy's Philox4x64-10 bit
generator seeded through SeedSequence) with ziggurat Gaussian draws, so a
seed fully determines the output across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset


def _rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class MixtureSpec:
    k: int
    n: int
    scaled: bool = None  # default: scale exactly when k > 2

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("need k >= 2")
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("n must be even and >= 2")
        if self.scaled is None:
            object.__setattr__(self, "scaled", self.k > 2)

    @property
    def scale_factor(self) -> float:
        return 2.0 ** (self.k - 3)

    def means(self) -> np.ndarray:
        """Unscaled class means, shape (K, n)."""
        vals = np.array([-1.0] + [2.0 ** (c - 2) for c in range(2, self.k + 1)])
        return np.repeat(vals[:, None], self.n, axis=1)

    def cov_diag(self) -> np.ndarray:
        """Unscaled diagonal covariance, shape (n,)."""
        half = self.n // 2
        return np.concatenate([np.full(half, float(self.n)), np.ones(half)])

    def scale_map(self, x: np.ndarray) -> np.ndarray:
        return x / self.scale_factor - 1.0

    def unscale_map(self, x: np.ndarray) -> np.ndarray:
        return (x + 1.0) * self.scale_factor


def sample(spec: MixtureSpec, m: int, seed) -> Dataset:
    """Draw m labeled points; labels uniform, features from the class Gaussian."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = _rng(seed)
    labels = rng.integers(1, spec.k + 1, size=m)
    std = np.sqrt(spec.cov_diag())
    feats = spec.means()[labels - 1] + rng.standard_normal((m, spec.n)) * std
    if spec.scaled:
        feats = spec.scale_map(feats)
    return Dataset(feats, labels, spec.k)


def _log_joint(spec: MixtureSpec, x: np.ndarray) -> np.ndarray:
    """Exact per-class log joint densities at unscaled x (class-constant terms kept)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != spec.n:
        raise ValueError(f"expected {spec.n} features, got {x.shape[-1]}")
    cov = spec.cov_diag()
    quad = -0.5 * ((x[..., None, :] - spec.means()) ** 2 / cov).sum(axis=-1)
    return quad + math.log(1.0 / spec.k)


def bayes_pair_activation(spec: MixtureSpec, x: np.ndarray, k1: int, k2: int) -> float:
    """Exact pair activation of the asymptotic classifier; positive favors k1.

    ``x`` is interpreted in the spec's sample coordinates; when the spec is
    scaled the input is mapped back before evaluating the densities.
    """
    for k in (k1, k2):
        if not 1 <= k <= spec.k:
            raise ValueError(f"class {k} out of range 1..{spec.k}")
    x = np.asarray(x, dtype=np.float64)
    if spec.scaled:
        x = spec.unscale_map(x)
    lj = _log_joint(spec, x)
    return float(lj[..., k1 - 1] - lj[..., k2 - 1])


def bayes_predict(spec: MixtureSpec, x: np.ndarray) -> np.ndarray:
    """Exact argmax of the class log joint densities; ties to lowest index."""
    x = np.asarray(x, dtype=np.float64)
    if spec.scaled:
        x = spec.unscale_map(x)
    return np.argmax(_log_joint(spec, x), axis=-1) + 1


def binary_bayes_error(n: int) -> float:
    """Closed-form Bayes error for the unscaled binary mixture.

    The decision statistic is linear in x; centering at either class mean
    leaves a Gaussian with mean (n+1)/2 and variance (n+1)/2, so the error
    is the normal tail Phi(-sqrt((n+1)/2)).
    """
    z = math.sqrt((n + 1) / 2.0)
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def bayes_error(spec: MixtureSpec, mc_samples: int, seed):
    """Monte-Carlo estimate of the Bayes misclassification probability.

    Returns (estimate, standard error).
    """
    if mc_samples < 1000:
        raise ValueError("need at least 1000 Monte-Carlo samples")
    d = sample(spec, mc_samples, seed)
    wrong = float(np.mean(bayes_predict(spec, d.features) != d.labels))
    se = math.sqrt(wrong * (1.0 - wrong) / mc_samples)
    return wrong, se


def asymptotic_error(spec: MixtureSpec) -> float:
    """Asymptotic-error reference for convergence runs.

    Binary uses the closed form; multiclass uses 0, the practical estimate
    once the exact classifier's test error drops below measurement noise.
    """
    return binary_bayes_error(spec.n) if spec.k == 2 else 0.0
