"""Convergence-size experiments and two-regimes detection.

Walks a geometric training-size grid, fitting Gaussian naive Bayes and
logistic regression at each size, and records the first size whose test
error comes within epsilon0 of the asymptotic reference. Seeds are derived
per (classifier, n, m, repeat) cell, never from execution order, so results
are reproducible regardless of parallelism.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import logistic, naive_bayes, synthetic
from .data import Dataset, subsample
from .logistic import OptimizerConfig, zero_one_error

# stream tags for seed derivation
_TEST_STREAM = 0
_CLASSIFIER_STREAM = {"nb": 1, "lr": 2}


def derive_seed(base_seed: int, *parts: int) -> int:
    """Deterministic 64-bit seed for a named experiment cell."""
    ss = np.random.SeedSequence((int(base_seed),) + tuple(int(p) for p in parts))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class ConvergenceConfig:
    """Protocol settings for a convergence sweep.

    ``l2_weight`` uses the summed-loss convention (penalty weight against
    the loss summed over training samples), matching the common reference
    solvers; it is divided by m before being handed to the mean-loss fitter.
    """

    n_values: tuple
    k: int
    epsilon0: float = 0.01
    repeats: int = 5
    test_size: int = 10_000
    m_min: int = None      # default 2K
    m_ratio: float = 1.25
    m_max: int = 50_000
    base_seed: int = 0
    l2_weight: float = 1.0
    max_iterations: int = 1000

    def __post_init__(self):
        if self.epsilon0 < 0 or self.repeats < 1 or self.m_ratio <= 1:
            raise ValueError("invalid convergence configuration")
        if self.m_min is None:
            object.__setattr__(self, "m_min", 2 * self.k)

    def m_grid(self):
        grid = []
        m = float(self.m_min)
        while round(m) <= self.m_max:
            v = int(round(m))
            if not grid or v > grid[-1]:
                grid.append(v)
            m *= self.m_ratio
        return grid


@dataclass
class ConvergenceRecord:
    classifier: str
    n: int
    rows: list                 # (m, repeat, test_error) in walk order
    mean_curve: list           # (m, mean test error)
    per_repeat_m_conv: list    # first m per repeat with gap < epsilon0, None if never
    m_conv: int | None         # first m with mean-over-repeats gap < epsilon0
    asymptotic_error: float

    @property
    def converged(self) -> bool:
        return self.m_conv is not None

    @property
    def m_conv_mean(self) -> float:
        vals = [v for v in self.per_repeat_m_conv if v is not None]
        return float(np.mean(vals)) if vals else float("nan")

    @property
    def m_conv_var(self) -> float:
        vals = [v for v in self.per_repeat_m_conv if v is not None]
        return float(np.var(vals)) if vals else float("nan")


@dataclass(frozen=True)
class TwoRegimesVerdict:
    nb_faster: bool
    two_regimes: bool
    crossover: tuple | None  # bracketing (m_lo, m_hi) grid interval


def _fit_and_error(classifier: str, train: Dataset, test: Dataset, cfg) -> float:
    if classifier == "nb":
        try:
            model = naive_bayes.fit_gaussian(train)
        except ValueError:
            # a tiny draw missed a class entirely; score it as worst case
            return 1.0
        return zero_one_error(model, test)
    if classifier == "lr":
        # l2_weight follows the summed-loss convention of the reference
        # implementation: penalty (l2/2)||W||^2 against the loss summed over
        # samples, i.e. l2/m against the mean loss the fitter minimizes.
        model = logistic.fit(train, cfg.l2_weight / train.m,
                             OptimizerConfig(max_iterations=cfg.max_iterations))
        return zero_one_error(model, test)
    raise ValueError(f"unknown classifier {classifier!r}")


def _walk_grid(classifier: str, n: int, cfg: ConvergenceConfig, asym: float,
               make_train, test: Dataset) -> ConvergenceRecord:
    rows, mean_curve = [], []
    per_rep = [None] * cfg.repeats
    m_conv = None
    for m in cfg.m_grid():
        errs = []
        for rep in range(cfg.repeats):
            seed = derive_seed(cfg.base_seed, _CLASSIFIER_STREAM[classifier], n, m, rep)
            errs.append(_fit_and_error(classifier, make_train(m, seed), test, cfg))
            rows.append((m, rep, errs[-1]))
        mean_err = float(np.mean(errs))
        mean_curve.append((m, mean_err))
        for rep, e in enumerate(errs):
            if per_rep[rep] is None and e - asym < cfg.epsilon0:
                per_rep[rep] = m
        if m_conv is None and mean_err - asym < cfg.epsilon0:
            m_conv = m
        if m_conv is not None and all(v is not None for v in per_rep):
            break
    return ConvergenceRecord(classifier, n, rows, mean_curve, per_rep, m_conv, asym)


def _converge_synthetic_one(n: int, cfg: ConvergenceConfig) -> list:
    spec = synthetic.MixtureSpec(cfg.k, n)
    test = synthetic.sample(spec, cfg.test_size, derive_seed(cfg.base_seed, _TEST_STREAM, n))
    asym = synthetic.asymptotic_error(spec)

    def make_train(m, seed):
        return synthetic.sample(spec, m, seed)

    return [_walk_grid(c, n, cfg, asym, make_train, test) for c in ("nb", "lr")]


def run_convergence(source, config: ConvergenceConfig, threads: int = 1) -> list:
    """Run the convergence protocol; returns ConvergenceRecords.

    ``source`` is None for the synthetic mixture (per-n specs built from the
    config) or a (train, test) Dataset pair, in which case each classifier's
    asymptotic error is proxied by its own full-training-data test error.
    """
    if source is None:
        ns = list(config.n_values)
        if threads > 1 and len(ns) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_converge_synthetic_one, ns,
                                        [config] * len(ns)))
        else:
            results = [_converge_synthetic_one(n, config) for n in ns]
        return [rec for group in results for rec in group]

    train, test = source
    if train.n != test.n or train.k != test.k:
        raise ValueError("train and test must share feature dimension and class count")
    records = []
    for classifier in ("nb", "lr"):
        asym = _fit_and_error(classifier, train, test, config)

        def make_train(m, seed):
            return subsample(train, min(m, train.m), seed)

        records.append(_walk_grid(classifier, train.n, config, asym, make_train, test))
    return records


def run_lineval(train: Dataset, test: Dataset, m_grid, repeats: int,
                l2_weight: float, base_seed: int = 0,
                max_iterations: int = 1000) -> list:
    """Mean/per-repeat test-error curves for both classifiers over an m grid.

    Returns rows (classifier, m, repeat, test_error) sorted by
    (classifier, m, repeat). Grid entries above the training size are
    clipped with a warning.
    """
    if train.n != test.n or train.k != test.k:
        raise ValueError("train and test must share feature dimension and class count")
    cfg = ConvergenceConfig(n_values=(train.n,), k=train.k, repeats=repeats,
                            l2_weight=l2_weight, base_seed=base_seed,
                            max_iterations=max_iterations)
    grid = []
    for m in m_grid:
        if m > train.m:
            warnings.warn(f"m={m} exceeds training size {train.m}; clipping")
            m = train.m
        if m not in grid:
            grid.append(m)
    rows = []
    for classifier in ("nb", "lr"):
        for m in grid:
            for rep in range(repeats):
                seed = derive_seed(base_seed, _CLASSIFIER_STREAM[classifier],
                                   train.n, m, rep)
                err = _fit_and_error(classifier, subsample(train, m, seed), test, cfg)
                rows.append((classifier, m, rep, err))
    return rows


def mean_curve(rows, classifier: str):
    """Collapse lineval rows to (m_grid, mean errors) for one classifier."""
    by_m = {}
    for c, m, _rep, err in rows:
        if c == classifier:
            by_m.setdefault(m, []).append(err)
    ms = sorted(by_m)
    return ms, [float(np.mean(by_m[m])) for m in ms]


def detect_two_regimes(nb_curve, lr_curve, epsilon0: float = 0.01) -> TwoRegimesVerdict:
    """Compare mean-error curves on a shared m grid.

    ``nb_faster``: naive Bayes comes within epsilon0 of its own final error
    at a strictly smaller m than logistic regression does of its own.
    ``two_regimes``: naive Bayes is better somewhere but worse at the
    largest m; the crossover is the bracketing grid interval.
    """
    nb_ms, nb = nb_curve
    lr_ms, lr = lr_curve
    if list(nb_ms) != list(lr_ms):
        raise ValueError("curves must share the same m grid")
    if len(nb_ms) < 3:
        raise ValueError("need at least 3 grid points")
    nb = np.asarray(nb, dtype=np.float64)
    lr = np.asarray(lr, dtype=np.float64)

    def settle(curve):
        gaps = curve - curve[-1]
        return int(np.argmax(gaps < epsilon0))  # first index within epsilon0 of final

    nb_faster = settle(nb) < settle(lr)
    two = bool(np.any(nb < lr) and lr[-1] < nb[-1])
    crossover = None
    if two:
        for j in range(len(nb) - 2, -1, -1):
            if nb[j] < lr[j] and nb[j + 1] >= lr[j + 1]:
                crossover = (nb_ms[j], nb_ms[j + 1])
                break
    return TwoRegimesVerdict(nb_faster, two, crossover)
