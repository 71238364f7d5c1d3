"""Self-contained SVG plots for experiment outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
# fixed hash salt + no date metadata keeps SVG output byte-reproducible
matplotlib.rcParams["svg.hashsalt"] = "linclass"

import matplotlib.pyplot as plt  # noqa: E402

_COLORS = {"nb": "tab:blue", "lr": "tab:orange"}
_LABELS = {"nb": "naive Bayes", "lr": "logistic regression"}


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_error_curves(path, n, records):
    """Mean test error vs m for both classifiers at one feature dimension."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for rec in records:
        ms = [m for m, _ in rec.mean_curve]
        errs = [e for _, e in rec.mean_curve]
        ax.plot(ms, errs, marker="o", color=_COLORS[rec.classifier],
                label=_LABELS[rec.classifier])
    ax.set_xscale("log")
    ax.set_xlabel("training size m")
    ax.set_ylabel("mean test error")
    ax.set_title(f"n = {n}")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def plot_m_conv(path, records, logx=False):
    """Mean converging size vs feature dimension, optional log-x."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for classifier in ("nb", "lr"):
        recs = sorted((r for r in records if r.classifier == classifier),
                      key=lambda r: r.n)
        ns = [r.n for r in recs if r.converged]
        mc = [r.m_conv_mean for r in recs if r.converged]
        var = [r.m_conv_var for r in recs if r.converged]
        ax.errorbar(ns, mc, yerr=[v ** 0.5 for v in var], marker="o",
                    color=_COLORS[classifier], label=_LABELS[classifier])
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel("feature dimension n")
    ax.set_ylabel("mean m_conv")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def plot_lineval_curves(path, nb_curve, lr_curve):
    """Mean test error vs m from a linear-evaluation run."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for name, (ms, errs) in (("nb", nb_curve), ("lr", lr_curve)):
        ax.plot(ms, errs, marker="o", color=_COLORS[name], label=_LABELS[name])
    ax.set_xscale("log")
    ax.set_xlabel("training size m")
    ax.set_ylabel("mean test error")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
