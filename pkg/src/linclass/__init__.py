"""Generative vs. discriminative linear classifiers and their diagnostics."""

__version__ = "0.1.0"
