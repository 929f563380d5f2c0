"""Scatter-matrix computation for labeled datasets.

All three matrices are *raw sums* of outer products — never normalized by
the sample count. Regularization strengths elsewhere in the package are
scale-sensitive, so this convention is load-bearing, not cosmetic:

    s_bar = sum_i (x_i - mean)(x_i - mean)^T          (total, center-adjusted)
    s_b   = sum_c n_c (mean_c - mean)(mean_c - mean)^T (between-class)
    s_w   = sum_c sum_{i in c} (x_i - mean_c)(x_i - mean_c)^T (within-class)

with the additive identity s_bar == s_b + s_w.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .data import Dataset, LabelSet
from .errors import InputError, LengthMismatch, NotPositiveDefinite

__all__ = ["ScatterSet", "compute_scatter", "rank_bound_check"]

#: Relative tolerance for the s_bar == s_b + s_w identity.
ADDITIVITY_RTOL = 1e-9

#: Relative eigenvalue floor used when counting the numerical rank of s_b.
RANK_RTOL = 1e-12


def _check_psd(name: str, s: np.ndarray) -> None:
    """Reject matrices with an eigenvalue below -1e-9 * max-norm.

    Cheap sufficient test: s + shift*I admits a Cholesky factorization iff
    its smallest eigenvalue clears the pivot floor, so success bounds
    lambda_min(s) >= -shift.
    """
    norm = linalg.max_norm(s)
    if norm == 0.0:
        return
    shift = 1e-9 * norm
    try:
        linalg.cholesky(s + shift * np.eye(s.shape[0]))
    except NotPositiveDefinite as exc:
        raise InputError(f"{name} is not positive semi-definite: {exc}") from exc


@dataclass(frozen=True)
class ScatterSet:
    """Total/between/within scatter of one labeling, plus the means behind them.

    class_means has shape (m, c): column j is the mean of class j.
    """

    s_bar: np.ndarray
    s_b: np.ndarray
    s_w: np.ndarray
    mean: np.ndarray
    class_means: np.ndarray
    class_counts: np.ndarray

    def __post_init__(self):
        m = self.mean.shape[0]
        for name in ("s_bar", "s_b", "s_w"):
            s = getattr(self, name)
            if s.shape != (m, m):
                raise InputError(f"{name} must have shape ({m}, {m}), got {s.shape}")
            if not np.array_equal(s, s.T):
                raise InputError(f"{name} is not exactly symmetric")
            if not np.all(np.isfinite(s)):
                raise InputError(f"{name} contains non-finite entries")
        c = self.class_counts.shape[0]
        if self.class_means.shape != (m, c):
            raise InputError(
                f"class_means must have shape ({m}, {c}), got {self.class_means.shape}")
        residual = linalg.max_norm(self.s_bar - (self.s_b + self.s_w))
        if residual > ADDITIVITY_RTOL * linalg.max_norm(self.s_bar):
            raise InputError(
                f"scatter additivity violated: |s_bar - (s_b + s_w)| = {residual:g}")
        for name in ("s_bar", "s_b", "s_w"):
            _check_psd(name, getattr(self, name))

    @property
    def n_features(self) -> int:
        return self.mean.shape[0]

    @property
    def n_classes(self) -> int:
        return self.class_counts.shape[0]


def compute_scatter(d: Dataset, l: LabelSet) -> ScatterSet:
    """Two-pass scatter computation: means first, then deviation outer products."""
    if l.n_samples != d.n_samples:
        raise LengthMismatch(
            f"labels cover {l.n_samples} samples but dataset has {d.n_samples}")
    l.require_all_classes("compute_scatter")
    x = d.x
    labels = l.labels
    c = l.class_count

    mean = x.mean(axis=1)
    counts = l.counts()
    class_means = np.empty((d.n_features, c))
    for j in range(c):
        class_means[:, j] = x[:, labels == j].mean(axis=1)

    centered = x - mean[:, None]
    s_bar = linalg.symmetrize(centered @ centered.T)

    between = (class_means - mean[:, None]) * np.sqrt(counts)
    s_b = linalg.symmetrize(between @ between.T)

    within = x - class_means[:, labels]
    s_w = linalg.symmetrize(within @ within.T)

    return ScatterSet(s_bar=s_bar, s_b=s_b, s_w=s_w, mean=mean,
                      class_means=class_means, class_counts=counts)


def rank_bound_check(s: ScatterSet) -> int:
    """Numerical rank of the between-class scatter (eigenvalues above a
    dimension-scaled floor). Always at most n_classes - 1."""
    norm = linalg.max_norm(s.s_b)
    if norm == 0.0:
        return 0
    values = linalg.sym_eig(s.s_b).values
    return int(np.count_nonzero(values > s.n_features * RANK_RTOL * norm))
