"""Core data containers: feature matrices and integer labelings.

Convention: a feature matrix has shape (m_features, n_samples) — each
*column* is one sample. All downstream scatter/projection code relies on
this orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyClass, InputError

__all__ = ["Dataset", "LabelSet"]


@dataclass(frozen=True)
class Dataset:
    """An (m, n) matrix of n samples in m feature dimensions, columns = samples."""

    x: np.ndarray
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim != 2:
            raise InputError(f"data matrix must be 2-d, got ndim={x.ndim}")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise InputError(f"data matrix must be at least 1x1, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise InputError("data matrix contains non-finite entries")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        if self.feature_names is not None:
            names = tuple(str(s) for s in self.feature_names)
            if len(names) != x.shape[0]:
                raise InputError(
                    f"feature_names length {len(names)} != feature count {x.shape[0]}")
            object.__setattr__(self, "feature_names", names)

    @property
    def n_features(self) -> int:
        return self.x.shape[0]

    @property
    def n_samples(self) -> int:
        return self.x.shape[1]

    def take(self, indices: np.ndarray) -> "Dataset":
        """Column (sample) subset, preserving the given index order."""
        return Dataset(self.x[:, np.asarray(indices, dtype=np.intp)], self.feature_names)


@dataclass(frozen=True)
class LabelSet:
    """Integer labels in 0..class_count-1, one per sample.

    Subsets (e.g. a held-out test slice) may legitimately miss classes, so
    construction does not require every class to be present; call
    require_all_classes() where an empty class would be fatal (scatter
    computation, training a classifier, balancing)."""

    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size < 1:
            raise InputError("labels must be a non-empty 1-d array")
        if not np.issubdtype(labels.dtype, np.integer):
            as_int = labels.astype(np.int64)
            if not np.array_equal(as_int, labels):
                raise InputError("labels must be integers")
            labels = as_int
        labels = labels.astype(np.int64)
        c = int(self.class_count)
        if c < 2:
            raise InputError(f"class_count must be >= 2, got {c}")
        if labels.min() < 0 or labels.max() >= c:
            raise InputError(
                f"labels out of range: expected 0..{c - 1}, "
                f"saw [{labels.min()}, {labels.max()}]")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_count", c)

    @property
    def n_samples(self) -> int:
        return self.labels.size

    def counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)

    def require_all_classes(self, context: str = "operation") -> None:
        missing = np.flatnonzero(self.counts() == 0)
        if missing.size:
            raise EmptyClass(f"{context}: classes with no samples: {missing.tolist()}")

    def take(self, indices: np.ndarray) -> "LabelSet":
        """Sample subset; the result may miss classes."""
        return LabelSet(self.labels[np.asarray(indices, dtype=np.intp)], self.class_count)
