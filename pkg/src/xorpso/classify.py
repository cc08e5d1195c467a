"""k-nearest-neighbor wrapper evaluator.

Fits on the training rows restricted to a mask's selected columns and
scores accuracy on the validation rows.  Search is brute-force and exact,
with deterministic tie-breaking, so repeated evaluations of the same mask
are bit-for-bit identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .data import SplitDataset


class EmptyMaskError(ValueError):
    """Signals a mask that selects no features; callers decide how to score it."""


@dataclass(frozen=True)
class KnnConfig:
    """Neighbor count and distance metric for the wrapper classifier."""

    k: int = 5
    distance: str = "euclidean"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.k % 2 == 0:
            raise ValueError(f"k must be odd to limit vote ties, got {self.k}")
        if self.distance != "euclidean":
            raise ValueError(f"unsupported distance metric {self.distance!r}")


def knn_predict(
    split: SplitDataset, mask: np.ndarray, config: KnnConfig
) -> np.ndarray:
    """Predict a label for every validation row using selected columns only.

    For each validation row the k nearest training rows (Euclidean distance
    over the mask's columns) vote; ties are deterministic: equal distances
    prefer the lower training-row index, equal votes prefer the lower class
    index.

    Raises
    ------
    EmptyMaskError
        If the mask selects no features.
    ValueError
        Mask length mismatch, or k larger than the training sample count.
    """
    mask = np.asarray(mask)
    if mask.shape != (split.feature_count,):
        raise ValueError(
            f"mask length {mask.shape} does not match feature count "
            f"{split.feature_count}"
        )
    selected = np.flatnonzero(mask != 0)
    if selected.size == 0:
        raise EmptyMaskError("mask selects no features")
    if config.k > split.train.sample_count:
        raise ValueError(
            f"k={config.k} exceeds training sample count "
            f"{split.train.sample_count}"
        )
    train = split.train.features[:, selected]
    valid = split.validation.features[:, selected]
    # squared Euclidean keeps the same neighbor ordering and skips the sqrt
    dist = cdist(valid, train, metric="sqeuclidean")
    # stable sort: equal distances keep ascending training-row index
    neighbors = np.argsort(dist, axis=1, kind="stable")[:, : config.k]
    votes = split.train.labels[neighbors]
    n_classes = int(split.train.labels.max()) + 1
    preds = np.empty(votes.shape[0], dtype=np.int64)
    for i, row in enumerate(votes):
        # argmax of bincount resolves vote ties toward the lower class index
        preds[i] = np.argmax(np.bincount(row, minlength=n_classes))
    return preds


def knn_accuracy(
    split: SplitDataset, mask: np.ndarray, config: KnnConfig
) -> float:
    """Fraction of validation rows predicted correctly; in [0, 1]."""
    preds = knn_predict(split, mask, config)
    return float(np.mean(preds == split.validation.labels))
