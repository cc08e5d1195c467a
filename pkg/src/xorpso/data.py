"""Dataset loading, stratified splitting, and synthetic data generation.

All datasets are plain labeled feature matrices: float64 features, integer
class labels.  Arrays are frozen after construction so datasets can be
shared freely across concurrent fitness evaluations.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """Raised for unreadable, malformed, or internally inconsistent datasets."""


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a two-class synthetic dataset with planted informative columns.

    Every column has standard deviation ``noise_std``.  Informative columns
    additionally get a class-dependent mean shift of ``+/- class_separation/2``,
    so the class means differ by exactly ``class_separation``; the remaining
    columns are pure zero-mean noise.  With ``noise_std=0`` the informative
    columns collapse onto the two class means and the classes are exactly
    separable.  Generation is a pure function of the recipe.
    """

    n_samples: int
    n_features: int
    n_informative: int
    class_separation: float = 2.0
    noise_std: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 4:
            raise DatasetError(f"n_samples must be >= 4, got {self.n_samples}")
        if self.n_features < 1:
            raise DatasetError(f"n_features must be >= 1, got {self.n_features}")
        if not 1 <= self.n_informative <= self.n_features:
            raise DatasetError(
                f"n_informative must be in [1, n_features={self.n_features}], "
                f"got {self.n_informative}"
            )
        if not self.class_separation > 0:
            raise DatasetError("class_separation must be positive")
        if self.noise_std < 0:
            raise DatasetError("noise_std must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SynthSpec":
        return cls(**d)


@dataclass(frozen=True)
class SynthProvenance:
    """Ground truth attached to a synthetic dataset: the recipe and which columns carry signal."""

    spec: SynthSpec
    informative_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "informative_indices": list(self.informative_indices),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SynthProvenance":
        return cls(
            spec=SynthSpec.from_dict(d["spec"]),
            informative_indices=tuple(int(i) for i in d["informative_indices"]),
        )


@dataclass(frozen=True)
class FeatureDataset:
    """Labeled feature matrix: samples are rows, features are columns.

    Parameters
    ----------
    features : array_like, shape (n_samples, n_features)
        Real-valued feature matrix; all values must be finite.
    labels : array_like, shape (n_samples,)
        Non-negative integer class indices, one per row.
    provenance : SynthProvenance, optional
        Present on synthetic datasets; records the generating spec and the
        planted informative column indices.
    """

    features: np.ndarray
    labels: np.ndarray
    provenance: SynthProvenance | None = None

    def __post_init__(self):
        feats = np.atleast_2d(np.asarray(self.features, dtype=np.float64))
        labels = np.asarray(self.labels)
        if feats.ndim != 2:
            raise DatasetError(f"features must be 2-D, got ndim={feats.ndim}")
        if feats.shape[0] != labels.shape[0]:
            raise DatasetError(
                f"labels length {labels.shape[0]} does not match "
                f"{feats.shape[0]} sample rows"
            )
        if feats.shape[1] < 1:
            raise DatasetError("dataset must have at least one feature column")
        if feats.shape[0] < 2:
            raise DatasetError("dataset must have at least two samples")
        if not np.all(np.isfinite(feats)):
            bad = np.argwhere(~np.isfinite(feats))[0]
            raise DatasetError(
                f"non-finite feature value at row {bad[0]}, column {bad[1]}"
            )
        if not np.issubdtype(labels.dtype, np.integer):
            as_float = labels.astype(np.float64)
            if not np.all(as_float == np.floor(as_float)):
                raise DatasetError("labels must be integers")
        labels = labels.astype(np.int64)
        if labels.min() < 0:
            raise DatasetError("labels must be non-negative class indices")
        object.__setattr__(self, "features", _frozen_array(feats, np.float64))
        object.__setattr__(self, "labels", _frozen_array(labels, np.int64))

    @property
    def sample_count(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]

    @property
    def classes(self) -> np.ndarray:
        """Distinct label values, ascending."""
        return np.unique(self.labels)


@dataclass(frozen=True)
class SplitDataset:
    """A stratified train/validation partition of a single source dataset."""

    train: FeatureDataset
    validation: FeatureDataset
    split_seed: int
    validation_fraction: float

    def __post_init__(self):
        if self.train.feature_count != self.validation.feature_count:
            raise DatasetError(
                "train and validation partitions disagree on feature count"
            )
        if not 0.0 < self.validation_fraction < 1.0:
            raise DatasetError(
                f"validation_fraction must be in (0, 1), got {self.validation_fraction}"
            )

    @property
    def feature_count(self) -> int:
        return self.train.feature_count


def provenance_path(path) -> Path:
    """Sidecar JSON path for a dataset file (``data.csv`` -> ``data.provenance.json``)."""
    return Path(path).with_suffix(".provenance.json")


def load_dataset(path, label_column: str = "label") -> FeatureDataset:
    """Load a labeled feature matrix from a headered CSV file.

    The label column is removed from the features; the remaining columns
    become features in header order, so feature index j is the j-th
    non-label column.  A provenance sidecar written by :func:`save_dataset`
    is restored when present.

    Parameters
    ----------
    path : str or Path
        CSV file: UTF-8, header row, ``.`` decimal separator.
    label_column : str
        Header name of the integer class-label column.

    Raises
    ------
    DatasetError
        Missing file, absent label column, a non-numeric or non-finite cell
        (the message names the offending row and column), a non-integer
        label, or fewer than two data rows.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise DatasetError(
                f"{path}: label column {label_column!r} not in header {header}"
            )
        label_pos = header.index(label_column)
        feature_names = [h for h in header if h != label_column]

        rows: list[list[float]] = []
        labels: list[int] = []
        # line numbers are 1-based file lines; the header is line 1
        for line_no, cells in enumerate(reader, start=2):
            if not cells:
                continue
            if len(cells) != len(header):
                raise DatasetError(
                    f"{path}: row at line {line_no} has {len(cells)} cells, "
                    f"expected {len(header)}"
                )
            feats_row = []
            for pos, cell in enumerate(cells):
                name = header[pos]
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"{path}: line {line_no}, column {name!r}: "
                        f"could not parse {cell.strip()!r} as a number"
                    ) from None
                if pos == label_pos:
                    if not math.isfinite(value) or value != math.floor(value):
                        raise DatasetError(
                            f"{path}: line {line_no}, column {name!r}: "
                            f"label {cell.strip()!r} is not an integer"
                        )
                    labels.append(int(value))
                else:
                    if not math.isfinite(value):
                        raise DatasetError(
                            f"{path}: line {line_no}, column {name!r}: "
                            f"feature value {cell.strip()!r} is not finite"
                        )
                    feats_row.append(value)
            rows.append(feats_row)

    if not feature_names:
        raise DatasetError(f"{path}: no feature columns besides {label_column!r}")
    if len(rows) < 2:
        raise DatasetError(f"{path}: need at least 2 data rows, found {len(rows)}")

    provenance = None
    sidecar = provenance_path(path)
    if sidecar.is_file():
        provenance = SynthProvenance.from_dict(json.loads(sidecar.read_text()))
    return FeatureDataset(
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        provenance=provenance,
    )


def save_dataset(dataset: FeatureDataset, path, label_column: str = "label") -> None:
    """Write a dataset as CSV (columns ``f0..fN`` plus the label column).

    Floats are written with ``repr`` so a save/load round trip reproduces
    every value exactly.  Synthetic provenance, when present, goes to a
    JSON sidecar next to the CSV.
    """
    path = Path(path)
    header = [f"f{j}" for j in range(dataset.feature_count)] + [label_column]
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row, label in zip(dataset.features, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [str(int(label))])
    if dataset.provenance is not None:
        provenance_path(path).write_text(
            json.dumps(dataset.provenance.to_dict(), indent=2) + "\n"
        )


def generate_synthetic(spec: SynthSpec) -> FeatureDataset:
    """Generate a two-class dataset from a :class:`SynthSpec`.

    The first half of the rows are class 0, the rest class 1.  The
    informative column indices are drawn without replacement from the
    spec's seed and recorded in the dataset's provenance.  Identical specs
    produce byte-identical matrices.
    """
    rng = np.random.default_rng(spec.seed)
    informative = np.sort(
        rng.choice(spec.n_features, size=spec.n_informative, replace=False)
    )
    n1 = spec.n_samples // 2
    n0 = spec.n_samples - n1
    labels = np.concatenate(
        [np.zeros(n0, dtype=np.int64), np.ones(n1, dtype=np.int64)]
    )
    features = spec.noise_std * rng.standard_normal(
        (spec.n_samples, spec.n_features)
    )
    shift = np.where(labels == 1, spec.class_separation / 2.0, -spec.class_separation / 2.0)
    features[:, informative] += shift[:, None]
    return FeatureDataset(
        features=features,
        labels=labels,
        provenance=SynthProvenance(
            spec=spec, informative_indices=tuple(int(i) for i in informative)
        ),
    )


def stratified_split(
    dataset: FeatureDataset, validation_fraction: float, seed: int
) -> SplitDataset:
    """Partition a dataset into disjoint train/validation subsets, stratified by class.

    Per class, ``floor(count * validation_fraction)`` samples (at least one)
    go to validation; both partitions keep the original row order.  The
    assignment is a pure function of (dataset, fraction, seed).

    Raises
    ------
    DatasetError
        Fraction outside (0, 1), or a class with fewer than two samples.
    """
    if not 0.0 < validation_fraction < 1.0:
        raise DatasetError(
            f"validation_fraction must be in (0, 1), got {validation_fraction}"
        )
    rng = np.random.default_rng(seed)
    labels = dataset.labels
    val_rows = np.zeros(dataset.sample_count, dtype=bool)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if idx.size < 2:
            raise DatasetError(
                f"class {cls} has {idx.size} sample(s); stratified splitting "
                "needs at least 2 per class"
            )
        n_val = max(1, int(math.floor(idx.size * validation_fraction)))
        perm = rng.permutation(idx.size)
        val_rows[idx[perm[:n_val]]] = True

    def subset(rows_mask):
        return FeatureDataset(
            features=dataset.features[rows_mask],
            labels=dataset.labels[rows_mask],
            provenance=dataset.provenance,
        )

    return SplitDataset(
        train=subset(~val_rows),
        validation=subset(val_rows),
        split_seed=seed,
        validation_fraction=validation_fraction,
    )


def standardize_split(split: SplitDataset) -> SplitDataset:
    """Standardize features to zero mean, unit variance, fit on train only.

    The train partition's per-column mean and standard deviation are applied
    to both partitions; zero-variance columns are centered and left at scale
    one.  Distance-based classification needs comparable column scales.
    """
    mean = split.train.features.mean(axis=0)
    std = split.train.features.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)

    def transform(ds: FeatureDataset) -> FeatureDataset:
        return FeatureDataset(
            features=(ds.features - mean) / std,
            labels=ds.labels,
            provenance=ds.provenance,
        )

    return SplitDataset(
        train=transform(split.train),
        validation=transform(split.validation),
        split_seed=split.split_seed,
        validation_fraction=split.validation_fraction,
    )
