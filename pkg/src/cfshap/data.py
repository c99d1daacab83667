"""Tabular dataset loading, validation, standardization and splitting.

A :class:`Dataset` is an immutable feature matrix with named features,
dense integer class labels and optional per-feature standardization
parameters. The three bundled reference datasets (iris, wine, mobile)
are shipped as CSV files with SHA-256 manifests and loaded through
:func:`load_builtin`.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DatasetError

__all__ = [
    "FeatureSpec",
    "Standardization",
    "Dataset",
    "Split",
    "load_csv",
    "load_builtin",
    "builtin_names",
    "builtin_manifest",
    "standardize",
    "split",
]


@dataclass(frozen=True)
class FeatureSpec:
    """Name and coarse kind of one feature column."""

    name: str
    kind: str  # "continuous" or "integer"


@dataclass(frozen=True)
class Standardization:
    """Per-feature affine transform: standardized = (raw - mean) / std."""

    mean: np.ndarray
    std: np.ndarray

    def to_standardized(self, raw: np.ndarray) -> np.ndarray:
        return (np.asarray(raw, dtype=float) - self.mean) / self.std

    def to_raw(self, standardized: np.ndarray) -> np.ndarray:
        return np.asarray(standardized, dtype=float) * self.std + self.mean


def _freeze(arr: np.ndarray) -> np.ndarray:
    # copy so marking read-only never touches a caller-owned array
    arr = np.array(arr, order="C")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Immutable tabular classification dataset.

    ``points`` is an (n, d) float matrix, ``labels`` an (n,) vector of
    dense class ids in ``0..C-1``. When ``standardization`` is set the
    stored values are standardized and ``to_raw`` recovers source units.
    """

    name: str
    features: tuple[FeatureSpec, ...]
    points: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]
    standardization: Standardization | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", _freeze(np.asarray(self.points, dtype=float)))
        object.__setattr__(self, "labels", _freeze(np.asarray(self.labels, dtype=np.int64)))
        self._validate()

    def _validate(self) -> None:
        n, d = self.points.shape
        if d != len(self.features):
            raise DatasetError(
                f"{self.name}: {d} columns but {len(self.features)} feature specs"
            )
        if n != self.labels.shape[0]:
            raise DatasetError(
                f"{self.name}: {n} rows but {self.labels.shape[0]} labels"
            )
        if d < 1:
            raise DatasetError(f"{self.name}: dataset needs at least one feature")
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            dupes = sorted({x for x in names if names.count(x) > 1})
            raise DatasetError(f"{self.name}: duplicate feature names {dupes}")
        if any(not f.name for f in self.features):
            raise DatasetError(f"{self.name}: empty feature name")
        c = len(self.class_names)
        if c < 2:
            raise DatasetError(f"{self.name}: fewer than 2 classes")
        if n == 0:
            raise DatasetError(f"{self.name}: no rows")
        present = np.unique(self.labels)
        if present.min() < 0 or present.max() > c - 1:
            raise DatasetError(
                f"{self.name}: label outside 0..{c - 1}: {present.tolist()}"
            )
        if len(present) != c:
            missing = sorted(set(range(c)) - set(present.tolist()))
            raise DatasetError(f"{self.name}: classes never observed: {missing}")
        if not np.all(np.isfinite(self.points)):
            raise DatasetError(f"{self.name}: non-finite feature value")

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_features(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def to_raw(self, standardized: np.ndarray) -> np.ndarray:
        """Map standardized coordinates back to source units."""
        if self.standardization is None:
            return np.asarray(standardized, dtype=float)
        return self.standardization.to_raw(standardized)

    def to_standardized(self, raw: np.ndarray) -> np.ndarray:
        """Map raw coordinates into the stored (standardized) units."""
        if self.standardization is None:
            return np.asarray(raw, dtype=float)
        return self.standardization.to_standardized(raw)


@dataclass(frozen=True)
class Split:
    """Deterministic train/test partition of dataset row indices."""

    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int
    ratio: float

    def __post_init__(self):
        object.__setattr__(
            self, "train_indices", _freeze(np.asarray(self.train_indices, dtype=np.int64))
        )
        object.__setattr__(
            self, "test_indices", _freeze(np.asarray(self.test_indices, dtype=np.int64))
        )
        train = set(self.train_indices.tolist())
        test = set(self.test_indices.tolist())
        if train & test:
            raise DatasetError("split: train and test indices overlap")
        if not train or not test:
            raise DatasetError("split: both sides must be non-empty")


def _parse_cell(text: str, row: int, col_name: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetError(
            f"non-numeric cell at row {row}, column '{col_name}': {text!r}"
        ) from None
    if not math.isfinite(value):
        raise DatasetError(
            f"non-finite cell at row {row}, column '{col_name}': {text!r}"
        )
    return value


def load_csv(
    path: str | Path,
    label_column: str | int,
    class_names: list[str] | tuple[str, ...] | None = None,
    name: str | None = None,
) -> Dataset:
    """Load a classification dataset from a headered, comma-delimited CSV.

    All non-label cells must parse as finite reals. The label column is
    read as text; class ids are assigned by first appearance unless
    ``class_names`` fixes the ordering. Values are returned in raw
    (unstandardized) units.
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if isinstance(label_column, int):
            if not 0 <= label_column < len(header):
                raise DatasetError(f"label column index {label_column} out of range")
            label_idx = label_column
        else:
            if label_column not in header:
                raise DatasetError(f"label column '{label_column}' not in header")
            label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        if len(set(feature_names)) != len(feature_names):
            dupes = sorted({x for x in feature_names if feature_names.count(x) > 1})
            raise DatasetError(f"{path}: duplicate feature names {dupes}")

        rows: list[list[float]] = []
        raw_labels: list[str] = []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DatasetError(
                    f"{path}: row {row_no} has {len(row)} cells, expected {len(header)}"
                )
            values = [
                _parse_cell(cell.strip(), row_no, header[i])
                for i, cell in enumerate(row)
                if i != label_idx
            ]
            rows.append(values)
            raw_labels.append(row[label_idx].strip())

    if not rows:
        raise DatasetError(f"{path}: no data rows")

    if class_names is None:
        ordered: list[str] = []
        for lab in raw_labels:
            if lab not in ordered:
                ordered.append(lab)
        class_names = ordered
    class_names = tuple(str(c) for c in class_names)
    if len(class_names) < 2:
        raise DatasetError(f"{path}: fewer than 2 classes")
    index = {c: i for i, c in enumerate(class_names)}
    try:
        labels = np.array([index[lab] for lab in raw_labels], dtype=np.int64)
    except KeyError as exc:
        raise DatasetError(f"{path}: label {exc} not in class names {class_names}") from None

    points = np.array(rows, dtype=float)
    kinds = [
        "integer" if np.all(points[:, j] == np.round(points[:, j])) else "continuous"
        for j in range(points.shape[1])
    ]
    features = tuple(FeatureSpec(n, k) for n, k in zip(feature_names, kinds))
    return Dataset(
        name=name or path.stem,
        features=features,
        points=points,
        labels=labels,
        class_names=class_names,
    )


def standardize(ds: Dataset, fit_on: Split) -> Dataset:
    """Return a copy of ``ds`` with zero-mean unit-variance columns.

    Means and standard deviations are fit on the training rows only, so
    train columns are exactly standardized while test rows inherit the
    same affine map.
    """
    if ds.standardization is not None:
        raise DatasetError(f"{ds.name}: already standardized")
    train = ds.points[fit_on.train_indices]
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    for j, s in enumerate(std):
        if s == 0.0:
            raise DatasetError(
                f"{ds.name}: zero-variance column '{ds.features[j].name}'"
            )
    record = Standardization(mean=_freeze(mean), std=_freeze(std))
    return replace(ds, points=(ds.points - mean) / std, standardization=record)


def _sided_count(n: int, ratio: float) -> int:
    n_train = int(round(ratio * n))
    return min(max(n_train, 1), n - 1)


def split(ds: Dataset, ratio: float, seed: int, stratified: bool = True) -> Split:
    """Partition dataset rows into train/test, deterministically under seed.

    Stratified mode preserves per-class proportions within one member.
    """
    if not 0.0 < ratio < 1.0:
        raise DatasetError(f"split ratio must be in (0, 1), got {ratio}")
    rng = np.random.default_rng(seed)
    if stratified:
        train_parts: list[np.ndarray] = []
        test_parts: list[np.ndarray] = []
        for c in range(ds.n_classes):
            members = np.flatnonzero(ds.labels == c)
            if members.size < 2:
                raise DatasetError(
                    f"class {ds.class_names[c]!r} has {members.size} member(s); "
                    "need at least 2 for a stratified split"
                )
            perm = members[rng.permutation(members.size)]
            k = _sided_count(members.size, ratio)
            train_parts.append(perm[:k])
            test_parts.append(perm[k:])
        train = np.sort(np.concatenate(train_parts))
        test = np.sort(np.concatenate(test_parts))
    else:
        perm = rng.permutation(ds.n_points)
        k = _sided_count(ds.n_points, ratio)
        train = np.sort(perm[:k])
        test = np.sort(perm[k:])
    return Split(train_indices=train, test_indices=test, seed=seed, ratio=ratio)


# ---------------------------------------------------------------------------
# Bundled reference datasets
# ---------------------------------------------------------------------------

_DATA_PACKAGE = "cfshap.datasets"


def _dataset_dir() -> Path:
    return Path(resources.files(_DATA_PACKAGE))  # type: ignore[arg-type]


def builtin_names() -> tuple[str, ...]:
    """Names of the bundled datasets, in registry order."""
    return ("iris", "wine", "mobile")


def builtin_manifest(name: str) -> dict:
    """Parsed manifest (name, label column, class names, sha256) for a
    bundled dataset."""
    manifest_path = _dataset_dir() / f"{name}.json"
    if not manifest_path.is_file():
        raise DatasetError(f"unknown builtin dataset: {name!r}")
    with manifest_path.open(encoding="utf-8") as fh:
        return json.load(fh)


def load_builtin(name: str) -> Dataset:
    """Load a bundled dataset after verifying its checksum."""
    manifest = builtin_manifest(name)
    csv_path = _dataset_dir() / manifest["csv"]
    digest = hashlib.sha256(csv_path.read_bytes()).hexdigest()
    if digest != manifest["sha256"]:
        raise DatasetError(
            f"{name}: checksum mismatch (expected {manifest['sha256']}, got {digest})"
        )
    return load_csv(
        csv_path,
        label_column=manifest["label_column"],
        class_names=manifest["class_names"],
        name=manifest["name"],
    )
