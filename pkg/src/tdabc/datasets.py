"""Synthetic dataset generators, CSV ingestion, and the log-shift transform."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import MissingLabelColumn, ParseError, UnknownDataset


@dataclass(frozen=True)
class LabeledDataset:
    points: np.ndarray
    labels: np.ndarray
    name: str
    spec: dict = field(default_factory=dict)
    class_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        labs = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labs)
        if len(pts) != len(labs):
            raise ValueError("points and labels differ in length")
        if not self.class_names:
            n = int(labs.max()) + 1 if len(labs) else 0
            object.__setattr__(
                self, "class_names", tuple(str(c) for c in range(n))
            )

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_sizes(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.n_classes).tolist()


def make_circles(
    n_per_class: Sequence[int] = (25, 25), noise: float = 3.0, seed: int = 0
) -> LabeledDataset:
    """Two concentric circles, inner radius half the outer, jittered."""
    rng = np.random.default_rng(seed)
    chunks, labels = [], []
    for c, (n, radius) in enumerate(zip(n_per_class, (1.0, 0.5))):
        angles = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        ring = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        ring += rng.normal(scale=noise / 100.0, size=ring.shape)
        chunks.append(ring)
        labels.extend([c] * n)
    return LabeledDataset(
        np.vstack(chunks),
        np.array(labels),
        "circles",
        {"name": "circles", "n_per_class": list(n_per_class), "noise": noise, "seed": seed},
    )


def make_moons(
    n_per_class: Sequence[int] = (100, 100), noise: float = 10.0, seed: int = 0
) -> LabeledDataset:
    """Two interleaving half circles with Gaussian jitter."""
    rng = np.random.default_rng(seed)
    n0, n1 = n_per_class
    t0 = np.linspace(0.0, np.pi, n0)
    t1 = np.linspace(0.0, np.pi, n1)
    upper = np.column_stack([np.cos(t0), np.sin(t0)])
    lower = np.column_stack([1.0 - np.cos(t1), 0.5 - np.sin(t1)])
    pts = np.vstack([upper, lower])
    pts += rng.normal(scale=noise / 100.0, size=pts.shape)
    labels = np.array([0] * n0 + [1] * n1)
    return LabeledDataset(
        pts,
        labels,
        "moons",
        {"name": "moons", "n_per_class": list(n_per_class), "noise": noise, "seed": seed},
    )


def make_swissroll(
    n_per_class: int = 50, n_classes: int = 6, noise: float = 10.0, seed: int = 0
) -> LabeledDataset:
    """A rolled sheet in three dimensions, labeled by equal arc-length bands."""
    rng = np.random.default_rng(seed)
    t_lo, t_hi = 1.5 * np.pi, 4.5 * np.pi
    # Arc length of (t cos t, t sin t) grows like the integral of sqrt(1 + t^2).
    grid = np.linspace(t_lo, t_hi, 4096)
    speed = np.sqrt(1.0 + grid**2)
    arc = np.concatenate([[0.0], np.cumsum((speed[1:] + speed[:-1]) / 2.0 * np.diff(grid))])
    cuts = np.linspace(0.0, arc[-1], n_classes + 1)
    chunks, labels = [], []
    for c in range(n_classes):
        s = rng.uniform(cuts[c], cuts[c + 1], size=n_per_class)
        t = np.interp(s, arc, grid)
        height = rng.uniform(0.0, 10.0, size=n_per_class)
        pts = np.column_stack([t * np.cos(t), height, t * np.sin(t)])
        pts += rng.normal(scale=noise / 100.0, size=pts.shape)
        chunks.append(pts)
        labels.extend([c] * n_per_class)
    return LabeledDataset(
        np.vstack(chunks),
        np.array(labels),
        "swissroll",
        {
            "name": "swissroll",
            "n_per_class": n_per_class,
            "n_classes": n_classes,
            "noise": noise,
            "seed": seed,
        },
    )


def make_gaussian_classes(
    dims: int = 350,
    sizes: Sequence[int] = (60, 10, 50, 100, 80),
    means: Sequence[float] = (0.0, 0.3, 0.18, 0.67, 0.0),
    stdev: float = 0.3,
    seed: int = 0,
) -> LabeledDataset:
    """Axis-aligned Gaussian blobs, one per class, identical per-class means."""
    if len(sizes) != len(means):
        raise ValueError("sizes and means must align")
    rng = np.random.default_rng(seed)
    chunks, labels = [], []
    for c, (n, mu) in enumerate(zip(sizes, means)):
        chunks.append(rng.normal(loc=mu, scale=stdev, size=(n, dims)))
        labels.extend([c] * n)
    return LabeledDataset(
        np.vstack(chunks),
        np.array(labels),
        "normal",
        {
            "name": "normal",
            "dims": dims,
            "sizes": list(sizes),
            "means": list(means),
            "stdev": stdev,
            "seed": seed,
        },
    )


def make_sphere(
    sizes: Sequence[int] = (500, 100, 25, 16, 12),
    mean: float = 0.3,
    stdev: float = 0.147,
    seed: int = 0,
) -> LabeledDataset:
    """Concentric spherical shells with Gaussian radial noise."""
    rng = np.random.default_rng(seed)
    chunks, labels = [], []
    for c, n in enumerate(sizes):
        direction = rng.normal(size=(n, 3))
        direction /= np.maximum(np.linalg.norm(direction, axis=1, keepdims=True), 1e-30)
        radius = mean * (1.0 + c * stdev) + rng.normal(scale=stdev, size=(n, 1))
        chunks.append(direction * radius)
        labels.extend([c] * n)
    return LabeledDataset(
        np.vstack(chunks),
        np.array(labels),
        "sphere",
        {"name": "sphere", "sizes": list(sizes), "mean": mean, "stdev": stdev, "seed": seed},
    )


def make_imbalance_ramp(step: int, seed: int = 0) -> LabeledDataset:
    """Fixed positive blob against a negative blob growing 50 points per step."""
    if not 1 <= step <= 16:
        raise ValueError("step must be between 1 and 16")
    rng_pos = np.random.default_rng([seed, 0])
    rng_neg = np.random.default_rng([seed, 1])
    positive = rng_pos.normal(loc=0.0, scale=1.1, size=(50, 2))
    # One long draw, truncated per step, so later steps extend earlier ones.
    negative = rng_neg.normal(loc=2.0, scale=2.2, size=(800, 2))[: 50 * step]
    pts = np.vstack([positive, negative])
    labels = np.array([0] * len(positive) + [1] * len(negative))
    return LabeledDataset(
        pts,
        labels,
        f"ramp{step:02d}",
        {"name": "ramp", "step": step, "ratio": step, "seed": seed},
    )


def load_csv(path: str | Path, label_column: str = "label") -> LabeledDataset:
    """Numeric feature CSV with a header; labels factorized by sorted value."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise MissingLabelColumn(
                f"no column {label_column!r} in header {header}"
            )
        label_idx = header.index(label_column)
        feature_names = [h for i, h in enumerate(header) if i != label_idx]
        rows, raw_labels = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(row)}", row=lineno
                )
            feats = []
            for i, cell in enumerate(row):
                if i == label_idx:
                    continue
                try:
                    feats.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"non-numeric value {cell!r}", row=lineno, column=header[i]
                    ) from None
            rows.append(feats)
            raw_labels.append(row[label_idx].strip())
    classes = sorted(set(raw_labels))
    index = {c: i for i, c in enumerate(classes)}
    return LabeledDataset(
        np.array(rows, dtype=float),
        np.array([index[c] for c in raw_labels]),
        path.stem,
        {"name": path.stem, "source": str(path), "features": feature_names},
        class_names=tuple(classes),
    )


def log_shift(dataset: LabeledDataset) -> LabeledDataset:
    """Shift all coordinates above zero, then take the natural log."""
    shift = 1.0 - float(dataset.points.min())
    spec = dict(dataset.spec)
    spec["log_shift"] = shift
    return LabeledDataset(
        np.log(dataset.points + shift),
        dataset.labels,
        dataset.name,
        spec,
        class_names=dataset.class_names,
    )


def save_csv(dataset: LabeledDataset, path: str | Path) -> None:
    """Feature columns then a label column; floats written exactly."""
    path = Path(path)
    d = dataset.points.shape[1] if dataset.points.ndim == 2 else 1
    lines = [",".join([f"f{i}" for i in range(d)] + ["label"])]
    for row, lab in zip(dataset.points, dataset.labels):
        cells = [repr(float(x)) for x in np.atleast_1d(row)]
        cells.append(dataset.class_names[int(lab)])
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")


_BUNDLED = ("iris", "wine", "cancer")
# Datasets that need coordinates moved to log scale before distances.
LOG_SCALED = ("wine", "cancer")


def load_bundled(name: str) -> LabeledDataset:
    """One of the classic measurement tables shipped with the package."""
    if name not in _BUNDLED:
        raise UnknownDataset(f"no bundled dataset named {name!r}")
    ref = resources.files("tdabc").joinpath(f"data/{name}.csv")
    with resources.as_file(ref) as path:
        out = load_csv(path, label_column="label")
    return LabeledDataset(
        out.points,
        out.labels,
        name,
        {"name": name, "source": "bundled"},
        class_names=out.class_names,
    )
