"""The XOR task and tabular benchmark loaders.

Benchmark files are user-supplied text tables (see data/MANIFEST.md for the
expected shapes); loaders drop incomplete rows, map class labels to dense
indices and keep per-column statistics available for encoder construction.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ClassTooSmall, EmptyDataset, MalformedCase, ParseError

MISSING_TOKENS = {"?", ""}


@dataclass
class TabularDataset:
    name: str
    features: np.ndarray  # (n_samples, n_features)
    labels: np.ndarray  # (n_samples,) dense class indices
    class_names: list
    split_tag: str = "all"
    dropped_rows: int = 0

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise ValueError("features and labels must align")
        if len(self.features) == 0:
            raise EmptyDataset(f"{self.name}: no usable rows")
        if not np.isfinite(self.features).all():
            raise ValueError("features must be finite after cleaning")
        if self.labels.min() < 0 or self.labels.max() >= len(self.class_names):
            raise ValueError("labels out of range")
        mins, maxs = self.features.min(axis=0), self.features.max(axis=0)
        if np.any(mins >= maxs):
            raise ValueError("every feature column needs min < max")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def column_stats(self):
        """(mins, maxs) per feature column."""
        return self.features.min(axis=0), self.features.max(axis=0)

    def subset(self, idx, split_tag: str) -> "TabularDataset":
        return TabularDataset(
            self.name,
            self.features[idx].copy(),
            self.labels[idx].copy(),
            list(self.class_names),
            split_tag,
        )


def load_xor() -> TabularDataset:
    """The 4 XOR points; equal bits are class 0, unequal class 1."""
    feats = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    labels = np.array([0, 1, 1, 0])
    return TabularDataset("xor", feats, labels, ["same", "different"])


@dataclass
class CsvSchema:
    """Column roles for a text table: which column holds the label, which the features."""

    label_col: int = -1
    feature_cols: list = None  # default: every other column
    delimiter: str = ","  # None = any whitespace
    has_header: bool = False
    missing_tokens: set = field(default_factory=lambda: set(MISSING_TOKENS))


def load_csv(path, schema: CsvSchema = None, name: str = None) -> TabularDataset:
    """Parse one sample per row; incomplete rows are dropped and counted.

    Class labels map to dense indices in first-appearance order. Raises
    OSError if the file cannot be read, ParseError (with line number) on a
    non-numeric feature cell, EmptyDataset if nothing survives cleaning.
    """
    schema = schema or CsvSchema()
    rows, labels, dropped = [], [], 0
    with open(path) as fh:
        lines = fh.readlines()
    start = 1 if schema.has_header else 0
    for lineno, line in enumerate(lines[start:], start=start + 1):
        line = line.strip()
        if not line:
            continue
        cells = [c.strip() for c in line.split(schema.delimiter)]
        label_idx = schema.label_col if schema.label_col >= 0 else len(cells) + schema.label_col
        feat_idx = schema.feature_cols
        if feat_idx is None:
            feat_idx = [i for i in range(len(cells)) if i != label_idx]
        try:
            picked = [cells[i] for i in feat_idx] + [cells[label_idx]]
        except IndexError:
            raise ParseError("row has too few columns", line=lineno) from None
        if any(c in schema.missing_tokens for c in picked):
            dropped += 1
            continue
        try:
            rows.append([float(cells[i]) for i in feat_idx])
        except ValueError:
            raise ParseError("non-numeric feature cell", line=lineno) from None
        labels.append(cells[label_idx])
    if not rows:
        raise EmptyDataset(f"{path}: no usable rows")
    class_names = list(dict.fromkeys(labels))
    index = {c: i for i, c in enumerate(class_names)}
    ds = TabularDataset(
        name or str(path),
        np.asarray(rows, dtype=float),
        np.array([index[c] for c in labels]),
        class_names,
    )
    ds.dropped_rows = dropped
    return ds


def landsat_average_pixel(case) -> np.ndarray:
    """Collapse a 3x3-pixel, 4-band case to one average pixel (4 features)."""
    case = np.asarray(case, dtype=float)
    if case.shape != (36,):
        raise MalformedCase(f"expected 36 values (9 pixels x 4 bands), got {case.shape}")
    return case.reshape(9, 4).mean(axis=0)


def load_landsat(train_path, test_path) -> tuple:
    """The shipped train/test split, with each case reduced to its average pixel.

    Label values are mapped to dense indices in sorted order taken from the
    training file so both splits agree.
    """
    schema = CsvSchema(label_col=-1, delimiter=None)
    raw_train = load_csv(train_path, schema, name="landsat")
    raw_test = load_csv(test_path, schema, name="landsat")
    order = sorted(raw_train.class_names, key=float)
    remap = {name: i for i, name in enumerate(order)}
    for raw, tag in ((raw_train, "train"), (raw_test, "test")):
        if raw.features.shape[1] != 36:
            raise MalformedCase(f"landsat {tag} split must have 36 bands per case")
        if any(c not in remap for c in raw.class_names):
            raise ParseError(f"landsat {tag} split has labels missing from the train split")
    out = []
    for raw, tag in ((raw_train, "train"), (raw_test, "test")):
        feats = raw.features.reshape(-1, 9, 4).mean(axis=1)
        labels = np.array([remap[raw.class_names[l]] for l in raw.labels])
        out.append(TabularDataset("landsat", feats, labels, order, tag))
    return tuple(out)


def dump_csv(dataset: TabularDataset, path, delimiter: str = ",") -> None:
    """Write the cleaned dataset back out, one sample per row, label last."""
    sep = delimiter if delimiter is not None else " "
    with open(path, "w") as fh:
        for row, label in zip(dataset.features, dataset.labels):
            cells = [f"{v:g}" for v in row] + [str(dataset.class_names[label])]
            fh.write(sep.join(cells) + "\n")


def split(dataset: TabularDataset, ratio: float, seed) -> tuple:
    """Stratified random split, deterministic per seed, disjoint and exhaustive."""
    if not 0 < ratio < 1:
        raise ValueError("ratio must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for c in range(dataset.n_classes):
        members = np.flatnonzero(dataset.labels == c)
        if len(members) < 2:
            raise ClassTooSmall(f"class {dataset.class_names[c]} has {len(members)} sample(s)")
        members = rng.permutation(members)
        k = int(round(ratio * len(members)))
        k = min(max(k, 1), len(members) - 1)
        train_idx.extend(members[:k])
        test_idx.extend(members[k:])
    return (
        dataset.subset(np.sort(train_idx), "train"),
        dataset.subset(np.sort(test_idx), "test"),
    )


def stratified_subset(dataset: TabularDataset, n: int, seed) -> TabularDataset:
    """About n samples, class proportions preserved (at least one per class)."""
    if n >= len(dataset):
        return dataset
    rng = np.random.default_rng(seed)
    picked = []
    for c in range(dataset.n_classes):
        members = np.flatnonzero(dataset.labels == c)
        k = max(1, int(round(n * len(members) / len(dataset))))
        picked.extend(rng.permutation(members)[:k])
    return dataset.subset(np.sort(picked), dataset.split_tag + f"-sub{n}")
