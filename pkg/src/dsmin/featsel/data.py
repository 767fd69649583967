"""Categorical datasets: csv and sparse-binary ingestion, one-hot expansion.

Features and labels are stored as small integer codes.  ``groups[j]`` names
the source attribute a feature came from; one-hot expansion keeps that link
so classifiers can fold indicators back into one categorical variable.
"""

import csv
import gzip
import io
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

MAX_ARITY = 10_000
MISSING = ("?", "missing", "")


class ParseError(ValueError):
    """Malformed input line."""


class IngestionError(ValueError):
    """Input that parses but cannot be represented (e.g. too many categories)."""


@dataclass
class Dataset:
    """``X[i, j]`` is the category code of feature ``j`` on row ``i``."""

    X: np.ndarray
    y: np.ndarray
    arities: np.ndarray
    feature_names: list
    class_names: list
    groups: np.ndarray = None
    categories: list = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.int64)
        self.y = np.asarray(self.y, dtype=np.int64)
        self.arities = np.asarray(self.arities, dtype=np.int64)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.shape[0]:
            raise IngestionError("feature matrix and labels disagree in length")
        if self.X.shape[0] < 1:
            raise IngestionError("dataset has no rows")
        if self.groups is None:
            self.groups = np.arange(self.X.shape[1])
        self.groups = np.asarray(self.groups, dtype=np.int64)
        self.columns = np.ascontiguousarray(self.X.T)

    @property
    def N(self):
        return self.X.shape[0]

    @property
    def n(self):
        return self.X.shape[1]

    @property
    def n_classes(self):
        return len(self.class_names)

    def subset_features(self, cols):
        """Dataset restricted to the listed feature columns."""
        cols = list(cols)
        cats = None if self.categories is None else [self.categories[j] for j in cols]
        return Dataset(
            self.X[:, cols], self.y, self.arities[cols], [self.feature_names[j] for j in cols],
            list(self.class_names), self.groups[cols], cats, self.name,
        )


def _encode(values):
    cats = sorted(set(values))
    if len(cats) > MAX_ARITY:
        raise IngestionError(f"column has {len(cats)} categories (> {MAX_ARITY})")
    index = {c: i for i, c in enumerate(cats)}
    return np.array([index[v] for v in values], dtype=np.int64), cats


def _read_text(path):
    path = str(path)
    if path.endswith(".gz"):
        with gzip.open(path, "rt", newline="") as fh:
            return fh.read()
    with open(path, newline="") as fh:
        return fh.read()


def parse_csv(text, label=None, name=""):
    """Categorical csv with a header row; ``label`` defaults to ``class`` or the first column."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty csv")
    header = [h.strip() for h in rows[0]]
    if label is None:
        label = "class" if "class" in header else header[0]
    if label not in header:
        raise ParseError(f"label column {label!r} not in header")
    li = header.index(label)
    body = []
    for lineno, row in enumerate(rows[1:], 2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        body.append([c.strip() for c in row])
    if not body:
        raise IngestionError("csv has no data rows")
    feats = [i for i in range(len(header)) if i != li]
    y, classes = _encode([r[li] for r in body])
    cols, cats = [], []
    for i in feats:
        codes, c = _encode([r[i] for r in body])
        cols.append(codes)
        cats.append(c)
    X = np.stack(cols, axis=1) if cols else np.zeros((len(body), 0), dtype=np.int64)
    return Dataset(X, y, [len(c) for c in cats], [header[i] for i in feats], classes, None, cats, name)


def parse_sparse(text, n_features=None, name=""):
    """Lines ``label idx:1 idx:1 ...``; listed indices are the features set to 1."""
    labels, rows = [], []
    width = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        parts = line.split()
        labels.append(parts[0])
        idx = []
        for tok in parts[1:]:
            key, sep, val = tok.partition(":")
            try:
                j = int(key)
                x = float(val) if sep else 1.0
            except ValueError:
                raise ParseError(f"line {lineno}: bad token {tok!r}") from None
            if j < 0 or x not in (0.0, 1.0):
                raise ParseError(f"line {lineno}: expected binary 'idx:1', got {tok!r}")
            if x == 1.0:
                idx.append(j)
                width = max(width, j + 1)
        rows.append(idx)
    if not rows:
        raise IngestionError("no data lines")
    n = width if n_features is None else int(n_features)
    if width > n:
        raise ParseError(f"feature index {width - 1} exceeds n_features={n}")
    X = np.zeros((len(rows), n), dtype=np.int64)
    for r, idx in enumerate(rows):
        X[r, idx] = 1
    try:
        keys = sorted(set(labels), key=float)
    except ValueError:
        keys = sorted(set(labels))
    y = np.array([keys.index(v) for v in labels])
    names = [str(j) for j in range(n)]
    cats = [["0", "1"]] * n
    return Dataset(X, y, np.full(n, 2), names, [_label_name(k) for k in keys], None, cats, name)


def _label_name(k):
    try:
        return f"{float(k):g}"
    except ValueError:
        return k


def load_dataset(path, format="csv", **kw):
    """Read a csv (``format='csv'``) or sparse-binary (``'sparse'``) file; ``.gz`` is fine."""
    text = _read_text(path)
    if format == "csv":
        return parse_csv(text, name=str(path), **kw)
    if format in ("sparse", "sparse-binary", "libsvm"):
        return parse_sparse(text, name=str(path), **kw)
    raise ValueError(f"unknown format {format!r}")


def one_hot(data, drop_missing=True):
    """Binary indicator per observed category; ``groups`` records the source column.

    Missing-value categories (``?``, ``missing``) get no indicator when
    ``drop_missing`` is set, so a missing value reads as all zeros.
    """
    cols, names, groups, cats = [], [], [], []
    for j in range(data.n):
        values = data.categories[j] if data.categories else [str(c) for c in range(data.arities[j])]
        for c, label in enumerate(values):
            if drop_missing and label in MISSING:
                continue
            col = (data.X[:, j] == c).astype(np.int64)
            if not col.any():
                continue
            cols.append(col)
            names.append(f"{data.feature_names[j]}={label}")
            groups.append(j)
            cats.append(["0", "1"])
    X = np.stack(cols, axis=1)
    return Dataset(X, data.y, np.full(len(cols), 2), names, list(data.class_names), groups, cats, data.name)


def _bundled(name):
    with resources.files("dsmin.featsel").joinpath("data", name).open("rb") as fh:
        return gzip.decompress(fh.read()).decode()


def load_mushroom(binary=True, drop_missing=True):
    """UCI Mushroom (8124 rows); one-hot gives 116 indicators with missing dropped."""
    data = parse_csv(_bundled("mushroom.csv.gz"), label="class", name="mushroom")
    return one_hot(data, drop_missing) if binary else data


def load_adult(binary=True, drop_missing=True):
    """UCI Adult training split (32561 rows), pre-binned; one-hot gives 123 indicators."""
    data = parse_csv(_bundled("adult.csv.gz"), label="class", name="adult")
    return one_hot(data, drop_missing) if binary else data


def load_named(name):
    """``mushroom``/``adult`` or ``path[:format]``."""
    if name == "mushroom":
        return load_mushroom()
    if name == "adult":
        return load_adult()
    path, _, fmt = name.partition("::")
    return load_dataset(path, fmt or ("sparse" if path.endswith((".svm", ".libsvm")) else "csv"))
