"""Dataset loading, normalization and cross-validation splits.

Loaders produce dense :class:`Dataset` objects with labels in {-1, +1}.
Two text formats are supported: LIBSVM/svmlight sparse lines and
delimited tables (UCI style, ``?`` for missing cells).
"""

from __future__ import annotations

import enum
import io
import json
import math
import os
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import (
    DimensionError,
    EmptyDatasetError,
    InvalidLabelError,
    ParseError,
    StratificationError,
)

STD_FLOOR = 1e-12

#: Default label mapping covering LIBSVM and UCI conventions.
DEFAULT_LABEL_MAP = {1.0: 1, -1.0: -1, 0.0: -1, 2.0: -1}


@dataclass
class Dataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int8)
        if self.X.ndim != 2:
            raise DimensionError(f"feature matrix must be 2-D, got shape {self.X.shape}")
        if self.X.shape[0] != self.y.shape[0]:
            raise DimensionError(f"{self.X.shape[0]} rows but {self.y.shape[0]} labels")
        if not np.all((self.y == 1) | (self.y == -1)):
            raise InvalidLabelError("labels must be -1 or +1")

    def __len__(self):
        return self.X.shape[0]

    @property
    def dimension(self):
        return self.X.shape[1]

    @property
    def n_pos(self):
        return int(np.count_nonzero(self.y == 1))

    @property
    def n_neg(self):
        return int(np.count_nonzero(self.y == -1))

    @property
    def imbalance_ratio(self):
        """``n_pos / n_neg`` (``inf`` without negatives)."""
        n_neg = self.n_neg
        return self.n_pos / n_neg if n_neg else math.inf

    def subset(self, indices):
        return Dataset(self.name, self.X[indices], self.y[indices], dict(self.meta))

    def with_bias(self):
        """Copy with a constant-1 feature appended."""
        X = np.hstack([self.X, np.ones((len(self), 1))])
        return Dataset(self.name, X, self.y.copy(), dict(self.meta, bias=True))


# ---------------------------------------------------------------------------
# text sources

def _read_text(source):
    """Accept a path, raw bytes/str, or an open text/binary file."""
    if isinstance(source, (bytes, bytearray)):
        return bytes(source).decode("utf-8")
    if isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source
                                           and os.path.exists(source)):
        return Path(source).read_text(encoding="utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _map_label(token, label_map, line):
    if label_map is None:
        label_map = DEFAULT_LABEL_MAP
    if token in label_map:
        value = label_map[token]
    else:
        try:
            num = float(token)
        except ValueError:
            raise InvalidLabelError(f"line {line}: unmappable label {token!r}") from None
        if num in label_map:
            value = label_map[num]
        elif str(num) in label_map:
            value = label_map[str(num)]
        else:
            raise InvalidLabelError(f"line {line}: unmappable label {token!r}")
    if value not in (1, -1):
        raise InvalidLabelError(f"label map sends {token!r} to {value!r}, not -1/+1")
    return int(value)


def _coerce_label_map(label_map):
    """JSON label maps have string keys; numeric strings also match by value."""
    if label_map is None:
        return None
    out = {}
    for key, value in label_map.items():
        out[key] = int(value)
        if isinstance(key, str):
            try:
                out[float(key)] = int(value)
            except ValueError:
                pass
    return out


# ---------------------------------------------------------------------------
# LIBSVM

def load_libsvm(source, name="libsvm", label_map=None, n_features=None, add_bias=False):
    """Parse LIBSVM text into a dense dataset.

    Each non-empty line is ``<label> <index>:<value> ...`` with 1-based,
    strictly increasing indices. ``#`` starts a comment. Absent indices
    are zero; the dimension is the largest index seen unless
    ``n_features`` is given.
    """
    text = _read_text(source)
    label_map = _coerce_label_map(label_map)
    labels, rows = [], []
    max_index = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        labels.append(_map_label(tokens[0], label_map, lineno))
        idx, vals = [], []
        prev = 0
        for tok in tokens[1:]:
            key, sep, val = tok.partition(":")
            if not sep:
                raise ParseError(f"expected <index>:<value>, got {tok!r}", lineno)
            try:
                i = int(key)
                v = float(val)
            except ValueError:
                raise ParseError(f"non-numeric token {tok!r}", lineno) from None
            if i < 1:
                raise ParseError(f"indices are 1-based, got {i}", lineno)
            if i <= prev:
                raise ParseError(f"indices must be strictly increasing ({prev} then {i})", lineno)
            if not math.isfinite(v):
                raise ParseError(f"non-finite value {val!r}", lineno)
            prev = i
            idx.append(i - 1)
            vals.append(v)
        max_index = max(max_index, prev)
        rows.append((idx, vals))
    if not rows:
        raise EmptyDatasetError(f"{name}: no samples in LIBSVM source")
    dim = max_index if n_features is None else int(n_features)
    if max_index > dim:
        raise DimensionError(f"{name}: index {max_index} exceeds n_features={dim}")
    if dim < 1:
        raise EmptyDatasetError(f"{name}: samples carry no features")
    X = np.zeros((len(rows), dim))
    for r, (idx, vals) in enumerate(rows):
        X[r, idx] = vals
    ds = Dataset(name, X, np.array(labels), {"format": "libsvm"})
    return ds.with_bias() if add_bias else ds


def dump_libsvm(dataset, fp=None):
    """Write ``dataset`` as LIBSVM text with round-trip float precision.

    Returns the text when ``fp`` is None.
    """
    out = io.StringIO() if fp is None else fp
    for row, label in zip(dataset.X, dataset.y):
        parts = ["+1" if label == 1 else "-1"]
        parts.extend(f"{j + 1}:{v!r}" for j, v in enumerate(row.tolist()) if v != 0.0)
        out.write(" ".join(parts) + "\n")
    if fp is None:
        return out.getvalue()
    return None


# ---------------------------------------------------------------------------
# delimited tables

class MissingPolicy(str, enum.Enum):
    DROP_ROWS = "drop_rows"
    DROP_COLUMN = "drop_column"


def load_delimited(
    source,
    label_column=-1,
    missing_policy=MissingPolicy.DROP_ROWS,
    *,
    missing_column=None,
    name="delimited",
    delimiter=",",
    header=False,
    missing_token="?",
    ignore_columns=(),
    label_map=None,
    add_bias=False,
):
    """Parse a delimited table into a dense dataset.

    Parameters
    ----------
    label_column : int or str
        Column index (negative counts from the end) or header name.
    missing_policy : MissingPolicy
        ``DROP_ROWS`` removes every row holding ``missing_token``.
        ``DROP_COLUMN`` first removes ``missing_column`` and then drops
        rows that are still incomplete.
    delimiter : str or None
        ``None`` splits on runs of whitespace.
    missing_token : str or None
        ``None`` disables missing-value detection.
    ignore_columns : sequence of int or str
        Identifier columns to discard before anything else.

    Feature columns that are not entirely numeric are ordinal-encoded by
    the sorted order of their distinct values.
    """
    missing_policy = MissingPolicy(missing_policy)
    text = _read_text(source)
    label_map = _coerce_label_map(label_map)
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    names = None
    if header:
        if not lines:
            raise EmptyDatasetError(f"{name}: empty delimited source")
        names = [c.strip() for c in _split(lines[0][1], delimiter)]
        lines = lines[1:]
    if not lines:
        raise EmptyDatasetError(f"{name}: no data rows")

    rows, linenos = [], []
    width = None
    for lineno, line in lines:
        cells = [c.strip() for c in _split(line, delimiter)]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"expected {width} columns, got {len(cells)}", lineno)
        rows.append(cells)
        linenos.append(lineno)
    if names is not None and len(names) != width:
        raise ParseError(f"header has {len(names)} columns, data has {width}", 1)

    def resolve(col):
        if isinstance(col, str) and not col.lstrip("-").isdigit():
            if names is None or col not in names:
                raise KeyError(f"{name}: unknown column {col!r}")
            return names.index(col)
        col = int(col)
        if not -width <= col < width:
            raise KeyError(f"{name}: column {col} out of range for {width} columns")
        return col % width

    label_idx = resolve(label_column)
    drop = {resolve(c) for c in ignore_columns}
    if missing_policy is MissingPolicy.DROP_COLUMN:
        if missing_column is None:
            raise ValueError("DROP_COLUMN needs missing_column")
        drop.add(resolve(missing_column))
    if label_idx in drop:
        raise ValueError(f"{name}: label column is also being dropped")
    feat_idx = [j for j in range(width) if j != label_idx and j not in drop]
    if not feat_idx:
        raise EmptyDatasetError(f"{name}: no feature columns remain")

    kept, kept_lines = [], []
    n_dropped = 0
    for cells, lineno in zip(rows, linenos):
        if missing_token is not None and any(
            cells[j] == missing_token for j in feat_idx + [label_idx]
        ):
            n_dropped += 1
            continue
        kept.append(cells)
        kept_lines.append(lineno)
    if not kept:
        raise EmptyDatasetError(f"{name}: all {len(rows)} rows dropped by the missing-value policy")

    y = np.array([_map_label(c[label_idx], label_map, ln) for c, ln in zip(kept, kept_lines)])
    X = np.empty((len(kept), len(feat_idx)))
    encoded = {}
    for out_j, j in enumerate(feat_idx):
        col = [c[j] for c in kept]
        try:
            X[:, out_j] = [float(v) for v in col]
        except ValueError:
            levels = sorted(set(col))
            codes = {v: i for i, v in enumerate(levels)}
            X[:, out_j] = [codes[v] for v in col]
            encoded[j] = levels
    if not np.all(np.isfinite(X)):
        raise ParseError(f"{name}: non-finite feature values")
    meta = {"format": "delimited", "rows_read": len(rows), "rows_dropped": n_dropped,
            "ordinal_columns": sorted(encoded)}
    ds = Dataset(name, X, y, meta)
    return ds.with_bias() if add_bias else ds


def _split(line, delimiter):
    return line.split() if delimiter is None else line.split(delimiter)


# ---------------------------------------------------------------------------
# z-score normalization

@dataclass(frozen=True)
class NormalizationStats:
    mean: np.ndarray
    stddev: np.ndarray
    constant: np.ndarray

    @property
    def dim(self):
        return self.mean.shape[0]


def zscore_fit(X):
    """Per-feature mean and population standard deviation of ``X``.

    Columns with zero spread get the floor ``STD_FLOOR`` as their
    deviation and are flagged constant; :func:`zscore_apply` maps them
    to zero.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError(f"need at least 2 samples to fit normalization, got shape {X.shape}")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    constant = (np.ptp(X, axis=0) == 0.0) | (std < STD_FLOOR)
    std = np.where(constant, STD_FLOOR, np.maximum(std, STD_FLOOR))
    return NormalizationStats(mean, std, constant)


def zscore_apply(stats, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != stats.dim:
        raise DimensionError(f"expected {stats.dim} features, got shape {X.shape}")
    Z = (X - stats.mean) / stats.stddev
    Z[:, stats.constant] = 0.0
    return Z


# ---------------------------------------------------------------------------
# cross-validation splits

@dataclass(frozen=True)
class FoldSplit:
    run_index: int
    fold_index: int
    train_indices: np.ndarray
    test_indices: np.ndarray


def fold_rng(seed, dataset_name, run_index):
    """Generator seeded only by (global seed, dataset identity, run)."""
    tag = zlib.crc32(str(dataset_name).encode("utf-8"))
    return np.random.default_rng([int(seed), tag, int(run_index)])


def make_folds(y, seed, runs=10, dataset_name=""):
    """Stratified, seeded 2-fold splits for ``runs`` repetitions.

    Within a run the two halves swap train/test roles. Each class is
    shuffled and split in half; when a class has an odd count its extra
    sample alternates between halves so fold sizes differ by at most 1.
    Index arrays are in shuffled (stream) order.

    Parameters
    ----------
    y : array-like of {-1, +1} or Dataset
    """
    if isinstance(y, Dataset):
        dataset_name = dataset_name or y.name
        y = y.y
    y = np.asarray(y)
    if y.shape[0] < 2:
        raise StratificationError("need at least 2 samples for 2-fold splits")
    classes = [np.flatnonzero(y == -1), np.flatnonzero(y == 1)]
    if any(c.size == 0 for c in classes):
        raise StratificationError(
            f"stratified folds need both classes (n-={classes[0].size}, n+={classes[1].size})"
        )
    splits = []
    for run in range(runs):
        rng = fold_rng(seed, dataset_name, run)
        halves = [[], []]
        extra_to = 0
        for members in classes:
            perm = rng.permutation(members)
            cut = perm.size // 2
            if perm.size % 2:
                cut += 1 - extra_to
                extra_to = 1 - extra_to
            halves[0].append(perm[:cut])
            halves[1].append(perm[cut:])
        a = rng.permutation(np.concatenate(halves[0]))
        b = rng.permutation(np.concatenate(halves[1]))
        splits.append(FoldSplit(run, 0, a, b))
        splits.append(FoldSplit(run, 1, b, a))
    return splits


# ---------------------------------------------------------------------------
# registry

REGISTRY_ENV = "PATER_DATA_DIR"
_DEFAULT_REGISTRY = Path(__file__).with_name("registry.json")


@dataclass
class RegistryEntry:
    name: str
    path: str | None
    format: str = "delimited"
    label_column: int | str = -1
    missing_policy: str = "drop_rows"
    missing_column: int | str | None = None
    delimiter: str | None = ","
    header: bool = False
    missing_token: str | None = "?"
    ignore_columns: list = field(default_factory=list)
    label_map: dict | None = None
    expected_cases: int | None = None
    expected_features: int | None = None
    expected_ratio: float | None = None

    @classmethod
    def from_dict(cls, d):
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"registry entry {d.get('name')!r}: unknown keys {sorted(unknown)}")
        return cls(**d)


def load_registry(path=None):
    """Read a registry file (JSON list of entries). Defaults to the bundled one."""
    path = Path(path) if path is not None else _DEFAULT_REGISTRY
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    entries = raw["datasets"] if isinstance(raw, dict) else raw
    return {e["name"]: RegistryEntry.from_dict(e) for e in entries}


def data_root(root=None):
    if root is not None:
        return Path(root)
    return Path(os.environ.get(REGISTRY_ENV, "."))


def entry_path(entry, root=None):
    if entry.path is None:
        return None
    p = Path(entry.path)
    return p if p.is_absolute() else data_root(root) / p


def load_entry(entry, root=None, add_bias=False):
    path = entry_path(entry, root)
    if path is None or not path.exists():
        raise FileNotFoundError(f"{entry.name}: data file {path} not found")
    if entry.format == "libsvm":
        return load_libsvm(path, name=entry.name, label_map=entry.label_map, add_bias=add_bias)
    if entry.format != "delimited":
        raise ValueError(f"{entry.name}: unknown format {entry.format!r}")
    return load_delimited(
        path,
        label_column=entry.label_column,
        missing_policy=entry.missing_policy,
        missing_column=entry.missing_column,
        name=entry.name,
        delimiter=entry.delimiter,
        header=entry.header,
        missing_token=entry.missing_token,
        ignore_columns=entry.ignore_columns,
        label_map=entry.label_map,
        add_bias=add_bias,
    )


def verify_entry(dataset, entry):
    """Compare a loaded dataset against the registry expectations.

    Returns a list of human-readable mismatches (empty when consistent).
    The ratio is compared after rounding to two decimals.
    """
    problems = []
    if entry.expected_cases is not None and len(dataset) != entry.expected_cases:
        problems.append(f"#cases {len(dataset)} != expected {entry.expected_cases}")
    if entry.expected_features is not None and dataset.dimension != entry.expected_features:
        problems.append(f"#features {dataset.dimension} != expected {entry.expected_features}")
    if entry.expected_ratio is not None:
        ratio = round(dataset.imbalance_ratio, 2)
        if abs(ratio - entry.expected_ratio) > 1e-9:
            problems.append(f"ratio {dataset.imbalance_ratio:.4f} != expected {entry.expected_ratio}")
    return problems
