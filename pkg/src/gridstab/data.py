"""Star-grid stability dataset: schema, CSV ingestion/validation, label
encoding, and train/test splitting.

The on-disk format is a plain CSV with the fixed column order
``tau1..tau4, p1..p4, g1..g4, stab, stabf``. ``stabf`` holds the
categorical label (``stable``/``unstable``, case-insensitive on read,
lowercase on write); all other columns are decimal-point floats.
Row numbers in error reports are 0-based data rows (the header is not
counted).
"""
import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import seeds
from .errors import (
    BadFraction,
    EmptyDataset,
    HeaderMismatch,
    InvariantViolation,
    MissingFile,
    RowParseError,
    TooFewSamples,
    UnknownLabel,
)

FEATURES = [
    "tau1", "tau2", "tau3", "tau4",
    "p1", "p2", "p3", "p4",
    "g1", "g2", "g3", "g4",
]
COLUMNS = FEATURES + ["stab", "stabf"]

STABLE, UNSTABLE = "stable", "unstable"

TAU_MIN, TAU_MAX = 0.5, 10.0
P_SUPPLY_MIN, P_SUPPLY_MAX = 1.5, 6.0
P_CONSUME_MIN, P_CONSUME_MAX = -2.0, -0.5
G_MIN, G_MAX = 0.05, 1.0
BALANCE_RTOL = 1e-6  # |p1+p2+p3+p4| <= BALANCE_RTOL * |p1|

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class LabelConvention:
    """Maps the sign of the stability index to a label.

    ``positive_is_stable=True`` labels a positive index ``stable``;
    ``zero_policy`` names the label an exactly-zero index receives.
    The integer encoding is fixed either way: stable=1, unstable=0.
    """

    positive_is_stable: bool = True
    zero_policy: str = STABLE

    def __post_init__(self):
        if self.zero_policy not in (STABLE, UNSTABLE):
            raise ValueError(f"zero_policy must be {STABLE!r} or {UNSTABLE!r}")

    @staticmethod
    def paper() -> "LabelConvention":
        return LabelConvention(positive_is_stable=True, zero_policy=STABLE)

    @staticmethod
    def inverse() -> "LabelConvention":
        return LabelConvention(positive_is_stable=False, zero_policy=STABLE)

    @staticmethod
    def named(name: str) -> "LabelConvention":
        if name == "paper":
            return LabelConvention.paper()
        if name == "inverse":
            return LabelConvention.inverse()
        raise ValueError(f"unknown label convention {name!r}")

    def label_for_index(self, value: float) -> str:
        if value == 0.0:
            return self.zero_policy
        if value > 0:
            return STABLE if self.positive_is_stable else UNSTABLE
        return UNSTABLE if self.positive_is_stable else STABLE

    def encode(self, label: str) -> int:
        if label == STABLE:
            return 1
        if label == UNSTABLE:
            return 0
        raise UnknownLabel(label, -1)

    def decode(self, code: int) -> str:
        if code == 1:
            return STABLE
        if code == 0:
            return UNSTABLE
        raise UnknownLabel(code, -1)

    def expected_codes(self, stab: np.ndarray) -> np.ndarray:
        """Encoded label each stab value should carry under this convention."""
        pos = 1 if self.positive_is_stable else 0
        out = np.where(stab > 0, pos, 1 - pos).astype(np.uint8)
        out[stab == 0.0] = self.encode(self.zero_policy)
        return out


@dataclass(frozen=True)
class GridSample:
    """One dataset row: 12 features, stability index, categorical label."""

    tau1: float; tau2: float; tau3: float; tau4: float
    p1: float; p2: float; p3: float; p4: float
    g1: float; g2: float; g3: float; g4: float
    stab: float
    label: str


class Dataset:
    """Immutable in-memory dataset.

    Arrays are flagged read-only after construction, so a Dataset can be
    shared freely across threads/partitions.
    """

    def __init__(self, features, stab, labels01, provenance="", issues=None):
        features = np.ascontiguousarray(features, dtype=np.float64)
        stab = np.ascontiguousarray(stab, dtype=np.float64)
        labels01 = np.ascontiguousarray(labels01, dtype=np.uint8)
        if features.ndim != 2 or features.shape[1] != len(FEATURES):
            raise ValueError(f"features must be (n, {len(FEATURES)})")
        n = features.shape[0]
        if stab.shape != (n,) or labels01.shape != (n,):
            raise ValueError("stab/labels length mismatch")
        for arr in (features, stab, labels01):
            arr.setflags(write=False)
        self.features = features
        self.stab = stab
        self.labels01 = labels01
        self.provenance = provenance
        self.schema_version = SCHEMA_VERSION
        self.issues = list(issues or [])

    def __len__(self) -> int:
        return self.features.shape[0]

    def sample(self, i: int) -> GridSample:
        row = self.features[i]
        return GridSample(*map(float, row), float(self.stab[i]),
                          STABLE if self.labels01[i] else UNSTABLE)

    def take(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.stab[idx], self.labels01[idx],
                       provenance=self.provenance)

    def labels(self) -> list:
        return [STABLE if v else UNSTABLE for v in self.labels01]

    def to_csv_bytes(self) -> bytes:
        buf = io.StringIO()
        buf.write(",".join(COLUMNS) + "\n")
        for i in range(len(self)):
            cells = [repr(float(v)) for v in self.features[i]]
            cells.append(repr(float(self.stab[i])))
            cells.append(STABLE if self.labels01[i] else UNSTABLE)
            buf.write(",".join(cells) + "\n")
        return buf.getvalue().encode("utf-8")


def validate_rows(features, stab, labels01, convention: LabelConvention):
    """Vectorized row checks; returns a list of (row, rule) violations."""
    tau = features[:, 0:4]
    p = features[:, 4:8]
    g = features[:, 8:12]
    checks = [
        ("tau out of range [0.5, 10.0]",
         np.all((tau >= TAU_MIN) & (tau <= TAU_MAX), axis=1)),
        ("p1 out of range [1.5, 6.0]",
         (p[:, 0] >= P_SUPPLY_MIN) & (p[:, 0] <= P_SUPPLY_MAX)),
        ("p2..p4 out of range [-2.0, -0.5]",
         np.all((p[:, 1:] >= P_CONSUME_MIN) & (p[:, 1:] <= P_CONSUME_MAX), axis=1)),
        ("g out of range [0.05, 1.0]",
         np.all((g >= G_MIN) & (g <= G_MAX), axis=1)),
        ("power balance violated",
         np.abs(p.sum(axis=1)) <= BALANCE_RTOL * np.abs(p[:, 0])),
        ("label inconsistent with sign(stab)",
         labels01 == convention.expected_codes(stab)),
    ]
    violations = []
    for rule, ok in checks:
        for row in np.flatnonzero(~ok):
            violations.append((int(row), rule))
    violations.sort()
    return violations


def load_csv(path, convention: LabelConvention | None = None,
             lenient: bool = False) -> Dataset:
    """Load and validate a dataset CSV.

    Strict mode (default) fails atomically: any parse error or invariant
    violation raises and no dataset is returned. Lenient mode drops bad
    rows and records them in ``Dataset.issues`` as (row, rule) pairs.
    """
    convention = convention or LabelConvention.paper()
    if not os.path.isfile(path):
        raise MissingFile(f"no such file: {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderMismatch(COLUMNS, []) from None
        if header != COLUMNS:
            raise HeaderMismatch(COLUMNS, header)

        rows, labels, issues = [], [], []
        for i, cells in enumerate(reader):
            if len(cells) != len(COLUMNS):
                if lenient:
                    issues.append((i, "wrong cell count"))
                    continue
                raise RowParseError(i, "<row>", f"expected {len(COLUMNS)} cells, got {len(cells)}")
            try:
                values = [float(c) for c in cells[:13]]
            except ValueError:
                j = next(k for k, c in enumerate(cells[:13]) if not _is_float(c))
                if lenient:
                    issues.append((i, f"unparseable value in {COLUMNS[j]}"))
                    continue
                raise RowParseError(i, COLUMNS[j], f"cannot parse {cells[j]!r} as float") from None
            raw_label = cells[13].strip().lower()
            if raw_label not in (STABLE, UNSTABLE):
                if lenient:
                    issues.append((i, f"unknown label {cells[13]!r}"))
                    continue
                raise UnknownLabel(cells[13], i)
            rows.append(values)
            labels.append(1 if raw_label == STABLE else 0)

    if not rows:
        raise EmptyDataset(f"{path}: no usable data rows")
    arr = np.asarray(rows, dtype=np.float64)
    features, stab = arr[:, :12], arr[:, 12]
    labels01 = np.asarray(labels, dtype=np.uint8)

    violations = validate_rows(features, stab, labels01, convention)
    if violations and not lenient:
        raise InvariantViolation(violations)
    if violations:
        bad = np.asarray(sorted({r for r, _ in violations}), dtype=np.int64)
        keep = np.setdiff1d(np.arange(len(rows)), bad)
        issues.extend(violations)
        if keep.size == 0:
            raise EmptyDataset(f"{path}: all rows dropped in lenient mode")
        features, stab, labels01 = features[keep], stab[keep], labels01[keep]
    issues.sort()
    return Dataset(features, stab, labels01, provenance=str(path), issues=issues)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def save_csv(ds: Dataset, path) -> None:
    with open(path, "wb") as fh:
        fh.write(ds.to_csv_bytes())


def encode_labels(ds, convention: LabelConvention) -> np.ndarray:
    """Encode labels to integers (stable=1, unstable=0).

    Accepts a Dataset or any sequence of label strings.
    """
    if isinstance(ds, Dataset):
        return ds.labels01.astype(np.int64)
    out = np.empty(len(ds), dtype=np.int64)
    for i, label in enumerate(ds):
        if label not in (STABLE, UNSTABLE):
            raise UnknownLabel(label, i)
        out[i] = convention.encode(label)
    return out


def decode_labels(codes, convention: LabelConvention) -> list:
    return [convention.decode(int(c)) for c in codes]


def split(ds: Dataset, test_fraction: float, seed: int):
    """Deterministic disjoint train/test split; test gets ceil(n*f) rows.

    Row order within each part follows the original dataset order. When
    ceil(n*f) would leave the train side empty, the test side is clamped
    to n-1 so both parts stay usable.
    """
    n = len(ds)
    if not 0.0 < test_fraction < 1.0:
        raise BadFraction(f"test_fraction must be in (0,1), got {test_fraction}")
    if n < 2:
        raise TooFewSamples(f"need at least 2 samples, got {n}")
    n_test = math.ceil(n * test_fraction)
    if n_test >= n:
        n_test = n - 1
    perm = seeds.generator(seed, seeds.SPLIT).permutation(n)
    test_idx = np.sort(perm[:n_test])
    train_idx = np.sort(perm[n_test:])
    return ds.take(train_idx), ds.take(test_idx)
