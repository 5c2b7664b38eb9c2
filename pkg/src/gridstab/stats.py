"""Feature-engineering statistics: per-column summaries, correlation and
p-value based feature importance, and histograms."""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .data import Dataset, FEATURES
from .errors import (
    BadBinCount,
    DegenerateInput,
    EmptyDataset,
    EmptyInput,
    LengthMismatch,
    ZeroVariance,
)

# above this sample count the Student-t tail is replaced by the normal
# approximation (absolute error < 1e-4 there)
NORMAL_APPROX_N = 1000


@dataclass(frozen=True)
class FeatureSummary:
    name: str
    count: int
    min: float
    max: float


@dataclass(frozen=True)
class FeatureImportance:
    name: str
    p_value: float
    correlation: float
    important: bool


@dataclass(frozen=True)
class Histogram:
    edges: tuple
    counts: tuple

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("histogram edges must be strictly increasing")


def summarize(ds: Dataset) -> list:
    """Count/min/max for each of the 12 features plus the stability index."""
    if len(ds) == 0:
        raise EmptyDataset("cannot summarize an empty dataset")
    n = len(ds)
    out = []
    for j, name in enumerate(FEATURES):
        col = ds.features[:, j]
        out.append(FeatureSummary(name, n, float(col.min()), float(col.max())))
    out.append(FeatureSummary("stab", n, float(ds.stab.min()), float(ds.stab.max())))
    return out


def pearson(x, y) -> float:
    """Pearson correlation coefficient, clipped to [-1, 1]."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"shapes {x.shape} vs {y.shape}")
    if x.size < 3:
        raise DegenerateInput(f"need at least 3 points, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVariance("constant input vector")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def p_value(r: float, n: int) -> float:
    """Two-tailed p-value for H0: rho=0 given a sample correlation.

    Uses t = r*sqrt((n-2)/(1-r^2)) with a Student-t tail via the
    regularized incomplete beta for n <= 1000 and the normal
    approximation above that.
    """
    if n < 3:
        raise DegenerateInput(f"need n >= 3, got {n}")
    if not -1.0 < r < 1.0:
        raise DegenerateInput(f"|r| must be < 1, got {r}")
    if r == 0.0:
        return 1.0
    nu = n - 2
    t2 = r * r * nu / (1.0 - r * r)
    if n <= NORMAL_APPROX_N:
        return float(betainc(nu / 2.0, 0.5, nu / (nu + t2)))
    return math.erfc(math.sqrt(t2 / 2.0))


def importance_table(ds: Dataset, alpha: float = 0.05,
                     target: str = "stab") -> list:
    """Correlation + p-value per feature; important iff p < alpha.

    ``target`` selects the correlate: the continuous stability index
    (default) or the encoded binary label (point-biserial).
    """
    if len(ds) == 0:
        raise EmptyDataset("cannot rank features of an empty dataset")
    if target == "stab":
        y = ds.stab
    elif target == "label":
        y = ds.labels01.astype(np.float64)
    else:
        raise ValueError(f"target must be 'stab' or 'label', got {target!r}")
    out = []
    for j, name in enumerate(FEATURES):
        r = pearson(ds.features[:, j], y)
        p = 0.0 if abs(r) >= 1.0 else p_value(r, len(ds))
        out.append(FeatureImportance(name, p, r, bool(p < alpha)))
    return out


def histogram(values, bins: int) -> Histogram:
    """Uniform-width histogram over [min, max]; last bin right-closed."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise EmptyInput("cannot histogram an empty vector")
    if bins < 1:
        raise BadBinCount(f"need bins >= 1, got {bins}")
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        # degenerate span: center a unit-wide range, matching numpy
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return Histogram(tuple(float(e) for e in edges),
                     tuple(int(c) for c in counts))
