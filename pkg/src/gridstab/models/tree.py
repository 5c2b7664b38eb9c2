"""Gini-impurity decision tree for binary classification.

Splitting is greedy: at each node the (feature, threshold) pair with the
lowest count-weighted child Gini wins, candidate thresholds being the
midpoints of consecutive distinct sorted feature values. Ties go to the
lowest feature index, then the smallest threshold.
"""
import numpy as np

from ..errors import EmptyNode, EmptyTrainingSet
from . import _split_kernels as K


def gini(counts) -> float:
    """Gini impurity 1 - sum(p_i^2) of a class-count vector."""
    c = np.asarray(counts, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise EmptyNode("counts must be a non-empty 1-D vector")
    if (c < 0).any():
        raise ValueError("counts must be non-negative")
    total = c.sum()
    if total < 1:
        raise EmptyNode("total count must be >= 1")
    p = c / total
    return float(1.0 - (p @ p))


class DecisionTree:
    """Fitted tree over flat node arrays (feature < 0 marks a leaf)."""

    task = "classification"

    def __init__(self, feature, threshold, left, right, count0, count1,
                 n_features, params):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.count0 = count0
        self.count1 = count1
        self.n_features = n_features
        self.params = dict(params)

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        leaf = K.descend(self.feature, self.threshold, self.left, self.right, X)
        return (self.count1[leaf] > self.count0[leaf]).astype(np.int64)

    def leaf_distribution(self, X) -> np.ndarray:
        """Per-row (p0, p1) class distribution of the reached leaf."""
        X = np.asarray(X, dtype=np.float64)
        leaf = K.descend(self.feature, self.threshold, self.left, self.right, X)
        c0 = self.count0[leaf].astype(np.float64)
        c1 = self.count1[leaf].astype(np.float64)
        total = c0 + c1
        return np.stack([c0 / total, c1 / total], axis=1)

    def max_depth_reached(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                depth[self.left[node]] = depth[node] + 1
                depth[self.right[node]] = depth[node] + 1
        return int(depth.max()) if self.n_nodes else 0


def _check_training_set(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyTrainingSet("need a non-empty (n, d) feature matrix")
    if y.shape != (X.shape[0],):
        raise EmptyTrainingSet("labels must align with rows")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    return X, y


def fit_tree(X, y, max_depth: int | None = 10, min_samples_split: int = 2,
             use_numba=None) -> DecisionTree:
    """Fit a tree on all features at every node."""
    X, y = _check_training_set(X, y)
    n, d = X.shape
    all_feats = np.arange(d, dtype=np.int64)[None, :]
    arrays = K.build_tree_arrays(
        X, y, np.arange(n, dtype=np.int64), all_feats, 0,
        max_depth, min_samples_split, use_numba=use_numba)
    return DecisionTree(*arrays, n_features=d,
                        params={"max_depth": max_depth,
                                "min_samples_split": min_samples_split})
