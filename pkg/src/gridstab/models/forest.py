"""Random forest: bootstrap-resampled Gini trees with per-split feature
subsampling and majority voting (ties predict class 0).

All randomness is pre-drawn per tree from streams derived of
(seed, tree index), so trees can be built in any order (or concurrently)
with bit-identical results.
"""
import numpy as np

from .. import seeds
from ..errors import BadParams
from . import _split_kernels as K
from .tree import DecisionTree, _check_training_set


class ForestModel:
    task = "classification"

    def __init__(self, trees, seed, tree_seeds, m, bootstrap, params):
        self.trees = list(trees)
        self.seed = seed
        self.tree_seeds = list(tree_seeds)
        self.m = m
        self.bootstrap = bootstrap
        self.params = dict(params)

    @property
    def n_features(self) -> int:
        return self.trees[0].n_features

    def votes(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        total = np.zeros(X.shape[0], dtype=np.int64)
        for t in self.trees:
            total += t.predict(X)
        return total

    def predict(self, X) -> np.ndarray:
        v = self.votes(X)
        # strict majority for class 1; ties fall to class 0
        return (2 * v > len(self.trees)).astype(np.int64)


def _feature_pool(rng, rows: int, d: int, m: int) -> np.ndarray:
    """Pre-drawn sorted m-subsets of features, one row per prospective node."""
    u = rng.random((rows, d))
    return np.sort(np.argsort(u, axis=1)[:, :m], axis=1).astype(np.int64)


def fit_forest(X, y, n_trees: int = 100, m: int = 3,
               max_depth: int | None = 10, min_samples_split: int = 2,
               seed: int = 0, bootstrap: bool = True,
               use_numba=None) -> ForestModel:
    X, y = _check_training_set(X, y)
    n, d = X.shape
    if n < 2:
        raise BadParams("need at least 2 samples")
    if not 1 <= m <= d:
        raise BadParams(f"features per split must be in [1, {d}], got {m}")
    if n_trees < 1:
        raise BadParams("need at least one tree")

    trees = []
    tree_seeds = []
    for i in range(n_trees):
        rng = seeds.generator(seed, seeds.TREE, i)
        tree_seeds.append(seeds.derive_int(seed, seeds.TREE, i))
        if bootstrap:
            sample_idx = rng.integers(0, n, n, dtype=np.int64)
        else:
            sample_idx = np.arange(n, dtype=np.int64)
        if m == d:
            pool, stride = np.arange(d, dtype=np.int64)[None, :], 0
        else:
            pool, stride = _feature_pool(rng, 2 * n + 1, d, m), 1
        arrays = K.build_tree_arrays(X, y, sample_idx, pool, stride,
                                     max_depth, min_samples_split,
                                     use_numba=use_numba)
        trees.append(DecisionTree(*arrays, n_features=d,
                                  params={"max_depth": max_depth,
                                          "min_samples_split": min_samples_split}))
    return ForestModel(trees, seed, tree_seeds, m, bootstrap,
                       params={"n_trees": n_trees, "m": m,
                               "max_depth": max_depth,
                               "min_samples_split": min_samples_split,
                               "bootstrap": bootstrap, "seed": seed})
