"""Decision-tree build kernels.

Two interchangeable implementations of the same algorithm: a numba-
compiled scalar loop (hot path) and a vectorized numpy fallback. Both
produce bit-identical trees: candidate thresholds are midpoints of
consecutive distinct sorted values, splits are ranked by the proxy
``sum_child sum_class count^2 / n_child`` (maximizing it minimizes the
count-weighted child Gini), ties keep the first candidate scanned
(lowest feature index, then smallest threshold), and node partitions
are stable with respect to the incoming sample order.

Per-node feature subsets are pre-drawn into ``feat_pool`` (one row per
node id, already sorted ascending), so no randomness lives inside the
kernels and the two paths cannot diverge. ``pool_stride=0`` makes every
node share row 0 (the all-features case).

Tree arrays: ``feature < 0`` marks a leaf; internal nodes route
``x[feature] <= threshold`` to ``left``.
"""
import numpy as np

from .._accel import NUMBA_ENABLED, njit_maybe

LEAF = -1
NO_DEPTH_LIMIT = -1


@njit_maybe(cache=True)
def _build_tree_loop(X, y, sample_idx, feat_pool, pool_stride,
                     max_depth, min_samples_split,
                     feature, threshold, left, right, count0, count1):
    n = sample_idx.shape[0]
    work = sample_idx.copy()
    scratch = np.empty(n, dtype=np.int64)
    # stack rows: node id, start, end, depth
    stack = np.empty((n + 2, 4), dtype=np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    sp = 1
    node_count = 1
    m = feat_pool.shape[1]

    while sp > 0:
        sp -= 1
        node = stack[sp, 0]
        s = stack[sp, 1]
        e = stack[sp, 2]
        depth = stack[sp, 3]
        k = e - s

        c0 = 0
        c1 = 0
        for i in range(s, e):
            if y[work[i]] == 1:
                c1 += 1
            else:
                c0 += 1
        count0[node] = c0
        count1[node] = c1
        feature[node] = LEAF

        if c0 == 0 or c1 == 0 or k < min_samples_split:
            continue
        if max_depth != NO_DEPTH_LIMIT and depth >= max_depth:
            continue

        pool_row = node * pool_stride
        best_proxy = -1.0
        best_feat = LEAF
        best_thr = 0.0
        best_nl = 0
        vals = np.empty(k)
        for fi in range(m):
            f = feat_pool[pool_row, fi]
            for i in range(k):
                vals[i] = X[work[s + i], f]
            order = np.argsort(vals)
            l0 = 0
            l1 = 0
            for i in range(k - 1):
                if y[work[s + order[i]]] == 1:
                    l1 += 1
                else:
                    l0 += 1
                vi = vals[order[i]]
                vnext = vals[order[i + 1]]
                if vi != vnext:
                    nl = float(i + 1)
                    nr = float(k - i - 1)
                    fl0 = float(l0)
                    fl1 = float(l1)
                    fr0 = float(c0 - l0)
                    fr1 = float(c1 - l1)
                    proxy = (fl0 * fl0 + fl1 * fl1) / nl + (fr0 * fr0 + fr1 * fr1) / nr
                    if proxy > best_proxy:
                        thr = (vi + vnext) * 0.5
                        if thr >= vnext:
                            # midpoint rounded up to the right value
                            # (adjacent floats): fall back to the left one
                            thr = vi
                        best_proxy = proxy
                        best_feat = f
                        best_thr = thr
                        best_nl = i + 1

        if best_feat == LEAF:
            continue

        # stable partition of work[s:e] on x[best_feat] <= best_thr
        nl = 0
        nr = 0
        for i in range(s, e):
            idx = work[i]
            if X[idx, best_feat] <= best_thr:
                work[s + nl] = idx
                nl += 1
            else:
                scratch[nr] = idx
                nr += 1
        for i in range(nr):
            work[s + nl + i] = scratch[i]

        left_id = node_count
        right_id = node_count + 1
        node_count += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = left_id
        right[node] = right_id
        stack[sp, 0] = right_id
        stack[sp, 1] = s + best_nl
        stack[sp, 2] = e
        stack[sp, 3] = depth + 1
        sp += 1
        stack[sp, 0] = left_id
        stack[sp, 1] = s
        stack[sp, 2] = s + best_nl
        stack[sp, 3] = depth + 1
        sp += 1

    return node_count


def _build_tree_numpy(X, y, sample_idx, feat_pool, pool_stride,
                      max_depth, min_samples_split,
                      feature, threshold, left, right, count0, count1):
    """Vectorized twin of ``_build_tree_loop`` (same candidate order and
    float arithmetic, so results match the compiled path exactly)."""
    n = sample_idx.shape[0]
    work = sample_idx.copy()
    stack = [(0, 0, n, 0)]
    node_count = 1

    while stack:
        node, s, e, depth = stack.pop()
        idx = work[s:e]
        k = e - s
        labels = y[idx]
        c1 = int(labels.sum())
        c0 = k - c1
        count0[node] = c0
        count1[node] = c1
        feature[node] = LEAF

        if c0 == 0 or c1 == 0 or k < min_samples_split:
            continue
        if max_depth != NO_DEPTH_LIMIT and depth >= max_depth:
            continue

        pool_row = node * pool_stride
        best_proxy = -1.0
        best_feat = LEAF
        best_thr = 0.0
        best_nl = 0
        for f in feat_pool[pool_row]:
            vals = X[idx, f]
            order = np.argsort(vals)
            sv = vals[order]
            boundary = sv[:-1] != sv[1:]
            if not boundary.any():
                continue
            l1 = np.cumsum(y[idx[order]])[:-1].astype(np.float64)
            nl = np.arange(1, k, dtype=np.float64)
            nr = np.float64(k) - nl
            l0 = nl - l1
            r0 = np.float64(c0) - l0
            r1 = np.float64(c1) - l1
            proxy = (l0 * l0 + l1 * l1) / nl + (r0 * r0 + r1 * r1) / nr
            proxy[~boundary] = -np.inf
            j = int(np.argmax(proxy))
            if proxy[j] > best_proxy:
                thr = (sv[j] + sv[j + 1]) * 0.5
                if thr >= sv[j + 1]:
                    thr = sv[j]
                best_proxy = float(proxy[j])
                best_feat = int(f)
                best_thr = float(thr)
                best_nl = j + 1

        if best_feat == LEAF:
            continue

        mask = X[idx, best_feat] <= best_thr
        work[s:e] = np.concatenate([idx[mask], idx[~mask]])

        left_id = node_count
        right_id = node_count + 1
        node_count += 2
        feature[node] = best_feat
        threshold[node] = best_thr
        left[node] = left_id
        right[node] = right_id
        stack.append((right_id, s + best_nl, e, depth + 1))
        stack.append((left_id, s, s + best_nl, depth + 1))

    return node_count


def build_tree_arrays(X, y, sample_idx, feat_pool, pool_stride,
                      max_depth, min_samples_split, use_numba=None):
    """Run one tree build; returns the flat node arrays trimmed to size."""
    n = sample_idx.shape[0]
    max_nodes = 2 * n + 1
    feature = np.full(max_nodes, LEAF, dtype=np.int64)
    threshold = np.zeros(max_nodes, dtype=np.float64)
    left = np.full(max_nodes, LEAF, dtype=np.int64)
    right = np.full(max_nodes, LEAF, dtype=np.int64)
    count0 = np.zeros(max_nodes, dtype=np.int64)
    count1 = np.zeros(max_nodes, dtype=np.int64)

    if use_numba is None:
        use_numba = NUMBA_ENABLED
    impl = _build_tree_loop if use_numba and NUMBA_ENABLED else _build_tree_numpy
    node_count = impl(
        X, y, sample_idx, feat_pool, pool_stride,
        max_depth if max_depth is not None else NO_DEPTH_LIMIT,
        min_samples_split,
        feature, threshold, left, right, count0, count1,
    )
    sl = slice(0, node_count)
    return (feature[sl].copy(), threshold[sl].copy(), left[sl].copy(),
            right[sl].copy(), count0[sl].copy(), count1[sl].copy())


def descend(feature, threshold, left, right, X):
    """Leaf node id reached by each row of X."""
    pos = np.zeros(X.shape[0], dtype=np.int64)
    while True:
        f = feature[pos]
        internal = f >= 0
        if not internal.any():
            return pos
        rows = np.flatnonzero(internal)
        fr = f[rows]
        go_left = X[rows, fr] <= threshold[pos[rows]]
        pos[rows] = np.where(go_left, left[pos[rows]], right[pos[rows]])
