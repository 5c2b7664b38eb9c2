"""Penalized linear models: ridge/lasso regression and logistic
classification on internally standardized features.

Ridge and logistic minimize their empirical loss plus an L2 weight
penalty by full-batch gradient descent with backtracking halving (the
recorded loss trajectory is non-increasing). Lasso uses cyclic
coordinate descent with soft-thresholding. The bias is never penalized.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import BadParams, NoConvergence, NonFiniteData

L2, L1, NONE = "l2", "l1", "none"


@dataclass(frozen=True)
class OptimizerSettings:
    learning_rate: float = 0.1
    max_iters: int = 10000
    tol: float = 1e-8
    require_convergence: bool = False


DEFAULT_SETTINGS = OptimizerSettings()


class Standardizer:
    def __init__(self, X):
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std == 0.0, 1.0, std)

    def __call__(self, X):
        return (X - self.mean) / self.scale


class LinearNeuron:
    """Affine unit z = w.x + b over standardized inputs.

    ``kind`` is one of ridge/lasso/logistic; logistic instances classify
    through a sigmoid link (class 1 iff sigma(z) >= 0.5), the others
    predict the continuous target.
    """

    def __init__(self, weights, bias, mean, scale, penalty, lam, kind,
                 converged, grad_norm, iterations, losses=None):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)
        self.penalty = penalty
        self.lam = float(lam)
        self.kind = kind
        self.converged = bool(converged)
        self.grad_norm = float(grad_norm)
        self.iterations = int(iterations)
        self.losses = list(losses or [])

    @property
    def task(self) -> str:
        return "classification" if self.kind == "logistic" else "regression"

    @property
    def n_features(self) -> int:
        return self.weights.shape[0]

    def decision_value(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return ((X - self.mean) / self.scale) @ self.weights + self.bias

    def predict_value(self, X) -> np.ndarray:
        return self.decision_value(X)

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_value(X))

    def predict(self, X) -> np.ndarray:
        if self.kind == "logistic":
            return (self.predict_proba(X) >= 0.5).astype(np.int64)
        return self.decision_value(X)


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softplus(z):
    return np.log1p(np.exp(-np.abs(z))) + np.maximum(z, 0.0)


def _check_xy(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise BadParams("need a non-empty (n, d) feature matrix")
    if y.shape != (X.shape[0],):
        raise BadParams("target must align with rows")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise NonFiniteData("features/target contain non-finite values")
    return X, y


def penalized_mse_loss_grad(w, b, Xs, y, lam):
    """mean((Xs w + b - y)^2) + lam * w.w, with gradients."""
    n = Xs.shape[0]
    r = Xs @ w + b - y
    loss = float(r @ r) / n + lam * float(w @ w)
    gw = (2.0 / n) * (Xs.T @ r) + 2.0 * lam * w
    gb = 2.0 * float(r.mean())
    return loss, gw, gb


def logistic_loss_grad(w, b, Xs, y, lam):
    """mean logistic loss + lam * w.w, with gradients (y in {0,1})."""
    n = Xs.shape[0]
    z = Xs @ w + b
    loss = float(np.mean(_softplus(z) - y * z)) + lam * float(w @ w)
    resid = sigmoid(z) - y
    gw = (Xs.T @ resid) / n + 2.0 * lam * w
    gb = float(resid.mean())
    return loss, gw, gb


def _gradient_descent(w, b, loss_grad, settings, l1_lam=0.0):
    """Backtracking gradient descent; optional soft-threshold (proximal)
    step when l1_lam > 0. Returns (w, b, converged, gnorm, iters, losses)."""
    lr = settings.learning_rate

    def objective(wv, bv):
        loss, gw, gb = loss_grad(wv, bv)
        if l1_lam > 0.0:
            loss += l1_lam * float(np.abs(wv).sum())
        return loss, gw, gb

    loss, gw, gb = objective(w, b)
    losses = [loss]
    gnorm = math.sqrt(float(gw @ gw) + gb * gb)
    it = 0
    for it in range(1, settings.max_iters + 1):
        if l1_lam == 0.0 and gnorm < settings.tol:
            return w, b, True, gnorm, it - 1, losses
        stepped = False
        while lr > 1e-20:
            w_new = w - lr * gw
            b_new = b - lr * gb
            if l1_lam > 0.0:
                w_new = np.sign(w_new) * np.maximum(np.abs(w_new) - lr * l1_lam, 0.0)
            new_loss, new_gw, new_gb = objective(w_new, b_new)
            if math.isfinite(new_loss) and new_loss <= loss:
                if l1_lam > 0.0 and abs(new_loss - loss) < settings.tol * max(1.0, abs(loss)):
                    # proximal path: objective has stalled
                    losses.append(new_loss)
                    return w_new, b_new, True, 0.0, it, losses
                w, b, loss, gw, gb = w_new, b_new, new_loss, new_gw, new_gb
                gnorm = math.sqrt(float(gw @ gw) + gb * gb)
                losses.append(loss)
                stepped = True
                break
            lr *= 0.5
        if not stepped:
            break
    converged = l1_lam == 0.0 and gnorm < settings.tol
    return w, b, converged, gnorm, it, losses


def fit_penalized_linear(X, y, penalty: str = L2, lam: float = 1e-3,
                         settings: OptimizerSettings = DEFAULT_SETTINGS) -> LinearNeuron:
    """Least-squares fit with an L2 (gradient descent) or L1 (coordinate
    descent) weight penalty; lam=0 plus 'none' gives plain least squares."""
    X, y = _check_xy(X, y)
    if lam < 0:
        raise BadParams("penalty strength must be >= 0")
    if penalty not in (L2, L1, NONE):
        raise BadParams(f"penalty must be one of {L2}/{L1}/{NONE}")
    std = Standardizer(X)
    Xs = std(X)
    d = X.shape[1]

    if penalty == L1:
        w, b, converged, gnorm, iters = _lasso_cd(Xs, y, lam, settings)
        losses = []
    else:
        eff_lam = lam if penalty == L2 else 0.0
        w0 = np.zeros(d)
        b0 = float(y.mean())
        w, b, converged, gnorm, iters, losses = _gradient_descent(
            w0, b0, lambda wv, bv: penalized_mse_loss_grad(wv, bv, Xs, y, eff_lam),
            settings)
    if not converged and settings.require_convergence:
        raise NoConvergence(gnorm, iters)
    return LinearNeuron(w, b, std.mean, std.scale, penalty, lam,
                        "lasso" if penalty == L1 else "ridge",
                        converged, gnorm, iters, losses)


def _lasso_cd(Xs, y, lam, settings):
    """Cyclic coordinate descent with soft-thresholding on
    (1/n)||y - b - Xs w||^2 + lam * ||w||_1; the bias stays at mean(y)
    because standardized columns have zero mean."""
    n, d = Xs.shape
    b = float(y.mean())
    w = np.zeros(d)
    resid = y - b  # y - b - Xs @ w with w = 0
    a = (2.0 / n) * np.einsum("ij,ij->j", Xs, Xs)
    max_delta = np.inf
    sweep = 0
    for sweep in range(1, settings.max_iters + 1):
        max_delta = 0.0
        for j in range(d):
            if a[j] == 0.0:
                continue
            c = (2.0 / n) * float(Xs[:, j] @ resid) + a[j] * w[j]
            new_wj = math.copysign(max(abs(c) - lam, 0.0), c) / a[j]
            delta = new_wj - w[j]
            if delta != 0.0:
                resid -= Xs[:, j] * delta
                w[j] = new_wj
                max_delta = max(max_delta, abs(delta))
        if max_delta < settings.tol:
            return w, b, True, max_delta, sweep
    return w, b, False, max_delta, sweep


def fit_logistic(X, y, penalty: str = L2, lam: float = 1e-3,
                 settings: OptimizerSettings = DEFAULT_SETTINGS) -> LinearNeuron:
    """Penalized logistic regression by (proximal, for L1) gradient descent."""
    X, y = _check_xy(X, y)
    if not np.isin(y, (0.0, 1.0)).all():
        raise BadParams("logistic targets must be 0/1")
    if lam < 0:
        raise BadParams("penalty strength must be >= 0")
    if penalty not in (L2, L1, NONE):
        raise BadParams(f"penalty must be one of {L2}/{L1}/{NONE}")
    std = Standardizer(X)
    Xs = std(X)
    d = X.shape[1]
    smooth_lam = lam if penalty == L2 else 0.0
    l1_lam = lam if penalty == L1 else 0.0
    w, b, converged, gnorm, iters, losses = _gradient_descent(
        np.zeros(d), 0.0,
        lambda wv, bv: logistic_loss_grad(wv, bv, Xs, y, smooth_lam),
        settings, l1_lam=l1_lam)
    if not converged and settings.require_convergence:
        raise NoConvergence(gnorm, iters)
    return LinearNeuron(w, b, std.mean, std.scale, penalty, lam, "logistic",
                        converged, gnorm, iters, losses)


def classify_by_sign(values, convention) -> np.ndarray:
    """Threshold a regression prediction of the stability index into the
    encoded label the given convention assigns to its sign."""
    return convention.expected_codes(np.asarray(values, dtype=np.float64)).astype(np.int64)
