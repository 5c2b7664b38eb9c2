"""Small fully-connected network trained by full-batch gradient descent
with backpropagation.

Every unit computes z = sum_i w_i x_i + b followed by an activation;
hidden layers default to tanh, the output layer is linear for regression
and a sigmoid link for classification. An empty architecture collapses
to the penalized linear models (same optimizer, same predictions).
"""
import math

import numpy as np

from .. import seeds
from ..errors import BadParams, NoConvergence, NonFiniteLoss
from .linear import (
    DEFAULT_SETTINGS,
    Standardizer,
    _check_xy,
    _softplus,
    fit_logistic,
    fit_penalized_linear,
    sigmoid,
)

INIT_SCALE = 0.1  # weights start in U(-0.1, 0.1); biases at zero


class NeuronNet:
    def __init__(self, weights, biases, hidden_activation, task,
                 mean, scale, lam, converged=True, grad_norm=0.0,
                 iterations=0, losses=None):
        self.weights = [np.asarray(W, dtype=np.float64) for W in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]
        self.hidden_activation = hidden_activation
        self.task = task
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)
        self.lam = float(lam)
        self.converged = bool(converged)
        self.grad_norm = float(grad_norm)
        self.iterations = int(iterations)
        self.losses = list(losses or [])

    @property
    def n_features(self) -> int:
        return self.weights[0].shape[0]

    @property
    def architecture(self) -> tuple:
        return tuple(W.shape[1] for W in self.weights[:-1])

    def _activate(self, Z):
        if self.hidden_activation == "tanh":
            return np.tanh(Z)
        if self.hidden_activation == "identity":
            return Z
        raise BadParams(f"unknown activation {self.hidden_activation!r}")

    def decision_value(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        A = (X - self.mean) / self.scale
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            A = self._activate(A @ W + b)
        W, b = self.weights[-1], self.biases[-1]
        # final layer is one unit wide; the vector path keeps degenerate
        # nets bit-identical to the plain linear models
        return A @ np.ascontiguousarray(W[:, 0]) + b[0]

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_value(X))

    def predict(self, X) -> np.ndarray:
        if self.task == "classification":
            return (self.predict_proba(X) >= 0.5).astype(np.int64)
        return self.decision_value(X)


def _shapes(d_in, hidden):
    dims = [d_in] + list(hidden) + [1]
    return list(zip(dims[:-1], dims[1:]))


def pack_params(weights, biases) -> np.ndarray:
    return np.concatenate([W.ravel() for W in weights] + list(biases))


def unpack_params(flat, shapes):
    weights, biases = [], []
    off = 0
    for din, dout in shapes:
        weights.append(flat[off:off + din * dout].reshape(din, dout))
        off += din * dout
    for _, dout in shapes:
        biases.append(flat[off:off + dout])
        off += dout
    return weights, biases


def net_loss_grad(flat, shapes, Xs, y, lam, activation, task):
    """Loss and flat gradient of the full network on standardized inputs."""
    weights, biases = unpack_params(flat, shapes)
    n = Xs.shape[0]
    acts = [Xs]
    A = Xs
    for W, b in zip(weights[:-1], biases[:-1]):
        Z = A @ W + b
        A = np.tanh(Z) if activation == "tanh" else Z
        acts.append(A)
    z = acts[-1] @ np.ascontiguousarray(weights[-1][:, 0]) + biases[-1][0]

    penalty = sum(float(W.ravel() @ W.ravel()) for W in weights)
    if task == "regression":
        r = z - y
        loss = float(r @ r) / n + lam * penalty
        delta = (2.0 / n) * r
    else:
        loss = float(np.mean(_softplus(z) - y * z)) + lam * penalty
        delta = (sigmoid(z) - y) / n

    gws = [None] * len(weights)
    gbs = [None] * len(weights)
    gws[-1] = acts[-1].T @ delta[:, None] + 2.0 * lam * weights[-1]
    gbs[-1] = np.array([delta.sum()])
    dA = np.outer(delta, weights[-1][:, 0])
    for layer in range(len(weights) - 2, -1, -1):
        A = acts[layer + 1]
        dZ = dA * (1.0 - A * A) if activation == "tanh" else dA
        gws[layer] = acts[layer].T @ dZ + 2.0 * lam * weights[layer]
        gbs[layer] = dZ.sum(axis=0)
        if layer > 0:
            dA = dZ @ weights[layer].T
    return loss, pack_params(gws, gbs)


def _flat_descent(x0, loss_grad, settings):
    lr = settings.learning_rate
    x = x0
    loss, g = loss_grad(x)
    if not math.isfinite(loss):
        raise NonFiniteLoss("initial loss is not finite")
    losses = [loss]
    gnorm = float(np.linalg.norm(g))
    it = 0
    for it in range(1, settings.max_iters + 1):
        if gnorm < settings.tol:
            return x, True, gnorm, it - 1, losses
        stepped = False
        while lr > 1e-20:
            x_new = x - lr * g
            new_loss, new_g = loss_grad(x_new)
            if math.isfinite(new_loss) and new_loss <= loss:
                x, loss, g = x_new, new_loss, new_g
                gnorm = float(np.linalg.norm(g))
                losses.append(loss)
                stepped = True
                break
            lr *= 0.5
        if not stepped:
            if not math.isfinite(loss):
                raise NonFiniteLoss("loss diverged; lower the learning rate")
            break
    return x, gnorm < settings.tol, gnorm, it, losses


def fit_neuron_net(X, y, hidden=(16,), activation: str = "tanh",
                   task: str = "classification", lam: float = 1e-3,
                   settings=DEFAULT_SETTINGS, seed: int = 0) -> NeuronNet:
    """Train the network; an empty ``hidden`` delegates to the matching
    penalized linear model and wraps its exact solution."""
    if task not in ("classification", "regression"):
        raise BadParams(f"task must be classification/regression, got {task!r}")
    if activation not in ("tanh", "identity"):
        raise BadParams(f"activation must be tanh/identity, got {activation!r}")
    hidden = tuple(int(h) for h in hidden)
    if any(h < 1 for h in hidden):
        raise BadParams("hidden sizes must be positive")

    if not hidden:
        if task == "regression":
            lin = fit_penalized_linear(X, y, penalty="l2", lam=lam, settings=settings)
        else:
            lin = fit_logistic(X, y, penalty="l2", lam=lam, settings=settings)
        return NeuronNet([lin.weights[:, None]], [np.array([lin.bias])],
                         "identity", task, lin.mean, lin.scale, lam,
                         lin.converged, lin.grad_norm, lin.iterations, lin.losses)

    X, y = _check_xy(X, y)
    std = Standardizer(X)
    Xs = std(X)
    shapes = _shapes(X.shape[1], hidden)
    rng = seeds.generator(seed, seeds.NET)
    weights = [rng.uniform(-INIT_SCALE, INIT_SCALE, size=s) for s in shapes]
    biases = [np.zeros(s[1]) for s in shapes]

    flat0 = pack_params(weights, biases)
    flat, converged, gnorm, iters, losses = _flat_descent(
        flat0, lambda v: net_loss_grad(v, shapes, Xs, y, lam, activation, task),
        settings)
    if not converged and settings.require_convergence:
        raise NoConvergence(gnorm, iters)
    weights, biases = unpack_params(flat, shapes)
    return NeuronNet(weights, biases, activation, task, std.mean, std.scale,
                     lam, converged, gnorm, iters, losses)
