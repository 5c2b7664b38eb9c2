"""Model (de)serialization to JSON documents.

Trees serialize as nested split/leaf nodes; linear models and nets as
weight arrays plus their standardization parameters.
"""
import json

import numpy as np

from .forest import ForestModel
from .linear import LinearNeuron
from .net import NeuronNet
from .tree import DecisionTree


def _tree_to_nested(t: DecisionTree) -> dict:
    nodes = [None] * t.n_nodes
    # children have higher ids than parents, so build bottom-up
    for node in range(t.n_nodes - 1, -1, -1):
        c0, c1 = int(t.count0[node]), int(t.count1[node])
        total = c0 + c1
        if t.feature[node] < 0:
            nodes[node] = {
                "type": "leaf",
                "prediction": int(c1 > c0),
                "counts": [c0, c1],
                "distribution": [c0 / total, c1 / total],
            }
        else:
            nodes[node] = {
                "type": "split",
                "feature": int(t.feature[node]),
                "threshold": float(t.threshold[node]),
                "counts": [c0, c1],
                "left": nodes[int(t.left[node])],
                "right": nodes[int(t.right[node])],
            }
    return nodes[0]


def _nested_to_arrays(root: dict):
    feature, threshold, left, right, count0, count1 = [], [], [], [], [], []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        count0.append(0)
        count1.append(0)
        return len(feature) - 1

    stack = [(root, new_node())]
    while stack:
        node, idx = stack.pop()
        c0, c1 = (int(v) for v in node["counts"])
        count0[idx], count1[idx] = c0, c1
        if node["type"] == "split":
            feature[idx] = int(node["feature"])
            threshold[idx] = float(node["threshold"])
            left[idx] = new_node()
            right[idx] = new_node()
            stack.append((node["right"], right[idx]))
            stack.append((node["left"], left[idx]))
    return (np.asarray(feature, dtype=np.int64),
            np.asarray(threshold, dtype=np.float64),
            np.asarray(left, dtype=np.int64),
            np.asarray(right, dtype=np.int64),
            np.asarray(count0, dtype=np.int64),
            np.asarray(count1, dtype=np.int64))


def model_to_dict(model) -> dict:
    if isinstance(model, DecisionTree):
        return {"kind": "tree", "n_features": model.n_features,
                "params": model.params, "root": _tree_to_nested(model)}
    if isinstance(model, ForestModel):
        return {"kind": "forest", "params": model.params,
                "seed": model.seed, "tree_seeds": model.tree_seeds,
                "m": model.m, "bootstrap": model.bootstrap,
                "trees": [model_to_dict(t) for t in model.trees]}
    if isinstance(model, LinearNeuron):
        return {"kind": model.kind, "penalty": model.penalty, "lam": model.lam,
                "weights": model.weights.tolist(), "bias": model.bias,
                "standardization": {"mean": model.mean.tolist(),
                                    "scale": model.scale.tolist()},
                "converged": model.converged, "grad_norm": model.grad_norm,
                "iterations": model.iterations}
    if isinstance(model, NeuronNet):
        return {"kind": "net", "task": model.task,
                "activation": model.hidden_activation, "lam": model.lam,
                "weights": [W.tolist() for W in model.weights],
                "biases": [b.tolist() for b in model.biases],
                "standardization": {"mean": model.mean.tolist(),
                                    "scale": model.scale.tolist()},
                "converged": model.converged, "grad_norm": model.grad_norm,
                "iterations": model.iterations}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(doc: dict):
    kind = doc["kind"]
    if kind == "tree":
        arrays = _nested_to_arrays(doc["root"])
        return DecisionTree(*arrays, n_features=int(doc["n_features"]),
                            params=doc.get("params", {}))
    if kind == "forest":
        trees = [model_from_dict(t) for t in doc["trees"]]
        return ForestModel(trees, doc["seed"], doc["tree_seeds"],
                           doc["m"], doc["bootstrap"], doc.get("params", {}))
    if kind in ("ridge", "lasso", "logistic"):
        std = doc["standardization"]
        return LinearNeuron(np.asarray(doc["weights"]), doc["bias"],
                            np.asarray(std["mean"]), np.asarray(std["scale"]),
                            doc["penalty"], doc["lam"], kind,
                            doc.get("converged", True),
                            doc.get("grad_norm", 0.0),
                            doc.get("iterations", 0))
    if kind == "net":
        std = doc["standardization"]
        return NeuronNet([np.asarray(W) for W in doc["weights"]],
                         [np.asarray(b) for b in doc["biases"]],
                         doc["activation"], doc["task"],
                         np.asarray(std["mean"]), np.asarray(std["scale"]),
                         doc["lam"], doc.get("converged", True),
                         doc.get("grad_norm", 0.0), doc.get("iterations", 0))
    raise ValueError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
