"""Model evaluation: accuracy + confusion matrix for classifiers,
RMSE + R^2 for regressors."""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyTestSet, SchemaMismatch


@dataclass(frozen=True)
class Metrics:
    task: str
    n: int
    accuracy: float | None = None
    confusion: tuple | None = None  # ((tn, fp), (fn, tp)): rows true, cols predicted
    rmse: float | None = None
    r2: float | None = None

    def to_json_dict(self) -> dict:
        out = {"task": self.task, "n": self.n}
        if self.task == "classification":
            out["accuracy"] = self.accuracy
            out["confusion"] = [list(row) for row in self.confusion]
        else:
            out["rmse"] = self.rmse
            out["r2"] = self.r2
        return out


def classification_metrics(y_true, y_pred) -> Metrics:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    n = y_true.size
    tn = int(((y_true == 0) & (y_pred == 0)).sum())
    fp = int(((y_true == 0) & (y_pred == 1)).sum())
    fn = int(((y_true == 1) & (y_pred == 0)).sum())
    tp = int(((y_true == 1) & (y_pred == 1)).sum())
    return Metrics(task="classification", n=n,
                   accuracy=(tp + tn) / n,
                   confusion=((tn, fp), (fn, tp)))


def regression_metrics(y_true, y_pred) -> Metrics:
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    n = y_true.size
    resid = y_pred - y_true
    ss_res = float(resid @ resid)
    dev = y_true - y_true.mean()
    ss_tot = float(dev @ dev)
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res == 0.0 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return Metrics(task="regression", n=n,
                   rmse=math.sqrt(ss_res / n), r2=r2)


def evaluate(model, X, y) -> Metrics:
    """Score a fitted model (classification or regression by its task)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyTestSet("need a non-empty test set")
    n_features = getattr(model, "n_features", X.shape[1])
    if X.shape[1] != n_features:
        raise SchemaMismatch(f"model expects {n_features} features, got {X.shape[1]}")
    pred = model.predict(X)
    if model.task == "classification":
        return classification_metrics(y, pred)
    return regression_metrics(y, pred)
