"""From-scratch predictors: Gini decision tree, random forest, penalized
linear/logistic regression, and a small neural network."""
from .forest import ForestModel, fit_forest
from .io import load_model, model_from_dict, model_to_dict, save_model
from .linear import (
    LinearNeuron,
    OptimizerSettings,
    classify_by_sign,
    fit_logistic,
    fit_penalized_linear,
)
from .metrics import Metrics, classification_metrics, evaluate, regression_metrics
from .net import NeuronNet, fit_neuron_net
from .tree import DecisionTree, fit_tree, gini

__all__ = [
    "DecisionTree", "ForestModel", "LinearNeuron", "Metrics", "NeuronNet",
    "OptimizerSettings", "classify_by_sign", "classification_metrics",
    "evaluate", "fit_forest", "fit_logistic", "fit_neuron_net",
    "fit_penalized_linear", "fit_tree", "gini", "load_model",
    "model_from_dict", "model_to_dict", "regression_metrics", "save_model",
]
