"""Desk-scale hypergraph convolution: the vertex->hyperedge->vertex propagation
operator, a multi-layer forward pass, and a small softmax classifier trained by
full-batch gradient descent.

Everything is dense float64 numpy; determinism comes from seeded
initialization and single-threaded full-batch updates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import UncoveredVertexError
from .hypergraph import Hypergraph

_ACTIVATIONS = ("identity", "relu")


@dataclass(frozen=True)
class ConvLayer:
    """One convolution layer: a learnable linear transform plus an activation."""

    weight: np.ndarray
    activation: str = "identity"

    def __post_init__(self) -> None:
        w = np.asarray(self.weight, dtype=float)
        if w.ndim != 2:
            raise ValueError(f"layer weight must be 2-D, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("layer weight must be finite")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"activation must be one of {_ACTIVATIONS}, got {self.activation!r}")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weight", w)


def _apply_activation(name: str, z: np.ndarray) -> np.ndarray:
    if name == "relu":
        return np.maximum(z, 0.0)
    return z


def propagation_operator(h: Hypergraph) -> np.ndarray:
    """Symmetric diffusion P = Dv^-1/2 H W De^-1 H^T Dv^-1/2.

    H^T averages vertex signals into hyperedges (De^-1), H pushes them back
    weighted by W, and the Dv^-1/2 factors on both sides keep P symmetric with
    spectrum inside [-1, 1]. Every vertex must sit in at least one hyperedge,
    otherwise its degree normalization divides by zero.
    """
    degrees = np.array([float(d) for d in h.vertex_degrees()])
    uncovered = np.flatnonzero(degrees == 0.0)
    if uncovered.size:
        raise UncoveredVertexError(
            f"vertex {int(uncovered[0])} belongs to no hyperedge; "
            "apply ensure_coverage before building the propagation operator"
        )
    incidence = h.incidence()
    edge_scale = np.array(
        [float(w) / len(e) for w, e in zip(h.weights, h.hyperedges)]
    )
    inv_sqrt = 1.0 / np.sqrt(degrees)
    core = (incidence * edge_scale) @ incidence.T
    return core * np.outer(inv_sqrt, inv_sqrt)


def _check_features(h: Hypergraph, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"feature matrix must be 2-D, got shape {x.shape}")
    if x.shape[0] != h.vertex_count:
        raise ValueError(
            f"feature matrix has {x.shape[0]} rows but the hypergraph has "
            f"{h.vertex_count} vertices"
        )
    return x


def forward(h: Hypergraph, x, layers: Sequence[ConvLayer]) -> np.ndarray:
    """Apply activation(P @ X @ weight) layer by layer."""
    x = _check_features(h, x)
    p = propagation_operator(h)
    for i, layer in enumerate(layers):
        if layer.weight.shape[0] != x.shape[1]:
            raise ValueError(
                f"layer {i} expects {layer.weight.shape[0]} input columns, got {x.shape[1]}"
            )
        x = _apply_activation(layer.activation, p @ x @ layer.weight)
    return x


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_gradients(
    p: np.ndarray,
    x: np.ndarray,
    labels: np.ndarray,
    mask: np.ndarray,
    weights: Sequence[np.ndarray],
) -> tuple[float, list[np.ndarray]]:
    """Masked softmax cross-entropy and its analytic gradients.

    Hidden layers use relu, the output layer is linear. Returns the mean loss
    over the masked vertices and one gradient per weight matrix; this is the
    backward pass the finite-difference tests cross-check.
    """
    last = len(weights) - 1
    pre: list[np.ndarray] = []
    post = [x]
    for i, w in enumerate(weights):
        z = p @ post[-1] @ w
        pre.append(z)
        post.append(z if i == last else np.maximum(z, 0.0))
    probs = _softmax(post[-1])
    loss = float(-np.mean(np.log(probs[mask, labels[mask]])))

    grad_z = np.zeros_like(probs)
    grad_z[mask] = probs[mask]
    grad_z[mask, labels[mask]] -= 1.0
    grad_z /= mask.size
    grads: list[np.ndarray] = [None] * len(weights)
    for i in range(last, -1, -1):
        grads[i] = (p @ post[i]).T @ grad_z
        if i > 0:
            grad_a = p.T @ (grad_z @ weights[i].T)
            grad_z = grad_a * (pre[i - 1] > 0.0)
    return loss, grads


@dataclass(frozen=True)
class TrainedModel:
    """Layer weights plus bookkeeping from one training run."""

    layers: tuple[ConvLayer, ...]
    num_classes: int
    loss_curve: tuple[float, ...]


def _check_labels_mask(h: Hypergraph, labels, mask) -> tuple[np.ndarray, np.ndarray]:
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (h.vertex_count,):
        raise ValueError(f"labels must have one entry per vertex, got shape {labels.shape}")
    if labels.min(initial=0) < 0:
        raise ValueError("labels must be non-negative class ids")
    mask = np.unique(np.asarray(mask, dtype=int))
    if mask.size == 0:
        raise ValueError("mask must select at least one vertex")
    if mask.min() < 0 or mask.max() >= h.vertex_count:
        raise ValueError("mask references vertices outside the hypergraph")
    return labels, mask


def train_classifier(
    h: Hypergraph,
    x,
    labels,
    train_mask,
    *,
    hidden_dim: int = 16,
    num_layers: int = 2,
    steps: int = 200,
    step_size: float = 0.5,
    seed: int = 0,
) -> TrainedModel:
    """Full-batch gradient descent on masked softmax cross-entropy.

    The loss curve records the loss before each update plus the final loss, so
    steps=0 returns exactly the seeded initialization with a one-point curve.
    """
    x = _check_features(h, x)
    labels, mask = _check_labels_mask(h, labels, train_mask)
    classes = np.unique(labels)
    if classes.size < 2:
        raise ValueError("training needs at least two classes")
    if set(classes) - set(labels[mask].tolist()):
        raise ValueError("every class needs at least one training vertex")
    if num_layers < 1:
        raise ValueError(f"num_layers must be >= 1, got {num_layers}")
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")

    num_classes = int(labels.max()) + 1
    dims = [x.shape[1]] + [hidden_dim] * (num_layers - 1) + [num_classes]
    rng = np.random.default_rng(seed)
    weights = [
        rng.normal(0.0, np.sqrt(2.0 / (dims[i] + dims[i + 1])), size=(dims[i], dims[i + 1]))
        for i in range(num_layers)
    ]
    p = propagation_operator(h)
    curve = []
    for _ in range(steps):
        loss, grads = loss_and_gradients(p, x, labels, mask, weights)
        curve.append(loss)
        for w, grad in zip(weights, grads):
            w -= step_size * grad
    final_loss, _ = loss_and_gradients(p, x, labels, mask, weights)
    curve.append(final_loss)
    layers = tuple(
        ConvLayer(w, "identity" if i == num_layers - 1 else "relu")
        for i, w in enumerate(weights)
    )
    return TrainedModel(layers=layers, num_classes=num_classes, loss_curve=tuple(curve))


def predict_labels(model: TrainedModel, h: Hypergraph, x) -> np.ndarray:
    """Class id per vertex: argmax of the forward logits."""
    return np.argmax(forward(h, x, model.layers), axis=1)


def evaluate(model: TrainedModel, h: Hypergraph, x, labels, test_mask) -> dict:
    """Accuracy and macro F1 on the masked vertices.

    Macro F1 averages over all model classes; a class absent from the mask
    contributes an F1 of zero.
    """
    labels, mask = _check_labels_mask(h, labels, test_mask)
    predicted = predict_labels(model, h, x)
    accuracy = float(np.mean(predicted[mask] == labels[mask]))
    f1_scores = []
    for c in range(model.num_classes):
        tp = int(np.sum((predicted[mask] == c) & (labels[mask] == c)))
        fp = int(np.sum((predicted[mask] == c) & (labels[mask] != c)))
        fn = int(np.sum((predicted[mask] != c) & (labels[mask] == c)))
        denom = 2 * tp + fp + fn
        f1_scores.append(2 * tp / denom if denom else 0.0)
    return {"accuracy": accuracy, "macro_f1": float(np.mean(f1_scores))}
