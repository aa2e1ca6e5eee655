"""Scikit-learn style wrappers so the extraction pipeline and the classifier
compose with the wider estimator ecosystem (get_params/set_params, clone,
fit/transform/predict)."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array

from . import hypergraph as hg
from .driver import DosageConfig, dosage, select_delta
from .graph import Graph, density
from .hgnn import evaluate, predict_labels, train_classifier
from .peeling import DEFAULT_ENUMERATION_CAP


def coerce_graph(X) -> Graph:
    """Accept a Graph, a square symmetric adjacency matrix, or an (m, 2) edge array."""
    if isinstance(X, Graph):
        return X
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise ValueError(f"expected a Graph, adjacency matrix, or edge array, got shape {arr.shape}")
    if arr.shape[0] == arr.shape[1] and arr.shape[0] != 2:
        if not np.array_equal(arr, arr.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(arr) != 0):
            raise ValueError("adjacency matrix must have a zero diagonal")
        rows, cols = np.nonzero(np.triu(arr, k=1))
        return Graph(arr.shape[0], list(zip(rows.tolist(), cols.tolist())))
    if arr.shape[1] != 2:
        raise ValueError(f"edge array must have two columns, got shape {arr.shape}")
    edges = [(int(u), int(v)) for u, v in arr]
    n = max((max(u, v) for u, v in edges), default=-1) + 1
    return Graph(n, edges)


class HypergraphBuilder(TransformerMixin, BaseEstimator):
    """Extract overlapping dense subgraphs from a graph and expose the resulting
    hypergraph's incidence matrix as the transform output.

    Parameters
    ----------
    k : number of subgraphs (hence hyperedges) to extract.
    lam : density/diversity trade-off, > 0.
    alpha, beta : minimum and maximum subgraph size; beta=None means the
        vertex count at fit time.
    delta : optional diameter-bound override; None selects it from the graph.
    weight_mode : "unit" for 1.0 hyperedge weights, "density" to weight each
        hyperedge by its source subgraph's density.
    ensure_coverage : patch vertices left outside every hyperedge.
    enumeration_cap, force : guard rails for the exponential candidate search.

    Attributes
    ----------
    graph_, subgraphs_, hypergraph_, delta_ : the fitted structures.
    """

    def __init__(
        self,
        k: int = 2,
        lam=1.0,
        alpha: int = 1,
        beta: int | None = None,
        delta=None,
        weight_mode: str = "unit",
        ensure_coverage: bool = False,
        enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
        force: bool = False,
    ) -> None:
        self.k = k
        self.lam = lam
        self.alpha = alpha
        self.beta = beta
        self.delta = delta
        self.weight_mode = weight_mode
        self.ensure_coverage = ensure_coverage
        self.enumeration_cap = enumeration_cap
        self.force = force

    def fit(self, X, y=None):
        if self.weight_mode not in ("unit", "density"):
            raise ValueError(f"weight_mode must be 'unit' or 'density', got {self.weight_mode!r}")
        g = coerce_graph(X)
        beta = g.vertex_count if self.beta is None else self.beta
        cfg = DosageConfig(
            k=self.k,
            alpha=self.alpha,
            beta=beta,
            lam=self.lam,
            delta_override=self.delta,
            enumeration_cap=self.enumeration_cap,
            force=self.force,
        )
        collection = dosage(g, cfg)
        weights = None
        if self.weight_mode == "density":
            weights = [float(density(g, entry)) for entry in collection.entries]
        hypergraph = hg.from_subgraphs(g, collection, weights, bounds=(self.alpha, beta))
        if self.ensure_coverage:
            hypergraph = hg.ensure_coverage(hypergraph, g)
        self.graph_ = g
        self.subgraphs_ = collection
        self.hypergraph_ = hypergraph
        self.delta_ = select_delta(g, self.delta)
        return self

    def transform(self, X=None) -> np.ndarray:
        if not hasattr(self, "hypergraph_"):
            raise RuntimeError("HypergraphBuilder is not fitted yet; call fit first")
        if X is not None:
            g = coerce_graph(X)
            if g.vertex_count != self.graph_.vertex_count:
                raise ValueError(
                    "transform input has a different vertex count than the fitted graph"
                )
        return self.hypergraph_.incidence()


class HypergraphConvClassifier(ClassifierMixin, BaseEstimator):
    """Node classifier over a fixed hypergraph: two-step spectral convolution
    layers trained with full-batch gradient descent.

    The hypergraph is structural side information and therefore a constructor
    parameter; fit consumes the per-vertex feature matrix and integer labels.
    An optional ``mask`` keyword restricts training to a vertex subset.
    """

    def __init__(
        self,
        hypergraph=None,
        hidden_dim: int = 16,
        num_layers: int = 2,
        steps: int = 200,
        step_size: float = 0.5,
        seed: int = 0,
    ) -> None:
        self.hypergraph = hypergraph
        self.hidden_dim = hidden_dim
        self.num_layers = num_layers
        self.steps = steps
        self.step_size = step_size
        self.seed = seed

    def fit(self, X, y, mask=None):
        if self.hypergraph is None:
            raise ValueError("a hypergraph is required; pass it to the constructor")
        X = check_array(X, dtype=float)
        y = np.asarray(y, dtype=int)
        if mask is None:
            mask = np.arange(self.hypergraph.vertex_count)
        self.model_ = train_classifier(
            self.hypergraph,
            X,
            y,
            mask,
            hidden_dim=self.hidden_dim,
            num_layers=self.num_layers,
            steps=self.steps,
            step_size=self.step_size,
            seed=self.seed,
        )
        self.classes_ = np.unique(y)
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "model_"):
            raise RuntimeError("HypergraphConvClassifier is not fitted yet; call fit first")
        X = check_array(X, dtype=float)
        return predict_labels(self.model_, self.hypergraph, X)

    def evaluate_masked(self, X, y, mask) -> dict:
        """Accuracy and macro F1 restricted to ``mask``."""
        if not hasattr(self, "model_"):
            raise RuntimeError("HypergraphConvClassifier is not fitted yet; call fit first")
        return evaluate(self.model_, self.hypergraph, np.asarray(X, dtype=float), y, mask)
