"""Constrained top-k overlapping densest-subgraph extraction, hypergraph
construction, and a desk-scale hypergraph-convolution classifier.

The functional core lives here; scikit-learn style wrappers are in
``dosage.estimators`` (kept out of the package root so importing the core does
not pull in scikit-learn).
"""

from .driver import (
    DosageConfig,
    VerifierReport,
    densest_distinct_subgraph,
    dosage,
    select_delta,
    verify_solution,
)
from .errors import CapExceeded, UncoveredVertexError
from .graph import (
    Graph,
    Selection,
    average_shortest_path_length,
    density,
    diameter,
    induced_edge_count,
    min_degree_vertices,
)
from .hgnn import (
    ConvLayer,
    TrainedModel,
    evaluate,
    forward,
    predict_labels,
    propagation_operator,
    train_classifier,
)
from .hypergraph import (
    CutReport,
    Hypergraph,
    adjacency,
    coverage_report,
    cut,
    ensure_coverage,
    from_subgraphs,
)
from .peeling import (
    DEFAULT_ENUMERATION_CAP,
    densest_subgraph_exact,
    densest_subgraph_peel,
)
from .scoring import SubgraphCollection, distance, is_distinct, objective

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ConvLayer",
    "CutReport",
    "DEFAULT_ENUMERATION_CAP",
    "DosageConfig",
    "Graph",
    "Hypergraph",
    "Selection",
    "SubgraphCollection",
    "TrainedModel",
    "UncoveredVertexError",
    "VerifierReport",
    "adjacency",
    "average_shortest_path_length",
    "coverage_report",
    "cut",
    "densest_distinct_subgraph",
    "densest_subgraph_exact",
    "densest_subgraph_peel",
    "density",
    "diameter",
    "distance",
    "dosage",
    "ensure_coverage",
    "evaluate",
    "forward",
    "from_subgraphs",
    "induced_edge_count",
    "is_distinct",
    "min_degree_vertices",
    "objective",
    "predict_labels",
    "propagation_operator",
    "select_delta",
    "train_classifier",
    "verify_solution",
]
