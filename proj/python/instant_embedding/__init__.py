"""Local node embeddings from approximate personalized PageRank."""

from ._core import (
    DomainError,
    FormatError,
    Graph,
    IoError,
    OutOfRangeError,
    approximate_ppr,
    edge_feature,
    erdos_renyi,
    exact_ppr,
    graph_embedding,
    hash_dim,
    hash_sign,
    instant_embedding,
    mix64,
    project,
    roc_auc,
    stochastic_block_model,
    transform_mass,
)

__all__ = [
    "DomainError",
    "FormatError",
    "Graph",
    "IoError",
    "OutOfRangeError",
    "approximate_ppr",
    "edge_feature",
    "erdos_renyi",
    "exact_ppr",
    "graph_embedding",
    "hash_dim",
    "hash_sign",
    "instant_embedding",
    "mix64",
    "project",
    "roc_auc",
    "stochastic_block_model",
    "transform_mass",
]
