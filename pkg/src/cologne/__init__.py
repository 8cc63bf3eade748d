"""Coordinated local graph-neighborhood sampling.

Discrete node embeddings whose coordinates are graph nodes: every node gets
``d`` samples from its k-hop neighborhood, and samples of different nodes are
coordinated through shared keyed randomness so that collision rates estimate
neighborhood similarity.
"""
from .embeddings import EmbeddingMatrix, collision_similarity, embed, read_tsv, substitute_attributes, write_tsv
from .errors import CologneError, DomainError, ParseError, ResourceError, UsageError
from .graph import Graph, NodeAttributes, erdos_renyi, load_attributes, load_edge_list, random_graph
from .randomness import SeedContext, attribute_rank, node_rank, node_uniform
from .samplers import (
    SampleVector,
    SamplerConfig,
    exact_walk_count_norm,
    propagate_l0,
    propagate_weighted,
    random_walk_sample,
    sample,
    sample_columns,
    sample_lp,
)
from .summaries import CountSketch, FrequentSummary, fs_heaviest, fs_merge, fs_update, merge_many

__version__ = "0.1.0"

__all__ = [
    "EmbeddingMatrix",
    "collision_similarity",
    "embed",
    "read_tsv",
    "substitute_attributes",
    "write_tsv",
    "CologneError",
    "DomainError",
    "ParseError",
    "ResourceError",
    "UsageError",
    "Graph",
    "NodeAttributes",
    "erdos_renyi",
    "load_attributes",
    "load_edge_list",
    "random_graph",
    "SeedContext",
    "attribute_rank",
    "node_rank",
    "node_uniform",
    "SampleVector",
    "SamplerConfig",
    "exact_walk_count_norm",
    "propagate_l0",
    "propagate_weighted",
    "random_walk_sample",
    "sample",
    "sample_columns",
    "sample_lp",
    "CountSketch",
    "FrequentSummary",
    "fs_heaviest",
    "fs_merge",
    "fs_update",
    "merge_many",
]
