"""Exact directed network-motif counting for motif sizes 3 to 6."""
from ._jit import USE_NUMBA, backend
from .engine import (CountingError, assemble_motif_code, count_base, count_motifs,
                     partition_adjacency, pattern_multiplicity)
from .enumeration import enumerate_connected, iter_connected_chunks
from .graph import (DirectedGraph, DropCounts, ParseError, degree_sum, load_edge_list,
                    parse_edge_list)
from .histogram import Histogram
from .induce import CelebritySplit, Strategy, induced_edges, split_point
from .isomorph import (AdjacencyCode, IsoCache, MotifId, canonical_code, class_census,
                       encode_adjacency, iso_id)
from .nullmodel import (EnsembleStats, MotifStats, RandomizerConfig, degree_vectors,
                        ensemble_stats, randomize, significance, switch_chain)
from .oracle import brute_force_histogram

__version__ = "0.1.0"
