"""Weighted PageRank and the Black Hole Metric on bounded weighted digraphs."""

__version__ = "0.1.0"

from bhrank.blackhole import (
    BlackHoleResult,
    TransformedNetwork,
    bh_arc_weight,
    black_hole_weight,
    blackhole_metric,
    dense_oracle,
    transform,
    wariness,
)
from bhrank.experiments import compare_ranks, rank_positions, run_scaling_experiment
from bhrank.generators import ErdosRenyiSpec, ScaleFreeSpec, generate_er, generate_scale_free, scale_weights
from bhrank.graph import SparseMatrix, WeightBounds, WeightedDigraph, build_graph, sink_vector
from bhrank.io import EdgeListFormat, load_edge_list, write_edge_list
from bhrank.kernels import BACKEND
from bhrank.ranking import PageRankConfig, RankResult, normalize_weights, pagerank
