"""dendrofeat: nonparametric features from agglomerative dendrograms.

Builds dendrograms under the classic linkage criteria, derives pairwise
distances from generalized level functions over them (Minimax distances
are the single-linkage instance), embeds the resulting ultrametrics into
Euclidean coordinates, and aggregates multiple clustering solutions by
correlation clustering.
"""

__version__ = "0.1.0"

from .dataset import (
    ParseError,
    load_csv,
    save_csv,
    load_matrix,
    save_matrix,
    load_labels,
    save_labels,
    pairwise_sq_euclidean,
    gen_two_density,
    standardize,
)
from .linkage import CRITERIA, Dendrogram, build_dendrogram, lowest_common_node
from .dendro_distance import (
    LEVEL_FUNCTIONS,
    UltrametricReport,
    dendrogram_distance,
    minimax_floyd_warshall,
    minimax_mst,
    check_ultrametric,
)
from .embedding import Spectrum, EmbedResult, center_distance_matrix, sym_eig, embed
from .cluster import distance_to_similarity, kmeans, spectral_clustering
from .ensemble import (
    CoAssociation,
    co_association,
    cc_cost,
    cc_contribution,
    cc_local_search,
)
from .metrics import adjusted_rand, adjusted_mutual_information, v_measure
from .pipeline import (
    CLUSTERERS,
    PipelineConfig,
    ScoreTable,
    extract_features,
    chain_features,
    run_experiment,
)

__all__ = [
    "ParseError",
    "load_csv",
    "save_csv",
    "load_matrix",
    "save_matrix",
    "load_labels",
    "save_labels",
    "pairwise_sq_euclidean",
    "gen_two_density",
    "standardize",
    "CRITERIA",
    "Dendrogram",
    "build_dendrogram",
    "lowest_common_node",
    "LEVEL_FUNCTIONS",
    "UltrametricReport",
    "dendrogram_distance",
    "minimax_floyd_warshall",
    "minimax_mst",
    "check_ultrametric",
    "Spectrum",
    "EmbedResult",
    "center_distance_matrix",
    "sym_eig",
    "embed",
    "distance_to_similarity",
    "kmeans",
    "spectral_clustering",
    "CoAssociation",
    "co_association",
    "cc_cost",
    "cc_contribution",
    "cc_local_search",
    "adjusted_rand",
    "adjusted_mutual_information",
    "v_measure",
    "CLUSTERERS",
    "PipelineConfig",
    "ScoreTable",
    "extract_features",
    "chain_features",
    "run_experiment",
]
