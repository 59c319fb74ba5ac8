"""Community detection in multi-layer bipartite networks by debiased spectral co-clustering."""
from .detect import (
    ALL_METHODS,
    CoClustering,
    MethodId,
    detect_population,
    dsog,
    ncdsos,
    ncsos,
    ncsum,
    run_all,
    sog,
    sum_method,
)
from .grams import debiased_col_gram, debiased_row_gram, layer_sum, population_gram, raw_col_gram, raw_row_gram
from .kmeans import BACKEND, KMeansConfig, Labeling
from .metrics import MetricsReport, ari, clustering_error_onesided, evaluate, hamming_error, nmi
from .model import (
    ExpectedAdjacency,
    InvalidArgumentError,
    ModelParams,
    MultiLayerBipartiteNetwork,
    expected_adjacency,
    sample_membership,
    sample_network,
    sample_simulation_params,
)
from .spectral import RankDeficiencyWarning, SpectralEmbedding, row_normalize, top_k_eig, top_k_svd

# ``detect`` and ``kmeans`` are left to their submodules so the module names stay importable
__version__ = "0.1.0"
