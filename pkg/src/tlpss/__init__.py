"""Temporal link prediction toolkit.

Scores candidate pairs of a timestamped undirected network by combining
time-decayed edge weights (adjusted sigmoid or exponential) with local
2-simplex structure: common neighbors plus latent edges toward hidden
nodes.  Ships the TLPSS score, six decay-weighted baseline indices, and a
time-ordered evaluation harness (AUC, precision@L, parameter sweeps).
"""

from .adjacency import (
    DegreeVector,
    HiddenNodeSet,
    LatentWeightCache,
    WeightedAdjacency,
    build_adjacency,
    common_neighbors,
    degree_vector,
    dump_adjacency_tsv,
    hidden_nodes,
    latent_matrix,
    latent_weight,
)
from .decay import (
    DecayParams,
    ExpDecayParams,
    asf,
    asf_array,
    asf_floor,
    asf_log_margin,
    decay_floor,
    decay_weights,
    exp_decay,
)
from .edges import (
    DropReport,
    SnapshotConfig,
    TemporalEdge,
    TemporalEdgeList,
    TrainTestSplit,
    khop_filter,
    load_edge_list,
    multiplicity,
    normalize,
    parse_edge_list,
    serialize,
    snapshot_index,
    split_by_time,
)
from .errors import (
    ConfigError,
    EmptyDatasetError,
    EvaluationError,
    ParseError,
    SplitError,
    TlpssError,
)
from .evaluation import (
    CandidateSet,
    EvalReport,
    auc,
    build_candidates,
    evaluate_methods,
    precision_at_l,
    sweep,
)
from .scoring import (
    ALL_METHODS,
    MethodId,
    ScoreTable,
    score_all,
    score_car,
    score_cclp,
    score_cn,
    score_ja,
    score_matrix,
    score_pa,
    score_ra,
    score_tlpss,
)

__version__ = "0.1.0"
