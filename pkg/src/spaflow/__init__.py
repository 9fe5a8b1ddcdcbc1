"""Sum-product decoding on degree-2-check graphs, and the spectral
machinery that predicts where it converges."""

__version__ = "0.1.0"

from .decoder import (
    BatchOutcome,
    DecodeOutcome,
    DecodeStatus,
    ExponentMatrix,
    MessageState,
    estimates,
    init_messages,
    local_sum_run,
    spa_log_run,
    spa_log_run_batch,
    spa_run,
    spa_step,
    transform_s,
)
from .errors import (
    CheckDegreeError,
    GraphError,
    GraphFormatError,
    ImprimitiveNotSupportedError,
    InvalidIndexError,
    NoConvergenceError,
    NotIrreducibleError,
    NotStronglyConnectedError,
    NumericEscapeError,
    SizeLimitError,
    SpaflowError,
    UnknownGeneratorError,
    ValidationError,
)
from .generators import generate, generator_names
from .graph_io import (
    format_bg,
    format_ug,
    load_bipartite,
    load_undirected,
    parse_bg,
    parse_odds,
    parse_ug,
    read_graph,
    read_odds,
    write_graph,
)
from .graphs import (
    BipartiteEdge,
    BipartiteGraph,
    Edge,
    FlowGraph,
    UndirectedGraph,
    ValidationReport,
    build_undirected,
    cyclic_partition,
    directed_cycle_lengths,
    enumerate_admissible_cycles,
    flow_graph,
    forward_edge_order,
    imprimitivity_index,
    is_strongly_connected,
    reorder_edges,
    to_bipartite,
    to_undirected,
    validate,
)
from .sim import (
    ChannelConfig,
    SimRecord,
    awgn_odds,
    horizontal_gap,
    plot_svg,
    read_records,
    run_trials,
    summarize,
)
from .spectral import (
    ConvergenceRate,
    Prediction,
    SpectralSummary,
    Spectrum,
    StructuralMatrices,
    Verdict,
    build_structural,
    convergence_rate,
    failure_margin,
    full_spectrum,
    influence_vector,
    perron,
    predict,
    predict_log,
    spectrum_contains,
)
from .trapping import (
    AugmentedGraph,
    CoreKind,
    TrappingSetInfo,
    TrapsetReport,
    augment,
    classify,
    effective_input,
    genuine_leaf_mask,
    log_effective_input,
    run_trapset_trials,
    strip,
    verify_trapset_theorem,
)

__all__ = [name for name in dir() if not name.startswith("_")]
