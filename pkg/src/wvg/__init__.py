"""Power indices and false-name manipulation analysis for weighted voting games."""

from .errors import (
    BoundViolationError,
    DegenerateNormalizationError,
    InvalidCoalitionError,
    InvalidConfigError,
    InvalidGameError,
    InvalidMergeError,
    InvalidSplitError,
    ResourceLimitError,
    SizeLimitError,
    WvgError,
)
from .game import (
    Coalition,
    Game,
    MergeOutcome,
    MergeSpec,
    SplitOutcome,
    SplitSpec,
    apply_merge,
    apply_split,
    coalition_weight,
    evaluate,
    game_from_json,
    game_from_text,
    game_to_json,
    game_to_text,
    is_critical,
    load_game,
    parse_game,
    parse_inline_game,
)
from .exact import (
    CriticalCounts,
    DEFAULT_ENUMERATION_LIMIT,
    IndexKind,
    IndexVector,
    ShapleyPivotTable,
    banzhaf_counts_dp,
    banzhaf_counts_dp_vector,
    banzhaf_counts_enumerate,
    critical_counts,
    index,
    normalize_banzhaf,
    shapley_dp,
    shapley_dp_vector,
    shapley_enumerate,
    shapley_pivot_table,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    banzhaf_mc,
    banzhaf_raw_mc,
    derive_seed,
    sample_size,
    shapley_mc,
)
from .manipulation import (
    AnnexReport,
    BoundReport,
    Classification,
    Engine,
    GadgetVariant,
    MergeReport,
    ScanSummary,
    SplitReport,
    annex_benefit,
    annex_monotonicity_probe,
    check_split_bounds,
    find_split_approx,
    high_quota_split_recommendation,
    merge_benefit,
    reduction_gadget,
    scan_k_way_splits,
    scan_two_way_splits,
    unanimity_split_recommendation,
)
from .experiments import (
    CellStats,
    ExperimentConfig,
    ExperimentStats,
    GameRecord,
    export_stats,
    generate_game,
    run_experiment,
    scan_game,
    stats_from_json,
)

__version__ = "0.1.0"
