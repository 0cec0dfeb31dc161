"""Agreement-constrained slider exercises and their trajectory analytics."""

from .grammar import (
    AgreementChain,
    Exercise,
    FeatureBundle,
    GoldSet,
    Slider,
    StateVector,
    WordForm,
    check_grammatical,
    enumerate_solutions,
    load_pack,
    parse_pack,
    validate_exercise_pack,
)
from .metrics import (
    ErrorRecord,
    MoveImpact,
    NearestGold,
    classify_move,
    classify_validation_errors,
    hamming,
    nearest_gold,
)
from .ingest import (
    ActionEvent,
    CorpusTotals,
    Session,
    corpus_totals,
    mark_revalidations,
    parse_log,
)
from .seqstats import (
    ConvergenceCurve,
    HeatMap,
    Trajectory,
    aggregate_convergence,
    error_heatmap,
    gold_change_table,
    impact_table,
    moves_by_label,
    trajectory,
)
from .scaffold import ScaffoldConfig, ScaffoldEngine, ScaffoldTrigger
from .simgen import StrategyProfile, ValidationsPolicy, generate

__version__ = "0.1.0"
