from .compare import CompareKind, CompareResult, compare
from .config import (CALIBRATED_CONSTANTS, DEFAULT_CONSTANTS, LEDGER_SLACK,
                     PROFILES, ConfigError, Decision, TesterConfig, Verdict,
                     assess_window, pcond_window, require_window,
                     streaming_monotonicity_window, window_midpoint)
from .decomposable import (LearnedDistribution, assess_partition_streaming,
                           learn_decomposable_streaming, test_decomposable_property)
from .monotone import (bipartite_collision_monotonicity, collision_monotonicity,
                       streaming_monotonicity)
from .pcond import pcond_budget_bits, pcond_identity_streaming
from .reduced import (MappedStream, closeness_monotone_streaming,
                      identity_monotone_streaming, reduced_closeness_baseline,
                      reduced_identity_baseline)

__all__ = [
    "CALIBRATED_CONSTANTS", "DEFAULT_CONSTANTS", "LEDGER_SLACK", "PROFILES",
    "CompareKind", "CompareResult", "ConfigError", "Decision", "TesterConfig",
    "Verdict", "LearnedDistribution", "MappedStream",
    "assess_partition_streaming", "assess_window",
    "bipartite_collision_monotonicity", "closeness_monotone_streaming",
    "collision_monotonicity", "compare", "identity_monotone_streaming",
    "learn_decomposable_streaming", "pcond_budget_bits",
    "pcond_identity_streaming", "pcond_window", "reduced_closeness_baseline",
    "reduced_identity_baseline", "require_window", "streaming_monotonicity",
    "streaming_monotonicity_window", "test_decomposable_property",
    "window_midpoint",
]
