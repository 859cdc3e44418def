from .catalog import CASES, MATRIX_IDS, SCALAR_IDS, InequalityCase, get_case
from .generators import TrialConfig, gen_ordered_pair, gen_ratio_pair, gen_sandwich_pair
from .rng import SplitMix64, derive_seed
from .runner import (
    AUX_PREFIX,
    DEFAULT_DIMS,
    GapRow,
    TrialReport,
    check_case,
    format_report,
    no_ordering_probe,
    pair_margins,
    run_case,
    run_suite,
    suite_ids,
)

__all__ = [
    "AUX_PREFIX",
    "CASES",
    "DEFAULT_DIMS",
    "GapRow",
    "InequalityCase",
    "MATRIX_IDS",
    "SCALAR_IDS",
    "SplitMix64",
    "TrialConfig",
    "TrialReport",
    "check_case",
    "derive_seed",
    "format_report",
    "gen_ordered_pair",
    "gen_ratio_pair",
    "gen_sandwich_pair",
    "get_case",
    "no_ordering_probe",
    "pair_margins",
    "run_case",
    "run_suite",
    "suite_ids",
]
