"""betalab: exact digit arithmetic and measure experiments in Pisot bases."""

from .errors import (
    AlphabetError,
    BaseConstructionError,
    BetalabError,
    BudgetExceededError,
    ConfigError,
    DigitOutOfRangeError,
    HomoclinicDecayTooSlowError,
    MixedBasesError,
    NoDominantRootError,
    NoStraddlingBlockError,
    NotInUnitIntervalError,
    NotMonicError,
    NotPisotError,
    NotUnitError,
    OrbitNotFiniteError,
    PeriodNotInAttractorError,
    ReducibleError,
    SearchExhaustedError,
    StateBudgetError,
    TruncationTooCoarseError,
    WindowTooShortError,
    WrongAlphabetError,
)
from .expansion import (
    attractor_periods,
    greedy_expand,
    is_admissible,
    quasi_greedy_one,
    word_value,
)
from .field import FieldElement, PisotBase, golden_base, make_base, tribonacci_base
from .measures import (
    EmpiricalMeasure,
    PiecewiseDensity,
    bc_to_erdos,
    invariant_estimate,
    parry_density,
    parry_sample,
    quasi_invariance_check,
    sample_erdos,
    shift_invariance_report,
    singularity_diagnostic,
    total_variation,
)
from .normalize import (
    BlockDecomposition,
    NormalizedWord,
    TwoSidedWord,
    block_split,
    coordinate_maps,
    d_realize,
    estimate_K,
    normalize_finite,
    scaled_word_value,
    shape,
    two_sided_normalize,
)
from .torus import companion_matrix, homoclinic_lifts, torus_check
from .wf import (
    GammaTable,
    KillerCertificate,
    SuffixKiller,
    WfReport,
    find_period_killer,
    gamma_experiment,
    killer_suffix,
    wf_check,
)
from .words import PeriodicWord

__version__ = "0.1.0"

__all__ = [
    "AlphabetError",
    "BaseConstructionError",
    "BetalabError",
    "BlockDecomposition",
    "BudgetExceededError",
    "ConfigError",
    "DigitOutOfRangeError",
    "EmpiricalMeasure",
    "FieldElement",
    "GammaTable",
    "HomoclinicDecayTooSlowError",
    "KillerCertificate",
    "MixedBasesError",
    "NoDominantRootError",
    "NoStraddlingBlockError",
    "NormalizedWord",
    "NotInUnitIntervalError",
    "NotMonicError",
    "NotPisotError",
    "NotUnitError",
    "OrbitNotFiniteError",
    "PeriodNotInAttractorError",
    "PeriodicWord",
    "PiecewiseDensity",
    "PisotBase",
    "ReducibleError",
    "SearchExhaustedError",
    "StateBudgetError",
    "SuffixKiller",
    "TruncationTooCoarseError",
    "TwoSidedWord",
    "WfReport",
    "WindowTooShortError",
    "WrongAlphabetError",
    "attractor_periods",
    "bc_to_erdos",
    "block_split",
    "companion_matrix",
    "coordinate_maps",
    "d_realize",
    "estimate_K",
    "find_period_killer",
    "gamma_experiment",
    "golden_base",
    "greedy_expand",
    "homoclinic_lifts",
    "invariant_estimate",
    "is_admissible",
    "killer_suffix",
    "make_base",
    "normalize_finite",
    "parry_density",
    "parry_sample",
    "quasi_greedy_one",
    "quasi_invariance_check",
    "sample_erdos",
    "scaled_word_value",
    "shape",
    "shift_invariance_report",
    "singularity_diagnostic",
    "torus_check",
    "total_variation",
    "tribonacci_base",
    "two_sided_normalize",
    "wf_check",
    "word_value",
    "__version__",
]
