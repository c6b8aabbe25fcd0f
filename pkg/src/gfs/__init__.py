"""Exact orthonormal systems, Fourier coefficients of bounded-variation
functions, and convergence-multiplier diagnostics on [0,1]."""

from .bv import (
    BVFunction,
    CATALOG_VARIATION,
    catalog,
    from_samples,
    linear_combination,
    plateau,
    step,
)
from .coeffs import CoeffVector, coefficient_vector, fourier_coefficient, restricted_inner
from .multipliers import (
    Decomposition,
    L2Sequence,
    MultiplierSeq,
    SystemCombination,
    cell_abs_integrals,
    convergence_probe,
    decompose_inner_product,
    element_combo,
    max_prefix_integral,
    midpoint_grid,
    pairing_functional,
    plateau_pairing_experiment,
    poly_combo,
    prefix_argmax,
    ratio_sweep,
    weight,
    weighted_coeff_norm,
    weighted_log_sum,
    weighted_partial_sum,
    weighted_poly_eval,
    weighted_poly_prefix,
)
from .report import DiagnosticsReport
from .subseq import (
    AdmissibilityReport,
    SubseqSelection,
    decay_series,
    parseval_prefix,
    parseval_prefix_series,
    select_subsequence,
    selection_system,
    sqrtlog_admissible,
)
from .systems import (
    HaarSystem,
    OrthonormalSystem,
    RemappedSystem,
    TrigSystem,
    WalshSystem,
    make_system,
    parse_system,
    remap,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "BVFunction",
    "CATALOG_VARIATION",
    "CoeffVector",
    "Decomposition",
    "DiagnosticsReport",
    "HaarSystem",
    "L2Sequence",
    "MultiplierSeq",
    "OrthonormalSystem",
    "RemappedSystem",
    "SubseqSelection",
    "SystemCombination",
    "TrigSystem",
    "WalshSystem",
    "catalog",
    "cell_abs_integrals",
    "coefficient_vector",
    "convergence_probe",
    "decay_series",
    "decompose_inner_product",
    "element_combo",
    "fourier_coefficient",
    "from_samples",
    "linear_combination",
    "make_system",
    "max_prefix_integral",
    "midpoint_grid",
    "pairing_functional",
    "parse_system",
    "parseval_prefix",
    "parseval_prefix_series",
    "plateau",
    "plateau_pairing_experiment",
    "poly_combo",
    "prefix_argmax",
    "ratio_sweep",
    "remap",
    "restricted_inner",
    "select_subsequence",
    "selection_system",
    "sqrtlog_admissible",
    "step",
    "weight",
    "weighted_coeff_norm",
    "weighted_log_sum",
    "weighted_partial_sum",
    "weighted_poly_eval",
    "weighted_poly_prefix",
]
