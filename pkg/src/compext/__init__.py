"""compext: extended eigenvalues of composition operators, numerically.

Layers, bottom up: lft (symbols and their disk dynamics), series (truncated
power series and eigenfunction families), spaces (Hardy/Bergman/Fock norm
models), operators (finite truncations), extspec (ratio sets, Sylvester
probes, scans and per-class verification), cli (command line).
"""

from .lft import (
    INF,
    Classification,
    DegenerateMapError,
    IdentityMapError,
    LinearFractionalMap,
    ParamOutOfRangeError,
    apply,
    classify,
    compose,
    fixed_points,
    format_complex,
    format_lft,
    inverse,
    is_automorphism_of_disk,
    is_fock_symbol,
    is_inf,
    is_self_map_of_disk,
    lft_from_json,
    lft_to_json,
    multiplier,
    parse_complex,
    parse_lft,
    standard_form,
)
from .series import (
    NegativeParameterError,
    OrderMismatchError,
    PoleInsideDiskError,
    PowerSeries,
    ZeroConstantTermError,
    add,
    binomial_power,
    cayley_power,
    compose_series,
    constant,
    derivative,
    exp_series,
    lft_taylor,
    monomial,
    mul,
    parabolic_eigenfunction,
    reciprocal,
    scalar_mul,
    series_from_json,
    series_to_json,
    sub,
)
from .spaces import (
    PointOutsideDomainError,
    SpaceSpec,
    coeffs_to_coordinates,
    coordinates_to_series,
    inner_product,
    monomial_norm,
    monomial_norms,
    norm,
    reproducing_kernel_coeffs,
)
from .operators import (
    BadShiftError,
    CenterOutsideDiskError,
    DimensionMismatchError,
    OperatorMatrix,
    SymbolNotAdmissibleError,
    WrongSpaceError,
    adjoint,
    apply_to_series,
    basis_shift_matrix,
    composition_matrix,
    direct_sum,
    matmul,
    matrix_power,
    multiplication_matrix,
    op_norm,
    operator_from_json,
    operator_to_json,
    operator_to_matrix_market,
    quasi_diff_matrix,
    quasi_mult_matrix,
    shifted_quasi_mult,
    sigma_shift_matrix,
)
from .extspec import (
    BadAnnulusError,
    CheckRow,
    EmptyGridError,
    ExtScanReport,
    GridSpec,
    PredictedExt,
    SingularTruncationError,
    SuiteReport,
    SylvesterProbe,
    TooLargeError,
    UnresolvedClassError,
    VerifyReport,
    VerifyRow,
    build_witness,
    ext_scan,
    intertwining_residual,
    lemma_suite,
    make_grid,
    predicted_ext,
    ratio_distance,
    ratio_set,
    rich_spectrum_annulus_check,
    sylvester_min_sv,
    verify_theorem_suite,
)

__version__ = "0.1.0"
