"""Complex matrix powers, Schatten norms and randomized checks of strip-interpolated operator bounds."""

from .errors import *  # noqa: F401,F403
from .generators import generate
from .interpolation import (
    StripInstance,
    block_embed,
    conjugated_operator,
    conjugated_operator_polar,
    exponent_assembler,
    optimize_k,
    three_lines_bound,
    three_lines_kernel_bound,
    verify_bounded_similarity,
    verify_sandwich,
    verify_strip_bound,
)
from .io import load_matrix, save_matrix
from .linalg import (
    HermitianSpectrum,
    SingularDecomposition,
    condition_number,
    hermitian_eig,
    inverse,
    operator_norm,
    singular_values,
    solve,
    svd,
)
from .polar import GeneralizedPolarFactors, generalized_polar, heinz_domination_check, polar
from .report import InequalityReport
from .schatten import optimal_witness, schatten_norm, trace_duality_estimate, verify_gk_interpolation
from .sectorial import (
    BipEstimate,
    ContourSpec,
    Sector,
    SectorialProfile,
    bip_fit,
    dunford_power,
    dunford_powers,
    imaginary_power,
    imaginary_powers,
    mcintosh_check,
    principal_power,
    sector_membership,
    sectoriality_angle,
)
from .spectral import imaginary_power_bound_check, power_selfadjoint

__version__ = "0.1.0"
