"""Secret key rates for CV-QKD with trusted Gaussian source noise."""

from ._core import (
    ChannelParams,
    CvqkdError,
    DimensionError,
    DomainError,
    InternalError,
    ParameterError,
    ProtocolMismatchError,
    RegimeError,
    SourceParams,
    SymmetryError,
    UnphysicalStateError,
    amplification_params,
    build_gamma_ab,
    chi_from_excess_noise,
    condition_on_heterodyne,
    condition_on_homodyne,
    eb_pm_equivalence_check,
    g_function,
    gamma_b_af_of_w,
    holevo_bound,
    is_physical,
    key_rate,
    lemma_suite,
    make_t_grid,
    model_matrix,
    symplectic_eigenvalues,
    sweep,
    von_neumann_entropy,
    w_monotonicity_check,
)

MODELS = ("neutral", "beamsplitter", "untrusted")

__all__ = [name for name in dir() if not name.startswith("_")]
