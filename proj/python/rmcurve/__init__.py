"""Spectral curve analysis, Brownian-bridge evolution and universality
statistics of the Gaussian matrix model with external source."""

from ._core import (  # noqa: F401
    BranchPointSet,
    BridgeSpec,
    Cut,
    CurveSpec,
    CutStructure,
    DegenerateCurveError,
    DensityProfile,
    EnsembleSample,
    KernelStats,
    NumericsError,
    RHVerifyReport,
    ScaleConvention,
    SheetId,
    Side,
    SpecValidationError,
    airy,
    airy_kernel,
    branch_points,
    bridge_density,
    bulk_statistics,
    critical_times,
    cut_count_timeline,
    cut_structure,
    density,
    density_profile,
    edge_constants,
    edge_statistics,
    eigenvalues_at,
    h_fn,
    ks_distance,
    lambda_fn,
    sample_matrix,
    sine_kernel,
    spec_at,
    unfold,
    validate_spec,
    verify_model_rh,
    wigner_surmise_cdf,
    x_of_z,
    xi_branch,
    y_alpha,
)

__version__ = "0.1.0"
