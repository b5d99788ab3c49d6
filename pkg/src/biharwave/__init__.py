"""Forward fields and nonradiating-source certification for the fourth-order
(squared-Laplacian) wave equation in two and three dimensions."""

__version__ = "0.1.0"

from .context import WaveContext
from .fields import (
    BoundaryTrace,
    FarFieldSample,
    FieldSample,
    boundary_trace,
    eval_field,
    eval_field_batch,
    far_field,
    far_field_sample,
)
from .kernels import (
    FarFieldConvention,
    KernelValue,
    green_biharmonic,
    green_star,
    kernel_value,
    phi_h_series,
    phi_helmholtz,
    phi_m_series,
    phi_modified,
    psi_kernel,
)
from .quadrature import (
    AngularRule,
    BoundaryGrid,
    RadialRule,
    angular_rule,
    ball_integrate,
    boundary_grid,
    disk_integrate,
    product_grid,
    radial_rule,
    volume_integrate,
)
from .sources import (
    DegenerateSourceError,
    ModalCoefficients,
    ModalProfiles,
    SourceField,
    SupportViolationError,
    gaussian_source,
    make_2d_bessel_nonradiating,
    make_3d_bessel_nonradiating,
    make_bump_nonradiating,
    modal_coefficients,
    project_modes,
    source_from_config,
)
from .spectral import (
    InconsistencyError,
    NonradiatingVerdict,
    SpectralConfig,
    SpectralSample,
    VerdictConfig,
    direction_grid,
    fourier_on_circle,
    fourier_transform_quadrature,
    laplace_on_circle,
    laplace_transform_quadrature,
    nullspace_residual,
    sample_spectrum,
    u_hat_from_trace,
    v_check_from_trace,
    verdict,
)

__all__ = [name for name in dir() if not name.startswith("_")]
