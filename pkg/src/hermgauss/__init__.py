"""Information geometry of the Hermite-Gaussian family of distributions.

The library models position distributions of quantum harmonic oscillator
states over the (mu, sigma) parameter plane and computes their Fisher-Rao
metric, scalar curvature, geodesics and Cramer-Rao bounds through several
mutually cross-validating routes (closed form, quadrature, series sums,
finite differences), plus a Monte Carlo estimation harness.
"""

from .hermite import (
    hermite,
    hermite_normalized,
    hermite_derivative_pair,
    orthogonality_residual,
)
from .models import (
    ModelPoint,
    PhysicalOscillator,
    StateSpec,
    KernelFn,
    InvalidStateError,
    pdf,
    kernel,
    kernel_pure_factored,
    from_physical,
    wavefunction,
)
from .quadrature import (
    QuadConfig,
    QuadResult,
    QuadratureError,
    IntegrandError,
    NonRemovableSingularityError,
    integrate_real_line,
    integrate_ratio,
)
from .geometry import (
    MetricTensor2,
    CurvatureReport,
    GeodesicTrace,
    metric_closed_form,
    metric_quadrature,
    metric_series_real,
    scalar_curvature_reduced,
    curvature_finite_difference,
    geodesic_trace,
    crb_bound,
    sigma_variance_bound,
)
from .estimation import (
    SampleBatch,
    CrbReport,
    sample,
    mle_fit,
    crb_experiment,
)

__all__ = [
    "hermite",
    "hermite_normalized",
    "hermite_derivative_pair",
    "orthogonality_residual",
    "ModelPoint",
    "PhysicalOscillator",
    "StateSpec",
    "KernelFn",
    "InvalidStateError",
    "pdf",
    "kernel",
    "kernel_pure_factored",
    "from_physical",
    "wavefunction",
    "QuadConfig",
    "QuadResult",
    "QuadratureError",
    "IntegrandError",
    "NonRemovableSingularityError",
    "integrate_real_line",
    "integrate_ratio",
    "MetricTensor2",
    "CurvatureReport",
    "GeodesicTrace",
    "metric_closed_form",
    "metric_quadrature",
    "metric_series_real",
    "scalar_curvature_reduced",
    "curvature_finite_difference",
    "geodesic_trace",
    "crb_bound",
    "sigma_variance_bound",
    "SampleBatch",
    "CrbReport",
    "sample",
    "mle_fit",
    "crb_experiment",
]

__version__ = "0.1.0"
