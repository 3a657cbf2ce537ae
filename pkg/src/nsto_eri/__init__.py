"""One-center repulsion integrals over Slater-type orbitals with non-integer n."""

from .angular import COMPLEX, REAL, AngularKey, a_coeff, gaunt_C, lm_channels, wigner_3j
from .assembly import Orbital, RelDensityCoeffs, eri, normalization, rel_coulomb_G, rel_density_terms
from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    InstabilityError,
    NumericalError,
    PoleError,
    ToleranceError,
)
from .numerics import DEFAULT, LogScaled, PrecisionConfig
from .oracle import QuadSpec, identity_suite, quad_radial
from .power_breit import PowerParams, breit_N, breit_V, sack_kernel, sack_radial
from .radial import (
    RadialParams,
    ladder,
    radial_closed_form,
    radial_direct_series,
    radial_generalized,
    seed_L0,
)

__version__ = "0.1.0"

__all__ = [
    "COMPLEX", "REAL", "AngularKey", "a_coeff", "gaunt_C", "lm_channels", "wigner_3j",
    "Orbital", "RelDensityCoeffs", "eri", "normalization", "rel_coulomb_G", "rel_density_terms",
    "ConvergenceError", "DivergenceError", "DomainError", "InstabilityError", "NumericalError",
    "PoleError", "ToleranceError",
    "DEFAULT", "LogScaled", "PrecisionConfig",
    "QuadSpec", "identity_suite", "quad_radial",
    "PowerParams", "breit_N", "breit_V", "sack_kernel", "sack_radial",
    "RadialParams", "ladder", "radial_closed_form", "radial_direct_series", "radial_generalized",
    "seed_L0",
]
