"""Decoherence of a levitated micro-crystal superposition by dipolar gas scattering."""

from .errors import (
    ConfigError,
    DecoherenceError,
    DomainError,
    NumericError,
    QuadratureError,
    RegimeError,
    UnitError,
    UnsupportedOperationError,
)
from .quantities import CONSTANTS, PhysicalConstants, Quantity, mean_thermal_momentum, pressure_to_number_density
from .special import (
    DistributionKind,
    MomentumDistribution,
    cosine_integral,
    expectation_over_momentum,
    form_factor_kernel,
)
from .scattering import (
    DipolePair,
    Kinematics,
    ScatteringContext,
    differential_cross_section,
    sigma_cm_closed,
    sigma_cm_quadrature,
    sigma_eff_closed,
    sigma_eff_large_a,
    sigma_eff_quadrature,
)
from .rates import (
    EnvironmentSpec,
    RateResult,
    Regime,
    SuperpositionSpec,
    classify_regime,
    gamma_generic,
    gamma_long,
    gamma_short,
    gamma_short_approx,
    off_diagonal_decay,
)
from .qgem import (
    CrystalSpec,
    GasSpecies,
    builtin_species_catalog,
    induced_crystal_dipole,
    induced_environment_dipole,
    max_crystal_dipole,
    permanent_dipole_field,
)
from .config import ScenarioConfig, SweepSpec, load_config, parse_config

__version__ = "0.1.0"
