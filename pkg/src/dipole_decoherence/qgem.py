"""Dipole channels for a levitated micro-crystal in a dilute gas.

Three situations are modelled:

* a permanent environmental dipole ``d2`` polarises a dielectric crystal
  (induced ``d1``, Clausius-Mossotti);
* permanent dipoles on both sides;
* a permanent crystal dipole ``d1`` polarises the gas molecules (induced ``d2``).

The gas catalog carries standard molecular masses and the polarisability
volumes of the common air constituents.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError, DomainError
from .quantities import ANGSTROM3, CONSTANTS
from .rates import EnvironmentSpec, gamma_short_approx
from .scattering import DipolePair, ScatteringContext

__all__ = [
    "GasSpecies",
    "CrystalSpec",
    "induced_crystal_dipole",
    "local_field",
    "permanent_dipole_field",
    "induced_environment_dipole",
    "max_crystal_dipole",
    "dipole_volume_scaling",
    "builtin_species_catalog",
    "species_by_name",
    "species_to_config",
    "species_from_config",
]

MASS_CONSISTENCY_RTOL = 0.05


@dataclass(frozen=True)
class GasSpecies:
    """Environmental gas particle.

    Parameters
    ----------
    name : str
    mass : float
        kg.
    permanent_dipole : float or None
        C m; ``None`` for non-polar species.
    polarizability_volume : float
        ``alpha'`` in m^3; the SI polarisability is ``4 pi eps0 alpha'``.
    """

    name: str
    mass: float
    permanent_dipole: Optional[float] = None
    polarizability_volume: float = 0.0

    def __post_init__(self):
        if not self.name or any(c.isspace() for c in self.name):
            raise DomainError(f"species name must be a non-empty token, got {self.name!r}")
        if not self.mass > 0:
            raise DomainError(f"{self.name}: mass must be positive")
        if self.polarizability_volume < 0:
            raise DomainError(f"{self.name}: polarizability volume must be non-negative")
        if self.permanent_dipole is not None and self.permanent_dipole < 0:
            raise DomainError(f"{self.name}: permanent dipole must be non-negative")

    @property
    def polarizability(self):
        """SI polarisability ``4 pi eps0 alpha'`` in C m^2 / V."""
        return 4.0 * math.pi * CONSTANTS.eps0 * self.polarizability_volume


@dataclass(frozen=True)
class CrystalSpec:
    """Levitated dielectric sphere.

    ``mass`` defaults to ``density * 4/3 pi radius^3``; when both are given they
    must agree to 5%.
    """

    radius: float
    density: float = 3.5e3
    mass: Optional[float] = None
    relative_permittivity: float = 5.7
    dipole: Optional[float] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("crystal radius must be positive")
        if not self.density > 0:
            raise DomainError("crystal density must be positive")
        if not self.relative_permittivity > 1:
            raise DomainError("relative permittivity must exceed 1")
        if self.dipole is not None and self.dipole < 0:
            raise DomainError("crystal dipole must be non-negative")
        volume_mass = self.density * 4.0 / 3.0 * math.pi * self.radius**3
        if self.mass is None:
            object.__setattr__(self, "mass", volume_mass)
        elif not math.isclose(self.mass, volume_mass, rel_tol=MASS_CONSISTENCY_RTOL):
            raise DomainError(
                f"crystal mass {self.mass:.4g} kg inconsistent with density*volume = {volume_mass:.4g} kg"
            )


def induced_crystal_dipole(d2, eps_r):
    """Dipole induced in the crystal by an environmental dipole at ``r = R``.

    ``d1 = 3 d2 (eps_r - 1) / (2 pi eps_r (eps_r + 2))``; independent of the
    distance because the polarisable volume and the field both scale with it.
    """
    if not eps_r > 1:
        raise DomainError(f"relative permittivity must exceed 1, got {eps_r}")
    if d2 < 0:
        raise DomainError("d2 must be non-negative")
    return 3.0 * d2 / (2.0 * math.pi * eps_r) * (eps_r - 1.0) / (eps_r + 2.0)


def local_field(d2, eps_r, r_bar):
    """Field of ``d2`` inside the dielectric at distance ``r_bar``, aligned dipoles.

    ``E = d2 / (2 pi eps0 eps_r r_bar^3)`` in N/C.
    """
    if not r_bar > 0:
        raise DomainError("interaction distance must be positive")
    if not eps_r > 0:
        raise DomainError("relative permittivity must be positive")
    return d2 / (2.0 * math.pi * CONSTANTS.eps0 * eps_r * r_bar**3)


def permanent_dipole_field(d1, R):
    """On-axis field ``d1 / (2 pi eps0 R^3)`` of the crystal dipole at ``r = R``."""
    if not R > 0:
        raise DomainError("radius must be positive")
    return d1 / (2.0 * math.pi * CONSTANTS.eps0 * R**3)


def induced_environment_dipole(species: GasSpecies, field):
    """``d2 = 4 pi eps0 alpha' E`` for a gas molecule in the field ``E``."""
    if field < 0:
        raise DomainError("field magnitude must be non-negative")
    return species.polarizability * field


def max_crystal_dipole(gamma_target, ctx: ScatteringContext, env: EnvironmentSpec):
    """Largest crystal dipole compatible with a short-wavelength rate budget.

    Inverts the simplified short-wavelength rate for ``d1``: with ``K`` the
    rate at ``d1 = 1``, returns ``sqrt(gamma_target / K)``.  The ``d1``
    already stored in ``ctx`` is ignored.
    """
    if not gamma_target > 0:
        raise DomainError("target rate must be positive")
    if not ctx.pair.d2 > 0:
        raise DomainError("d2 = 0 leaves d1 unconstrained")
    if env.n == 0:
        raise DomainError("n = 0 leaves d1 unconstrained")
    unit = dataclasses.replace(ctx, pair=DipolePair(1.0, ctx.pair.d2))
    k = gamma_short_approx(unit, env).gamma
    return math.sqrt(gamma_target / k)


def dipole_volume_scaling(d_ref, R_ref, R):
    """Rescale a dipole measured at radius ``R_ref`` to radius ``R`` (``d ~ R^3``)."""
    if not (R_ref > 0 and R > 0):
        raise DomainError("radii must be positive")
    return d_ref * (R / R_ref) ** 3


def builtin_species_catalog():
    """Built-in gas species (immutable tuple).

    N2, O2, Ar, CO2 carry polarisability volumes (1.710, 1.562, 1.664,
    2.507 A^3); He carries the 1e-29 C m atomic-dipole estimate; H2O carries its
    6.19e-30 C m permanent dipole.
    """
    return _CATALOG


_CATALOG = (
    GasSpecies("N2", 4.65e-26, None, 1.710 * ANGSTROM3),
    GasSpecies("O2", 5.31e-26, None, 1.562 * ANGSTROM3),
    GasSpecies("Ar", 6.63e-26, None, 1.664 * ANGSTROM3),
    GasSpecies("CO2", 7.31e-26, None, 2.507 * ANGSTROM3),
    GasSpecies("He", 6.646e-27, 1e-29, 0.0),
    GasSpecies("H2O", 2.99e-26, 6.19e-30, 0.0),
)

POLARIZABLE_SPECIES = ("N2", "O2", "Ar", "CO2")


def species_by_name(name):
    for s in _CATALOG:
        if s.name == name:
            return s
    raise DomainError(f"unknown species {name!r}; known: {', '.join(s.name for s in _CATALOG)}")


_SPECIES_KEYS = ("name", "mass_kg", "permanent_dipole_Cm", "polarizability_volume_m3")


def species_to_config(species: GasSpecies, prefix="species"):
    """Render ``species`` as ``key = value`` lines for a scenario file."""
    lines = [f"{prefix}.name = {species.name}", f"{prefix}.mass_kg = {species.mass!r}"]
    if species.permanent_dipole is not None:
        lines.append(f"{prefix}.permanent_dipole_Cm = {species.permanent_dipole!r}")
    lines.append(f"{prefix}.polarizability_volume_m3 = {species.polarizability_volume!r}")
    return "\n".join(lines) + "\n"


def species_from_config(text, prefix="species"):
    """Parse the output of :func:`species_to_config` back into a :class:`GasSpecies`."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno, column=1)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key.startswith(prefix + "."):
            raise ConfigError(f"unexpected key {key!r}", line=lineno, column=1)
        field = key[len(prefix) + 1 :]
        if field not in _SPECIES_KEYS:
            raise ConfigError(f"unknown species field {field!r}", line=lineno, column=1, field=key)
        fields[field] = value
    if "name" not in fields or "mass_kg" not in fields:
        raise ConfigError("species needs at least name and mass_kg")
    try:
        return GasSpecies(
            fields["name"],
            float(fields["mass_kg"]),
            float(fields["permanent_dipole_Cm"]) if "permanent_dipole_Cm" in fields else None,
            float(fields.get("polarizability_volume_m3", 0.0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
