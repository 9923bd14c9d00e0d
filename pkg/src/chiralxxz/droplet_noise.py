"""Electrostatic estimates for a dipolar array inside a charged droplet.

All arithmetic is done in SI; inputs use Debye, nm and elementary charges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import BOLTZMANN, COULOMB_K, DEBYE, ELEMENTARY_CHARGE, NM
from .errors import InvalidArgumentError

__all__ = [
    "DropletScenario",
    "dipole_dipole_energy",
    "dipole_dipole_energy_joule",
    "surface_charge_perturbation",
    "surface_charge_perturbation_joule",
    "signal_to_noise",
    "noise_report",
]


@dataclass(frozen=True)
class DropletScenario:
    mu: float = 2.5  # Debye
    r: float = 1.7  # nm
    R: float = 500.0  # nm
    q: float = 1.0  # elementary charges

    def __post_init__(self):
        if self.mu <= 0 or self.r <= 0 or self.R <= 0 or self.q < 0:
            raise InvalidArgumentError(
                "mu, r and R must be positive and q non-negative, got "
                f"mu={self.mu}, r={self.r}, R={self.R}, q={self.q}"
            )


def dipole_dipole_energy_joule(mu: float, r: float) -> float:
    """``mu^2 / (4 pi eps0 r^3)`` in J."""
    if r <= 0:
        raise InvalidArgumentError("r must be positive")
    return COULOMB_K * (mu * DEBYE) ** 2 / (r * NM) ** 3


def dipole_dipole_energy(mu: float, r: float) -> float:
    """Dipole-dipole energy scale in K."""
    return dipole_dipole_energy_joule(mu, r) / BOLTZMANN


def surface_charge_perturbation_joule(mu: float, q: float, R: float) -> float:
    """``mu * q / (4 pi eps0 R^2)`` in J: a dipole in the field of the droplet charge."""
    if R <= 0:
        raise InvalidArgumentError("R must be positive")
    field = COULOMB_K * q * ELEMENTARY_CHARGE / (R * NM) ** 2
    return abs(mu * DEBYE * field)


def surface_charge_perturbation(mu: float, q: float, R: float) -> float:
    """Stark perturbation from the surface charge in K."""
    return surface_charge_perturbation_joule(mu, q, R) / BOLTZMANN


def signal_to_noise(s: DropletScenario) -> float:
    """``V_dd / V_charge``; ``inf`` when the droplet is neutral."""
    noise = surface_charge_perturbation(s.mu, s.q, s.R)
    if noise == 0.0:
        return math.inf
    return dipole_dipole_energy(s.mu, s.r) / noise


def noise_report(s: DropletScenario) -> dict:
    """Machine-readable summary used by the CLI."""
    ratio = signal_to_noise(s)
    return {
        "mu_debye": s.mu,
        "r_nm": s.r,
        "R_nm": s.R,
        "q_e": s.q,
        "V_dd_J": dipole_dipole_energy_joule(s.mu, s.r),
        "V_dd_K": dipole_dipole_energy(s.mu, s.r),
        "V_charge_J": surface_charge_perturbation_joule(s.mu, s.q, s.R),
        "V_charge_K": surface_charge_perturbation(s.mu, s.q, s.R),
        "ratio": ratio if math.isfinite(ratio) else None,
    }
