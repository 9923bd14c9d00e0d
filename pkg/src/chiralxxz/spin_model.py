"""Effective XXZ + DMI couplings of a dressed molecule pair.

Couplings use the Pauli convention of the two-site Hamiltonian::

    H = J_xy (sx sx + sy sy) - D (sx sy - sy sx) + J_z sz sz + h (sz1 + sz2) + E0

with |up> (m=0) the +1 eigenstate of sz. All energies here are in GHz;
the single MHz -> GHz conversion is ``MHZ_PER_GHZ``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import COULOMB_K, DEBYE, MHZ_PER_GHZ, NM, PLANCK
from .dipole_pair import PairCoefficients, dressed_pair_matrix
from .errors import InvalidArgumentError

__all__ = [
    "SpinCouplings",
    "omega_scale",
    "effective_couplings",
    "identity_shift",
    "gauge_transform",
    "reconstruct_pair_hamiltonian",
    "dressed_hamiltonian_ghz",
    "two_site_spectrum",
    "PAULI",
]

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    # basis order (down, up), so sigma^+ = |up><down| is the (1, 0) entry
    "y": np.array([[0, 1j], [-1j, 0]], dtype=complex),
    "z": np.array([[-1, 0], [0, 1]], dtype=complex),
    "i": np.eye(2, dtype=complex),
}


@dataclass(frozen=True)
class SpinCouplings:
    """Nearest-neighbour couplings in GHz; ``J_tilde`` and ``theta`` are derived."""

    J_xy: float
    D: float
    J_z: float
    h_field: float
    r: float = float("nan")
    x: float = float("nan")
    J_tilde: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "J_tilde", math.hypot(self.J_xy, self.D))
        object.__setattr__(self, "theta", math.atan2(self.D, self.J_xy))


def omega_scale(d_tot: float, r: float) -> float:
    """Dipolar scale ``d_tot^2 / (4 pi eps0 r^3 h)`` in GHz (``d_tot`` in Debye, ``r`` in nm)."""
    if r <= 0:
        raise InvalidArgumentError(f"separation must be positive, got r={r}")
    energy = COULOMB_K * (d_tot * DEBYE) ** 2 / (r * NM) ** 3
    return energy / PLANCK / 1e9


def effective_couplings(
    E_up: float,
    E_down: float,
    coeffs: PairCoefficients,
    r: float,
    d_tot: float,
    *,
    x: float | None = None,
) -> SpinCouplings:
    """Couplings from dressed energies (MHz) and pair coefficients (Debye^2).

    ``J_xy = -(Omega/2) Re(Cd1)/d^2``, ``D = +(Omega/2) Im(Cd1)/d^2``,
    ``J_z = (Omega/4)[(C2 + C3) - (C1 + C4)]/d^2`` and
    ``h = [2 (E_up - E_down) + Omega (C1 - C4)/d^2] / 4``.
    """
    s = omega_scale(d_tot, r) / d_tot**2
    dE = (E_up - E_down) / MHZ_PER_GHZ
    return SpinCouplings(
        J_xy=-0.5 * s * coeffs.Cd1.real,
        D=0.5 * s * coeffs.Cd1.imag,
        J_z=0.25 * s * ((coeffs.C2 + coeffs.C3) - (coeffs.C1 + coeffs.C4)),
        h_field=0.25 * (2.0 * dE + s * (coeffs.C1 - coeffs.C4)),
        r=float(r),
        x=float(coeffs.x if x is None else x),
    )


def identity_shift(E_up: float, E_down: float, coeffs: PairCoefficients, r: float) -> float:
    """Constant ``E0`` (GHz) of the two-site mapping; energies in MHz."""
    s = omega_scale(1.0, r)
    return (E_up + E_down) / MHZ_PER_GHZ - 0.25 * s * (
        coeffs.C1 + coeffs.C2 + coeffs.C3 + coeffs.C4
    )


def gauge_transform(c: SpinCouplings) -> tuple[float, float, str]:
    """Twist that removes the DMI: ``(J_tilde, theta, phase rule)``.

    Site ``i`` is rotated about z by ``phi_i = -i * theta``, which maps the
    bond term ``J_xy - i D`` onto the real exchange ``J_tilde``.
    """
    return c.J_tilde, c.theta, "phi_i = -i*theta"


def _two_site(c: SpinCouplings, E0: float) -> np.ndarray:
    X, Y, Z, I = PAULI["x"], PAULI["y"], PAULI["z"], PAULI["i"]
    H = c.J_xy * (np.kron(X, X) + np.kron(Y, Y))
    H -= c.D * (np.kron(X, Y) - np.kron(Y, X))
    H += c.J_z * np.kron(Z, Z)
    H += c.h_field * (np.kron(Z, I) + np.kron(I, Z))
    return H + E0 * np.eye(4)


def reconstruct_pair_hamiltonian(
    c: SpinCouplings,
    E_up: float,
    E_down: float,
    coeffs: PairCoefficients,
    r: float,
) -> np.ndarray:
    """Two-site spin Hamiltonian (GHz) rebuilt from couplings plus ``E0``.

    ``E_up``/``E_down`` are in GHz here. ``E0`` follows from matching the
    diagonal of the dressed 4x4; note ``Omega / d_tot^2`` depends on ``r``
    only, so no dipole magnitude is needed.
    """
    E0 = identity_shift(E_up * MHZ_PER_GHZ, E_down * MHZ_PER_GHZ, coeffs, r)
    return _two_site(c, E0)


def dressed_hamiltonian_ghz(E_up: float, E_down: float, coeffs: PairCoefficients, r: float) -> np.ndarray:
    """Directly assembled dressed 4x4 in GHz; energies given in MHz."""
    s = omega_scale(1.0, r)
    return dressed_pair_matrix(coeffs, E_up / MHZ_PER_GHZ, E_down / MHZ_PER_GHZ, s)


def two_site_spectrum(c: SpinCouplings, E0: float = 0.0) -> np.ndarray:
    """Closed-form two-site levels, ascending."""
    root = 2.0 * c.J_tilde
    return np.sort(
        [c.J_z + 2 * c.h_field + E0, c.J_z - 2 * c.h_field + E0, -c.J_z + root + E0, -c.J_z - root + E0]
    )
