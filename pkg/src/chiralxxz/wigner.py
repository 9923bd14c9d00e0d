"""Angular-momentum algebra for integer j: 3-j symbols, Clebsch-Gordan
coefficients and rank-1 Wigner D-matrix elements between |j k m> states.

3-j symbols use the Racah sum with exact integer arithmetic; the square root
of the (rational) squared value is the only floating-point step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidArgumentError

__all__ = [
    "AngularLabel",
    "wigner3j",
    "clebsch_gordan",
    "dmatrix_element",
]


@dataclass(frozen=True, order=True)
class AngularLabel:
    """Symmetric-top basis label |j k m>.

    Parameters
    ----------
    j : int
        Total angular momentum, ``j >= 0``.
    k : int
        Projection on the body-fixed a axis.
    m : int
        Projection on the laboratory Z axis (the field direction).
    """

    j: int
    k: int
    m: int

    def __post_init__(self):
        if self.j < 0:
            raise InvalidArgumentError(f"j must be non-negative, got {self.j}")
        if abs(self.k) > self.j or abs(self.m) > self.j:
            raise InvalidArgumentError(
                f"projection out of range in |j={self.j}, k={self.k}, m={self.m}>"
            )


def _check_j(*js: int) -> None:
    for j in js:
        if j < 0:
            raise InvalidArgumentError(f"angular momentum must be non-negative, got {j}")


def _triangle(a: int, b: int, c: int) -> bool:
    return abs(a - b) <= c <= a + b


@lru_cache(maxsize=None)
def _wigner3j_squared_signed(j1, j2, j3, m1, m2, m3) -> tuple[int, Fraction]:
    """Return ``(sign, value**2)`` of the 3-j symbol as an exact rational."""
    f = math.factorial
    delta = Fraction(
        f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3), f(j1 + j2 + j3 + 1)
    )
    pref = delta * (
        f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3)
    )
    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (
            f(t)
            * f(j3 - j2 + t + m1)
            * f(j3 - j1 + t - m2)
            * f(j1 + j2 - j3 - t)
            * f(j1 - t - m1)
            * f(j2 - t + m2)
        )
        total += Fraction((-1) ** t, den)
    if total == 0:
        return 0, Fraction(0)
    sign = (-1) ** ((j1 - j2 - m3) % 2) * (1 if total > 0 else -1)
    return sign, total * total * pref


def wigner3j(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3-j symbol for integer arguments.

    Returns exactly ``0.0`` when ``m1 + m2 + m3 != 0``, when the triangle
    condition fails or when some ``|m_i| > j_i``.

    Raises
    ------
    InvalidArgumentError
        If any ``j`` is negative.
    """
    _check_j(j1, j2, j3)
    if m1 + m2 + m3 != 0 or not _triangle(j1, j2, j3):
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    sign, sq = _wigner3j_squared_signed(j1, j2, j3, m1, m2, m3)
    if sign == 0:
        return 0.0
    return sign * math.sqrt(sq.numerator) / math.sqrt(sq.denominator)


def clebsch_gordan(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> float:
    """Clebsch-Gordan coefficient <j1 m1, j2 m2 | J M> (Condon-Shortley phase)."""
    _check_j(j1, j2, J)
    if M != m1 + m2 or not _triangle(j1, j2, J):
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return 0.0
    sign, sq = _wigner3j_squared_signed(j1, j2, J, m1, m2, -M)
    if sign == 0:
        return 0.0
    phase = -1 if (j1 - j2 + M) % 2 else 1
    sq = sq * (2 * J + 1)
    return phase * sign * math.sqrt(sq.numerator) / math.sqrt(sq.denominator)


@lru_cache(maxsize=None)
def _dmatrix_cached(j, k, m, q, r, jp, kp, mp) -> float:
    pref = math.sqrt((2 * j + 1) * (2 * jp + 1))
    phase = -1.0 if (m + k) % 2 else 1.0
    return (
        phase * pref * wigner3j(j, 1, jp, -m, q, mp) * wigner3j(j, 1, jp, -k, r, kp)
    )


def dmatrix_element(bra: AngularLabel, q: int, r: int, ket: AngularLabel) -> float:
    """Matrix element <j k m| D^{1*}_{q r} |j' k' m'>.

    ``q`` indexes the laboratory spherical component and ``r`` the body-frame
    one. The element vanishes exactly unless ``m = q + m'``, ``k = r + k'`` and
    ``|j - j'| <= 1``.
    """
    if abs(q) > 1 or abs(r) > 1:
        raise InvalidArgumentError("only rank-1 components |q|, |r| <= 1 are supported")
    if bra.m != q + ket.m or bra.k != r + ket.k or abs(bra.j - ket.j) > 1:
        return 0.0
    return _dmatrix_cached(bra.j, bra.k, bra.m, q, r, ket.j, ket.k, ket.m)
