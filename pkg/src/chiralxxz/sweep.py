"""Field sweeps of a molecule pair: dressed energies, coefficients, couplings.

Dressed states depend on ``x`` only, so one sweep serves every separation
``r``; couplings for a given ``r`` are a cheap rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dipole_pair import EnantiomerPair, PairCoefficients, compute_pair_coefficients
from .rotor import DEFAULT_MAX_STEP, BasisTruncation, DressedLevel, dressed_states
from .spin_model import SpinCouplings, effective_couplings

__all__ = ["SweepPoint", "pair_sweep", "refine_point"]


@dataclass(frozen=True)
class SweepPoint:
    """Pair data at one field value; energies of the first molecule in MHz."""

    x: float
    E_up: float
    E_down: float
    coeffs: PairCoefficients
    states1: tuple[DressedLevel, DressedLevel]
    states2: tuple[DressedLevel, DressedLevel]

    def couplings(self, r: float, d_tot: float) -> SpinCouplings:
        return effective_couplings(self.E_up, self.E_down, self.coeffs, r, d_tot, x=self.x)


def _point(x, s1, s2, pair) -> SweepPoint:
    (u1, d1), (u2, d2) = s1, s2
    c = compute_pair_coefficients(u1, d1, u2, d2, pair)
    return SweepPoint(float(x), u1.energy, d1.energy, c, s1, s2)


def pair_sweep(
    pair: EnantiomerPair,
    x_grid: Sequence[float],
    trunc: BasisTruncation = BasisTruncation(),
    *,
    workers: int = 1,
    max_step: float = DEFAULT_MAX_STEP,
) -> list[SweepPoint]:
    """Track both molecules along ``x_grid`` and contract the pair coefficients."""
    tracks = {}
    for spec in (pair.first, pair.second):
        if spec not in tracks:
            tracks[spec] = dressed_states(spec, x_grid, trunc, max_step=max_step, workers=workers)
    t1, t2 = tracks[pair.first], tracks[pair.second]
    return [_point(x, a, b, pair) for x, a, b in zip(x_grid, t1, t2)]


def refine_point(
    pair: EnantiomerPair,
    base: SweepPoint,
    x: float,
    trunc: BasisTruncation = BasisTruncation(),
    *,
    max_step: float = DEFAULT_MAX_STEP,
) -> SweepPoint:
    """Continue tracking from ``base`` to a nearby ``x >= base.x``."""
    s1 = dressed_states(pair.first, [x], trunc, max_step=max_step, start=base.states1)[0]
    s2 = dressed_states(pair.second, [x], trunc, max_step=max_step, start=base.states2)[0]
    return _point(x, s1, s2, pair)
