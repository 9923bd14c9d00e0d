"""Phase classification of the effective chain over (field, separation) grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dipole_pair import EnantiomerPair
from .errors import InvalidArgumentError, UndefinedRatioError
from .rotor import BasisTruncation
from .sweep import SweepPoint, pair_sweep, refine_point

__all__ = [
    "PhasePoint",
    "PhaseGrid",
    "LABELS",
    "anisotropy_ratio",
    "field_ratio",
    "ratios_at",
    "classify",
    "phase_grid",
    "field_zero_crossings",
]

LABELS = ("LuttingerLiquid", "FieldPolarized", "IsingFM", "IsingAFM")


@dataclass(frozen=True)
class PhasePoint:
    x: float
    r: float
    jz_ratio: float
    h_ratio: float
    label: str


def _ratios(point: SweepPoint, r: float, d_tot: float) -> tuple[float, float]:
    c = point.couplings(r, d_tot)
    if c.J_tilde == 0.0:
        if c.J_z == 0.0:
            raise UndefinedRatioError(f"J_z and J_tilde both vanish at x={point.x}")
        return math.copysign(math.inf, c.J_z), math.copysign(math.inf, c.h_field)
    return c.J_z / c.J_tilde, c.h_field / c.J_tilde


def ratios_at(point: SweepPoint, r: float, d_tot: float) -> tuple[float, float]:
    """``(J_z/J_tilde, h/J_tilde)`` for a precomputed sweep point."""
    return _ratios(point, r, d_tot)


def anisotropy_ratio(x: float, pair: EnantiomerPair, trunc: BasisTruncation = BasisTruncation(), *, r: float = 1.0) -> float:
    """``J_z / J_tilde`` at field ``x``; independent of ``r``.

    Raises
    ------
    UndefinedRatioError
        At ``x = 0`` where both couplings vanish.
    """
    if x <= 0:
        raise UndefinedRatioError("the anisotropy ratio is 0/0 at zero field")
    point = pair_sweep(pair, [x], trunc)[0]
    return _ratios(point, r, pair.d_tot)[0]


def field_ratio(x: float, r: float, pair: EnantiomerPair, trunc: BasisTruncation = BasisTruncation()) -> float:
    """``h / J_tilde`` at ``(x, r)``; ``+-inf`` when ``J_tilde = 0``."""
    if x <= 0:
        raise InvalidArgumentError("field_ratio needs x > 0")
    c = pair_sweep(pair, [x], trunc)[0].couplings(r, pair.d_tot)
    if c.J_tilde == 0.0:
        return math.copysign(math.inf, c.h_field)
    return c.h_field / c.J_tilde


def classify(
    jz_ratio: float,
    h_ratio: float,
    x: float = float("nan"),
    r: float = float("nan"),
    *,
    criterion: str = "jtilde",
) -> PhasePoint:
    """Label a point of the phase diagram.

    ``criterion="jtilde"`` (default) uses the boundary ``|h| = J_tilde``.
    ``criterion="magnon"`` is an alternative, off by default, using the
    single-magnon saturation field of the XXZ chain in this Pauli
    convention, ``|h| = 2 (J_tilde + J_z)``.
    """
    if jz_ratio < -1:
        label = "IsingFM"
    elif jz_ratio > 1:
        label = "IsingAFM"
    else:
        if criterion == "jtilde":
            inside = abs(jz_ratio) < 1 and abs(h_ratio) < 1
        elif criterion == "magnon":
            inside = abs(jz_ratio) < 1 and abs(h_ratio) < 2.0 * (1.0 + jz_ratio)
        else:
            raise InvalidArgumentError(f"unknown criterion {criterion!r}")
        label = "LuttingerLiquid" if inside else "FieldPolarized"
    return PhasePoint(float(x), float(r), float(jz_ratio), float(h_ratio), label)


@dataclass(frozen=True)
class PhaseGrid:
    """Row-major points: ``points[ir * nx + ix]``."""

    xs: tuple[float, ...]
    rs: tuple[float, ...]
    points: tuple[PhasePoint, ...]

    @property
    def nx(self) -> int:
        return len(self.xs)

    @property
    def nr(self) -> int:
        return len(self.rs)

    def row(self, ir: int) -> tuple[PhasePoint, ...]:
        return self.points[ir * self.nx : (ir + 1) * self.nx]

    def boundary(self) -> list[tuple[float, float]]:
        """Points where ``|h_ratio| - 1`` changes sign along each row (linear interpolation)."""
        out = []
        for ir, r in enumerate(self.rs):
            row = self.row(ir)
            for a, b in zip(row, row[1:]):
                fa, fb = abs(a.h_ratio) - 1.0, abs(b.h_ratio) - 1.0
                if not (math.isfinite(fa) and math.isfinite(fb)):
                    continue
                if fa == 0.0:
                    out.append((a.x, r))
                elif fa * fb < 0:
                    out.append((a.x + (b.x - a.x) * fa / (fa - fb), r))
        return out


def phase_grid(
    x_range: tuple[float, float],
    r_range: tuple[float, float],
    nx: int,
    nr: int,
    pair: EnantiomerPair,
    trunc: BasisTruncation = BasisTruncation(),
    *,
    workers: int = 1,
    criterion: str = "jtilde",
    sweep: Sequence[SweepPoint] | None = None,
) -> PhaseGrid:
    """Classify an ``nr x nx`` grid; dressed states are computed once per ``x``."""
    if nx < 2 or nr < 2:
        raise InvalidArgumentError("phase_grid needs nx, nr >= 2")
    if x_range[0] <= 0:
        raise InvalidArgumentError("x_range must start above zero field")
    xs = np.linspace(x_range[0], x_range[1], nx)
    rs = np.linspace(r_range[0], r_range[1], nr)
    pts = sweep if sweep is not None else pair_sweep(pair, xs, trunc, workers=workers)
    points = []
    for r in rs:
        for p in pts:
            jz, h = _ratios(p, r, pair.d_tot)
            points.append(classify(jz, h, p.x, r, criterion=criterion))
    return PhaseGrid(tuple(float(x) for x in xs), tuple(float(r) for r in rs), tuple(points))


def field_zero_crossings(
    r: float,
    pair: EnantiomerPair,
    trunc: BasisTruncation = BasisTruncation(),
    *,
    x_max: float = 20.0,
    step: float = 0.05,
    tol: float = 1e-3,
    sweep: Sequence[SweepPoint] | None = None,
) -> list[float]:
    """Zero crossings of ``h(x)`` at separation ``r`` on ``(0, x_max]``.

    Sign changes are detected on a grid of spacing ``step`` and then refined
    by bisection until the bracket is narrower than ``tol``.
    """
    if sweep is None:
        n = int(round(x_max / step))
        sweep = pair_sweep(pair, step * np.arange(1, n + 1), trunc)
    d = pair.d_tot

    def h_of(p: SweepPoint) -> float:
        return p.couplings(r, d).h_field

    roots = []
    for a, b in zip(sweep, sweep[1:]):
        ha, hb = h_of(a), h_of(b)
        if ha == 0.0:
            roots.append(a.x)
            continue
        if ha * hb >= 0:
            continue
        lo, hi, h_lo = a, b.x, ha
        while hi - lo.x > tol:
            mid = refine_point(pair, lo, 0.5 * (lo.x + hi), trunc)
            hm = h_of(mid)
            if hm == 0.0:
                lo, hi = mid, mid.x
                break
            if hm * h_lo > 0:
                lo, h_lo = mid, hm
            else:
                hi = mid.x
        roots.append(0.5 * (lo.x + hi))
    return roots
