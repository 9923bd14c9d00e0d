"""Single-molecule asymmetric-top Hamiltonian with a dc field along Z.

Energies are in MHz and dipoles in Debye. The field enters only through the
dimensionless strength ``x = d_tot * eps / B``, so ``eps * d_r`` equals
``x * B * d_r / d_tot`` in MHz. The body frame is (x, y, z) = (b, c, a).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import AmbiguityError, ContractViolationError, InvalidArgumentError
from .wigner import AngularLabel, dmatrix_element

__all__ = [
    "MoleculeSpec",
    "BasisTruncation",
    "DressedLevel",
    "StarkRow",
    "sector_basis",
    "build_rotor_block",
    "build_stark_block",
    "diagonalize_sector",
    "dressed_states",
    "stark_map",
    "convergence_check",
    "DEFAULT_J_MAX",
    "DEFAULT_MAX_STEP",
]

DEFAULT_J_MAX = 8
DEFAULT_MAX_STEP = 0.05
HERMITICITY_TOL = 1e-10
TIE_TOL = 1e-9


@dataclass(frozen=True)
class MoleculeSpec:
    """Rotational constants (MHz), body-frame dipole (Debye) and handedness.

    The defaults describe the L enantiomer of 1,2-propanediol; the R form
    differs only in the sign of ``d_c``.
    """

    A: float = 8572.05
    B: float = 3640.11
    C: float = 2790.97
    d_a: float = 1.201
    d_b: float = 1.916
    d_c: float = 0.365
    handedness: str = "L"

    def __post_init__(self):
        if not (self.A > self.B > self.C > 0):
            raise InvalidArgumentError(
                f"rotational constants must satisfy A > B > C > 0, got "
                f"A={self.A}, B={self.B}, C={self.C}"
            )
        if self.handedness not in ("L", "R"):
            raise InvalidArgumentError(f"handedness must be 'L' or 'R', got {self.handedness!r}")
        if self.handedness == "L" and self.d_c < 0 or self.handedness == "R" and self.d_c > 0:
            raise InvalidArgumentError(
                f"handedness {self.handedness} is inconsistent with d_c={self.d_c}"
            )

    @classmethod
    def enantiomer(cls, handedness: str, **overrides) -> "MoleculeSpec":
        """Build the L or R form; ``d_c`` in ``overrides`` is taken as a magnitude."""
        d_c = abs(overrides.pop("d_c", cls.d_c))
        sign = 1.0 if handedness == "L" else -1.0
        return cls(d_c=sign * d_c, handedness=handedness, **overrides)

    def mirror(self) -> "MoleculeSpec":
        """The opposite enantiomer."""
        return replace(self, d_c=-self.d_c, handedness="R" if self.handedness == "L" else "L")

    @property
    def d_tot(self) -> float:
        return math.sqrt(self.d_a**2 + self.d_b**2 + self.d_c**2)

    @property
    def body_dipole(self) -> dict[int, complex]:
        """Body-frame spherical components ``{r: d_r}``."""
        s = math.sqrt(2.0)
        return {
            -1: complex(self.d_b, -self.d_c) / s,
            0: complex(self.d_a, 0.0),
            1: -complex(self.d_b, self.d_c) / s,
        }


@dataclass(frozen=True)
class BasisTruncation:
    """Keep all |j k m> with ``j <= j_max``."""

    j_max: int = DEFAULT_J_MAX

    def __post_init__(self):
        if self.j_max < 1:
            raise InvalidArgumentError(f"j_max must be >= 1, got {self.j_max}")

    def sector_dimension(self, m: int) -> int:
        return sum(2 * j + 1 for j in range(abs(m), self.j_max + 1))


@lru_cache(maxsize=None)
def sector_basis(j_max: int, m: int) -> tuple[tuple[int, int], ...]:
    """Ordered ``(j, k)`` labels spanning the fixed-``m`` sector."""
    return tuple((j, k) for j in range(abs(m), j_max + 1) for k in range(-j, j + 1))


@dataclass(frozen=True, eq=False)
class DressedLevel:
    """One Stark-dressed eigenstate at fixed ``m`` and field ``x``.

    Attributes
    ----------
    x : float
        Dimensionless field.
    m : int
        Laboratory projection.
    energy : float
        Eigenvalue in MHz.
    j_max : int
        Truncation of the expansion.
    vector : ndarray of complex
        Amplitudes over ``sector_basis(j_max, m)``.
    """

    x: float
    m: int
    energy: float
    j_max: int
    vector: np.ndarray

    @property
    def basis(self) -> tuple[tuple[int, int], ...]:
        return sector_basis(self.j_max, self.m)

    @property
    def coefficients(self) -> dict[tuple[int, int], complex]:
        return {jk: complex(c) for jk, c in zip(self.basis, self.vector)}

    def weights(self) -> np.ndarray:
        return np.abs(self.vector) ** 2


def _check_m(trunc: BasisTruncation, m: int) -> None:
    if abs(m) > trunc.j_max:
        raise InvalidArgumentError(f"|m|={abs(m)} exceeds j_max={trunc.j_max}")


@lru_cache(maxsize=None)
def _rotor_block_cached(A, B, C, j_max, m) -> np.ndarray:
    basis = sector_basis(j_max, m)
    index = {jk: i for i, jk in enumerate(basis)}
    n = len(basis)
    H = np.zeros((n, n))
    bc_avg = 0.5 * (B + C)
    ladder = 0.25 * (B - C)
    for i, (j, k) in enumerate(basis):
        jj = j * (j + 1)
        H[i, i] = bc_avg * (jj - k * k) + A * k * k
        for s in (2, -2):
            kp = k + s
            if abs(kp) > j:
                continue
            h = s // 2
            val = ladder * math.sqrt((jj - k * (k + h)) * (jj - (k + h) * (k + 2 * h)))
            H[index[(j, kp)], i] = val
    H.setflags(write=False)
    return H


def build_rotor_block(spec: MoleculeSpec, trunc: BasisTruncation, m: int) -> np.ndarray:
    """Field-free rigid-rotor block (MHz) for fixed ``m``.

    Diagonal ``((B+C)/2)(j(j+1) - k^2) + A k^2``; the ``k -> k +- 2``
    couplings carry ``(B-C)/4`` times the usual ladder factors.
    """
    _check_m(trunc, m)
    return _rotor_block_cached(spec.A, spec.B, spec.C, trunc.j_max, m).copy()


@lru_cache(maxsize=None)
def _unit_stark_cached(d_a, d_b, d_c, j_max, m) -> np.ndarray:
    """Stark block per unit ``eps`` (Debye): ``-sum_r d_r <jkm|D^{1*}_{0r}|j'k'm>``."""
    s = math.sqrt(2.0)
    d = {-1: complex(d_b, -d_c) / s, 0: complex(d_a, 0.0), 1: -complex(d_b, d_c) / s}
    basis = sector_basis(j_max, m)
    n = len(basis)
    H = np.zeros((n, n), dtype=complex)
    for i, (j, k) in enumerate(basis):
        bra = AngularLabel(j, k, m)
        for l, (jp, kp) in enumerate(basis):
            r = k - kp
            if abs(r) > 1 or abs(j - jp) > 1:
                continue
            el = dmatrix_element(bra, 0, r, AngularLabel(jp, kp, m))
            if el != 0.0:
                H[i, l] = -d[r] * el
    H.setflags(write=False)
    return H


def build_stark_block(
    spec: MoleculeSpec, x: float, trunc: BasisTruncation, m: int
) -> np.ndarray:
    """Stark block (MHz, complex Hermitian) at dimensionless field ``x``."""
    if x < 0:
        raise InvalidArgumentError(f"field must be non-negative, got x={x}")
    _check_m(trunc, m)
    unit = _unit_stark_cached(spec.d_a, spec.d_b, spec.d_c, trunc.j_max, m)
    return (x * spec.B / spec.d_tot) * unit


def _sector_hamiltonian(spec, x, j_max, m) -> np.ndarray:
    trunc = BasisTruncation(j_max)
    return build_rotor_block(spec, trunc, m) + build_stark_block(spec, x, trunc, m)


def _eigensystem(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    asym = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if asym > HERMITICITY_TOL * scale:
        raise ContractViolationError(f"matrix is not Hermitian (max |H - H^dag| = {asym:.3e})")
    return np.linalg.eigh(H)


def diagonalize_sector(H: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Eigenpairs of a Hermitian block in ascending energy order.

    Raises
    ------
    ContractViolationError
        If ``H`` is not Hermitian within 1e-10 (relative to its largest
        entry when that exceeds one).
    """
    w, v = _eigensystem(H)
    return [(float(w[i]), v[:, i].copy()) for i in range(len(w))]


def _diag_job(args):
    spec, x, j_max, m = args
    return _eigensystem(_sector_hamiltonian(spec, x, j_max, m))


def _parallel_diag(jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) < 2:
        return [_diag_job(j) for j in jobs]
    chunk = max(1, len(jobs) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_diag_job, jobs, chunksize=chunk))


def _tracking_path(x_start: float, xs: np.ndarray, max_step: float):
    """Points from ``x_start`` through every ``xs`` with spacing <= ``max_step``.

    Returns the path and, for each grid point, its index in the path.
    """
    path = [x_start]
    out_idx = []
    prev = x_start
    for x in xs:
        gap = x - prev
        if gap > 0:
            n = max(1, math.ceil(gap / max_step - 1e-12))
            path.extend(prev + gap * (i / n) for i in range(1, n))
            path.append(float(x))
        out_idx.append(len(path) - 1)
        prev = x
    return path, out_idx


def _fix_initial_phase(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return v * (abs(v[i]) / v[i])


def _select(x, v_prev, evals, evecs):
    ov = evecs.conj().T @ v_prev
    mag = np.abs(ov)
    order = np.argsort(-mag, kind="stable")
    best, second = int(order[0]), int(order[1]) if len(order) > 1 else None
    if second is not None and mag[best] - mag[second] < TIE_TOL:
        raise AmbiguityError(x, (best, second), (float(mag[best]), float(mag[second])))
    v = evecs[:, best]
    # rotate so that <v_prev|v> is real and positive
    v = v * (ov[best] / mag[best])
    return float(evals[best]), v


def dressed_states(
    spec: MoleculeSpec,
    x_grid: Sequence[float],
    trunc: BasisTruncation = BasisTruncation(),
    *,
    max_step: float = DEFAULT_MAX_STEP,
    workers: int = 1,
    start: tuple[DressedLevel, DressedLevel] | None = None,
) -> list[tuple[DressedLevel, DressedLevel]]:
    """Track the pseudo-spin pair (up: m=0, down: m=1) along a field grid.

    At zero field the up state is the m=0 ground state (|0 0 0>) and the down
    state the lowest m=1 level (the field-free j=1 level at B+C). Each state
    is then followed by maximal overlap with its predecessor, with
    intermediate points inserted so no step exceeds ``max_step``. Phases are
    parallel-transported: every new vector is rotated so its overlap with the
    previous one is real and positive. At zero field the largest amplitude is
    made real and positive.

    Parameters
    ----------
    x_grid : sequence of float
        Ascending, non-negative output points.
    start : (DressedLevel, DressedLevel), optional
        Continue tracking from these states instead of from zero field. Their
        ``x`` must not exceed ``x_grid[0]``.
    workers : int
        Process count for the diagonalizations; tracking itself is serial.

    Raises
    ------
    AmbiguityError
        When two candidates overlap the previous state equally within 1e-9.
    """
    xs = np.asarray(x_grid, dtype=float)
    if xs.ndim != 1 or xs.size == 0:
        raise InvalidArgumentError("x_grid must be a non-empty 1-D sequence")
    if xs[0] < 0 or np.any(np.diff(xs) < 0):
        raise InvalidArgumentError("x_grid must be ascending and non-negative")
    if max_step <= 0:
        raise InvalidArgumentError("max_step must be positive")
    j_max = trunc.j_max
    x0 = 0.0 if start is None else float(start[0].x)
    if xs[0] < x0:
        raise InvalidArgumentError("x_grid starts before the supplied start states")
    path, out_idx = _tracking_path(x0, xs, max_step)

    first = 0 if start is None else 1
    jobs = [(spec, x, j_max, m) for x in path[first:] for m in (0, 1)]
    results = _parallel_diag(jobs, workers)

    states: list[tuple[DressedLevel, DressedLevel]] = []
    if start is None:
        (w0, v0), (w1, v1) = results[0], results[1]
        cur = [
            (float(w0[0]), _fix_initial_phase(v0[:, 0])),
            (float(w1[0]), _fix_initial_phase(v1[:, 0])),
        ]
    else:
        cur = [(start[0].energy, start[0].vector), (start[1].energy, start[1].vector)]
    out_set = {}
    for i, pi in enumerate(out_idx):
        out_set.setdefault(pi, []).append(i)

    def emit(pi):
        for _ in out_set.get(pi, ()):
            x = path[pi]
            states.append(
                (
                    DressedLevel(x, 0, cur[0][0], j_max, cur[0][1]),
                    DressedLevel(x, 1, cur[1][0], j_max, cur[1][1]),
                )
            )

    emit(0)
    for pi in range(1, len(path)):
        base = 2 * (pi - first)
        for m in (0, 1):
            w, v = results[base + m]
            cur[m] = _select(path[pi], cur[m][1], w, v)
        emit(pi)
    return states


@dataclass(frozen=True)
class StarkRow:
    x: float
    m: int
    level_index: int
    energy_over_B: float


def stark_map(
    spec: MoleculeSpec,
    x_grid: Iterable[float],
    trunc: BasisTruncation = BasisTruncation(),
    m_list: Iterable[int] = (0, 1),
    *,
    workers: int = 1,
) -> list[StarkRow]:
    """Energy-ordered Stark levels divided by ``B``, rows ordered by (x, m, index)."""
    xs = [float(x) for x in x_grid]
    ms = list(m_list)
    for m in ms:
        _check_m(trunc, m)
    jobs = [(spec, x, trunc.j_max, m) for x in xs for m in ms]
    results = _parallel_diag(jobs, workers)
    rows = []
    for n, (_, x, _, m) in enumerate(jobs):
        w = results[n][0]
        rows.extend(StarkRow(x, m, i, float(e) / spec.B) for i, e in enumerate(w))
    return rows


def convergence_check(
    spec: MoleculeSpec, x: float, j_max: int, *, max_step: float = DEFAULT_MAX_STEP
) -> float:
    """Largest relative change of (E_up, E_down) from ``j_max`` to ``j_max + 2``.

    Energies smaller in magnitude than ``B`` are measured against ``B`` so the
    zero-field ground level (E = 0) does not produce 0/0.
    """
    if j_max < 2:
        raise InvalidArgumentError("convergence_check needs j_max >= 2")
    lo = dressed_states(spec, [x], BasisTruncation(j_max), max_step=max_step)[-1]
    hi = dressed_states(spec, [x], BasisTruncation(j_max + 2), max_step=max_step)[-1]
    shift = 0.0
    for a, b in zip(lo, hi):
        shift = max(shift, abs(a.energy - b.energy) / max(abs(b.energy), spec.B))
    return shift
