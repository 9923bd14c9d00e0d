"""Dipole-dipole coupling of two Stark-dressed molecules in the pseudo-spin basis.

The molecules sit on the field axis, so the interaction is
``-(1/r^3) [2 d1_0 d2_0 + d1_{+1} d2_{-1} + d1_{-1} d2_{+1}]`` in laboratory
spherical components. Coefficients are stored in Debye^2 with ``1/r^3`` and
``4 pi eps0`` left to :func:`chiralxxz.spin_model.omega_scale`.

The dressed-basis 4x4 in the order |dd>, |du>, |ud>, |uu> (molecule 1 first,
d = down, u = up) reads ``-(1/r^3)`` times::

    [[C1, 0,   0,   0 ],
     [0,  C2,  Cd1, 0 ],
     [0,  Cd2, C3,  0 ],
     [0,  0,   0,   C4]]
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import CapExceededError, InvalidArgumentError
from .rotor import (
    BasisTruncation,
    DressedLevel,
    MoleculeSpec,
    sector_basis,
)
from .wigner import AngularLabel, dmatrix_element

__all__ = [
    "EnantiomerPair",
    "PairCoefficients",
    "spherical_dipole_components",
    "dd_matrix_element",
    "lab_dipole_operator",
    "compute_pair_coefficients",
    "dressed_pair_matrix",
    "full_basis",
    "pair_hamiltonian_full",
    "project_pair_coefficients",
    "FULL_DIMENSION_CAP",
]

FULL_DIMENSION_CAP = 10_000
# laboratory channels (q1, q2, weight) of the field-axis interaction
_CHANNELS = ((0, 0, 2.0), (-1, 1, 1.0), (1, -1, 1.0))


@dataclass(frozen=True)
class EnantiomerPair:
    """Two molecules; ``label`` is e.g. ``"RL"`` (first R, second L)."""

    first: MoleculeSpec
    second: MoleculeSpec
    label: str = ""

    def __post_init__(self):
        expected = self.first.handedness + self.second.handedness
        if not self.label:
            object.__setattr__(self, "label", expected)
        elif self.label != expected:
            raise InvalidArgumentError(
                f"pair label {self.label!r} does not match handedness {expected!r}"
            )

    @classmethod
    def from_label(cls, label: str, base: MoleculeSpec | None = None) -> "EnantiomerPair":
        label = label.upper()
        if label not in ("LL", "LR", "RL", "RR"):
            raise InvalidArgumentError(f"pair label must be one of LL, LR, RL, RR, got {label!r}")
        base = base or MoleculeSpec()
        mol = {h: base if base.handedness == h else base.mirror() for h in "LR"}
        return cls(mol[label[0]], mol[label[1]], label)

    @property
    def d_tot(self) -> float:
        # both enantiomers share |d|; fall back to the geometric mean otherwise
        return math.sqrt(self.first.d_tot * self.second.d_tot)


@dataclass(frozen=True)
class PairCoefficients:
    """Dressed-basis dipole-dipole coefficients in Debye^2."""

    C1: float
    C2: float
    C3: float
    C4: float
    Cd1: complex
    Cd2: complex
    x: float = float("nan")

    def matrix(self) -> np.ndarray:
        """The bracketed 4x4 (without the ``-1/r^3`` prefactor)."""
        M = np.zeros((4, 4), dtype=complex)
        M[0, 0], M[1, 1], M[2, 2], M[3, 3] = self.C1, self.C2, self.C3, self.C4
        M[1, 2], M[2, 1] = self.Cd1, self.Cd2
        return M


def spherical_dipole_components(spec: MoleculeSpec) -> tuple[complex, complex, complex]:
    """Body-frame components ``(d_-1, d_0, d_+1)`` with ``d_+-1 = -+(d_b +- i d_c)/sqrt2``."""
    d = spec.body_dipole
    return d[-1], d[0], d[1]


def _lab_component(bra: AngularLabel, q: int, ket: AngularLabel, d: dict) -> complex:
    r = bra.k - ket.k
    if abs(r) > 1:
        return 0.0
    el = dmatrix_element(bra, q, r, ket)
    return d[r] * el if el else 0.0


def dd_matrix_element(
    bra1: AngularLabel,
    bra2: AngularLabel,
    ket1: AngularLabel,
    ket2: AngularLabel,
    pair: EnantiomerPair,
) -> complex:
    """``<bra1 bra2| H_dd |ket1 ket2>`` times ``r^3`` (Debye^2).

    Only ``(dm1, dm2)`` in {(0, 0), (-1, +1), (+1, -1)} survive; the (0, 0)
    channel has weight 2.
    """
    d1 = pair.first.body_dipole
    d2 = pair.second.body_dipole
    total = 0.0 + 0.0j
    for q1, q2, w in _CHANNELS:
        if bra1.m != ket1.m + q1 or bra2.m != ket2.m + q2:
            continue
        a = _lab_component(bra1, q1, ket1, d1)
        if a == 0:
            continue
        total += w * a * _lab_component(bra2, q2, ket2, d2)
    return -total


@lru_cache(maxsize=None)
def _lab_operator_cached(d_a, d_b, d_c, j_max, m_bra, q, m_ket) -> np.ndarray:
    s = math.sqrt(2.0)
    d = {-1: complex(d_b, -d_c) / s, 0: complex(d_a, 0.0), 1: -complex(d_b, d_c) / s}
    bb = sector_basis(j_max, m_bra)
    kb = sector_basis(j_max, m_ket)
    M = np.zeros((len(bb), len(kb)), dtype=complex)
    for i, (j, k) in enumerate(bb):
        bra = AngularLabel(j, k, m_bra)
        for l, (jp, kp) in enumerate(kb):
            if abs(j - jp) > 1 or abs(k - kp) > 1:
                continue
            M[i, l] = _lab_component(bra, q, AngularLabel(jp, kp, m_ket), d)
    M.setflags(write=False)
    return M


def lab_dipole_operator(spec: MoleculeSpec, j_max: int, m_bra: int, q: int, m_ket: int) -> np.ndarray:
    """Matrix of the laboratory component ``d_q`` from sector ``m_ket`` to ``m_bra``."""
    if m_bra != m_ket + q:
        raise InvalidArgumentError("d_q connects m_ket to m_ket + q only")
    return _lab_operator_cached(spec.d_a, spec.d_b, spec.d_c, j_max, m_bra, q, m_ket)


def _expect(spec, bra: DressedLevel, q: int, ket: DressedLevel) -> complex:
    M = lab_dipole_operator(spec, ket.j_max, bra.m, q, ket.m)
    return complex(np.vdot(bra.vector, M @ ket.vector))


def compute_pair_coefficients(
    up1: DressedLevel,
    down1: DressedLevel,
    up2: DressedLevel,
    down2: DressedLevel,
    pair: EnantiomerPair,
) -> PairCoefficients:
    """Contract dressed amplitudes with the dipole-dipole operator.

    Because the interaction factorizes into single-molecule dipole operators,
    ``C`` sums over basis quadruples reduce to products of one-molecule
    matrix elements; the result equals the explicit sum over
    :func:`dd_matrix_element`.
    """
    xs = {up1.x, down1.x, up2.x, down2.x}
    if max(xs) - min(xs) > 1e-12:
        raise InvalidArgumentError(f"dressed levels belong to different fields {sorted(xs)}")
    if up1.m != 0 or up2.m != 0 or down1.m != 1 or down2.m != 1:
        raise InvalidArgumentError("expected up states with m=0 and down states with m=1")
    s1, s2 = pair.first, pair.second
    mu_u1 = _expect(s1, up1, 0, up1).real
    mu_d1 = _expect(s1, down1, 0, down1).real
    mu_u2 = _expect(s2, up2, 0, up2).real
    mu_d2 = _expect(s2, down2, 0, down2).real
    # <d1 u2|H|u1 d2>: molecule 1 raised (q=+1), molecule 2 lowered (q=-1)
    cd1 = _expect(s1, down1, 1, up1) * _expect(s2, up2, -1, down2)
    cd2 = _expect(s1, up1, -1, down1) * _expect(s2, down2, 1, up2)
    return PairCoefficients(
        C1=2.0 * mu_d1 * mu_d2,
        C2=2.0 * mu_d1 * mu_u2,
        C3=2.0 * mu_u1 * mu_d2,
        C4=2.0 * mu_u1 * mu_u2,
        Cd1=cd1,
        Cd2=cd2,
        x=float(up1.x),
    )


def dressed_pair_matrix(
    coeffs: PairCoefficients, E_up: float, E_down: float, scale: float
) -> np.ndarray:
    """Dressed two-molecule 4x4: ``diag(single-molecule sums) - scale * C``.

    ``scale`` converts Debye^2 to the energy unit of ``E_up``/``E_down``
    (for example ``omega_scale / d_tot**2``).
    """
    E = np.diag([2 * E_down, E_down + E_up, E_up + E_down, 2 * E_up]).astype(complex)
    return E - scale * coeffs.matrix()


# --- brute-force product-basis oracle -----------------------------------------------------


@lru_cache(maxsize=None)
def full_basis(j_max: int) -> tuple[AngularLabel, ...]:
    """All |j k m> with ``j <= j_max``, grouped by ``m`` ascending."""
    labels = [AngularLabel(j, k, m) for m in range(-j_max, j_max + 1) for j in range(abs(m), j_max + 1) for k in range(-j, j + 1)]
    return tuple(labels)


@lru_cache(maxsize=None)
def _single_molecule_full(spec: MoleculeSpec, j_max: int):
    """Field-free Hamiltonian and lab dipole components over :func:`full_basis`.

    Built element by element from :func:`dmatrix_element`, independently of
    the sector blocks used in production. The Stark term at field ``x`` is
    ``-(x B / d_tot) d_0``.
    """
    basis = full_basis(j_max)
    n = len(basis)
    index = {(b.j, b.k, b.m): i for i, b in enumerate(basis)}
    d = spec.body_dipole
    dq = {q: np.zeros((n, n), dtype=complex) for q in (-1, 0, 1)}
    for i, bra in enumerate(basis):
        for l, ket in enumerate(basis):
            q = bra.m - ket.m
            if abs(q) > 1:
                continue
            dq[q][i, l] = _lab_component(bra, q, ket, d)
    H = np.zeros((n, n), dtype=complex)
    for i, b in enumerate(basis):
        J = b.j * (b.j + 1)
        H[i, i] = 0.5 * (spec.B + spec.C) * (J - b.k**2) + spec.A * b.k**2
        for s in (1, -1):
            kp = b.k + 2 * s
            if abs(kp) <= b.j:
                H[index[(b.j, kp, b.m)], i] = 0.25 * (spec.B - spec.C) * math.sqrt(
                    (J - b.k * (b.k + s)) * (J - (b.k + s) * (b.k + 2 * s))
                )
    return H, dq


def _single_molecule_at(spec: MoleculeSpec, x: float, j_max: int):
    H0, dq = _single_molecule_full(spec, j_max)
    return H0 - (x * spec.B / spec.d_tot) * dq[0], dq


def pair_hamiltonian_full(
    pair: EnantiomerPair,
    x: float,
    trunc: BasisTruncation,
    r: float,
    *,
    cap: int = FULL_DIMENSION_CAP,
) -> sp.csr_matrix:
    """Two-molecule Hamiltonian (MHz) over the full product basis.

    ``H1 (x) 1 + 1 (x) H2 + H_dd`` with both Stark terms; sparse CSR. The
    product ordering is ``index1 * n + index2`` over :func:`full_basis`.

    Raises
    ------
    CapExceededError
        If the product dimension exceeds ``cap``.
    """
    from .spin_model import omega_scale  # local import avoids a cycle

    n = len(full_basis(trunc.j_max))
    if n * n > cap:
        raise CapExceededError(
            f"product dimension {n * n} at j_max={trunc.j_max} exceeds the cap of {cap}"
        )
    H1, d1 = _single_molecule_at(pair.first, x, trunc.j_max)
    H2, d2 = _single_molecule_at(pair.second, x, trunc.j_max)
    eye = sp.identity(n, dtype=complex, format="csr")
    scale = omega_scale(pair.d_tot, r) * 1e3 / pair.d_tot**2  # MHz per Debye^2
    Hdd = sp.csr_matrix((n * n, n * n), dtype=complex)
    for q1, q2, w in _CHANNELS:
        Hdd = Hdd + w * sp.kron(sp.csr_matrix(d1[q1]), sp.csr_matrix(d2[q2]), format="csr")
    H = sp.kron(sp.csr_matrix(H1), eye) + sp.kron(eye, sp.csr_matrix(H2)) - scale * Hdd
    return H.tocsr()


def _track_full_sector(spec, j_max, sector_idx, xs, max_step):
    """Independent tracker for the oracle: lowest state at x=0, then max overlap."""
    sel = np.ix_(sector_idx, sector_idx)
    w, v = np.linalg.eigh(_single_molecule_at(spec, 0.0, j_max)[0][sel])
    vec = v[:, 0]
    big = np.argmax(np.abs(vec))
    cur = (float(w[0]), vec * (abs(vec[big]) / vec[big]))
    last = 0.0
    out = []
    for x in xs:
        n = math.ceil((x - last) / max_step - 1e-12) if x > last else 0
        for i in range(1, n + 1):
            xi = last + (x - last) * i / n
            w, v = np.linalg.eigh(_single_molecule_at(spec, xi, j_max)[0][sel])
            ov = v.conj().T @ cur[1]
            b = int(np.argmax(np.abs(ov)))
            cur = (float(w[b]), v[:, b] * (ov[b] / abs(ov[b])))
        last = max(last, x)
        out.append(cur)
    return out


def project_pair_coefficients(
    pair: EnantiomerPair,
    xs,
    trunc: BasisTruncation,
    r: float = 1.0,
    *,
    max_step: float = 0.05,
) -> list[PairCoefficients]:
    """Oracle coefficients from projecting :func:`pair_hamiltonian_full`.

    Dressed states come from diagonalizing the m=0 and m=1 subsets of the
    full single-molecule matrices; the 4x4 projection of the two-molecule
    Hamiltonian, minus the single-molecule energies, gives ``-C / r^3``.
    """
    from .spin_model import omega_scale

    basis = full_basis(trunc.j_max)
    n = len(basis)
    idx = {m: [i for i, b in enumerate(basis) if b.m == m] for m in (0, 1)}
    scale = omega_scale(pair.d_tot, r) * 1e3 / pair.d_tot**2
    states = []
    for spec in (pair.first, pair.second):
        per_m = {}
        for m in (0, 1):
            per_m[m] = _track_full_sector(spec, trunc.j_max, idx[m], list(xs), max_step)
        states.append(per_m)
    results = []
    for t, x in enumerate(xs):
        H = pair_hamiltonian_full(pair, x, trunc, r)
        vecs = {}
        energies = {}
        for mol in (0, 1):
            for m, name in ((1, "d"), (0, "u")):
                e, v = states[mol][m][t]
                full = np.zeros(n, dtype=complex)
                full[idx[m]] = v
                vecs[(mol, name)] = full
                energies[(mol, name)] = e
        order = ("dd", "du", "ud", "uu")
        P = np.column_stack([np.kron(vecs[(0, a)], vecs[(1, b)]) for a, b in order])
        M = P.conj().T @ (H @ P)
        M -= np.diag([energies[(0, a)] + energies[(1, b)] for a, b in order])
        C = -M / scale
        results.append(
            PairCoefficients(
                C1=C[0, 0].real,
                C2=C[1, 1].real,
                C3=C[2, 2].real,
                C4=C[3, 3].real,
                Cd1=complex(C[1, 2]),
                Cd2=complex(C[2, 1]),
                x=float(x),
            )
        )
    return results
