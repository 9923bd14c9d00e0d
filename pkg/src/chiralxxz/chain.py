"""Open spin-1/2 chain with XXZ exchange, DMI and a uniform field.

::

    H = sum_j [J_xy (sx sx + sy sy) - D (sx sy - sy sx) + J_z sz sz]_{j,j+1}
        + h sum_j sz_j

Basis states are bit strings with bit ``N-1-i`` holding site ``i`` (1 = up),
so the integer index matches ``kron`` ordering over (down, up) per site.
Sites are numbered from 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import CapExceededError, ContractViolationError, InvalidArgumentError
from .spin_model import SpinCouplings

__all__ = [
    "ChainSpec",
    "CorrelationSet",
    "GroundState",
    "ED_CAP",
    "FREE_FERMION_CAP",
    "build_chain_hamiltonian",
    "sector_hamiltonian",
    "chain_spectrum",
    "ed_ground_state",
    "correlations_ed",
    "density_correlations_ed",
    "lab_frame_transform",
    "free_fermion_two_point",
    "xx_correlations_free_fermion",
    "density_correlations_free_fermion",
    "structure_factor",
    "default_q_grid",
]

ED_CAP = 14
FREE_FERMION_CAP = 200
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class ChainSpec:
    """``N`` sites with open boundaries and uniform couplings (GHz)."""

    N: int
    couplings: SpinCouplings
    cap: int = ED_CAP

    def __post_init__(self):
        if self.N < 2:
            raise InvalidArgumentError(f"chain needs N >= 2, got {self.N}")


@dataclass(frozen=True, eq=False)
class CorrelationSet:
    """``values[i, j] = <s+_i s-_j>`` in the given frame."""

    frame: str
    values: np.ndarray

    def __post_init__(self):
        if self.frame not in ("effective", "laboratory"):
            raise InvalidArgumentError(f"unknown frame {self.frame!r}")

    def value(self, i: int, j: int) -> complex:
        return complex(self.values[i, j])

    @property
    def N(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class GroundState:
    energy: float
    state: np.ndarray
    degenerate: bool
    magnetization: int  # number of up spins


def _check_cap(spec: ChainSpec) -> None:
    if spec.N > spec.cap:
        raise CapExceededError(
            f"exact diagonalization is limited to N <= {spec.cap} sites, got N={spec.N}"
        )


def _bond_amplitudes(c: SpinCouplings, include_dmi: bool) -> tuple[complex, float]:
    """Amplitude of s+_i s-_{i+1} and the Ising coupling."""
    if include_dmi:
        return 2.0 * complex(c.J_xy, -c.D), c.J_z
    return complex(2.0 * c.J_tilde, 0.0), c.J_z


def _sector_states(N: int, n_up: int) -> np.ndarray:
    states = np.arange(1 << N, dtype=np.int64)
    pop = np.zeros_like(states)
    for b in range(N):
        pop += (states >> b) & 1
    return states[pop == n_up]


def _apply_terms(spec: ChainSpec, include_dmi: bool, states: np.ndarray):
    """Diagonal energies and hopping triples (row state, column state, amplitude)."""
    N = spec.N
    c = spec.couplings
    t, jz = _bond_amplitudes(c, include_dmi)
    bits = [((states >> (N - 1 - i)) & 1).astype(float) * 2.0 - 1.0 for i in range(N)]
    diag = c.h_field * np.sum(bits, axis=0)
    hops = []
    for i in range(N - 1):
        diag = diag + jz * bits[i] * bits[i + 1]
        bi, bj = 1 << (N - 1 - i), 1 << (N - 2 - i)
        # s+_i s-_{i+1}: site i down, site i+1 up
        mask = ((states & bi) == 0) & ((states & bj) != 0)
        src = states[mask]
        dst = src ^ (bi | bj)
        hops.append((dst, src, np.full(src.shape, t)))
        hops.append((src, dst, np.full(src.shape, np.conj(t))))
    return diag, hops


def build_chain_hamiltonian(spec: ChainSpec, include_dmi: bool = True) -> sp.csr_matrix:
    """Full ``2^N`` Hamiltonian (sparse CSR, GHz).

    With ``include_dmi=False`` the exchange is ``J_tilde`` and D is dropped,
    i.e. the gauge-transformed chain.
    """
    _check_cap(spec)
    dim = 1 << spec.N
    states = np.arange(dim, dtype=np.int64)
    diag, hops = _apply_terms(spec, include_dmi, states)
    rows = [states] + [h[0] for h in hops]
    cols = [states] + [h[1] for h in hops]
    vals = [diag.astype(complex)] + [h[2] for h in hops]
    H = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    )
    return H.tocsr()


def sector_hamiltonian(spec: ChainSpec, n_up: int, include_dmi: bool = True):
    """Dense block of fixed magnetization; returns ``(H, states)``."""
    _check_cap(spec)
    states = _sector_states(spec.N, n_up)
    pos = {int(s): i for i, s in enumerate(states)}
    diag, hops = _apply_terms(spec, include_dmi, states)
    H = np.diag(diag.astype(complex))
    for dst, src, amp in hops:
        for d, s, a in zip(dst, src, amp):
            H[pos[int(d)], pos[int(s)]] += a
    return H, states


def chain_spectrum(spec: ChainSpec, include_dmi: bool = True) -> np.ndarray:
    """All ``2^N`` eigenvalues, ascending, assembled from magnetization sectors."""
    evals = []
    for n_up in range(spec.N + 1):
        H, _ = sector_hamiltonian(spec, n_up, include_dmi)
        evals.append(np.linalg.eigvalsh(H))
    return np.sort(np.concatenate(evals))


def ed_ground_state(spec: ChainSpec, include_dmi: bool = True) -> GroundState:
    """Lowest eigenpair by sector-blocked dense diagonalization.

    If several states lie within 1e-10 of the minimum the result is flagged
    ``degenerate`` and the representative is chosen deterministically: the
    candidate whose largest-magnitude amplitude sits at the smallest basis
    index, phased so that amplitude is real and positive.
    """
    dim = 1 << spec.N
    candidates = []
    e_min = math.inf
    for n_up in range(spec.N + 1):
        H, states = sector_hamiltonian(spec, n_up, include_dmi)
        w, v = np.linalg.eigh(H)
        e_min = min(e_min, float(w[0]))
        candidates.append((n_up, states, w, v))
    picks = []
    for n_up, states, w, v in candidates:
        for i in np.nonzero(w < e_min + DEGENERACY_TOL)[0]:
            psi = np.zeros(dim, dtype=complex)
            psi[states] = v[:, i]
            big = int(np.argmax(np.round(np.abs(psi), 12)))
            picks.append((big, n_up, float(w[i]), psi))
    picks.sort(key=lambda p: (p[0], p[1]))
    big, n_up, energy, psi = picks[0]
    psi = psi * (abs(psi[big]) / psi[big])
    return GroundState(energy=e_min, state=psi, degenerate=len(picks) > 1, magnetization=n_up)


def correlations_ed(spec: ChainSpec, state: np.ndarray, include_dmi: bool = True) -> CorrelationSet:
    """All ``<s+_i s-_j>`` in ``state``; frame follows ``include_dmi``."""
    N = spec.N
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (1 << N,):
        raise InvalidArgumentError(f"state must have length 2^{N}")
    idx = np.arange(1 << N, dtype=np.int64)
    occ = [((idx >> (N - 1 - i)) & 1).astype(bool) for i in range(N)]
    G = np.zeros((N, N), dtype=complex)
    prob = np.abs(psi) ** 2
    for i in range(N):
        G[i, i] = prob[occ[i]].sum()
        for j in range(N):
            if i == j:
                continue
            # s+_i s-_j |s> = |s'> for s with j up and i down
            mask = occ[j] & ~occ[i]
            src = idx[mask]
            dst = src ^ ((1 << (N - 1 - i)) | (1 << (N - 1 - j)))
            G[i, j] = np.vdot(psi[dst], psi[src])
    return CorrelationSet("laboratory" if include_dmi else "effective", G)


def density_correlations_ed(N: int, state: np.ndarray) -> np.ndarray:
    """``<n_j n_l>`` with ``n = (1 + sz)/2``."""
    psi = np.asarray(state)
    idx = np.arange(1 << N, dtype=np.int64)
    occ = np.array([((idx >> (N - 1 - i)) & 1) for i in range(N)], dtype=float)
    prob = np.abs(psi) ** 2
    return (occ * prob) @ occ.T


def lab_frame_transform(eff: CorrelationSet, theta: float) -> CorrelationSet:
    """Undo the twist: multiply entry (i, j) by ``exp(i theta (j - i))``."""
    if eff.frame != "effective":
        raise InvalidArgumentError(f"expected effective-frame input, got {eff.frame!r}")
    n = eff.N
    sep = np.arange(n)[None, :] - np.arange(n)[:, None]
    return CorrelationSet("laboratory", eff.values * np.exp(1j * theta * sep))


def free_fermion_two_point(N: int, h_over_Jtilde: float, J_tilde: float = 1.0) -> np.ndarray:
    """Ground-state ``<c+_l c_m>`` of the Jordan-Wigner fermions.

    Hopping ``2 J_tilde`` on each bond and on-site energy ``2 h``.
    Zero modes (|eps| < 1e-12, odd N at zero field) are left empty.
    """
    if N < 2:
        raise InvalidArgumentError("N must be >= 2")
    if N > FREE_FERMION_CAP:
        raise CapExceededError(f"free-fermion path is limited to N <= {FREE_FERMION_CAP}")
    h = h_over_Jtilde * J_tilde
    T = np.diag(np.full(N, 2.0 * h)) + np.diag(np.full(N - 1, 2.0 * J_tilde), 1)
    T = T + np.triu(T, 1).T
    eps, phi = np.linalg.eigh(T)
    occ = phi[:, eps < -1e-12]
    return occ @ occ.T


def xx_correlations_free_fermion(
    N: int, h_over_Jtilde: float, *, J_tilde: float = 1.0, J_z: float = 0.0
) -> CorrelationSet:
    """Exact ``<s+_i s-_j>`` of the open XX chain via Jordan-Wigner.

    Writing ``1 - 2 n_l = A_l B_l`` with Majoranas ``A = c+ + c``,
    ``B = c+ - c``, Wick's theorem turns the string into the determinant of
    ``G[l, m] = <B_l A_m> = 2 C[l, m] - delta[l, m]`` restricted to rows
    ``i..j-1`` and columns ``i+1..j``; for a real ground state
    ``<s+_i s-_j> = det / 2``.
    """
    if J_z != 0.0:
        raise InvalidArgumentError("the free-fermion route is exact only at J_z = 0")
    C = free_fermion_two_point(N, h_over_Jtilde, J_tilde)
    G = 2.0 * C - np.eye(N)
    out = np.zeros((N, N), dtype=complex)
    for i in range(N):
        out[i, i] = C[i, i]
        for j in range(i + 1, N):
            val = 0.5 * np.linalg.det(G[i:j, i + 1 : j + 1])
            out[i, j] = out[j, i] = val
    return CorrelationSet("effective", out)


def density_correlations_free_fermion(N: int, h_over_Jtilde: float, J_tilde: float = 1.0) -> np.ndarray:
    """``<n_j n_l> = C_jj C_ll - C_jl C_lj + delta_jl C_jj`` (Wick)."""
    C = free_fermion_two_point(N, h_over_Jtilde, J_tilde)
    n = np.diag(C)
    return np.outer(n, n) - C * C.T + np.diag(n)


def default_q_grid(N: int, spacing: float) -> np.ndarray:
    """``q_n = (2 pi / spacing) n / N`` for ``n = 0..N`` (includes ``2 pi / spacing``)."""
    return (2.0 * math.pi / spacing) * np.arange(N + 1) / N


def structure_factor(
    densities: np.ndarray, spacing: float, q_grid: Sequence[float] | None = None
) -> list[tuple[float, float]]:
    """``S(q) = (1/N) sum_{j,l} exp(-i q (r_j - r_l)) <n_j n_l>`` on ``q_grid`` (1/nm).

    Raises
    ------
    InvalidArgumentError
        If the density map is not Hermitian.
    ContractViolationError
        If an ``S(q)`` has an imaginary part above 1e-10.
    """
    M = np.asarray(densities, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError("density map must be square")
    if np.max(np.abs(M - M.conj().T)) > 1e-10:
        raise InvalidArgumentError("density map must be Hermitian")
    N = M.shape[0]
    qs = default_q_grid(N, spacing) if q_grid is None else np.asarray(q_grid, dtype=float)
    rj = spacing * np.arange(N)
    out = []
    for q in qs:
        u = np.exp(1j * q * rj)
        S = np.vdot(u, M @ u) / N
        if abs(S.imag) > 1e-10:
            raise ContractViolationError(f"structure factor not real at q={q}: {S}")
        out.append((float(q), float(S.real)))
    return out
