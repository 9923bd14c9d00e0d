import math

import numpy as np
import pytest

from chiralxxz.chain import (
    ChainSpec,
    CorrelationSet,
    build_chain_hamiltonian,
    chain_spectrum,
    correlations_ed,
    default_q_grid,
    density_correlations_ed,
    density_correlations_free_fermion,
    ed_ground_state,
    lab_frame_transform,
    structure_factor,
    xx_correlations_free_fermion,
)
from chiralxxz.errors import CapExceededError, InvalidArgumentError
from chiralxxz.spin_model import PAULI, SpinCouplings, two_site_spectrum


def kron_chain(c: SpinCouplings, N: int, include_dmi=True) -> np.ndarray:
    """Independent dense construction from Pauli kron products."""
    X, Y, Z, I = PAULI["x"], PAULI["y"], PAULI["z"], PAULI["i"]

    def op(single: dict) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for i in range(N):
            out = np.kron(out, single.get(i, I))
        return out

    jxy, d = (c.J_xy, c.D) if include_dmi else (c.J_tilde, 0.0)
    H = np.zeros((2**N, 2**N), dtype=complex)
    for i in range(N - 1):
        j = i + 1
        H += jxy * (op({i: X, j: X}) + op({i: Y, j: Y}))
        H -= d * (op({i: X, j: Y}) - op({i: Y, j: X}))
        H += c.J_z * op({i: Z, j: Z})
    for i in range(N):
        H += c.h_field * op({i: Z})
    return H


def random_couplings(rng) -> SpinCouplings:
    return SpinCouplings(*rng.uniform(-1, 1, 4))


def test_matches_kron_construction():
    rng = np.random.default_rng(3)
    for N in (2, 3, 5):
        c = random_couplings(rng)
        for dmi in (True, False):
            H = build_chain_hamiltonian(ChainSpec(N, c), dmi).toarray()
            assert np.allclose(H, kron_chain(c, N, dmi), atol=1e-14)


def test_two_site_spectrum():
    c = SpinCouplings(0.7, -0.3, 0.2, 0.4)
    w = np.linalg.eigvalsh(build_chain_hamiltonian(ChainSpec(2, c)).toarray())
    assert np.allclose(w, two_site_spectrum(c), atol=1e-13)
    assert np.allclose(chain_spectrum(ChainSpec(2, c)), w, atol=1e-13)


def test_zero_couplings_give_zero_matrix():
    H = build_chain_hamiltonian(ChainSpec(3, SpinCouplings(0, 0, 0, 0)))
    assert H.shape == (8, 8) and abs(H).max() == 0


def test_xx_dimer_ground_energy():
    gs = ed_ground_state(ChainSpec(2, SpinCouplings(1.0, 0.0, 0.0, 0.0)))
    assert gs.energy == pytest.approx(-2.0, abs=1e-14)
    assert not gs.degenerate and gs.magnetization == 1


def test_hermitian_and_conserves_magnetization():
    rng = np.random.default_rng(5)
    N = 6
    H = build_chain_hamiltonian(ChainSpec(N, random_couplings(rng))).toarray()
    assert np.allclose(H, H.conj().T, atol=1e-14)
    Sz = sum(
        np.kron(np.kron(np.eye(2**i), PAULI["z"]), np.eye(2 ** (N - 1 - i))) for i in range(N)
    )
    assert np.allclose(H @ Sz, Sz @ H, atol=1e-13)


def test_polarized_limit():
    N = 5
    gs = ed_ground_state(ChainSpec(N, SpinCouplings(1.0, 0.3, 0.1, 10.0)))
    assert gs.magnetization == 0
    assert abs(gs.state[0]) == pytest.approx(1.0, abs=1e-14)
    corr = correlations_ed(ChainSpec(N, SpinCouplings(1.0, 0.3, 0.1, 10.0)), gs.state)
    assert np.allclose(corr.values, 0.0, atol=1e-14)


def test_sector_spectrum_equals_full():
    rng = np.random.default_rng(7)
    spec = ChainSpec(7, random_couplings(rng))
    full = np.linalg.eigvalsh(build_chain_hamiltonian(spec).toarray())
    assert np.allclose(chain_spectrum(spec), full, atol=1e-12)


def test_gauge_equivalence_small():
    rng = np.random.default_rng(11)
    for N in (3, 6):
        spec = ChainSpec(N, random_couplings(rng))
        assert np.allclose(chain_spectrum(spec, True), chain_spectrum(spec, False), atol=1e-12)


def test_correlation_invariants():
    rng = np.random.default_rng(13)
    spec = ChainSpec(6, random_couplings(rng))
    gs = ed_ground_state(spec)
    G = correlations_ed(spec, gs.state).values
    assert np.allclose(G, G.conj().T, atol=1e-14)
    d = np.diag(G)
    assert np.all(np.abs(d.imag) < 1e-14) and np.all((d.real >= -1e-14) & (d.real <= 1 + 1e-14))


def test_ground_state_deterministic():
    spec = ChainSpec(5, SpinCouplings(1.0, 0.2, 0.0, 0.0))
    a, b = ed_ground_state(spec), ed_ground_state(spec)
    assert np.array_equal(a.state, b.state) and a.degenerate == b.degenerate


def test_degenerate_ground_state_flagged():
    # odd N at zero field: the two magnetization sectors n and N-n are degenerate
    gs = ed_ground_state(ChainSpec(3, SpinCouplings(1.0, 0.0, 0.0, 0.0)))
    assert gs.degenerate


def test_lab_transform_examples():
    eff = CorrelationSet("effective", np.ones((4, 4), dtype=complex))
    assert np.allclose(lab_frame_transform(eff, 0.0).values, eff.values)
    lab = lab_frame_transform(eff, math.pi / 2)
    assert lab.value(0, 1) == pytest.approx(1j) and lab.value(1, 0) == pytest.approx(-1j)
    assert lab.frame == "laboratory"
    with pytest.raises(InvalidArgumentError):
        lab_frame_transform(lab, 0.1)
    with pytest.raises(InvalidArgumentError):
        CorrelationSet("rotating", eff.values)


def test_lab_equals_twisted_effective():
    c = SpinCouplings(0.8, 0.5, -0.2, 0.37)
    spec = ChainSpec(6, c)
    lab = correlations_ed(spec, ed_ground_state(spec, True).state, True)
    eff = correlations_ed(spec, ed_ground_state(spec, False).state, False)
    assert np.allclose(lab.values, lab_frame_transform(eff, c.theta).values, atol=1e-10)
    assert np.allclose(np.abs(lab.values), np.abs(eff.values), atol=1e-10)


@pytest.mark.parametrize("N", [2, 5, 8, 12])
@pytest.mark.parametrize("h", [0.0, 0.3, -0.7, 1.5])
def test_free_fermion_matches_ed(N, h):
    spec = ChainSpec(N, SpinCouplings(1.0, 0.0, 0.0, h))
    gs = ed_ground_state(spec, False)
    if gs.degenerate:
        pytest.skip("degenerate ground state has no unique correlations")
    ed = correlations_ed(spec, gs.state, False).values
    ff = xx_correlations_free_fermion(N, h).values
    assert np.allclose(ff, ed, atol=1e-10)
    dd = density_correlations_ed(N, gs.state)
    assert np.allclose(density_correlations_free_fermion(N, h), dd, atol=1e-10)


def test_free_fermion_saturated():
    ff = xx_correlations_free_fermion(20, 5.0).values
    assert np.allclose(ff, 0.0, atol=1e-14)


def test_free_fermion_refuses_interactions():
    with pytest.raises(InvalidArgumentError, match="J_z"):
        xx_correlations_free_fermion(10, 0.0, J_z=0.1)


def test_free_fermion_cap():
    with pytest.raises(CapExceededError):
        xx_correlations_free_fermion(201, 0.0)


def test_ed_cap():
    spec = ChainSpec(15, SpinCouplings(1, 0, 0, 0))
    with pytest.raises(CapExceededError, match="N <= 14"):
        build_chain_hamiltonian(spec)
    with pytest.raises(InvalidArgumentError):
        ChainSpec(1, SpinCouplings(1, 0, 0, 0))


def test_structure_factor_uniform():
    N = 6
    M = np.full((N, N), 0.25)
    S = dict(structure_factor(M, 1.0))
    assert S[0.0] == pytest.approx(0.25 * N)
    # sum_j e^{iqj} vanishes at the interior grid points
    for q, v in list(S.items())[1:-1]:
        assert v == pytest.approx(0.0, abs=1e-14)


def test_structure_factor_grid_and_positivity():
    N, a = 10, 1.7
    qs = default_q_grid(N, a)
    assert qs[-1] == pytest.approx(2 * math.pi / a)
    M = density_correlations_free_fermion(N, 0.2)
    S = structure_factor(M, a)
    assert [q for q, _ in S] == pytest.approx(list(qs))
    # M is positive semidefinite, so every S(q) is non-negative
    assert np.linalg.eigvalsh(M).min() > -1e-12
    assert all(v >= -1e-12 for _, v in S)


def test_structure_factor_errors():
    M = np.array([[1.0, 0.2], [0.1, 1.0]])
    with pytest.raises(InvalidArgumentError):
        structure_factor(M, 1.0)
    with pytest.raises(InvalidArgumentError):
        structure_factor(np.ones((2, 3)), 1.0)
    # Hermitian input always gives a real quadratic form
    S = structure_factor(np.array([[1.0, 0.5j], [-0.5j, 1.0]]), 1.0, [1.0, 2.0])
    assert all(np.isfinite(v) for _, v in S)
