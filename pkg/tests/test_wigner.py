import itertools
import math

import pytest
from hypothesis import given, strategies as st
from sympy import S
from sympy.physics.wigner import clebsch_gordan as sympy_cg
from sympy.physics.wigner import wigner_3j as sympy_3j

from chiralxxz.errors import InvalidArgumentError
from chiralxxz.wigner import AngularLabel, clebsch_gordan, dmatrix_element, wigner3j


def all_labels(jmax):
    for j1, j2, j3 in itertools.product(range(jmax + 1), repeat=3):
        for m1 in range(-j1, j1 + 1):
            for m2 in range(-j2, j2 + 1):
                for m3 in range(-j3, j3 + 1):
                    yield j1, j2, j3, m1, m2, m3


def test_fixture_values():
    assert wigner3j(1, 1, 0, 0, 0, 0) == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
    assert wigner3j(1, 1, 2, 1, -1, 0) == pytest.approx(1 / math.sqrt(30), abs=1e-15)
    assert wigner3j(1, 1, 1, 0, 0, 1) == 0.0


def test_against_sympy_exhaustive():
    # independent symbolic implementation as oracle, j <= 3
    for lab in all_labels(3):
        ref = float(sympy_3j(*lab))
        assert wigner3j(*lab) == pytest.approx(ref, abs=1e-14)


def test_selection_rules_return_exact_zero():
    assert wigner3j(1, 1, 3, 0, 0, 0) == 0.0  # triangle
    assert wigner3j(2, 1, 1, 1, 1, 1) == 0.0  # m sum
    assert wigner3j(1, 1, 1, 0, 0, 0) == 0.0  # odd J with all m = 0


def test_negative_j_rejected():
    with pytest.raises(InvalidArgumentError):
        wigner3j(-1, 1, 1, 0, 0, 0)
    with pytest.raises(InvalidArgumentError):
        clebsch_gordan(1, 0, -1, 0, 1, 0)


def test_permutation_symmetry():
    for j1, j2, j3, m1, m2, m3 in all_labels(3):
        v = wigner3j(j1, j2, j3, m1, m2, m3)
        sign = (-1) ** (j1 + j2 + j3)
        assert wigner3j(j2, j3, j1, m2, m3, m1) == pytest.approx(v, abs=1e-15)
        assert wigner3j(j3, j1, j2, m3, m1, m2) == pytest.approx(v, abs=1e-15)
        assert wigner3j(j2, j1, j3, m2, m1, m3) == pytest.approx(sign * v, abs=1e-15)
        assert wigner3j(j1, j3, j2, m1, m3, m2) == pytest.approx(sign * v, abs=1e-15)


@given(
    st.integers(0, 6), st.integers(0, 6), st.integers(0, 12), st.data()
)
def test_mirror_symmetry_property(j1, j2, j3, data):
    m1 = data.draw(st.integers(-j1, j1))
    m2 = data.draw(st.integers(-j2, j2))
    m3 = -m1 - m2
    v = wigner3j(j1, j2, j3, m1, m2, m3)
    assert wigner3j(j1, j2, j3, -m1, -m2, -m3) == pytest.approx((-1) ** (j1 + j2 + j3) * v, abs=1e-13)


def test_cg_fixtures():
    assert clebsch_gordan(1, 0, 1, 0, 2, 0) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
    assert clebsch_gordan(1, 1, 1, -1, 2, 0) == pytest.approx(math.sqrt(1 / 6), abs=1e-15)
    assert clebsch_gordan(1, 1, 1, 1, 2, 0) == 0.0


def test_cg_matches_3j_relation():
    for j1, j2, J, m1, m2, M in all_labels(3):
        ref = (-1) ** (-j1 + j2 - M) * math.sqrt(2 * J + 1) * wigner3j(j1, j2, J, m1, m2, -M)
        assert clebsch_gordan(j1, m1, j2, m2, J, M) == pytest.approx(ref, abs=1e-14)


def test_cg_against_sympy():
    for j1, j2, J, m1, m2, M in all_labels(2):
        ref = float(sympy_cg(S(j1), S(j2), S(J), S(m1), S(m2), S(M)))
        assert clebsch_gordan(j1, m1, j2, m2, J, M) == pytest.approx(ref, abs=1e-14)


def test_cg_orthogonality():
    for j1, j2 in itertools.product(range(3), repeat=2):
        Js = range(abs(j1 - j2), j1 + j2 + 1)
        for J, Jp in itertools.product(Js, repeat=2):
            for M in range(-J, J + 1):
                for Mp in range(-Jp, Jp + 1):
                    s = sum(
                        clebsch_gordan(j1, m1, j2, m2, J, M) * clebsch_gordan(j1, m1, j2, m2, Jp, Mp)
                        for m1 in range(-j1, j1 + 1)
                        for m2 in range(-j2, j2 + 1)
                    )
                    assert s == pytest.approx(float(J == Jp and M == Mp), abs=1e-13)


def test_label_validation():
    with pytest.raises(InvalidArgumentError):
        AngularLabel(1, 2, 0)
    with pytest.raises(InvalidArgumentError):
        AngularLabel(-1, 0, 0)


def test_dmatrix_examples():
    v = dmatrix_element(AngularLabel(0, 0, 0), 0, 0, AngularLabel(1, 0, 0))
    oracle = float(sympy_3j(0, 1, 1, 0, 0, 0)) ** 2 * math.sqrt(3)
    assert v == pytest.approx(oracle, abs=1e-15)
    assert v == pytest.approx(1 / math.sqrt(3), abs=1e-15)
    assert dmatrix_element(AngularLabel(1, 1, 1), 0, 0, AngularLabel(1, 0, 1)) == 0.0
    v = dmatrix_element(AngularLabel(1, -1, 1), 1, -1, AngularLabel(0, 0, 0))
    ref = (-1) ** 0 * math.sqrt(3) * float(sympy_3j(1, 1, 0, -1, 1, 0)) * float(sympy_3j(1, 1, 0, 1, -1, 0))
    assert v == pytest.approx(ref, abs=1e-15)


def test_dmatrix_selection_scan():
    labels = [AngularLabel(j, k, m) for j in range(4) for k in range(-j, j + 1) for m in range(-j, j + 1)]
    for bra in labels:
        for ket in labels:
            for q in (-1, 0, 1):
                for r in (-1, 0, 1):
                    v = dmatrix_element(bra, q, r, ket)
                    allowed = bra.m == q + ket.m and bra.k == r + ket.k and abs(bra.j - ket.j) <= 1
                    if not allowed:
                        assert v == 0.0


def test_dmatrix_rank_restricted():
    with pytest.raises(InvalidArgumentError):
        dmatrix_element(AngularLabel(1, 0, 0), 2, 0, AngularLabel(1, 0, 0))
