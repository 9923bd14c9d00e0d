import numpy as np
import pytest

from chiralxxz.dipole_pair import EnantiomerPair
from chiralxxz.rotor import BasisTruncation, MoleculeSpec
from chiralxxz.sweep import pair_sweep

ACCEPTANCE_LINES: list[str] = []

GRID40 = 0.5 * np.arange(1, 41)  # 40 points in (0, 20]
FINE = 0.05 * np.arange(1, 401)  # step 0.05 on (0, 20]


@pytest.fixture(scope="session")
def mol_L():
    return MoleculeSpec()


@pytest.fixture(scope="session")
def mol_R():
    return MoleculeSpec().mirror()


@pytest.fixture(scope="session")
def trunc():
    return BasisTruncation(8)


@pytest.fixture(scope="session")
def sweeps40():
    """Pair sweeps on the 40-point grid for every configuration."""
    return {lab: pair_sweep(EnantiomerPair.from_label(lab), GRID40) for lab in ("LL", "LR", "RL", "RR")}


@pytest.fixture(scope="session")
def rl_pair():
    return EnantiomerPair.from_label("RL")


@pytest.fixture(scope="session")
def rl_fine(rl_pair):
    return pair_sweep(rl_pair, FINE)


@pytest.fixture
def report():
    def _report(number: int, ok: bool, detail: str) -> None:
        line = f"ACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
