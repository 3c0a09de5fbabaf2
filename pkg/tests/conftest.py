import numpy as np
import pytest

from chargeneg.model import RegionPartition, build_hamiltonian


def random_case(n: int, seed: int, beta_choices=(0.2, 1.0, 5.0)):
    """Random all-connected H, a temperature and random disjoint regions."""
    rng = np.random.default_rng(1000 + seed)
    H = build_hamiltonian("all-connected", n, seed)
    beta = float(rng.choice(beta_choices))
    perm = rng.permutation(n)
    nA = int(rng.integers(1, n))
    nB = int(rng.integers(1, n - nA + 1))
    P = RegionPartition(n, tuple(sorted(map(int, perm[:nA]))), tuple(sorted(map(int, perm[nA:nA + nB]))))
    return H, beta, P


@pytest.fixture
def case_factory():
    return random_case


# criterion number -> (passed, one-line detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
