import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chargeneg.errors import InvalidArgumentError, NumericalFailureError
from chargeneg.gaussian import (
    blocks,
    clamped_spectrum,
    fermi_dirac,
    ground_state_correlations,
    thermal_correlations,
)
from chargeneg.model import HoppingMatrix, build_all_connected, build_tight_binding_chain, make_partition


def _h(matrix):
    return HoppingMatrix(np.asarray(matrix, dtype=complex), "custom")


def test_infinite_temperature_is_half_identity():
    C = thermal_correlations(build_all_connected(5, 0), 0.0).C
    np.testing.assert_array_equal(C, 0.5 * np.eye(5))


def test_single_mode_fermi_function():
    C = thermal_correlations(_h([[-1.0]]), 20.0).C
    assert C[0, 0].real == pytest.approx(1 / (1 + np.exp(-20)), abs=1e-8)


def test_two_site_hand_diagonalization():
    beta = 1.0
    C = thermal_correlations(_h([[0, -1], [-1, 0]]), beta).C
    f_minus, f_plus = fermi_dirac(np.array([-1.0, 1.0]), beta)
    diag = (f_minus + f_plus) / 2
    off = (f_minus - f_plus) / 2
    np.testing.assert_allclose(C, [[diag, off], [off, diag]], atol=1e-12)


def test_negative_beta_rejected():
    with pytest.raises(InvalidArgumentError):
        thermal_correlations(build_all_connected(3, 0), -1.0)


def test_empty_and_full_band():
    H = build_tight_binding_chain(6)
    np.testing.assert_array_equal(ground_state_correlations(H, 0.0).C, np.zeros((6, 6)))
    np.testing.assert_array_equal(ground_state_correlations(H, 1.0).C, np.eye(6))


def test_sine_kernel_in_the_bulk():
    n = 1024
    C = ground_state_correlations(build_tight_binding_chain(n), 0.5).C
    i = n // 2
    for r in (3, 5, 11, 21):
        expected = np.sin(np.pi * r / 2) / (np.pi * r)
        assert C[i, i + r].real == pytest.approx(expected, abs=2e-3)


def test_low_temperature_limit_matches_ground_state():
    H = build_all_connected(8, 4)
    eps = np.linalg.eigvalsh(H.t)
    mu = 0.5 * (eps[3] + eps[4])
    C_T = thermal_correlations(H, 1e4, mu).C
    C_0 = ground_state_correlations(H, 0.5).C
    np.testing.assert_allclose(C_T, C_0, atol=1e-6)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 20.0))
def test_particle_hole(seed, beta):
    H = build_all_connected(6, seed)
    C = thermal_correlations(H, beta).C
    C_flip = thermal_correlations(HoppingMatrix(-H.t, "flipped"), beta).C
    np.testing.assert_allclose(C_flip, np.eye(6) - C, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 20.0))
def test_correlations_hermitian_with_valid_spectrum(seed, beta):
    C = thermal_correlations(build_all_connected(7, seed), beta).C
    np.testing.assert_allclose(C, C.conj().T, atol=1e-13)
    zeta = clamped_spectrum(C)
    assert zeta.min() >= 0 and zeta.max() <= 1


def test_blocks_reassemble():
    C = thermal_correlations(build_all_connected(8, 1), 1.0).C
    P = make_partition(8, 1, 3, 5, 6)
    bv = blocks(C, P)
    np.testing.assert_array_equal(bv.C_AB, C[np.ix_(P.sites, P.sites)])
    diag = np.diag(np.arange(8) / 8)
    bd = blocks(diag, P)
    assert not bd.C12.any() and not bd.C21.any()


def test_clamped_spectrum_rejects_invalid_matrix():
    with pytest.raises(NumericalFailureError):
        clamped_spectrum(np.diag([0.5, 1.1]))
