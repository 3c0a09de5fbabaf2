import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import block_diag

from chargeneg.errors import InvalidArgumentError
from chargeneg.gaussian import ground_state_correlations, thermal_correlations
from chargeneg.model import RegionPartition, build_all_connected, make_partition
from chargeneg.negativity import covariance_pipeline, exact_entropies, log_negativity, renyi_negativity
from chargeneg.oracle import (
    dense_thermal_state,
    one_body_correlations,
    partial_time_reversal,
    pure_state,
    reduce_to_partition,
    renyi_negativity_exact,
    trace_norm_negativity,
)

from conftest import random_case


def test_product_state_has_zero_log_negativity():
    C = np.diag([0.1, 0.45, 0.8, 0.3, 0.66])
    P = make_partition(5, 0, 1, 2, 4)
    assert abs(log_negativity(C, P).value) < 1e-10


def test_product_state_renyi_negativity_is_moment_of_rho():
    # for C12 = 0 the xi sum vanishes only at n_e = 2; the total is log Tr rho^n_e, not zero
    zeta = np.array([0.1, 0.45, 0.8, 0.3, 0.66])
    P = make_partition(5, 0, 1, 2, 4)
    for n_e in (2, 4, 6):
        expected = np.sum(np.log(zeta**n_e + (1 - zeta) ** n_e))
        assert renyi_negativity(np.diag(zeta), P, n_e).value == pytest.approx(expected, abs=1e-12)


def test_infinite_temperature_pipeline():
    P = make_partition(4, 0, 1, 2, 3)
    pipe = covariance_pipeline(0.5 * np.eye(4), P)
    assert not pipe.Gamma.any() and not pipe.GammaPlus.any()
    np.testing.assert_allclose(pipe.C_Xi, 0.5 * np.eye(4), atol=1e-15)


def test_single_mode_xi():
    z = 0.23
    pipe = covariance_pipeline(np.diag([z, 0.6]), make_partition(2, 0, 0, 1, 1))
    expected = (1 - z) ** 2 / (z**2 + (1 - z) ** 2)
    assert np.any(np.isclose(pipe.XiSpectrum, expected, rtol=0, atol=1e-14))


@pytest.mark.parametrize("seed", range(8))
def test_xi_spectrum_is_real_and_paired(seed):
    H, beta, P = random_case(7, seed)
    pipe = covariance_pipeline(thermal_correlations(H, beta), P)
    np.testing.assert_allclose(pipe.SqrtXi**2 + pipe.SqrtOneMinusXi**2, 1, atol=1e-12)
    assert pipe.XiSpectrum.min() >= 0 and pipe.XiSpectrum.max() <= 1
    assert pipe.xi_residual() < 1e-8


def test_bell_pair():
    psi = np.zeros(4)
    psi[1] = psi[2] = 1 / np.sqrt(2)
    state = pure_state(psi)
    C = one_body_correlations(state)
    np.testing.assert_allclose(np.abs(C), 0.5, atol=1e-15)
    P = make_partition(2, 0, 0, 1, 1)
    gauss = log_negativity(C, P).value
    fock = trace_norm_negativity(partial_time_reversal(state, 1))
    assert gauss == pytest.approx(fock, abs=1e-9)
    assert gauss == pytest.approx(np.log(2), abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_matches_fock_space(seed):
    H, beta, P = random_case(6, seed)
    corr = thermal_correlations(H, beta)
    rt = partial_time_reversal(reduce_to_partition(dense_thermal_state(H, beta), P), P.nA)
    assert log_negativity(corr, P).value == pytest.approx(trace_norm_negativity(rt), abs=1e-9)
    for n_e in (2, 4):
        assert renyi_negativity(corr, P, n_e).value == pytest.approx(renyi_negativity_exact(rt, n_e), abs=1e-9)


def test_pure_state_equals_half_renyi_entropy():
    H = build_all_connected(4, 9)
    corr = ground_state_correlations(H, 0.5)
    P = make_partition(4, 0, 1, 2, 3)
    zeta = np.clip(np.linalg.eigvalsh(corr.C[:2, :2]), 0, 1)
    s_half = 2 * np.sum(np.log(np.sqrt(zeta) + np.sqrt(1 - zeta)))
    assert log_negativity(corr, P).value == pytest.approx(s_half, abs=1e-10)
    assert renyi_negativity(corr, P, 2).value == pytest.approx(0.0, abs=1e-10)


def test_odd_renyi_index_rejected():
    with pytest.raises(InvalidArgumentError):
        renyi_negativity(np.eye(2) / 2, make_partition(2, 0, 0, 1, 1), 3)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.lists(st.floats(0, 2 * np.pi), min_size=7, max_size=7))
def test_local_phase_rotation_invariance(seed, thetas):
    H, beta, P = random_case(7, seed)
    C = thermal_correlations(H, beta).C
    D = np.diag(np.exp(1j * np.asarray(thetas)))
    rotated = D @ C @ D.conj().T
    assert log_negativity(rotated, P).value == pytest.approx(log_negativity(C, P).value, abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_region_swap_symmetry(seed):
    H, beta, P = random_case(7, seed)
    corr = thermal_correlations(H, beta)
    assert log_negativity(corr, P.swapped()).value == pytest.approx(log_negativity(corr, P).value, abs=1e-12)
    assert renyi_negativity(corr, P.swapped(), 4).value == pytest.approx(
        renyi_negativity(corr, P, 4).value, abs=1e-10
    )


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_padding_with_uncorrelated_mode(seed, occupation):
    H, beta, P = random_case(6, seed)
    C = thermal_correlations(H, beta).C
    padded = block_diag(C, [[occupation]])
    Q = RegionPartition(7, P.A + (6,), P.B)
    assert log_negativity(padded, Q).value == pytest.approx(log_negativity(C, P).value, abs=1e-9)


def test_entropies():
    half = exact_entropies(np.array([[0.5]]))
    assert half["vonNeumann"] == pytest.approx(np.log(2))
    pure = exact_entropies(np.diag([0.0, 1.0, 1.0]))
    assert pure["vonNeumann"] == 0 and all(v == pytest.approx(0) for v in pure["renyi"].values())


def test_renyi_entropy_brackets_von_neumann():
    C = thermal_correlations(build_all_connected(5, 1), 0.7).C[:3, :3]
    S = exact_entropies(C, ())["vonNeumann"]
    lo = exact_entropies(C, (1 + 1e-6,))["renyi"][1 + 1e-6]
    hi = exact_entropies(C, (1 - 1e-6,))["renyi"][1 - 1e-6]
    assert lo <= S <= hi
    assert hi - lo < 1e-5
