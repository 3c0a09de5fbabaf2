"""Brute-force Fock-space reference for small systems (at most 12 modes).

Basis states are occupation bitstrings in lexicographic order, mode 0 being
the most significant bit.  Fermionic signs follow the Jordan-Wigner string
over lower-indexed modes: ``c_j |n> = (-1)^{sum_{k<j} n_k} |n - e_j>``.

Everything here is dense and unoptimized on purpose; it exists to check the
Gaussian formulas, not to be fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .cumulants import CumulantSet
from .errors import InvalidArgumentError, NumericalFailureError, ResourceLimitError
from .model import HoppingMatrix, RegionPartition

__all__ = [
    "MAX_MODES",
    "DenseState",
    "PartialTRState",
    "annihilation_operators",
    "many_body_hamiltonian",
    "dense_thermal_state",
    "pure_state",
    "permute_modes",
    "partial_trace",
    "reduce_to_partition",
    "partial_time_reversal",
    "trace_norm_negativity",
    "renyi_negativity_exact",
    "charge_distribution",
    "charge_cumulants_exact",
    "one_body_correlations",
]

MAX_MODES = 12


@dataclass(frozen=True)
class DenseState:
    n_modes: int
    rho: np.ndarray

    def validate(self, tol: float = 1e-12) -> None:
        if abs(np.trace(self.rho) - 1) > tol:
            raise NumericalFailureError("density matrix is not normalized")
        if np.abs(self.rho - self.rho.conj().T).max() > tol:
            raise NumericalFailureError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(self.rho).min() < -tol:
            raise NumericalFailureError("density matrix has negative eigenvalues")


@dataclass(frozen=True)
class PartialTRState:
    matrix: np.ndarray
    nA: int
    nB: int


def _check_modes(n: int) -> None:
    if n > MAX_MODES:
        raise ResourceLimitError(f"{n} modes exceeds the Fock-space cap of {MAX_MODES}")
    if n < 1:
        raise InvalidArgumentError("need at least one mode")


def _occupations(n: int) -> np.ndarray:
    """``occ[s, i]`` = occupation of mode i in basis state s."""
    s = np.arange(2**n)
    shifts = n - 1 - np.arange(n)
    return (s[:, None] >> shifts[None, :]) & 1


def annihilation_operators(n: int) -> list[sp.csr_matrix]:
    """Sparse ``c_0 .. c_{n-1}`` in the Jordan-Wigner occupation basis."""
    _check_modes(n)
    occ = _occupations(n)
    dim = 2**n
    ops = []
    for j in range(n):
        src = np.nonzero(occ[:, j])[0]
        dst = src - (1 << (n - 1 - j))
        sign = (-1.0) ** occ[src, :j].sum(axis=1)
        ops.append(sp.csr_matrix((sign, (dst, src)), shape=(dim, dim)))
    return ops


def many_body_hamiltonian(H: HoppingMatrix) -> np.ndarray:
    """Dense ``sum_ij t_ij c_i^dag c_j`` on the full Fock space."""
    _check_modes(H.n)
    c = annihilation_operators(H.n)
    dim = 2**H.n
    out = sp.csr_matrix((dim, dim), dtype=complex)
    for i, j in zip(*np.nonzero(H.t)):
        out = out + H.t[i, j] * (c[i].T.conj() @ c[j])
    return out.toarray()


def dense_thermal_state(H: HoppingMatrix, beta: float) -> DenseState:
    """``exp(-beta H) / Z`` via Hermitian diagonalization."""
    _check_modes(H.n)
    if beta < 0:
        raise InvalidArgumentError("beta must be non-negative")
    dim = 2**H.n
    if beta == 0:
        return DenseState(H.n, np.eye(dim, dtype=complex) / dim)
    E, V = np.linalg.eigh(many_body_hamiltonian(H))
    w = np.exp(-beta * (E - E.min()))
    rho = (V * (w / w.sum())) @ V.conj().T
    return DenseState(H.n, 0.5 * (rho + rho.conj().T))


def pure_state(psi: np.ndarray) -> DenseState:
    psi = np.asarray(psi, dtype=complex)
    n = int(round(np.log2(psi.size)))
    if 2**n != psi.size:
        raise InvalidArgumentError("state vector length must be a power of two")
    _check_modes(n)
    psi = psi / np.linalg.norm(psi)
    return DenseState(n, np.outer(psi, psi.conj()))


def _reorder_signs(occ: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Sign of re-sorting the occupied creation operators into the new order."""
    n = occ.shape[1]
    pos = np.empty(n, dtype=int)
    pos[np.asarray(order)] = np.arange(n)
    inversions = np.zeros(occ.shape[0], dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            if pos[i] > pos[j]:
                inversions += occ[:, i] & occ[:, j]
    return (-1.0) ** inversions


def permute_modes(state: DenseState, order: Sequence[int]) -> DenseState:
    """Relabel modes so that new mode k is old mode ``order[k]``."""
    n = state.n_modes
    if sorted(order) != list(range(n)):
        raise InvalidArgumentError("order must be a permutation of all modes")
    occ = _occupations(n)
    new_occ = occ[:, np.asarray(order)]
    new_index = new_occ @ (1 << (n - 1 - np.arange(n)))
    U = sp.csr_matrix((_reorder_signs(occ, order), (new_index, np.arange(2**n))), shape=(2**n, 2**n))
    tmp = np.asarray(U @ state.rho)
    return DenseState(n, np.asarray(U.conj() @ tmp.T).T)


def partial_trace(state: DenseState, keep: Sequence[int]) -> DenseState:
    """Reduced state on ``keep`` (in the given order).

    The kept modes are first moved to the front of the Jordan-Wigner order,
    after which the remaining tail modes are traced out directly.  This is
    consistent for states commuting with fermion parity.
    """
    keep = list(keep)
    n = state.n_modes
    if len(set(keep)) != len(keep) or any(not 0 <= k < n for k in keep):
        raise InvalidArgumentError("keep must be distinct modes of the state")
    if not keep:
        raise InvalidArgumentError("keep must be non-empty")
    rest = [i for i in range(n) if i not in keep]
    if keep + rest != list(range(n)):
        state = permute_modes(state, keep + rest)
    k = len(keep)
    r = state.rho.reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
    return DenseState(k, np.einsum("ajbj->ab", r))


def reduce_to_partition(state: DenseState, P: RegionPartition) -> DenseState:
    if P.n != state.n_modes:
        raise InvalidArgumentError("partition does not match the number of modes")
    return partial_trace(state, P.sites)


def _popcount(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


def partial_time_reversal(state: DenseState, nA: int) -> PartialTRState:
    """Partial time reversal on the first ``nA`` modes of a state on A u B.

    ``(|n_A n_B><m_A m_B|)^R = (-1)^phi |m_A n_B><n_A m_B|`` with

        phi = t1(t1+2)/2 + u1(u1+2)/2 + t2 u2 + t1 t2 + u1 u2 + (u1+u2)(t1+t2)

    where t1, t2 count particles of ``n`` in A, B and u1, u2 those of ``m``.
    ``phi`` can be half-integer, so ``(-1)^phi = i^(2 phi)``.
    """
    n = state.n_modes
    nB = n - nA
    if not 1 <= nA < n:
        raise InvalidArgumentError("both regions need at least one mode")
    dA, dB = 2**nA, 2**nB
    cA = _popcount(np.arange(dA))
    cB = _popcount(np.arange(dB))
    t1 = cA[:, None, None, None]
    t2 = cB[None, :, None, None]
    u1 = cA[None, None, :, None]
    u2 = cB[None, None, None, :]
    two_phi = t1 * (t1 + 2) + u1 * (u1 + 2) + 2 * (t2 * u2 + t1 * t2 + u1 * u2 + (u1 + u2) * (t1 + t2))
    phase = (1j) ** (two_phi % 4)
    r = state.rho.reshape(dA, dB, dA, dB) * phase
    out = r.transpose(2, 1, 0, 3).reshape(dA * dB, dA * dB)
    return PartialTRState(out, nA, nB)


def trace_norm_negativity(rt: PartialTRState) -> float:
    """``log ||rho^R||_1`` from the singular values."""
    s = np.linalg.svd(rt.matrix, compute_uv=False)
    return float(np.log(s.sum()))


def renyi_negativity_exact(rt: PartialTRState, n: int) -> float:
    """Renyi negativity from alternating products of ``rho^R`` and its adjoint.

    Even n: ``log Tr (R R^dag)^(n/2)``; odd n: ``log Tr[(R R^dag)^((n-1)/2) R]``.
    """
    if n < 2:
        raise InvalidArgumentError("Renyi index must be at least 2")
    R = rt.matrix
    RR = R @ R.conj().T
    prod = np.linalg.matrix_power(RR, n // 2)
    if n % 2:
        prod = prod @ R
    tr = np.trace(prod)
    if abs(tr.imag) > 1e-10 * max(1.0, abs(tr)) or tr.real <= 0:
        raise NumericalFailureError(f"trace {tr} has no real logarithm")
    return float(np.log(tr.real))


def charge_distribution(state: DenseState, nA: int) -> np.ndarray:
    """Joint distribution ``p[q_A, q_B]`` of a state on A u B (A first)."""
    n = state.n_modes
    occ = _occupations(n)
    qa = occ[:, :nA].sum(axis=1)
    qb = occ[:, nA:].sum(axis=1)
    p = np.zeros((nA + 1, n - nA + 1))
    np.add.at(p, (qa, qb), np.real(np.diag(state.rho)))
    return p


def _series_log(m: np.ndarray, order: int) -> np.ndarray:
    """Truncated log of a bivariate power series with ``m[0, 0] == 1``."""
    u = m.copy()
    u[0, 0] = 0.0
    out = np.zeros_like(m)
    power = np.zeros_like(m)
    power[0, 0] = 1.0
    for k in range(1, order + 1):
        power = _series_mul(power, u, order)
        out += (-1) ** (k + 1) * power / k
    return out


def _series_mul(x: np.ndarray, y: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros_like(x)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            if x[i, j] == 0:
                continue
            for k in range(order + 1 - i - j):
                for l in range(order + 1 - i - j - k):
                    out[i + k, j + l] += x[i, j] * y[k, l]
    return out


def charge_cumulants_exact(state: DenseState, P: RegionPartition | None = None,
                           max_order: int = 4, nA: int | None = None) -> CumulantSet:
    """Joint cumulants of Q_A, Q_B from the exact charge distribution.

    Pass either a partition of the full state or, for a state already on
    A u B, the size ``nA`` of region A.
    """
    if max_order > 8:
        raise InvalidArgumentError("max_order is capped at 8")
    if P is not None:
        state = reduce_to_partition(state, P)
        nA = P.nA
    if nA is None:
        raise InvalidArgumentError("need a partition or nA")
    p = charge_distribution(state, nA)
    qa = np.arange(p.shape[0])
    qb = np.arange(p.shape[1])
    mean_a = float((p.sum(axis=1) * qa).sum())
    mean_b = float((p.sum(axis=0) * qb).sum())
    da = qa - mean_a
    db = qb - mean_b
    moments = np.zeros((max_order + 1, max_order + 1))
    for i in range(max_order + 1):
        for j in range(max_order + 1 - i):
            moments[i, j] = (p * np.outer(da**i, db**j)).sum() / (factorial(i) * factorial(j))
    K = _series_log(moments, max_order)
    out = {(1, 0): mean_a, (0, 1): mean_b}
    for i in range(max_order + 1):
        for j in range(max_order + 1 - i):
            if i + j >= 2:
                out[(i, j)] = float(K[i, j] * factorial(i) * factorial(j))
    return CumulantSet(out)


def one_body_correlations(state: DenseState) -> np.ndarray:
    """``C_ij = Tr(rho c_i^dag c_j)``."""
    c = annihilation_operators(state.n_modes)
    n = state.n_modes
    C = np.zeros((n, n), dtype=complex)
    for i in range(n):
        ci_dag = c[i].T.conj()
        for j in range(n):
            C[i, j] = np.trace((ci_dag @ c[j]) @ state.rho)
    return C
