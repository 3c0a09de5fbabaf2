"""Two-point correlation matrices of free-fermion states.

Convention: ``C_ij = <c_i^dag c_j>``.  With ``c_i = sum_k V_ik d_k`` and
``h = V diag(eps) V^dag`` this is ``C = f(h)^T``, the transpose of the
occupation function applied to the single-particle Hamiltonian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError, NumericalFailureError
from .model import HoppingMatrix, RegionPartition

__all__ = [
    "CorrelationMatrix",
    "BlockViews",
    "fermi_dirac",
    "thermal_correlations",
    "ground_state_correlations",
    "blocks",
    "clamped_spectrum",
]

SPECTRUM_TOL = 1e-12
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class CorrelationMatrix:
    C: np.ndarray
    beta: float = np.inf
    mu: float = 0.0

    @property
    def n(self) -> int:
        return self.C.shape[0]

    def restrict(self, sites) -> np.ndarray:
        idx = np.asarray(sites)
        return self.C[np.ix_(idx, idx)]


@dataclass(frozen=True)
class BlockViews:
    C11: np.ndarray
    C12: np.ndarray
    C21: np.ndarray
    C22: np.ndarray

    @property
    def C_AB(self) -> np.ndarray:
        return np.block([[self.C11, self.C12], [self.C21, self.C22]])

    @property
    def nA(self) -> int:
        return self.C11.shape[0]

    @property
    def nB(self) -> int:
        return self.C22.shape[0]

    def swapped(self) -> BlockViews:
        return BlockViews(self.C22, self.C21, self.C12, self.C11)


def fermi_dirac(eps: np.ndarray, beta: float) -> np.ndarray:
    """``1 / (1 + exp(beta eps))``, overflow-free; ``beta = inf`` gives a step with 1/2 at 0."""
    eps = np.asarray(eps, dtype=float)
    if np.isinf(beta):
        return np.where(eps < 0, 1.0, np.where(eps > 0, 0.0, 0.5))
    return 0.5 * (1.0 - np.tanh(0.5 * beta * eps))


def _is_real_tridiagonal(h: np.ndarray) -> bool:
    return not np.any(np.imag(h)) and not np.any(np.triu(h, 2)) and not np.any(np.tril(h, -2))


def _diagonalize(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition with the residual bound checked."""
    try:
        if h.shape[0] > 2 and _is_real_tridiagonal(h):
            d = np.real(np.diag(h)).copy()
            e = np.real(np.diag(h, 1)).copy()
            eps, V = scipy.linalg.eigh_tridiagonal(d, e)
            hV = d[:, None] * V
            hV[:-1] += e[:, None] * V[1:]
            hV[1:] += e[:, None] * V[:-1]
        else:
            eps, V = np.linalg.eigh(h)
            hV = h @ V
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalFailureError(f"eigensolver did not converge: {exc}") from exc
    norm = max(np.abs(eps).max(), np.finfo(float).tiny)
    residual = np.linalg.norm(hV - V * eps)
    if residual > RESIDUAL_TOL * norm:
        raise NumericalFailureError(f"eigensolver residual {residual:.3e} exceeds bound")
    return eps, V


def _single_particle(H: HoppingMatrix, mu: float) -> np.ndarray:
    h = np.asarray(H.t, dtype=complex)
    if not np.allclose(h, h.conj().T, atol=0, rtol=0):
        raise InvalidArgumentError("hopping matrix is not Hermitian")
    return h - mu * np.eye(H.n)


def thermal_correlations(H: HoppingMatrix, beta: float, mu: float = 0.0) -> CorrelationMatrix:
    """Correlations of ``exp(-beta (H - mu N)) / Z``."""
    if not beta >= 0:
        raise InvalidArgumentError("beta must be non-negative")
    h = _single_particle(H, mu)
    if beta == 0:
        return CorrelationMatrix(0.5 * np.eye(H.n, dtype=complex), 0.0, mu)
    eps, V = _diagonalize(h)
    f = fermi_dirac(eps, beta)
    C = (V.conj() * f) @ V.T
    return CorrelationMatrix(C, float(beta), mu)


def ground_state_correlations(H: HoppingMatrix, filling: float) -> CorrelationMatrix:
    """Projector onto the ``round(filling * n)`` lowest single-particle modes.

    Degenerate levels at the Fermi energy are filled in ascending eigenvector
    index as returned by the eigensolver.
    """
    if not 0.0 <= filling <= 1.0:
        raise InvalidArgumentError("filling must lie in [0, 1]")
    n = H.n
    n_occ = int(np.floor(filling * n + 0.5))
    if n_occ == 0:
        return CorrelationMatrix(np.zeros((n, n), dtype=complex))
    if n_occ == n:
        return CorrelationMatrix(np.eye(n, dtype=complex))
    eps, V = _diagonalize(_single_particle(H, 0.0))
    occ = V[:, :n_occ]
    C = occ.conj() @ occ.T
    return CorrelationMatrix(C, np.inf, float(0.5 * (eps[n_occ - 1] + eps[n_occ])))


def blocks(corr: CorrelationMatrix | np.ndarray, P: RegionPartition) -> BlockViews:
    """Split ``C`` restricted to A u B into its four region blocks (A first)."""
    C = corr.C if isinstance(corr, CorrelationMatrix) else np.asarray(corr)
    if C.shape[0] != P.n:
        raise InvalidArgumentError(f"partition is for {P.n} sites, matrix has {C.shape[0]}")
    A, B = np.asarray(P.A), np.asarray(P.B)
    return BlockViews(C[np.ix_(A, A)], C[np.ix_(A, B)], C[np.ix_(B, A)], C[np.ix_(B, B)])


def clamped_spectrum(C: np.ndarray, tol: float = SPECTRUM_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian correlation matrix, clamped into [0, 1].

    Values further than ``tol`` outside the interval indicate an invalid
    matrix and raise instead of being clamped.
    """
    zeta = np.linalg.eigvalsh(C)
    if zeta.size and (zeta.min() < -tol or zeta.max() > 1 + tol):
        raise NumericalFailureError(
            f"correlation spectrum [{zeta.min():.3e}, {zeta.max():.3e}] leaves [0, 1]"
        )
    return np.clip(zeta, 0.0, 1.0)
