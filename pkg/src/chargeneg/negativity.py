"""Logarithmic and Renyi negativity of Gaussian states, and Gaussian entropies.

The partial time reversal of a Gaussian state is again Gaussian.  Starting
from ``Gamma = I - 2 C_AB`` the transformed covariances

    Gamma_pm = [[-Gamma11, +-i Gamma12], [+-i Gamma21, Gamma22]]

define ``C_Xi = (I - (I + Gamma_+ Gamma_-)^{-1} (Gamma_+ + Gamma_-)) / 2``, whose
spectrum ``xi`` together with the spectrum ``zeta`` of ``C_AB`` gives

    E     = sum log[xi^(1/2) + (1-xi)^(1/2)] + 1/2 sum log[zeta^2 + (1-zeta)^2]
    E_n   = sum log[xi^(n/2) + (1-xi)^(n/2)] + n/2 sum log[zeta^2 + (1-zeta)^2].

Because ``Gamma`` is Hermitian, ``Gamma_- = Gamma_+^dag`` and ``S = I + Gamma_+ Gamma_+^dag``
is positive definite.  With ``S = L L^dag`` one has

    2 xi     = eig( L^-1 (I - Gamma_+)(I - Gamma_+)^dag L^-dag )
    2 (1-xi) = eig( L^-1 (I + Gamma_+)(I + Gamma_+)^dag L^-dag ),

the two matrices summing to ``2 I``.  So ``xi`` is real and in [0, 1], and
``xi^(1/2)``, ``(1-xi)^(1/2)`` are singular values of ``L^-1 (I -+ Gamma_+) / sqrt 2``.
Taking square roots this way keeps eigenvalues near 0 and 1 accurate to
machine precision, where the square root of a general eigenvalue would
amplify round-off to ``sqrt(eps)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from .errors import InvalidArgumentError, NumericalFailureError
from .gaussian import CorrelationMatrix, blocks, clamped_spectrum
from .model import RegionPartition

__all__ = [
    "CovariancePipeline",
    "NegativityResult",
    "covariance_pipeline",
    "log_negativity",
    "renyi_negativity",
    "exact_entropies",
]

COND_LIMIT = 1e12
PAIRING_TOL = 1e-8


@dataclass(frozen=True)
class CovariancePipeline:
    """Intermediate matrices and spectra of the Gaussian negativity.

    ``SqrtXi[j]`` and ``SqrtOneMinusXi[j]`` belong to the same eigenvector, so
    ``SqrtXi**2 + SqrtOneMinusXi**2 == 1`` elementwise.
    """

    Gamma: np.ndarray
    GammaPlus: np.ndarray
    GammaMinus: np.ndarray
    C_Xi: np.ndarray
    SqrtXi: np.ndarray
    SqrtOneMinusXi: np.ndarray
    ZetaSpectrum: np.ndarray

    @property
    def XiSpectrum(self) -> np.ndarray:
        return self.SqrtXi**2

    def xi_residual(self) -> float:
        """Largest gap between the general eigenvalues of ``C_Xi`` and ``xi`` (diagnostic)."""
        if self.C_Xi.size == 0:
            return 0.0
        direct = scipy.linalg.eigvals(self.C_Xi)
        return float(np.abs(np.sort_complex(direct) - np.sort(self.XiSpectrum)).max())


@dataclass(frozen=True)
class NegativityResult:
    value: float
    kind: str
    term1: float
    term2: float
    n_e: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "value": self.value, "term1": self.term1, "term2": self.term2}
        if self.n_e is not None:
            out["n_e"] = self.n_e
        return out


def covariance_pipeline(corr: CorrelationMatrix | np.ndarray, P: RegionPartition) -> CovariancePipeline:
    bv = blocks(corr, P)
    C_AB = bv.C_AB
    m = C_AB.shape[0]
    nA = bv.nA
    I = np.eye(m)
    Gamma = I - 2 * C_AB
    G11, G12 = Gamma[:nA, :nA], Gamma[:nA, nA:]
    G21, G22 = Gamma[nA:, :nA], Gamma[nA:, nA:]
    Gp = np.block([[-G11, 1j * G12], [1j * G21, G22]])
    Gm = np.block([[-G11, -1j * G12], [-1j * G21, G22]])
    S = I + Gp @ Gm
    if np.linalg.cond(S) > COND_LIMIT:
        raise NumericalFailureError(f"I + Gamma_+ Gamma_- is singular (cond {np.linalg.cond(S):.3e})")
    C_Xi = 0.5 * (I - scipy.linalg.solve(S, Gp + Gm))
    try:
        L = scipy.linalg.cholesky(0.5 * (S + S.conj().T), lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"I + Gamma_+ Gamma_- is not positive definite: {exc}") from exc
    # ascending sqrt(xi) pairs with descending sqrt(1 - xi)
    sqrt_xi = scipy.linalg.svdvals(scipy.linalg.solve_triangular(L, I - Gp, lower=True))[::-1] / np.sqrt(2)
    sqrt_rest = scipy.linalg.svdvals(scipy.linalg.solve_triangular(L, I + Gp, lower=True)) / np.sqrt(2)
    defect = np.abs(sqrt_xi**2 + sqrt_rest**2 - 1).max(initial=0.0)
    if defect > PAIRING_TOL:
        raise NumericalFailureError(f"xi and 1 - xi spectra do not pair (defect {defect:.3e})")
    zeta = clamped_spectrum(0.5 * (C_AB + C_AB.conj().T))
    return CovariancePipeline(Gamma, Gp, Gm, C_Xi, sqrt_xi, sqrt_rest, zeta)


def _zeta_term(zeta: np.ndarray) -> float:
    return float(np.sum(np.log(zeta**2 + (1 - zeta) ** 2)))


def _xi_term(pipe: CovariancePipeline, power: float) -> float:
    """``sum log[xi^power + (1-xi)^power]`` from the square-root spectra."""
    return float(np.sum(np.log(pipe.SqrtXi ** (2 * power) + pipe.SqrtOneMinusXi ** (2 * power))))


def log_negativity(corr: CorrelationMatrix | np.ndarray, P: RegionPartition,
                   pipeline: CovariancePipeline | None = None) -> NegativityResult:
    pipe = pipeline if pipeline is not None else covariance_pipeline(corr, P)
    t1 = _xi_term(pipe, 0.5)
    t2 = 0.5 * _zeta_term(pipe.ZetaSpectrum)
    return NegativityResult(t1 + t2, "logarithmic", t1, t2)


def renyi_negativity(corr: CorrelationMatrix | np.ndarray, P: RegionPartition, n_e: int,
                     pipeline: CovariancePipeline | None = None) -> NegativityResult:
    """Even-index Renyi negativity; odd indices exist only in the Fock oracle."""
    if n_e < 2 or n_e % 2:
        raise InvalidArgumentError("Gaussian Renyi negativity needs an even n_e >= 2")
    pipe = pipeline if pipeline is not None else covariance_pipeline(corr, P)
    t1 = _xi_term(pipe, n_e / 2)
    t2 = n_e / 2 * _zeta_term(pipe.ZetaSpectrum)
    return NegativityResult(t1 + t2, "renyi", t1, t2, n_e)


def exact_entropies(C_region: np.ndarray, renyi_indices=(2, 3, 4)) -> dict:
    """Von Neumann and Renyi entropies of a region from its correlation block."""
    zeta = clamped_spectrum(np.asarray(C_region))
    S = float(-np.sum(xlogy(zeta, zeta) + xlogy(1 - zeta, 1 - zeta)))
    renyi = {}
    for n in renyi_indices:
        if n == 1:
            raise InvalidArgumentError("n = 1 is the von Neumann entropy")
        renyi[n] = float(np.sum(np.log(zeta**n + (1 - zeta) ** n)) / (1 - n))
    return {"vonNeumann": S, "renyi": renyi}
