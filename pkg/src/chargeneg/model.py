"""Random and deterministic hopping Hamiltonians, and region partitions.

All random ensembles draw from ``numpy.random.Generator(PCG64(seed))`` so a
given ``(ensemble parameters, seed)`` always yields a bit-identical matrix.
Off-diagonal couplings are ``a * exp(i theta)`` with ``a ~ N(0, std)`` and
``theta ~ U[0, 2 pi)``; the sign of ``a`` is absorbed into the phase.  The
upper triangle is drawn and mirrored, diagonals are real normal.  All
boundaries are open.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "ENSEMBLES",
    "HoppingMatrix",
    "RegionPartition",
    "build_all_connected",
    "build_local",
    "build_translation_invariant",
    "build_tight_binding_chain",
    "build_hamiltonian",
    "make_partition",
]

ENSEMBLES = ("all-connected", "local", "translation-invariant", "tight-binding")


@dataclass(frozen=True)
class HoppingMatrix:
    """Single-particle Hamiltonian ``H = sum_ij t_ij c_i^dag c_j``."""

    t: np.ndarray
    ensemble: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.t.shape[0]

    def permuted(self, order: Sequence[int]) -> HoppingMatrix:
        """Relabel sites so that new site k is old site ``order[k]``."""
        idx = np.asarray(order)
        return HoppingMatrix(self.t[np.ix_(idx, idx)], self.ensemble, dict(self.params), self.seed)

    def to_json(self) -> dict[str, Any]:
        iu, ju = np.triu_indices(self.n)
        entries = [
            [int(i), int(j), float(self.t[i, j].real), float(self.t[i, j].imag)]
            for i, j in zip(iu, ju)
            if self.t[i, j] != 0
        ]
        return {
            "n": self.n,
            "ensemble": self.ensemble,
            "seed": self.seed,
            "params": self.params,
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any] | str) -> HoppingMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        t = np.zeros((n, n), dtype=complex)
        for i, j, re, im in data["entries"]:
            t[i, j] = complex(re, im)
            t[j, i] = complex(re, -im)
        return cls(t, data["ensemble"], dict(data.get("params", {})), data.get("seed"))


@dataclass(frozen=True)
class RegionPartition:
    """Two disjoint site sets A and B; the rest of the system is region C."""

    n: int
    A: tuple[int, ...]
    B: tuple[int, ...]

    def __post_init__(self):
        if not self.A or not self.B:
            raise InvalidArgumentError("regions A and B must be non-empty")
        if set(self.A) & set(self.B):
            raise InvalidArgumentError("regions A and B overlap")
        if len(set(self.A)) != len(self.A) or len(set(self.B)) != len(self.B):
            raise InvalidArgumentError("repeated site index in a region")
        for i in self.A + self.B:
            if not 0 <= i < self.n:
                raise InvalidArgumentError(f"site {i} outside [0, {self.n})")

    @property
    def sites(self) -> tuple[int, ...]:
        """A followed by B: the mode order used for every A-B computation."""
        return self.A + self.B

    @property
    def nA(self) -> int:
        return len(self.A)

    @property
    def nB(self) -> int:
        return len(self.B)

    def swapped(self) -> RegionPartition:
        return RegionPartition(self.n, self.B, self.A)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError("site count must be at least 1")


def _hermitian_from_std(std: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Draw the upper triangle with per-entry std, mirror it, real diagonal."""
    n = std.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    amp = rng.standard_normal(iu.size) * std[iu, ju]
    phase = rng.uniform(0.0, 2 * np.pi, iu.size)
    diag = rng.standard_normal(n) * np.diag(std)
    t = np.zeros((n, n), dtype=complex)
    t[iu, ju] = amp * np.exp(1j * phase)
    t[ju, iu] = np.conj(t[iu, ju])
    t[np.arange(n), np.arange(n)] = diag
    return t


def build_all_connected(n: int, seed: int, scale: float = 1.0) -> HoppingMatrix:
    """Every pair of sites coupled with the same amplitude distribution."""
    _check_n(n)
    if scale <= 0:
        raise InvalidArgumentError("scale must be positive")
    std = np.full((n, n), float(scale))
    t = _hermitian_from_std(std, _rng(seed))
    return HoppingMatrix(t, "all-connected", {"scale": float(scale)}, seed)


def build_local(n: int, seed: int, decay_length: float, scale: float = 1.0) -> HoppingMatrix:
    """Amplitude std ``scale * exp(-|i - j| / decay_length)``."""
    _check_n(n)
    if decay_length <= 0:
        raise InvalidArgumentError("decay_length must be positive")
    if scale <= 0:
        raise InvalidArgumentError("scale must be positive")
    dist = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    std = scale * np.exp(-dist / decay_length)
    t = _hermitian_from_std(std, _rng(seed))
    return HoppingMatrix(
        t, "local", {"decay_length": float(decay_length), "scale": float(scale)}, seed
    )


def build_translation_invariant(n: int, seed: int, range_: int = 3, scale: float = 1.0) -> HoppingMatrix:
    """Banded matrix with ``t_ij = t_{i-j}`` for ``|i - j| <= range_``."""
    _check_n(n)
    if not 0 <= range_ < n:
        raise InvalidArgumentError("range must satisfy 0 <= range < n")
    if scale <= 0:
        raise InvalidArgumentError("scale must be positive")
    rng = _rng(seed)
    t0 = rng.standard_normal() * scale
    amp = rng.standard_normal(range_) * scale
    phase = rng.uniform(0.0, 2 * np.pi, range_)
    couplings = amp * np.exp(1j * phase)
    t = np.diag(np.full(n, t0, dtype=complex))
    for d, td in enumerate(couplings, start=1):
        idx = np.arange(n - d)
        t[idx + d, idx] = td
        t[idx, idx + d] = np.conj(td)
    return HoppingMatrix(t, "translation-invariant", {"range": int(range_), "scale": float(scale)}, seed)


def build_tight_binding_chain(n: int, hopping: float = 1.0, chemical_potential: float = 0.0) -> HoppingMatrix:
    """Open chain with ``t_{i,i+1} = -hopping`` and ``t_ii = -chemical_potential``."""
    if n < 2:
        raise InvalidArgumentError("tight-binding chain needs n >= 2")
    t = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    t[idx, idx + 1] = -hopping
    t[idx + 1, idx] = -hopping
    t[np.arange(n), np.arange(n)] = -chemical_potential
    return HoppingMatrix(
        t,
        "tight-binding",
        {"hopping": float(hopping), "chemical_potential": float(chemical_potential)},
        None,
    )


def build_hamiltonian(ensemble: str, n: int, seed: int = 0, **params) -> HoppingMatrix:
    """Dispatch on the ensemble tag used in configs and on the command line."""
    if ensemble == "all-connected":
        return build_all_connected(n, seed, params.get("scale", 1.0))
    if ensemble == "local":
        return build_local(n, seed, params.get("decay_length", 1.0), params.get("scale", 1.0))
    if ensemble == "translation-invariant":
        return build_translation_invariant(n, seed, int(params.get("range", 3)), params.get("scale", 1.0))
    if ensemble == "tight-binding":
        return build_tight_binding_chain(
            n, params.get("hopping", 1.0), params.get("chemical_potential", 0.0)
        )
    raise InvalidArgumentError(f"unknown ensemble {ensemble!r}; expected one of {ENSEMBLES}")


def make_partition(n: int, a_start: int, a_end: int, b_start: int, b_end: int) -> RegionPartition:
    """Contiguous regions ``A = [a_start, a_end]`` and ``B = [b_start, b_end]`` (inclusive, 0-based)."""
    if a_end < a_start or b_end < b_start:
        raise InvalidArgumentError("empty region")
    return RegionPartition(n, tuple(range(a_start, a_end + 1)), tuple(range(b_start, b_end + 1)))
