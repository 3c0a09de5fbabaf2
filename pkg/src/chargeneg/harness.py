"""Numerical experiments: expansion convergence on random thermal states and
zero-temperature scaling on the half-filled tight-binding chain.

Every experiment is a deterministic function of its configuration.  Tables
are lists of row dicts with a fixed column order, written by :func:`emit`.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .cumulants import CumulantSet, trace_cumulants
from .errors import ChargeNegError, InvalidArgumentError, NumericalFailureError
from .expansion import evaluate_expansion
from .gaussian import blocks, ground_state_correlations, thermal_correlations
from .model import HoppingMatrix, RegionPartition, build_hamiltonian, build_tight_binding_chain, make_partition
from .negativity import covariance_pipeline, log_negativity, renyi_negativity
from .oracle import (
    charge_cumulants_exact,
    dense_thermal_state,
    partial_time_reversal,
    reduce_to_partition,
    renyi_negativity_exact,
    trace_norm_negativity,
)

__all__ = [
    "SweepConfig",
    "ScalingConfig",
    "SWEEP_COLUMNS",
    "CUMULANT_COLUMNS",
    "sweep_row",
    "convergence_sweep",
    "convergence_summary",
    "ORACLE_BETAS",
    "random_oracle_case",
    "oracle_comparison",
    "scaling_adjacent",
    "scaling_distant",
    "emit",
    "read_table",
    "parse_config_file",
]

CUMULANT_KEYS = [(2, 0), (1, 1), (0, 2), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]
CUMULANT_COLUMNS = [f"k{a}{b}" for a, b in CUMULANT_KEYS]
SWEEP_COLUMNS = [
    "seed", "T", "beta",
    "E_exact", "E2_exact", "E4_exact",
    "E2_ord2", "E2_ord24", "E4_ord2", "E4_ord24", "Elim_ord2", "Elim_ord24",
    *CUMULANT_COLUMNS,
    "status",
]


# ---------------------------------------------------------------------------
# configuration


def _parse_int_list(value: Any) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    out: list[int] = []
    for part in str(value).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


@dataclass(frozen=True)
class SweepConfig:
    """Expansion-convergence sweep over seeds and a log-spaced temperature grid.

    Region bounds are 0-based and inclusive.  The defaults reproduce the
    100-site geometry with A = sites 21..30 and B = sites 34..54 (1-based).
    """

    ensemble: str = "translation-invariant"
    n: int = 100
    seeds: tuple[int, ...] = tuple(range(10))
    a_start: int = 20
    a_end: int = 29
    b_start: int = 33
    b_end: int = 53
    t_min: float = 0.1
    t_max: float = 10.0
    n_temps: int = 21
    scale: float = 1.0
    decay_length: float = 1.0
    range_: int = 3
    mu: float = 0.0

    def __post_init__(self):
        if not self.seeds:
            raise InvalidArgumentError("seed list is empty")
        if not 0 < self.t_min <= self.t_max or self.n_temps < 1:
            raise InvalidArgumentError("temperature grid must be positive and increasing")
        if self.n_temps > 1 and self.t_min == self.t_max:
            raise InvalidArgumentError("temperature grid must be strictly increasing")
        self.partition()  # validates the regions

    @property
    def temperatures(self) -> np.ndarray:
        if self.n_temps == 1:
            return np.array([self.t_min])
        return np.geomspace(self.t_min, self.t_max, self.n_temps)

    def partition(self) -> RegionPartition:
        return make_partition(self.n, self.a_start, self.a_end, self.b_start, self.b_end)

    def hamiltonian(self, seed: int) -> HoppingMatrix:
        return build_hamiltonian(
            self.ensemble, self.n, seed,
            scale=self.scale, decay_length=self.decay_length, range=self.range_,
        )

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> SweepConfig:
        names = {f.name for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in data.items():
            key = key.replace("-", "_")
            if key == "range":
                key = "range_"
            if key not in names:
                raise InvalidArgumentError(f"unknown sweep config key {key!r}")
            if key == "seeds":
                kwargs[key] = tuple(_parse_int_list(value))
            elif key == "ensemble":
                kwargs[key] = str(value)
            elif key in ("n", "a_start", "a_end", "b_start", "b_end", "n_temps", "range_"):
                kwargs[key] = int(value)
            else:
                kwargs[key] = float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class ScalingConfig:
    """Zero-temperature scaling on the open tight-binding chain.

    ``lengths`` is the interval ladder of the adjacent experiment.  The distant
    experiment keeps ``l1 = l2 = length`` and uses ``separations`` as the
    centre-to-centre distance of the two intervals.
    """

    n_adjacent: int = 2048
    n_distant: int = 4096
    filling: float = 0.5
    hopping: float = 1.0
    lengths: tuple[int, ...] = (32, 64, 128, 256, 512)
    length: int = 8
    separations: tuple[int, ...] = (64, 128, 256, 512)
    fit_min: float = 0.0
    fit_max: float = math.inf

    def __post_init__(self):
        if min(self.n_adjacent, self.n_distant) < 2 or not 0 <= self.filling <= 1:
            raise InvalidArgumentError("need chains of at least 2 sites and filling in [0, 1]")
        if any(l <= 0 for l in self.lengths) or self.length <= 0:
            raise InvalidArgumentError("interval lengths must be positive")
        if any(d <= 0 for d in self.separations):
            raise InvalidArgumentError("separations must be positive")
        margin = 2
        if 2 * max(self.lengths) + 2 * margin > self.n_adjacent:
            raise InvalidArgumentError("adjacent ladder does not fit in the chain")
        if max(self.separations) + self.length + 2 * margin > self.n_distant:
            raise InvalidArgumentError("distant ladder does not fit in the chain")
        if min(self.separations) <= self.length:
            raise InvalidArgumentError("separations must exceed the interval length")

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> ScalingConfig:
        names = {f.name for f in fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in names:
                raise InvalidArgumentError(f"unknown scaling config key {key!r}")
            if key in ("lengths", "separations"):
                kwargs[key] = tuple(_parse_int_list(value))
            elif key in ("n_adjacent", "n_distant", "length"):
                kwargs[key] = int(value)
            else:
                kwargs[key] = float(value)
        return cls(**kwargs)


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


# ---------------------------------------------------------------------------
# convergence sweep


def sweep_row(H: HoppingMatrix, P: RegionPartition, beta: float, mu: float = 0.0) -> dict[str, Any]:
    """Exact negativities, expansion partial sums and cumulants for one state."""
    corr = thermal_correlations(H, beta, mu)
    pipe = covariance_pipeline(corr, P)
    row: dict[str, Any] = {
        "E_exact": log_negativity(corr, P, pipe).value,
        "E2_exact": renyi_negativity(corr, P, 2, pipe).value,
        "E4_exact": renyi_negativity(corr, P, 4, pipe).value,
    }
    cums: CumulantSet = trace_cumulants(blocks(corr, P), orders=(2, 4))
    for label, n_e in (("E2", 2), ("E4", 4), ("Elim", "limit")):
        partial = evaluate_expansion(cums, n_e, orders=(2, 4))
        row[f"{label}_ord2"] = partial[2]["partial"]
        row[f"{label}_ord24"] = partial[4]["partial"]
    for key, col in zip(CUMULANT_KEYS, CUMULANT_COLUMNS):
        row[col] = cums[key]
    for col in SWEEP_COLUMNS[3:-1]:
        if not math.isfinite(row[col]):
            raise NumericalFailureError(f"{col} is not finite")
    return row


def convergence_sweep(cfg: SweepConfig) -> list[dict[str, Any]]:
    """One row per (seed, T), ordered by seed then increasing T.

    A failure in any stage flags the row (``status``) and leaves its numeric
    fields as NaN; the sweep continues.
    """
    P = cfg.partition()
    rows = []
    for seed in cfg.seeds:
        H = cfg.hamiltonian(seed)
        for T in cfg.temperatures:
            beta = 1.0 / float(T)
            base = {"seed": int(seed), "T": float(T), "beta": beta}
            try:
                row = {**base, **sweep_row(H, P, beta, cfg.mu), "status": "ok"}
            except ChargeNegError as exc:
                row = {**base, **{c: math.nan for c in SWEEP_COLUMNS[3:-1]},
                       "status": f"{type(exc).__name__}: {exc}"}
            rows.append({c: row[c] for c in SWEEP_COLUMNS})
    return rows


def convergence_summary(rows: Sequence[Mapping[str, Any]]) -> list[dict[str, float]]:
    """Seed-averaged absolute and relative truncation errors per temperature."""
    pairs = {
        "E2": ("E2_exact", "E2_ord2", "E2_ord24"),
        "E4": ("E4_exact", "E4_ord2", "E4_ord24"),
        "Elim": ("E_exact", "Elim_ord2", "Elim_ord24"),
    }
    by_T: dict[float, list[Mapping[str, Any]]] = {}
    for r in rows:
        if r["status"] == "ok":
            by_T.setdefault(float(r["T"]), []).append(r)
    out = []
    for T in sorted(by_T):
        group = by_T[T]
        entry: dict[str, float] = {"T": T, "n_seeds": len(group)}
        for label, (exact, o2, o24) in pairs.items():
            ex = np.array([float(r[exact]) for r in group])
            for tag, col in (("ord2", o2), ("ord24", o24)):
                approx = np.array([float(r[col]) for r in group])
                err = np.abs(approx - ex)
                entry[f"{label}_abserr_{tag}"] = float(err.mean())
                entry[f"{label}_relerr_{tag}"] = float(np.mean(err / np.abs(ex)))
        out.append(entry)
    return out


# ---------------------------------------------------------------------------
# Gaussian route against the Fock-space reference

ORACLE_BETAS = (0.2, 1.0, 5.0)


def random_oracle_case(n: int, seed: int) -> tuple[HoppingMatrix, float, RegionPartition]:
    """All-connected Hamiltonian, a temperature from :data:`ORACLE_BETAS` and
    random disjoint regions (not necessarily contiguous), all drawn from ``seed``."""
    if n < 2:
        raise InvalidArgumentError("need at least two modes")
    H = build_hamiltonian("all-connected", n, seed)
    rng = np.random.default_rng([seed, n])
    beta = float(ORACLE_BETAS[rng.integers(len(ORACLE_BETAS))])
    perm = rng.permutation(n)
    nA = int(rng.integers(1, n))
    nB = int(rng.integers(1, n - nA + 1))
    A = tuple(sorted(int(i) for i in perm[:nA]))
    B = tuple(sorted(int(i) for i in perm[nA:nA + nB]))
    return H, beta, RegionPartition(n, A, B)


def oracle_comparison(H: HoppingMatrix, beta: float, P: RegionPartition) -> dict[str, float]:
    """Absolute deviations between the Gaussian formulas and the Fock reference."""
    corr = thermal_correlations(H, beta)
    pipe = covariance_pipeline(corr, P)
    rt = partial_time_reversal(reduce_to_partition(dense_thermal_state(H, beta), P), P.nA)
    out = {
        "dE": abs(log_negativity(corr, P, pipe).value - trace_norm_negativity(rt)),
        "dE2": abs(renyi_negativity(corr, P, 2, pipe).value - renyi_negativity_exact(rt, 2)),
        "dE4": abs(renyi_negativity(corr, P, 4, pipe).value - renyi_negativity_exact(rt, 4)),
    }
    gauss = trace_cumulants(blocks(corr, P), orders=(2, 4))
    exact = charge_cumulants_exact(dense_thermal_state(H, beta), P, max_order=4)
    out["dcumulant"] = max(abs(gauss[k] - exact[k]) for k in gauss)
    return out


# ---------------------------------------------------------------------------
# scaling on the tight-binding chain


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, np.ndarray]:
    X = np.column_stack([x, np.ones_like(x)])
    if np.linalg.matrix_rank(X) < 2:
        raise NumericalFailureError("fit matrix is singular")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return float(coef[0]), float(coef[1]), y - X @ coef


def _chain_correlations(cfg: ScalingConfig, n: int):
    return ground_state_correlations(build_tight_binding_chain(n, cfg.hopping), cfg.filling)


def scaling_adjacent(cfg: ScalingConfig) -> dict[str, Any]:
    """Adjacent intervals l1 = l2 = l centred in the chain.

    Fits ``<Q_A^2>_c = s log l + c`` (expected ``s = chi_F / pi^2``) and the
    replica-limit second order ``-(pi^2/2) <Q_A Q_B>_c = s' log(l1 l2/(l1+l2)) + c'``
    (expected ``s' = chi_F / 4``, with ``c' = -s' log(eps)`` defining the cutoff).
    """
    n = cfg.n_adjacent
    corr = _chain_correlations(cfg, n)
    centre = n // 2
    rows = []
    for l in cfg.lengths:
        P = make_partition(n, centre - l, centre - 1, centre, centre + l - 1)
        k = trace_cumulants(blocks(corr, P), orders=(2,))
        rows.append({
            "l": l,
            "QA2": k[(2, 0)],
            "QB2": k[(0, 2)],
            "QAQB": k[(1, 1)],
            "Elim2": -math.pi**2 / 2 * k[(1, 1)],
        })
    ls = np.array([r["l"] for r in rows], dtype=float)
    qa2 = np.array([r["QA2"] for r in rows])
    elim = np.array([r["Elim2"] for r in rows])
    slope, intercept, resid = _linear_fit(np.log(ls), qa2)
    x = np.log(ls * ls / (2 * ls))
    e_slope, e_intercept, e_resid = _linear_fit(x, elim)
    chi_F = 1.0
    increments = [
        {"l": int(ls[i]), "shift": float(qa2[i + 1] - qa2[i])}
        for i in range(len(ls) - 1)
        if ls[i + 1] == 2 * ls[i]
    ]
    return {
        "mode": "adjacent",
        "n": n,
        "rows": rows,
        "variance_slope": slope,
        "variance_slope_expected": chi_F / math.pi**2,
        "variance_intercept": intercept,
        "variance_residual_max": float(np.abs(resid).max()),
        "doubling_shifts": increments,
        "doubling_shift_expected": math.log(2) / math.pi**2,
        "negativity_slope": e_slope,
        "negativity_slope_expected": chi_F / 4,
        "negativity_intercept": e_intercept,
        "cutoff_eps": math.exp(-e_intercept / (chi_F / 4)),
        "negativity_residual_max": float(np.abs(e_resid).max()),
    }


def scaling_distant(cfg: ScalingConfig) -> dict[str, Any]:
    """Two intervals of equal length far apart; power law of the replica-limit term.

    The second-order replica-limit term ``-(pi^2/2) <Q_A Q_B>_c`` is fitted as
    ``P * d^p`` in log-log space; ``d`` is the centre-to-centre separation.
    Values below 1e-14 are dropped from the fit.
    """
    l = cfg.length
    n = cfg.n_distant
    corr = _chain_correlations(cfg, n)
    rows = []
    for d in cfg.separations:
        a0 = n // 2 - (d + l) // 2
        b0 = a0 + d
        P = make_partition(n, a0, a0 + l - 1, b0, b0 + l - 1)
        k = trace_cumulants(blocks(corr, P), orders=(2,))
        rows.append({
            "d": d,
            "gap": b0 - (a0 + l - 1),
            "QAQB": k[(1, 1)],
            "Elim2": -math.pi**2 / 2 * k[(1, 1)],
        })
    ds = np.array([r["d"] for r in rows], dtype=float)
    gaps = np.array([r["gap"] for r in rows], dtype=float)
    elim = np.array([r["Elim2"] for r in rows])
    keep = (elim > 1e-14) & (ds >= cfg.fit_min) & (ds <= cfg.fit_max)
    if keep.sum() < 2:
        raise NumericalFailureError("fewer than two usable points in the distant fit")
    power, log_pref, resid = _linear_fit(np.log(ds[keep]), np.log(elim[keep]))
    gap_power, _, _ = _linear_fit(np.log(gaps[keep]), np.log(elim[keep]))
    chi_F = 1.0
    return {
        "mode": "distant",
        "n": n,
        "length": l,
        "rows": rows,
        "power": power,
        "power_expected": -2.0,
        "prefactor": math.exp(log_pref),
        "prefactor_fixed_power": float(np.exp(np.mean(np.log(elim[keep]) + 2 * np.log(ds[keep])))),
        "prefactor_expected": chi_F / 4 * l * l,
        "power_vs_gap": gap_power,
        "residual_max": float(np.abs(resid).max()),
        "all_cross_negative": bool(all(r["QAQB"] < 0 for r in rows)),
    }


# ---------------------------------------------------------------------------
# output


def _fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _columns(table: Sequence[Mapping[str, Any]]) -> list[str]:
    cols = list(table[0].keys())
    for row in table[1:]:
        if list(row.keys()) != cols:
            raise InvalidArgumentError("rows do not share one column order")
    return cols


def _json_value(value: Any) -> Any:
    if isinstance(value, (np.floating, float)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def emit(table: Sequence[Mapping[str, Any]] | Mapping[str, Any], fmt: str = "csv",
         path: str | Path | None = None) -> str:
    """Serialize a table (list of rows) or a report (dict) as CSV or JSON.

    CSV floats carry 17 significant digits; column order is that of the first
    row.  Returns the text, and also writes it when ``path`` is given.
    """
    if fmt not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {fmt!r}")
    if isinstance(table, Mapping):
        if fmt == "json":
            text = json.dumps(_json_value(dict(table)), indent=2) + "\n"
            return _write(text, path)
        table = table.get("rows") or []
    if not table:
        raise InvalidArgumentError("refusing to emit an empty table")
    cols = _columns(table)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in table:
            writer.writerow([_fmt(row[c]) for c in cols])
        text = buf.getvalue()
    else:
        payload = {"columns": cols, "rows": [[_json_value(row[c]) for c in cols] for row in table]}
        text = json.dumps(payload, indent=1) + "\n"
    return _write(text, path)


def _write(text: str, path: str | Path | None) -> str:
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
    return text


def read_table(path: str | Path) -> list[dict[str, Any]]:
    """Parse a CSV written by :func:`emit`; numeric fields come back as float/int."""
    out = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            row: dict[str, Any] = {}
            for key, text in raw.items():
                try:
                    row[key] = int(text)
                except ValueError:
                    try:
                        row[key] = float(text)
                    except ValueError:
                        row[key] = text
            out.append(row)
    return out
