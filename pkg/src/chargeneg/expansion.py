"""Exact coefficients of the charge-correlator expansions.

Every coefficient is carried as an exact rational number (or a rational
function of the replica index) multiplying ``pi**M`` times a connected charge
correlator.  Floating point only enters in :func:`evaluate_expansion`.

Replica momenta run over ``p = -(n-1)/2, ..., (n-1)/2`` (half-integers for
even ``n``).  Power sums over that range are closed through Bernoulli
polynomials, which is what makes the replica index usable symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math
from math import comb, factorial
from typing import Iterable, Mapping

from .errors import InvalidArgumentError
from .rational import Polynomial, RationalFunction

__all__ = [
    "ExpansionCoefficients",
    "bernoulli_numbers",
    "bernoulli_polynomial",
    "faulhaber_sum",
    "hurwitz_zeta_neg_int",
    "riemann_zeta_even",
    "entropy_coefficient_function",
    "entropy_coefficients",
    "entropy_coefficients_faulhaber",
    "negativity_p_sums",
    "negativity_coefficients",
    "negativity_coefficients_replica_limit",
    "negativity_coefficients_brute_force",
    "evaluate_expansion",
]

# variable of every RationalFunction below: the replica index n (or n_e)
_N = Polynomial([0, 1])


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Coefficients of ``pi**M <Q_A^a Q_B^b>_c`` for a single order ``M``.

    ``terms`` maps ``(a, b)`` with ``a + b == M`` to a :class:`RationalFunction`
    of the replica index.  Odd orders vanish identically and carry no terms.
    """

    order: int
    terms: Mapping[tuple[int, int], RationalFunction] = field(default_factory=dict)

    def coefficient(self, a: int, b: int) -> RationalFunction:
        if a + b != self.order:
            raise InvalidArgumentError(f"({a},{b}) does not belong to order {self.order}")
        return self.terms.get((a, b), RationalFunction.zero())

    def at(self, n_e: int | Fraction) -> dict[tuple[int, int], Fraction]:
        """Exact coefficient values at a given replica index."""
        return {ab: f(Fraction(n_e)) for ab, f in self.terms.items()}

    def to_json(self, n_e: int | Fraction | None = None) -> dict:
        """JSON layout ``{"M", "n_e", "terms": {"a,b": {"num", "den"}}}``.

        With ``n_e=None`` the numerator and denominator are polynomial strings
        in ``n_e``; otherwise they are the integer parts of the exact value.
        """
        terms = {}
        for (a, b), f in sorted(self.terms.items(), reverse=True):
            if n_e is None:
                terms[f"{a},{b}"] = {"num": f.num.format("n_e"), "den": f.den.format("n_e")}
            else:
                v = f(Fraction(n_e))
                terms[f"{a},{b}"] = {"num": str(v.numerator), "den": str(v.denominator)}
        label = "symbolic" if n_e is None else str(n_e)
        return {"M": self.order, "n_e": label, "terms": terms}


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials


@lru_cache(maxsize=None)
def bernoulli_numbers(kmax: int) -> tuple[Fraction, ...]:
    """B_0..B_kmax with the convention B_1 = -1/2."""
    if kmax < 0:
        raise InvalidArgumentError("kmax must be non-negative")
    B = [Fraction(1)]
    for m in range(1, kmax + 1):
        s = sum(comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def bernoulli_polynomial(k: int) -> Polynomial:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    B = bernoulli_numbers(k)
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        coeffs[k - j] = comb(k, j) * B[j]
    return Polynomial(coeffs)


def hurwitz_zeta_neg_int(M: int, a: int | Fraction) -> Fraction:
    """Hurwitz zeta at a negative integer, ``zeta(-M, a) = -B_{M+1}(a)/(M+1)``."""
    if M < 1:
        raise InvalidArgumentError("M must be a positive integer")
    return -bernoulli_polynomial(M + 1)(Fraction(a)) / (M + 1)


def riemann_zeta_even(M: int) -> Fraction:
    """Rational part of ``zeta(M) / pi**M`` for even ``M >= 2``."""
    if M < 2 or M % 2:
        raise InvalidArgumentError("riemann_zeta_even needs an even M >= 2")
    return Fraction(2**M) * abs(bernoulli_numbers(M)[M]) / (2 * factorial(M))


# ---------------------------------------------------------------------------
# replica-momentum power sums


def _replica_momenta(n: int) -> list[Fraction]:
    return [Fraction(-(n - 1), 2) + k for k in range(n)]


def faulhaber_sum(n: int, M: int) -> Fraction:
    """``sum_p p**M`` over the symmetric replica momenta, by direct enumeration."""
    if n < 1:
        raise InvalidArgumentError("n must be a positive integer")
    if M < 0:
        raise InvalidArgumentError("M must be non-negative")
    return sum((p**M for p in _replica_momenta(n)), Fraction(0))


@lru_cache(maxsize=None)
def _half_integer_power_sum(m: int) -> Polynomial:
    """S_m(n) = sum_{k=1}^{n/2} (k - 1/2)**m as a polynomial in n.

    Uses sum_{k<K} (k+x)^m = (B_{m+1}(x+K) - B_{m+1}(x)) / (m+1) at x = 1/2,
    K = n/2; valid at even n and taken as the continuation elsewhere.
    """
    b = bernoulli_polynomial(m + 1)
    half = Fraction(1, 2)
    return (b.compose(_N * half + half) - b(half)) * Fraction(1, m + 1)


# ---------------------------------------------------------------------------
# entropy expansion


def _i_power(M: int) -> int:
    """Real value of i**M for even M."""
    return -1 if M % 4 == 2 else 1


@lru_cache(maxsize=None)
def entropy_coefficient_function(M: int) -> RationalFunction:
    """Coefficient of ``pi**M <Q_A^M>_c`` in the Renyi entropy S^(n), as a function of n.

    Built from ``-(1/(1-n)) 2 zeta(-M, (n+1)/2) (2 i / n)^M / M!`` with the
    Hurwitz zeta replaced by its Bernoulli-polynomial closed form.  The factor
    ``1 - n`` cancels exactly, so the function is finite at ``n = 1``.
    """
    if M < 1:
        raise InvalidArgumentError("M must be a positive integer")
    if M % 2:
        return RationalFunction.zero()
    zeta_poly = bernoulli_polynomial(M + 1).compose((_N + 1) * Fraction(1, 2)) * Fraction(-1, M + 1)
    numerator = zeta_poly * (-2 * _i_power(M) * 2**M)
    denominator = (1 - _N) * Polynomial.monomial(M) * factorial(M)
    return RationalFunction(numerator, denominator)


def entropy_coefficients(n: int, M: int) -> Fraction:
    """Rational part of the ``<Q_A^M>_c`` coefficient in S^(n); ``n = 1`` is von Neumann."""
    if n < 1:
        raise InvalidArgumentError("n must be a positive integer")
    return entropy_coefficient_function(M)(Fraction(n))


def entropy_coefficients_faulhaber(n: int, M: int) -> Fraction:
    """Same coefficient from the enumerated power sum; needs ``n >= 2``."""
    if n < 2:
        raise InvalidArgumentError("direct power-sum route needs n >= 2")
    if M % 2:
        return Fraction(0)
    return Fraction(1, 1 - n) * faulhaber_sum(n, M) * _i_power(M) * Fraction(2, n) ** M / factorial(M)


# ---------------------------------------------------------------------------
# negativity expansion


def _half_sums(a: int, b: int) -> tuple[Polynomial, Polynomial]:
    """``n**M`` times the negative- and positive-p sums of one (a, b) term.

    Negative half: (-2p/n)^a (2p/n + 1)^b; positive half: (-2p/n)^a (2p/n - 1)^b.
    Multiplying by n^M gives (-2p)^a (2p +- n)^b, a polynomial in (p, n); the
    p-power sums over each half are replaced by their closed forms.
    """
    neg = Polynomial()
    pos = Polynomial()
    for k in range(b + 1):
        m = a + k
        c = Fraction((-2) ** a * comb(b, k) * 2**k)
        s_m = _half_integer_power_sum(m)
        n_pow = Polynomial.monomial(b - k)
        neg = neg + s_m * n_pow * (c * (-1) ** m)
        pos = pos + s_m * n_pow * (c * (-1) ** (b - k))
    return neg, pos


@lru_cache(maxsize=None)
def negativity_p_sums(M: int) -> dict[tuple[int, int], RationalFunction]:
    """Bracketed replica-momentum sums for every (a, b) with a + b = M.

    Returns ``C(M, a) * [sum_{p<0} ... + sum_{p>0} ...]`` as functions of
    ``n_e`` before the ``(pi i)^M / M!`` prefactor.  These vanish identically
    for odd ``M``.
    """
    if M < 1:
        raise InvalidArgumentError("M must be a positive integer")
    out = {}
    for a in range(M, -1, -1):
        neg, pos = _half_sums(a, M - a)
        out[(a, M - a)] = RationalFunction((neg + pos) * comb(M, a), Polynomial.monomial(M))
    return out


@lru_cache(maxsize=None)
def negativity_coefficients(M: int) -> ExpansionCoefficients:
    """Coefficients of ``pi**M <Q_A^a Q_B^b>_c`` in the Renyi negativity E_{n_e}."""
    sums = negativity_p_sums(M)
    if M % 2:
        nonzero = [ab for ab, f in sums.items() if not f.is_zero()]
        if nonzero:
            raise ArithmeticError(f"odd-order sums failed to cancel for {nonzero}")
        return ExpansionCoefficients(M, {})
    prefactor = Fraction(_i_power(M), factorial(M))
    terms = {ab: f * prefactor for ab, f in sums.items() if not f.is_zero()}
    return ExpansionCoefficients(M, terms)


def negativity_coefficients_replica_limit(M: int) -> ExpansionCoefficients:
    """Coefficients at ``n_e = 1``, carried as constant rational functions."""
    coeffs = negativity_coefficients(M)
    terms = {}
    for ab, f in coeffs.terms.items():
        v = f(Fraction(1))
        if v != 0:
            terms[ab] = RationalFunction(v)
    return ExpansionCoefficients(M, terms)


def negativity_coefficients_brute_force(M: int, n_e: int) -> dict[tuple[int, int], Fraction]:
    """Enumerate the half-integer p-sum at a fixed even ``n_e`` (reference path).

    The multinomial expansion of ``(x Q_A + y Q_B)^M`` is written out term by
    term; odd ``M`` returns the raw (imaginary-prefactor-free) sums.
    """
    if n_e < 2 or n_e % 2:
        raise InvalidArgumentError("brute-force sum needs an even n_e >= 2")
    out = {}
    for a in range(M, -1, -1):
        b = M - a
        total = Fraction(0)
        for p in _replica_momenta(n_e):
            shift = 1 if p < 0 else -1
            x = -2 * p / n_e
            y = 2 * p / n_e + shift
            total += x**a * y**b
        total *= comb(M, a)
        if M % 2 == 0:
            total *= Fraction(_i_power(M), factorial(M))
        out[(a, b)] = total
    return out


# ---------------------------------------------------------------------------
# numeric evaluation


def _coefficient_value(f: RationalFunction, n_e) -> float:
    if n_e == "limit":
        return float(f(Fraction(1)))
    return float(f(Fraction(n_e)))


def evaluate_expansion(
    cumulants: Mapping[tuple[int, int], float],
    n_e: int | str,
    orders: Iterable[int] = (2, 4),
) -> dict[int, dict[str, float]]:
    """Evaluate the expansion orders of E_{n_e} for a set of connected correlators.

    Parameters
    ----------
    cumulants : mapping
        ``(a, b) -> <Q_A^a Q_B^b>_c``; a :class:`~chargeneg.cumulants.CumulantSet`
        works directly.
    n_e : int or "limit"
        Even replica index, or ``"limit"`` for the replica limit n_e -> 1.
    orders : iterable of int
        Orders to evaluate; odd orders contribute zero.

    Returns
    -------
    dict
        ``{M: {"term": E^(M), "partial": sum of E^(M') for M' <= M}}`` in
        ascending order of M.
    """
    out: dict[int, dict[str, float]] = {}
    running = 0.0
    for M in sorted(set(orders)):
        coeffs = negativity_coefficients(M)
        term = 0.0
        for a in range(M, -1, -1):
            ab = (a, M - a)
            f = coeffs.terms.get(ab)
            if f is None:
                continue
            if ab not in cumulants:
                raise InvalidArgumentError(f"missing cumulant <Q_A^{ab[0]} Q_B^{ab[1]}>_c")
            term += _coefficient_value(f, n_e) * float(cumulants[ab])
        term *= math.pi**M
        running += term
        out[M] = {"term": term, "partial": running}
    return out
