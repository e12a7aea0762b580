"""Fourier coefficients of the Petersson adjoint of the Serre derivative.

For ``f = sum a(n) q^n`` in S_{k+2}(Gamma_0(N)) the adjoint image has
coefficients

    c(m) = k (k-1) m^{k-1} / (4 pi)^2
           * [ (m - k/12) a(m) / m^{k+1} + 2k L_{f,m}(k+1) ]

The adjoint does not depend on how the inner product is scaled, so no
group index enters.  ``index_normalization=True`` divides by the index
``mu`` of Gamma_0(N) instead; that variant disagrees with direct quadrature
by exactly ``mu`` and is kept only for comparison.  When the L-value is
known exactly, ``c(m) = r / pi^2`` with ``r`` rational, which is what
:attr:`AdjointRow.exact_over_pi2` stores.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .forms import delta, delta_10_2, tau
from .lseries import ShiftedLValue, exact_L_delta, required_prec, shifted_L
from .qseries import QExpansion, qs_v_expand


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def index_mu(N: int) -> int:
    """Index of Gamma_0(N) in SL_2(Z): ``N prod_{p | N} (1 + 1/p)``."""
    if N < 1:
        raise ValueError("level must be positive")
    mu = N
    for p in _prime_factors(N):
        mu = mu // p * (p + 1)
    return mu


def prefactor_over_pi2(k: int, m: int, mu: int = 1) -> Fraction:
    """``k (k-1) m^{k-1} / (16 mu)``; the prefactor of c(m) is this over pi^2."""
    return Fraction(k * (k - 1) * m ** (k - 1), 16 * mu)


def bracket_exact(a_m: Fraction, k: int, m: int, L: Fraction) -> Fraction:
    return (m - Fraction(k, 12)) * Fraction(a_m) / Fraction(m) ** (k + 1) + 2 * k * L


@dataclass(frozen=True)
class AdjointRow:
    m: int
    value: mpmath.mpf
    error_bound: float
    exact_over_pi2: Fraction | None = None
    L: ShiftedLValue | None = field(default=None, compare=False)

    def to_json_obj(self, digits: int = 20) -> dict:
        obj = {"m": self.m, "c": mpmath.nstr(self.value, digits), "error_bound": self.error_bound}
        if self.exact_over_pi2 is not None:
            r = self.exact_over_pi2
            obj["c_times_pi2_exact"] = f"{r.numerator}/{r.denominator}"
        return obj


@dataclass(frozen=True)
class AdjointCoeffs:
    k: int
    level: int
    mu: int
    rows: tuple[AdjointRow, ...]
    index_normalization: bool = False

    @property
    def exact_coeffs(self) -> tuple[Fraction, ...] | None:
        """``pi^2 c(m)`` as exact rationals, when every L-value was exact."""
        if self.rows and all(r.exact_over_pi2 is not None for r in self.rows):
            return tuple(r.exact_over_pi2 for r in self.rows)
        return None


def adjoint_coeff(
    f: QExpansion,
    k: int,
    N: int,
    m: int,
    tol: float = 1e-10,
    coeff_constant=None,
    index_normalization: bool = False,
) -> AdjointRow:
    """The m-th coefficient of the adjoint image of ``f`` with its error bound.

    The error bound is the L-value bound times ``2k`` times the positive
    prefactor.
    """
    L = shifted_L(f, k, m, k + 1, tol, coeff_constant)
    a_m = f.coeffs[m]
    p = prefactor_over_pi2(k, m, index_mu(N) if index_normalization else 1)
    with mpmath.workdps(max(30, int(-math.log10(tol)) + 30)):
        pref = mpmath.mpf(p.numerator) / p.denominator
        pref /= mpmath.pi**2
        lead = (m - mpmath.mpf(k) / 12) * mpmath.mpf(a_m.numerator) / a_m.denominator / mpmath.mpf(m) ** (k + 1)
        value = pref * (lead + 2 * k * L.value)
        err = float(pref * 2 * k * L.error_bound)
        # rounding in the prefactor and the leading term
        err += float(abs(value)) * 2.0 ** (-mpmath.mp.prec + 8)
    exact = None
    if L.exact is not None:
        exact = p * bracket_exact(a_m, k, m, L.exact)
    return AdjointRow(m, +value, err, exact, L)


def adjoint_qexp(
    f: QExpansion,
    k: int,
    N: int,
    M: int,
    tol: float = 1e-10,
    coeff_constant=None,
    index_normalization: bool = False,
) -> AdjointCoeffs:
    """Coefficients ``c(1), ..., c(M)`` of the adjoint image of ``f``."""
    if N % f.level:
        raise ValueError(f"form of level {f.level} is not on Gamma_0({N})")
    rows = tuple(
        adjoint_coeff(f, k, N, m, tol, coeff_constant, index_normalization) for m in range(1, M + 1)
    )
    return AdjointCoeffs(k, N, index_mu(N), rows, index_normalization)


def adjoint_exact_delta(M: int) -> tuple[Fraction, ...]:
    """``pi^2 c(m)`` for f = Delta, k = 10, N = 1 using the exact L-values."""
    return tuple(
        prefactor_over_pi2(10, m) * bracket_exact(Fraction(tau(m)), 10, m, exact_L_delta(m))
        for m in range(1, M + 1)
    )


def _prec_for(tol: float, m_max: int, k: int = 10) -> int:
    return max(required_prec(k, m, tol) for m in (1, m_max))


def tau_from_L(m: int, tol: float = 1e-10) -> tuple[mpmath.mpf, float]:
    """tau(m) recovered from the numeric value of L_{Delta,m}(11)."""
    f = delta(_prec_for(tol, m))
    L = shifted_L(f, 10, m, 11, tol, coeff_constant=1)
    with mpmath.workdps(max(30, int(-math.log10(tol)) + 30)):
        factor = -20 * mpmath.mpf(m) ** 11 / (m - mpmath.mpf(5) / 6)
        value = factor * L.value
    return +value, float(abs(factor)) * L.error_bound


@dataclass(frozen=True)
class BetaRow:
    m: int
    expected: int
    recovered: float
    error: float
    rel_error: float
    ok: bool


@dataclass(frozen=True)
class BetaReport:
    norm_ratio: float
    beta: float
    rows: tuple[BetaRow, ...]
    passed: bool


def beta_from_ratio(norm_ratio: float) -> float:
    """``(5/2^9) ||Delta||^2 / ||Delta_{10,2}||^2``."""
    return 5 / 512 * norm_ratio


def beta_relation_check(
    M: int,
    tol: float,
    norm_ratio: float,
    norm_ratio_err: float = 0.0,
    rel_tol: float = 0.01,
    odd_only: bool = False,
    index_normalization: bool = False,
) -> BetaReport:
    """Recover tau_{10,2}(m) from L-values of V_2 Delta and the norm ratio.

    ``tau_{10,2}(m) = 45 m^9 / (8 beta pi^2)
    * [ (m - 5/6) tau(m/2) / m^11 + 20 L_{V_2 Delta, m}(11) ]``
    with tau(m/2) = 0 for odd m, so odd m reduce to
    ``11520 m^9 / pi^2 * (||Delta_{10,2}||^2 / ||Delta||^2) * L``.
    ``index_normalization`` uses ``15/8`` (odd m: ``3840``) instead.  A row
    passes when the recovered value is within ``rel_tol`` relative (plus the
    propagated L and ratio errors) of the exact coefficient.
    """
    beta = beta_from_ratio(norm_ratio)
    lead = Fraction(15, 8) if index_normalization else Fraction(45, 8)
    prec = _prec_for(tol, M)
    v2 = qs_v_expand(delta(prec), 2)
    d102 = delta_10_2(M + 1)
    rows = []
    for m in range(1, M + 1):
        if odd_only and m % 2 == 0:
            continue
        L = shifted_L(v2, 10, m, 11, tol, coeff_constant=1)
        half = tau(m // 2) if m % 2 == 0 else 0
        pref = float(lead) * m**9 / (beta * math.pi**2)
        inner = (m - 5 / 6) * half / m**11 + 20 * float(L.value)
        recovered = pref * inner
        expected = int(d102[m])
        err = pref * 20 * L.error_bound + abs(recovered) * (norm_ratio_err / norm_ratio if norm_ratio else 0.0)
        rel = abs(recovered - expected) / abs(expected) if expected else abs(recovered)
        ok = abs(recovered - expected) <= rel_tol * abs(expected) + err
        rows.append(BetaRow(m, expected, recovered, err, rel, ok))
    return BetaReport(norm_ratio, beta, tuple(rows), all(r.ok for r in rows))


def beta_constancy(
    M: int, tol: float = 1e-10, index_normalization: bool = False
) -> tuple[list[tuple[int, float, float]], bool]:
    """``c(m) / tau_{10,2}(m)`` for f = V_2 Delta on Gamma_0(2), m = 1..M.

    Returns rows ``(m, ratio, error)`` and whether every ratio agrees with
    the first within the sum of their propagated errors.
    """
    prec = _prec_for(tol, M)
    v2 = qs_v_expand(delta(prec), 2)
    coeffs = adjoint_qexp(v2, 10, 2, M, tol, coeff_constant=1, index_normalization=index_normalization)
    d102 = delta_10_2(M + 1)
    rows = []
    for row in coeffs.rows:
        t = d102[row.m]
        if t == 0:
            continue
        rows.append((row.m, float(row.value) / float(t), row.error_bound / abs(float(t))))
    m0, b0, e0 = rows[0]
    consistent = all(abs(b - b0) <= e + e0 for _, b, e in rows)
    return rows, consistent
