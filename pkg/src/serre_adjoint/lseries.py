"""The shifted Dirichlet series L_{f,m}(s) = sum_{n>=1} a(n+m) sigma(n) / (n+m)^s.

Values are summed in mpmath up to a horizon chosen so that an explicit tail
majorant falls below the requested tolerance.  The majorant assumes

    |a(n)| <= C d(n) n^{(w-1)/2},   d(n) <= c_delta n^delta,   sigma(n) <= n (1 + log n)

where ``w = k + 2`` is the weight of ``f``.  ``C = 1`` is a theorem for the
built-in newforms; for anything else ``C`` is read off the known
coefficients and the result is labelled heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import divisor_bound_constant, divisor_count, divisor_count_table, sigma_table
from .errors import DivergentRegimeError, PrecisionExhaustedError
from .forms import delta, tau
from .qseries import QExpansion

_DELTAS = (Fraction(1, 4), Fraction(1, 6), Fraction(1, 8))


@dataclass(frozen=True)
class ShiftedLValue:
    m: int
    s: float
    value: mpmath.mpf
    error_bound: float
    horizon: int
    exact: Fraction | None = None
    heuristic: bool = False
    coeff_constant: float = 1.0

    def to_json_obj(self, digits: int = 25) -> dict:
        obj = {
            "m": self.m,
            "s": self.s,
            "value": mpmath.nstr(self.value, digits),
            "error_bound": self.error_bound,
            "horizon": self.horizon,
            "heuristic_bound": self.heuristic,
        }
        if self.exact is not None:
            obj["exact"] = f"{self.exact.numerator}/{self.exact.denominator}"
        return obj


def _tail_integral(x0: float, p: float) -> float:
    """``int_{x0}^inf (1 + log t) t^{-p} dt`` for ``p > 1``."""
    q = p - 1
    return x0 ** (-q) * ((1 + math.log(x0)) / q + 1 / q**2)


def tail_bound(c_f: float, k: int, m: int, s: float, horizon: int, delta: Fraction) -> float:
    """Majorant of ``sum_{n > horizon} |a(n+m)| sigma(n) / (n+m)^s``.

    With ``x = n + m`` every term is at most ``C c_delta (1 + log x) x^{-p}``,
    ``p = s - (k+1)/2 - delta - 1``, a decreasing function for ``x >= 1``;
    the sum over ``x > horizon + m`` is bounded by the integral from
    ``horizon + m``.
    """
    if c_f == 0:
        return 0.0
    p = s - (k + 1) / 2 - float(delta) - 1
    if p <= 1:
        return math.inf
    return c_f * divisor_bound_constant(delta) * _tail_integral(horizon + m, p)


def _choose_horizon(c_f: float, k: int, m: int, s: float, target: float) -> tuple[int, Fraction]:
    best = None
    for eps in _DELTAS:
        if tail_bound(c_f, k, m, s, 1, eps) == math.inf:
            continue
        hi = 1
        while tail_bound(c_f, k, m, s, hi, eps) > target:
            hi *= 2
            if hi > 1 << 40:
                break
        lo = hi // 2
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if tail_bound(c_f, k, m, s, mid, eps) > target:
                lo = mid
            else:
                hi = mid
        if tail_bound(c_f, k, m, s, 1, eps) <= target:
            hi = 1
        if best is None or hi < best[0]:
            best = (hi, eps)
    if best is None:
        raise DivergentRegimeError(f"no explicit tail bound for s={s}, k={k}")
    return best


def _check_regime(k: int, s: float) -> None:
    if k < 4:
        raise DivergentRegimeError(f"k={k}: absolute convergence at s=k+1 needs k >= 4")
    if s <= (k + 5) / 2:
        raise DivergentRegimeError(f"s={s} is outside the half-plane of absolute convergence s > {(k + 5) / 2}")


def required_prec(k: int, m: int, tol: float, s: float | None = None, coeff_constant: float = 1.0) -> int:
    """Precision a form needs for :func:`shifted_L` to reach ``tol``."""
    s = k + 1 if s is None else s
    _check_regime(k, s)
    horizon, _ = _choose_horizon(float(coeff_constant), k, m, s, tol / 2)
    return horizon + m + 1


def empirical_coeff_constant(f: QExpansion, weight: int) -> float:
    """``max |a(n)| / (d(n) n^{(w-1)/2})`` over the known coefficients."""
    dtab = divisor_count_table(f.prec)
    worst = 0.0
    for n in range(1, f.prec):
        a = f.coeffs[n]
        if a:
            r = math.exp(math.log(abs(a)) - math.log(dtab[n]) - (weight - 1) / 2 * math.log(n))
            worst = max(worst, r)
    return worst


def exact_L_delta(m: int) -> Fraction:
    """``L_{Delta,m}(11) = -(m - 5/6) tau(m) / (20 m^11)``."""
    if m < 1:
        raise ValueError("m must be positive")
    return -(m - Fraction(5, 6)) * tau(m) / (20 * Fraction(m) ** 11)


def _delta_multiple(f: QExpansion) -> Fraction | None:
    """``c`` when ``f == c * Delta`` on every known coefficient."""
    if f.weight != 12 or f.level != 1 or f.prec < 2:
        return None
    c = f.coeffs[1]
    d = delta(f.prec).coeffs
    if all(a == c * b for a, b in zip(f.coeffs, d)):
        return c
    return None


def shifted_L(
    f: QExpansion,
    k: int,
    m: int,
    s: float = None,
    tol: float = 1e-10,
    coeff_constant=None,
) -> ShiftedLValue:
    """Evaluate ``L_{f,m}(s)`` for a cusp form ``f`` of weight ``k + 2``.

    ``s`` defaults to ``k + 1``.  ``coeff_constant`` is a proven constant
    ``C`` in ``|a(n)| <= C d(n) n^{(k+1)/2}``; without it the bound is
    heuristic.
    """
    if s is None:
        s = k + 1
    if m < 1:
        raise ValueError("shift m must be a positive integer")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if f.weight != k + 2:
        raise ValueError(f"expected a form of weight {k + 2}, got weight {f.weight}")
    if f.coeffs[0] != 0:
        raise ValueError("shifted_L expects a cusp form")
    _check_regime(k, s)

    heuristic = coeff_constant is None
    c_f = empirical_coeff_constant(f, k + 2) if heuristic else float(coeff_constant)

    exact = None
    mult = _delta_multiple(f)
    if mult is not None and k == 10 and s == 11:
        exact = mult * exact_L_delta(m)

    if c_f == 0:
        return ShiftedLValue(m, s, mpmath.mpf(0), 0.0, 0, exact, heuristic, 0.0)

    horizon, _ = _choose_horizon(c_f, k, m, s, tol / 2)
    if horizon + m >= f.prec:
        raise PrecisionExhaustedError(
            f"L_(f,{m})({s}) to tol {tol:g} needs coefficients up to q^{horizon + m}; form has prec {f.prec}"
        )
    tail = min(tail_bound(c_f, k, m, s, horizon, d) for d in _DELTAS)

    dps = max(30, int(math.ceil(-math.log10(tol))) + 30)
    sig = sigma_table(1, horizon)
    s_int = int(s) if float(s).is_integer() else None
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        abs_total = mpmath.mpf(0)
        for n in range(1, horizon + 1):
            a = f.coeffs[n + m]
            if not a:
                continue
            num = a.numerator * sig[n]
            if s_int is not None:
                term = mpmath.mpf(num) / (a.denominator * (n + m) ** s_int)
            else:
                term = mpmath.mpf(num) / a.denominator / mpmath.power(n + m, s)
            total += term
            abs_total += abs(term)
        rounding = float(abs_total * (horizon + 1) * mpmath.mpf(2) ** (-mpmath.mp.prec + 2))
        value = +total
    error_bound = tail + rounding
    return ShiftedLValue(m, s, value, error_bound, horizon, exact, heuristic, c_f)


@dataclass(frozen=True)
class ScanRow:
    m: int
    tau: int
    L: Fraction
    statistic: float
    bound: float
    ok: bool


@dataclass(frozen=True)
class ScanReport:
    kind: str
    rows: tuple[ScanRow, ...]
    passed: bool
    first_violation: int | None
    sign_changes_tau: tuple[int, ...] = ()
    sign_changes_L: tuple[int, ...] = ()


def bound_scan(m_max: int) -> ScanReport:
    """Check ``m^{9/2} |L_{Delta,m}(11)| <= d(m)/20`` for ``m <= m_max``.

    Exact: the inequality is compared after squaring.
    """
    if m_max < 1:
        raise ValueError("m_max must be positive")
    rows = []
    first = None
    for m in range(1, m_max + 1):
        L = exact_L_delta(m)
        d = divisor_count(m)
        ok = m**9 * L * L <= Fraction(d, 20) ** 2
        if not ok and first is None:
            first = m
        rows.append(ScanRow(m, tau(m), L, m**4.5 * abs(float(L)), d / 20, ok))
    return ScanReport("bound", tuple(rows), first is None, first)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _changes(signs: list[tuple[int, int]]) -> tuple[int, ...]:
    out = []
    prev = 0
    for m, sg in signs:
        if sg == 0:
            continue
        if prev and sg != prev:
            out.append(m)
        prev = sg
    return tuple(out)


def sign_scan(m_max: int) -> ScanReport:
    """Check ``sign L_{Delta,m}(11) = -sign tau(m)`` for ``m <= m_max``."""
    if m_max < 1:
        raise ValueError("m_max must be positive")
    rows = []
    first = None
    for m in range(1, m_max + 1):
        t = tau(m)
        L = exact_L_delta(m)
        ok = t == 0 or _sign(L) == -_sign(t)
        if not ok and first is None:
            first = m
        rows.append(ScanRow(m, t, L, float(_sign(L)), float(-_sign(t)), ok))
    return ScanReport(
        "sign",
        tuple(rows),
        first is None,
        first,
        _changes([(r.m, _sign(r.tau)) for r in rows]),
        _changes([(r.m, _sign(r.L)) for r in rows]),
    )
