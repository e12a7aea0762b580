"""End-to-end checks of the identities for Delta, Delta_{10,2} and V_2 Delta.

Each check returns a :class:`CheckResult`; ``run_all`` drives them in order
for the ``verify`` command and the acceptance tests.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .adjoint import adjoint_qexp, beta_constancy, beta_from_ratio, beta_relation_check
from .forms import DELTA, DELTA_10_2, V2DELTA, delta, delta_10_2, deligne_check, serre_derivative
from .lseries import bound_scan, exact_L_delta, required_prec, shifted_L, sign_scan
from .petersson import petersson_inner, norm_ratio_10_2, phi_invariant
from .qseries import QExpansion, qs_add, qs_derive, qs_mul, qs_v_expand
from .spaces import decompose, space_basis

NODES = 64


@dataclass(frozen=True)
class CheckResult:
    number: int
    label: str
    passed: bool
    detail: str
    seconds: float
    time_limit: float

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2}. {self.label}: {self.detail} ({self.seconds:.2f}s / {self.time_limit:g}s)"


@lru_cache(maxsize=None)
def _norms(nodes: int):
    n1 = petersson_inner(DELTA, DELTA, 12, 2, nodes)
    cross = petersson_inner(DELTA, V2DELTA, 12, 2, nodes)
    v2 = petersson_inner(V2DELTA, V2DELTA, 12, 2, nodes)
    return n1, cross, v2


@lru_cache(maxsize=None)
def _ratio(nodes: int) -> tuple[float, float]:
    return norm_ratio_10_2(nodes)


def check_exp10() -> tuple[bool, str]:
    f = serre_derivative(delta_10_2(200), 10)
    coords = decompose(f, space_basis(12, 2, 200))
    ok = coords == (Fraction(1, 6), Fraction(128, 3))
    return ok, f"coordinates {', '.join(map(str, coords))} at prec 200"


def check_serre_delta() -> tuple[bool, str]:
    f = serre_derivative(delta(500), 12)
    nonzero = sum(1 for c in f.coeffs if c)
    return nonzero == 0, f"{nonzero} nonzero of {f.prec} coefficients"


def check_L_identity(m_max: int = 100, tol: float = 1e-10) -> tuple[bool, str]:
    f = delta(required_prec(10, m_max, tol))
    worst = 0.0
    bad = []
    for m in range(1, m_max + 1):
        L = shifted_L(f, 10, m, 11, tol, coeff_constant=1)
        ex = exact_L_delta(m)
        diff = abs(L.value - mpmath.mpf(ex.numerator) / ex.denominator)
        worst = max(worst, float(diff))
        if diff > tol or L.error_bound > tol or diff > L.error_bound:
            bad.append(m)
    L1 = shifted_L(f, 10, 1, 11, tol, coeff_constant=1)
    ok = not bad and abs(float(L1.value) + 1 / 120) <= tol
    return ok, f"max |L - exact| = {worst:.2e} over m <= {m_max}; L(1) = {mpmath.nstr(L1.value, 15)}" + (
        f"; failing m {bad[:5]}" if bad else ""
    )


def check_adjoint_vanishing(M: int = 20, tol: float = 1e-10) -> tuple[bool, str]:
    f = delta(required_prec(10, M, tol))
    coeffs = adjoint_qexp(f, 10, 1, M, tol, coeff_constant=1)
    numeric_ok = all(abs(r.value) <= r.error_bound for r in coeffs.rows)
    exact = coeffs.exact_coeffs
    exact_ok = exact is not None and all(c == 0 for c in exact)
    worst = max(float(abs(r.value)) / r.error_bound for r in coeffs.rows)
    return numeric_ok and exact_ok, f"max |c(m)|/bound = {worst:.2e}; exact c(m) all zero: {exact_ok}"


def check_petersson_ratios(nodes: int = NODES) -> tuple[bool, str]:
    n1, cross, v2 = _norms(nodes)
    r1 = cross.real / n1.real
    r2 = v2.real / n1.real
    e1 = abs(r1 / (-1 / 256) - 1)
    e2 = abs(r2 / 2**-12 - 1)
    ok = e1 <= 0.005 and e2 <= 0.005
    return ok, f"<D,V2D>/|D|^2 = {r1:.9g} (rel err {e1:.1e}); |V2D|^2/|D|^2 = {r2:.9g} (rel err {e2:.1e})"


def check_tau2_roundtrip(nodes: int = NODES) -> tuple[bool, str]:
    ratio, err = _ratio(nodes)
    report = beta_relation_check(9, 1e-10, ratio, err, rel_tol=0.01, odd_only=True, index_normalization=True)
    parts = [f"m={r.m}: {r.recovered:.6g} vs {r.expected}" for r in report.rows]
    return report.passed, "3840 m^9/pi^2 formula; " + "; ".join(parts)


def check_bound(m_max: int = 300) -> tuple[bool, str]:
    report = bound_scan(m_max)
    worst = max(r.statistic / r.bound for r in report.rows)
    extra = f"; first violation m={report.first_violation}" if not report.passed else ""
    return report.passed, f"max m^4.5|L|/(d(m)/20) = {worst:.4f} over m <= {m_max}{extra}"


def check_sign(m_max: int = 1000) -> tuple[bool, str]:
    report = sign_scan(m_max)
    extra = f"; first violation m={report.first_violation}" if not report.passed else ""
    return report.passed, f"{len(report.sign_changes_tau)} sign changes of tau, {len(report.sign_changes_L)} of L up to {m_max}{extra}"


def check_deligne() -> tuple[bool, str]:
    r1 = deligne_check(delta(5001), 12, 5000)
    r2 = deligne_check(delta_10_2(2001), 10, 2000)
    return r1.passed and r2.passed, f"tau: max ratio {r1.max_ratio:.4f} (n<=5000); tau_10,2: max ratio {r2.max_ratio:.4f} (n<=2000)"


def check_beta(nodes: int = NODES, M: int = 10, tol: float = 1e-10) -> tuple[bool, str]:
    rows, constant = beta_constancy(M, tol)
    ratio, _ = _ratio(nodes)
    beta_quad = beta_from_ratio(ratio)
    beta_adj = rows[0][1]
    rel = abs(beta_adj / beta_quad - 1)
    ok = constant and beta_adj > 0 and rel <= 0.01
    return ok, f"beta from c(m)/tau_10,2(m) = {beta_adj:.9g} (constant: {constant}); (5/2^9) ratio = {beta_quad:.9g}; rel diff {rel:.1e}"


def _random_series(rng: random.Random, prec: int, weight: int = 0) -> QExpansion:
    return QExpansion.from_coeffs(
        [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(prec)], weight=weight
    )


def check_properties(seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    for _ in range(20):
        f, g, h = (_random_series(rng, 30) for _ in range(3))
        if qs_mul(qs_add(f, g), h) != qs_add(qs_mul(f, h), qs_mul(g, h)):
            failures.append("distributivity")
        if qs_derive(qs_mul(f, g)) != qs_add(qs_mul(qs_derive(f), g), qs_mul(f, qs_derive(g))):
            failures.append("leibniz")
        t, s = rng.randint(1, 4), rng.randint(1, 4)
        if qs_v_expand(qs_mul(f, g), t) != qs_mul(qs_v_expand(f, t), qs_v_expand(g, t)):
            failures.append("V multiplicative")
        if qs_v_expand(qs_v_expand(f, t), s) != qs_v_expand(f, s * t):
            failures.append("V composition")
        lhs = qs_derive(qs_v_expand(f, t))
        rhs = qs_v_expand(qs_derive(f), t) * t
        if lhs.coeffs != rhs.coeffs:
            failures.append("D V_t = t V_t D")

    # modular invariance of f conj(g) y^k under Gamma_0(2) generators
    worst = 0.0
    for _ in range(100):
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.3, 1.5))
        for f, g, k in ((DELTA_10_2, DELTA_10_2, 10), (DELTA, V2DELTA, 12)):
            base = phi_invariant(f, g, k, z)
            scale = max(abs(base), 1e-300)
            for gz in (z + 1, z / (2 * z + 1)):
                worst = max(worst, abs(phi_invariant(f, g, k, gz) - base) / scale)
    if worst > 1e-8:
        failures.append(f"phi invariance ({worst:.1e})")

    a = petersson_inner(DELTA, DELTA, 12, 1, NODES)
    b, _, _ = _norms(NODES)
    if abs(a.real - b.real) > a.est_error + b.est_error:
        failures.append("level consistency")

    from .cli import render

    argv = ["lvalue", "--form", "delta", "--m", "3", "--s", "11", "--tol", "1e-8"]
    if render(argv) != render(argv):
        failures.append("cli determinism")
    detail = "ring, Leibniz, V_t laws; phi invariance (max rel {:.1e}); level consistency |D|^2 N=1 {:.12g} vs N=2 {:.12g}; CLI determinism".format(
        worst, a.real, b.real
    )
    if failures:
        detail += "; failed: " + ", ".join(sorted(set(failures)))
    return not failures, detail


CHECKS = (
    (1, "exact decomposition theta_10 Delta_10,2 = (1/6) Delta + (128/3) V_2 Delta", check_exp10, 1.0),
    (2, "theta_12 Delta = 0", check_serre_delta, 1.0),
    (3, "L_Delta,m(11) = -(m - 5/6) tau(m) / (20 m^11), L_Delta,1(11) = -1/120", check_L_identity, 30.0),
    (4, "adjoint of theta_10 vanishes on Delta", check_adjoint_vanishing, 30.0),
    (5, "<Delta,V_2 Delta> = -|Delta|^2/256 and |V_2 Delta|^2 = 2^-12 |Delta|^2", check_petersson_ratios, 300.0),
    (6, "tau_10,2(m) from 3840 m^9/pi^2 formula, odd m <= 9", check_tau2_roundtrip, 300.0),
    (7, "m^4.5 |L_Delta,m(11)| <= d(m)/20, m <= 300", check_bound, 60.0),
    (8, "sign L_Delta,m(11) = -sign tau(m), m <= 1000", check_sign, 60.0),
    (9, "Deligne bound for tau and tau_10,2", check_deligne, 60.0),
    (10, "beta = (5/2^9) |Delta|^2/|Delta_10,2|^2", check_beta, 300.0),
    (11, "property suites", check_properties, 120.0),
)


def run_check(number: int) -> CheckResult:
    for num, label, func, limit in CHECKS:
        if num == number:
            start = time.perf_counter()
            try:
                passed, detail = func()
            except Exception as exc:  # a crash is a failed criterion, reported like one
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            seconds = time.perf_counter() - start
            if seconds > limit:
                passed = False
                detail += f"; over time limit {limit:g}s"
            return CheckResult(num, label, passed, detail, seconds, limit)
    raise KeyError(f"no check number {number}")


def run_all(numbers=None) -> list[CheckResult]:
    numbers = [c[0] for c in CHECKS] if numbers is None else list(numbers)
    return [run_check(n) for n in numbers]
