"""Point evaluation of modular forms and numerical Petersson inner products.

Forms are evaluated through their building blocks (eta, Eisenstein series)
in double precision.  Points with small imaginary part are first moved up by
the transformation laws

    eta(z + 1) = e^{i pi/12} eta(z)        eta(-1/z) = sqrt(-i z) eta(z)
    E_2(-1/z) = z^2 E_2(z) - 6 i z / pi    E_k(-1/z) = z^k E_k(z)  (k >= 4)

and then summed as q-series.  The inner product integrates
``f(z) conj(g(z)) y^k`` over the translates of the SL_2(Z) fundamental
domain by coset representatives of Gamma_0(N), truncated at ``y_cutoff``,
with tensor Gauss-Legendre rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import bernoulli, sigma_table
from .errors import QuadratureNotConvergedError, UnsupportedRecipeError
from .forms import DELTA, DELTA_10_2, FormSpec

Y_MIN = 0.5
Y_CUTOFF = 10.0
DEFAULT_NODES = 64
# doubles cannot do better than this relative to the value
TOL_FLOOR = 1e-16


@dataclass(frozen=True)
class ComplexPoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError(f"point must lie in the upper half-plane, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def _as_array(z) -> np.ndarray:
    if isinstance(z, ComplexPoint):
        z = z.z
    arr = np.asarray(z, dtype=complex)
    if np.any(arr.imag <= 0):
        raise ValueError("points must lie in the upper half-plane")
    return arr


def _series_terms(tol: float, growth: int = 0) -> int:
    """Terms ``n`` so that ``n^growth |q|^n < tol`` for ``|q| <= e^{-2 pi Y_MIN}``."""
    tol = max(tol, TOL_FLOOR)
    rate = 2 * math.pi * Y_MIN
    n = 1
    while growth * math.log(n) - rate * n > math.log(tol) - 4:
        n += 1
    return n


def _pentagonal_exponents(limit: int) -> list[tuple[int, int]]:
    out = [(0, 1)]
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 > limit:
            break
        sign = -1 if k % 2 else 1
        out.append((e1, sign))
        e2 = k * (3 * k + 1) // 2
        if e2 <= limit:
            out.append((e2, sign))
        k += 1
    return out


def _eta_series(w: np.ndarray, tol: float) -> np.ndarray:
    q = np.exp(2j * np.pi * w)
    total = np.zeros_like(w)
    for e, sign in _pentagonal_exponents(_series_terms(tol)):
        total += sign * q**e
    return np.exp(2j * np.pi * w / 24) * total


def _reduce(z: np.ndarray, on_translate, on_invert) -> np.ndarray:
    """Move every point to ``Im >= Y_MIN`` by translations and z -> -1/z.

    ``on_translate(mask, n)`` and ``on_invert(mask, znew)`` update the
    caller's multiplier bookkeeping; ``znew = -1/w`` is the new point.
    """
    w = z.copy()
    for _ in range(200):
        n = np.round(w.real)
        w = w - n
        on_translate(n)
        small = w.imag < Y_MIN
        if not small.any():
            return w
        znew = -1 / w[small]
        on_invert(small, znew)
        w[small] = znew
    raise RuntimeError("reduction to the fundamental domain did not terminate")


def eta_array(z, tol: float = 1e-15) -> np.ndarray:
    """Dedekind eta at an array of points."""
    z = _as_array(z)
    shape = z.shape
    z = z.ravel()
    mult = np.ones_like(z)

    def on_translate(n):
        nonlocal mult
        mult = mult * np.exp(1j * np.pi * n / 12)

    def on_invert(mask, znew):
        # eta(w) = eta(-1/znew) = sqrt(-i znew) eta(znew)
        mult[mask] *= np.sqrt(-1j * znew)

    w = _reduce(z, on_translate, on_invert)
    return (mult * _eta_series(w, tol)).reshape(shape)


def _eisenstein_series(k: int, w: np.ndarray, tol: float) -> np.ndarray:
    terms = _series_terms(tol, growth=k)
    sig = sigma_table(k - 1, terms)
    scale = float(-2 * k / bernoulli(k))
    q = np.exp(2j * np.pi * w)
    total = np.zeros_like(w)
    qn = np.ones_like(w)
    for n in range(1, terms + 1):
        qn = qn * q
        total += sig[n] * qn
    return 1 + scale * total


def eisenstein_array(k: int, z, tol: float = 1e-15) -> np.ndarray:
    """E_k at an array of points; E_2 uses its quasimodular transformation law."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein series need even k >= 2, got {k}")
    z = _as_array(z)
    shape = z.shape
    z = z.ravel()
    # E_k(original) = A * E_k(w) + B
    A = np.ones_like(z)
    B = np.zeros_like(z)

    def on_translate(n):
        pass

    def on_invert(mask, znew):
        if k == 2:
            B[mask] += A[mask] * (-6j * znew / np.pi)
        A[mask] *= znew**k

    w = _reduce(z, on_translate, on_invert)
    return (A * _eisenstein_series(k, w, tol) + B).reshape(shape)


def e2_array(z, tol: float = 1e-15) -> np.ndarray:
    return eisenstein_array(2, z, tol)


def eta_eval(z, tol: float = 1e-15) -> complex:
    return complex(eta_array(z, tol))


def e2_eval(z, tol: float = 1e-15) -> complex:
    return complex(e2_array(z, tol))


def evaluate(spec: FormSpec, z, tol: float = 1e-15) -> np.ndarray:
    """Values of the form described by ``spec`` at an array of points."""
    z = _as_array(z)
    kind, a = spec.kind, spec.args
    if kind == "eisenstein":
        return eisenstein_array(a[0], z, tol)
    if kind == "eta_quotient":
        out = np.ones_like(z)
        for d, r in a:
            out = out * eta_array(d * z, tol) ** r
        return out
    if kind == "product":
        out = np.ones_like(z)
        for s in a:
            out = out * evaluate(s, z, tol)
        return out
    if kind == "scaled":
        return float(a[0]) * evaluate(a[1], z, tol)
    if kind == "v_shift":
        return evaluate(a[1], a[0] * z, tol)
    if kind == "linear_combination":
        out = np.zeros_like(z)
        for c, s in a:
            out = out + float(c) * evaluate(s, z, tol)
        return out
    raise UnsupportedRecipeError(f"recipes of kind {kind!r} cannot be evaluated at points")


def form_eval(spec: FormSpec, z, tol: float = 1e-15) -> complex:
    return complex(evaluate(spec, z, tol))


def phi_invariant(f: FormSpec, g: FormSpec, k: int, z, tol: float = 1e-15):
    """``f(z) conj(g(z)) y^k``; invariant under Gamma_0(N) for forms of weight k."""
    for s in (f, g):
        if s.weight != k:
            raise ValueError(f"{s} has weight {s.weight}, expected {k}")
    z = _as_array(z)
    return evaluate(f, z, tol) * np.conj(evaluate(g, z, tol)) * z.imag**k


# right coset representatives of Gamma_0(N) in SL_2(Z)
COSET_REPS = {
    1: ((1, 0, 0, 1),),
    2: ((1, 0, 0, 1), (0, -1, 1, 0), (0, -1, 1, 1)),
}


def apply_matrix(gamma, z):
    a, b, c, d = gamma
    return (a * z + b) / (c * z + d)


@dataclass(frozen=True)
class PeterssonEstimate:
    value: complex
    est_error: float
    nodes: int
    y_cutoff: float
    level: int
    weight: int
    cutoff_error: float
    doubling_diff: float

    @property
    def real(self) -> float:
        return self.value.real

    def to_json_obj(self) -> dict:
        obj = {
            "value": repr(self.value.real),
            "value_imag": repr(self.value.imag),
            "est_error": self.est_error,
            "nodes": self.nodes,
            "y_cutoff": self.y_cutoff,
            "level": self.level,
            "weight": self.weight,
            "cutoff_error": self.cutoff_error,
        }
        return obj


def _domain_rule(nodes: int, y_cutoff: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for ``|x| <= 1/2, sqrt(1 - x^2) <= y <= y_cutoff``."""
    t, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * t
    wx = 0.5 * w
    lo = np.sqrt(1 - x**2)
    half = (y_cutoff - lo) / 2
    mid = (y_cutoff + lo) / 2
    y = half[:, None] * t[None, :] + mid[:, None]
    wts = (wx * half)[:, None] * w[None, :]
    return x[:, None] + 1j * y, wts


def _integrate(f: FormSpec, g: FormSpec, k: int, level: int, nodes: int, y_cutoff: float) -> tuple[complex, float]:
    z, wts = _domain_rule(nodes, y_cutoff)
    total = 0j
    abs_total = 0.0
    for gamma in COSET_REPS[level]:
        vals = phi_invariant(f, g, k, apply_matrix(gamma, z)) / z.imag**2
        total += np.sum(vals * wts)
        abs_total += float(np.sum(np.abs(vals) * wts))
    mu = len(COSET_REPS[level])
    return total / mu, abs_total / mu


def _cutoff_estimate(f: FormSpec, g: FormSpec, k: int, level: int, y_cutoff: float) -> float:
    """Mass above ``y_cutoff``: boundary integrand over its decay rate.

    Cusps of Gamma_0(N) have width at most N, so a product of cusp forms
    decays at least like ``exp(-4 pi y / N) y^{k-2}``.
    """
    t, w = np.polynomial.legendre.leggauss(32)
    z = 0.5 * t + 1j * y_cutoff
    edge = 0.0
    for gamma in COSET_REPS[level]:
        vals = np.abs(phi_invariant(f, g, k, apply_matrix(gamma, z))) / y_cutoff**2
        edge += float(np.sum(0.5 * w * vals))
    rate = max(4 * math.pi / level - (k - 2) / y_cutoff, 0.5)
    return edge / len(COSET_REPS[level]) / rate


def petersson_inner(
    f: FormSpec,
    g: FormSpec,
    k: int,
    level: int,
    nodes: int = DEFAULT_NODES,
    y_cutoff: float = Y_CUTOFF,
    check: bool = True,
) -> PeterssonEstimate:
    """``(1/mu) int_{Gamma_0(N) \\ H} f conj(g) y^k dx dy / y^2`` by quadrature.

    The error estimate combines the change from halving the node count, the
    truncation mass above ``y_cutoff``, and a floating point floor.  With
    ``check`` the rule must show geometric convergence over node counts
    ``nodes/4, nodes/2, nodes``.
    """
    if level not in COSET_REPS:
        raise ValueError(f"only levels {sorted(COSET_REPS)} are supported, got {level}")
    if nodes < 8:
        raise ValueError("need at least 8 nodes per direction")
    if not (f.is_cusp or g.is_cusp):
        raise ValueError("at least one form must be a cusp form")
    if level % f.level or level % g.level:
        raise ValueError(f"forms of level {f.level}, {g.level} are not on Gamma_0({level})")
    value, scale = _integrate(f, g, k, level, nodes, y_cutoff)
    half, _ = _integrate(f, g, k, level, nodes // 2, y_cutoff)
    diff = abs(value - half)
    floor = 1e-13 * scale
    if check:
        quarter, _ = _integrate(f, g, k, level, nodes // 4, y_cutoff)
        prev = abs(half - quarter)
        if diff > floor and diff > 0.5 * prev:
            raise QuadratureNotConvergedError(
                f"quadrature not converged: node halving changes {prev:.3g} then {diff:.3g}"
            )
    cutoff = _cutoff_estimate(f, g, k, level, y_cutoff)
    est = diff + cutoff + floor
    return PeterssonEstimate(complex(value), est, nodes, y_cutoff, level, k, cutoff, diff)


def norm_ratio_10_2(nodes: int = DEFAULT_NODES, y_cutoff: float = Y_CUTOFF) -> tuple[float, float]:
    """``||Delta||^2 / ||Delta_{10,2}||^2`` with both norms normalized by 1/mu."""
    n1 = petersson_inner(DELTA, DELTA, 12, 1, nodes, y_cutoff)
    n2 = petersson_inner(DELTA_10_2, DELTA_10_2, 10, 2, nodes, y_cutoff)
    ratio = n1.real / n2.real
    err = float(abs(ratio)) * (n1.est_error / abs(n1.real) + n2.est_error / abs(n2.real))
    return ratio, err
