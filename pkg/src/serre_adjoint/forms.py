"""Constructors for the modular forms used here and the Serre derivative.

Forms are described by :class:`FormSpec` recipes.  A recipe can be expanded
into an exact :class:`~serre_adjoint.qseries.QExpansion` (:func:`expand`) or
evaluated at points of the upper half-plane (see :mod:`serre_adjoint.petersson`).
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .arith import bernoulli, divisor_count_table, sigma_table
from .errors import InsufficientPrecisionError, UnsupportedRecipeError
from .qseries import (
    DEFAULT_PREC,
    QExpansion,
    int_convolve,
    qs_add,
    qs_derive,
    qs_mul,
    qs_pow_sparse,
    qs_scale,
    qs_v_expand,
)

# ---------------------------------------------------------------------------
# q-expansion constructors


class _SeriesCache:
    """Remembers the longest expansion built so far and truncates on request."""

    def __init__(self, build: Callable[[int], QExpansion]):
        self._build = build
        self._value: QExpansion | None = None
        self._lock = threading.Lock()

    def __call__(self, prec: int) -> QExpansion:
        if prec < 1:
            raise ValueError("prec must be positive")
        value = self._value
        if value is None or value.prec < prec:
            with self._lock:
                value = self._value
                if value is None or value.prec < prec:
                    value = self._build(prec)
                    self._value = value
        return value if value.prec == prec else value.truncate(prec)


def _pentagonal(step: int, prec: int) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^(step*n)) below ``prec``."""
    out = [0] * prec
    k = 0
    while True:
        hit = False
        for j in (k, -k) if k else (0,):
            e = step * (j * (3 * j - 1) // 2)
            if e < prec:
                out[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def eta_quotient(spec, prec: int = DEFAULT_PREC) -> QExpansion:
    """Expansion of ``prod_d eta(d z)^{r_d}`` for ``spec = [(d, r_d), ...]``."""
    spec = [(int(d), int(r)) for d, r in spec if int(r) != 0]
    order24 = sum(d * r for d, r in spec)
    if order24 % 24:
        raise ValueError(f"leading exponent {order24}/24 is not an integer")
    total = sum(r for _, r in spec)
    if total % 2:
        raise ValueError("half-integral weight eta quotients are not supported")
    offset = order24 // 24
    if offset < 0:
        raise ValueError("eta quotient has a pole at infinity")
    level = math.lcm(*[d for d, _ in spec]) if spec else 1
    inner = max(prec - offset, 0)
    series = [1] + [0] * (inner - 1) if inner else []
    for d, r in spec:
        if not inner:
            break
        factor = qs_pow_sparse(_pentagonal(d, inner), r, inner)
        series = int_convolve(series, factor, inner)
    coeffs = [0] * offset + series
    return QExpansion.from_coeffs(coeffs[:prec], prec, weight=total // 2, level=level, cusp=offset > 0)


def eisenstein(k: int, prec: int = DEFAULT_PREC) -> QExpansion:
    """``E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n``; ``E_2`` is flagged quasimodular."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein series need even k >= 2, got {k}")
    scale = Fraction(-2 * k) / bernoulli(k)
    sig = sigma_table(k - 1, prec)
    coeffs = [Fraction(1)] + [scale * sig[n] for n in range(1, prec)]
    return QExpansion.from_coeffs(coeffs[:prec], weight=k, level=1, quasimodular=(k == 2))


_delta_cache = _SeriesCache(lambda prec: eta_quotient([(1, 24)], prec).with_meta(name="delta"))


def delta(prec: int = DEFAULT_PREC) -> QExpansion:
    """Ramanujan's Delta, normalized so that tau(1) = 1."""
    return _delta_cache(prec)


def delta_eisenstein(prec: int = DEFAULT_PREC) -> QExpansion:
    """Delta as ``(E_4^3 - E_6^2)/1728``; quadratic cost, used as a cross-check."""
    e4 = eisenstein(4, prec)
    e6 = eisenstein(6, prec)
    d = qs_scale(qs_add(qs_mul(qs_mul(e4, e4), e4), qs_scale(qs_mul(e6, e6), -1)), Fraction(1, 1728))
    return d.with_meta(cusp=True)


def tau(n: int) -> int:
    """Ramanujan tau function."""
    if n < 1:
        raise ValueError("tau(n) needs n >= 1")
    return int(delta(n + 1)[n])


def level2_weight2(prec: int = DEFAULT_PREC) -> QExpansion:
    """``2 E_2(2z) - E_2(z)``, the holomorphic weight 2 form on Gamma_0(2)."""
    e2 = eisenstein(2, prec)
    x2 = qs_add(qs_scale(qs_v_expand(e2, 2), 2), qs_scale(e2, -1))
    return x2.with_meta(quasimodular=False)


def _build_delta_10_2(prec: int) -> QExpansion:
    f = qs_mul(eta_quotient([(1, 8), (2, 8)], prec), level2_weight2(prec))
    lead = f[1]
    return qs_scale(f, 1 / lead).with_meta(weight=10, level=2, cusp=True, name="delta_10_2")


_delta_10_2_cache = _SeriesCache(_build_delta_10_2)


def delta_10_2(prec: int = DEFAULT_PREC) -> QExpansion:
    """Normalized generator of the one-dimensional space S_10(Gamma_0(2))."""
    return _delta_10_2_cache(prec)


def serre_derivative(f: QExpansion, k: int) -> QExpansion:
    """``Df - (k/12) E_2 f``, of weight ``k + 2`` on the level of ``f``."""
    if f.weight != k:
        raise ValueError(f"form has weight {f.weight}, operator has weight {k}")
    e2 = eisenstein(2, f.prec)
    e2f = qs_mul(e2, f)
    out = qs_add(qs_derive(f), qs_scale(e2f, Fraction(-k, 12)))
    return out.with_meta(weight=k + 2, level=f.level, quasimodular=f.quasimodular, cusp=f.cusp)


@dataclass(frozen=True)
class DeligneReport:
    passed: bool
    weight: int
    n_max: int
    max_ratio: float
    worst_n: int | None
    first_violation: int | None = None

    def to_json_obj(self) -> dict:
        return dict(self.__dict__)


def deligne_check(f: QExpansion, k_ambient: int, n_max: int) -> DeligneReport:
    """Check ``|a(n)| <= d(n) n^{(k-1)/2}`` exactly for ``1 <= n <= n_max``.

    The comparison is done on squares in integer arithmetic; the reported
    ratio ``|a(n)| / (d(n) n^{(k-1)/2})`` is a float for display.
    """
    if f.prec <= n_max:
        raise InsufficientPrecisionError(f"need prec > {n_max}, have {f.prec}")
    if f.coeffs[0] != 0:
        raise ValueError("deligne_check expects a cusp form")
    ints = f.integer_coeffs()
    if ints is None:
        raise ValueError("deligne_check expects integral coefficients")
    dtab = divisor_count_table(n_max)
    worst, worst_n, first_bad = 0.0, None, None
    for n in range(1, n_max + 1):
        a = ints[n]
        if not a:
            continue
        d = dtab[n]
        if a * a > d * d * n ** (k_ambient - 1) and first_bad is None:
            first_bad = n
        ratio = math.exp(math.log(abs(a)) - math.log(d) - (k_ambient - 1) / 2 * math.log(n))
        if ratio > worst:
            worst, worst_n = ratio, n
    return DeligneReport(first_bad is None, k_ambient, n_max, worst, worst_n, first_bad)


# ---------------------------------------------------------------------------
# recipes

_KINDS = ("eisenstein", "eta_quotient", "product", "scaled", "v_shift", "linear_combination", "serre")


@dataclass(frozen=True)
class FormSpec:
    """Symbolic recipe for a modular form.

    ``args`` depends on ``kind``:

    * ``eisenstein``: ``(k,)``
    * ``eta_quotient``: ``((d, r_d), ...)``
    * ``product``: ``(spec, ...)``
    * ``scaled``: ``(Fraction, spec)``
    * ``v_shift``: ``(t, spec)``
    * ``linear_combination``: ``((Fraction, spec), ...)``
    * ``serre``: ``(spec, k)``; expansion only, no point evaluation
    """

    kind: str
    args: tuple
    weight: int
    level: int
    is_cusp: bool
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise UnsupportedRecipeError(f"unknown recipe kind {self.kind!r}")

    def __str__(self) -> str:
        return self.name or to_expression(self)

    # constructors
    @classmethod
    def eisenstein(cls, k: int) -> "FormSpec":
        if k < 2 or k % 2:
            raise ValueError(f"Eisenstein series need even k >= 2, got {k}")
        return cls("eisenstein", (k,), k, 1, False)

    @classmethod
    def eta_quotient(cls, factors) -> "FormSpec":
        factors = tuple(sorted((int(d), int(r)) for d, r in factors if int(r)))
        order24 = sum(d * r for d, r in factors)
        if order24 % 24:
            raise ValueError(f"leading exponent {order24}/24 is not an integer")
        total = sum(r for _, r in factors)
        if total % 2:
            raise ValueError("half-integral weight eta quotients are not supported")
        level = math.lcm(*[d for d, _ in factors]) if factors else 1
        return cls("eta_quotient", factors, total // 2, level, order24 > 0)

    @classmethod
    def product(cls, *specs: "FormSpec") -> "FormSpec":
        if not specs:
            raise ValueError("empty product")
        return cls(
            "product",
            tuple(specs),
            sum(s.weight for s in specs),
            math.lcm(*[s.level for s in specs]),
            any(s.is_cusp for s in specs),
        )

    @classmethod
    def scaled(cls, c, spec: "FormSpec") -> "FormSpec":
        return cls("scaled", (Fraction(c), spec), spec.weight, spec.level, spec.is_cusp)

    @classmethod
    def v_shift(cls, t: int, spec: "FormSpec") -> "FormSpec":
        if t < 1:
            raise ValueError("V_t needs t >= 1")
        return cls("v_shift", (int(t), spec), spec.weight, spec.level * t, spec.is_cusp)

    @classmethod
    def linear_combination(cls, terms) -> "FormSpec":
        terms = tuple((Fraction(c), s) for c, s in terms)
        if not terms:
            raise ValueError("empty linear combination")
        weights = {s.weight for _, s in terms}
        if len(weights) != 1:
            raise ValueError(f"mixed weights {sorted(weights)} in linear combination")
        return cls(
            "linear_combination",
            terms,
            weights.pop(),
            math.lcm(*[s.level for _, s in terms]),
            all(s.is_cusp for _, s in terms),
        )

    @classmethod
    def serre(cls, spec: "FormSpec", k: int) -> "FormSpec":
        if spec.weight != k:
            raise ValueError(f"form has weight {spec.weight}, operator has weight {k}")
        return cls("serre", (spec, int(k)), k + 2, spec.level, spec.is_cusp)

    def named(self, name: str) -> "FormSpec":
        return FormSpec(self.kind, self.args, self.weight, self.level, self.is_cusp, name)

    # JSON recipe
    def to_json_obj(self) -> dict:
        kind, a = self.kind, self.args
        if kind == "eisenstein":
            body = {"k": a[0]}
        elif kind == "eta_quotient":
            body = {"factors": [list(x) for x in a]}
        elif kind == "product":
            body = {"forms": [s.to_json_obj() for s in a]}
        elif kind == "scaled":
            body = {"c": str(a[0]), "form": a[1].to_json_obj()}
        elif kind == "v_shift":
            body = {"t": a[0], "form": a[1].to_json_obj()}
        elif kind == "linear_combination":
            body = {"terms": [[str(c), s.to_json_obj()] for c, s in a]}
        else:
            body = {"form": a[0].to_json_obj(), "k": a[1]}
        obj = {"kind": kind, **body, "weight": self.weight, "level": self.level}
        if self.name:
            obj["name"] = self.name
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FormSpec":
        kind = obj.get("kind")
        if kind == "eisenstein":
            spec = cls.eisenstein(int(obj["k"]))
        elif kind == "eta_quotient":
            spec = cls.eta_quotient(obj["factors"])
        elif kind == "product":
            spec = cls.product(*[cls.from_json_obj(o) for o in obj["forms"]])
        elif kind == "scaled":
            spec = cls.scaled(Fraction(obj["c"]), cls.from_json_obj(obj["form"]))
        elif kind == "v_shift":
            spec = cls.v_shift(int(obj["t"]), cls.from_json_obj(obj["form"]))
        elif kind == "linear_combination":
            spec = cls.linear_combination((Fraction(c), cls.from_json_obj(o)) for c, o in obj["terms"])
        elif kind == "serre":
            spec = cls.serre(cls.from_json_obj(obj["form"]), int(obj["k"]))
        else:
            raise UnsupportedRecipeError(f"unknown recipe kind {kind!r}")
        for key in ("weight", "level"):
            if key in obj and int(obj[key]) != getattr(spec, key):
                raise ValueError(f"recipe {key} {obj[key]} inconsistent with computed {getattr(spec, key)}")
        return spec.named(obj["name"]) if obj.get("name") else spec


E2 = FormSpec.eisenstein(2).named("e2")
E4 = FormSpec.eisenstein(4).named("e4")
E6 = FormSpec.eisenstein(6).named("e6")
DELTA = FormSpec.eta_quotient([(1, 24)]).named("delta")
DELTA_8_2 = FormSpec.eta_quotient([(1, 8), (2, 8)]).named("delta_8_2")
X2 = FormSpec.linear_combination([(2, FormSpec.v_shift(2, E2)), (-1, E2)]).named("x2")
DELTA_10_2 = FormSpec.product(DELTA_8_2, X2).named("delta_10_2")
V2DELTA = FormSpec.v_shift(2, DELTA).named("v2delta")

NAMED_FORMS: dict[str, FormSpec] = {
    s.name: s for s in (E2, E4, E6, DELTA, DELTA_8_2, X2, DELTA_10_2, V2DELTA)
}

# newforms whose coefficients obey |a(n)| <= d(n) n^{(k-1)/2}
_EIGENFORMS = (DELTA, DELTA_10_2)


def expand(spec: FormSpec, prec: int = DEFAULT_PREC) -> QExpansion:
    """Exact q-expansion of a recipe to ``prec`` coefficients."""
    kind, a = spec.kind, spec.args
    if spec == DELTA:
        out = delta(prec)
    elif spec == DELTA_10_2:
        out = delta_10_2(prec)
    elif kind == "eisenstein":
        out = eisenstein(a[0], prec)
    elif kind == "eta_quotient":
        out = eta_quotient(a, prec)
    elif kind == "product":
        out = expand(a[0], prec)
        for s in a[1:]:
            out = qs_mul(out, expand(s, prec))
    elif kind == "scaled":
        out = qs_scale(expand(a[1], prec), a[0])
    elif kind == "v_shift":
        out = qs_v_expand(expand(a[1], prec), a[0])
    elif kind == "linear_combination":
        out = None
        for c, s in a:
            term = qs_scale(expand(s, prec), c)
            out = term if out is None else qs_add(out, term)
    else:
        out = serre_derivative(expand(a[0], prec), a[1])
    # X2 is holomorphic although built from E_2
    quasi = out.quasimodular and spec != X2
    return out.with_meta(
        weight=spec.weight,
        level=spec.level,
        quasimodular=quasi,
        cusp=spec.is_cusp or (out.coeffs[0] == 0 and out.cusp),
        name=spec.name,
    )


def coefficient_constant(spec: FormSpec) -> Fraction | None:
    """Constant ``C`` with ``|a(n)| <= C d(n) n^{(w-1)/2}`` proven via Deligne, if known.

    Returns ``None`` when the recipe is not built from known newforms of its
    own weight.
    """
    if spec in _EIGENFORMS:
        return Fraction(1)
    kind, a = spec.kind, spec.args
    if kind == "v_shift":
        return coefficient_constant(a[1])
    if kind == "scaled":
        c = coefficient_constant(a[1])
        return None if c is None else abs(a[0]) * c
    if kind == "linear_combination":
        total = Fraction(0)
        for c, s in a:
            cs = coefficient_constant(s)
            if cs is None:
                return None
            total += abs(c) * cs
        return total
    return None


# ---------------------------------------------------------------------------
# expression language: delta, v(2,delta), serre(delta_10_2,10), eisenstein(4),
# eta(1:8,2:8), mul(F,G), scale(1/6,F), add(F,G)

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(-?\d+(?:/\d+)?(?::-?\d+)?)|(.))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse form expression at {text[pos:]!r}")
        tok = m.group(1) or m.group(2) or m.group(3)
        if tok and not tok.isspace():
            tokens.append(tok)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"malformed form expression {self.text!r}: expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def args(self) -> list:
        self.take("(")
        out = []
        while True:
            tok = self.peek()
            if tok is not None and re.fullmatch(r"-?\d+(?:/\d+)?(?::-?\d+)?", tok):
                out.append(self.take())
            else:
                out.append(self.form())
            if self.peek() == ",":
                self.take(",")
                continue
            self.take(")")
            return out

    def form(self) -> FormSpec:
        name = self.take()
        if self.peek() != "(":
            if name not in NAMED_FORMS:
                raise ValueError(f"unknown form {name!r}; known: {', '.join(sorted(NAMED_FORMS))}")
            return NAMED_FORMS[name]
        args = self.args()
        try:
            if name == "v":
                return FormSpec.v_shift(int(args[0]), args[1])
            if name == "serre":
                return FormSpec.serre(args[0], int(args[1]))
            if name == "eisenstein":
                return FormSpec.eisenstein(int(args[0]))
            if name == "eta":
                return FormSpec.eta_quotient([tuple(int(x) for x in a.split(":")) for a in args])
            if name == "mul":
                return FormSpec.product(*args)
            if name == "scale":
                return FormSpec.scaled(Fraction(args[0]), args[1])
            if name == "add":
                return FormSpec.linear_combination([(1, s) for s in args])
        except (IndexError, AttributeError, TypeError) as exc:
            raise ValueError(f"bad arguments to {name}() in {self.text!r}") from exc
        raise ValueError(f"unknown function {name!r} in form expression")


def parse_form(text: str) -> FormSpec:
    """Parse a form expression such as ``serre(delta_10_2,10)``."""
    parser = _Parser(text)
    spec = parser.form()
    if parser.peek() is not None:
        raise ValueError(f"trailing input in form expression {text!r}")
    return spec


def to_expression(spec: FormSpec) -> str:
    if spec.name:
        return spec.name
    kind, a = spec.kind, spec.args
    if kind == "eisenstein":
        return f"eisenstein({a[0]})"
    if kind == "eta_quotient":
        return "eta(" + ",".join(f"{d}:{r}" for d, r in a) + ")"
    if kind == "product":
        return "mul(" + ",".join(to_expression(s) for s in a) + ")"
    if kind == "scaled":
        return f"scale({a[0]},{to_expression(a[1])})"
    if kind == "v_shift":
        return f"v({a[0]},{to_expression(a[1])})"
    if kind == "serre":
        return f"serre({to_expression(a[0])},{a[1]})"
    if all(c == 1 for c, _ in a):
        return "add(" + ",".join(to_expression(s) for _, s in a) + ")"
    return "add(" + ",".join(f"scale({c},{to_expression(s)})" for c, s in a) + ")"
