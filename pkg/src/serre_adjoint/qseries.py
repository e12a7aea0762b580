"""Truncated q-expansions with exact rational coefficients.

A :class:`QExpansion` knows the coefficients of ``q^0 .. q^(prec-1)`` and
nothing beyond.  Every binary operation truncates to the smaller precision of
its operands, so a reported coefficient is always exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_PREC = 512


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(c)


@dataclass(frozen=True)
class QExpansion:
    """Dense truncated power series ``sum coeffs[n] q^n`` for ``n < prec``.

    ``weight`` and ``level`` are metadata describing the modular object the
    series represents.  ``quasimodular`` marks series like ``E_2`` or ``Df``
    that are not modular on their own.  ``cusp`` flags a cusp form and is
    checked against the constant term.
    """

    coeffs: tuple[Fraction, ...]
    weight: int = 0
    level: int = 1
    quasimodular: bool = False
    cusp: bool = False
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        coeffs = tuple(_as_fraction(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise ValueError("a q-expansion needs at least one coefficient")
        if self.level < 1:
            raise ValueError(f"level must be positive, got {self.level}")
        if self.cusp and coeffs[0] != 0:
            raise ValueError("series flagged as cusp form has nonzero constant term")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, prec: int | None = None, **meta) -> "QExpansion":
        """Build from any iterable of exact numbers, zero padded to ``prec``."""
        cs = [_as_fraction(c) for c in coeffs]
        if prec is not None:
            cs = (cs + [Fraction(0)] * prec)[:prec]
        return cls(tuple(cs), **meta)

    @classmethod
    def zero(cls, prec: int, **meta) -> "QExpansion":
        return cls((Fraction(0),) * prec, **meta)

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0 or n >= self.prec:
            raise IndexError(f"coefficient q^{n} is not known (prec={self.prec})")
        return self.coeffs[n]

    def __len__(self) -> int:
        return self.prec

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.prec > 6 else ""
        return f"QExpansion(weight={self.weight}, level={self.level}, prec={self.prec}, [{head}{more}])"

    def truncate(self, prec: int) -> "QExpansion":
        if prec > self.prec:
            raise ValueError(f"cannot extend precision {self.prec} to {prec}")
        return self._replace(coeffs=self.coeffs[:prec])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or ``None`` for the zero series."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def integer_coeffs(self) -> list[int] | None:
        """Coefficients as Python ints when all are integral, else ``None``."""
        if all(c.denominator == 1 for c in self.coeffs):
            return [c.numerator for c in self.coeffs]
        return None

    def _replace(self, **changes) -> "QExpansion":
        fields = dict(
            coeffs=self.coeffs,
            weight=self.weight,
            level=self.level,
            quasimodular=self.quasimodular,
            cusp=self.cusp,
            name=self.name,
        )
        fields.update(changes)
        return QExpansion(**fields)

    def with_meta(self, **changes) -> "QExpansion":
        return self._replace(**changes)

    # operator sugar
    def __add__(self, other):
        return qs_add(self, other)

    def __sub__(self, other):
        return qs_add(self, qs_scale(other, -1))

    def __neg__(self):
        return qs_scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return qs_mul(self, other)
        return qs_scale(self, other)

    def __rmul__(self, other):
        return qs_scale(self, other)

    # serialization
    def to_text(self) -> str:
        lines = [
            f"# weight {self.weight}",
            f"# level {self.level}",
            f"# quasimodular {int(self.quasimodular)}",
            f"# cusp {int(self.cusp)}",
        ]
        lines += [f"{n} {c.numerator}/{c.denominator}" for n, c in enumerate(self.coeffs)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "QExpansion":
        meta = {"weight": 0, "level": 1, "quasimodular": False, "cusp": False}
        coeffs: dict[int, Fraction] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] in meta:
                    value = int(parts[1])
                    meta[parts[0]] = bool(value) if parts[0] in ("quasimodular", "cusp") else value
                continue
            idx, frac = line.split()
            coeffs[int(idx)] = Fraction(frac)
        prec = len(coeffs)
        if sorted(coeffs) != list(range(prec)):
            raise ValueError("text form must list every index 0..prec-1 exactly once")
        return cls(tuple(coeffs[n] for n in range(prec)), **meta)

    def to_json_obj(self) -> dict:
        return {
            "weight": self.weight,
            "level": self.level,
            "prec": self.prec,
            "quasimodular": self.quasimodular,
            "cusp": self.cusp,
            "coeffs": [[c.numerator, c.denominator] for c in self.coeffs],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QExpansion":
        coeffs = tuple(Fraction(int(n), int(d)) for n, d in obj["coeffs"])
        if len(coeffs) != int(obj["prec"]):
            raise ValueError("prec does not match the number of coefficients")
        return cls(
            coeffs,
            weight=int(obj["weight"]),
            level=int(obj["level"]),
            quasimodular=bool(obj.get("quasimodular", False)),
            cusp=bool(obj.get("cusp", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "QExpansion":
        return cls.from_json_obj(json.loads(text))


def _common_denominator(coeffs: Sequence[Fraction]) -> int:
    den = 1
    for c in coeffs:
        if c.denominator != 1:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return den


def _scaled_ints(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = _common_denominator(coeffs)
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def int_convolve(a: Sequence[int], b: Sequence[int], prec: int) -> list[int]:
    """Truncated Cauchy product of integer sequences, skipping zeros of ``a``."""
    if sum(1 for x in a[:prec] if x) > sum(1 for x in b[:prec] if x):
        a, b = b, a
    out = [0] * prec
    b = list(b[:prec])
    for i in range(min(prec, len(a))):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(prec - i, len(b))):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def qs_add(f: QExpansion, g: QExpansion) -> QExpansion:
    """Coefficient-wise sum; weights must agree, level becomes the lcm."""
    if f.weight != g.weight:
        raise ValueError(f"cannot add weight {f.weight} to weight {g.weight}")
    prec = min(f.prec, g.prec)
    coeffs = tuple(f.coeffs[n] + g.coeffs[n] for n in range(prec))
    return QExpansion(
        coeffs,
        weight=f.weight,
        level=math.lcm(f.level, g.level),
        quasimodular=f.quasimodular or g.quasimodular,
        cusp=f.cusp and g.cusp,
    )


def qs_scale(f: QExpansion, c) -> QExpansion:
    c = _as_fraction(c)
    return f._replace(coeffs=tuple(c * a for a in f.coeffs), name=None)


def qs_mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product truncated to the smaller precision."""
    prec = min(f.prec, g.prec)
    fi, fd = _scaled_ints(f.coeffs[:prec])
    gi, gd = _scaled_ints(g.coeffs[:prec])
    den = fd * gd
    prod = int_convolve(fi, gi, prec)
    return QExpansion(
        tuple(Fraction(c, den) for c in prod),
        weight=f.weight + g.weight,
        level=math.lcm(f.level, g.level),
        quasimodular=f.quasimodular or g.quasimodular,
        cusp=f.cusp or g.cusp,
    )


def qs_derive(f: QExpansion) -> QExpansion:
    """``D = q d/dq``: multiplies the n-th coefficient by n."""
    return QExpansion(
        tuple(n * c for n, c in enumerate(f.coeffs)),
        weight=f.weight + 2,
        level=f.level,
        quasimodular=True,
        cusp=True,
    )


def qs_v_expand(f: QExpansion, t: int) -> QExpansion:
    """``V_t f(z) = f(tz)``, keeping the precision of ``f``."""
    if t < 1:
        raise ValueError(f"V_t needs t >= 1, got {t}")
    zero = Fraction(0)
    coeffs = tuple(f.coeffs[n // t] if n % t == 0 else zero for n in range(f.prec))
    return f._replace(coeffs=coeffs, level=f.level * t, name=None)


def qs_pow_sparse(base: Sequence[int], exponent: int, prec: int) -> list[int]:
    """Integer power of a series with constant term 1.

    Uses the J.C.P. Miller recurrence
    ``n F_n = sum_j ((e+1) j - n) b_j F_{n-j}``, which costs
    ``O(prec * nnz(base))`` and is exact over the integers.
    Negative exponents are allowed.
    """
    if not base or base[0] != 1:
        raise ValueError("base series must have constant term 1")
    support = [(j, base[j]) for j in range(1, min(prec, len(base))) if base[j]]
    out = [0] * prec
    out[0] = 1
    e1 = exponent + 1
    for n in range(1, prec):
        acc = 0
        for j, bj in support:
            if j > n:
                break
            acc += (e1 * j - n) * bj * out[n - j]
        q, r = divmod(acc, n)
        if r:
            raise ArithmeticError("non-integral coefficient in integer power")
        out[n] = q
    return out
