"""Exact bases of the small cusp form spaces S_k(Gamma_0(N)) used here."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientPrecisionError, NotInSpaceError, UnsupportedSpaceError
from .forms import delta, delta_10_2
from .qseries import DEFAULT_PREC, QExpansion, qs_v_expand

GUARD = 10

SUPPORTED_SPACES = ((12, 1), (10, 2), (12, 2), (14, 1))


@dataclass(frozen=True)
class SpaceBasis:
    weight: int
    level: int
    basis: tuple[QExpansion, ...]

    def __post_init__(self):
        pivots = self.pivots
        if any(b >= a for a, b in zip(pivots[1:], pivots)):
            raise ValueError(f"basis is not in echelon form, pivots {pivots}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def prec(self) -> int:
        return min((b.prec for b in self.basis), default=0)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(b.valuation() for b in self.basis)

    def reconstruct(self, coords, prec: int | None = None) -> QExpansion:
        """``sum coords[i] * basis[i]`` as a q-expansion."""
        coords = [Fraction(c) for c in coords]
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        if prec is None:
            prec = self.prec or 1
        acc = [Fraction(0)] * prec
        for c, b in zip(coords, self.basis):
            for n in range(prec):
                acc[n] += c * b.coeffs[n]
        return QExpansion(tuple(acc), weight=self.weight, level=self.level, cusp=True)


def space_basis(k: int, level: int, prec: int = DEFAULT_PREC) -> SpaceBasis:
    """Echelon basis of S_k(Gamma_0(level)) for the supported (k, level)."""
    if (k, level) == (12, 1):
        basis = (delta(prec),)
    elif (k, level) == (10, 2):
        basis = (delta_10_2(prec),)
    elif (k, level) == (12, 2):
        basis = (delta(prec).with_meta(level=2), qs_v_expand(delta(prec), 2).with_meta(name="v2delta"))
    elif (k, level) == (14, 1):
        basis = ()
    else:
        supported = ", ".join(f"({a},{b})" for a, b in SUPPORTED_SPACES)
        raise UnsupportedSpaceError(f"unsupported space S_{k}({level}); supported: {supported}")
    return SpaceBasis(k, level, basis)


def decompose(f: QExpansion, basis: SpaceBasis, guard: int = GUARD) -> tuple[Fraction, ...]:
    """Exact coordinates of ``f`` in ``basis``.

    Coordinates are solved on the pivot columns; every other known
    coefficient of ``f`` must then agree with the reconstruction.
    """
    if f.weight != basis.weight or basis.level % f.level:
        raise ValueError(
            f"form of weight {f.weight}, level {f.level} does not lie in S_{basis.weight}({basis.level})"
        )
    last_pivot = basis.pivots[-1] if basis.dim else 0
    need = max(basis.dim, last_pivot + 1) + guard
    if f.prec < need:
        raise InsufficientPrecisionError(f"decomposition needs prec >= {need}, form has {f.prec}")
    if basis.prec and basis.prec < f.prec:
        basis = space_basis(basis.weight, basis.level, f.prec)
    prec = f.prec
    residual = list(f.coeffs)
    coords = []
    for b, p in zip(basis.basis, basis.pivots):
        c = residual[p] / b.coeffs[p]
        coords.append(c)
        if c:
            for n in range(p, prec):
                residual[n] -= c * b.coeffs[n]
    bad = next((n for n, r in enumerate(residual) if r), None)
    if bad is not None:
        raise NotInSpaceError(
            f"form is not in S_{basis.weight}({basis.level}): coefficient q^{bad} off by {residual[bad]}"
        )
    return tuple(coords)
