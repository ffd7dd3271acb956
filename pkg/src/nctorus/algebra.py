"""The twisted group algebra C[Z^(2g)] with Weyl generators.

The product rule on generators is W_n * W_m = zeta^sigma(n, m) * W_(n+m)
with zeta = exp(i*h); the involution is W_m^* = W_(-m).  Elements are
finitely supported maps from lattice points to exact PhaseScalar
coefficients.  Everything here is a pure function on immutable values.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from . import circle
from .lattice import SIGMA2, SkewForm, Vec, as_matrix, as_vector, is_symplectic, mat_vec, pairing
from .scalars import PhaseScalar, as_fraction


@dataclass(frozen=True)
class PhaseContext:
    """Deformation phase h and the skew form; hbar = h/(2*pi) must be
    irrational, which holds for every nonzero rational (or float) h."""

    h: Fraction = Fraction(1)
    sigma: SkewForm = field(default_factory=lambda: SIGMA2)

    def __post_init__(self):
        object.__setattr__(self, "h", as_fraction(self.h))
        if self.h == 0:
            raise ValueError("phase parameter h must be nonzero")

    @property
    def dimension(self) -> int:
        return self.sigma.dimension

    @property
    def genus(self) -> int:
        return self.sigma.genus


class AlgebraElement:
    """A finite linear combination of Weyl generators."""

    __slots__ = ("_dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[Vec, PhaseScalar] | None = None):
        self._dim = dim
        clean: dict[Vec, PhaseScalar] = {}
        for m, c in (terms or {}).items():
            v = as_vector(m)
            if len(v) != dim:
                raise ValueError(f"support vector {v} has length {len(v)}, expected {dim}")
            if not isinstance(c, PhaseScalar):
                c = PhaseScalar.rational(c)
            if c:
                clean[v] = clean[v] + c if v in clean else c
        self._terms = {m: c for m, c in clean.items() if c}

    @property
    def dimension(self) -> int:
        return self._dim

    def support(self) -> tuple[Vec, ...]:
        return tuple(sorted(self._terms))

    def coefficient(self, m) -> PhaseScalar:
        return self._terms.get(as_vector(m), PhaseScalar.zero())

    def items(self) -> Iterator[tuple[Vec, PhaseScalar]]:
        return iter(sorted(self._terms.items()))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other._dim != self._dim:
            raise ValueError("dimension mismatch")
        merged = dict(self._terms)
        for m, c in other._terms.items():
            merged[m] = merged[m] + c if m in merged else c
        return AlgebraElement(self._dim, merged)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self._dim, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> "AlgebraElement":
        if isinstance(scalar, (int, Fraction, PhaseScalar)):
            return AlgebraElement(self._dim, {m: c * scalar for m, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self._dim != other._dim:
            return False
        if set(self._terms) != set(other._terms):
            return False
        return all(c == other._terms[m] for m, c in self._terms.items())

    __hash__ = None

    def __repr__(self) -> str:
        if not self._terms:
            return "AlgebraElement(0)"
        bits = [f"({c})*W{list(m)}" for m, c in self.items()]
        return "AlgebraElement(" + " + ".join(bits) + ")"


def weyl(m) -> AlgebraElement:
    """The Weyl generator W_m."""
    v = as_vector(m)
    return AlgebraElement(len(v), {v: PhaseScalar.one()})


def identity_element(dim: int = 2) -> AlgebraElement:
    return weyl((0,) * dim)


def scalar_element(coeff, dim: int = 2) -> AlgebraElement:
    if not isinstance(coeff, PhaseScalar):
        coeff = PhaseScalar.rational(coeff)
    return AlgebraElement(dim, {(0,) * dim: coeff})


def multiply(a: AlgebraElement, b: AlgebraElement, ctx: PhaseContext) -> AlgebraElement:
    """Bilinear extension of W_n W_m = zeta^sigma(n, m) W_(n+m)."""
    d = ctx.dimension
    if a.dimension != d or b.dimension != d:
        raise ValueError(f"dimension mismatch: elements of dimension {a.dimension}, "
                         f"{b.dimension} in a {d}-dimensional context")
    out: dict[Vec, PhaseScalar] = {}
    for n, cn in a.items():
        for m, cm in b.items():
            phase = PhaseScalar.zeta(pairing(ctx.sigma, n, m))
            key = tuple(x + y for x, y in zip(n, m))
            term = cn * cm * phase
            out[key] = out[key] + term if key in out else term
    return AlgebraElement(d, out)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    """The involution: coefficients conjugated, supports negated."""
    return AlgebraElement(
        a.dimension,
        {tuple(-x for x in m): c.conjugate() for m, c in a.items()},
    )


def relabel(theta, a: AlgebraElement) -> AlgebraElement:
    """The raw support relabelling W_m -> W_(Theta m), no contract attached.

    This is multiplicative exactly when theta preserves the form; act()
    certifies that and should be used everywhere outside of tests of the
    criterion itself.
    """
    t = as_matrix(theta)
    return AlgebraElement(a.dimension, {mat_vec(t, m): c for m, c in a.items()})


def act(theta, a: AlgebraElement, ctx: PhaseContext) -> AlgebraElement:
    """The automorphism relabelling W_m -> W_(Theta m)."""
    t = as_matrix(theta)
    if not is_symplectic(t, ctx.sigma):
        raise ValueError("matrix is not symplectic for the context form")
    return relabel(t, a)


def cocycle_check(m, n, g, ctx: PhaseContext) -> bool:
    """The additive 2-cocycle identity of the pairing exponents."""
    sig = ctx.sigma
    mv, nv, gv = as_vector(m), as_vector(n), as_vector(g)
    mn = tuple(x + y for x, y in zip(mv, nv))
    ng = tuple(x + y for x, y in zip(nv, gv))
    return pairing(sig, mv, nv) + pairing(sig, mn, gv) == pairing(sig, mv, ng) + pairing(sig, nv, gv)


def numeric_eval(s: PhaseScalar, ctx: PhaseContext) -> complex:
    """Evaluate an exact scalar to a complex float at the context's h.

    Phases are reduced mod 2*pi in 256-bit fixed point first, so the result
    stays accurate even for zeta-exponents far beyond float range.
    """
    total = 0j
    for k, r, c in s.terms():
        total += float(c) * cmath.exp(1j * circle.phase_angle(ctx.h, k, r))
    return total
