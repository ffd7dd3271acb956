"""Exact scalar arithmetic for the twisted group algebra.

A scalar is a finite rational combination of unit phases

    sum_t  c_t * zeta^(k_t) * e(r_t),        e(r) := exp(2*pi*i*r),

with c_t rational, k_t an integer and r_t a rational in [0, 1).  Here
zeta = exp(i*h) is the deformation phase; because h/(2*pi) is irrational,
distinct powers of zeta never satisfy a rational relation, so the zeta part
is formal Laurent bookkeeping.  The root-of-unity part is kept canonical by
reduction modulo cyclotomic polynomials, which is what makes identities
such as sum_{l=1..d} e(j*l/d) = 0 hold exactly rather than to roundoff.

Gaussian rationals a + b*i embed as a + b*e(1/4).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Iterator, Mapping, Union

RationalLike = Union[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)
QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)
THREE_QUARTERS = Fraction(3, 4)


def as_fraction(value) -> Fraction:
    """Coerce an exact rational-like value; floats are taken bit-exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"not an exact rational value: {value!r}")


# ---------------------------------------------------------------------------
# cyclotomic polynomials (ascending coefficient tuples, always monic)
# ---------------------------------------------------------------------------

def _poly_divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # exact division by a monic integer polynomial
    num = list(num)
    dn = len(den) - 1
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending degree."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic(d))
    return tuple(poly)


def _reduce_roots(parts: dict[Fraction, Fraction]) -> dict[Fraction, Fraction]:
    """Canonicalize sum_r c_r * e(r) by reduction mod the joint cyclotomic."""
    parts = {r: c for r, c in parts.items() if c}
    if not parts:
        return {}
    n = 1
    for r in parts:
        n = lcm(n, r.denominator)
    if n <= 2:
        # e(0) = 1, e(1/2) = -1
        total = ZERO
        for r, c in parts.items():
            total += c if r == 0 else -c
        return {ZERO: total} if total else {}
    if n == 4:
        re = parts.get(ZERO, ZERO) - parts.get(HALF, ZERO)
        im = parts.get(QUARTER, ZERO) - parts.get(THREE_QUARTERS, ZERO)
        out = {}
        if re:
            out[ZERO] = re
        if im:
            out[QUARTER] = im
        return out
    coeffs = [ZERO] * n
    for r, c in parts.items():
        coeffs[int(r * n)] += c
    phi = cyclotomic(n)
    deg = len(phi) - 1
    for i in range(n - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = ZERO
            for j in range(deg):
                coeffs[i - deg + j] -= c * phi[j]
    return {Fraction(j, n): c for j, c in enumerate(coeffs[:deg]) if c}


# ---------------------------------------------------------------------------
# PhaseScalar
# ---------------------------------------------------------------------------

class PhaseScalar:
    """Exact coefficient: a finite sum of c * zeta^k * e(r) terms.

    Instances are immutable and store no zero coefficients; the
    root-of-unity part of each zeta-degree is canonicalized on
    construction.  Equality is decided by exact cancellation (lifting both
    sides to the joint cyclotomic field), so it is safe across mixed
    root orders.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, Fraction], Fraction] | Iterable = ()):
        raw: dict[int, dict[Fraction, Fraction]] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (k, r), c in items:
            c = as_fraction(c)
            if not c:
                continue
            r = as_fraction(r) % 1
            bucket = raw.setdefault(k, {})
            bucket[r] = bucket.get(r, ZERO) + c
        canon: dict[tuple[int, Fraction], Fraction] = {}
        for k, bucket in raw.items():
            for r, c in _reduce_roots(bucket).items():
                canon[(k, r)] = c
        self._terms = canon

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "PhaseScalar":
        return _ZERO_SCALAR

    @staticmethod
    def one() -> "PhaseScalar":
        return _ONE_SCALAR

    @staticmethod
    def rational(value) -> "PhaseScalar":
        return PhaseScalar({(0, ZERO): as_fraction(value)})

    @staticmethod
    def gaussian(re, im) -> "PhaseScalar":
        return PhaseScalar({(0, ZERO): as_fraction(re), (0, QUARTER): as_fraction(im)})

    @staticmethod
    def zeta(k: int, coeff=1) -> "PhaseScalar":
        """coeff * zeta^k."""
        return PhaseScalar({(k, ZERO): as_fraction(coeff)})

    @staticmethod
    def root_of_unity(r, coeff=1) -> "PhaseScalar":
        """coeff * e(r) = coeff * exp(2*pi*i*r) for rational r."""
        return PhaseScalar({(0, as_fraction(r) % 1): as_fraction(coeff)})

    # -- queries ------------------------------------------------------------

    def terms(self) -> Iterator[tuple[int, Fraction, Fraction]]:
        """Yield (zeta_exponent, root_of_unity, coefficient) triples."""
        for (k, r), c in sorted(self._terms.items()):
            yield k, r, c

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def as_rational(self) -> Fraction | None:
        """The value as a plain rational, or None if it is not one."""
        if not self._terms:
            return ZERO
        if len(self._terms) == 1:
            ((k, r), c) = next(iter(self._terms.items()))
            if k == 0 and r == 0:
                return c
        return None

    def as_gaussian(self) -> tuple[Fraction, Fraction] | None:
        """The value as (re, im) Gaussian rational, or None."""
        re = im = ZERO
        for (k, r), c in self._terms.items():
            if k != 0:
                return None
            if r == 0:
                re = c
            elif r == QUARTER:
                im = c
            else:
                return None
        return re, im

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> "PhaseScalar | None":
        if isinstance(other, PhaseScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return PhaseScalar.rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        merged = dict(self._terms)
        for key, c in o._terms.items():
            merged[key] = merged.get(key, ZERO) + c
        return PhaseScalar(merged)

    __radd__ = __add__

    def __neg__(self):
        out = PhaseScalar()
        out._terms = {key: -c for key, c in self._terms.items()}
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[tuple[int, Fraction], Fraction] = {}
        for (k1, r1), c1 in self._terms.items():
            for (k2, r2), c2 in o._terms.items():
                key = (k1 + k2, (r1 + r2) % 1)
                out[key] = out.get(key, ZERO) + c1 * c2
        return PhaseScalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            out = PhaseScalar()
            out._terms = {key: c / q for key, c in self._terms.items()}
            return out
        return NotImplemented

    def conjugate(self) -> "PhaseScalar":
        """Complex conjugation: zeta^k -> zeta^(-k), e(r) -> e(-r)."""
        return PhaseScalar({((-k), (-r) % 1): c for (k, r), c in self._terms.items()})

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._terms == o._terms:
            return True
        return (self - o).is_zero

    __hash__ = None  # equal values may carry different canonical dicts

    def __repr__(self) -> str:
        return f"PhaseScalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for k, r, c in self.terms():
            factors = [str(c)]
            if k:
                factors.append(f"z^{k}")
            if r:
                factors.append(f"e({r})")
            bits.append("*".join(factors))
        return " + ".join(bits)


_ZERO_SCALAR = PhaseScalar()
_ONE_SCALAR = PhaseScalar.rational(1)


# ---------------------------------------------------------------------------
# Gaussian rationals (exact complex arithmetic for matrix elimination)
# ---------------------------------------------------------------------------

class GaussRat:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    @staticmethod
    def from_number(value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, complex):
            return GaussRat(Fraction(value.real), Fraction(value.imag))
        return GaussRat(as_fraction(value))

    def __add__(self, other):
        other = GaussRat.from_number(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussRat.from_number(other))

    def __rsub__(self, other):
        return GaussRat.from_number(other) + (-self)

    def __mul__(self, other):
        other = GaussRat.from_number(other)
        return GaussRat(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat.from_number(other)
        d = other.abs2()
        if not d:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussRat(num.re / d, num.im / d)

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, other) -> bool:
        other = GaussRat.from_number(other)
        return self.re == other.re and self.im == other.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussRat({self.re}, {self.im})"

    __hash__ = None
