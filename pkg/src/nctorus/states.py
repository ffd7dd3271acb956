"""States on the algebra: the trace, orbit-parameterized invariant-state
candidates, Gram matrices of a |-> omega(a* a), and positivity tests.

An invariant-state candidate is determined by real values p_j on the orbit
representatives (0, j); the identity carries p_0 = 1 and unlisted orbits
default to 0.  Values are exact Fractions; Python floats are normalized
through their shortest decimal representation, so 0.2 means 1/5.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd, isqrt

import numpy as np

from . import circle
from .algebra import AlgebraElement, PhaseContext, numeric_eval
from .lattice import as_vector, pairing
from .scalars import GaussRat, PhaseScalar, as_fraction


def _decimal_fraction(value) -> Fraction:
    """Exact value of a real number; floats read as their shortest decimal."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not a real number: {value!r}")


class StateCandidate:
    """Candidate invariant state: finite map orbit index -> real value."""

    __slots__ = ("_values",)

    def __init__(self, orbit_values=None):
        vals: dict[int, Fraction] = {}
        for j, p in (orbit_values or {}).items():
            j = int(j)
            if j < 1:
                raise ValueError(f"orbit index must be a positive integer, got {j}")
            vals[j] = _decimal_fraction(p)  # explicit zeros stay declared
        self._values = vals

    def value(self, j: int) -> Fraction:
        if j == 0:
            return Fraction(1)
        return self._values.get(j, Fraction(0))

    def declared_orbits(self) -> tuple[int, ...]:
        return tuple(sorted(self._values))

    def items(self):
        return iter(sorted(self._values.items()))

    def to_json(self) -> dict:
        return {"orbit_values": {str(j): float(p) for j, p in self.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "StateCandidate":
        if not isinstance(obj, dict) or "orbit_values" not in obj:
            raise ValueError('state JSON must be {"orbit_values": {...}}')
        return cls(obj["orbit_values"])

    @classmethod
    def loads(cls, text: str) -> "StateCandidate":
        return cls.from_json(json.loads(text, parse_float=Fraction))

    def __eq__(self, other):
        return isinstance(other, StateCandidate) and self._values == other._values

    def __repr__(self):
        return f"StateCandidate({dict(self.items())!r})"


def trace_state() -> StateCandidate:
    """The trace: 1 on the identity, 0 on every other generator."""
    return StateCandidate({})


def eval_generator(state: StateCandidate, m) -> Fraction:
    """omega(W_m) = p_gcd(m); constant on SL(2, Z) orbits by construction."""
    v = as_vector(m)
    if len(v) != 2:
        raise ValueError("generator evaluation is defined for genus 1")
    if v == (0, 0):
        return Fraction(1)
    return state.value(_gcd(v[0], v[1]))


def evaluate(state: StateCandidate, a: AlgebraElement, ctx: PhaseContext) -> complex:
    """omega extended by linearity, evaluated numerically."""
    total = 0j
    for m, c in a.items():
        p = eval_generator(state, m)
        if p:
            total += numeric_eval(c, ctx) * float(p)
    return total


def evaluate_exact(state: StateCandidate, a: AlgebraElement) -> PhaseScalar:
    """omega extended by linearity, as an exact scalar."""
    total = PhaseScalar.zero()
    for m, c in a.items():
        p = eval_generator(state, m)
        if p:
            total = total + c * p
    return total


# ---------------------------------------------------------------------------
# Hermitian matrices
# ---------------------------------------------------------------------------

class HermitianMatrix:
    """Square matrix with numeric (complex) or exact (PhaseScalar) entries."""

    def __init__(self, rows, exact: bool = False):
        if exact:
            data = []
            for row in rows:
                out = []
                for c in row:
                    if not isinstance(c, PhaseScalar):
                        c = PhaseScalar.rational(as_fraction(c))
                    out.append(c)
                data.append(tuple(out))
            self._exact = tuple(data)
            self._num = None
            n = len(self._exact)
            if any(len(r) != n for r in self._exact):
                raise ValueError("matrix must be square")
        else:
            arr = np.asarray(rows, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError("matrix must be square")
            self._num = arr
            self._exact = None

    @property
    def exact(self) -> bool:
        return self._exact is not None

    @property
    def dim(self) -> int:
        return len(self._exact) if self.exact else self._num.shape[0]

    def entry(self, i: int, j: int):
        return self._exact[i][j] if self.exact else self._num[i, j]

    def rows(self):
        if self.exact:
            return self._exact
        return self._num

    def to_numpy(self, ctx: PhaseContext | None = None) -> np.ndarray:
        if not self.exact:
            return self._num.copy()
        n = self.dim
        out = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                out[i, j] = _scalar_to_complex(self._exact[i][j], ctx)
        return out

    def is_hermitian(self, tol: float = 1e-9) -> bool:
        if self.exact:
            n = self.dim
            return all(
                self._exact[i][j] == self._exact[j][i].conjugate()
                for i in range(n)
                for j in range(i, n)
            )
        return bool(np.max(np.abs(self._num - self._num.conj().T), initial=0.0) <= tol)

    def gaussian_entries(self) -> list[list[GaussRat]] | None:
        """Entries as Gaussian rationals, or None if any entry is not one."""
        if self.exact:
            out = []
            for row in self._exact:
                line = []
                for c in row:
                    g = c.as_gaussian()
                    if g is None:
                        return None
                    line.append(GaussRat(*g))
                out.append(line)
            return out
        return None


def _scalar_to_complex(s: PhaseScalar, ctx: PhaseContext | None) -> complex:
    total = 0j
    for k, r, c in s.terms():
        if k and ctx is None:
            raise ValueError("a PhaseContext is needed to evaluate zeta powers")
        if ctx is not None:
            ang = circle.phase_angle(ctx.h, k, r)
        else:
            ang = 2.0 * math.pi * float(r)
        total += float(c) * cmath.exp(1j * ang)
    return total


def gram(state: StateCandidate, gens, ctx: PhaseContext, exact: bool = False) -> HermitianMatrix:
    """Gram matrix H_ij = omega(W_i^* W_j) = zeta^(-sigma(m_i, m_j)) * p(m_j - m_i)."""
    if ctx.genus != 1:
        raise ValueError("Gram matrices are built for genus 1")
    vecs = [as_vector(g) for g in gens]
    if any(len(v) != 2 for v in vecs):
        raise ValueError("generators must be lattice points of Z^2")
    if len(set(vecs)) != len(vecs):
        raise ValueError("duplicate generators give a degenerate Gram request")
    n = len(vecs)
    if exact:
        rows = [[PhaseScalar.zero()] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                diff = (vecs[j][0] - vecs[i][0], vecs[j][1] - vecs[i][1])
                p = eval_generator(state, diff)
                if p:
                    rows[i][j] = PhaseScalar.zeta(-pairing(ctx.sigma, vecs[i], vecs[j]), p)
        return HermitianMatrix(rows, exact=True)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            diff = (vecs[j][0] - vecs[i][0], vecs[j][1] - vecs[i][1])
            p = eval_generator(state, diff)
            if p:
                ang = circle.phase_angle(ctx.h, -pairing(ctx.sigma, vecs[i], vecs[j]))
                out[i, j] = float(p) * cmath.exp(1j * ang)
    return HermitianMatrix(out)


def quadratic_form(H: HermitianMatrix, v, ctx: PhaseContext | None = None):
    """The (real) value v^dagger H v.

    Numeric matrices give a float; exact matrices with exact vectors give an
    exact Fraction whenever the result is rational (a PhaseContext is needed
    otherwise to evaluate leftover phases).
    """
    if len(v) != H.dim:
        raise ValueError(f"dimension mismatch: matrix is {H.dim}x{H.dim}, vector has length {len(v)}")
    if not H.exact:
        vv = np.asarray([complex(x) if not isinstance(x, (complex, float, int)) else x for x in v],
                        dtype=complex)
        return float((vv.conj() @ H.rows() @ vv).real)
    vec = [_coerce_scalar(x) for x in v]
    total = PhaseScalar.zero()
    for i in range(H.dim):
        ci = vec[i].conjugate()
        for j in range(H.dim):
            total = total + ci * H.entry(i, j) * vec[j]
    q = total.as_rational()
    if q is not None:
        return q
    g = total.as_gaussian()
    if g is not None and g[1] == 0:
        return g[0]
    if ctx is None:
        raise ValueError("a PhaseContext is needed to evaluate this quadratic form numerically")
    return numeric_eval(total, ctx).real


def _coerce_scalar(x) -> PhaseScalar:
    if isinstance(x, PhaseScalar):
        return x
    if isinstance(x, GaussRat):
        return PhaseScalar.gaussian(x.re, x.im)
    if isinstance(x, complex):
        return PhaseScalar.gaussian(Fraction(x.real), Fraction(x.imag))
    return PhaseScalar.rational(as_fraction(x))


# ---------------------------------------------------------------------------
# positivity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PsdVerdict:
    """Outcome of a positivity test; non-PSD comes with an explicit witness
    whose quadratic form value is certified below -tol."""

    is_psd: bool
    witness: tuple | None = None
    value: object = None

    def __bool__(self):
        return self.is_psd


def is_psd(H: HermitianMatrix, tol: float = 1e-9, ctx: PhaseContext | None = None) -> PsdVerdict:
    """Positive-semidefiniteness with witness extraction.

    Exact matrices with Gaussian-rational entries are decided by exact
    pivoted elimination; everything else falls back to the symmetric
    eigenvalue decomposition with tolerance.
    """
    if H.exact:
        entries = H.gaussian_entries()
        if entries is not None:
            if not H.is_hermitian():
                raise ValueError("matrix is not Hermitian")
            return _psd_exact(entries)
        arr = H.to_numpy(ctx)
    else:
        arr = H.rows()
    if np.max(np.abs(arr - arr.conj().T), initial=0.0) > max(tol, 1e-9):
        raise ValueError("matrix is not Hermitian within tolerance")
    sym = (arr + arr.conj().T) / 2
    eigvals, eigvecs = np.linalg.eigh(sym)
    if eigvals[0] >= -tol:
        return PsdVerdict(True)
    v = eigvecs[:, 0]
    value = float((v.conj() @ arr @ v).real)
    return PsdVerdict(False, tuple(complex(x) for x in v), value)


def _psd_exact(entries: list[list[GaussRat]]) -> PsdVerdict:
    n = len(entries)
    s = [[entries[i][j] for j in range(n)] for i in range(n)]
    lcols: list[list[GaussRat]] = [[GaussRat(0)] * n for _ in range(n)]  # lcols[k][i] = L[i][k]
    for k in range(n):
        d = s[k][k]
        if d.im:
            raise ValueError("matrix is not Hermitian")
        if d.re < 0:
            y = [GaussRat(0)] * n
            y[k] = GaussRat(1)
            return _exact_witness(lcols, y, d.re, n, k)
        if d.re == 0:
            j = next((j for j in range(k + 1, n) if s[j][k]), None)
            if j is None:
                continue
            # indefinite: a zero pivot with residual coupling
            b = s[k][j]
            c = s[j][j].re
            alpha = GaussRat(-(c + 1)) / (2 * b.conjugate())
            y = [GaussRat(0)] * n
            y[k] = alpha
            y[j] = GaussRat(1)
            return _exact_witness(lcols, y, Fraction(-1), n, k)
        for i in range(k + 1, n):
            lcols[k][i] = s[i][k] / d
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                s[i][j] = s[i][j] - lcols[k][i] * d * lcols[k][j].conjugate()
    return PsdVerdict(True)


def _exact_witness(lcols, y, value: Fraction, n: int, upto: int) -> PsdVerdict:
    # solve L^H v = y by back-substitution, then scale so v^H H v <= -1
    v = list(y)
    for i in range(upto - 1, -1, -1):
        acc = y[i]
        for j in range(i + 1, n):
            if v[j]:
                acc = acc - lcols[i][j].conjugate() * v[j]
        v[i] = acc
    scale = isqrt(int(math.ceil(1 / -value))) + 1
    v = [x * scale for x in v]
    return PsdVerdict(False, tuple(v), value * scale * scale)


def determinant_exact(H: HermitianMatrix) -> GaussRat:
    """Exact determinant by fraction elimination; entries must be Gaussian
    rationals (no unresolved phases)."""
    entries = H.gaussian_entries() if H.exact else None
    if entries is None:
        raise ValueError("exact determinant requires Gaussian-rational entries")
    n = len(entries)
    a = [row[:] for row in entries]
    det = GaussRat(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return GaussRat(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det = det * a[k][k]
        inv = GaussRat(1) / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                for j in range(k, n):
                    a[i][j] = a[i][j] - f * a[k][j]
    return det
