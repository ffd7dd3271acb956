"""Mechanized refutation of non-trace invariant-state candidates.

Pipeline, for a candidate with p != 0 on orbit j: put xi = (j, j), choose
d with d*p^2 > 1 and a safety margin eps, find N = d!*k with h*N*xi2^2
close to 2*pi/d mod 2*pi, restrict the state to the spans
{W_(0,0)} u {W_(Theta_j xi)} for the families Theta_j in G_(N,l),
l = 1..d, and average the resulting Gram matrices.  The average is an
eps-perturbation of P_d = [p; 1; 0; ...; 0], whose explicit witness
(-p*d, 1, ..., 1) has quadratic value d*(1 - d*p^2) < 0, so positivity
fails.  verify() re-derives every step independently, ending with an
evaluation of omega(a* a) through bare algebra multiplication.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import circle
from .algebra import AlgebraElement, PhaseContext, adjoint, multiply, weyl
from .lattice import Vec, as_vector, mat_vec, theta_j
from .scalars import GaussRat, PhaseScalar, as_fraction
from .states import (
    HermitianMatrix,
    StateCandidate,
    _decimal_fraction,
    eval_generator,
    evaluate,
    gram,
    quadratic_form,
)

DEFAULT_BUDGET = 10**9


class DiophantineBudgetError(RuntimeError):
    """The scan budget ran out; carries the best candidate seen."""

    def __init__(self, message: str, best_n: int | None = None, best_error: float | None = None):
        super().__init__(message)
        self.best_n = best_n
        self.best_error = best_error


class RefutationMarginError(RuntimeError):
    """The floating-point negativity margin stayed below 1e-6."""


@dataclass(frozen=True)
class CertParams:
    """Parameters of a refutation: xi = (j, j), dimension d, Diophantine N,
    and the phase tolerance eps.  d = 1 encodes the 2x2 short form."""

    xi: Vec
    d: int
    N: int
    epsilon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "xi", as_vector(self.xi))
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))


@dataclass(frozen=True, eq=False)
class Certificate:
    """Machine-checkable refutation payload."""

    params: CertParams
    p: Fraction
    l_star: int
    generators: tuple[Vec, ...]
    witness: tuple[GaussRat, ...]
    value: float
    avg_value: float

    def to_json(self) -> dict:
        return {
            "xi": list(self.params.xi),
            "d": self.params.d,
            "N": self.params.N,
            "epsilon": float(self.params.epsilon),
            "p": float(self.p),
            "l_star": self.l_star,
            "witness": [[float(w.re), float(w.im)] for w in self.witness],
            "value": float(self.value),
            "avg_value": float(self.avg_value),
            "generators": [list(g) for g in self.generators],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> "Certificate":
        try:
            params = CertParams(
                xi=tuple(int(x) for x in obj["xi"]),
                d=int(obj["d"]),
                N=int(obj["N"]),
                epsilon=as_fraction(obj["epsilon"]),
            )
            witness = tuple(GaussRat(as_fraction(re), as_fraction(im)) for re, im in obj["witness"])
            generators = tuple(tuple(int(x) for x in g) for g in obj["generators"])
            return cls(
                params=params,
                p=as_fraction(obj["p"]),
                l_star=int(obj["l_star"]),
                generators=generators,
                witness=witness,
                value=float(obj["value"]),
                avg_value=float(obj["avg_value"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed certificate JSON: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text, parse_float=Fraction))


@dataclass(frozen=True)
class ConsistentWithTrace:
    """All declared orbit values vanish; trace-ness itself is not certified
    (there are infinitely many orbits)."""

    orbits_checked: tuple[int, ...]

    def to_json(self) -> dict:
        return {"consistent_with_trace": True, "orbits_checked": list(self.orbits_checked)}


# ---------------------------------------------------------------------------
# the Diophantine step
# ---------------------------------------------------------------------------

def _angle_window(ctx: PhaseContext, xi2: int, d: int, eps: Fraction) -> tuple[int, int, int]:
    """Fixed-point (step, shift, width) for the hitting problem."""
    fact = math.factorial(d)
    step_turns = as_fraction(ctx.h) * fact * xi2 * xi2 / circle.TWO_PI
    a = circle.to_fixed(step_turns) | 1  # odd step: the orbit covers every residue
    delta_turns = eps / (4 * d * d) / circle.TWO_PI
    dd = (delta_turns.numerator * circle.MODULUS) // delta_turns.denominator
    if d == 1:
        # literal |x mod 2pi - 2pi| < delta: a one-sided window below a full turn
        t = (circle.MODULUS - dd) % circle.MODULUS
        w = max(dd - 1, 0)
    else:
        target = circle.to_fixed(Fraction(1, d))
        t = (target - dd) % circle.MODULUS
        w = min(2 * dd, circle.MODULUS - 1)
    return a, t, w


def satisfies_diophantine(h, n: int, xi2: int, d: int, eps) -> bool:
    """Exact rational check of |(h N xi2^2) mod 2pi - 2pi/d| < eps/(4 d^2)."""
    turns = as_fraction(h) * n * xi2 * xi2 / circle.TWO_PI
    frac = turns - math.floor(turns)
    dev = abs(frac - Fraction(1, d))
    return dev < as_fraction(eps) / (4 * d * d) / circle.TWO_PI


def diophantine_N(ctx: PhaseContext, xi2: int, d: int, eps, *,
                  budget: int = DEFAULT_BUDGET, method: str = "auto") -> int:
    """Smallest N = d!*k with |(h N xi2^2) mod 2pi - 2pi/d| < eps/(4 d^2).

    method="auto" uses the exact Euclidean minimal-hit solver; "scan" is the
    deterministic linear scan over k.  Both return the same minimal N; the
    budget caps k either way.
    """
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if d < 1 or xi2 < 1:
        raise ValueError("need d >= 1 and xi2 >= 1")
    fact = math.factorial(d)
    a, t, w = _angle_window(ctx, xi2, d, eps)
    if method in ("auto", "exact"):
        k = circle.first_hit(a, circle.MODULUS, t, w)
        if k is None:
            raise DiophantineBudgetError(
                f"no multiple of {d}! hits the target window at 256-bit resolution")
        if k > budget:
            raise DiophantineBudgetError(
                f"minimal k = {k} exceeds the search budget {budget}; "
                f"best candidate N = {fact * k}",
                best_n=fact * k,
            )
    elif method == "scan":
        k, best_k, best_dist = circle.scan_hit(a, circle.MODULUS, t, w, budget)
        if k is None:
            raise DiophantineBudgetError(
                f"budget {budget} exhausted; closest approach at N = {fact * best_k} "
                f"missed by {circle.fixed_to_angle(best_dist):.3e} rad",
                best_n=fact * best_k,
                best_error=circle.fixed_to_angle(best_dist),
            )
    else:
        raise ValueError(f"unknown method {method!r}")
    # guard the fixed-point answer with the exact rational inequality
    for _ in range(4):
        if satisfies_diophantine(ctx.h, fact * k, xi2, d, eps):
            return fact * k
        nxt = circle.first_hit(a, circle.MODULUS, (t - k * a) % circle.MODULUS, w)
        if nxt is None:
            break
        k += nxt
    raise DiophantineBudgetError("fixed-point window and exact inequality disagree persistently")


# ---------------------------------------------------------------------------
# restriction matrices
# ---------------------------------------------------------------------------

def build_H_prime(p, q, d: int, l: int, N: int, exact: bool = False) -> HermitianMatrix:
    """Idealized (d+1)x(d+1) restriction [p 1 q_N e(l/d) q_2N e(2l/d) ...].

    q maps lattice-difference scales (multiples of N) to real values;
    missing entries are 0.
    """
    if not 1 <= l <= d:
        raise ValueError(f"need 1 <= l <= d, got l={l}, d={d}")
    if N < 1:
        raise ValueError("N must be positive")
    n = d + 1
    if exact:
        pf = as_fraction(p)
        rows = [[PhaseScalar.zero()] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = PhaseScalar.one()
        for jj in range(1, n):
            rows[0][jj] = PhaseScalar.rational(pf)
            rows[jj][0] = PhaseScalar.rational(pf)
        for j in range(1, n):
            for i in range(j + 1, n):
                qv = as_fraction(q.get((i - j) * N, 0))
                if qv:
                    r = Fraction((i - j) * l, d)
                    rows[j][i] = PhaseScalar.root_of_unity(r, qv)
                    rows[i][j] = rows[j][i].conjugate()
        return HermitianMatrix(rows, exact=True)
    out = np.eye(n, dtype=complex)
    out[0, 1:] = float(p)
    out[1:, 0] = float(p)
    for j in range(1, n):
        for i in range(j + 1, n):
            qv = float(q.get((i - j) * N, 0))
            if qv:
                phase = np.exp(2j * np.pi * (i - j) * l / d)
                out[j, i] = qv * phase
                out[i, j] = np.conj(out[j, i])
    return HermitianMatrix(out)


def family_generators(params: CertParams, l: int) -> tuple[Vec, ...]:
    """The generator labels {(0,0)} u {Theta_j xi} for the (N, l) family."""
    gens = [(0, 0)]
    for j in range(1, params.d + 1):
        gens.append(mat_vec(theta_j(params.N, l, j), params.xi))
    return tuple(gens)


def build_H_second(state: StateCandidate, params: CertParams, l: int,
                   ctx: PhaseContext, exact: bool = False) -> HermitianMatrix:
    """The true Gram matrix of the state on span{W_(0,0), W_(Theta_j xi)}."""
    if not 1 <= l <= params.d:
        raise ValueError(f"need 1 <= l <= d, got l={l}, d={params.d}")
    if params.N < 1 or params.xi[0] != params.xi[1] or params.xi[1] < 1:
        raise ValueError(f"invalid certificate parameters: {params}")
    return gram(state, family_generators(params, l), ctx, exact=exact)


def average_R(matrices) -> HermitianMatrix:
    """Entrywise arithmetic mean; exact inputs give an exact mean."""
    mats = list(matrices)
    if not mats:
        raise ValueError("cannot average an empty list of matrices")
    n = mats[0].dim
    if any(m.dim != n for m in mats):
        raise ValueError("dimension mismatch in matrix average")
    if all(m.exact for m in mats):
        count = Fraction(len(mats))
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = PhaseScalar.zero()
                for m in mats:
                    acc = acc + m.entry(i, j)
                row.append(acc / count)
            rows.append(row)
        return HermitianMatrix(rows, exact=True)
    if any(m.exact for m in mats):
        raise ValueError("cannot mix exact and numeric matrices in an average")
    return HermitianMatrix(sum(m.rows() for m in mats) / len(mats))


def det_P(p, d: int):
    """Closed-form determinant 1 - d*p^2 of P_d = [p; 1; 0; ...; 0]."""
    if d < 1:
        raise ValueError("d must be positive")
    if isinstance(p, float):
        return 1.0 - d * p * p
    pf = as_fraction(p)
    return 1 - d * pf * pf


def choose_parameters(p) -> tuple[int, Fraction]:
    """Smallest d with d*p^2 > 1, and eps making the witness margin survive.

    The off-diagonal perturbations contribute at most 2*eps*d^2 to the
    witness value; eps = (d*p^2 - 1)/(4*d) caps that at half the margin
    d*(d*p^2 - 1).  |p| > 1 yields d = 1, the 2x2 short form.
    """
    pf = abs(_decimal_fraction(p))
    if pf == 0:
        raise ValueError("p = 0: nothing to refute")
    d = math.floor(1 / pf**2) + 1
    eps = (d * pf * pf - 1) / (4 * d)
    return d, eps


def witness_vector(p, d: int) -> tuple[GaussRat, ...]:
    """v = (-p*d, 1, ..., 1); its P_d quadratic value is d*(1 - d*p^2) < 0."""
    pf = _decimal_fraction(p)
    if d * pf * pf <= 1:
        raise ValueError(f"d*p^2 = {d * pf * pf} <= 1: no negativity witness")
    return (GaussRat(-pf * d),) + tuple(GaussRat(1) for _ in range(d))


# ---------------------------------------------------------------------------
# refute / verify
# ---------------------------------------------------------------------------

def refute(state: StateCandidate, ctx: PhaseContext, *,
           budget: int = DEFAULT_BUDGET, method: str = "auto"):
    """Refute a non-trace candidate, or report consistency with the trace.

    Returns a Certificate whose witness value is strictly negative, or
    ConsistentWithTrace when every declared orbit value vanishes.
    """
    if ctx.genus != 1:
        raise ValueError(
            "the refutation engine works at genus 1; reduce the form with "
            "lattice.symplectic_normal_form first")
    declared = state.declared_orbits()
    nonzero = [j for j in declared if state.value(j) != 0]
    if not nonzero:
        return ConsistentWithTrace(orbits_checked=declared)
    orbit = nonzero[0]
    p = state.value(orbit)
    d, eps = choose_parameters(p)
    if d > 1000:
        raise DiophantineBudgetError(
            f"refuting p = {p} needs d = {d}; the d!-divisible search and the "
            f"(d+1)-dimensional restrictions exceed the engine's practical budget")
    v = witness_vector(p, d)
    for _ in range(4):
        n_val = diophantine_N(ctx, orbit, d, eps, budget=budget, method=method)
        params = CertParams(xi=(orbit, orbit), d=d, N=n_val, epsilon=eps)
        mats = [build_H_second(state, params, l, ctx) for l in range(1, d + 1)]
        avg_value = quadratic_form(average_R(mats), v)
        if avg_value < -1e-6:
            values = [quadratic_form(m, v) for m in mats]
            l_star = min(range(d), key=lambda i: (values[i], i)) + 1
            return Certificate(
                params=params,
                p=p,
                l_star=l_star,
                generators=family_generators(params, l_star),
                witness=v,
                value=values[l_star - 1],
                avg_value=avg_value,
            )
        eps = eps / 2  # shrink the phase tolerance and retry
    raise RefutationMarginError(
        f"negativity margin stayed above -1e-6 for p = {p} (degenerate candidate)")


@dataclass(frozen=True)
class ClauseResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    accepted: bool
    clauses: tuple[ClauseResult, ...]

    @property
    def failed(self) -> str | None:
        for c in self.clauses:
            if not c.ok:
                return c.name
        return None

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "failed": self.failed,
            "clauses": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.clauses],
        }


def verify(state: StateCandidate, cert: Certificate, ctx: PhaseContext,
           tol: float = 1e-9) -> VerificationReport:
    """Independently recompute every clause of a certificate.

    The decisive check rebuilds a = sum v_i W_(gen_i) and evaluates
    omega(a* a) through plain algebra multiplication, with no Gram
    machinery, and demands agreement with the certified value.
    """
    clauses: list[ClauseResult] = []

    def clause(name: str, ok: bool, detail: str = "") -> bool:
        clauses.append(ClauseResult(name, bool(ok), detail))
        return bool(ok)

    params = cert.params
    d, n_val, eps, xi = params.d, params.N, params.epsilon, params.xi

    structural = (
        d >= 1
        and n_val >= 1
        and eps > 0
        and len(xi) == 2
        and xi[0] == xi[1] >= 1
        and 1 <= cert.l_star <= d
        and len(cert.witness) == d + 1
        and len(cert.generators) == d + 1
        and all(len(g) == 2 for g in cert.generators)
        and abs(float(cert.p) - float(eval_generator(state, xi))) <= tol
    )
    if not clause("params", structural,
                  "certificate shape and p = omega(W_xi) against the state"):
        return VerificationReport(False, tuple(clauses))

    divisible = clause("divisibility", n_val % math.factorial(d) == 0, f"{d}! | N")
    clause("approximation", satisfies_diophantine(ctx.h, n_val, xi[1], d, eps),
           "|(h N xi2^2) mod 2pi - 2pi/d| < eps/(4 d^2)")
    if not divisible:
        # the Theta_j families need l | N; nothing further can be recomputed
        return VerificationReport(False, tuple(clauses))

    expected_gens = family_generators(params, cert.l_star)
    clause("generators", expected_gens == tuple(cert.generators),
           "generator family matches Theta_j xi for (N, l*)")

    mats = [build_H_second(state, params, l, ctx) for l in range(1, d + 1)]
    avg_val = quadratic_form(average_R(mats), cert.witness)
    star_val = quadratic_form(mats[cert.l_star - 1], cert.witness)
    clause("negativity",
           avg_val < 0 and abs(avg_val - cert.avg_value) <= tol
           and cert.value < 0 and star_val < 0 and abs(star_val - cert.value) <= tol,
           f"average {avg_val:.6e} vs certified {cert.avg_value:.6e}; "
           f"witness value {star_val:.6e} vs certified {cert.value:.6e}")

    element = AlgebraElement(2)
    for w, g in zip(cert.witness, cert.generators):
        element = element + weyl(g) * PhaseScalar.gaussian(w.re, w.im)
    direct = evaluate(state, multiply(adjoint(element), element, ctx), ctx)
    clause("algebra-agreement",
           direct.real < 0 and abs(direct.imag) <= tol and abs(direct.real - star_val) <= tol,
           f"omega(a*a) = {direct.real:.6e} by bare algebra multiplication")

    accepted = all(c.ok for c in clauses)
    return VerificationReport(accepted, tuple(clauses))
