"""Fixed-point arithmetic on the unit circle.

Angles are represented as 256-bit fixed-point fractions of a full turn.
The certificate pipeline produces zeta-exponents around 10^35, where a
double carries no phase information at all; reducing k * hbar mod 1 in
integer arithmetic keeps every numeric phase deterministic and accurate
to ~2^-250 of a turn.

The module also hosts the minimal-hit solver for irrational rotations:
the smallest k >= 1 with k * alpha landing in a prescribed arc.  This is
the continued-fraction style accelerator behind the Diophantine step; the
plain linear scan is kept alongside as the reference implementation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

BITS = 256
MODULUS = 1 << BITS

# 200 decimal digits of pi; ample for 256-bit turn fractions.
PI = Fraction(
    "3.14159265358979323846264338327950288419716939937510582097494459230781"
    "64062862089986280348253421170679821480865132823066470938446095505822317"
    "2535940812848111745028410270193852110555964462294895493038196"
)
TWO_PI = 2 * PI


def to_fixed(turns: Fraction) -> int:
    """A rational number of turns as a fixed-point residue mod one turn."""
    return (turns.numerator * MODULUS) // turns.denominator % MODULUS


@lru_cache(maxsize=None)
def hbar_fixed(h: Fraction) -> int:
    """Fixed-point representation of hbar = h / (2*pi) modulo one turn."""
    return to_fixed(h / TWO_PI)


def fixed_to_angle(fixed: int) -> float:
    """Radians in [0, 2*pi) for a fixed-point turn fraction."""
    return (fixed % MODULUS) / MODULUS * 2.0 * math.pi


def phase_angle(h: Fraction, zeta_exp: int, root: Fraction = Fraction(0)) -> float:
    """Angle of zeta^k * e(r) in radians, exactly reduced mod 2*pi.

    zeta_exp may be astronomically large; the reduction happens on 256-bit
    integers before any float is produced.
    """
    fixed = (zeta_exp * hbar_fixed(h) + to_fixed(root)) % MODULUS
    return fixed_to_angle(fixed)


# ---------------------------------------------------------------------------
# minimal hitting time of the rotation k -> k * a mod m
# ---------------------------------------------------------------------------

def first_hit(a: int, m: int, t: int, w: int) -> int | None:
    """Minimal k >= 1 with ((k*a - t) mod m) <= w, or None if unreachable.

    Euclidean descent: a is mirrored below m/2, then the wrapped hits are
    the hits of the inverse rotation modulo a, which shrinks the problem
    like the continued fraction of a/m.  Runs in O(log^2 m).
    """
    a %= m
    t %= m
    if w >= m - 1:
        return 1
    if a == 0:
        return 1 if (-t) % m <= w else None
    if 2 * a > m:
        return first_hit(m - a, m, (-(t + w)) % m, w)
    # window wraps zero and k = 1 lands in the wrapped part
    if t + w >= m and a <= t + w - m:
        return 1
    # direct multiples (no wrap yet)
    if t == 0:
        if a <= w:
            return 1
    else:
        k = -(-t // a)
        if k * a <= t + w:
            return k
    # wrapped hits: minimal j >= 1 with ((j*(-m) - t) mod a) <= w
    j = first_hit((-m) % a, a, t % a, w)
    if j is None:
        return None
    s = t + ((-j * m - t) % a)
    return (j * m + s) // a


def scan_hit(a: int, m: int, t: int, w: int, limit: int) -> tuple[int | None, int, int]:
    """Reference linear scan for first_hit, capped at `limit` steps.

    Returns (k or None, best_k, best_distance) where best_* track the
    closest approach seen, for budget-exhaustion reporting.
    """
    a %= m
    pos = 0
    best_k, best_dist = 0, m
    for k in range(1, limit + 1):
        pos = (pos + a) % m
        d = (pos - t) % m
        if d <= w:
            return k, k, d
        dist = min(d - w, m - d)
        if dist < best_dist:
            best_k, best_dist = k, dist
    return None, best_k, best_dist
