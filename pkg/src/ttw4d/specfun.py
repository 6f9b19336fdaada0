"""Jacobi and Laguerre polynomial evaluation over rationals and jets.

Both evaluators use the standard three-term recurrence in the degree.  The
arithmetic is generic: handed a Fraction argument they stay exact end to
end; handed a Jet they return the jet of the polynomial (derivatives come
for free).  Degrees here are desk scale (n <= ~12), far below anything that
would need asymptotic methods.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class JacobiSpec:
    """P_n^{(a,b)}; model-generated parameters satisfy a, b > -1.

    The recurrence below is well defined whenever a + b > -2, which also
    covers the index-shifted parameters (a -> a - 2) produced by the
    simultaneous n/a ladders.
    """
    n: int
    a: Fraction
    b: Fraction


@dataclass(frozen=True)
class LaguerreSpec:
    n: int
    alpha: Fraction


def jacobi_eval(spec: JacobiSpec, x):
    """Value of the Jacobi polynomial P_n^{(a,b)} at x (Fraction or Jet)."""
    n, a, b = spec.n, spec.a, spec.b
    if n < 0:
        raise ValueError("jacobi degree must be >= 0")
    if n >= 2 and a + b <= -2:
        raise ValueError("jacobi recurrence needs a + b > -2")
    if n == 0:
        return x - x + 1 if not isinstance(x, Fraction) else Fraction(1)
    p_prev = 1  # P_0
    p_cur = Fraction(a - b, 2) + Fraction(a + b + 2, 2) * x
    for m in range(2, n + 1):
        s = 2 * m + a + b
        c1 = 2 * m * (m + a + b) * (s - 2)
        c2 = (s - 1) * (a * a - b * b)
        c3 = (s - 1) * s * (s - 2)
        c4 = 2 * (m + a - 1) * (m + b - 1) * s
        p_next = (c2 * p_cur + c3 * (x * p_cur) - c4 * p_prev) / c1
        p_prev, p_cur = p_cur, p_next
    return p_cur


def laguerre_eval(spec: LaguerreSpec, x):
    """Value of the generalized Laguerre polynomial L_n^{(alpha)} at x."""
    n, alpha = spec.n, spec.alpha
    if n < 0:
        raise ValueError("laguerre degree must be >= 0")
    if n == 0:
        return x - x + 1 if not isinstance(x, Fraction) else Fraction(1)
    p_prev = 1  # L_0
    p_cur = (1 + alpha) - x
    for m in range(2, n + 1):
        p_next = ((2 * m - 1 + alpha) * p_cur - (x * p_cur)
                  - (m - 1 + alpha) * p_prev) / m
        p_prev, p_cur = p_cur, p_next
    return p_cur
