"""Independent exact-arithmetic oracles used to freeze expected test values.

Everything here is computed from finite sums over `fractions.Fraction`, with no
imports from the package under test.  The series below are textbook closed
forms, evaluated term by term:

* Jacobi:    P_n^(a,b)(x) = sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)
* Laguerre:  L_n^(alpha)(x) = sum_k (-1)^k C(n+alpha, n-k) x^k / k!

The package implements both families via three-term recurrences, so agreement
between the two routes is a meaningful cross-check rather than a tautology.
"""

from fractions import Fraction
from math import factorial


def binom_gen(top, k: int) -> Fraction:
    """Generalized binomial coefficient C(top, k) for rational top, integer k >= 0."""
    if k < 0:
        raise ValueError("lower index must be nonnegative")
    out = Fraction(1)
    for j in range(k):
        out *= Fraction(top) - j
    return out / factorial(k)


def jacobi_series(n: int, a, b, x) -> Fraction:
    a, b, x = Fraction(a), Fraction(b), Fraction(x)
    lo = (x - 1) / 2
    hi = (x + 1) / 2
    total = Fraction(0)
    for s in range(n + 1):
        total += binom_gen(n + a, n - s) * binom_gen(n + b, s) * lo**s * hi ** (n - s)
    return total


def laguerre_series(n: int, alpha, x) -> Fraction:
    alpha, x = Fraction(alpha), Fraction(x)
    total = Fraction(0)
    for k in range(n + 1):
        total += (-1) ** k * binom_gen(n + alpha, n - k) * x**k / factorial(k)
    return total
