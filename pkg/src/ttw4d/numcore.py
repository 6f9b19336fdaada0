"""Exact numeric tower and truncated multivariate Taylor (jet) arithmetic.

Three layers live here:

* ``Rational`` — plain :class:`fractions.Fraction` (arbitrary precision,
  always stored reduced, positive denominator).  Everything exact in the
  package is built on it.
* :class:`OmegaPoly` — an exact univariate polynomial in the formal
  frequency symbol ``w`` over the rationals.  It is the coefficient ring of
  the lattice operator algebra (ladder coefficients carry powers of the
  oscillator frequency).
* :class:`Jet` — a dense truncated Taylor expansion of a smooth function at
  a point, closed under ring arithmetic and elementary-function
  composition.  All numeric differentiation in the function-space checks
  goes through jets; there is no finite differencing outside the self-tests.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

Rational = Fraction


def pochhammer(x, m: int):
    """Rising factorial x(x+1)...(x+m-1); 1 for m = 0.  Exact for Fraction x."""
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    out = x - x + 1 if not isinstance(x, int) else Fraction(1)
    for j in range(m):
        out = out * (x + j)
    return out


# ---------------------------------------------------------------------------
# polynomials in the formal frequency w
# ---------------------------------------------------------------------------

def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected exact rational, got {type(c).__name__}")


class OmegaPoly:
    """Exact polynomial in the formal symbol w, coefficients in Q.

    Immutable; the coefficient tuple never has a trailing zero (the zero
    polynomial is the empty tuple).  Supports +, -, *, ** and scaling by
    Fraction/int on either side.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("OmegaPoly is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def omega(cls, power: int = 1, scale=1):
        return cls((0,) * power + (scale,))

    # -- structure ----------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, power: int) -> Fraction:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    # -- ring ops ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, OmegaPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return OmegaPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return OmegaPoly(tuple(self.coeff(i) + o.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return OmegaPoly(tuple(-c for c in self.coeffs))

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
        if not self.coeffs or not o.coeffs:
            return OmegaPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return OmegaPoly(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            d = Fraction(other)
            return OmegaPoly(tuple(c / d for c in self.coeffs))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = OmegaPoly((1,))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(("OmegaPoly", self.coeffs))

    def __repr__(self):
        return f"OmegaPoly({self.coeffs!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for p, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if p == 0:
                parts.append(str(c))
            else:
                mono = "w" if p == 1 else f"w^{p}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def opoly_eval(p: OmegaPoly, omega) -> Fraction:
    """Exact Horner evaluation of p at a rational omega."""
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * omega + c
    return acc


# ---------------------------------------------------------------------------
# dense truncated multivariate jets
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def multi_indices(nvars: int, order: int):
    """All multi-indices of length nvars with total degree <= order (graded)."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for d in range(remaining + 1):
            rec(prefix + (d,), remaining - d, slots - 1)

    for total in range(order + 1):
        rec((), total, nvars)
    return tuple(out)


def _scalar(x) -> float:
    if isinstance(x, float):
        return x
    if isinstance(x, (int, Fraction)):
        return float(x)
    raise TypeError(f"cannot use {type(x).__name__} as a jet scalar")


class Jet:
    """Dense truncated Taylor expansion at a base point.

    ``coeffs`` maps every multi-index of total degree <= order to the Taylor
    *coefficient* (not the derivative): f = sum c_mu (x-p)^mu.  The table is
    dense — it has exactly C(order+nvars, nvars) entries — but arithmetic
    skips zero entries.  nvars defaults to 4 (the model's coordinates); the
    separable fast paths use nvars=1 jets and lift them.
    """

    __slots__ = ("base", "order", "nvars", "coeffs")

    def __init__(self, base, order: int, coeffs=None):
        base = tuple(float(b) for b in base)
        nvars = len(base)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "nvars", nvars)
        table = {mu: 0.0 for mu in multi_indices(nvars, order)}
        if coeffs:
            for mu, c in coeffs.items():
                if sum(mu) <= order:
                    table[mu] = float(c)
        object.__setattr__(self, "coeffs", table)

    def __setattr__(self, *a):
        raise AttributeError("Jet is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value, base, order: int):
        z = (0,) * len(base)
        return cls(base, order, {z: _scalar(value)})

    @classmethod
    def variable(cls, base, i: int, order: int):
        """The coordinate function x_i expanded at the base point."""
        n = len(base)
        z = (0,) * n
        e = tuple(1 if j == i else 0 for j in range(n))
        c = {z: float(base[i])}
        if order >= 1:
            c[e] = 1.0
        return cls(base, order, c)

    # -- access --------------------------------------------------------------
    @property
    def value(self) -> float:
        return self.coeffs[(0,) * self.nvars]

    def derivative(self, mu) -> float:
        """The mixed partial d^mu f at the base point (mu! times coefficient)."""
        mu = tuple(mu)
        if sum(mu) > self.order:
            raise ValueError("jet order too low for requested derivative")
        fact = 1
        for m in mu:
            fact *= math.factorial(m)
        return fact * self.coeffs[mu]

    def derivative_jet(self, mu) -> "Jet":
        """The jet of d^mu f, of order (order - |mu|)."""
        mu = tuple(mu)
        k = sum(mu)
        if k > self.order:
            raise ValueError("jet order too low for requested derivative")
        new_order = self.order - k
        out = {}
        for nu in multi_indices(self.nvars, new_order):
            src = tuple(n + m for n, m in zip(nu, mu))
            c = self.coeffs[src]
            if c:
                fact = 1.0
                for n, m in zip(nu, mu):
                    # (n+m)! / n!
                    for t in range(n + 1, n + m + 1):
                        fact *= t
                out[nu] = c * fact
        return Jet(self.base, new_order, out)

    def truncated(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        return Jet(self.base, order, {mu: c for mu, c in self.coeffs.items()
                                      if sum(mu) <= order})

    def lift(self, base4, axis: int) -> "Jet":
        """Embed a univariate jet as a jet in len(base4) variables on `axis`."""
        if self.nvars != 1:
            raise ValueError("lift expects a univariate jet")
        n = len(base4)
        out = {}
        for (d,), c in self.coeffs.items():
            if c:
                mu = tuple(d if j == axis else 0 for j in range(n))
                out[mu] = c
        return Jet(base4, self.order, out)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: "Jet"):
        if self.base != other.base or self.order != other.order:
            raise ValueError("jet base/order mismatch")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            out = dict(self.coeffs)
            for mu, c in other.coeffs.items():
                if c:
                    out[mu] = out[mu] + c
            return Jet(self.base, self.order, out)
        try:
            s = _scalar(other)
        except TypeError:
            return NotImplemented
        out = dict(self.coeffs)
        z = (0,) * self.nvars
        out[z] = out[z] + s
        return Jet(self.base, self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.base, self.order,
                   {mu: -c for mu, c in self.coeffs.items() if c})

    def __sub__(self, other):
        if isinstance(other, Jet):
            return self + (-other)
        try:
            s = _scalar(other)
        except TypeError:
            return NotImplemented
        return self + (-s)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            order = self.order
            out = {mu: 0.0 for mu in self.coeffs}
            items = [(mu, sum(mu), c) for mu, c in self.coeffs.items() if c]
            for nu, cb in other.coeffs.items():
                if not cb:
                    continue
                dn = sum(nu)
                for mu, dm, ca in items:
                    if dm + dn <= order:
                        key = tuple(a + b for a, b in zip(mu, nu))
                        out[key] += ca * cb
            return Jet(self.base, order, out)
        try:
            s = _scalar(other)
        except TypeError:
            return NotImplemented
        return Jet(self.base, self.order,
                   {mu: c * s for mu, c in self.coeffs.items() if c})

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        c0 = self.value
        if c0 == 0.0:
            raise ZeroDivisionError("jet reciprocal needs nonzero constant term")
        series = [(-1.0) ** m / c0 ** (m + 1) for m in range(self.order + 1)]
        return self._compose(series)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        try:
            s = _scalar(other)
        except TypeError:
            return NotImplemented
        return self * (1.0 / s)

    def __rtruediv__(self, other):
        try:
            s = _scalar(other)
        except TypeError:
            return NotImplemented
        return self.reciprocal() * s

    # -- elementary functions -------------------------------------------------
    def _compose(self, series) -> "Jet":
        """sum_m series[m] * (self - value)^m, truncated (Horner)."""
        d = self - self.value
        out = Jet.constant(series[-1], self.base, self.order)
        for m in range(len(series) - 2, -1, -1):
            out = out * d + series[m]
        return out

    def exp(self) -> "Jet":
        e0 = math.exp(self.value)
        series = [e0 / math.factorial(m) for m in range(self.order + 1)]
        return self._compose(series)

    def log(self) -> "Jet":
        c0 = self.value
        if c0 <= 0.0:
            raise ValueError("jet log needs positive constant term")
        series = [math.log(c0)]
        for m in range(1, self.order + 1):
            series.append((-1.0) ** (m + 1) / (m * c0 ** m))
        return self._compose(series)

    def sin(self) -> "Jet":
        c0 = self.value
        cyc = (math.sin(c0), math.cos(c0), -math.sin(c0), -math.cos(c0))
        series = [cyc[m % 4] / math.factorial(m) for m in range(self.order + 1)]
        return self._compose(series)

    def cos(self) -> "Jet":
        c0 = self.value
        cyc = (math.cos(c0), -math.sin(c0), -math.cos(c0), math.sin(c0))
        series = [cyc[m % 4] / math.factorial(m) for m in range(self.order + 1)]
        return self._compose(series)

    def power(self, alpha) -> "Jet":
        """self**alpha for real alpha (integer alpha allows negative base)."""
        a = float(alpha)
        c0 = self.value
        if a == round(a):
            ai = int(round(a))
            if c0 == 0.0:
                raise ZeroDivisionError("jet power at zero constant term")
            series = []
            fall = 1.0
            for m in range(self.order + 1):
                series.append(fall / math.factorial(m) * c0 ** (ai - m))
                fall *= (ai - m)
            return self._compose(series)
        if c0 <= 0.0:
            raise ValueError("fractional jet power needs positive constant term")
        series = []
        fall = 1.0
        for m in range(self.order + 1):
            series.append(fall / math.factorial(m) * c0 ** (a - m))
            fall *= (a - m)
        return self._compose(series)

    def sqrt(self) -> "Jet":
        return self.power(0.5)

    def __repr__(self):
        nz = {mu: c for mu, c in self.coeffs.items() if c}
        return f"Jet(base={self.base}, order={self.order}, {nz})"


# -- spec-surface wrappers ----------------------------------------------------

def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Truncated Taylor arithmetic: op in {'add','sub','mul','div'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown jet op {op!r}")


def jet_elementary(f: str, a: Jet, exponent=None) -> Jet:
    """Compose an elementary function with a jet.

    f in {'sin','cos','exp','log','power'}; 'power' takes the real exponent.
    """
    if f == "sin":
        return a.sin()
    if f == "cos":
        return a.cos()
    if f == "exp":
        return a.exp()
    if f == "log":
        return a.log()
    if f == "power":
        if exponent is None:
            raise ValueError("power needs an exponent")
        return a.power(exponent)
    raise ValueError(f"unknown elementary function {f!r}")
