"""System parameters, quantum-number lattice, spectral chain, wavefunctions.

The model is a 4D quantum oscillator-type system on coordinates
(r, theta1, theta2, theta3) with rational frequency ratios k1, k2, k3 and
four positive rational potential parameters a1..a4.  Separation of
variables produces a chain of derived parameters A2 -> A1 -> A0 and
separation constants ell3, ell2, ell1 together with the energy E, all exact
rationals (E an exact polynomial in the frequency w).

Conventions:

* omega is dual mode — None means formal (lattice algebra over Q[w]); a
  positive Fraction fixes it for function-space numerics.
* a_i > 0 keeps every A_i > 0, which protects the denominators in the
  lowering symmetry operators.
* The evaluation cell is r > 0, 0 < k_i theta_i < pi/2; samplers stay in
  the middle of the cell, away from the singular walls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

from .numcore import Jet, OmegaPoly
from .specfun import JacobiSpec, LaguerreSpec, jacobi_eval, laguerre_eval


def parse_rational(s: str) -> Fraction:
    """Parse 'p/q' or an integer string into an exact Fraction."""
    s = s.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in rational {s!r}") from None


def parse_rational_list(s: str) -> tuple:
    return tuple(parse_rational(tok) for tok in s.split(","))


class QuantumState(NamedTuple):
    n0: int
    n1: int
    n2: int
    n3: int


def _ratio_parts(x: Fraction):
    return x.numerator, x.denominator


@dataclass(frozen=True)
class SystemParams:
    """Exact model parameters.

    k1, k2, k3 — positive rational frequency ratios; a1..a4 — positive
    rational potential parameters; omega — None for formal w, or a fixed
    positive rational.  The coupling constants beta_i and the reduced ratio
    decompositions p_i/q_i are derived, never stored.
    """
    k1: Fraction
    k2: Fraction
    k3: Fraction
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    omega: Optional[Fraction] = None

    def __post_init__(self):
        for name in ("k1", "k2", "k3", "a1", "a2", "a3", "a4"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be a positive rational")
        if self.omega is not None:
            if not isinstance(self.omega, Fraction):
                object.__setattr__(self, "omega", Fraction(self.omega))
            if self.omega <= 0:
                raise ValueError("omega must be positive when fixed")

    # reduced ratio decompositions: k1 = p1/q1, k2/k1 = p2/q2, k3/k2 = p3/q3
    @property
    def pq1(self):
        return _ratio_parts(self.k1)

    @property
    def pq2(self):
        return _ratio_parts(self.k2 / self.k1)

    @property
    def pq3(self):
        return _ratio_parts(self.k3 / self.k2)

    def pq(self, i: int):
        return (self.pq1, self.pq2, self.pq3)[i - 1]

    def k(self, i: int) -> Fraction:
        return (self.k1, self.k2, self.k3)[i - 1]

    # couplings (always recomputed from the a's)
    @property
    def beta1(self) -> Fraction:
        return self.k1 ** 2 * (Fraction(1, 4) - self.a1 ** 2)

    @property
    def beta2(self) -> Fraction:
        return self.k2 ** 2 * (Fraction(1, 4) - self.a2 ** 2)

    @property
    def beta3(self) -> Fraction:
        # pairs with a4
        return self.k3 ** 2 * (Fraction(1, 4) - self.a4 ** 2)

    @property
    def beta4(self) -> Fraction:
        # pairs with a3
        return self.k3 ** 2 * (Fraction(1, 4) - self.a3 ** 2)

    def with_omega(self, omega) -> "SystemParams":
        w = None if omega is None else Fraction(omega)
        return SystemParams(self.k1, self.k2, self.k3,
                            self.a1, self.a2, self.a3, self.a4, w)


@dataclass(frozen=True)
class SpectralData:
    A2: Fraction
    A1: Fraction
    A0: Fraction
    ell3: Fraction
    ell2: Fraction
    ell1: Fraction
    E: OmegaPoly  # degree 1 in w


@lru_cache(maxsize=65536)
def spectral_chain(params: SystemParams, state: QuantumState) -> SpectralData:
    """Derived parameter chain and energy for a lattice state.

    The energy is computed twice — through A0 and through its fully
    expanded linear form — and the two are asserted equal (exact).
    """
    state = QuantumState(*state)
    n0, n1, n2, n3 = state
    if min(state) < 0:
        raise ValueError("quantum numbers must be >= 0")
    k1, k2, k3 = params.k1, params.k2, params.k3
    a1, a2, a3, a4 = params.a1, params.a2, params.a3, params.a4

    A2 = (k3 / k2) * (2 * n3 + a3 + a4 + 1)
    A1 = (k2 / k1) * (2 * n2 + A2 + a2 + 1)
    A0 = k1 * (2 * n1 + a1 + A1 + 1)
    ell3 = -k3 ** 2 * (2 * n3 + a3 + a4 + 1) ** 2
    ell2 = k2 ** 2 * Fraction(1, 4) - k2 ** 2 * (2 * n2 + a2 + A2 + 1) ** 2
    ell1 = k1 ** 2 - A0 ** 2
    E = OmegaPoly((0, -(4 * n0 + 2 * A0 + 2)))

    expanded = -2 * (2 * n0 + 2 * k1 * n1 + 2 * k2 * n2 + 2 * k3 * n3
                     + k1 * a1 + k2 * a2 + k3 * a3 + k3 * a4
                     + k1 + k2 + k3 + 1)
    if E != OmegaPoly((0, expanded)):
        raise AssertionError("energy chain inconsistency (A0 form vs expanded form)")
    return SpectralData(A2, A1, A0, ell3, ell2, ell1, E)


@dataclass(frozen=True)
class AngularSlotGauge:
    """Gauge data of one angular slot.

    The gauged slot function is
        Theta_n^{(a,b)}(theta) = sin(k theta)^{a+c} cos(k theta)^{b+d}
                                 * P_n^{(a,b)}(cos 2 k theta)
    with slot-dependent exponent offsets (c, d):
        slot 1: (a,b) = (A1, a1), (c,d) = (-1/2, 1/2)
        slot 2: (a,b) = (A2, a2), (c,d) = (0, 1/2)
        slot 3: (a,b) = (a3, a4), (c,d) = (1/2, 1/2)
    """
    slot: int
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    k: Fraction

    def N(self, n: int) -> Fraction:
        return 2 * n + self.a + self.b + 1

    def shifted(self, da: int) -> "AngularSlotGauge":
        return AngularSlotGauge(self.slot, self.a + da, self.b,
                                self.c, self.d, self.k)


_SLOT_OFFSETS = {1: (Fraction(-1, 2), Fraction(1, 2)),
                 2: (Fraction(0), Fraction(1, 2)),
                 3: (Fraction(1, 2), Fraction(1, 2))}


def gauge_for_slot(params: SystemParams, chain: SpectralData, slot: int) -> AngularSlotGauge:
    c, d = _SLOT_OFFSETS[slot]
    if slot == 1:
        a, b = chain.A1, params.a1
    elif slot == 2:
        a, b = chain.A2, params.a2
    elif slot == 3:
        a, b = params.a3, params.a4
    else:
        raise ValueError("slot must be 1, 2 or 3")
    return AngularSlotGauge(slot, a, b, c, d, params.k(slot))


# ---------------------------------------------------------------------------
# separated factors and the full wavefunction
# ---------------------------------------------------------------------------

def radial_factor(omega: Fraction, n0: int, A0: Fraction):
    """Evaluator (r, order) -> univariate Jet of the radial factor.

    Psi0(r) = w^{A0/2} e^{-w r^2/2} r^{A0-1} L_{n0}^{(A0)}(w r^2), with the
    w^{A0/2} prefactor included so the radial ladder coefficients come out
    clean.
    """
    w = float(omega)
    pref = w ** (float(A0) / 2.0)
    spec = LaguerreSpec(n0, A0)

    def ev(r: float, order: int) -> Jet:
        t = Jet.variable((r,), 0, order)
        u = (t * t) * w
        val = (u * (-0.5)).exp() * t.power(float(A0) - 1.0) * pref
        return val * laguerre_eval(spec, u)

    return ev


def slot_factor(gauge: AngularSlotGauge, n: int):
    """Evaluator (theta, order) -> univariate Jet of a gauged slot function."""
    k = float(gauge.k)
    ea = float(gauge.a + gauge.c)
    eb = float(gauge.b + gauge.d)
    spec = JacobiSpec(n, gauge.a, gauge.b)

    def ev(theta: float, order: int) -> Jet:
        t = Jet.variable((theta,), 0, order) * k
        s, c = t.sin(), t.cos()
        arg = c * c - s * s  # cos(2 k theta)
        val = s.power(ea) * c.power(eb)
        return val * jacobi_eval(spec, arg)

    return ev


def in_cell(params: SystemParams, point) -> bool:
    r, t1, t2, t3 = point
    if r <= 0:
        return False
    for k, t in ((params.k1, t1), (params.k2, t2), (params.k3, t3)):
        if not (0.0 < float(k) * t < math.pi / 2):
            return False
    return True


class Wavefunction:
    """Jet evaluator of the full separated eigenfunction of one state."""

    def __init__(self, params: SystemParams, state: QuantumState):
        if params.omega is None:
            raise ValueError("wavefunctions need a fixed numeric omega")
        state = QuantumState(*state)
        self.params = params
        self.state = state
        self.chain = spectral_chain(params, state)
        self.factors = (
            radial_factor(params.omega, state.n0, self.chain.A0),
            slot_factor(gauge_for_slot(params, self.chain, 1), state.n1),
            slot_factor(gauge_for_slot(params, self.chain, 2), state.n2),
            slot_factor(gauge_for_slot(params, self.chain, 3), state.n3),
        )

    def factor(self, i: int):
        return self.factors[i]

    def __call__(self, point, order: int) -> Jet:
        if not in_cell(self.params, point):
            raise ValueError(f"point {point} outside the principal cell")
        jets = [self.factors[i](point[i], order).lift(point, i) for i in range(4)]
        out = jets[0]
        for j in jets[1:]:
            out = out * j
        return out

    def value(self, point) -> float:
        return math.prod(self.factors[i](point[i], 0).value for i in range(4))


def wavefunction(params: SystemParams, state) -> Wavefunction:
    return Wavefunction(params, QuantumState(*state))


def potential_v0(params: SystemParams, point) -> float:
    """The scalar potential V0 at a cell point (quantum case: alpha = -w^2)."""
    if params.omega is None:
        raise ValueError("potential_v0 needs a fixed numeric omega")
    r, t1, t2, t3 = (float(x) for x in point)
    w = float(params.omega)
    s1 = math.sin(float(params.k1) * t1)
    c1 = math.cos(float(params.k1) * t1)
    s2 = math.sin(float(params.k2) * t2)
    c2 = math.cos(float(params.k2) * t2)
    s3 = math.sin(float(params.k3) * t3)
    c3 = math.cos(float(params.k3) * t3)
    return (-(w * w) * r * r
            + float(params.beta1) / (r * r * c1 * c1)
            + float(params.beta2) / (r * r * s1 * s1 * c2 * c2)
            + float(params.beta3) / (r * r * s1 * s1 * s2 * s2 * c3 * c3)
            + float(params.beta4) / (r * r * s1 * s1 * s2 * s2 * s3 * s3))


# ---------------------------------------------------------------------------
# spectrum bookkeeping
# ---------------------------------------------------------------------------

def enumerate_states(nmax: int):
    rng = range(nmax + 1)
    for n0 in rng:
        for n1 in rng:
            for n2 in rng:
                for n3 in rng:
                    yield QuantumState(n0, n1, n2, n3)


def degeneracy_classes(params: SystemParams, nmax: int):
    """Partition of all states with n_i <= nmax by exact energy.

    Returns a dict OmegaPoly -> sorted list of states.  The grouping key is
    the formal-w energy, so it is independent of any fixed omega value.
    """
    classes = {}
    for st in enumerate_states(nmax):
        E = spectral_chain(params, st).E
        classes.setdefault(E, []).append(st)
    for sts in classes.values():
        sts.sort()
    return classes
