"""Exact operator algebra on the quantum-number lattice.

Everything here is exact: basis states are quantum-number tuples, vectors
are sparse rational(-in-w) combinations of them, and operators are rules
state -> vector closed under addition, scaling, composition, commutator and
the symmetrized triple product.  The coefficient ring is Q[w] (OmegaPoly).

The primitive ladder steps act on an *extended* state that carries the
shiftable parameters (A0, A1, A2) alongside (n0..n3), because a single step
generally leaves the separated basis (it shifts a parameter without
re-deriving the chain).  The composites Xi_i^{+-} recombine steps so the
final extended state is chain-consistent again; this is asserted on every
application.  Below-lattice images (any n_i < 0) are dropped as zero — the
printed lowering coefficients do not always vanish at the boundary, so all
identity suites run on interior states with an explicit margin.

Known defects of the printed source formulas (kept verbatim under
variant="printed"/convention flags, with working corrected forms alongside):

* the closed-form Xi_1^{+-} coefficients miss a factor (-2)^{q1}
  (and the lowering one also reshuffles the radial Pochhammer products);
* the i-dependence of the bracket/cubic structure constants enters through
  g = k_{i-1} (k_0 := 1) and c_i = (k1^2, k2^2/4, 0), not through the
  single printed constant list alpha_i = (1, 1/4, 0) — the two coincide at
  i = 1 (and alpha_i = c_i/k_i^2 inside the cubic's (L^-)^2 term);
* P_i^(-) must be the antisymmetrized combination for the bracket
  [L^+, L^-] to close;
* M_1^- closes its defining relations with Xi_1^+ over the (A0+p1) divisor
  and Xi_1^- over (A0-p1), not with L_1^-/L_1^+ as typeset.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

from .model import QuantumState, SystemParams, spectral_chain
from .numcore import OmegaPoly, multi_indices, pochhammer


class DivisorSingular(ArithmeticError):
    """An A0-type divisor of a symmetry operator vanished at a source state."""


def _as_opoly(c) -> OmegaPoly:
    if isinstance(c, OmegaPoly):
        return c
    if isinstance(c, (int, Fraction)):
        return OmegaPoly((c,))
    raise TypeError(f"cannot use {type(c).__name__} as a lattice coefficient")


class LatticeVector:
    """Sparse exact vector: QuantumState -> OmegaPoly, no zero entries.

    Treat instances as immutable values; all operations build new vectors.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for st, c in items:
                c = _as_opoly(c)
                st = QuantumState(*st)
                if min(st) < 0:
                    raise ValueError("negative quantum number in a lattice vector")
                acc[st] = acc[st] + c if st in acc else c
        object.__setattr__(
            self, "terms", {st: c for st, c in acc.items() if not c.is_zero()})

    def __setattr__(self, *a):
        raise AttributeError("LatticeVector is immutable")

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def basis(cls, state, coeff=1):
        return cls({QuantumState(*state): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def states(self):
        return self.terms.keys()

    def coeff(self, state) -> OmegaPoly:
        return self.terms.get(QuantumState(*state), OmegaPoly.zero())

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        out = dict(self.terms)
        for st, c in other.terms.items():
            out[st] = out[st] + c if st in out else c
        return LatticeVector(out)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "LatticeVector":
        c = _as_opoly(c)
        if c.is_zero():
            return LatticeVector()
        return LatticeVector({st: v * c for st, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "LatticeVector(0)"
        parts = [f"({poly}) {tuple(st)}" for st, poly in sorted(self.terms.items())]
        return "LatticeVector(" + " + ".join(parts) + ")"


class LatticeOperator:
    """Exact linear operator given by a rule state -> LatticeVector."""

    __slots__ = ("rule", "name")

    def __init__(self, rule, name: str = ""):
        object.__setattr__(self, "rule", rule)
        object.__setattr__(self, "name", name)

    def __setattr__(self, *a):
        raise AttributeError("LatticeOperator is immutable")

    def __call__(self, state) -> LatticeVector:
        return self.rule(QuantumState(*state))

    def on_vector(self, vec: LatticeVector) -> LatticeVector:
        out = LatticeVector()
        for st, c in vec.items():
            out = out + self.rule(st).scale(c)
        return out

    def __add__(self, other: "LatticeOperator") -> "LatticeOperator":
        return LatticeOperator(lambda st: self.rule(st) + other.rule(st),
                               f"({self.name}+{other.name})")

    def __sub__(self, other: "LatticeOperator") -> "LatticeOperator":
        return LatticeOperator(lambda st: self.rule(st) - other.rule(st),
                               f"({self.name}-{other.name})")

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "LatticeOperator":
        c = _as_opoly(c)
        return LatticeOperator(lambda st: self.rule(st).scale(c),
                               f"({c})*{self.name}")

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction, OmegaPoly)):
            return self.scale(c)
        return NotImplemented

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(Fraction(1, 1) / Fraction(c))
        return NotImplemented

    def __matmul__(self, other: "LatticeOperator") -> "LatticeOperator":
        """Composition self ∘ other (other acts first)."""
        return LatticeOperator(lambda st: self.on_vector(other.rule(st)),
                               f"{self.name}@{other.name}")


def commutator(a: LatticeOperator, b: LatticeOperator) -> LatticeOperator:
    return (a @ b) - (b @ a)


def anticommutator(a: LatticeOperator, b: LatticeOperator) -> LatticeOperator:
    return (a @ b) + (b @ a)


def symmetrized_triple(a, b, c) -> LatticeOperator:
    """Full 6-permutation symmetrizer {A,B,C} (repeats counted)."""
    ops = (a, b, c)
    out = None
    for i, j, k in itertools.permutations(range(3)):
        term = ops[i] @ (ops[j] @ ops[k])
        out = term if out is None else out + term
    return out


def identity_operator() -> LatticeOperator:
    return LatticeOperator(lambda st: LatticeVector.basis(st), "1")


def diagonal_operator(fn, name: str = "diag") -> LatticeOperator:
    """Multiplication operator: state -> fn(state) * state."""
    return LatticeOperator(lambda st: LatticeVector.basis(st, fn(st)), name)


def h_operator(params: SystemParams) -> LatticeOperator:
    """H realized on the basis: multiplication by the exact energy E(state)."""
    return diagonal_operator(lambda st: spectral_chain(params, st).E, "H")


def l_operator(params: SystemParams, i: int) -> LatticeOperator:
    """L_i realized on the basis: multiplication by ell_i(state)."""
    def ell(st):
        ch = spectral_chain(params, st)
        return (ch.ell1, ch.ell2, ch.ell3)[i - 1]
    return diagonal_operator(ell, f"L{i}")


# ---------------------------------------------------------------------------
# primitive ladder steps on extended states
# ---------------------------------------------------------------------------

class ExtState(NamedTuple):
    """Quantum numbers plus the shiftable chain parameters.

    A single ladder step moves one n and possibly one parameter; only the
    full Xi composites return to chain-consistent parameter values.
    """
    n0: int
    n1: int
    n2: int
    n3: int
    A0: Fraction
    A1: Fraction
    A2: Fraction


def _chain_ext(params: SystemParams, state: QuantumState) -> ExtState:
    ch = spectral_chain(params, state)
    return ExtState(*state, ch.A0, ch.A1, ch.A2)


def _slot_ab(params: SystemParams, ext: ExtState, slot: int):
    """Current Jacobi parameters (alpha, beta) of an angular slot."""
    if slot == 1:
        return ext.A1, params.a1
    if slot == 2:
        return ext.A2, params.a2
    if slot == 3:
        return params.a3, params.a4
    raise ValueError("slot must be 1, 2 or 3")


def _step(params: SystemParams, ext: ExtState, kind: str, slot: Optional[int]):
    """Apply one primitive ladder step.

    Returns (coefficient, new ExtState), or None when the image falls below
    the lattice (dropped as zero).  Coefficients follow the printed actions:
        K0+ : -2w (n0+1)(n0+A0),      n0+1, A0-2
        K0- : -2w,                    n0-1, A0+2
        J+  : -2 (n+1)(n+a+b+1),      n+1
        J-  : -2 (n+a)(n+b),          n-1
        K+a :  2 (n+1)(n+a),          n+1, a-2
        K-a :  2 (n+a+b+1)(n+b),      n-1, a+2
    """
    if kind == "K0+":
        coeff = OmegaPoly.omega(1, -2 * (ext.n0 + 1) * (ext.n0 + ext.A0))
        return coeff, ext._replace(n0=ext.n0 + 1, A0=ext.A0 - 2)
    if kind == "K0-":
        if ext.n0 - 1 < 0:
            return None
        return OmegaPoly.omega(1, -2), ext._replace(n0=ext.n0 - 1, A0=ext.A0 + 2)

    a, b = _slot_ab(params, ext, slot)
    nfield = f"n{slot}"
    n = getattr(ext, nfield)
    if kind == "J+":
        coeff = -2 * (n + 1) * (n + a + b + 1)
        return _as_opoly(coeff), ext._replace(**{nfield: n + 1})
    if kind == "J-":
        if n - 1 < 0:
            return None
        return _as_opoly(-2 * (n + a) * (n + b)), ext._replace(**{nfield: n - 1})
    if kind == "K+a":
        coeff = 2 * (n + 1) * (n + a)
        new = {nfield: n + 1}
        if slot in (1, 2):
            new[f"A{slot}"] = a - 2
        return _as_opoly(coeff), ext._replace(**new)
    if kind == "K-a":
        if n - 1 < 0:
            return None
        coeff = 2 * (n + a + b + 1) * (n + b)
        new = {nfield: n - 1}
        if slot in (1, 2):
            new[f"A{slot}"] = a + 2
        return _as_opoly(coeff), ext._replace(**new)
    raise ValueError(f"unknown ladder kind {kind!r}")


_LADDER_KINDS = ("K0+", "K0-", "J+", "J-", "K+a", "K-a")


def ladder_action(kind: str, params: SystemParams, state, slot: Optional[int] = None) -> LatticeVector:
    """Printed action of one primitive ladder on a basis state.

    The target is labeled by its shifted quantum numbers only; the implied
    parameter shift (e.g. A0 -> A0+2 under K0-) is generally *not* the
    chain value at the shifted numbers — single steps leave the separated
    basis, and only the Xi composites return to it.
    """
    if kind not in _LADDER_KINDS:
        raise ValueError(f"unknown ladder kind {kind!r}")
    if kind.startswith("K0"):
        if slot is not None and slot != 0:
            raise ValueError("radial ladders take no slot")
    elif slot not in (1, 2, 3):
        raise ValueError(f"{kind} needs slot in 1..3")
    ext = _chain_ext(params, QuantumState(*state))
    hit = _step(params, ext, kind, slot)
    if hit is None:
        return LatticeVector.zero()
    coeff, new = hit
    return LatticeVector({QuantumState(new.n0, new.n1, new.n2, new.n3): coeff})


# ---------------------------------------------------------------------------
# Xi composites
# ---------------------------------------------------------------------------

def _xi_steps(params: SystemParams, i: int, sign: str):
    """Primitive steps of Xi_i^sign in application order (first acts first).

    Xi_i^+ raises n_i by q_i (J+ on slot i, q_i times) and then lowers the
    previous level by p_i (K0- for i=1, K-a on slot i-1 otherwise); Xi_i^-
    mirrors it with J-/K0+/K+a.  Each step uses the parameters advanced by
    the steps before it.
    """
    p, q = params.pq(i)
    if sign == "+":
        head = (("J+", i),) * q
        tail = (("K0-", None),) * p if i == 1 else (("K-a", i - 1),) * p
    elif sign == "-":
        head = (("J-", i),) * q
        tail = (("K0+", None),) * p if i == 1 else (("K+a", i - 1),) * p
    else:
        raise ValueError("sign must be '+' or '-'")
    return head + tail


@lru_cache(maxsize=262144)
def _xi_cached(params: SystemParams, i: int, sign: str, state: QuantumState) -> LatticeVector:
    ext = _chain_ext(params, state)
    acc = OmegaPoly.const(1)
    for kind, slot in _xi_steps(params, i, sign):
        hit = _step(params, ext, kind, slot)
        if hit is None:
            return LatticeVector.zero()
        coeff, ext = hit
        acc = acc * coeff
    target = QuantumState(ext.n0, ext.n1, ext.n2, ext.n3)
    # chain consistency: the advanced parameters must equal the re-derived chain
    ch = spectral_chain(params, target)
    if (ext.A0, ext.A1, ext.A2) != (ch.A0, ch.A1, ch.A2):
        raise AssertionError(f"Xi_{i}^{sign} left the chain at {state} -> {target}")
    if ch.E != spectral_chain(params, state).E:
        raise AssertionError(f"Xi_{i}^{sign} changed E at {state}")
    return LatticeVector({target: acc})


def xi_action(i: int, sign: str, params: SystemParams, state) -> LatticeVector:
    """Exact action of the composite Xi_i^sign on a basis state.

    Composes the primitive ladders with per-step parameter advancement; the
    image is a single basis state with the same exact energy (asserted), or
    zero when any intermediate step leaves the lattice.
    """
    if i not in (1, 2, 3):
        raise ValueError("i must be 1, 2 or 3")
    return _xi_cached(params, i, sign, QuantumState(*state))


def xi_operator(params: SystemParams, i: int, sign: str) -> LatticeOperator:
    return LatticeOperator(lambda st: xi_action(i, sign, params, st), f"Xi{i}{sign}")


def xi1_closed_form(sign: str, params: SystemParams, state,
                    variant: str = "printed") -> OmegaPoly:
    """Closed-form coefficient of Xi_1^sign.

    variant="printed" is the typeset Pochhammer product; variant="composed"
    is the form the step-by-step composition actually produces.  The two
    differ by (-2)^{q1} for the raising branch, and additionally in the
    radial factors for the lowering branch.
    """
    state = QuantumState(*state)
    p1, q1 = params.pq1
    ch = spectral_chain(params, state)
    n0, n1 = state.n0, state.n1
    A0, A1, a1 = ch.A0, ch.A1, params.a1
    if sign == "+":
        base = pochhammer(Fraction(n1 + 1), q1) * pochhammer(n1 + A1 + a1 + 1, q1)
        if variant == "printed":
            scale = Fraction(-2) ** p1
        elif variant == "composed":
            scale = Fraction(-2) ** (p1 + q1)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return OmegaPoly.omega(p1, scale * base)
    if sign == "-":
        ang = pochhammer(-n1 - A1, q1) * pochhammer(-n1 - a1, q1)
        if variant == "printed":
            rad = pochhammer(Fraction(n0 + p1), p1) * pochhammer(n0 + A0, p1)
            scale = Fraction(-2) ** p1
        elif variant == "composed":
            fall = Fraction(1)
            for j in range(p1):
                fall *= (n0 + A0 - j)
            rad = pochhammer(Fraction(n0 + 1), p1) * fall
            scale = Fraction(-2) ** (p1 + q1)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return OmegaPoly.omega(p1, scale * ang * rad)
    raise ValueError("sign must be '+' or '-'")


# ---------------------------------------------------------------------------
# symmetry operators L_i^{+-}, P_i^{(+-)}, M_1^-
# ---------------------------------------------------------------------------

def _divisor_A(params: SystemParams, state: QuantumState, i: int) -> Fraction:
    """A_{i-1} evaluated at the (source) state: A0, A1 or A2."""
    ch = spectral_chain(params, state)
    return (ch.A0, ch.A1, ch.A2)[i - 1]


def Lpm_action(i: int, sign: str, params: SystemParams, state) -> LatticeVector:
    """L_i^+ = Xi_i^+ + Xi_i^-;  L_i^- = k_i (Xi_i^+ - Xi_i^-) / A_{i-1}.

    The divisor is evaluated at the source state (positive a's keep it
    nonzero).  Below-lattice Xi images contribute nothing.
    """
    state = QuantumState(*state)
    plus = xi_action(i, "+", params, state)
    minus = xi_action(i, "-", params, state)
    if sign == "+":
        return plus + minus
    if sign == "-":
        A = _divisor_A(params, state, i)
        if A == 0:
            raise DivisorSingular(f"A_{i-1} = 0 at {state}")
        return (plus - minus).scale(params.k(i) / A)
    raise ValueError("sign must be '+' or '-'")


def lpm_operator(params: SystemParams, i: int, sign: str) -> LatticeOperator:
    return LatticeOperator(lambda st: Lpm_action(i, sign, params, st), f"L{i}{sign}")


def P_action(i: int, sign: str, params: SystemParams, state,
             convention: str = "antisymmetric") -> LatticeVector:
    """Diagonal products of Xi's.

    P_i^(+) = Xi- Xi+ + Xi+ Xi-  (both conventions agree).
    P_i^(-) under convention="printed" is the symmetric combination as
    typeset, k_i (Xi+ Xi- + Xi- Xi+) / A_{i-1} — a scalar multiple of
    P_i^(+); under "antisymmetric" it is k_i (Xi+ Xi- - Xi- Xi+) / A_{i-1},
    which is what the bracket [L+, L-] actually closes on.
    """
    state = QuantumState(*state)
    xp = xi_operator(params, i, "+")
    xm = xi_operator(params, i, "-")
    if sign == "+":
        return (xm @ xp + xp @ xm)(state)
    if sign != "-":
        raise ValueError("sign must be '+' or '-'")
    A = _divisor_A(params, state, i)
    if A == 0:
        raise DivisorSingular(f"A_{i-1} = 0 at {state}")
    k = params.k(i)
    if convention == "printed":
        return (xp @ xm + xm @ xp)(state).scale(k / A)
    if convention == "antisymmetric":
        return (xp @ xm - xm @ xp)(state).scale(k / A)
    raise ValueError(f"unknown P convention {convention!r}")


def p_operator(params: SystemParams, i: int, sign: str,
               convention: str = "antisymmetric") -> LatticeOperator:
    return LatticeOperator(lambda st: P_action(i, sign, params, st, convention),
                           f"P{i}{sign}")


def s1_value(params: SystemParams, state) -> OmegaPoly:
    """S_1 = -(H^2 - 4w)(A_1^2 - a_1^2)/16 evaluated on a basis state."""
    ch = spectral_chain(params, QuantumState(*state))
    hh = ch.E * ch.E - OmegaPoly.omega(1, 4)
    return hh * ((ch.A1 ** 2 - params.a1 ** 2) * Fraction(-1, 16))


def M1_minus_action(params: SystemParams, state,
                    convention: str = "xi") -> LatticeVector:
    """Action of the extra symmetry M_1^-.

    convention="xi" (the recorded working form):
        M_1^- = -1/(4 q1) [ Xi_1^+ / (A0 (A0+p1)) + Xi_1^- / (A0 (A0-p1)) ]
                + S_1 / (A0^2 - p1^2),
    all divisors at the source state.  This closes the defining relations
    [L1, M1^-] = L1^-, [H, M1^-] = [L2, M1^-] = [L3, M1^-] = 0 exactly.

    convention="printed" replaces Xi_1^+ -> L_1^-, Xi_1^- -> L_1^+ over the
    same divisors (the typeset form); it does not satisfy the relations and
    is kept for regression against the source.
    """
    state = QuantumState(*state)
    ch = spectral_chain(params, state)
    A0 = ch.A0
    p1, q1 = params.pq1
    if A0 == 0 or A0 == p1 or A0 == -p1:
        raise DivisorSingular(f"A0 in {{0, +-p1}} at {state}")
    if convention == "xi":
        va = xi_action(1, "+", params, state).scale(Fraction(1) / (A0 * (A0 + p1)))
        vb = xi_action(1, "-", params, state).scale(Fraction(1) / (A0 * (A0 - p1)))
    elif convention == "printed":
        va = Lpm_action(1, "-", params, state).scale(Fraction(1) / (A0 * (A0 + p1)))
        vb = Lpm_action(1, "+", params, state).scale(Fraction(1) / (A0 * (A0 - p1)))
    else:
        raise ValueError(f"unknown M1 convention {convention!r}")
    out = (va + vb).scale(Fraction(-1, 4 * q1))
    diag = LatticeVector.basis(state, s1_value(params, state) / (A0 * A0 - p1 * p1))
    return out + diag


def m1_minus_operator(params: SystemParams, convention: str = "xi") -> LatticeOperator:
    return LatticeOperator(lambda st: M1_minus_action(params, st, convention), "M1-")


# ---------------------------------------------------------------------------
# identity suites
# ---------------------------------------------------------------------------

ALPHA_PRINTED = (Fraction(1), Fraction(1, 4), Fraction(0))


def _g_const(params: SystemParams, i: int) -> Fraction:
    """g = k_{i-1} with k_0 := 1 (enters the corrected identity table)."""
    return (Fraction(1), params.k1, params.k2)[i - 1]


def _c_const(params: SystemParams, i: int) -> Fraction:
    """c_i = (k1^2, k2^2/4, 0) (corrected analogue of alpha_i k_i^2)."""
    return (params.k1 ** 2, params.k2 ** 2 / 4, Fraction(0))[i - 1]


IDENTITY_KINDS = ("bracket-minus", "bracket-plus", "bracket-pm", "cubic",
                  "cross-commute")


def check_identity(i: int, which: str, params: SystemParams, state,
                   convention: str = "antisymmetric",
                   variant: str = "printed") -> LatticeVector:
    """Residual (LHS - RHS) of one structure identity applied to a state.

    An empty vector means the identity holds exactly there.  variant
    selects the printed constants or the corrected ones (see module
    docstring); convention selects the P^(-) combination where it enters.
    cross-commute checks [L_j, L_i^s] = 0 for j != i and the full
    [L_j^s, L_i^t] = 0 family for |i-j| > 1, returning the first nonzero
    residual.
    """
    state = QuantumState(*state)
    if which not in IDENTITY_KINDS:
        raise ValueError(f"unknown identity {which!r}")
    k = params.k(i)
    q = Fraction(params.pq(i)[1])
    ksq = k * k
    L = l_operator(params, i)
    Lp = lpm_operator(params, i, "+")
    Lm = lpm_operator(params, i, "-")

    if which == "bracket-minus":
        if variant == "printed":
            al = ALPHA_PRINTED[i - 1]
            R = commutator(L, Lm) + (4 * ksq * q * q) * Lm + (4 * al * ksq * q) * Lp
        elif variant == "corrected":
            g = _g_const(params, i)
            R = commutator(L, Lm) + (4 * ksq * q * q) * Lm + (4 * ksq * q * g) * Lp
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return R(state)

    if which == "bracket-plus":
        if variant == "printed":
            R = (commutator(L, Lp) - (2 * q) * anticommutator(L, Lm)
                 + (4 * ksq * q) * Lp - (4 * ksq * q * q) * Lm
                 - (8 * q ** 3 * ksq) * Lm)
        elif variant == "corrected":
            g = _g_const(params, i)
            c = _c_const(params, i)
            R = (commutator(L, Lp) - (2 * q / g) * anticommutator(L, Lm)
                 - (4 * ksq * q * q) * Lp
                 - (4 * q / g) * (2 * ksq * q * q - c) * Lm)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return R(state)

    if which == "bracket-pm":
        Pm = p_operator(params, i, "-", convention)
        if variant == "printed":
            R = commutator(Lp, Lm) - (2 * q) * (Lm @ Lm) + 2 * Pm
        elif variant == "corrected":
            g = _g_const(params, i)
            Pm = p_operator(params, i, "-", "antisymmetric")
            R = commutator(Lp, Lm) - (2 * q / g) * (Lm @ Lm) + 2 * Pm
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return R(state)

    if which == "cubic":
        Pp = p_operator(params, i, "+")
        T = symmetrized_triple(L, Lm, Lm)
        if variant == "printed":
            al = ALPHA_PRINTED[i - 1]
            Pm = p_operator(params, i, "-", convention)
            R = (T + (2 * ksq * (14 * q * q - 3 * al)) * (Lm @ Lm)
                 + (6 * ksq) * (Lp @ Lp) + (6 * ksq * q) * anticommutator(Lp, Lm)
                 - (12 * ksq) * Pp + (4 * ksq * q) * Pm)
        elif variant == "corrected":
            g = _g_const(params, i)
            c = _c_const(params, i)
            Pm = p_operator(params, i, "-", "antisymmetric")
            R = (T + (28 * ksq * q * q - 6 * c) * (Lm @ Lm)
                 + (6 * ksq * g * g) * (Lp @ Lp)
                 + (6 * ksq * q * g) * anticommutator(Lp, Lm)
                 - (12 * ksq * g * g) * Pp - (4 * ksq * q * g) * Pm)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        return R(state)

    # cross-commute
    for j in (1, 2, 3):
        if j == i:
            continue
        Lj = l_operator(params, j)
        for s in ("+", "-"):
            r = commutator(Lj, lpm_operator(params, i, s))(state)
            if not r.is_zero():
                return r
        if abs(i - j) > 1:
            for s in ("+", "-"):
                for t in ("+", "-"):
                    r = commutator(lpm_operator(params, j, s),
                                   lpm_operator(params, i, t))(state)
                    if not r.is_zero():
                        return r
    return LatticeVector.zero()


# ---------------------------------------------------------------------------
# interior windows and the independence smoke test
# ---------------------------------------------------------------------------

def interior_margins(params: SystemParams):
    """Per-slot minimum n needed so every identity composition stays on-lattice.

    Two lowering excursions per slot bound the worst case (the cubic):
    slot 0 is lowered by Xi_1^+ (p1 each), slot m by Xi_m^- (q_m) and
    Xi_{m+1}^+ (p_{m+1}).
    """
    (p1, q1), (p2, q2), (p3, q3) = params.pq1, params.pq2, params.pq3
    return (2 * p1, 2 * max(q1, p2), 2 * max(q2, p3), 2 * q3)


def is_interior(params: SystemParams, state, margins=None) -> bool:
    m = interior_margins(params) if margins is None else margins
    return all(n >= need for n, need in zip(QuantumState(*state), m))


def identity_states(params: SystemParams, count: int = 20):
    """Deterministic list of interior states: margins plus graded offsets."""
    m = interior_margins(params)
    out = []
    for off in multi_indices(4, 3):
        out.append(QuantumState(*(b + o for b, o in zip(m, off))))
        if len(out) == count:
            break
    return out


def xi_class_check(params: SystemParams, nmax: int = 6):
    """States whose Xi image leaves its exact E-class (expected: none)."""
    bad = []
    rng = range(nmax + 1)
    for st in itertools.product(rng, rng, rng, rng):
        st = QuantumState(*st)
        E0 = spectral_chain(params, st).E
        for i in (1, 2, 3):
            for sign in ("+", "-"):
                for tgt in xi_action(i, sign, params, st).states():
                    if spectral_chain(params, tgt).E != E0:
                        bad.append((st, i, sign, tgt))
    return bad


def window_independence(params: SystemParams, window_nmax: Optional[int] = None):
    """Exact linear-independence smoke test on a truncated state window.

    Materializes {1, H, L1, L1+, L2, L2+, L3, L3+} as sparse matrices over
    the window (images outside the window are truncated — documented
    limitation), flattens each entry per omega-degree into one long exact
    vector, and Gauss-eliminates over Q.  Full rank (8) means no joint
    linear relation on the window.

    The default window grows with the largest ladder step: a window
    narrower than p_i or q_i truncates that L_i^+ to the zero matrix and
    the test becomes vacuous.
    """
    if window_nmax is None:
        steps = [s for pq in (params.pq1, params.pq2, params.pq3) for s in pq]
        window_nmax = max(2, *steps)
    rng = range(window_nmax + 1)
    states = [QuantumState(*t) for t in itertools.product(rng, rng, rng, rng)]
    inside = set(states)
    ops = [("1", identity_operator()),
           ("H", h_operator(params)),
           ("L1", l_operator(params, 1)),
           ("L1+", lpm_operator(params, 1, "+")),
           ("L2", l_operator(params, 2)),
           ("L2+", lpm_operator(params, 2, "+")),
           ("L3", l_operator(params, 3)),
           ("L3+", lpm_operator(params, 3, "+"))]
    vectors = []
    for _, op in ops:
        flat = {}
        for src in states:
            for tgt, poly in op(src).items():
                if tgt not in inside:
                    continue
                for deg, cf in enumerate(poly.coeffs):
                    if cf:
                        flat[(tuple(tgt), tuple(src), deg)] = cf
        vectors.append(flat)
    rank = _sparse_rank(vectors)
    return {"ops": [name for name, _ in ops], "rank": rank,
            "expected": len(ops), "independent": rank == len(ops),
            "window_nmax": window_nmax}


def _sparse_rank(vectors) -> int:
    """Exact rank of sparse Fraction vectors (dict key -> Fraction)."""
    vecs = [dict(v) for v in vectors]
    rank = 0
    while vecs:
        piv = vecs.pop(0)
        if not piv:
            continue
        rank += 1
        key = min(piv)
        pval = piv[key]
        nxt = []
        for v in vecs:
            if key in v:
                f = v[key] / pval
                v = {kk: val for kk in set(v) | set(piv)
                     if (val := v.get(kk, Fraction(0)) - f * piv.get(kk, Fraction(0)))}
            nxt.append(v)
        vecs = nxt
    return rank
