"""Verification suites behind the command-line harness.

Each runner takes normalized knobs (params with numeric omega, state-depth
nmax, point count, seed, tolerance, convention) and returns (cases,
conventions): a list of case records in a fixed enumeration order plus a
record of any convention choices that were made.  A case is a plain dict
{"id", "residual", "pass"}; exact lattice checks report residual 0.0 or the
magnitude of the offending coefficient at omega = 1.

Seeding is strict: the same (seed, knobs) always produces the same points
and test functions, so reports are reproducible byte for byte.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from . import geometry
from .diffops import (build_example_L1plus, build_index_ladder,
                      build_jacobi_ladder, build_radial_ladder, build_tower,
                      coords, example211_scalar)
from .lattice import (DivisorSingular, Lpm_action, M1_minus_action,
                      check_identity, commutator, h_operator, identity_states,
                      l_operator, ladder_action, lpm_operator,
                      m1_minus_operator, window_independence, xi1_closed_form,
                      xi_action)
from .model import (QuantumState, SystemParams, enumerate_states,
                    gauge_for_slot, in_cell, radial_factor, slot_factor,
                    spectral_chain, wavefunction)
from .numcore import Jet, opoly_eval

_TINY = 1e-300


def _case(cid: str, residual: float, tol: float) -> dict:
    return {"id": cid, "residual": float(residual), "pass": bool(residual <= tol)}


def _exact_case(cid: str, vec_residuals) -> dict:
    """Case from exact lattice residuals (pass iff all identically zero)."""
    worst = 0.0
    ok = True
    for vec in vec_residuals:
        if vec.is_zero():
            continue
        ok = False
        for _, poly in vec.items():
            worst = max(worst, abs(float(opoly_eval(poly, Fraction(1)))))
    return {"id": cid, "residual": worst if not ok else 0.0, "pass": ok}


def _rel(diff: float, *scales) -> float:
    return abs(diff) / max(*(abs(s) for s in scales), _TINY)


# ---------------------------------------------------------------------------
# seeded sampling
# ---------------------------------------------------------------------------

def sample_points(params: SystemParams, count: int, seed: int,
                  rlo: float = 0.6, rhi: float = 2.4):
    """Seeded cell points, kept in the middle 60% of each angular range."""
    rng = random.Random(seed)
    half = math.pi / 2
    widths = [half / float(params.k(i)) for i in (1, 2, 3)]
    pts = []
    for _ in range(count):
        r = rng.uniform(rlo, rhi)
        angs = [rng.uniform(0.2, 0.8) * w for w in widths]
        pts.append((r, *angs))
    return pts


def test_functions(count: int, seed: int):
    """Seeded smooth functions on the cell, evaluable as jets.

    Products of a low-degree polynomial in r, a radial Gaussian, and
    sines/cosines of rationally scaled angles; offset so they do not vanish
    on the sampled region.
    """
    rng = random.Random(seed)
    freqs = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)]
    fns = []
    for _ in range(count):
        c0 = rng.uniform(0.5, 1.5)
        c2 = rng.uniform(-0.8, 0.8)
        gam = rng.uniform(0.1, 0.6)
        picks = []
        for axis in (1, 2, 3):
            w = float(rng.choice(freqs))
            picks.append((axis, w, rng.random() < 0.5))
        shift = rng.uniform(1.2, 2.0)

        def f(p, o, c0=c0, c2=c2, gam=gam, picks=picks, shift=shift):
            r, *_ = coords(p, o)
            out = (r * c2 + c0) * (r * r * (-gam)).exp()
            cs = coords(p, o)
            for axis, w, use_sin in picks:
                t = cs[axis] * w
                out = out * (t.sin() if use_sin else t.cos())
            return out + Jet.constant(shift, p, o)

        fns.append(f)
    return fns


# ---------------------------------------------------------------------------
# eigen suite: separable fast path
# ---------------------------------------------------------------------------

class _FactorCache:
    """(value, f', f'') of the four separated factors, cached per slot.

    Factors depend on the state only through their own quantum number and
    the chain values that enter their gauge, so the cache collapses the
    state grid drastically.
    """

    def __init__(self, params: SystemParams, points):
        self.params = params
        self.points = points
        self.cache = {}

    def triple(self, key, evaluator, x):
        got = self.cache.get((key, x))
        if got is None:
            jet = evaluator(x, 2)
            got = (jet.value, jet.derivative((1,)), jet.derivative((2,)))
            self.cache[(key, x)] = got
        return got

    def radial(self, n0, A0, r):
        ev = radial_factor(self.params.omega, n0, A0)
        return self.triple(("r", n0, A0), ev, r)

    def slot(self, slot, gauge, n, theta):
        ev = slot_factor(gauge, n)
        return self.triple((slot, n, gauge.a, gauge.b), ev, theta)


def eigen_residuals(params: SystemParams, state: QuantumState, points,
                    cache: _FactorCache):
    """Max relative residual of HPsi = E Psi and L_i Psi = l_i Psi."""
    ch = spectral_chain(params, state)
    w = float(params.omega)
    k1, k2, k3 = (float(params.k(i)) for i in (1, 2, 3))
    b1, b2, b3, b4 = (float(b) for b in
                      (params.beta1, params.beta2, params.beta3, params.beta4))
    l1, l2, l3 = float(ch.ell1), float(ch.ell2), float(ch.ell3)
    E = float(opoly_eval(ch.E, params.omega))
    g1 = gauge_for_slot(params, ch, 1)
    g2 = gauge_for_slot(params, ch, 2)
    g3 = gauge_for_slot(params, ch, 3)
    kdiff = float(params.k1 ** 2 - params.k2 ** 2)
    worst = 0.0
    for (r, t1, t2, t3) in points:
        v0, d0, dd0 = cache.radial(state.n0, ch.A0, r)
        v1, d1, dd1 = cache.slot(1, g1, state.n1, t1)
        v2, d2, dd2 = cache.slot(2, g2, state.n2, t2)
        v3, d3, dd3 = cache.slot(3, g3, state.n3, t3)
        s1sq = math.sin(k1 * t1) ** 2
        s2sq = math.sin(k2 * t2) ** 2
        # innermost slot
        op3 = dd3 + (b3 / math.cos(k3 * t3) ** 2 + b4 / math.sin(k3 * t3) ** 2) * v3
        worst = max(worst, _rel(op3 - l3 * v3, op3, l3 * v3))
        # middle slot
        mid = dd2 + k2 * (math.cos(k2 * t2) / math.sin(k2 * t2)) * d2 \
            + (b2 / math.cos(k2 * t2) ** 2) * v2
        op23 = mid * v3 + v2 * op3 / s2sq
        worst = max(worst, _rel(op23 - l2 * v2 * v3, op23, l2 * v2 * v3))
        # outer slot (carries both correction terms)
        out = dd1 + 2 * k1 * (math.cos(k1 * t1) / math.sin(k1 * t1)) * d1 \
            + (b1 / math.cos(k1 * t1) ** 2 + kdiff / (4 * s1sq)) * v1
        op123 = out * v2 * v3 + v1 * op23 / s1sq
        worst = max(worst, _rel(op123 - l1 * v1 * v2 * v3, op123, l1 * v1 * v2 * v3))
        # radial level
        rad = dd0 + (3 / r) * d0 + (-w * w * r * r + (1 - k1 * k1) / (r * r)) * v0
        hval = rad * v1 * v2 * v3 + v0 * op123 / (r * r)
        eref = E * v0 * v1 * v2 * v3
        worst = max(worst, _rel(hval - eref, hval, eref))
    return worst


def run_eigen(params, nmax, points_n, seed, tol, convention):
    pts = sample_points(params, points_n, seed)
    cache = _FactorCache(params, pts)
    cases = []
    for st in enumerate_states(nmax):
        res = eigen_residuals(params, st, pts, cache)
        cases.append(_case(f"eigen state={tuple(st)}", res, tol))
    return cases, {}


# ---------------------------------------------------------------------------
# ladders suite: differential forms vs printed lattice actions
# ---------------------------------------------------------------------------

def _lift(univariate, axis):
    return lambda p, o: univariate(p[axis], o).lift(p, axis)


def _ladder_pointwise(op, source_f, target_f, coeff, points, axis):
    """Max relative deviation of (op source)(x) from coeff * target(x)."""
    worst = 0.0
    for p in points:
        got = op.apply(source_f, p, 0).value
        want = coeff * target_f(p, 0).value
        worst = max(worst, _rel(got - want, got, want))
    return worst


def run_ladders(params, nmax, points_n, seed, tol, convention):
    pts = sample_points(params, min(points_n, 20), seed)
    cases = []
    w = params.omega
    for n in range(1, 5):
        st = QuantumState(n, n, n, n)
        ch = spectral_chain(params, st)
        # radial pair
        for kind, dn, dA in (("K0+", +1, -2), ("K0-", -1, +2)):
            vec = ladder_action(kind, params, st)
            ((_, poly),) = vec.items()
            c = float(opoly_eval(poly, w))
            op = build_radial_ladder(params, st.n0, ch.A0, kind[-1])
            src = _lift(radial_factor(w, st.n0, ch.A0), 0)
            tgt = _lift(radial_factor(w, st.n0 + dn, ch.A0 + dA), 0)
            res = _ladder_pointwise(op, src, tgt, c, pts, 0)
            cases.append(_case(f"{kind} n0={n}", res, tol))
        # angular ladders, every slot
        for slot in (1, 2, 3):
            gauge = gauge_for_slot(params, ch, slot)
            nn = st[slot]
            for kind, dn, da in (("J+", +1, 0), ("J-", -1, 0),
                                 ("K+a", +1, -2), ("K-a", -1, +2)):
                vec = ladder_action(kind, params, st, slot=slot)
                ((_, poly),) = vec.items()
                c = float(opoly_eval(poly, w))
                if kind.startswith("J"):
                    op = build_jacobi_ladder(gauge, nn, kind[-1])
                    tgt_gauge = gauge
                else:
                    op = build_index_ladder(gauge, nn, kind[1])
                    tgt_gauge = gauge.shifted(da)
                src = _lift(slot_factor(gauge, nn), slot)
                tgt = _lift(slot_factor(tgt_gauge, nn + dn), slot)
                res = _ladder_pointwise(op, src, tgt, c, pts, slot)
                cases.append(_case(f"{kind} slot{slot} n={nn}", res, tol))
    return cases, {}


# ---------------------------------------------------------------------------
# xi suite: energy invariance, closed forms, E-class / independence evidence
# ---------------------------------------------------------------------------

def run_xi(params, nmax, points_n, seed, tol, convention):
    variant = "printed" if convention == "printed" else "composed"
    cases = []
    rng = range(nmax + 1)
    for i in (1, 2, 3):
        for sign in ("+", "-"):
            bad = 0.0
            checked = 0
            for n0 in rng:
                for n1 in rng:
                    for n2 in rng:
                        for n3 in rng:
                            st = QuantumState(n0, n1, n2, n3)
                            E0 = spectral_chain(params, st).E
                            for tgt in xi_action(i, sign, params, st).states():
                                checked += 1
                                if spectral_chain(params, tgt).E != E0:
                                    d = E0 - spectral_chain(params, tgt).E
                                    bad = max(bad, abs(float(opoly_eval(d, Fraction(1)))))
            cases.append({"id": f"Xi{i}{sign} E-invariance ({checked} images)",
                          "residual": bad, "pass": bad == 0.0})
    # closed form for Xi_1 against the composed coefficient
    worst = 0.0
    ok = True
    ncf = 0
    for st in identity_states(params, 20):
        for sign in ("+", "-"):
            vec = xi_action(1, sign, params, st)
            if vec.is_zero():
                continue
            ((tgt, poly),) = vec.items()
            want = xi1_closed_form(sign, params, st, variant=variant)
            ncf += 1
            if poly != want:
                ok = False
                diff = poly - want
                worst = max(worst, abs(float(opoly_eval(diff, Fraction(1)))))
    cases.append({"id": f"Xi1 closed form [{variant}] ({ncf} states)",
                  "residual": 0.0 if ok else worst, "pass": ok})
    wind = window_independence(params)
    cases.append({"id": f"window independence rank {wind['rank']}/{wind['expected']}",
                  "residual": 0.0 if wind["independent"] else 1.0,
                  "pass": wind["independent"]})
    return cases, {"xi1_closed_form": variant}


# ---------------------------------------------------------------------------
# algebra suite
# ---------------------------------------------------------------------------

def _algebra_conventions(convention: str):
    if convention == "printed":
        return "printed", "printed"
    if convention == "antisymmetric":
        return "printed", "antisymmetric"
    return "corrected", "antisymmetric"      # auto: the recorded working pair


def run_algebra(params, nmax, points_n, seed, tol, convention):
    variant, pminus = _algebra_conventions(convention)
    states = identity_states(params, 20)
    cases = []
    for i in (1, 2, 3):
        for which in ("bracket-minus", "bracket-plus", "bracket-pm", "cubic"):
            residuals = [check_identity(i, which, params, st,
                                        convention=pminus, variant=variant)
                         for st in states]
            cases.append(_exact_case(f"{which} i={i} ({len(states)} states)",
                                     residuals))
    residuals = []
    for i in (1, 2, 3):
        residuals.extend(check_identity(i, "cross-commute", params, st)
                         for st in states)
    cases.append(_exact_case(f"cross-commutation ({3 * len(states)} checks)",
                             residuals))
    return cases, {"identity_table": variant, "p_minus": pminus}


# ---------------------------------------------------------------------------
# m1 suite
# ---------------------------------------------------------------------------

def run_m1(params, nmax, points_n, seed, tol, convention):
    mconv = "printed" if convention == "printed" else "xi"
    M = m1_minus_operator(params, mconv)
    rels = [("[L1,M1-] = L1-",
             lambda st: commutator(l_operator(params, 1), M)(st)
             - Lpm_action(1, "-", params, st)),
            ("[H,M1-] = 0", lambda st: commutator(h_operator(params), M)(st)),
            ("[L2,M1-] = 0", lambda st: commutator(l_operator(params, 2), M)(st)),
            ("[L3,M1-] = 0", lambda st: commutator(l_operator(params, 3), M)(st))]
    states = identity_states(params, 20)
    cases = []
    for label, fn in rels:
        residuals = []
        for st in states:
            try:
                residuals.append(fn(st))
            except DivisorSingular:
                continue
        cases.append(_exact_case(f"{label} ({len(residuals)} states)", residuals))
    return cases, {"m1_form": mconv}


# ---------------------------------------------------------------------------
# curvature suite
# ---------------------------------------------------------------------------

def run_curvature(params, nmax, points_n, seed, tol, convention):
    import numpy as np
    pts = sample_points(params, points_n, seed)
    sym_tol = 1e-10
    worst_R = worst_W = worst_sym = worst_tr = worst_det = worst_flat = 0.0
    equal_k = params.k1 == params.k2
    for p in pts:
        rep = geometry.curvature_at(params, p)
        worst_R = max(worst_R, _rel(rep.R - geometry.scalar_curvature_closed(params, p),
                                    rep.R, geometry.scalar_curvature_closed(params, p), 1.0))
        wref = geometry.weyl_invariant_closed(params, p)
        worst_W = max(worst_W, _rel(rep.W - wref, rep.W, wref, 1.0))
        if equal_k:
            worst_flat = max(worst_flat, rep.W)
        Rm = rep.riemann
        scale = max(float(abs(Rm).max()), 1.0)
        worst_sym = max(
            worst_sym,
            float(abs(Rm + Rm.transpose(1, 0, 2, 3)).max()) / scale,
            float(abs(Rm + Rm.transpose(0, 1, 3, 2)).max()) / scale,
            float(abs(Rm - Rm.transpose(2, 3, 0, 1)).max()) / scale,
            float(abs(Rm + Rm.transpose(0, 2, 3, 1)
                      + Rm.transpose(0, 3, 1, 2)).max()) / scale)
        tr = sum(rep.ginv[a] * rep.weyl[a, :, a, :] for a in range(4))
        wscale = max(float(abs(rep.weyl).max()), 1.0)
        worst_tr = max(worst_tr, float(abs(tr).max()) / wscale)
        det = float(rep.gdiag.prod())
        detref = (p[0] ** 6 * math.sin(float(params.k1) * p[1]) ** 4
                  * math.sin(float(params.k2) * p[2]) ** 2)
        worst_det = max(worst_det, _rel(det - detref, det, detref))
    cases = [_case(f"scalar curvature closed form ({len(pts)} pts)", worst_R, tol),
             _case(f"Weyl invariant closed form ({len(pts)} pts)", worst_W, tol),
             _case("Riemann symmetries + Bianchi", worst_sym, sym_tol),
             _case("Weyl trace-free", worst_tr, sym_tol),
             _case("metric determinant", worst_det, 1e-12)]
    if equal_k:
        cases.append(_case("W = 0 at k1 = k2 (abs)", worst_flat, 1e-10))
    return cases, {}


# ---------------------------------------------------------------------------
# conformal suite
# ---------------------------------------------------------------------------

def run_conformal(params, nmax, points_n, seed, tol, convention):
    pts = sample_points(params, points_n, seed)
    fns = test_functions(10, seed + 1)
    cases = []
    for idx, f in enumerate(fns):
        worst = max(geometry.conformal_identity_check(params, p, f) for p in pts)
        cases.append(_case(f"conformal Hf identity, function {idx}", worst, tol))
    return cases, {}


# ---------------------------------------------------------------------------
# example211 suite
# ---------------------------------------------------------------------------

def run_example211(params, nmax, points_n, seed, tol, convention):
    if (params.k1, params.k2, params.k3) != (2, 1, 1):
        raise ValueError("suite example211 requires k = (2,1,1)")
    variant = "printed" if convention == "printed" else "corrected"
    pts = sample_points(params, points_n, seed)
    states = identity_states(params, 10)
    w = params.omega
    printed_op = build_example_L1plus(params)
    cases = []
    wf_cache = {}

    def wf(st):
        if st not in wf_cache:
            wf_cache[st] = wavefunction(params, st)
        return wf_cache[st]

    for st in states:
        vec = xi_action(1, "+", params, st) + xi_action(1, "-", params, st)
        op = printed_op if variant == "printed" else example211_scalar(params, st, "corrected")
        worst = 0.0
        for p in pts:
            got = op.apply(wf(st), p, 0).value
            want = sum(float(opoly_eval(poly, w)) * wf(tgt)(p, 0).value
                       for tgt, poly in vec.items())
            worst = max(worst, _rel(got - want, got, want))
        cases.append(_case(f"L1+ [{variant}] vs lattice at {tuple(st)}", worst, tol))
    cases.append({"id": f"max derivative order = {printed_op.max_order}",
                  "residual": 0.0 if printed_op.max_order == 5 else 1.0,
                  "pass": printed_op.max_order == 5})
    return cases, {"table": variant}


RUNNERS = {"eigen": run_eigen, "ladders": run_ladders, "xi": run_xi,
           "algebra": run_algebra, "m1": run_m1, "curvature": run_curvature,
           "conformal": run_conformal, "example211": run_example211}

# per-suite canonical knobs: (nmax, points, tolerance)
SUITE_DEFAULTS = {"eigen": (3, 20, 1e-7), "ladders": (4, 20, 1e-8),
                  "xi": (6, 0, 0.0), "algebra": (6, 0, 0.0),
                  "m1": (6, 0, 0.0), "curvature": (3, 50, 1e-9),
                  "conformal": (3, 20, 1e-8), "example211": (6, 20, 1e-7)}
