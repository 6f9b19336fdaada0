"""Acceptance battery: one test per numbered criterion, run at the stated
tolerances on the default parameter grid.

Three of the numbered claims test the *typeset* closed forms and tables
(criteria 4, 5 and 9).  Those are asserted exactly as stated and currently
FAIL; the failure messages localize the deviation, and the companion
"b"/"c" diagnostics prove the engine itself is sound by checking the
working-convention counterpart of each claim.  See README.md for the
summary of which lines are expected to fail and why.
"""

import math
import time
from fractions import Fraction as F

import pytest

from ttw4d import suites
from ttw4d.cli import DEFAULT_A_GRID, DEFAULT_K_GRID, DEFAULT_SEED
from ttw4d.diffops import build_example_L1plus, example211_scalar
from ttw4d.geometry import curvature_at
from ttw4d.lattice import (
    check_identity,
    commutator,
    h_operator,
    identity_states,
    interior_margins,
    l_operator,
    lpm_operator,
    m1_minus_operator,
    window_independence,
    xi1_closed_form,
    xi_action,
    xi_class_check,
)
from ttw4d.model import (
    QuantumState,
    SystemParams,
    parse_rational,
    spectral_chain,
    wavefunction,
)
from ttw4d.numcore import opoly_eval


def default_grid(omega=F(1)):
    out = []
    for k in DEFAULT_K_GRID:
        for a in DEFAULT_A_GRID:
            out.append(SystemParams(*(parse_rational(x) for x in k),
                                    *(parse_rational(x) for x in a), omega))
    return out


def k211_sets(omega=F(1)):
    return [p for p in default_grid(omega) if (p.k1, p.k2, p.k3) == (2, 1, 1)]


def interior_box(params, nmax):
    """All interior states with every quantum number <= nmax."""
    lo = interior_margins(params)
    out = []
    for n0 in range(lo[0], nmax + 1):
        for n1 in range(lo[1], nmax + 1):
            for n2 in range(lo[2], nmax + 1):
                for n3 in range(lo[3], nmax + 1):
                    out.append(QuantumState(n0, n1, n2, n3))
    return out


def test_criterion_01_eigen_tower():
    """L_i Psi = ell_i Psi and H Psi = E Psi, n_i <= 3, 20 points, 1e-7, < 30 s."""
    t0 = time.perf_counter()
    for p in default_grid():
        cases, _ = suites.run_eigen(p, 3, 20, DEFAULT_SEED, 1e-7, "auto")
        bad = [c for c in cases if not c["pass"]]
        assert not bad, (p.k1, p.k2, p.k3, bad[:3])
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0, f"eigen tower took {elapsed:.1f}s"


def test_criterion_02_ladder_actions():
    """All nine one-step ladders reproduce their lattice actions to 1e-8."""
    for p in default_grid():
        cases, _ = suites.run_ladders(p, 4, 20, DEFAULT_SEED, 1e-8, "auto")
        bad = [c for c in cases if not c["pass"]]
        assert not bad, (p.k1, p.k2, p.k3, bad[:3])


def test_criterion_03_energy_invariance():
    """Xi_i^± preserve E exactly on all states n_j <= 6, every grid set."""
    for p in default_grid():
        assert xi_class_check(p, nmax=6) == [], (p.k1, p.k2, p.k3)


def test_criterion_04_xi1_closed_form_as_printed():
    """Typeset Pochhammer products for Xi1^± vs the composed ladder product,
    exact in Q[w], k = (1,1,1) and (2,1,1), interior states n_j <= 6.

    EXPECTED TO FAIL: the typeset forms differ from the composition of the
    printed one-step actions by sign-and-2 powers — Xi1+ by exactly
    (-2)^(q1), Xi1- by a rearranged Pochhammer normalization.  The
    companion test below shows the composed product itself is exact.
    """
    mismatches = []
    sample = None
    for kk in (("1", "1", "1"), ("2", "1", "1")):
        for p in default_grid():
            if tuple(str(x) for x in (p.k1, p.k2, p.k3)) != kk:
                continue
            for st in interior_box(p, 6):
                for sign in "+-":
                    vec = xi_action(1, sign, p, st)
                    ((_, got),) = vec.items()
                    want = xi1_closed_form(sign, p, st, variant="printed")
                    if got != want:
                        mismatches.append((kk, st, sign))
                        if sample is None:
                            sample = (kk, st, sign, want, got, p.pq1)
    if mismatches:
        kk, st, sign, want, got, (p1, q1) = sample
        pytest.fail(
            f"{len(mismatches)} states where the typeset Xi1 closed form "
            f"disagrees with the composed ladder product; first at k={kk}, "
            f"state={tuple(st)}, sign={sign}: printed {want} vs composed "
            f"{got} (for sign '+' the ratio is exactly (-2)^q1 = "
            f"{(-2) ** q1}; p1/q1 = {p1}/{q1})")


def test_criterion_04b_composed_product_is_exact():
    """Diagnostic: the composed-product closed form matches the lattice action
    coefficient exactly everywhere criterion 4 samples."""
    for kk in (("1", "1", "1"), ("2", "1", "1")):
        for p in default_grid():
            if tuple(str(x) for x in (p.k1, p.k2, p.k3)) != kk:
                continue
            for st in interior_box(p, 6):
                for sign in "+-":
                    ((_, got),) = xi_action(1, sign, p, st).items()
                    assert got == xi1_closed_form(sign, p, st, variant="composed")


def test_criterion_05_bracket_identities_as_printed():
    """Bracket and cubic identities with alpha = (1, 1/4, 0) as typeset, each
    required to hold under at least one recorded P- convention.

    EXPECTED TO FAIL: with the typeset constants only the first bracket at
    i = 1 (and [L+,L-] wherever the chain ratio g_i is 1) closes.  The
    same identities with slot-scaled constants close exactly everywhere —
    see the corrected-variant diagnostic below.
    """
    failures = []
    for p in default_grid():
        states = identity_states(p, 20)
        for which in ("bracket-minus", "bracket-plus", "bracket-pm", "cubic"):
            for i in (1, 2, 3):
                ok = False
                for conv in ("printed", "antisymmetric"):
                    if all(check_identity(i, which, p, st, convention=conv,
                                          variant="printed").is_zero()
                           for st in states):
                        ok = True
                        break
                if not ok:
                    failures.append((str(p.k1), str(p.k2), str(p.k3),
                                     str(p.a1), which, i))
    if failures:
        kinds = sorted({(w, i) for *_, w, i in failures})
        pytest.fail(
            f"{len(failures)} (parameter set, identity, slot) combinations "
            f"fail under every recorded convention with the typeset "
            f"constants; failing (identity, slot) pairs: {kinds}. "
            f"Holding cases are exactly bracket-minus at i=1 and "
            f"bracket-pm (antisymmetric P-) where g_i = 1.")


def test_criterion_05b_cross_commutation():
    """[L_j, L_i^±] = 0 for j != i and all |i-j| > 1 relations, exact."""
    for p in default_grid():
        for st in identity_states(p, 20):
            for i in (1, 2, 3):
                r = check_identity(i, "cross-commute", p, st,
                                   convention="antisymmetric",
                                   variant="corrected")
                assert r.is_zero(), (p.k1, p.k2, p.k3, i, st)


def test_criterion_05c_corrected_constants_close_everywhere():
    """Diagnostic: slot-scaled constants + antisymmetric P- give exactly zero
    for every identity, slot, and parameter set criterion 5 samples."""
    for p in default_grid():
        for st in identity_states(p, 20):
            for which in ("bracket-minus", "bracket-plus", "bracket-pm", "cubic"):
                for i in (1, 2, 3):
                    r = check_identity(i, which, p, st,
                                       convention="antisymmetric",
                                       variant="corrected")
                    assert r.is_zero(), (p.k1, p.k2, p.k3, which, i, st)


def test_criterion_06_fifth_symmetry():
    """[L1, M1-] = L1-, [H, M1-] = [L2, M1-] = [L3, M1-] = 0, exact, with the
    S1 value as printed; k = (2,1,1), interior states n_j <= 6."""
    for p in k211_sets():
        M1 = m1_minus_operator(p, convention="xi")
        rels = [commutator(l_operator(p, 1), M1) - lpm_operator(p, 1, "-"),
                commutator(h_operator(p), M1),
                commutator(l_operator(p, 2), M1),
                commutator(l_operator(p, 3), M1)]
        for st in interior_box(p, 6):
            for rel in rels:
                assert rel(st).is_zero(), (str(p.a1), st)


def test_criterion_07_curvature():
    """R and W against closed forms (1e-9, 50 points), probe R=6/W=12,
    W = 0 whenever k1 = k2, flat isotropic case, symmetries to 1e-10."""
    for p in default_grid():
        cases, _ = suites.run_curvature(p, 3, 50, DEFAULT_SEED, 1e-9, "auto")
        bad = [c for c in cases if not c["pass"]]
        assert not bad, (p.k1, p.k2, p.k3, bad[:3])
    # probe point: r = 1, sin^2(k1 theta1) = 1/2
    p211 = k211_sets()[0]
    rep = curvature_at(p211, (1.0, math.pi / 8, 0.7, 0.8))
    assert rep.R == pytest.approx(6.0, abs=1e-11)
    assert rep.W == pytest.approx(12.0, abs=1e-11)
    for p in default_grid():
        if p.k1 != p.k2:
            continue
        rep = curvature_at(p, (1.3, 0.4 / float(p.k1), 0.6, 0.9))
        assert abs(rep.W) <= 1e-10
        if (p.k1, p.k2, p.k3) == (1, 1, 1):
            assert abs(rep.R) <= 1e-10


def test_criterion_08_conformal_covariance():
    """(lap + V0 - R/6 - W/24) f = H f, 10 functions x 20 points per set, 1e-8."""
    for p in default_grid():
        cases, _ = suites.run_conformal(p, 3, 20, DEFAULT_SEED, 1e-8, "auto")
        bad = [c for c in cases if not c["pass"]]
        assert not bad, (p.k1, p.k2, p.k3, bad[:3])


def test_criterion_09_explicit_operator_as_printed():
    """The transcribed 5th-order raising sum vs the lattice action of
    Xi1+ + Xi1- on basis functions, 1e-7 at 20 points, >= 10 interior states.

    EXPECTED TO FAIL: several typeset coefficient groups disagree with the
    operator the ladder algebra composes; the residual is order 1.  The
    scalar-substituted working table matches the lattice to ~1e-15 (next
    test), which localizes the mismatch to the transcribed terms, and the
    typeset operator also fails to commute with H for the same reason.
    """
    p = k211_sets()[0]
    op = build_example_L1plus(p)
    states = identity_states(p, 10)
    assert len(states) >= 10
    pts = suites.sample_points(p, 20, DEFAULT_SEED)
    worst = (0.0, None)
    for st in states:
        vec = xi_action(1, "+", p, st) + xi_action(1, "-", p, st)
        psi = wavefunction(p, st)
        targets = [(float(opoly_eval(c, p.omega)), wavefunction(p, tgt))
                   for tgt, c in vec.items()]
        for pt in pts:
            got = op.apply(psi, pt, 0).value
            want = sum(c * w.value(pt) for c, w in targets)
            res = abs(got - want) / max(1.0, abs(got), abs(want))
            if res > worst[0]:
                worst = (res, st)
    assert worst[0] <= 1e-7, (
        f"typeset operator deviates from the lattice action of Xi1+ + Xi1- "
        f"with max relative residual {worst[0]:.3g} (state {tuple(worst[1])}); "
        f"the working-table scalar form passes the identical comparison, so "
        f"the defect is in the transcribed coefficients, not the engine")


def test_criterion_09b_max_order_is_five():
    assert build_example_L1plus(k211_sets()[0]).max_order == 5


def test_criterion_09c_working_table_matches_lattice():
    """Diagnostic: the scalar-substituted working table passes criterion 9's
    own comparison at its stated tolerance."""
    p = k211_sets()[0]
    states = identity_states(p, 10)
    pts = suites.sample_points(p, 20, DEFAULT_SEED)
    for st in states:
        op = example211_scalar(p, st, variant="corrected")
        vec = xi_action(1, "+", p, st) + xi_action(1, "-", p, st)
        psi = wavefunction(p, st)
        targets = [(float(opoly_eval(c, p.omega)), wavefunction(p, tgt))
                   for tgt, c in vec.items()]
        for pt in pts:
            got = op.apply(psi, pt, 0).value
            want = sum(c * w.value(pt) for c, w in targets)
            assert abs(got - want) <= 1e-7 * max(1.0, abs(got), abs(want)), st


def test_criterion_10_degeneracy_evidence():
    """k = (2,1,1), nmax = 6: Xi images stay in their exact E-class, and the
    window matrices of {1, H, L1, L1+, L2, L2+, L3, L3+} have no joint
    linear relation over Q."""
    for p in k211_sets():
        assert xi_class_check(p, nmax=6) == []
        out = window_independence(p)
        assert out["independent"], out
        assert out["rank"] == len(out["ops"])
