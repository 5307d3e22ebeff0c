"""Acceptance gate: every release criterion, one printed PASS/FAIL line each.

Criterion 2 is a known, documented failure (see README): the reference
equilibrium value 0.184 is not attained under the imaginary-norm bound at
alpha = 0.5; a centered-norm bound of the same radius reproduces it. The
test asserts the solve itself is sound, reports FAIL, and stays red on
purpose rather than loosening the stated tolerance.
"""

from __future__ import annotations

import time

import numpy as np
import pytest
import scipy.stats as sps
from scipy.optimize import linprog

from cczsg import (
    Ces,
    ChanceRow,
    GAUSSIAN,
    GameSpec,
    InstanceRecipe,
    KnownMoments,
    LAPLACE,
    LOGISTIC,
    PlayerSpec,
    StrategySetSpec,
    UnknownMoments,
    UnknownSecondMoment,
    WaveformSet,
    calibrate,
    dual_norm_certificate,
    embed_vec,
    gen_instance,
    herm_inner,
    embed_mat,
    player_feasibility,
    projection_moments,
    safety_factor,
    solve_game,
    student_t,
    sweep_alpha,
    sweep_p,
    txjam_payoff,
)
from cczsg.reformulate import (
    coupling_from_factor,
    deterministic_constraint,
    group_margin,
    k_matrix,
)

from conftest import random_game, random_moments

TX1 = np.array([0.408, 0.204 + 0.353j, -0.204 + 0.353j,
                -0.408, -0.204 - 0.353j, 0.204 - 0.353j])
TX2 = np.array([0.408, 0.408j, -0.408, -0.408j,
                0.288 + 0.288j, -0.288 - 0.288j])
JAM1 = np.array([0.353 + 0.204j, -0.2041 + 0.353j, -0.408j,
                 0.204 + 0.353j, -0.204 - 0.353j, -0.408])
JAM2 = np.array([0.2887 - 0.2887j, 0.2041 + 0.3536j, 0.4082j,
                 -0.4082j, -0.4082, 0.353 + 0.204j])

PAYOFF_REF = np.array([[0.0833 + 0.0223j, 0.5122 - 0.0122j],
                       [0.1012 + 0.2557j, 0.1500 - 0.2069j]])
U_REF = np.array([0.652 - 0.326j, 0.348 + 0.326j])
V_REF = np.array([0.837 + 0.127j, 0.163 - 0.127j])
VALUE_REF = 0.184

# printed waveforms are rounded to 3-4 digits; loosen the modulus check
WAVE_TOL = 2e-3


def _report(capsys, num: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")


def _reference_payoff() -> np.ndarray:
    tx = WaveformSet(waveforms=(TX1, TX2), tol=WAVE_TOL)
    jam = WaveformSet(waveforms=(JAM1, JAM2), tol=WAVE_TOL)
    return txjam_payoff(tx, jam)


def _lp_game_value(payoff: np.ndarray) -> float:
    n, m = payoff.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-payoff.T, np.ones((m, 1))])
    a_eq = np.zeros((1, n + 1))
    a_eq[0, :n] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    assert res.status == 0
    return -res.fun


def test_criterion_1_waveform_payoff(capsys):
    tx = WaveformSet(waveforms=(TX1, TX2), tol=WAVE_TOL)
    jam = WaveformSet(waveforms=(JAM1, JAM2), tol=WAVE_TOL)
    best = np.inf
    for _ in range(5):
        t0 = time.perf_counter()
        payoff = txjam_payoff(tx, jam)
        best = min(best, time.perf_counter() - t0)
    worst = float(np.max(np.abs(payoff - PAYOFF_REF)))
    ok = worst <= 2e-3 and best < 1e-3
    _report(capsys, 1, ok,
            f"payoff within 2e-3 of reference (worst {worst:.2e}), {best * 1e3:.3f} ms")
    assert worst <= 2e-3
    assert best < 1e-3


def test_criterion_2_reference_equilibrium_imag_bound(capsys):
    payoff = _reference_payoff()
    g = GameSpec(payoff=payoff,
                 p1=PlayerSpec(StrategySetSpec(2, 0.5, "imag")),
                 p2=PlayerSpec(StrategySetSpec(2, 0.5, "imag")))
    t0 = time.perf_counter()
    e = solve_game(g)
    elapsed = time.perf_counter() - t0

    solve_sound = (e.duality_gap <= 1e-6
                   and player_feasibility(g.p1, e.u_star, "le") <= 1e-7
                   and player_feasibility(g.p2, e.v_star, "ge") <= 1e-7
                   and elapsed < 1.0)
    value_err = abs(e.value - VALUE_REF)
    strat_err = max(float(np.max(np.abs(e.u_star - U_REF))),
                    float(np.max(np.abs(e.v_star - V_REF))))
    ok = solve_sound and value_err <= 5e-3 and strat_err <= 2e-2
    _report(capsys, 2, ok,
            f"imag-bound alpha=0.5 gives value {e.value:.5f} "
            f"(reference {VALUE_REF}, err {value_err:.1e} vs 5e-3), "
            f"strategy err {strat_err:.1e}; gap {e.duality_gap:.1e}, {elapsed * 1e3:.0f} ms"
            + ("" if ok else " [documented failure, see README]"))
    assert solve_sound, "solver quality degraded; this criterion must fail on value only"
    assert value_err <= 5e-3, (
        f"reference value {VALUE_REF} not attained under the imaginary-norm "
        f"bound: got {e.value:.5f}. Known discrepancy, kept red on purpose; "
        f"the centered-norm reproduction below is the supported reading."
    )
    assert strat_err <= 2e-2


def test_reference_equilibrium_centered_bound(capsys):
    # supplementary (unnumbered): the reference strategies satisfy a
    # centered-norm bound ||z - uniform|| <= 0.5 and solving under it
    # reproduces value and strategies within the criterion-2 tolerances
    g = GameSpec(payoff=PAYOFF_REF,
                 p1=PlayerSpec(StrategySetSpec(2, 0.5, "centered")),
                 p2=PlayerSpec(StrategySetSpec(2, 0.5, "centered")))
    e = solve_game(g)
    value_err = abs(e.value - VALUE_REF)
    strat_err = max(float(np.max(np.abs(e.u_star - U_REF))),
                    float(np.max(np.abs(e.v_star - V_REF))))
    with capsys.disabled():
        print(f"INFO criterion 2 reproduction: centered alpha=0.5 gives "
              f"value {e.value:.5f} (err {value_err:.1e}), strategy err {strat_err:.1e}")
    assert value_err <= 5e-3
    assert strat_err <= 2e-2
    assert e.duality_gap <= 1e-6


def test_criterion_3_strong_duality_sweep(capsys):
    models = ["ces:gaussian", "ces:laplace", "ces:logistic", "ces:t:4",
              "known", "unknown-cov", "unknown-moments:0.25"]
    sizes = [(10, 2), (10, 5), (30, 2), (30, 5)]
    from cczsg import parse_model
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(50):
        n, lc = sizes[i % 4]
        recipe = InstanceRecipe(n=n, l=lc, l_c=lc, m=n, q=lc, q_c=lc,
                                model=parse_model(models[i % 7]), p=0.85,
                                alpha=1.0, mode="total", seed=1000 + i)
        e = solve_game(gen_instance(recipe))
        rel = abs(e.primal_objective - e.dual_objective) / (1 + abs(e.value))
        worst = max(worst, rel)
        assert rel <= 1e-5, f"instance {i} ({models[i % 7]}, n={n}, l_c={lc}): gap {rel:.2e}"
    elapsed = time.perf_counter() - t0
    ok = elapsed < 120
    _report(capsys, 3, ok,
            f"50 instances across 7 models, worst |P-D|/(1+|v|) = {worst:.2e} "
            f"(limit 1e-5), {elapsed:.1f} s (limit 120 s)")
    assert ok


def test_criterion_4_gaussian_boundary_exactness(capsys):
    rng = np.random.default_rng(404)
    levels = [0.6, 0.8, 0.9, 0.95]
    worst = 0.0
    worst_shift = 0.0
    checked = 0
    for i in range(25):
        for p in levels:
            n = 3
            base = random_game(rng, n, n, model=Ces(GAUSSIAN), n_chance=1, level=p)
            e0 = solve_game(base)
            row0 = base.p1.chance_rows[0]
            mean, var = projection_moments(row0.moments, e0.u_star)
            kp = safety_factor(Ces(GAUSSIAN), p)
            rhs = mean + kp * np.sqrt(var)
            tight = ChanceRow(moments=row0.moments, model=Ces(GAUSSIAN),
                              rhs=rhs, level=p)
            g = GameSpec(payoff=base.payoff,
                         p1=PlayerSpec(base.p1.strategy, base.p1.det_rows, (tight,)),
                         p2=base.p2)
            # Shrinking p1's set while keeping e0.u_star feasible leaves the
            # value unchanged, so e0.u_star is an equilibrium strategy of the
            # tightened game that sits exactly on the row boundary.  The
            # re-solve corroborates the value; the probability is evaluated
            # at that boundary equilibrium strategy.
            e = solve_game(g)
            worst_shift = max(
                worst_shift, abs(e.value - e0.value) / (1 + abs(e0.value)))
            m2, v2 = projection_moments(tight.moments, e0.u_star)
            prob = float(sps.norm.cdf((rhs - m2) / np.sqrt(v2)))
            worst = max(worst, abs(prob - p))
            checked += 1
    ok = worst <= 1e-6 and worst_shift <= 1e-6 and checked == 100
    _report(capsys, 4, ok,
            f"{checked} boundary rows, worst |analytic prob - p| = {worst:.2e} "
            f"(limit 1e-6), value preserved under tightening to {worst_shift:.2e}")
    assert ok


def _activated(rng, model, level):
    n = 3
    g = random_game(rng, n, n, model=model, n_chance=1, level=level)
    g = GameSpec(payoff=g.payoff, p1=g.p1, p2=PlayerSpec(g.p2.strategy))
    e = solve_game(g)
    row = g.p1.chance_rows[0]
    # rhs that makes the reformulated row exactly active at the base optimum
    probe = ChanceRow(moments=row.moments, model=model, rhs=0.0, level=level)
    margin0 = group_margin(deterministic_constraint(probe), embed_vec(e.u_star))
    tight = ChanceRow(moments=row.moments, model=model, rhs=-margin0, level=level)
    g2 = GameSpec(payoff=g.payoff,
                  p1=PlayerSpec(g.p1.strategy, g.p1.det_rows, (tight,)),
                  p2=g.p2)
    return g2, solve_game(g2)


def test_criterion_5_calibration(capsys):
    rng = np.random.default_rng(505)
    scenarios, trials = 10_000, 10
    lines = []
    ok = True
    for p in (0.6, 0.8, 0.95):
        sigma = np.sqrt(p * (1 - p) / (scenarios * trials))
        g, e = _activated(rng, Ces(GAUSSIAN), p)
        rep = calibrate(g, e, scenarios=scenarios, trials=trials, seed=55)
        ratio = rep.rows[0].mean_ratio
        dev = abs(ratio - (1 - p))
        ok = ok and dev <= 3 * sigma
        lines.append(f"gaussian p={p}: ratio {ratio:.4f} vs {1 - p:.2f} "
                     f"(dev {dev / sigma:.2f} sigma)")
        for model in (KnownMoments(), UnknownSecondMoment(), UnknownMoments(zeta=0.2)):
            g, e = _activated(rng, model, p)
            rep = calibrate(g, e, scenarios=scenarios, trials=trials, seed=56)
            r = rep.rows[0].mean_ratio
            ok = ok and r <= (1 - p) + 3 * sigma
            lines.append(f"{type(model).__name__} p={p}: ratio {r:.4f} "
                         f"<= {1 - p:.2f} + 3 sigma")
    _report(capsys, 5, ok, "active-row violation rates at N=10^4, T=10; "
            + "; ".join(lines[:3]) + "; robust rows all conservative")
    assert ok, "\n".join(lines)


def test_criterion_6_monotone_sweeps(capsys):
    from cczsg import parse_model
    recipe = InstanceRecipe(n=6, l=2, l_c=2, m=6, q=2, q_c=2,
                            model=parse_model("ces:gaussian"), p=0.8,
                            alpha=1.0, mode="total", seed=606)
    g = gen_instance(recipe)

    ptable = sweep_p(g, [0.6, 0.7, 0.8, 0.95], apply_to="p1")
    assert all(r.error == "" for r in ptable.rows)
    pvals = [r.value for r in ptable.rows]
    mono_p = all(b <= a + 1e-6 for a, b in zip(pvals, pvals[1:]))

    grid = [0.45, 0.55, 0.7, 0.9, 1.1, 1.4, 1.8]
    atable = sweep_alpha(g, grid)
    assert all(r.error == "" for r in atable.rows)
    sat = atable.saturation_index
    norms = [r.re_norm_u for r in atable.rows]
    avals = [r.value for r in atable.rows]
    mono_norm = sat is not None and all(
        norms[k + 1] >= norms[k] - 1e-6 for k in range(sat))
    flat_after = sat is not None and all(
        abs(avals[k + 1] - avals[k]) < 1e-6 for k in range(sat, len(avals) - 1))

    ok = mono_p and mono_norm and flat_after
    _report(capsys, 6, ok,
            f"p1-sweep non-increasing {pvals[0]:.4f}..{pvals[-1]:.4f}; "
            f"alpha-sweep ||Re u*|| non-decreasing to saturation index {sat}, "
            f"value flat after")
    assert mono_p, pvals
    assert mono_norm, (sat, norms)
    assert flat_after, (sat, avals)


def test_criterion_7_identity_suites(capsys):
    rng = np.random.default_rng(707)
    worst = {"embed": 0.0, "kquad": 0.0, "coupling": 0.0, "dual": 0.0}

    for _ in range(1000):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        a = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        b = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        s = float(rng.standard_normal())
        errs = [
            np.max(np.abs(embed_mat(s * a) - s * embed_mat(a))),
            np.max(np.abs(embed_mat(a @ b) - embed_mat(a) @ embed_mat(b))),
            np.max(np.abs(embed_vec(a @ v) - embed_mat(a) @ embed_vec(v))),
            np.max(np.abs(embed_mat(a.conj().T) - embed_mat(a).T)),
            abs(embed_vec(w) @ embed_vec(a @ v) - np.real(herm_inner(w, a @ v))),
        ]
        worst["embed"] = max(worst["embed"], float(max(errs)))

    for _ in range(1000):
        n = int(rng.integers(1, 5))
        mom = random_moments(rng, n)
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = embed_vec(z)
        quad = float(x @ k_matrix(mom) @ x)
        direct = 0.5 * float(np.real(z.conj() @ mom.gamma @ z) +
                             np.real(z @ mom.jmat @ z))
        worst["kquad"] = max(worst["kquad"],
                             abs(quad - direct) / (1 + abs(direct)))

    for _ in range(1000):
        n = int(rng.integers(1, 5))
        q = rng.standard_normal((2 * n, 2 * n))
        cm = coupling_from_factor(q)
        lam = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lhs = float(embed_vec(lam) @ q @ embed_vec(u))
        rhs = 0.5 * float(np.real(herm_inner(lam, cm.qhat1 @ u) +
                                  herm_inner(lam, cm.qhat2 @ np.conj(u))))
        worst["coupling"] = max(worst["coupling"], abs(lhs - rhs) / (1 + abs(lhs)))

    for _ in range(1000):
        n = int(rng.integers(1, 6))
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        gvec = dual_norm_certificate(z)
        worst["dual"] = max(worst["dual"],
                            abs(np.linalg.norm(gvec) - 1.0),
                            abs(np.real(herm_inner(gvec, z)) - np.linalg.norm(z)))

    ok = (worst["embed"] < 1e-10 and worst["kquad"] < 1e-9
          and worst["coupling"] < 1e-10 and worst["dual"] < 1e-10)
    _report(capsys, 7, ok,
            "1000-case suites; worst errors: embeddings "
            f"{worst['embed']:.1e}, variance quadratic {worst['kquad']:.1e}, "
            f"coupling {worst['coupling']:.1e}, dual norm {worst['dual']:.1e}")
    assert ok, worst


def test_criterion_8_classical_reduction(capsys):
    rng = np.random.default_rng(808)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(2, 7))
        payoff = rng.uniform(-3, 3, (n, m))
        g = GameSpec(payoff=payoff.astype(np.complex128),
                     p1=PlayerSpec(StrategySetSpec(n, 0.0, "imag")),
                     p2=PlayerSpec(StrategySetSpec(m, 0.0, "imag")))
        e = solve_game(g)
        ref = _lp_game_value(payoff)
        worst = max(worst, abs(e.value - ref))
    ok = worst <= 1e-6
    _report(capsys, 8, ok,
            f"20 real payoffs, imag parts pinned to zero: worst |value - LP| = "
            f"{worst:.2e} (limit 1e-6)")
    assert ok
