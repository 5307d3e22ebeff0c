"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

import cvxpy as cp
from scipy.linalg import sqrtm

from cczsg import (
    CAUCHY,
    GAUSSIAN,
    LAPLACE,
    LOGISTIC,
    Ces,
    ChanceRow,
    ComplexMoments,
    DetRow,
    GameSpec,
    KnownMoments,
    PlayerSpec,
    StrategySetSpec,
    UnknownMoments,
    UnknownSecondMoment,
    complex_from_composite,
    composite_from_complex,
    embed_vec,
    safety_factor,
    student_t,
)
from cczsg.reformulate import deterministic_constraint, group_margin

MODEL_FACTORIES = {
    "ces_gaussian": lambda: Ces(GAUSSIAN),
    "ces_laplace": lambda: Ces(LAPLACE),
    "ces_logistic": lambda: Ces(LOGISTIC),
    "ces_cauchy": lambda: Ces(CAUCHY),
    "ces_t4": lambda: Ces(student_t(4.0)),
    "known": KnownMoments,
    "unknown_cov": UnknownSecondMoment,
    "unknown_moments": lambda: UnknownMoments(zeta=0.25),
}


def random_moments(rng: np.random.Generator, dim: int, proper: bool = False,
                   scale: float = 0.6) -> ComplexMoments:
    """Valid random moments built from a random composite factor."""
    mu = rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim)
    if proper:
        fac = rng.uniform(-scale, scale, (dim, dim)) + 1j * rng.uniform(-scale, scale, (dim, dim))
        gamma = fac @ fac.conj().T + 0.05 * np.eye(dim)
        return ComplexMoments(mu=mu, gamma=gamma, jmat=np.zeros((dim, dim)))
    fac = rng.uniform(-scale, scale, (2 * dim, 2 * dim))
    gamma, jmat = complex_from_composite(fac @ fac.T + 0.05 * np.eye(2 * dim))
    return ComplexMoments(mu=mu, gamma=gamma, jmat=jmat)


def feasible_chance_row(rng: np.random.Generator, dim: int, model, level: float,
                        sense: str, margin: float = 0.3,
                        proper: bool = True) -> ChanceRow:
    """Chance row whose uniform real strategy has the given slack."""
    m = random_moments(rng, dim, proper=proper)
    uniform = np.full(dim, 1.0 / dim, dtype=np.complex128)
    probe_mu = m.mu if sense == "le" else -m.mu
    probe = ChanceRow(
        moments=ComplexMoments(mu=probe_mu, gamma=m.gamma, jmat=m.jmat),
        model=model, rhs=0.0, level=level,
    )
    margin0 = group_margin(deterministic_constraint(probe), embed_vec(uniform))
    rhs = margin - margin0 if sense == "le" else margin0 - margin
    return ChanceRow(moments=m, model=model, rhs=rhs, level=level)


def random_game(rng: np.random.Generator, n: int, m: int, model=None,
                level: float = 0.8, n_chance: int = 0, n_det: int = 0,
                alpha: float = 1.0, mode: str = "total") -> GameSpec:
    payoff = rng.uniform(-3, 3, (n, m)) + 1j * rng.uniform(-3, 3, (n, m))

    def rows(dim, sense):
        det = []
        uniform = np.full(dim, 1.0 / dim, dtype=np.complex128)
        for _ in range(n_det):
            row = rng.uniform(-1, 1, dim) + 1j * rng.uniform(-1, 1, dim)
            lhs = float(np.real(row @ uniform))
            det.append(DetRow(row=row, rhs=lhs + 0.3 if sense == "le" else lhs - 0.3))
        chance = [feasible_chance_row(rng, dim, model, level, sense)
                  for _ in range(n_chance)]
        return tuple(det), tuple(chance)

    det1, chance1 = rows(n, "le")
    det2, chance2 = rows(m, "ge")
    return GameSpec(
        payoff=payoff,
        p1=PlayerSpec(StrategySetSpec(n, alpha, mode), det1, chance1),
        p2=PlayerSpec(StrategySetSpec(m, alpha, mode), det2, chance2),
    )


def _oracle_constraints(z, player, sense):
    """cvxpy feasible-set constraints, built without the package's
    factorization or embedding helpers."""
    spec = player.strategy
    d = spec.dim
    cons = [cp.sum(cp.real(z)) == 1, cp.sum(cp.imag(z)) == 0, cp.real(z) >= 0]
    if spec.mode == "total":
        cons.append(cp.norm(z) <= spec.alpha)
    elif spec.mode == "imag":
        if spec.alpha == 0.0:
            cons.append(cp.imag(z) == 0)
        else:
            cons.append(cp.norm(cp.imag(z)) <= spec.alpha)
    else:
        cons.append(cp.norm(z - np.full(d, 1.0 / d)) <= spec.alpha)
    for det in player.det_rows:
        lhs = cp.real(det.row @ z)
        cons.append(lhs <= det.rhs if sense == "le" else lhs >= det.rhs)
    for row in player.chance_rows:
        kp = safety_factor(row.model, row.level)
        model = row.model
        l_bound = getattr(model, "l_bound", None)
        comp = l_bound if l_bound is not None else composite_from_complex(row.moments)
        lhalf = np.real(sqrtm(comp))
        stacked = cp.hstack([cp.real(z), -cp.imag(z)])
        dev = kp * cp.norm(lhalf @ stacked)
        if isinstance(model, UnknownMoments) and model.zeta > 0:
            gam = (complex_from_composite(l_bound)[0] if l_bound is not None
                   else row.moments.gamma)
            ghalf = sqrtm(gam)
            dev = dev + np.sqrt(model.zeta) * cp.norm(ghalf @ z)
        mean = cp.real(row.moments.mu @ z)
        cons.append(mean + dev <= row.rhs if sense == "le" else mean - dev >= row.rhs)
    return cons


def best_response_values(g: GameSpec, e) -> tuple:
    """Independent saddle check: exact best responses against u*, v*."""
    u = cp.Variable(g.p1.strategy.dim, complex=True)
    prob_u = cp.Problem(
        cp.Maximize(cp.real(cp.conj(u) @ (g.payoff @ e.v_star))),
        _oracle_constraints(u, g.p1, "le"),
    )
    prob_u.solve(solver=cp.CLARABEL)
    assert prob_u.status in ("optimal", "optimal_inaccurate"), prob_u.status

    v = cp.Variable(g.p2.strategy.dim, complex=True)
    w = g.payoff.conj().T @ e.u_star
    prob_v = cp.Problem(
        cp.Minimize(cp.real(np.conj(w) @ v)),
        _oracle_constraints(v, g.p2, "ge"),
    )
    prob_v.solve(solver=cp.CLARABEL)
    assert prob_v.status in ("optimal", "optimal_inaccurate"), prob_v.status
    return float(prob_u.value), float(prob_v.value)


def assert_saddle(g: GameSpec, e, tol: float = 2e-6) -> None:
    bru, brv = best_response_values(g, e)
    scale = 1.0 + abs(e.value)
    assert abs(bru - e.value) <= tol * scale, (bru, e.value)
    assert abs(brv - e.value) <= tol * scale, (brv, e.value)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
