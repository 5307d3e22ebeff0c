"""Zero-sum games over complex mixed strategies, solved as a primal-dual
SOCP pair.

Player 1 picks u (dim n) to maximize f(u, v) = Re(u^H A v), player 2
picks v (dim m) to minimize it.  A mixed strategy is a complex vector
whose real part is a probability distribution and whose imaginary part
sums to zero, with a norm cap alpha in one of three modes: "total"
bounds ||z||, "imag" bounds ||Im z||, "centered" bounds ||z - 1/dim||.

Each player's set is further cut by deterministic rows (Re(Bu) <= b for
player 1, Re(Dv) >= d for player 2) and chance rows reformulated into
cones.  The game value is the common optimum of two conic programs:

  primal (min): variables v plus the multipliers of player 1's
      constraints; objective sum(lam_det b) + sum(delta b) +
      alpha1 ||beta1|| + Re(rho1); stationarity
      Av - B^H lam_det - sum_i [mu_i^H delta_i + (Qhat1_i^H lam_i +
      Qhat2_i^T conj(lam_i))/2 + Ghat_i^{1/2} eta_i] - beta1 + r1
      - conj(rho1) 1 = 0, with cones ||lam_i|| <= delta_i k_p and
      ||eta_i|| <= delta_i sqrt(zeta).

  dual (max): the mirror over u and player 2's multipliers.

In the real embedding the coupling term collapses: the stationarity
contribution of lam_i is exactly -Q_i^T phi1(lam_i) for the factor Q_i
of the row's K matrix, which is what the builders below assemble.

A Slater margin pre-check (maximize the smallest inequality slack)
guards strong duality before any main solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import conic
from .complex_core import as_cmat, as_cvec, embed_mat, embed_vec, herm_inner, lift_vec
from .errors import (
    DimensionMismatch,
    EmptyStrategySet,
    GapTooLarge,
    SamplerStarvation,
    SlaterViolated,
    SolverFailure,
)
from .moments import ComplexMoments, _psd_sqrt, safety_factor
from .reformulate import (
    DEGENERATE_TOL,
    ChanceRow,
    deterministic_constraint,
    effective_k_and_gamma,
    factor_psd,
    group_margin,
    mean_functional,
)

MODES = ("total", "imag", "centered")

# Strategy feasibility tolerance for returned equilibria.
FEAS_TOL = 1e-7

# Hard relative ceiling on |primal - dual| before the solve is rejected.
GAP_LIMIT = 1e-5

# Minimum strict-feasibility margin demanded by the Slater pre-check.
SLATER_MARGIN = 1e-9

CERTIFY_BUDGET = 100_000


@dataclass(frozen=True)
class StrategySetSpec:
    """Base strategy set: simplex real part, zero-sum imaginary part, norm cap."""

    dim: int
    alpha: float
    mode: str = "total"

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch("strategy dimension must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise ValueError(f"alpha must be finite and nonnegative, got {self.alpha}")
        if self.mode == "total" and self.alpha + 1e-12 < 1.0 / math.sqrt(self.dim):
            raise EmptyStrategySet(
                f"total-norm bound {self.alpha} below the minimum 1/sqrt({self.dim})"
            )


@dataclass(frozen=True, eq=False)
class DetRow:
    """Deterministic linear row Re(row . z) compared against rhs."""

    row: np.ndarray
    rhs: float

    def __post_init__(self):
        object.__setattr__(self, "row", as_cvec(self.row))
        object.__setattr__(self, "rhs", float(self.rhs))


@dataclass(frozen=True, eq=False)
class PlayerSpec:
    strategy: StrategySetSpec
    det_rows: tuple = ()
    chance_rows: tuple = ()

    def __post_init__(self):
        det = tuple(self.det_rows)
        chance = tuple(self.chance_rows)
        d = self.strategy.dim
        for row in det:
            if row.row.size != d:
                raise DimensionMismatch(f"det row dim {row.row.size}, strategy dim {d}")
        for row in chance:
            if row.dim != d:
                raise DimensionMismatch(f"chance row dim {row.dim}, strategy dim {d}")
        object.__setattr__(self, "det_rows", det)
        object.__setattr__(self, "chance_rows", chance)


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Payoff A (n x m) with player 1 rows in <= sense, player 2 in >=."""

    payoff: np.ndarray
    p1: PlayerSpec
    p2: PlayerSpec

    def __post_init__(self):
        a = as_cmat(self.payoff)
        if a.shape != (self.p1.strategy.dim, self.p2.strategy.dim):
            raise DimensionMismatch(
                f"payoff {a.shape} vs strategy dims "
                f"({self.p1.strategy.dim}, {self.p2.strategy.dim})"
            )
        object.__setattr__(self, "payoff", a)


@dataclass(frozen=True)
class FeasibilityReport:
    nonneg_violation: float
    sum_violation: float
    norm_violation: float

    @property
    def max_violation(self) -> float:
        return max(self.nonneg_violation, self.sum_violation, self.norm_violation)

    def feasible(self, tol: float = FEAS_TOL) -> bool:
        return self.max_violation <= tol


@dataclass(frozen=True)
class CertificationReport:
    samples: int
    tol: float
    max_u_violation: float
    max_v_violation: float
    passed: bool


@dataclass(frozen=True, eq=False)
class Equilibrium:
    u_star: np.ndarray
    v_star: np.ndarray
    value: float
    value_complex: complex
    duality_gap: float
    multipliers: dict
    primal_objective: float
    dual_objective: float
    certification: Optional[CertificationReport] = None


def membership(z, s: StrategySetSpec) -> FeasibilityReport:
    """Violations of the base strategy set; all zero means member."""
    zv = np.asarray(z, dtype=np.complex128)
    if zv.shape != (s.dim,):
        raise DimensionMismatch(f"vector shape {zv.shape}, strategy dim {s.dim}")
    nonneg = max(0.0, -float(zv.real.min()))
    total = abs(complex(zv.sum()) - 1.0)
    if s.mode == "total":
        norm = float(np.linalg.norm(zv))
    elif s.mode == "imag":
        norm = float(np.linalg.norm(zv.imag))
    else:
        norm = float(np.linalg.norm(zv - 1.0 / s.dim))
    return FeasibilityReport(
        nonneg_violation=nonneg,
        sum_violation=float(total),
        norm_violation=max(0.0, norm - s.alpha),
    )


def _negate_row(row: ChanceRow) -> ChanceRow:
    """Flip a >= chance row into the unified <= orientation.

    Covariance and pseudo-covariance are invariant under negating the
    row; only the mean and the bound change sign.
    """
    neg = ComplexMoments(mu=-row.moments.mu, gamma=row.moments.gamma, jmat=row.moments.jmat)
    return ChanceRow(moments=neg, model=row.model, rhs=-row.rhs, level=row.level)


def player_feasibility(player: PlayerSpec, z, sense: str) -> float:
    """Largest violation across the base set and all rows (0 = feasible)."""
    zv = np.asarray(z, dtype=np.complex128)
    worst = membership(zv, player.strategy).max_violation
    for det in player.det_rows:
        lhs = float(np.real(det.row @ zv))
        viol = lhs - det.rhs if sense == "le" else det.rhs - lhs
        worst = max(worst, viol)
    x = embed_vec(zv)
    for row in player.chance_rows:
        unified = row if sense == "le" else _negate_row(row)
        worst = max(worst, -group_margin(deterministic_constraint(unified), x))
    return worst


@dataclass(frozen=True, eq=False)
class _RowTerms:
    """Precomputed pieces of one chance row, natural orientation."""

    mu: np.ndarray
    mu_h: np.ndarray
    rhs: float
    kp: float
    q: Optional[np.ndarray]
    ghalf: Optional[np.ndarray]
    sqrt_zeta: float


def _row_terms(row: ChanceRow) -> _RowTerms:
    kp = safety_factor(row.model, row.level)
    k, gamma_hat = effective_k_and_gamma(row)
    q = None
    if kp > DEGENERATE_TOL and float(np.linalg.norm(k)) > DEGENERATE_TOL:
        q = factor_psd(k)
    ghalf = None
    sqrt_zeta = 0.0
    if gamma_hat is not None and row.model.zeta > 0:
        if float(np.linalg.norm(gamma_hat)) > DEGENERATE_TOL:
            ghalf = _psd_sqrt(embed_mat(gamma_hat))
            sqrt_zeta = math.sqrt(row.model.zeta)
    return _RowTerms(
        mu=row.moments.mu,
        mu_h=mean_functional(row.moments.mu),
        rhs=row.rhs,
        kp=kp,
        q=q,
        ghalf=ghalf,
        sqrt_zeta=sqrt_zeta,
    )


def _declare_chance_aux(prog, prefix: str, rows: list) -> dict:
    """Auxiliary slack variables for budget-sharing (mean-ellipsoid) rows."""
    aux = {}
    for i, t in enumerate(rows):
        if t.ghalf is not None:
            size = 2 if t.q is not None else 1
            aux[i] = prog.add_var(f"{prefix}_aux_{i}", size)
    return aux


def _add_strategy_rows(
    prog,
    spec: StrategySetSpec,
    zsl: slice,
    rows: list,
    det_rows: tuple,
    sense: str,
    prefix: str,
    aux: dict,
    margin: Optional[slice] = None,
) -> None:
    """Feasible-set constraints for one player's strategy variable.

    sense "le" means rows read lhs <= rhs, "ge" the opposite.  A margin
    variable, when given, is subtracted from every inequality slack
    (used by the Slater pre-check); equalities are left alone.
    """
    d = spec.dim
    nv = prog.nvar
    re_sl = slice(zsl.start, zsl.start + d)
    im_sl = slice(zsl.start + d, zsl.stop)

    srow = np.zeros((2, nv))
    srow[0, re_sl] = 1.0
    srow[1, im_sl] = 1.0
    prog.add_zero(srow, np.array([-1.0, 0.0]), f"{prefix}_sum")

    pos = np.zeros((d, nv))
    pos[:, re_sl] = np.eye(d)
    if margin is not None:
        pos[:, margin] = -1.0
    prog.add_nonneg(pos, np.zeros(d), f"{prefix}_pos")

    if spec.mode == "imag" and spec.alpha == 0.0:
        imz = np.zeros((d, nv))
        imz[:, im_sl] = np.eye(d)
        prog.add_zero(imz, np.zeros(d), f"{prefix}_imzero")
    else:
        if spec.mode == "imag":
            body = np.zeros((d, nv))
            body[:, im_sl] = np.eye(d)
            gbody = np.zeros(d)
        else:
            body = np.zeros((2 * d, nv))
            body[:, zsl] = np.eye(2 * d)
            gbody = np.zeros(2 * d)
            if spec.mode == "centered":
                gbody[:d] = -1.0 / d
        top = np.zeros((1, nv))
        if margin is not None:
            top[0, margin] = -1.0
        prog.add_soc(np.vstack([top, body]), np.concatenate([[spec.alpha], gbody]), f"{prefix}_norm")

    if det_rows:
        fdet = np.zeros((len(det_rows), nv))
        gdet = np.zeros(len(det_rows))
        for j, det in enumerate(det_rows):
            coeff = mean_functional(det.row)
            if sense == "le":
                fdet[j, zsl] = -coeff
                gdet[j] = det.rhs
            else:
                fdet[j, zsl] = coeff
                gdet[j] = -det.rhs
            if margin is not None:
                fdet[j, margin] = -1.0
        prog.add_nonneg(fdet, gdet, f"{prefix}_det")

    for i, t in enumerate(rows):
        budget = np.zeros(nv)
        if sense == "le":
            budget[zsl] = -t.mu_h
            goff = t.rhs
        else:
            budget[zsl] = t.mu_h
            goff = -t.rhs
        if margin is not None:
            budget[margin] = -1.0

        if t.ghalf is None:
            if t.q is None:
                prog.add_nonneg(budget[None, :], np.array([goff]), f"{prefix}_chance_{i}")
            else:
                body = np.zeros((2 * d, nv))
                body[:, zsl] = t.kp * t.q
                prog.add_soc(
                    np.vstack([budget[None, :], body]),
                    np.concatenate([[goff], np.zeros(2 * d)]),
                    f"{prefix}_chance_{i}",
                )
            continue

        # Mean-ellipsoid row: the variance and mean terms share the budget
        # through slack scalars, exactly mirroring the (lam, eta) pair.
        asl = aux[i]
        cursor = asl.start
        if t.q is not None:
            body = np.zeros((2 * d + 1, nv))
            body[0, cursor] = 1.0
            body[1:, zsl] = t.q
            prog.add_soc(body, np.zeros(2 * d + 1), f"{prefix}_chance_{i}_cov")
            budget[cursor] = -t.kp
            cursor += 1
        body = np.zeros((2 * d + 1, nv))
        body[0, cursor] = 1.0
        body[1:, zsl] = t.ghalf
        prog.add_soc(body, np.zeros(2 * d + 1), f"{prefix}_chance_{i}_mean")
        budget[cursor] = -t.sqrt_zeta
        prog.add_nonneg(budget[None, :], np.array([goff]), f"{prefix}_chance_{i}_budget")


def _strict_margin(player: PlayerSpec, sense: str, tol: float) -> float:
    """Best uniform slack over the player's inequality system."""
    d = player.strategy.dim
    rows = [_row_terms(r) for r in player.chance_rows]
    prog = conic.ConicProgram("max", name="slater")
    zsl = prog.add_var("z", 2 * d)
    msl = prog.add_var("s", 1)
    aux = _declare_chance_aux(prog, "z", rows)
    c = np.zeros(prog.nvar)
    c[msl] = 1.0
    prog.set_objective(c)
    _add_strategy_rows(
        prog, player.strategy, zsl, rows, player.det_rows, sense, "z", aux, margin=msl
    )
    cap = np.zeros((1, prog.nvar))
    cap[0, msl] = -1.0
    prog.add_nonneg(cap, np.array([1.0]), "s_cap")
    sol = conic.solve(prog, tol=tol)
    if sol.status == conic.NUMERICAL_FAILURE:
        # the margin estimate only gates a 1e-9 threshold; retry loose
        sol = conic.solve(prog, tol=100 * tol)
    if sol.status == conic.INFEASIBLE:
        return float("-inf")
    if sol.status != conic.OPTIMAL:
        raise SolverFailure(f"Slater pre-check solve ended with status {sol.status}")
    return float(sol.objective)


def slater_check(g: GameSpec, tol: float = conic.DEFAULT_SOLVE_TOL) -> tuple:
    """Strict-feasibility margins (player 1, player 2); raises when absent."""
    s1 = _strict_margin(g.p1, "le", tol)
    s2 = _strict_margin(g.p2, "ge", tol)
    if not (s1 > SLATER_MARGIN and s2 > SLATER_MARGIN):
        raise SlaterViolated(
            f"strict feasibility margins ({s1:.3e}, {s2:.3e}) not above {SLATER_MARGIN}"
        )
    return s1, s2


def _build_program(g: GameSpec, which: str) -> conic.ConicProgram:
    n = g.p1.strategy.dim
    m = g.p2.strategy.dim

    if which == "primal":
        own_dim, other_dim = m, n
        own, other = g.p2, g.p1
        strat_sense = "ge"
        amat = embed_mat(g.payoff)  # phi1(A v) over v-embedding
        sense = "min"
        zname, tag = "v", "1"
        sgn_lam, sgn_rho = -1.0, -1.0
    else:
        own_dim, other_dim = n, m
        own, other = g.p1, g.p2
        strat_sense = "le"
        amat = embed_mat(g.payoff.conj().T)  # phi1(A^H u) over u-embedding
        sense = "max"
        zname, tag = "u", "2"
        sgn_lam, sgn_rho = 1.0, 1.0

    other_rows = [_row_terms(r) for r in other.chance_rows]
    own_rows = [_row_terms(r) for r in own.chance_rows]
    ospec = other.strategy

    prog = conic.ConicProgram(sense, name=which)
    zsl = prog.add_var(zname, 2 * own_dim)
    lamdet = prog.add_var(f"lam_det{tag}", len(other.det_rows))
    deltas, lams, etas = [], [], []
    for i, t in enumerate(other_rows):
        deltas.append(prog.add_var(f"delta{tag}_{i}", 1))
        lams.append(prog.add_var(f"lam{tag}_{i}", 2 * other_dim) if t.q is not None else None)
        etas.append(prog.add_var(f"eta{tag}_{i}", 2 * other_dim) if t.ghalf is not None else None)
    beta_len = other_dim if ospec.mode == "imag" else 2 * other_dim
    beta = prog.add_var(f"beta{tag}", beta_len)
    tbeta = prog.add_var(f"tbeta{tag}", 1)
    rho = prog.add_var(f"rho{tag}", 2)
    rvar = prog.add_var(f"r{tag}", other_dim)
    aux = _declare_chance_aux(prog, zname, own_rows)
    nv = prog.nvar

    # Objective: multiplier bookkeeping of the opposite player's set.
    # min for the primal, max for the dual; signs mirror accordingly.
    c = np.zeros(nv)
    for j, det in enumerate(other.det_rows):
        c[lamdet.start + j] = det.rhs
    for i, t in enumerate(other_rows):
        c[deltas[i].start] = t.rhs
    c[tbeta.start] = ospec.alpha if which == "primal" else -ospec.alpha
    c[rho.start] = 1.0 if which == "primal" else -1.0
    if ospec.mode == "centered":
        off = (1.0 / other_dim) if which == "primal" else (-1.0 / other_dim)
        c[beta.start : beta.start + other_dim] = off
    prog.set_objective(c)

    # Stationarity over the eliminated player's variable, 2*other_dim rows.
    s = np.zeros((2 * other_dim, nv))
    s[:, zsl] = amat
    for j, det in enumerate(other.det_rows):
        s[:, lamdet.start + j] = -embed_vec(det.row.conj())
    for i, t in enumerate(other_rows):
        s[:, deltas[i].start] = -embed_vec(t.mu.conj())
        if t.q is not None:
            s[:, lams[i]] = sgn_lam * t.q.T
        if t.ghalf is not None:
            s[:, etas[i]] = -t.ghalf.T
    if ospec.mode == "imag":
        s[other_dim:, beta] += sgn_lam * np.eye(other_dim)
    else:
        s[:, beta] += sgn_lam * np.eye(2 * other_dim)
    s[:other_dim, rvar] = -sgn_lam * np.eye(other_dim)
    s[:other_dim, rho.start] = sgn_rho
    s[other_dim:, rho.start + 1] = -sgn_rho
    prog.add_zero(s, np.zeros(2 * other_dim), "stationarity")

    if len(other.det_rows):
        f = np.zeros((len(other.det_rows), nv))
        f[:, lamdet] = np.eye(len(other.det_rows))
        prog.add_nonneg(f, np.zeros(len(other.det_rows)), f"lam_det{tag}_pos")
    if other_rows:
        f = np.zeros((len(other_rows), nv))
        for i, dsl in enumerate(deltas):
            f[i, dsl.start] = 1.0
        prog.add_nonneg(f, np.zeros(len(other_rows)), f"delta{tag}_pos")
    f = np.zeros((other_dim, nv))
    f[:, rvar] = np.eye(other_dim)
    prog.add_nonneg(f, np.zeros(other_dim), f"r{tag}_pos")

    f = np.zeros((beta_len + 1, nv))
    f[0, tbeta] = 1.0
    f[1:, beta] = np.eye(beta_len)
    prog.add_soc(f, np.zeros(beta_len + 1), f"beta{tag}_norm")

    for i, t in enumerate(other_rows):
        if t.q is not None:
            f = np.zeros((2 * other_dim + 1, nv))
            f[0, deltas[i].start] = t.kp
            f[1:, lams[i]] = np.eye(2 * other_dim)
            prog.add_soc(f, np.zeros(2 * other_dim + 1), f"mult{tag}_{i}")
        if t.ghalf is not None:
            f = np.zeros((2 * other_dim + 1, nv))
            f[0, deltas[i].start] = t.sqrt_zeta
            f[1:, etas[i]] = np.eye(2 * other_dim)
            prog.add_soc(f, np.zeros(2 * other_dim + 1), f"mult{tag}_{i}_eta")

    _add_strategy_rows(prog, own.strategy, zsl, own_rows, own.det_rows, strat_sense, zname, aux)
    return prog


def build_primal(g: GameSpec) -> conic.ConicProgram:
    """Min program over (v, player-1 multipliers); optimum is the game value."""
    slater_check(g)
    return _build_program(g, "primal")


def build_dual(g: GameSpec) -> conic.ConicProgram:
    """Max program over (u, player-2 multipliers); optimum is the game value."""
    slater_check(g)
    return _build_program(g, "dual")


def _lift_or_none(x: np.ndarray, sl: Optional[slice], imag_only: bool = False):
    if sl is None:
        return None
    seg = x[sl]
    if imag_only:
        return 1j * seg
    return lift_vec(seg)


def _extract_multipliers(g: GameSpec, which: str, x: np.ndarray, prog) -> dict:
    other = g.p1 if which == "primal" else g.p2
    tag = "1" if which == "primal" else "2"
    rng = prog.var_ranges
    lam = []
    eta = []
    for i in range(len(other.chance_rows)):
        lsl = rng.get(f"lam{tag}_{i}")
        esl = rng.get(f"eta{tag}_{i}")
        dim = other.strategy.dim
        lam.append(lift_vec(x[lsl]) if lsl is not None else np.zeros(dim, dtype=complex))
        eta.append(lift_vec(x[esl]) if esl is not None else None)
    beta_sl = rng[f"beta{tag}"]
    imag_mode = (other.strategy.mode == "imag")
    beta = _lift_or_none(x, beta_sl, imag_only=imag_mode)
    rho_sl = rng[f"rho{tag}"]
    return {
        "lam_det": x[rng[f"lam_det{tag}"]].copy(),
        "delta": np.array([float(x[rng[f"delta{tag}_{i}"].start]) for i in range(len(other.chance_rows))]),
        "lam": lam,
        "eta": eta,
        "beta": beta,
        "rho": complex(x[rho_sl.start], x[rho_sl.start + 1]),
        "r": x[rng[f"r{tag}"]].copy(),
    }


def solve_game(g: GameSpec, tol: float = conic.DEFAULT_SOLVE_TOL) -> Equilibrium:
    """Solve both programs, cross-check the optima, return the equilibrium.

    The value is the midpoint of the two optima; solutions whose gap
    exceeds GAP_LIMIT * (1 + |value|) or whose strategies miss
    feasibility by more than FEAS_TOL are rejected.
    """
    slater_check(g)
    pprog = _build_program(g, "primal")
    dprog = _build_program(g, "dual")
    psol = conic.solve(pprog, tol=tol)
    if psol.status != conic.OPTIMAL:
        raise SolverFailure(f"primal solve ended with status {psol.status}")
    dsol = conic.solve(dprog, tol=tol)
    if dsol.status != conic.OPTIMAL:
        raise SolverFailure(f"dual solve ended with status {dsol.status}")

    value = 0.5 * (psol.objective + dsol.objective)
    gap = abs(psol.objective - dsol.objective)
    if gap > GAP_LIMIT * (1.0 + abs(value)):
        raise GapTooLarge(f"duality gap {gap:.3e} at value {value:.6f}")

    v_star = lift_vec(psol.x[pprog.var_slice("v")])
    u_star = lift_vec(dsol.x[dprog.var_slice("u")])

    for name, z, player, sense in (
        ("u", u_star, g.p1, "le"),
        ("v", v_star, g.p2, "ge"),
    ):
        viol = player_feasibility(player, z, sense)
        if viol > FEAS_TOL:
            raise SolverFailure(f"{name}* infeasible by {viol:.3e} (tolerance {FEAS_TOL})")

    multipliers = {
        "p1": _extract_multipliers(g, "primal", psol.x, pprog),
        "p2": _extract_multipliers(g, "dual", dsol.x, dprog),
    }
    return Equilibrium(
        u_star=u_star,
        v_star=v_star,
        value=value,
        value_complex=herm_inner(u_star, g.payoff @ v_star),
        duality_gap=gap,
        multipliers=multipliers,
        primal_objective=psol.objective,
        dual_objective=dsol.objective,
    )


def _sample_feasible(player: PlayerSpec, sense: str, rng: np.random.Generator,
                     budget: int = CERTIFY_BUDGET) -> np.ndarray:
    """Rejection sampler over the player's full feasible set."""
    spec = player.strategy
    d = spec.dim
    for _ in range(budget):
        theta = rng.uniform()
        re = (1.0 - theta) / d + theta * rng.dirichlet(np.ones(d))
        if spec.mode == "imag" and spec.alpha == 0.0:
            im = np.zeros(d)
        else:
            if spec.mode == "total":
                head = spec.alpha**2 - float(re @ re)
            elif spec.mode == "centered":
                dev = re - 1.0 / d
                head = spec.alpha**2 - float(dev @ dev)
            else:
                head = spec.alpha**2
            if head < 0:
                continue
            im = rng.standard_normal(d)
            im -= im.mean()
            nrm = float(np.linalg.norm(im))
            if nrm > 0:
                im *= rng.uniform() * math.sqrt(head) / nrm
        z = re + 1j * im
        if player_feasibility(player, z, sense) <= 1e-9:
            return z
    raise SamplerStarvation(f"no feasible sample found in {budget} attempts")


def certify_saddle(
    g: GameSpec,
    e: Equilibrium,
    n_samples: int = 1000,
    seed: int = 0,
    tol: float = 1e-6,
) -> CertificationReport:
    """Sample-based saddle check.

    Every feasible u must satisfy Re(u^H A v*) <= value + tol and every
    feasible v must satisfy Re(u*^H A v) >= value - tol; the report
    carries the worst signed violation on each side.
    """
    rng = np.random.default_rng(seed)
    av_star = g.payoff @ e.v_star
    atu_star = g.payoff.conj().T @ e.u_star
    max_u = float("-inf")
    max_v = float("-inf")
    for _ in range(n_samples):
        u = _sample_feasible(g.p1, "le", rng)
        v = _sample_feasible(g.p2, "ge", rng)
        max_u = max(max_u, float(np.real(np.vdot(u, av_star))) - e.value)
        max_v = max(max_v, e.value - float(np.real(np.vdot(v, atu_star))))
    passed = max_u <= tol and max_v <= tol
    return CertificationReport(
        samples=n_samples,
        tol=tol,
        max_u_violation=max_u,
        max_v_violation=max_v,
        passed=passed,
    )


def with_certification(e: Equilibrium, report: CertificationReport) -> Equilibrium:
    return replace(e, certification=report)
