"""Empirical calibration of chance rows at an equilibrium, plus p and
alpha sensitivity sweeps.

Calibration redraws each chance row's real projection as mean + std*X
(moments taken at the equilibrium strategy) and counts scenario
violations per trial.  Rows under an exact CES model sample X from
their own family; moment-ambiguity rows have no law of their own, so
they sample from a caller-chosen nominal family (Gaussian by default)
and are flagged conservative: their empirical rate is expected at or
below the target, not equal to it.

Trial t uses the generator seeded with seed + t; rows are drawn from
it in declaration order (player 1 first), which makes reports
bit-identical across runs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CczsgError, UnsampleableModel
from .games import Equilibrium, GameSpec, PlayerSpec, StrategySetSpec, solve_game
from .moments import GAUSSIAN, Ces, QuantileFamily, _standard_draws, projection_moments
from .reformulate import ChanceRow
from . import conic

SATURATION_TOL = 1e-6


@dataclass(frozen=True)
class CalibrationRow:
    player: str
    index: int
    target: float
    mean_ratio: float
    std_ratio: float
    max_ratio: float
    conservative: bool


@dataclass(frozen=True)
class CalibrationReport:
    scenarios: int
    trials: int
    rows: tuple
    any_p1: tuple
    any_p2: tuple


def _row_family(row: ChanceRow, nominal: Optional[QuantileFamily]):
    if isinstance(row.model, Ces):
        return row.model.family, False
    if nominal is None:
        raise UnsampleableModel(
            "moment-ambiguity row has no sampling law; pass a nominal family"
        )
    return nominal, True


def calibrate(
    g: GameSpec,
    e: Equilibrium,
    scenarios: int = 100,
    trials: int = 10,
    seed: int = 0,
    nominal: Optional[QuantileFamily] = GAUSSIAN,
) -> CalibrationReport:
    """Violation-ratio report over `trials` batches of `scenarios` draws.

    A player-1 scenario violates row i when the drawn Re(B_i u*) lands
    above the bound; player 2 symmetric below.  The any-violated rate
    counts scenarios breaking at least one of the player's rows.
    """
    if scenarios < 1 or trials < 1:
        raise ValueError("scenarios and trials must be positive")
    plans = []
    for pname, player, z in (("p1", g.p1, e.u_star), ("p2", g.p2, e.v_star)):
        for i, row in enumerate(player.chance_rows):
            family, conservative = _row_family(row, nominal)
            mean, var = projection_moments(row.moments, z)
            plans.append((pname, i, row, family, conservative, mean, math.sqrt(var)))

    ratios = np.zeros((len(plans), trials))
    any_rate = {"p1": np.zeros(trials), "p2": np.zeros(trials)}
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        any_hit = {"p1": np.zeros(scenarios, dtype=bool),
                   "p2": np.zeros(scenarios, dtype=bool)}
        for k, (pname, i, row, family, conservative, mean, std) in enumerate(plans):
            if std == 0.0:
                draws = np.full(scenarios, mean)
            else:
                draws = mean + std * _standard_draws(family, rng, scenarios)
            violated = draws > row.rhs if pname == "p1" else draws < row.rhs
            ratios[k, t] = float(violated.mean())
            any_hit[pname] |= violated
        any_rate["p1"][t] = float(any_hit["p1"].mean())
        any_rate["p2"][t] = float(any_hit["p2"].mean())

    def agg(values: np.ndarray) -> tuple:
        spread = float(values.std(ddof=1)) if trials > 1 else 0.0
        return (float(values.mean()), spread, float(values.max()))

    rows = []
    for k, (pname, i, row, family, conservative, mean, std) in enumerate(plans):
        mean_r, std_r, max_r = agg(ratios[k])
        rows.append(CalibrationRow(
            player=pname,
            index=i,
            target=1.0 - row.level,
            mean_ratio=mean_r,
            std_ratio=std_r,
            max_ratio=max_r,
            conservative=conservative,
        ))
    return CalibrationReport(
        scenarios=scenarios,
        trials=trials,
        rows=tuple(rows),
        any_p1=agg(any_rate["p1"]),
        any_p2=agg(any_rate["p2"]),
    )


@dataclass(frozen=True)
class PSweepRow:
    p: float
    value: float
    gap: float
    solve_time: float
    error: str


@dataclass(frozen=True)
class PSweepTable:
    rows: tuple


@dataclass(frozen=True)
class AlphaSweepRow:
    alpha: float
    re_norm_u: float
    re_norm_v: float
    value: float
    error: str


@dataclass(frozen=True)
class AlphaSweepTable:
    rows: tuple
    saturation_index: Optional[int]


def _with_levels(g: GameSpec, p: float, apply_to: str) -> GameSpec:
    if apply_to not in ("both", "p1", "p2"):
        raise ValueError("apply_to must be 'both', 'p1' or 'p2'")

    def upd(player: PlayerSpec, active: bool) -> PlayerSpec:
        if not active or not player.chance_rows:
            return player
        rows = tuple(
            ChanceRow(moments=r.moments, model=r.model, rhs=r.rhs, level=p)
            for r in player.chance_rows
        )
        return PlayerSpec(strategy=player.strategy, det_rows=player.det_rows,
                          chance_rows=rows)

    return GameSpec(payoff=g.payoff,
                    p1=upd(g.p1, apply_to in ("both", "p1")),
                    p2=upd(g.p2, apply_to in ("both", "p2")))


def _with_alpha(g: GameSpec, alpha: float) -> GameSpec:
    def upd(player: PlayerSpec) -> PlayerSpec:
        spec = StrategySetSpec(dim=player.strategy.dim, alpha=alpha,
                               mode=player.strategy.mode)
        return PlayerSpec(strategy=spec, det_rows=player.det_rows,
                          chance_rows=player.chance_rows)

    return GameSpec(payoff=g.payoff, p1=upd(g.p1), p2=upd(g.p2))


def sweep_p(g: GameSpec, grid, apply_to: str = "both",
            tol: float = conic.DEFAULT_SOLVE_TOL) -> PSweepTable:
    """Re-solve the game at each confidence level; failures stay per-row."""
    rows = []
    for p in grid:
        start = time.perf_counter()
        try:
            shifted = _with_levels(g, float(p), apply_to)
            eq = solve_game(shifted, tol=tol)
            rows.append(PSweepRow(p=float(p), value=eq.value, gap=eq.duality_gap,
                                  solve_time=time.perf_counter() - start, error=""))
        except CczsgError as exc:
            rows.append(PSweepRow(p=float(p), value=float("nan"), gap=float("nan"),
                                  solve_time=time.perf_counter() - start,
                                  error=exc.tag))
    return PSweepTable(rows=tuple(rows))


def sweep_alpha(g: GameSpec, grid, p: Optional[float] = None,
                tol: float = conic.DEFAULT_SOLVE_TOL) -> AlphaSweepTable:
    """Re-solve over an ascending grid of norm bounds.

    The saturation index is the first grid position from which every
    later successive value change stays below 1e-6; None when the value
    keeps moving through the end of the grid.
    """
    alphas = [float(a) for a in grid]
    if any(b < a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha grid must be sorted ascending")
    base = g if p is None else _with_levels(g, p, "both")
    rows = []
    for alpha in alphas:
        try:
            eq = solve_game(_with_alpha(base, alpha), tol=tol)
            rows.append(AlphaSweepRow(
                alpha=alpha,
                re_norm_u=float(np.linalg.norm(eq.u_star.real)),
                re_norm_v=float(np.linalg.norm(eq.v_star.real)),
                value=eq.value,
                error="",
            ))
        except CczsgError as exc:
            rows.append(AlphaSweepRow(alpha=alpha, re_norm_u=float("nan"),
                                      re_norm_v=float("nan"), value=float("nan"),
                                      error=exc.tag))

    sat = None
    k = len(rows)
    ok = [
        rows[i - 1].error == "" and rows[i].error == ""
        and abs(rows[i].value - rows[i - 1].value) < SATURATION_TOL
        for i in range(1, k)
    ]
    for i in range(1, k):
        if all(ok[i - 1:]):
            sat = i
            break
    return AlphaSweepTable(rows=tuple(rows), saturation_index=sat)


def calibration_csv(rep: CalibrationReport) -> str:
    lines = ["constraint_id,target,mean_ratio,std_ratio,max_ratio"]
    for row in rep.rows:
        lines.append(
            f"{row.player}_chance_{row.index},{row.target:.12g},"
            f"{row.mean_ratio:.12g},{row.std_ratio:.12g},{row.max_ratio:.12g}"
        )
    return "\n".join(lines) + "\n"


def sweep_p_csv(table: PSweepTable) -> str:
    lines = ["p,value,gap,solve_time,error"]
    for row in table.rows:
        lines.append(f"{row.p:.12g},{row.value:.12g},{row.gap:.12g},"
                     f"{row.solve_time:.6g},{row.error}")
    return "\n".join(lines) + "\n"


def sweep_alpha_csv(table: AlphaSweepTable) -> str:
    lines = ["alpha,re_norm_u,re_norm_v,value,error"]
    for row in table.rows:
        lines.append(f"{row.alpha:.12g},{row.re_norm_u:.12g},"
                     f"{row.re_norm_v:.12g},{row.value:.12g},{row.error}")
    return "\n".join(lines) + "\n"


def calibration_dict(rep: CalibrationReport) -> dict:
    return {
        "scenarios": rep.scenarios,
        "trials": rep.trials,
        "rows": [
            {
                "constraint_id": f"{r.player}_chance_{r.index}",
                "player": r.player,
                "index": r.index,
                "target": r.target,
                "mean_ratio": r.mean_ratio,
                "std_ratio": r.std_ratio,
                "max_ratio": r.max_ratio,
                "conservative": r.conservative,
            }
            for r in rep.rows
        ],
        "any_violated": {
            "p1": {"mean": rep.any_p1[0], "std": rep.any_p1[1], "max": rep.any_p1[2]},
            "p2": {"mean": rep.any_p2[0], "std": rep.any_p2[1], "max": rep.any_p2[2]},
        },
    }


def sweep_p_dict(table: PSweepTable) -> dict:
    return {
        "rows": [
            {"p": r.p, "value": r.value, "gap": r.gap,
             "solve_time": r.solve_time, "error": r.error}
            for r in table.rows
        ]
    }


def sweep_alpha_dict(table: AlphaSweepTable) -> dict:
    return {
        "rows": [
            {"alpha": r.alpha, "re_norm_u": r.re_norm_u, "re_norm_v": r.re_norm_v,
             "value": r.value, "error": r.error}
            for r in table.rows
        ],
        "saturation_index": table.saturation_index,
    }
