"""Canonical real SOCP container and the interior-point solver boundary.

A program is a flat real variable vector x, a linear objective, and a
list of named constraint blocks, each stating F x + g in K for K the
zero cone (equalities), the nonnegative orthant, or a second-order cone
(first row is the bound t, the rest the vector inside the norm).

Solving delegates to Clarabel in its native form A x + s = b, s in K via
A = -F, b = g.  Maximization is handled by negating the objective at the
boundary, so duals always follow the min-form convention

    c_eff = sum_blocks F^T y,    dual objective = -sum_blocks y^T g,

with y in the dual cone of each block.  kkt_residuals recomputes
feasibility and the complementarity gap from scratch so solver output is
never trusted blindly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

import clarabel

from .errors import DimensionMismatch, SolverFailure

DEFAULT_SOLVE_TOL = 1e-8

ZERO = "zero"
NONNEG = "nonneg"
SOC = "soc"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True, eq=False)
class ConeBlock:
    name: str
    kind: str
    fmat: np.ndarray
    g: np.ndarray

    @property
    def size(self) -> int:
        return self.g.size


class ConicProgram:
    """Builder-owned program: declare variables, then add constraint blocks."""

    def __init__(self, sense: str = "min", name: str = ""):
        if sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
        self.sense = sense
        self.name = name
        self._offsets: dict[str, slice] = {}
        self._nvar = 0
        self._c: Optional[np.ndarray] = None
        self._blocks: list[ConeBlock] = []

    @property
    def nvar(self) -> int:
        return self._nvar

    @property
    def var_ranges(self) -> dict[str, slice]:
        return dict(self._offsets)

    def add_var(self, name: str, size: int) -> slice:
        if name in self._offsets:
            raise ValueError(f"variable block {name!r} already declared")
        if size < 0:
            raise ValueError("variable block size must be nonnegative")
        sl = slice(self._nvar, self._nvar + size)
        self._offsets[name] = sl
        self._nvar += size
        return sl

    def var_slice(self, name: str) -> slice:
        return self._offsets[name]

    def set_objective(self, c) -> None:
        arr = np.asarray(c, dtype=np.float64).reshape(-1)
        if arr.size != self._nvar:
            raise DimensionMismatch(f"objective length {arr.size}, variables {self._nvar}")
        self._c = arr.copy()

    def objective_vector(self) -> np.ndarray:
        if self._c is None:
            raise ValueError("objective not set")
        return self._c.copy()

    def _add_block(self, kind: str, fmat, g, name: str) -> None:
        fmat = np.atleast_2d(np.asarray(fmat, dtype=np.float64))
        g = np.asarray(g, dtype=np.float64).reshape(-1)
        if fmat.size == 0:
            fmat = fmat.reshape(0, self._nvar)
        if fmat.shape != (g.size, self._nvar):
            raise DimensionMismatch(
                f"block {name!r}: F {fmat.shape} vs g {g.shape} over {self._nvar} variables"
            )
        if any(b.name == name for b in self._blocks):
            raise ValueError(f"constraint block {name!r} already added")
        if kind == SOC and g.size < 2:
            raise ValueError(f"block {name!r}: a second-order cone needs at least 2 rows")
        self._blocks.append(ConeBlock(name=name, kind=kind, fmat=fmat, g=g))

    def add_zero(self, fmat, g, name: str) -> None:
        self._add_block(ZERO, fmat, g, name)

    def add_nonneg(self, fmat, g, name: str) -> None:
        self._add_block(NONNEG, fmat, g, name)

    def add_soc(self, fmat, g, name: str) -> None:
        self._add_block(SOC, fmat, g, name)

    @property
    def blocks(self) -> tuple[ConeBlock, ...]:
        return tuple(self._blocks)


@dataclass(frozen=True)
class ResidualReport:
    primal: float
    dual: float
    gap: float

    @property
    def worst(self) -> float:
        return max(self.primal, self.dual, self.gap)


@dataclass(frozen=True, eq=False)
class ConicSolution:
    x: np.ndarray
    duals: dict
    status: str
    objective: float
    dual_objective: float
    residuals: ResidualReport
    iterations: int
    solve_time: float


def _min_form_objective(p: ConicProgram) -> np.ndarray:
    c = p.objective_vector()
    return -c if p.sense == "max" else c


def kkt_residuals(p: ConicProgram, s: ConicSolution) -> ResidualReport:
    """Recompute primal/dual feasibility and the gap from first principles."""
    x = np.asarray(s.x, dtype=np.float64)
    c_eff = _min_form_objective(p)
    if x.size != c_eff.size:
        raise DimensionMismatch(f"solution length {x.size}, variables {c_eff.size}")

    primal = 0.0
    dual_cone = 0.0
    stat = c_eff.copy()
    comp = float(c_eff @ x)
    for block in p.blocks:
        r = block.fmat @ x + block.g
        y = np.asarray(s.duals.get(block.name, np.zeros(block.size)), dtype=np.float64)
        if block.kind == ZERO:
            if r.size:
                primal = max(primal, float(np.max(np.abs(r))))
        elif block.kind == NONNEG:
            if r.size:
                primal = max(primal, max(0.0, -float(r.min())))
                dual_cone = max(dual_cone, max(0.0, -float(y.min())))
        else:
            primal = max(primal, max(0.0, float(np.linalg.norm(r[1:]) - r[0])))
            dual_cone = max(dual_cone, max(0.0, float(np.linalg.norm(y[1:]) - y[0])))
        stat -= block.fmat.T @ y
        comp += float(y @ block.g)
    dual = max(float(np.max(np.abs(stat))) if stat.size else 0.0, dual_cone)
    gap = abs(comp) / (1.0 + abs(float(c_eff @ x)))
    return ResidualReport(primal=primal, dual=dual, gap=gap)


def solve(p: ConicProgram, tol: float = DEFAULT_SOLVE_TOL) -> ConicSolution:
    """Solve to primal-dual optimality; statuses are reported, not raised.

    The underlying solver runs at tol/10 so the independently recomputed
    residuals land at or below tol on well-posed instances; a claimed
    optimum whose residuals exceed 10*tol (scaled) is demoted to
    numerical_failure.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c_eff = _min_form_objective(p)
    blocks = p.blocks
    active = [b for b in blocks if b.size > 0]

    rows = sum(b.size for b in active)
    if rows == 0:
        raise SolverFailure("program has no constraints")
    a_mat = sparse.csc_matrix(np.vstack([-b.fmat for b in active]))
    b_vec = np.concatenate([b.g for b in active])
    cones = []
    for b in active:
        if b.kind == ZERO:
            cones.append(clarabel.ZeroConeT(b.size))
        elif b.kind == NONNEG:
            cones.append(clarabel.NonnegativeConeT(b.size))
        else:
            cones.append(clarabel.SecondOrderConeT(b.size))

    settings = clarabel.DefaultSettings()
    settings.verbose = False
    inner = max(tol / 10.0, 1e-12)
    settings.tol_feas = inner
    settings.tol_gap_abs = inner
    settings.tol_gap_rel = inner

    pmat = sparse.csc_matrix((p.nvar, p.nvar))
    solver = clarabel.DefaultSolver(pmat, c_eff, a_mat, b_vec, cones, settings)
    raw = solver.solve()

    x = np.asarray(raw.x, dtype=np.float64)
    z = np.asarray(raw.z, dtype=np.float64)
    duals = {}
    at = 0
    for b in blocks:
        if b.size == 0:
            duals[b.name] = np.zeros(0)
            continue
        duals[b.name] = z[at : at + b.size].copy()
        at += b.size

    status_raw = str(raw.status)
    sense_sign = -1.0 if p.sense == "max" else 1.0
    objective = float(p.objective_vector() @ x)
    dual_objective = sense_sign * (-float(b_vec @ z))

    sol = ConicSolution(
        x=x,
        duals=duals,
        status=NUMERICAL_FAILURE,
        objective=objective,
        dual_objective=dual_objective,
        residuals=ResidualReport(np.inf, np.inf, np.inf),
        iterations=int(raw.iterations),
        solve_time=float(raw.solve_time),
    )

    if status_raw == "PrimalInfeasible":
        return _with(sol, status=INFEASIBLE, objective=float("nan"), dual_objective=float("nan"))
    if status_raw == "DualInfeasible":
        return _with(sol, status=UNBOUNDED, objective=float("nan"), dual_objective=float("nan"))
    if status_raw not in ("Solved", "AlmostSolved"):
        return sol

    resid = kkt_residuals(p, sol)
    scale = 1.0 + float(np.max(np.abs(c_eff))) + float(np.max(np.abs(b_vec)))
    status = OPTIMAL if resid.worst <= 10.0 * tol * scale else NUMERICAL_FAILURE
    return _with(sol, status=status, residuals=resid)


def _with(sol: ConicSolution, **kw) -> ConicSolution:
    data = dict(
        x=sol.x,
        duals=sol.duals,
        status=sol.status,
        objective=sol.objective,
        dual_objective=sol.dual_objective,
        residuals=sol.residuals,
        iterations=sol.iterations,
        solve_time=sol.solve_time,
    )
    data.update(kw)
    return ConicSolution(**data)


def program_dump(p: ConicProgram) -> dict:
    """Plain-dict dump with stable field order, for diffing and cross-checks."""
    return {
        "name": p.name,
        "sense": p.sense,
        "nvar": p.nvar,
        "vars": {k: [v.start, v.stop] for k, v in p.var_ranges.items()},
        "c": p.objective_vector().tolist(),
        "blocks": [
            {
                "name": b.name,
                "kind": b.kind,
                "f": b.fmat.tolist(),
                "g": b.g.tolist(),
            }
            for b in p.blocks
        ],
    }


def program_dump_json(p: ConicProgram) -> str:
    return json.dumps(program_dump(p), indent=2)
