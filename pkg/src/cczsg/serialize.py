"""JSON codecs for game specifications and result reports.

Complex scalars are {"re": x, "im": y} objects everywhere; vectors and
matrices are nested lists of those.  Ambiguity models and constraint
rows are tagged unions on "kind" and "type" respectively.  Decoders
raise SchemaError with a path hint on any malformed input.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .errors import CczsgError, SchemaError
from .games import (
    CertificationReport,
    DetRow,
    Equilibrium,
    GameSpec,
    PlayerSpec,
    StrategySetSpec,
)
from .moments import (
    Ces,
    ComplexMoments,
    KnownMoments,
    QuantileFamily,
    UnknownMoments,
    UnknownSecondMoment,
)
from .reformulate import ChanceRow

FAMILY_TAGS = ("gaussian", "laplace", "logistic", "cauchy", "student_t")


def encode_complex(z) -> dict:
    zc = complex(z)
    return {"re": float(zc.real), "im": float(zc.imag)}


def decode_complex(obj, path: str = "value") -> complex:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise SchemaError(f"{path}: expected an object with keys re, im")
    try:
        return complex(float(obj["re"]), float(obj["im"]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: re/im must be numbers") from exc


def encode_cvec(v) -> list:
    return [encode_complex(z) for z in np.asarray(v, dtype=np.complex128)]


def decode_cvec(obj, path: str = "vector") -> np.ndarray:
    if not isinstance(obj, list):
        raise SchemaError(f"{path}: expected a list")
    return np.array([decode_complex(z, f"{path}[{i}]") for i, z in enumerate(obj)],
                    dtype=np.complex128)


def encode_cmat(a) -> list:
    return [encode_cvec(row) for row in np.asarray(a, dtype=np.complex128)]


def decode_cmat(obj, path: str = "matrix") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{path}: expected a nonempty list of rows")
    rows = [decode_cvec(row, f"{path}[{i}]") for i, row in enumerate(obj)]
    width = rows[0].size
    if any(r.size != width for r in rows):
        raise SchemaError(f"{path}: ragged rows")
    return np.vstack(rows)


def _encode_rmat(a) -> list:
    return [[float(x) for x in row] for row in np.asarray(a, dtype=np.float64)]


def _decode_rmat(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{path}: expected a nonempty list of rows")
    try:
        mat = np.array(obj, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: entries must be numbers") from exc
    if mat.ndim != 2:
        raise SchemaError(f"{path}: expected a matrix")
    return mat


def encode_moments(m: ComplexMoments) -> dict:
    return {
        "mu": encode_cvec(m.mu),
        "gamma": encode_cmat(m.gamma),
        "j": encode_cmat(m.jmat),
    }


def decode_moments(obj, path: str = "moments") -> ComplexMoments:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    for key in ("mu", "gamma", "j"):
        if key not in obj:
            raise SchemaError(f"{path}: missing key {key!r}")
    try:
        return ComplexMoments(
            mu=decode_cvec(obj["mu"], f"{path}.mu"),
            gamma=decode_cmat(obj["gamma"], f"{path}.gamma"),
            jmat=decode_cmat(obj["j"], f"{path}.j"),
        )
    except CczsgError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{path}: {exc}") from exc


def encode_model(model) -> dict:
    if isinstance(model, Ces):
        out = {"kind": "ces", "family": model.family.tag}
        if model.family.nu is not None:
            out["nu"] = float(model.family.nu)
        return out
    if isinstance(model, KnownMoments):
        return {"kind": "known"}
    if isinstance(model, UnknownSecondMoment):
        lb = None if model.l_bound is None else _encode_rmat(model.l_bound)
        return {"kind": "unknown_cov", "l_bound": lb}
    if isinstance(model, UnknownMoments):
        lb = None if model.l_bound is None else _encode_rmat(model.l_bound)
        return {"kind": "unknown_moments", "zeta": float(model.zeta), "l_bound": lb}
    raise SchemaError(f"unknown ambiguity model type {type(model).__name__}")


def decode_model(obj, path: str = "model"):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError(f"{path}: expected an object with a 'kind' tag")
    kind = obj["kind"]
    try:
        if kind == "ces":
            tag = obj.get("family")
            if tag not in FAMILY_TAGS:
                raise SchemaError(f"{path}.family: expected one of {FAMILY_TAGS}")
            nu = obj.get("nu")
            family = QuantileFamily(tag, None if nu is None else float(nu))
            return Ces(family=family)
        if kind == "known":
            return KnownMoments()
        if kind == "unknown_cov":
            lb = obj.get("l_bound")
            return UnknownSecondMoment(
                l_bound=None if lb is None else _decode_rmat(lb, f"{path}.l_bound")
            )
        if kind == "unknown_moments":
            if "zeta" not in obj:
                raise SchemaError(f"{path}: unknown_moments needs 'zeta'")
            lb = obj.get("l_bound")
            return UnknownMoments(
                zeta=float(obj["zeta"]),
                l_bound=None if lb is None else _decode_rmat(lb, f"{path}.l_bound"),
            )
    except CczsgError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"{path}: {exc}") from exc
    raise SchemaError(f"{path}.kind: unknown tag {kind!r}")


def _encode_row(row) -> dict:
    if isinstance(row, DetRow):
        return {"type": "det", "row": encode_cvec(row.row), "rhs": float(row.rhs)}
    return {
        "type": "chance",
        "moments": encode_moments(row.moments),
        "model": encode_model(row.model),
        "rhs": float(row.rhs),
        "level": float(row.level),
    }


def _decode_rows(obj, path: str) -> tuple:
    if not isinstance(obj, list):
        raise SchemaError(f"{path}: expected a list")
    det, chance = [], []
    for i, entry in enumerate(obj):
        here = f"{path}[{i}]"
        if not isinstance(entry, dict) or "type" not in entry:
            raise SchemaError(f"{here}: expected an object with a 'type' tag")
        if entry["type"] == "det":
            for key in ("row", "rhs"):
                if key not in entry:
                    raise SchemaError(f"{here}: missing key {key!r}")
            det.append(DetRow(row=decode_cvec(entry["row"], f"{here}.row"),
                              rhs=float(entry["rhs"])))
        elif entry["type"] == "chance":
            for key in ("moments", "model", "rhs", "level"):
                if key not in entry:
                    raise SchemaError(f"{here}: missing key {key!r}")
            try:
                chance.append(ChanceRow(
                    moments=decode_moments(entry["moments"], f"{here}.moments"),
                    model=decode_model(entry["model"], f"{here}.model"),
                    rhs=float(entry["rhs"]),
                    level=float(entry["level"]),
                ))
            except CczsgError as exc:
                if isinstance(exc, SchemaError):
                    raise
                raise SchemaError(f"{here}: {exc}") from exc
        else:
            raise SchemaError(f"{here}.type: unknown tag {entry['type']!r}")
    return tuple(det), tuple(chance)


def _encode_player(p: PlayerSpec) -> dict:
    rows = [_encode_row(r) for r in p.det_rows] + [_encode_row(r) for r in p.chance_rows]
    return {
        "dim": p.strategy.dim,
        "alpha": float(p.strategy.alpha),
        "mode": p.strategy.mode,
        "rows": rows,
    }


def _decode_player(obj, path: str) -> PlayerSpec:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    for key in ("dim", "alpha", "mode"):
        if key not in obj:
            raise SchemaError(f"{path}: missing key {key!r}")
    det, chance = _decode_rows(obj.get("rows", []), f"{path}.rows")
    try:
        spec = StrategySetSpec(dim=int(obj["dim"]), alpha=float(obj["alpha"]),
                               mode=str(obj["mode"]))
        return PlayerSpec(strategy=spec, det_rows=det, chance_rows=chance)
    except SchemaError:
        raise
    except (CczsgError, ValueError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def encode_game(g: GameSpec) -> dict:
    return {
        "payoff": encode_cmat(g.payoff),
        "p1": _encode_player(g.p1),
        "p2": _encode_player(g.p2),
    }


def decode_game(obj) -> GameSpec:
    if not isinstance(obj, dict):
        raise SchemaError("game: expected an object")
    for key in ("payoff", "p1", "p2"):
        if key not in obj:
            raise SchemaError(f"game: missing key {key!r}")
    try:
        return GameSpec(
            payoff=decode_cmat(obj["payoff"], "game.payoff"),
            p1=_decode_player(obj["p1"], "game.p1"),
            p2=_decode_player(obj["p2"], "game.p2"),
        )
    except SchemaError:
        raise
    except CczsgError as exc:
        raise SchemaError(f"game: {exc}") from exc


def game_to_json(g: GameSpec) -> str:
    return json.dumps(encode_game(g), indent=2)


def game_from_json(text: str) -> GameSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return decode_game(obj)


def _encode_multipliers(m: dict) -> dict:
    return {
        "lam_det": [float(x) for x in m["lam_det"]],
        "delta": [float(x) for x in m["delta"]],
        "lam": [encode_cvec(v) for v in m["lam"]],
        "eta": [None if v is None else encode_cvec(v) for v in m["eta"]],
        "beta": encode_cvec(m["beta"]),
        "rho": encode_complex(m["rho"]),
        "r": [float(x) for x in m["r"]],
    }


def encode_certification(rep: Optional[CertificationReport]):
    if rep is None:
        return None
    return {
        "samples": rep.samples,
        "tol": rep.tol,
        "max_u_violation": rep.max_u_violation,
        "max_v_violation": rep.max_v_violation,
        "passed": rep.passed,
    }


def encode_equilibrium(e: Equilibrium) -> dict:
    return {
        "value": float(e.value),
        "value_complex": encode_complex(e.value_complex),
        "duality_gap": float(e.duality_gap),
        "u_star": encode_cvec(e.u_star),
        "v_star": encode_cvec(e.v_star),
        "primal_objective": float(e.primal_objective),
        "dual_objective": float(e.dual_objective),
        "multipliers": {
            "p1": _encode_multipliers(e.multipliers["p1"]),
            "p2": _encode_multipliers(e.multipliers["p2"]),
        },
        "certification": encode_certification(e.certification),
    }


def equilibrium_to_json(e: Equilibrium) -> str:
    return json.dumps(encode_equilibrium(e), indent=2)
