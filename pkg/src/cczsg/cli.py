"""Command-line front end: generate instances, solve, certify,
calibrate, and sweep.

Subcommands: solve, certify, calibrate, sweep-p, sweep-alpha, txjam,
gen.  Game input defaults to stdin ("-"), so generation pipes into
solving.  Reports go to --out (CSV when the name ends in .csv, JSON
otherwise); a one-line summary with value, gap, and status goes to
stdout.  Failures print {"error": tag, "message": ...} on stderr and
exit 1; usage problems exit 2 via argparse.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import conic
from .complex_core import embed_vec, herm_inner
from .errors import CczsgError, LengthMismatch, ModulusViolation, SchemaError
from .games import (
    DetRow,
    GameSpec,
    PlayerSpec,
    StrategySetSpec,
    certify_saddle,
    solve_game,
    with_certification,
)
from .moments import (
    CAUCHY,
    GAUSSIAN,
    LAPLACE,
    LOGISTIC,
    Ces,
    ComplexMoments,
    KnownMoments,
    UnknownMoments,
    UnknownSecondMoment,
    student_t,
)
from .montecarlo import (
    calibrate,
    calibration_csv,
    calibration_dict,
    sweep_alpha,
    sweep_alpha_csv,
    sweep_alpha_dict,
    sweep_p,
    sweep_p_csv,
    sweep_p_dict,
)
from .reformulate import ChanceRow, deterministic_constraint, group_margin
from .serialize import (
    decode_cvec,
    encode_equilibrium,
    game_from_json,
    game_to_json,
)

ENV_TOL = "CCZSG_SOLVER_TOL"

MODE_CHOICES = ("total", "imag", "centered")

CERTIFY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class WaveformSet:
    """Constant-modulus waveforms of a common length.

    Every entry must have modulus 1/sqrt(N) within tol; published
    vectors rounded to a few decimals need tol around 1e-3.
    """

    waveforms: tuple
    labels: tuple = ()
    tol: float = 1e-6

    def __post_init__(self):
        waves = tuple(np.asarray(w, dtype=np.complex128) for w in self.waveforms)
        if not waves:
            raise LengthMismatch("waveform set is empty")
        n = waves[0].size
        if any(w.size != n for w in waves):
            raise LengthMismatch("waveforms differ in length")
        if n == 0:
            raise LengthMismatch("waveforms are empty")
        target = 1.0 / math.sqrt(n)
        for k, w in enumerate(waves):
            worst = float(np.max(np.abs(np.abs(w) - target)))
            if worst > self.tol:
                raise ModulusViolation(
                    f"waveform {k}: modulus deviates from 1/sqrt({n}) by {worst:.2e}"
                )
        labels = tuple(self.labels) if self.labels else tuple(
            f"w{k}" for k in range(len(waves))
        )
        if len(labels) != len(waves):
            raise LengthMismatch("label count does not match waveform count")
        object.__setattr__(self, "waveforms", waves)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self) -> int:
        return self.waveforms[0].size


def txjam_payoff(tx: WaveformSet, jam: WaveformSet) -> np.ndarray:
    """Matched-filter payoff at zero lag: A[i, j] = <tx_i, jam_j>."""
    if tx.n_samples != jam.n_samples:
        raise LengthMismatch(
            f"transmitter length {tx.n_samples} vs jammer length {jam.n_samples}"
        )
    a = np.empty((len(tx.waveforms), len(jam.waveforms)), dtype=np.complex128)
    for i, t in enumerate(tx.waveforms):
        for j, w in enumerate(jam.waveforms):
            a[i, j] = herm_inner(t, w)
    return a


@dataclass(frozen=True)
class InstanceRecipe:
    """Sizes and knobs for a random seeded instance.

    l and q count all constraint rows per player, l_c and q_c the
    chance rows among them (the rest are deterministic).
    """

    n: int
    l: int
    l_c: int
    m: int
    q: int
    q_c: int
    model: object
    p: float
    alpha: float
    mode: str
    seed: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("strategy dimensions must be positive")
        if not 0 <= self.l_c <= self.l:
            raise ValueError("need 0 <= l_c <= l")
        if not 0 <= self.q_c <= self.q:
            raise ValueError("need 0 <= q_c <= q")


def _gen_complex(rng: np.random.Generator, shape, lo: float, hi: float) -> np.ndarray:
    return rng.uniform(lo, hi, shape) + 1j * rng.uniform(lo, hi, shape)


def _gen_rows(rng, dim, n_det, n_chance, model, p, sense):
    """Rows whose uniform real strategy has slack exactly 0.1."""
    uniform = np.full(dim, 1.0 / dim, dtype=np.complex128)
    x = embed_vec(uniform)
    det = []
    for _ in range(n_det):
        row = _gen_complex(rng, dim, -1.0, 1.0)
        lhs = float(np.real(row @ uniform))
        det.append(DetRow(row=row, rhs=lhs + 0.1 if sense == "le" else lhs - 0.1))
    chance = []
    for _ in range(n_chance):
        mu = _gen_complex(rng, dim, -1.0, 1.0)
        factor = _gen_complex(rng, (dim, dim), -0.5, 0.5)
        gamma = factor @ factor.conj().T + 0.1 * np.eye(dim)
        moments = ComplexMoments(mu=mu, gamma=gamma, jmat=np.zeros((dim, dim)))
        probe_mu = mu if sense == "le" else -mu
        probe = ChanceRow(
            moments=ComplexMoments(mu=probe_mu, gamma=gamma, jmat=np.zeros((dim, dim))),
            model=model, rhs=0.0, level=p,
        )
        margin0 = group_margin(deterministic_constraint(probe), x)
        rhs = 0.1 - margin0 if sense == "le" else margin0 - 0.1
        chance.append(ChanceRow(moments=moments, model=model, rhs=rhs, level=p))
    return tuple(det), tuple(chance)


def gen_instance(r: InstanceRecipe) -> GameSpec:
    """Seeded random instance; the uniform real strategies are strictly
    feasible with margin 0.1, so the Slater pre-check always passes."""
    rng = np.random.default_rng(r.seed)
    payoff = _gen_complex(rng, (r.n, r.m), -5.0, 5.0)
    det1, chance1 = _gen_rows(rng, r.n, r.l - r.l_c, r.l_c, r.model, r.p, "le")
    det2, chance2 = _gen_rows(rng, r.m, r.q - r.q_c, r.q_c, r.model, r.p, "ge")
    return GameSpec(
        payoff=payoff,
        p1=PlayerSpec(StrategySetSpec(r.n, r.alpha, r.mode), det1, chance1),
        p2=PlayerSpec(StrategySetSpec(r.m, r.alpha, r.mode), det2, chance2),
    )


def parse_model(text: str):
    """Model flag syntax: ces:<family>, ces:t:<nu>, known, unknown-cov,
    unknown-moments:<zeta>."""
    if text == "known":
        return KnownMoments()
    if text == "unknown-cov":
        return UnknownSecondMoment()
    if text.startswith("unknown-moments:"):
        tail = text.split(":", 1)[1]
        try:
            return UnknownMoments(zeta=float(tail))
        except ValueError as exc:
            raise SchemaError(f"bad zeta in model flag {text!r}") from exc
    if text.startswith("ces:"):
        tail = text.split(":", 1)[1]
        simple = {"gaussian": GAUSSIAN, "laplace": LAPLACE,
                  "logistic": LOGISTIC, "cauchy": CAUCHY}
        if tail in simple:
            return Ces(family=simple[tail])
        if tail.startswith("t:"):
            try:
                return Ces(family=student_t(float(tail.split(":", 1)[1])))
            except ValueError as exc:
                raise SchemaError(f"bad nu in model flag {text!r}") from exc
    raise SchemaError(
        f"unknown model {text!r}; expected ces:gaussian|ces:laplace|ces:logistic|"
        f"ces:cauchy|ces:t:<nu>|known|unknown-cov|unknown-moments:<zeta>"
    )


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _resolve_tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return float(args.tol)
    env = os.environ.get(ENV_TOL)
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise SchemaError(f"{ENV_TOL} must be a number, got {env!r}") from exc
    return conic.DEFAULT_SOLVE_TOL


def _load_game(args) -> GameSpec:
    return game_from_json(_read_text(args.infile))


def _parse_grid(text: str, flag: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise SchemaError(f"{flag} must be comma-separated numbers, got {text!r}") from exc


def _emit_report(args, csv_text: str, dict_obj: dict) -> None:
    out = getattr(args, "out", None)
    if out is None or out == "-":
        sys.stdout.write(csv_text)
    elif out.endswith(".csv"):
        _write_text(out, csv_text)
    else:
        _write_text(out, json.dumps(dict_obj, indent=2) + "\n")


def _solve_line(e) -> str:
    return f"value={e.value:.9f} gap={e.duality_gap:.3e} status=optimal"


def _cmd_solve(args) -> int:
    g = _load_game(args)
    e = solve_game(g, tol=_resolve_tol(args))
    if args.out:
        _write_text(args.out, json.dumps(encode_equilibrium(e), indent=2) + "\n")
    print(_solve_line(e))
    return 0


def _cmd_certify(args) -> int:
    g = _load_game(args)
    e = solve_game(g, tol=_resolve_tol(args))
    rep = certify_saddle(g, e, n_samples=args.scenarios, seed=args.seed,
                         tol=CERTIFY_TOL)
    e = with_certification(e, rep)
    if args.out:
        _write_text(args.out, json.dumps(encode_equilibrium(e), indent=2) + "\n")
    print(f"{_solve_line(e)} certified={str(rep.passed).lower()} "
          f"max_u={rep.max_u_violation:.3e} max_v={rep.max_v_violation:.3e}")
    return 0


def _cmd_calibrate(args) -> int:
    g = _load_game(args)
    e = solve_game(g, tol=_resolve_tol(args))
    rep = calibrate(g, e, scenarios=args.scenarios, trials=args.trials,
                    seed=args.seed)
    print(_solve_line(e))
    _emit_report(args, calibration_csv(rep), calibration_dict(rep))
    return 0


def _cmd_sweep_p(args) -> int:
    g = _load_game(args)
    grid = _parse_grid(args.p_grid, "--p-grid")
    table = sweep_p(g, grid, tol=_resolve_tol(args))
    _emit_report(args, sweep_p_csv(table), sweep_p_dict(table))
    return 0


def _cmd_sweep_alpha(args) -> int:
    g = _load_game(args)
    grid = _parse_grid(args.alpha_grid, "--alpha-grid")
    table = sweep_alpha(g, grid, p=args.p, tol=_resolve_tol(args))
    _emit_report(args, sweep_alpha_csv(table), sweep_alpha_dict(table))
    return 0


def _decode_waveform_file(text: str) -> tuple:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid waveform JSON: {exc}") from exc
    if not isinstance(obj, dict) or "tx" not in obj or "jam" not in obj:
        raise SchemaError("waveform file needs keys 'tx' and 'jam'")
    tol = float(obj.get("tol", 1e-6))

    def decode_set(entry, name):
        if not isinstance(entry, list) or not entry:
            raise SchemaError(f"{name}: expected a nonempty list of waveforms")
        waves = tuple(decode_cvec(w, f"{name}[{k}]") for k, w in enumerate(entry))
        return WaveformSet(waveforms=waves, tol=tol)

    return decode_set(obj["tx"], "tx"), decode_set(obj["jam"], "jam")


def _cmd_txjam(args) -> int:
    tx, jam = _decode_waveform_file(_read_text(args.infile))
    payoff = txjam_payoff(tx, jam)
    g = GameSpec(
        payoff=payoff,
        p1=PlayerSpec(StrategySetSpec(len(tx.waveforms), args.alpha, args.mode)),
        p2=PlayerSpec(StrategySetSpec(len(jam.waveforms), args.alpha, args.mode)),
    )
    _write_text(args.out, game_to_json(g))
    return 0


def _cmd_gen(args) -> int:
    recipe = InstanceRecipe(
        n=args.n, l=args.l, l_c=args.lc, m=args.m, q=args.q, q_c=args.qc,
        model=parse_model(args.model), p=args.p, alpha=args.alpha,
        mode=args.mode, seed=args.seed,
    )
    _write_text(args.out, game_to_json(gen_instance(recipe)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cczsg",
        description="Complex-valued zero-sum games under chance constraints",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_io(p, default_in="-"):
        p.add_argument("--in", dest="infile", default=default_in,
                       help="input file ('-' = stdin)")
        p.add_argument("--out", default=None, help="output file")

    def add_tol(p):
        p.add_argument("--tol", type=float, default=None,
                       help=f"solver tolerance (default {ENV_TOL} or 1e-8)")

    p = sub.add_parser("solve", help="solve a game and report the equilibrium")
    add_io(p)
    add_tol(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("certify", help="solve, then sample-certify the saddle")
    add_io(p)
    add_tol(p)
    p.add_argument("--scenarios", type=int, default=1000,
                   help="feasible samples per player")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("calibrate", help="Monte Carlo violation ratios at the equilibrium")
    add_io(p)
    add_tol(p)
    p.add_argument("--scenarios", type=int, default=100, help="draws per trial")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("sweep-p", help="re-solve across confidence levels")
    add_io(p)
    add_tol(p)
    p.add_argument("--p-grid", required=True, help="comma-separated levels")
    p.set_defaults(func=_cmd_sweep_p)

    p = sub.add_parser("sweep-alpha", help="re-solve across norm bounds")
    add_io(p)
    add_tol(p)
    p.add_argument("--alpha-grid", required=True, help="comma-separated bounds, ascending")
    p.add_argument("--p", type=float, default=None,
                   help="override all chance levels before sweeping")
    p.set_defaults(func=_cmd_sweep_alpha)

    p = sub.add_parser("txjam", help="waveform matched-filter game from tx/jam sets")
    add_io(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--mode", choices=MODE_CHOICES, default="imag")
    p.set_defaults(func=_cmd_txjam)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--out", default=None)
    p.add_argument("--n", type=int, required=True, help="player 1 dimension")
    p.add_argument("--m", type=int, required=True, help="player 2 dimension")
    p.add_argument("--l", type=int, default=0, help="player 1 total rows")
    p.add_argument("--lc", type=int, default=0, help="player 1 chance rows (<= l)")
    p.add_argument("--q", type=int, default=0, help="player 2 total rows")
    p.add_argument("--qc", type=int, default=0, help="player 2 chance rows (<= q)")
    p.add_argument("--model", default="ces:gaussian")
    p.add_argument("--p", type=float, default=0.9)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--mode", choices=MODE_CHOICES, default="total")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen)

    return ap


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CczsgError as exc:
        print(json.dumps({"error": exc.tag, "message": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return 1
    except ValueError as exc:
        print(json.dumps({"error": "ValueError", "message": str(exc)}), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
