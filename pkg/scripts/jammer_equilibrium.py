#!/usr/bin/env python3
"""Transmitter-vs-jammer equilibrium demo on bundled waveform sets.

Builds the matched-filter cross-correlation payoff for two transmit and
two jamming waveforms, then solves the zero-sum game under two strategy
geometries of the same radius:

  imag      ||Im z|| <= alpha, real part on the simplex
  centered  ||z - uniform|| <= alpha

and prints values, strategies, duality gaps, and a sampled saddle
certificate for each.

Usage:
    python3 scripts/jammer_equilibrium.py
    python3 scripts/jammer_equilibrium.py --alpha 0.7 --samples 2000
    python3 scripts/jammer_equilibrium.py --json out/eq.json
"""

from __future__ import annotations

import argparse
import pathlib

import numpy as np

from cczsg import (
    GameSpec,
    PlayerSpec,
    StrategySetSpec,
    WaveformSet,
    certify_saddle,
    equilibrium_to_json,
    solve_game,
    txjam_payoff,
    with_certification,
)

# unit-energy length-6 sequences, printed to 3-4 digits
TX1 = np.array([0.408, 0.204 + 0.353j, -0.204 + 0.353j,
                -0.408, -0.204 - 0.353j, 0.204 - 0.353j])
TX2 = np.array([0.408, 0.408j, -0.408, -0.408j,
                0.288 + 0.288j, -0.288 - 0.288j])
JAM1 = np.array([0.353 + 0.204j, -0.2041 + 0.353j, -0.408j,
                 0.204 + 0.353j, -0.204 - 0.353j, -0.408])
JAM2 = np.array([0.2887 - 0.2887j, 0.2041 + 0.3536j, 0.4082j,
                 -0.4082j, -0.4082, 0.353 + 0.204j])

WAVE_TOL = 2e-3  # input rounding dominates the modulus check


def fmt_vec(z: np.ndarray) -> str:
    return "[" + ", ".join(f"{c.real:+.4f}{c.imag:+.4f}j" for c in z) + "]"


def solve_and_report(payoff: np.ndarray, mode: str, alpha: float,
                     samples: int, seed: int):
    n, m = payoff.shape
    g = GameSpec(payoff=payoff,
                 p1=PlayerSpec(StrategySetSpec(n, alpha, mode)),
                 p2=PlayerSpec(StrategySetSpec(m, alpha, mode)))
    e = solve_game(g)
    cert = certify_saddle(g, e, n_samples=samples, seed=seed)
    e = with_certification(e, cert)

    print(f"--- mode={mode} alpha={alpha} ---")
    print(f"value          {e.value:.5f}")
    print(f"value_complex  {e.value_complex:.5f}")
    print(f"duality gap    {e.duality_gap:.2e}")
    print(f"u*             {fmt_vec(e.u_star)}")
    print(f"v*             {fmt_vec(e.v_star)}")
    print(f"certified      {cert.passed} over {cert.samples} samples "
          f"(max_u {cert.max_u_violation:.2e}, max_v {cert.max_v_violation:.2e})")
    print()
    return e


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.5,
                    help="strategy norm radius for both players (default 0.5)")
    ap.add_argument("--samples", type=int, default=1000,
                    help="saddle certificate sample count (default 1000)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", type=pathlib.Path, default=None,
                    help="write the centered-mode equilibrium as JSON here")
    args = ap.parse_args()

    tx = WaveformSet(waveforms=(TX1, TX2), tol=WAVE_TOL)
    jam = WaveformSet(waveforms=(JAM1, JAM2), tol=WAVE_TOL)
    payoff = txjam_payoff(tx, jam)
    print("payoff matrix (rows = tx, cols = jam):")
    for row in payoff:
        print("  " + fmt_vec(row))
    print()

    solve_and_report(payoff, "imag", args.alpha, args.samples, args.seed)
    e = solve_and_report(payoff, "centered", args.alpha, args.samples, args.seed)

    if args.json is not None:
        args.json.parent.mkdir(parents=True, exist_ok=True)
        args.json.write_text(equilibrium_to_json(e))
        print(f"wrote {args.json}")


if __name__ == "__main__":
    main()
