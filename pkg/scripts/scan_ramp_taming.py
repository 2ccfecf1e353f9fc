#!/usr/bin/env python3
"""Oscillation taming by Blackman pulse shaping: final <S_z> deviation from
the adiabatic prediction versus ramp time, linear versus Blackman, for the
two-level (m = -1, lambda0 = 1) and three-level (m = 0, lambda0 = 0.838)
spin-2 cases."""

from pathlib import Path

import numpy as np

from spinberry.cli import main

OUT = Path(__file__).resolve().parent.parent / "results"
T_GRID = ",".join(f"{t:g}" for t in np.arange(5.0, 41.0, 1.0))


def run():
    OUT.mkdir(exist_ok=True)
    cases = [("-1", "1.0", "two_level"), ("0", "0.838", "three_level")]
    for m, lam0, tag in cases:
        for shape in ("blackman", "linear"):
            out = OUT / f"ramp_{tag}_{shape}.csv"
            main(["ramp", "--spin", "2", "--m", m, "--lambda0", lam0,
                  "--shape", shape, "--T", T_GRID, "--out", str(out)])
            print(f"wrote {out}")


if __name__ == "__main__":
    run()
