#!/usr/bin/env python3
"""Second-order transverse correction coefficients p2 and C_xy for the
spin-2 levels m = 0 and m = -1 over the coupling window 0.7..1.2."""

from pathlib import Path

from spinberry.cli import main

OUT = Path(__file__).resolve().parent.parent / "results"


def run():
    OUT.mkdir(exist_ok=True)
    for m in ("0", "-1"):
        out = OUT / f"transverse_spin2_m{m.replace('-', 'm')}.csv"
        main(["transverse", "--spin", "2", "--m", m, "--lambda-min", "0.7",
              "--lambda-max", "1.2", "--n", "51", "--out", str(out)])
        print(f"wrote {out}")


if __name__ == "__main__":
    run()
