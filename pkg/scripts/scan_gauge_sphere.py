#!/usr/bin/env python3
"""Gauge-field component A_alpha on the spherical section, for the
dipole-like case (spin 1, m = 1) and the non-linear case (spin 2, m = 0)."""

from pathlib import Path

from spinberry.cli import main

OUT = Path(__file__).resolve().parent.parent / "results"


def run():
    OUT.mkdir(exist_ok=True)
    for spin, m in (("1", "1"), ("2", "0")):
        out = OUT / f"gauge_sphere_spin{spin}_m{m}.csv"
        main(["gauge-sphere", "--spin", spin, "--m", m, "--n", "361",
              "--out", str(out)])
        print(f"wrote {out}")


if __name__ == "__main__":
    run()
