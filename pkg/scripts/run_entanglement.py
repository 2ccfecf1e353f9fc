#!/usr/bin/env python3
"""Four-spin entangling cycle at the coupling where the sector phase
difference is -pi, with auto-tuned ramp stretch."""

from pathlib import Path

from spinberry import lambda_max_solve
from spinberry.cli import main

OUT = Path(__file__).resolve().parent.parent / "results"


def run():
    OUT.mkdir(exist_ok=True)
    out = OUT / "entangle_lambda_max.json"
    code = main(["entangle", "--lambda0", f"{lambda_max_solve():.15g}",
                 "--T", "25", "--tune", "auto", "--out", str(out)])
    print(f"wrote {out} (exit {code})")


if __name__ == "__main__":
    run()
