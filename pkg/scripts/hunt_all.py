"""Run the randomized worst-margin search for every huntable check.

Writes one JSON file per (check, dimension) and prints the worst margin and
the number of confirmed violations.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from logbm.verify.hunt import HUNTABLE, hunt
from logbm.verify.reports import dump_json


@dataclass
class HuntConfig:
    trials: int = 100
    dims: tuple = (2, 3)
    seed: int = 0
    outdir: str = "hunt"


def run(cfg: HuntConfig):
    out = Path(cfg.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in HUNTABLE:
        for n in cfg.dims:
            if name in ("triangle-logbm", "simplex-lower-bound", "dual-b") and n != 2:
                continue
            res = hunt(name, n, cfg.trials, cfg.seed)
            dump_json(res, str(out / f"{name}_n{n}.json"))
            print(f"{name:22s} n={n}: worst margin {res.min_margin:+.3e}, confirmed {len(res.confirmed)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=HuntConfig.trials)
    ap.add_argument("--seed", type=int, default=HuntConfig.seed)
    ap.add_argument("--outdir", default=HuntConfig.outdir)
    a = ap.parse_args()
    run(HuntConfig(trials=a.trials, seed=a.seed, outdir=a.outdir))


if __name__ == "__main__":
    main()
