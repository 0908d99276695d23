"""Does moving rank m to rank k by diagonal changes always take exactly |m - k| changes?

Exhaustive for n <= 3, sampled above. Prints counts and the first few
counterexamples; it does not draw conclusions.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from z2rank.diag_completion import sharpness_experiment


@dataclass
class Config:
    exhaustive_max: int = 3
    sampled_max: int = 6
    samples: int = 2000
    seed: int = 0
    show: int = 3


def run(cfg: Config) -> list[dict]:
    out = []
    for n in range(1, cfg.sampled_max + 1):
        samples = None if n <= cfg.exhaustive_max else cfg.samples
        res = sharpness_experiment(n, samples=samples, seed=cfg.seed)
        summary = {
            "n": n,
            "mode": "exhaustive" if samples is None else f"{samples} samples",
            "checked": res["checked"],
            "counterexamples": len(res["counterexamples"]),
            "examples": res["counterexamples"][: cfg.show],
        }
        print(json.dumps(summary))
        out.append(summary)
    return out


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sampled-max", type=int, default=Config.sampled_max)
    p.add_argument("--samples", type=int, default=Config.samples)
    p.add_argument("--seed", type=int, default=Config.seed)
    a = p.parse_args()
    run(Config(sampled_max=a.sampled_max, samples=a.samples, seed=a.seed))
