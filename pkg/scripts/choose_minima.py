"""Table of least ranks of valid (even) [m choose l]-matrices.

Exact where the space is small enough to enumerate or the exact low-rank
search fits the budget; otherwise a (lower, upper) bracket.

    python scripts/choose_minima.py --l 3 --m-max 8 --search-budget 8388608
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from z2rank.set_system import ENUMERATION_THRESHOLD, SEARCH_BUDGET, SubsetIndexer, min_rank_over_space, solve_choose_space


@dataclass
class Config:
    l: int = 3
    m_min: int = 4
    m_max: int = 7
    samples: int = 20_000
    seed: int = 0
    threshold: int = ENUMERATION_THRESHOLD
    search_budget: int = SEARCH_BUDGET
    threads: int = 1


def run(cfg: Config) -> list[dict]:
    rows = []
    for m in range(cfg.m_min, cfg.m_max + 1):
        for even in (False, True):
            start = time.perf_counter()
            space = solve_choose_space(m, cfg.l, even)
            if space is None:
                rows.append({"m": m, "l": cfg.l, "even": even, "feasible": False})
                continue
            rep = min_rank_over_space(
                space,
                SubsetIndexer(m, cfg.l),
                even,
                threshold=cfg.threshold,
                n_samples=cfg.samples,
                seed=cfg.seed,
                search_budget=cfg.search_budget,
                threads=cfg.threads,
            )
            rows.append({**rep.to_json(), "even": even, "dimension": space.dimension, "seconds": round(time.perf_counter() - start, 2)})
            print(json.dumps(rows[-1]), flush=True)
    return rows


def parse_args() -> Config:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(Config()).items():
        p.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    return Config(**vars(p.parse_args()))


if __name__ == "__main__":
    run(parse_args())
