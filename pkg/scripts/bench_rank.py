"""Wall-clock rank timings for seeded random square matrices, both kernels."""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from z2rank.gf2_core import BitMatrix, _rank_rows, _rank_words


@dataclass
class Config:
    sizes: tuple[int, ...] = (256, 512, 1024, 2048, 4096)
    seed: int = 0
    repeats: int = 3


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def run(cfg: Config) -> None:
    print(f"{'n':>6} {'rank':>6} {'words (s)':>10} {'ints (s)':>10}")
    for n in cfg.sizes:
        M = BitMatrix.random(n, n, rng=cfg.seed)
        words = M.words
        r = _rank_words(words, n)
        t_words = best_of(lambda: _rank_words(words, n), cfg.repeats)
        t_ints = best_of(lambda: _rank_rows(M.rows), cfg.repeats)
        print(f"{n:>6} {r:>6} {t_words:>10.3f} {t_ints:>10.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=list(Config.sizes))
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    run(Config(sizes=tuple(a.sizes), seed=a.seed))
