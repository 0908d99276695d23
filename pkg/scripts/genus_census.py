"""How many hieroglyphs on n letters need k Moebius bands, for small n."""

from __future__ import annotations

import argparse
import json
from collections import Counter
from dataclasses import dataclass

from z2rank.hieroglyph import all_hieroglyphs, min_genus


@dataclass
class Config:
    n_max: int = 6


def run(cfg: Config) -> dict[int, dict[int, int]]:
    table = {}
    for n in range(cfg.n_max + 1):
        counts = Counter(min_genus(H) for H in all_hieroglyphs(n))
        table[n] = dict(sorted(counts.items()))
        print(json.dumps({"n": n, "total": sum(counts.values()), "by_genus": table[n]}))
    return table


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-max", type=int, default=Config.n_max)
    run(Config(n_max=p.parse_args().n_max))
