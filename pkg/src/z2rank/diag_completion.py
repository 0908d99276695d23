"""Minimum-rank completion of a square Z2 matrix whose diagonal is unknown.

``R(M)`` is the least rank of ``M + D`` over all diagonal ``D``; equivalently
the least rank reachable by overwriting the main diagonal. The input
diagonal is always ignored.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from .gf2_core import (
    RANK_LE_TABLE_CAP,
    BitMatrix,
    ShapeError,
    _rank_le_rows,
    _rank_rows,
    _require_square,
    int_to_bits,
    popcount,
)

ORACLE_LIMIT = 24
DEFAULT_BUDGET = 10**9


class OracleLimitExceeded(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """The minimum-rank search would exceed its operation budget.

    ``lower`` and ``upper`` bracket R(M) with what was established before
    stopping.
    """

    def __init__(self, lower: int, upper: int, spent: int, budget: int):
        super().__init__(f"search budget of {budget} ops exceeded; {lower} <= R(M) <= {upper}")
        self.lower = lower
        self.upper = upper
        self.spent = spent
        self.budget = budget


@dataclass(frozen=True)
class DiagonalAssignment:
    """A choice of diagonal entries; bit ``i`` of ``values`` is entry (i, i)."""

    values: int
    n: int

    def bits(self) -> list[int]:
        return int_to_bits(self.values, self.n)

    def apply(self, M: BitMatrix) -> BitMatrix:
        if M.n_rows != self.n:
            raise ShapeError(f"assignment of length {self.n} for a {M.n_rows}x{M.n_cols} matrix")
        return M.with_diagonal(self.values)


@dataclass(frozen=True)
class CompletionResult:
    achieved_rank: int
    witness: DiagonalAssignment

    def completed(self, M: BitMatrix) -> BitMatrix:
        return self.witness.apply(M)

    def to_json(self) -> dict:
        return {"R": self.achieved_rank, "witness": self.witness.bits()}


@dataclass(frozen=True)
class Rank1Certificate:
    """Rows/columns on which a symmetric matrix shows a forbidden pattern.

    ``pattern3``: vertices (a, b, c) with a-b and a-c edges and no b-c edge.
    ``pattern4``: vertices (a, b, c, d) with a-b and c-d edges and none of
    a-c, a-d, b-c, b-d. Edges are off-diagonal ones; the diagonal is free.
    """

    kind: str
    vertices: tuple[int, ...]

    def check(self, M: BitMatrix) -> bool:
        v = self.vertices
        if len(set(v)) != len(v):
            return False
        edge = lambda i, j: M[i, j] == 1 and M[j, i] == 1
        gap = lambda i, j: M[i, j] == 0 and M[j, i] == 0
        if self.kind == "pattern3" and len(v) == 3:
            a, b, c = v
            return edge(a, b) and edge(a, c) and gap(b, c)
        if self.kind == "pattern4" and len(v) == 4:
            a, b, c, d = v
            return edge(a, b) and edge(c, d) and all(gap(x, y) for x in (a, b) for y in (c, d))
        return False

    def to_json(self) -> dict:
        return {"certificate": {"kind": self.kind, "vertices": list(self.vertices)}}


def _offdiag_rows(M: BitMatrix) -> list[int]:
    _require_square(M)
    return [r & ~(1 << i) for i, r in enumerate(M.rows)]


def _result(rows_off: Sequence[int], diag: int) -> CompletionResult:
    n = len(rows_off)
    r = _rank_rows(row | (diag & (1 << i)) for i, row in enumerate(rows_off))
    return CompletionResult(r, DiagonalAssignment(diag, n))


# ---------------------------------------------------------------- oracle


def brute_force_R(M: BitMatrix, limit: int = ORACLE_LIMIT) -> CompletionResult:
    """R(M) by trying all 2^n diagonals.

    Ties go to the lexicographically least assignment, reading the diagonal
    from position 0 (most significant) to n - 1.
    """
    off = _offdiag_rows(M)
    n = len(off)
    if n > limit:
        raise OracleLimitExceeded(f"oracle limit exceeded: n={n} > {limit}")
    best_rank = n + 1
    best_diag = 0
    for a in range(1 << n):
        diag = int(format(a, f"0{n}b")[::-1], 2) if n else 0
        r = _rank_rows(row | (diag & (1 << i)) for i, row in enumerate(off))
        if r < best_rank:
            best_rank, best_diag = r, diag
            if r == 0:
                break
    return CompletionResult(best_rank, DiagonalAssignment(best_diag, n))


# ---------------------------------------------------------------- degeneracy


def complete_degenerate(M: BitMatrix) -> DiagonalAssignment:
    """Diagonal making every row sum to zero, hence a degenerate completion."""
    off = _offdiag_rows(M)
    if not off:
        raise ValueError("empty matrix has no degenerate completion")
    return DiagonalAssignment(sum((popcount(r) & 1) << i for i, r in enumerate(off)), len(off))


def _nondegenerate_diag(off: Sequence[int]) -> int:
    # corner recursion: entry (i, i) := 1 + det of the (i+1)-corner with (i, i) = 0
    n = len(off)
    diag = 0
    for i in range(n):
        mask = (1 << (i + 1)) - 1
        corner = [(off[r] | (diag & (1 << r))) & mask for r in range(i + 1)]
        delta = int(_rank_rows(corner) == i + 1)
        if not delta:
            diag |= 1 << i
    return diag


def complete_nondegenerate(M: BitMatrix) -> DiagonalAssignment:
    """Diagonal making M non-degenerate, built corner by corner in O(n^4)."""
    off = _offdiag_rows(M)
    return DiagonalAssignment(_nondegenerate_diag(off), len(off))


def min_rank_approx(M: BitMatrix) -> int:
    """k = rank(Mbar + E) for the non-degenerate completion Mbar; k/2 <= R(M) <= k."""
    off = _offdiag_rows(M)
    n = len(off)
    diag = _nondegenerate_diag(off) ^ ((1 << n) - 1)
    return _rank_rows(row | (diag & (1 << i)) for i, row in enumerate(off))


# ---------------------------------------------------------------- exact search


def _lex_subsets(n: int, k: int, start: int = 0, prefix: tuple[int, ...] = ()) -> Iterator[tuple[int, ...]]:
    yield prefix
    if len(prefix) == k:
        return
    for j in range(start, n):
        yield from _lex_subsets(n, k, j + 1, prefix + (j,))


def _first_success(off: Sequence[int], bar: int, k: int, zero_sets) -> tuple[int, ...] | None:
    n = len(off)
    full = (1 << n) - 1
    for Z in zero_sets:
        d = full
        for z in Z:
            d ^= 1 << z
        diag = bar ^ d
        rows = [row | (diag & (1 << i)) for i, row in enumerate(off)]
        ok = _rank_le_rows(rows, k) if k <= RANK_LE_TABLE_CAP else _rank_rows(rows) <= k
        if ok:
            return Z
    return None


def _blocks(n: int, k: int) -> list:
    # contiguous lexicographic blocks: the empty set, then sets led by 0, 1, ...
    blocks = [lambda: iter([()])]
    if k >= 1:
        for j in range(n):
            blocks.append(lambda j=j: _lex_subsets(n, k, j + 1, (j,)))
    return blocks


def min_rank_exact(M: BitMatrix, k: int, threads: int = 1) -> CompletionResult | None:
    """Decide R(M) <= k and return a witness, or ``None`` when R(M) > k.

    M is first completed to a non-degenerate Mbar. Changing j diagonal
    entries of a rank-n matrix moves the rank by at most j, so a completion
    of rank <= k is ``Mbar + D`` with D diagonal having at most k zeros.
    Those D are tried in lexicographic order of their zero positions and
    the first passing ``rank_le(Mbar + D, k)`` wins; cost O(n^(k+3)).

    With ``threads > 1`` the candidates are split into contiguous
    lexicographic blocks searched concurrently; the earliest block with a
    success decides, so the witness does not depend on ``threads``.
    """
    off = _offdiag_rows(M)
    n = len(off)
    if k < 0:
        return None
    bar = _nondegenerate_diag(off)
    blocks = _blocks(n, min(k, n))
    if threads <= 1:
        found = _first_success(off, bar, k, itertools.chain.from_iterable(b() for b in blocks))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = list(pool.map(lambda b: _first_success(off, bar, k, b()), blocks))
        found = next((h for h in hits if h is not None), None)
    if found is None:
        return None
    d = (1 << n) - 1
    for z in found:
        d ^= 1 << z
    return _result(off, bar ^ d)


def _rank_for_zero_set(off: Sequence[int], bar: int, Z: tuple[int, ...]) -> int:
    n = len(off)
    diag = bar ^ ((1 << n) - 1)
    for z in Z:
        diag ^= 1 << z
    return _rank_rows(row | (diag & (1 << i)) for i, row in enumerate(off))


def min_rank(M: BitMatrix, budget: int = DEFAULT_BUDGET, threads: int = 1) -> CompletionResult:
    """Exact R(M) with the witness ``min_rank_exact(M, R(M))`` would return.

    Equivalent to calling :func:`min_rank_exact` for k = 0, 1, ... until it
    succeeds, but every zero set is ranked once and reused across k: at
    level k the sets of size k are added, and the answer is the
    lexicographically least zero set of size <= k whose rank is <= k.

    Raises :class:`BudgetExceeded` before starting a level whose estimated
    word-operation cost would push the total past ``budget``.
    """
    off = _offdiag_rows(M)
    n = len(off)
    if n == 0:
        return CompletionResult(0, DiagonalAssignment(0, 0))
    bar = _nondegenerate_diag(off)
    words = -(-n // 64)
    ranks: dict[tuple[int, ...], int] = {}
    spent = n**4 * words  # non-degenerate completion
    upper = n
    for k in range(n + 1):
        new = list(itertools.combinations(range(n), k))
        cost = len(new) * n * n * words
        if spent + cost > budget:
            raise BudgetExceeded(lower=k, upper=upper, spent=spent, budget=budget)
        spent += cost
        if threads > 1 and len(new) > 1:
            step = -(-len(new) // threads)
            chunks = [new[i : i + step] for i in range(0, len(new), step)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = pool.map(lambda ch: [_rank_for_zero_set(off, bar, Z) for Z in ch], chunks)
                values = [r for part in parts for r in part]
        else:
            values = [_rank_for_zero_set(off, bar, Z) for Z in new]
        ranks.update(zip(new, values))
        upper = min(upper, min(values))
        hits = [Z for Z, r in ranks.items() if r <= k]
        if hits:
            Z = min(hits)
            diag = bar ^ ((1 << n) - 1)
            for z in Z:
                diag ^= 1 << z
            return CompletionResult(ranks[Z], DiagonalAssignment(diag, n))
    raise AssertionError("unreachable: the k = n level always succeeds")


# ---------------------------------------------------------------- rank <= 1


def complete_to_rank_le1(M: BitMatrix) -> CompletionResult | Rank1Certificate:
    """O(n^2) decision of R(M) <= 1 for symmetric M.

    With G the graph of off-diagonal ones, R(M) <= 1 exactly when the
    non-isolated vertices of G form a clique; the witness then puts ones on
    the clique. Otherwise a forbidden 3- or 4-vertex pattern is returned.
    """
    if not M.is_symmetric():
        raise ValueError("symmetric matrix required")
    adj = _offdiag_rows(M)
    n = len(adj)
    deg = [popcount(r) for r in adj]
    core = [v for v in range(n) if deg[v]]
    core_mask = sum(1 << v for v in core)
    bad = next((v for v in core if deg[v] != len(core) - 1), None)
    if bad is None:
        return CompletionResult(1 if core else 0, DiagonalAssignment(core_mask, n))
    v = bad
    # some non-isolated u != v is not adjacent to v
    missing = core_mask & ~adj[v] & ~(1 << v)
    u = (missing & -missing).bit_length() - 1
    w = (adj[u] & -adj[u]).bit_length() - 1
    if adj[w] >> v & 1:
        return Rank1Certificate("pattern3", (w, u, v))
    x = (adj[v] & -adj[v]).bit_length() - 1
    if adj[x] >> u & 1:
        return Rank1Certificate("pattern3", (x, u, v))
    if adj[x] >> w & 1:
        return Rank1Certificate("pattern3", (x, w, v))
    return Rank1Certificate("pattern4", (u, w, v, x))


# ---------------------------------------------------------------- experiments


def sharpness_experiment(n: int, samples: int | None = None, seed: int = 0) -> dict:
    """Explore whether rank m -> k by diagonal changes always needs exactly |m - k| changes.

    Exhaustive over all n x n matrices when ``samples`` is None, otherwise
    ``samples`` random matrices. Reports counterexamples; draws no conclusion.
    """
    rng = random.Random(seed)
    if samples is None:
        if n > 3:
            raise OracleLimitExceeded("exhaustive sweep only for n <= 3")
        mats = (BitMatrix([(a >> (n * i)) & ((1 << n) - 1) for i in range(n)], n) for a in range(1 << (n * n)))
    else:
        mats = (BitMatrix.random(n, n, rng) for _ in range(samples))
    checked = 0
    counterexamples = []
    for M in mats:
        checked += 1
        m = _rank_rows(M.rows)
        fewest: dict[int, int] = {}
        for d in range(1 << n):
            k = _rank_rows(r ^ (d & (1 << i)) for i, r in enumerate(M.rows))
            c = popcount(d)
            if c < fewest.get(k, n + 1):
                fewest[k] = c
        for k, c in sorted(fewest.items()):
            if c != abs(m - k):
                counterexamples.append({"matrix": M.to_lists(), "rank": m, "target": k, "changes": c})
    return {"n": n, "checked": checked, "counterexamples": counterexamples}
