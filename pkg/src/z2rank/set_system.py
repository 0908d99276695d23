"""[m choose l]-matrices: symmetric Z2 matrices indexed by l-subsets of [m].

The ground set is ``{0, ..., m-1}``; subsets are sorted tuples, ordered
lexicographically. A valid matrix satisfies

* triviality: ``A[P, Q] = 0`` when P and Q are disjoint;
* linear dependence: ``sum(A[F - i, P] for i in F) = 0`` for every
  (l+1)-set F and l-set P;
* non-triviality: ``A_{F,i} = 1`` for every i and (2l-2)-set F avoiding i,
  where ``A_{F,i}`` sums ``A[i+s, i+t]`` over unordered splits F = s + t
  into (l-1)-sets;

and, when even, has zero diagonal. The valid matrices form an affine
subspace of the symmetric matrices, handled here in the coordinates of the
upper triangle (diagonal included), row-major.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .gf2_core import (
    AffineSpace,
    BitMatrix,
    MatrixFormatError,
    ShapeError,
    _rank_rows,
    format_matrix,
    parse_matrix,
    rank,
    rref,
    solve_linear_system,
)

SIZE_CAP = 256
ENUMERATION_THRESHOLD = 24
N_SAMPLES = 10**5
SEARCH_BUDGET = 1 << 17

Subset = tuple[int, ...]


class ContractViolation(RuntimeError):
    """A rank inequality that must hold for valid inputs failed."""


class SubsetIndexer:
    """Bijection between the l-subsets of [m] (lexicographic) and 0..C(m,l)-1."""

    def __init__(self, m: int, l: int):
        if m < 0 or l < 0:
            raise ValueError("m and l must be non-negative")
        self.m = m
        self.l = l
        self.subsets: tuple[Subset, ...] = tuple(combinations(range(m), l))
        self._index = {s: i for i, s in enumerate(self.subsets)}

    def __len__(self) -> int:
        return len(self.subsets)

    @property
    def size(self) -> int:
        return len(self.subsets)

    def subset_at(self, i: int) -> Subset:
        return self.subsets[i]

    def index_of(self, subset: Iterable[int]) -> int:
        key = tuple(sorted(subset))
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"{key} is not a {self.l}-subset of [{self.m}]") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, SubsetIndexer) and (self.m, self.l) == (other.m, other.l)

    def __hash__(self) -> int:
        return hash((self.m, self.l))

    def __repr__(self) -> str:
        return f"SubsetIndexer(m={self.m}, l={self.l})"


@dataclass(frozen=True)
class ChooseMatrix:
    indexer: SubsetIndexer
    matrix: BitMatrix

    def __post_init__(self):
        n = self.indexer.size
        if self.matrix.shape != (n, n):
            raise ShapeError(f"expected a {n}x{n} matrix for {self.indexer}, got {self.matrix.shape}")

    @property
    def m(self) -> int:
        return self.indexer.m

    @property
    def l(self) -> int:
        return self.indexer.l

    def entry(self, P: Iterable[int], Q: Iterable[int]) -> int:
        ix = self.indexer
        return self.matrix[ix.index_of(P), ix.index_of(Q)]

    def is_even(self) -> bool:
        return self.matrix.diagonal() == 0

    def rank(self) -> int:
        return rank(self.matrix)


# ---------------------------------------------------------------- coordinates


def n_variables(n: int) -> int:
    return n * (n + 1) // 2


def var_index(i: int, j: int, n: int) -> int:
    if i > j:
        i, j = j, i
    return i * n - i * (i - 1) // 2 + (j - i)


def vector_to_matrix(v: int, n: int) -> BitMatrix:
    """Symmetric n x n matrix from its upper-triangle coordinate vector."""
    rows = [0] * n
    pos = 0
    for i in range(n):
        width = n - i
        seg = (v >> pos) & ((1 << width) - 1)
        pos += width
        rows[i] |= seg << i
        j = i + 1
        seg >>= 1
        while seg:
            if seg & 1:
                rows[j] |= 1 << i
            seg >>= 1
            j += 1
    return BitMatrix(rows, n)


def matrix_to_vector(M: BitMatrix) -> int:
    n = M.n_rows
    v = 0
    pos = 0
    for i, r in enumerate(M.rows):
        v |= (r >> i) << pos
        pos += n - i
    return v


def _splits(F: Subset, half: int) -> list[tuple[Subset, Subset]]:
    """Unordered splits of F into two sets of size ``half`` (each listed once)."""
    if not F:
        return [((), ())]
    first, rest = F[0], F[1:]
    out = []
    for s in combinations(rest, half - 1):
        sigma = (first,) + s
        tau = tuple(x for x in F if x not in sigma)
        out.append((sigma, tau))
    return out


def _nontriviality_pairs(m: int, l: int) -> list[tuple[int, Subset, list[tuple[Subset, Subset]]]]:
    out = []
    for i in range(m):
        rest = [x for x in range(m) if x != i]
        for F in combinations(rest, 2 * l - 2):
            pairs = []
            for sigma, tau in _splits(F, l - 1):
                pairs.append((tuple(sorted(sigma + (i,))), tuple(sorted(tau + (i,)))))
            out.append((i, F, pairs))
    return out


PARTS = ("triviality", "dependence", "even", "nontriviality")


def build_constraint_system(
    m: int,
    l: int,
    even: bool = False,
    size_cap: int = SIZE_CAP,
    include: Sequence[str] = ("triviality", "dependence", "nontriviality"),
) -> tuple[BitMatrix, int]:
    """Linear system ``C x = b`` whose solutions are the valid matrices.

    Variables are the upper-triangle entries. ``even=True`` adds the
    zero-diagonal rows; ``include`` selects which axioms contribute rows.
    """
    if not 1 <= l <= m:
        raise ValueError(f"need 1 <= l <= m, got m={m}, l={l}")
    ix = SubsetIndexer(m, l)
    n = ix.size
    if n > size_cap:
        raise ValueError(f"C({m},{l}) = {n} exceeds the size cap {size_cap}")
    parts = set(include) | ({"even"} if even else set())
    unknown = parts - set(PARTS)
    if unknown:
        raise ValueError(f"unknown constraint families {sorted(unknown)}")
    var = lambda P, Q: var_index(ix.index_of(P), ix.index_of(Q), n)
    rows: list[int] = []
    rhs: list[int] = []
    if "triviality" in parts:
        for a in range(n):
            sa = set(ix.subsets[a])
            for b in range(a + 1, n):
                if sa.isdisjoint(ix.subsets[b]):
                    rows.append(1 << var_index(a, b, n))
                    rhs.append(0)
    if "dependence" in parts:
        seen = set()
        for F in combinations(range(m), l + 1):
            faces = [ix.index_of(tuple(x for x in F if x != i)) for i in F]
            for p in range(n):
                r = 0
                for f in faces:
                    r ^= 1 << var_index(f, p, n)
                if r not in seen:
                    seen.add(r)
                    rows.append(r)
                    rhs.append(0)
    if "even" in parts:
        for a in range(n):
            rows.append(1 << var_index(a, a, n))
            rhs.append(0)
    if "nontriviality" in parts:
        for _, _, pairs in _nontriviality_pairs(m, l):
            r = 0
            for X, Y in pairs:
                r ^= 1 << var(X, Y)
            rows.append(r)
            rhs.append(1)
    b = sum(bit << i for i, bit in enumerate(rhs))
    return BitMatrix(rows, n_variables(n)), b


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple

    def __str__(self) -> str:
        return f"{self.kind} violated at {self.where}"


def validate(A: ChooseMatrix, even: bool = False) -> list[Violation]:
    """Every violated axiom with its witness; empty iff A is valid."""
    if not A.matrix.is_symmetric():
        raise ValueError("symmetric matrix required")
    ix = A.indexer
    m, l, n = ix.m, ix.l, ix.size
    rows = A.matrix.rows
    out: list[Violation] = []
    for a in range(n):
        sa = set(ix.subsets[a])
        for b in range(a + 1, n):
            if (rows[a] >> b) & 1 and sa.isdisjoint(ix.subsets[b]):
                out.append(Violation("triviality", (ix.subsets[a], ix.subsets[b])))
    for F in combinations(range(m), l + 1):
        acc = 0
        for i in F:
            acc ^= rows[ix.index_of(tuple(x for x in F if x != i))]
        p = 0
        while acc:
            if acc & 1:
                out.append(Violation("linear dependence", (F, ix.subsets[p])))
            acc >>= 1
            p += 1
    if l >= 1:
        for i, F, _ in _nontriviality_pairs(m, l):
            if nontriviality_sum(A, F, i) != 1:
                out.append(Violation("non-triviality", (F, i)))
    if even:
        for a in range(n):
            if (rows[a] >> a) & 1:
                out.append(Violation("evenness", (ix.subsets[a],)))
    return out


def nontriviality_sum(A: ChooseMatrix, F: Iterable[int], i: int) -> int:
    """A_{F,i}: sum of A[i+s, i+t] over unordered splits of F into (l-1)-sets."""
    F = tuple(sorted(F))
    l = A.l
    if i in F:
        raise ValueError(f"{i} must not lie in F")
    if len(F) != 2 * l - 2:
        raise ValueError(f"F must have {2 * l - 2} elements")
    total = 0
    for sigma, tau in _splits(F, l - 1):
        total ^= A.entry(sigma + (i,), tau + (i,))
    return total


# ---------------------------------------------------------------- solving


def _cocycle_basis(m: int, l: int) -> list[int]:
    """Basis of the l-subset vectors killed by every linear-dependence functional."""
    ix = SubsetIndexer(m, l)
    n = ix.size
    rows = []
    for F in combinations(range(m), l + 1):
        rows.append(sum(1 << ix.index_of(tuple(x for x in F if x != i)) for i in F))
    space = solve_linear_system(BitMatrix(rows, n), 0)
    return list(space.kernel_basis)


def _solve_reduced(m: int, l: int, even: bool) -> AffineSpace | None:
    # every column of a matrix obeying linear dependence lies in the cocycle
    # space Z, so such matrices are exactly Phi S Phi^T with S symmetric on Z
    ix = SubsetIndexer(m, l)
    n = ix.size
    basis = _cocycle_basis(m, l)
    w = len(basis)
    phi = [sum(((z >> p) & 1) << a for a, z in enumerate(basis)) for p in range(n)]  # row p of Phi

    def row_for(p: int, q: int) -> int:
        # S-coordinates of the functional S -> (Phi S Phi^T)[p, q]
        x, y = phi[p], phi[q]
        r = 0
        for a in range(w):
            if not (x >> a) & 1 and not (y >> a) & 1:
                continue
            for b in range(a, w):
                if a == b:
                    c = (x >> a) & (y >> a) & 1
                else:
                    c = (((x >> a) & (y >> b)) ^ ((x >> b) & (y >> a))) & 1
                if c:
                    r ^= 1 << var_index(a, b, w)
        return r

    rows, rhs = [], []
    for a in range(n):
        sa = set(ix.subsets[a])
        for b in range(a + 1, n):
            if sa.isdisjoint(ix.subsets[b]):
                rows.append(row_for(a, b))
                rhs.append(0)
    if even:
        for a in range(n):
            rows.append(row_for(a, a))
            rhs.append(0)
    for _, _, pairs in _nontriviality_pairs(m, l):
        r = 0
        for X, Y in pairs:
            r ^= row_for(ix.index_of(X), ix.index_of(Y))
        rows.append(r)
        rhs.append(1)
    b = sum(bit << i for i, bit in enumerate(rhs))
    s_space = solve_linear_system(BitMatrix(rows, n_variables(w)), b)
    if s_space is None:
        return None

    cols = basis  # column a of Phi as an n-bit int

    def lift(s: int) -> int:
        S = vector_to_matrix(s, w)
        T = []  # rows of S Phi^T
        for r in S.rows:
            acc = 0
            a = 0
            while r:
                if r & 1:
                    acc ^= cols[a]
                r >>= 1
                a += 1
            T.append(acc)
        A_rows = []
        for p in range(n):
            acc = 0
            x = phi[p]
            a = 0
            while x:
                if x & 1:
                    acc ^= T[a]
                x >>= 1
                a += 1
            A_rows.append(acc)
        return matrix_to_vector(BitMatrix(A_rows, n))

    return AffineSpace(n_variables(n), lift(s_space.particular), tuple(lift(k) for k in s_space.kernel_basis))


def solve_choose_space(m: int, l: int, even: bool = False, method: str = "auto", size_cap: int = SIZE_CAP) -> AffineSpace | None:
    """All valid [m choose l]-matrices as an affine space (``None`` if there are none).

    ``method="full"`` row-reduces :func:`build_constraint_system` directly.
    ``method="reduced"`` first parametrizes the linear-dependence solutions
    by symmetric matrices on the cocycle space, which keeps large cases
    small. ``"auto"`` uses the full system while it has at most 2000
    variables.
    """
    if not 1 <= l <= m:
        raise ValueError(f"need 1 <= l <= m, got m={m}, l={l}")
    n = comb(m, l)
    if n > size_cap:
        raise ValueError(f"C({m},{l}) = {n} exceeds the size cap {size_cap}")
    if method == "auto":
        method = "full" if n_variables(n) <= 2000 else "reduced"
    if method == "full":
        C, b = build_constraint_system(m, l, even, size_cap=size_cap)
        return solve_linear_system(C, b)
    if method == "reduced":
        return _solve_reduced(m, l, even)
    raise ValueError(f"unknown method {method!r}")


def member_matrix(space: AffineSpace, indexer: SubsetIndexer, coeffs: int) -> ChooseMatrix:
    return ChooseMatrix(indexer, vector_to_matrix(space.member(coeffs), indexer.size))


def sample_matrices(space: AffineSpace, indexer: SubsetIndexer, count: int, seed: int = 0) -> list[ChooseMatrix]:
    rng = random.Random(seed)
    return [ChooseMatrix(indexer, vector_to_matrix(space.sample(rng), indexer.size)) for _ in range(count)]


# ---------------------------------------------------------------- bounds


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def rank_floor(m: int, l: int, even: bool = False) -> int:
    """Best proven lower bound on the rank of a valid (even) [m choose l]-matrix.

    Combines: non-triviality forces A != 0 once m >= 2l - 1; for l = 3,
    rk >= (m-4)/3 and, when even, rk >= 2(m-4)/5; for l >= 3,
    rk >= (m-2l+2)/(l-1) and, when even, rk >= 2(m-2l+2)/l. An even
    symmetric matrix is alternating, so its rank is even.
    """
    b = 1 if l >= 1 and m >= 2 * l - 1 else 0
    if l == 3:
        b = max(b, _ceil_div(m - 4, 3))
        if even:
            b = max(b, _ceil_div(2 * (m - 4), 5))
    if l >= 3:
        b = max(b, _ceil_div(m - 2 * l + 2, l - 1))
        if even:
            b = max(b, _ceil_div(2 * (m - 2 * l + 2), l))
    if even and b % 2:
        b += 1
    return b


# ---------------------------------------------------------------- minimum rank


@dataclass(frozen=True)
class MinRankReport:
    lower: int
    upper: int
    witness: ChooseMatrix
    method: str
    details: dict = field(default_factory=dict, compare=False)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "m": self.witness.m,
            "l": self.witness.l,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "method": self.method,
            "witness_rank": self.witness.rank(),
        }


class _Reduced:
    """A space of symmetric matrices in the coordinates of its column span.

    Every member's columns lie in W, the span of all columns of the
    particular matrix and kernel matrices. With W in reduced echelon form
    and pivot coordinates c_1..c_w, a member A equals R^T S R where S is
    the principal submatrix of A on the pivots, so rank(A) = rank(S).
    S is stored as one int, row-major with row stride w.
    """

    def __init__(self, space: AffineSpace, n: int):
        self.n = n
        self.space = space
        mats = [vector_to_matrix(space.particular, n)] + [vector_to_matrix(k, n) for k in space.kernel_basis]
        span_rows = [r for M in mats for r in M.rows if r]
        basis, pivots = rref(span_rows, n)
        self.basis = basis
        self.pivots = pivots
        self.w = len(pivots)
        self.s0 = self._pack(mats[0])
        self.ts = [self._pack(M) for M in mats[1:]]

    def _pack(self, M: BitMatrix) -> int:
        w = self.w
        s = 0
        for a, p in enumerate(self.pivots):
            r = M.rows[p]
            row = 0
            for b, q in enumerate(self.pivots):
                row |= ((r >> q) & 1) << b
            s |= row << (a * w)
        return s

    def rows_of(self, s: int) -> list[int]:
        w = self.w
        mask = (1 << w) - 1
        return [(s >> (a * w)) & mask for a in range(w)]

    def rank_of(self, s: int) -> int:
        return _rank_rows(self.rows_of(s)) if self.w else 0

    def member_packed(self, coeffs: int) -> int:
        s = self.s0
        j = 0
        while coeffs:
            if coeffs & 1:
                s ^= self.ts[j]
            coeffs >>= 1
            j += 1
        return s

    def lift(self, s: int) -> BitMatrix:
        """A = R^T S R back in the original n x n coordinates."""
        srows = self.rows_of(s)
        tmp = []
        for r in srows:
            acc = 0
            b = 0
            while r:
                if r & 1:
                    acc ^= self.basis[b]
                r >>= 1
                b += 1
            tmp.append(acc)
        # A = R^T tmp: row p of A is the XOR of tmp[a] over a with basis[a] bit p set
        rows = []
        for p in range(self.n):
            acc = 0
            for a in range(self.w):
                if (self.basis[a] >> p) & 1:
                    acc ^= tmp[a]
            rows.append(acc)
        return BitMatrix(rows, self.n)

    def constraints(self) -> tuple[list[int], int]:
        """Implicit form: per S-variable (a <= b) column bits over q constraints, and rhs."""
        w = self.w
        nv = n_variables(w)
        tvecs = [self._packed_to_vec(t) for t in self.ts]
        # functionals h vanishing on every kernel direction
        ann = solve_linear_system(BitMatrix(tvecs, nv), 0) if tvecs else AffineSpace(nv, 0, tuple(1 << i for i in range(nv)))
        hs = list(ann.kernel_basis)
        s0v = self._packed_to_vec(self.s0)
        rhs = sum(((h & s0v).bit_count() & 1) << q for q, h in enumerate(hs))
        cols = [0] * nv
        for q, h in enumerate(hs):
            v = 0
            while h:
                if h & 1:
                    cols[v] |= 1 << q
                h >>= 1
                v += 1
        return cols, rhs

    def _packed_to_vec(self, s: int) -> int:
        w = self.w
        v = 0
        pos = 0
        for a, r in enumerate(self.rows_of(s)):
            v |= (r >> a) << pos
            pos += w - a
        return v

    def vec_to_packed(self, v: int) -> int:
        return self._pack_rows(vector_to_matrix(v, self.w).rows)

    def _pack_rows(self, rows: Sequence[int]) -> int:
        s = 0
        for a, r in enumerate(rows):
            s |= r << (a * self.w)
        return s


def _enumerate_chunk(red: _Reduced, start: int, stop: int, floor: int) -> tuple[int, int]:
    """(least rank, least index achieving it) over members start..stop-1."""
    s = red.member_packed(start)
    best = (red.rank_of(s), start)
    if best[0] <= floor:
        return best
    ts = red.ts
    for t in range(start + 1, stop):
        diff = t ^ (t - 1)
        j = 0
        while diff:
            if diff & 1:
                s ^= ts[j]
            diff >>= 1
            j += 1
        r = red.rank_of(s)
        if r < best[0]:
            best = (r, t)
            if r <= floor:
                break
    return best


def _solve_small(columns: Sequence[int], target: int) -> int | None:
    """Some y with XOR of columns[k] over bits k of y equal to target, else None."""
    piv: dict[int, tuple[int, int]] = {}
    for k, v in enumerate(columns):
        combo = 1 << k
        while v:
            h = v.bit_length() - 1
            p = piv.get(h)
            if p is None:
                piv[h] = (v, combo)
                break
            v ^= p[0]
            combo ^= p[1]
    combo = 0
    while target:
        h = target.bit_length() - 1
        p = piv.get(h)
        if p is None:
            return None
        target ^= p[0]
        combo ^= p[1]
    return combo


def _gram_forms(r: int) -> list[list[int]]:
    """Representatives of the non-degenerate symmetric r x r forms with G[r-1][r-1] = 0
    (rows as ints); one per congruence class, r >= 2."""
    forms = []
    if r % 2 == 0:
        rows = [0] * r
        for a in range(0, r, 2):
            rows[a] |= 1 << (a + 1)
            rows[a + 1] |= 1 << a
        forms.append(rows)
    # identity of size r-2 followed by [[1,1],[1,0]]
    rows = [1 << a for a in range(r - 2)] + [(1 << (r - 2)) | (1 << (r - 1)), 1 << (r - 2)]
    forms.append(rows)
    return forms


class _LowRankSearch:
    """Exact decision of 'some member has rank r' for a reduced space.

    Every member of rank exactly r is reached; a hit may have smaller
    rank, so callers scan r upward from a proven floor.

    A symmetric matrix of rank exactly r is U G U^T with U (w x r) of full
    column rank and G any fixed representative of its congruence class.
    For r >= 2 the representatives are chosen with G[r-1][r-1] = 0, which
    makes the constraints linear in the last column of U: the first r-1
    columns are enumerated and the last is solved for. Rank 1 is x x^T.
    """

    def __init__(self, red: _Reduced):
        self.red = red
        self.w = red.w
        self.cols, self.rhs = red.constraints()
        w = self.w
        self.table = [[self.cols[var_index(a, b, w)] for b in range(w)] for a in range(w)]

    def _apply(self, rows: Sequence[int]) -> int:
        # constraint values of the symmetric matrix with these rows
        w = self.w
        acc = 0
        cols = self.cols
        for a, r in enumerate(rows):
            r >>= a
            b = a
            while r:
                if r & 1:
                    acc ^= cols[var_index(a, b, w)]
                r >>= 1
                b += 1
        return acc

    def cost(self, r: int) -> int:
        if r <= 0:
            return 1
        if r == 1:
            return 1 << self.w
        return len(_gram_forms(r)) * (1 << (self.w * (r - 1)))

    def find(self, r: int, start: int = 1, stop: int | None = None) -> int | None:
        """Packed S of rank <= r in the space, scanning first-column tuples in [start, stop);
        found whenever some member has rank exactly r."""
        w = self.w
        if r == 0:
            return 0 if self.rhs == 0 else None
        if r <= 2:
            return self._find_gray(r, start, (1 << w) if stop is None else stop)
        stop = (1 << (w * (r - 1))) if stop is None else stop
        mask = (1 << w) - 1
        forms = _gram_forms(r)
        for code in range(start, stop):
            us = [(code >> (w * c)) & mask for c in range(r - 1)]
            if not all(us):
                continue
            for G in forms:
                # S' = U' G' U'^T, z = U' g with g the last column of G minus its corner
                rows = [0] * w
                for a in range(w):
                    coeff = 0
                    for c in range(r - 1):
                        if (us[c] >> a) & 1:
                            coeff ^= G[c] & ((1 << (r - 1)) - 1)
                    row = 0
                    for d in range(r - 1):
                        if (coeff >> d) & 1:
                            row ^= us[d]
                    rows[a] = row
                z = 0
                for c in range(r - 1):
                    if (G[c] >> (r - 1)) & 1:
                        z ^= us[c]
                base = self._apply(rows)
                ycols = []
                for k in range(w):
                    acc = 0
                    zz = z & ~(1 << k)
                    a = 0
                    while zz:
                        if zz & 1:
                            acc ^= self.cols[var_index(a, k, w)]
                        zz >>= 1
                        a += 1
                    ycols.append(acc)
                y = _solve_small(ycols, self.rhs ^ base)
                if y is not None:
                    for a in range(w):
                        if (z >> a) & 1:
                            rows[a] ^= y
                        if (y >> a) & 1:
                            rows[a] ^= z
                    return self.red._pack_rows(rows)
        return None


    def _find_gray(self, r: int, start: int, stop: int) -> int | None:
        # walk x in Gray-code order keeping acc[k] = sum of table[k][b] over b in x - {k}
        # and quad = constraint image of x x^T, so each step costs O(w)
        w, T, rhs = self.w, self.table, self.rhs
        x = start ^ (start >> 1)
        acc = [0] * w
        quad = 0
        for a in range(w):
            if (x >> a) & 1:
                quad ^= T[a][a]
                for b in range(w):
                    if b != a:
                        acc[b] ^= T[b][a]
                        if b > a and (x >> b) & 1:
                            quad ^= T[a][b]
        for code in range(start, stop):
            if code != start:
                k = (code & -code).bit_length() - 1
                quad ^= acc[k] ^ T[k][k]
                x ^= 1 << k
                for j in range(w):
                    if j != k:
                        acc[j] ^= T[j][k]
            if not x:
                continue
            if r == 1:
                if quad == rhs:
                    return self.red._pack_rows([x if (x >> a) & 1 else 0 for a in range(w)])
                continue
            # rank 2: S = c * x x^T + x y^T + y x^T for c = 0 (alternating) then c = 1
            for c, base in ((0, 0), (1, quad)):
                y = _solve_small(acc, rhs ^ base)
                if y is not None:
                    rows = [(x if c and (x >> a) & 1 else 0) ^ (y if (x >> a) & 1 else 0) ^ (x if (y >> a) & 1 else 0) for a in range(w)]
                    return self.red._pack_rows(rows)
        return None


def _parallel_first(fn, total: int, threads: int, lo: int = 0):
    """Run fn(start, stop) over contiguous chunks; the earliest non-None result wins."""
    if threads <= 1 or total - lo < 2:
        return fn(lo, total)
    step = -(-(total - lo) // threads)
    bounds = [(a, min(a + step, total)) for a in range(lo, total, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(lambda ab: fn(*ab), bounds))
    return next((r for r in results if r is not None), None)


def min_rank_over_space(
    space: AffineSpace,
    indexer: SubsetIndexer,
    even: bool = False,
    threshold: int = ENUMERATION_THRESHOLD,
    n_samples: int = N_SAMPLES,
    seed: int = 0,
    search_budget: int = SEARCH_BUDGET,
    threads: int = 1,
    stop_at_floor: bool = True,
) -> MinRankReport:
    """Bracket the least rank of a member of ``space`` (valid matrices of ``indexer``).

    When the space has dimension <= ``threshold`` every member is ranked
    (in coefficient order; the least index among minimizers is the
    witness) and ``lower == upper``. Otherwise ``upper`` is the best of
    ``n_samples`` seeded samples, ``lower`` is :func:`rank_floor`, and the
    gap is then closed where affordable by exact rank-r searches over the
    column span (see :class:`_LowRankSearch`) for r = lower, lower+1, ...
    while their cost stays within ``search_budget``.

    ``stop_at_floor`` ends enumeration at the first member whose rank
    meets the proven floor; pass ``False`` to rank every member.
    """
    if space is None:
        raise ValueError("the constraint system is infeasible; there is nothing to minimize")
    n = indexer.size
    if space.n_vars != n_variables(n):
        raise ShapeError(f"space has {space.n_vars} variables, expected {n_variables(n)} for {indexer}")
    red = _Reduced(space, n)
    floor = rank_floor(indexer.m, indexer.l, even)
    stop_floor = floor if stop_at_floor else -1
    details = {"dimension": space.dimension, "span": red.w, "floor": floor}

    if space.dimension <= threshold:
        total = 1 << space.dimension
        if threads <= 1 or total < 2:
            best = _enumerate_chunk(red, 0, total, stop_floor)
        else:
            step = -(-total // threads)
            bounds = [(a, min(a + step, total)) for a in range(0, total, step)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                best = min(pool.map(lambda ab: _enumerate_chunk(red, ab[0], ab[1], stop_floor), bounds))
        r, t = best
        return MinRankReport(r, r, ChooseMatrix(indexer, vector_to_matrix(space.member(t), n)), "enumeration", details)

    rng = random.Random(seed)
    coeffs = [rng.getrandbits(space.dimension) for _ in range(n_samples)]

    def sample_chunk(lo: int, hi: int) -> tuple[int, int]:
        best = (n + 1, -1)
        for i in range(lo, hi):
            rk = red.rank_of(red.member_packed(coeffs[i]))
            if rk < best[0]:
                best = (rk, i)
        return best

    if n_samples:
        if threads <= 1:
            best_rank, best_i = sample_chunk(0, n_samples)
        else:
            step = -(-n_samples // threads)
            bounds = [(a, min(a + step, n_samples)) for a in range(0, n_samples, step)]
            with ThreadPoolExecutor(max_workers=threads) as pool:
                best_rank, best_i = min(pool.map(lambda ab: sample_chunk(*ab), bounds))
        upper, witness_s = best_rank, red.member_packed(coeffs[best_i])
    else:
        upper, witness_s = red.rank_of(red.s0), red.s0
    method = "sampling"
    details["sampled"] = upper

    lower = floor
    search = None
    r = lower
    while r < upper:
        if search is None:
            search = _LowRankSearch(red)
        if search.cost(r) > search_budget:
            break
        if r == 0:
            found = search.find(0)
        else:
            limit = (1 << search.w) if r == 1 else (1 << (search.w * (r - 1)))
            found = _parallel_first(lambda a, b, r=r: search.find(r, a, b), limit, threads, lo=1)
        if found is not None:
            upper, witness_s = red.rank_of(found), found
            method = "search"
            break
        lower = r + 1
        method = "sampling+search"
        r += 1
    witness = ChooseMatrix(indexer, red.lift(witness_s))
    return MinRankReport(min(lower, upper), upper, witness, method, details)


def choose_min_rank(m: int, l: int, even: bool = False, **kwargs) -> MinRankReport:
    space = solve_choose_space(m, l, even)
    return min_rank_over_space(space, SubsetIndexer(m, l), even, **kwargs)


# ---------------------------------------------------------------- reductions


def restrict(A: ChooseMatrix) -> ChooseMatrix:
    """Drop every subset containing the largest element m - 1."""
    m, l = A.m, A.l
    if m - 1 < l:
        raise ValueError(f"cannot restrict: m - 1 = {m - 1} < l = {l}")
    sub = SubsetIndexer(m - 1, l)
    keep = [A.indexer.index_of(s) for s in sub.subsets]
    return ChooseMatrix(sub, A.matrix.submatrix(keep, keep))


def _avoiding(A: ChooseMatrix, banned: set[int]) -> list[int]:
    return [i for i, s in enumerate(A.indexer.subsets) if banned.isdisjoint(s)]


def delete_blocks(A: ChooseMatrix, X: Iterable[int], Y: Iterable[int] | None = None) -> BitMatrix:
    """Delete the rows/columns of subsets meeting X (or X and Y).

    One set: needs A[X,X] = 1 and guarantees rank(A) > rank(B).
    Two sets: needs A[X,X] = A[Y,Y] = 0, A[X,Y] = 1 and guarantees
    rank(A) >= rank(C) + 2. A failed guarantee raises ContractViolation.
    """
    X = tuple(sorted(X))
    if Y is None:
        if A.entry(X, X) != 1:
            raise ValueError(f"precondition A[X,X] = 1 fails for X = {X}")
        keep = _avoiding(A, set(X))
        B = A.matrix.submatrix(keep, keep)
        if not rank(A.matrix) > rank(B):
            raise ContractViolation(f"rank(A) = {rank(A.matrix)} is not above rank(B) = {rank(B)}")
        return B
    Y = tuple(sorted(Y))
    if A.entry(X, X) != 0 or A.entry(Y, Y) != 0 or A.entry(X, Y) != 1:
        raise ValueError(f"precondition A[X,X] = A[Y,Y] = 0, A[X,Y] = 1 fails for X = {X}, Y = {Y}")
    keep = _avoiding(A, set(X) | set(Y))
    C = A.matrix.submatrix(keep, keep)
    if not rank(A.matrix) >= rank(C) + 2:
        raise ContractViolation(f"rank(A) = {rank(A.matrix)} is below rank(C) + 2 = {rank(C) + 2}")
    return C


def relabel(A: ChooseMatrix, perm: Sequence[int]) -> ChooseMatrix:
    """The matrix with element e renamed perm[e]."""
    ix = A.indexer
    if sorted(perm) != list(range(ix.m)):
        raise ValueError("perm must be a permutation of range(m)")
    target = [ix.index_of(perm[e] for e in s) for s in ix.subsets]
    inv = [0] * ix.size
    for old, new in enumerate(target):
        inv[new] = old
    return ChooseMatrix(ix, A.matrix.submatrix(inv, inv))


def project_out_odd(A: ChooseMatrix, X: Iterable[int]) -> ChooseMatrix:
    """Split off an odd subset X and keep the projected form on [m - l + 1].

    Elements are first renamed so that X becomes {m-l, ..., m-1} (others
    keep their relative order). Then D[P,Q] = A[P,Q] + A[P,X] A[Q,X] for
    l-subsets P, Q of {0, ..., m-l}. The result is reported in the renamed
    coordinates; rank(D) < rank(A) is enforced.
    """
    X = tuple(sorted(X))
    m, l = A.m, A.l
    if len(X) != l:
        raise ValueError(f"X must have {l} elements")
    if A.entry(X, X) != 1:
        raise ValueError(f"precondition A[X,X] = 1 fails for X = {X}")
    others = [e for e in range(m) if e not in X]
    perm = [0] * m
    for new, e in enumerate(others + list(X)):
        perm[e] = new
    B = relabel(A, perm)
    top = tuple(range(m - l, m))
    xcol = B.matrix.rows[B.indexer.index_of(top)]
    sub = SubsetIndexer(m - l + 1, l)
    keep = [B.indexer.index_of(s) for s in sub.subsets]
    D = B.matrix.submatrix(keep, keep)
    xs = sum(((xcol >> p) & 1) << k for k, p in enumerate(keep))
    D = BitMatrix((r ^ (xs if (xs >> k) & 1 else 0) for k, r in enumerate(D.rows)), D.n_cols)
    if not rank(D) < rank(A.matrix):
        raise ContractViolation(f"rank(D) = {rank(D)} is not below rank(A) = {rank(A.matrix)}")
    return ChooseMatrix(sub, D)


# ---------------------------------------------------------------- partition identity


def partition_symmetric_difference(i: int) -> frozenset:
    """XOR over splits [5] - i = s + t (2-sets) of the pairs {a, b} of 2-subsets
    of [5] with a inside s + i and b inside t + i."""
    ground = range(5)
    rest = tuple(x for x in ground if x != i)
    acc: set = set()
    for sigma, tau in _splits(rest, 2):
        left = tuple(sorted(sigma + (i,)))
        right = tuple(sorted(tau + (i,)))
        T = {frozenset((a, b)) for a in combinations(left, 2) for b in combinations(right, 2)}
        acc ^= T
    return frozenset(acc)


def verify_partition_identity() -> bool:
    pairs = [frozenset(p) for p in combinations(list(combinations(range(5), 2)), 2)]
    disjoint = frozenset(p for p in pairs if set.isdisjoint(*map(set, p)))
    return all(partition_symmetric_difference(i) == disjoint for i in range(5))


# ---------------------------------------------------------------- text format


def format_choose(A: ChooseMatrix) -> str:
    return f"# m={A.m} l={A.l}\n" + format_matrix(A.matrix)


def parse_choose(text: str, m: int | None = None, l: int | None = None) -> ChooseMatrix:
    """Read a matrix with an optional ``# m=<m> l=<l>`` header; explicit m, l must agree."""
    header = None
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#"):
            fields = dict(tok.split("=", 1) for tok in s[1:].split() if "=" in tok)
            if "m" in fields and "l" in fields:
                try:
                    header = (int(fields["m"]), int(fields["l"]))
                except ValueError:
                    raise MatrixFormatError(f"bad header {s!r}") from None
                break
    if header is not None:
        if (m is not None and m != header[0]) or (l is not None and l != header[1]):
            raise MatrixFormatError(f"header says m={header[0]} l={header[1]}, expected m={m} l={l}")
        m, l = header
    if m is None or l is None:
        raise MatrixFormatError("m and l are required (header '# m=<m> l=<l>' or explicit)")
    M = parse_matrix(text)
    ix = SubsetIndexer(m, l)
    if M.shape != (ix.size, ix.size):
        raise MatrixFormatError(f"expected a {ix.size}x{ix.size} matrix for m={m} l={l}, got {M.n_rows}x{M.n_cols}")
    return ChooseMatrix(ix, M)
