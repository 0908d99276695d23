"""Dense linear algebra over Z2 with bit-packed rows.

Bit-vectors are plain Python ints: bit ``i`` holds coordinate ``i`` (LSB-first).
A :class:`BitMatrix` stores one such int per row and exposes the same data
packed into little-endian 64-bit words (``BitMatrix.words``) for the numpy
elimination kernel used on large inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

WORD_BITS = 64
# below this many matrix cells the int-row kernels beat the numpy word kernels
_NUMPY_CUTOFF = 512 * 512
# rank_le keeps an explicit table of 2^k sums; past this it just computes rank
RANK_LE_TABLE_CAP = 20


class ShapeError(ValueError):
    pass


class MatrixFormatError(ValueError):
    pass


def popcount(v: int) -> int:
    return v.bit_count()


def bits_to_int(bits: Iterable[int]) -> int:
    v = 0
    for i, b in enumerate(bits):
        if b not in (0, 1, True, False):
            raise ValueError(f"not a bit: {b!r}")
        if b:
            v |= 1 << i
    return v


def int_to_bits(v: int, length: int) -> list[int]:
    return [(v >> i) & 1 for i in range(length)]


def as_vector(v, length: int | None = None) -> int:
    """Accept an int bitmask or a 0/1 sequence and return the int form."""
    if isinstance(v, (int, np.integer)):
        v = int(v)
        if v < 0:
            raise ValueError("bit-vectors are non-negative")
    else:
        v = bits_to_int(v)
    if length is not None and v >> length:
        raise ShapeError(f"vector has bits beyond length {length}")
    return v


def _n_words(n_cols: int) -> int:
    return max(1, -(-n_cols // WORD_BITS))


def _ints_to_words(rows: Sequence[int], n_cols: int) -> np.ndarray:
    nw = _n_words(n_cols)
    buf = b"".join(r.to_bytes(nw * 8, "little") for r in rows)
    return np.frombuffer(buf, dtype="<u8").reshape(len(rows), nw).copy()


def _words_to_ints(words: np.ndarray) -> list[int]:
    words = np.ascontiguousarray(words, dtype="<u8")
    return [int.from_bytes(w.tobytes(), "little") for w in words]


class BitMatrix:
    """Immutable matrix over Z2; row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    __slots__ = ("n_rows", "n_cols", "_rows", "_words")

    def __init__(self, rows: Iterable[int], n_cols: int):
        rows = tuple(int(r) for r in rows)
        if n_cols < 0:
            raise ShapeError("negative column count")
        limit = 1 << n_cols
        for r in rows:
            if r < 0 or r >= limit:
                raise ShapeError(f"row {r:#x} does not fit in {n_cols} columns")
        self.n_rows = len(rows)
        self.n_cols = n_cols
        self._rows = rows
        self._words = None

    # construction

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], n_cols: int | None = None) -> BitMatrix:
        entries = [list(r) for r in entries]
        if n_cols is None:
            n_cols = len(entries[0]) if entries else 0
        for r in entries:
            if len(r) != n_cols:
                raise ShapeError("ragged rows")
        return cls((bits_to_int(r) for r in entries), n_cols)

    @classmethod
    def from_words(cls, words: np.ndarray, n_cols: int) -> BitMatrix:
        return cls(_words_to_ints(words), n_cols)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int | None = None) -> BitMatrix:
        return cls([0] * n_rows, n_rows if n_cols is None else n_cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls((1 << i for i in range(n)), n)

    @classmethod
    def diagonal_matrix(cls, bits: int, n: int) -> BitMatrix:
        return cls((bits & (1 << i) for i in range(n)), n)

    @classmethod
    def random(cls, n_rows: int, n_cols: int | None = None, rng: random.Random | int | None = None) -> BitMatrix:
        if n_cols is None:
            n_cols = n_rows
        if not isinstance(rng, random.Random):
            rng = random.Random(rng)
        return cls((rng.getrandbits(n_cols) if n_cols else 0 for _ in range(n_rows)), n_cols)

    # views

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def words(self) -> np.ndarray:
        """Rows packed LSB-first into 64-bit words, shape ``(n_rows, ceil(n_cols/64))``."""
        if self._words is None:
            w = _ints_to_words(self._rows, self.n_cols)
            w.setflags(write=False)
            self._words = w
        return self._words

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= j < self.n_cols):
            raise IndexError(j)
        return (self._rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [int_to_bits(r, self.n_cols) for r in self._rows]

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self._rows))

    def diagonal(self) -> int:
        return sum(((self._rows[i] >> i) & 1) << i for i in range(min(self.n_rows, self.n_cols)))

    # algebra

    def transpose(self) -> BitMatrix:
        if self.n_rows == 0 or self.n_cols == 0:
            return BitMatrix([0] * self.n_cols, self.n_rows)
        nb = -(-self.n_cols // 8)
        buf = b"".join(r.to_bytes(nb, "little") for r in self._rows)
        bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(self.n_rows, nb), axis=1, bitorder="little")
        t = np.ascontiguousarray(bits[:, : self.n_cols].T)
        packed = np.packbits(t, axis=1, bitorder="little")
        return BitMatrix((int.from_bytes(p.tobytes(), "little") for p in packed), self.n_rows)

    T = property(transpose)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix((a ^ b for a, b in zip(self._rows, other._rows)), self.n_cols)

    __xor__ = __add__

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.n_cols != other.n_rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self._rows:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other._rows[j]
                r >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(out, other.n_cols)

    def apply(self, v: int) -> int:
        """Matrix-vector product ``M v`` with ``v`` an int of ``n_cols`` bits."""
        return sum((popcount(r & v) & 1) << i for i, r in enumerate(self._rows))

    def with_diagonal(self, bits: int) -> BitMatrix:
        """Copy of a square matrix whose main diagonal is overwritten by ``bits``."""
        _require_square(self)
        return BitMatrix(((r & ~(1 << i)) | (bits & (1 << i)) for i, r in enumerate(self._rows)), self.n_cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> BitMatrix:
        out = []
        for i in rows:
            r = self._rows[i]
            out.append(sum(((r >> c) & 1) << k for k, c in enumerate(cols)))
        return BitMatrix(out, len(cols))

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.n_cols == other.n_cols and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n_cols, self._rows))

    def __repr__(self) -> str:
        if self.n_rows * self.n_cols <= 256:
            body = ",".join("".join(map(str, r)) for r in self.to_lists())
            return f"BitMatrix({self.n_rows}x{self.n_cols}: {body})"
        return f"BitMatrix({self.n_rows}x{self.n_cols})"


def _require_square(M: BitMatrix) -> None:
    if not M.is_square:
        raise ShapeError("square matrix required")


# ---------------------------------------------------------------- kernels


def _rank_rows(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def _rank_words(words: np.ndarray, n_cols: int) -> int:
    """Forward elimination on a private copy of packed rows."""
    w = np.array(words, dtype=np.uint64, copy=True)
    n_rows = w.shape[0]
    rank = 0
    one = np.uint64(1)
    for c in range(n_cols):
        if rank == n_rows:
            break
        wi, bi = divmod(c, WORD_BITS)
        mask = one << np.uint64(bi)
        nz = np.flatnonzero(w[rank:, wi] & mask)
        if nz.size == 0:
            continue
        p = rank + int(nz[0])
        if p != rank:
            w[[rank, p]] = w[[p, rank]]
        # swapping rank <-> p leaves every other row with this bit in place
        below = rank + nz[1:]
        if below.size:
            # rows below the pivot are already zero in every column < c
            w[below, wi:] ^= w[rank, wi:]
        rank += 1
    return rank


def _rref_words(words: np.ndarray, n_cols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero reduced rows, pivot columns)."""
    w = np.array(words, dtype=np.uint64, copy=True)
    n_rows = w.shape[0]
    rank = 0
    pivots: list[int] = []
    one = np.uint64(1)
    for c in range(n_cols):
        if rank == n_rows:
            break
        wi, bi = divmod(c, WORD_BITS)
        mask = one << np.uint64(bi)
        nz = np.flatnonzero(w[rank:, wi] & mask)
        if nz.size == 0:
            continue
        p = rank + int(nz[0])
        if p != rank:
            w[[rank, p]] = w[[p, rank]]
        hits = np.flatnonzero(w[:, wi] & mask)
        hits = hits[hits != rank]
        if hits.size:
            w[hits, wi:] ^= w[rank, wi:]
        pivots.append(c)
        rank += 1
    return w[:rank], pivots


def _rref_rows(rows: Sequence[int], n_cols: int) -> tuple[list[int], list[int]]:
    rows = list(rows)
    n_rows = len(rows)
    rank = 0
    pivots: list[int] = []
    for c in range(n_cols):
        if rank == n_rows:
            break
        bit = 1 << c
        for p in range(rank, n_rows):
            if rows[p] & bit:
                break
        else:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        pr = rows[rank]
        for i in range(n_rows):
            if i != rank and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        rank += 1
    return rows[:rank], pivots


def rref(rows: Sequence[int], n_cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of int rows; picks the word kernel for big inputs."""
    if len(rows) * n_cols > _NUMPY_CUTOFF:
        w, piv = _rref_words(_ints_to_words(list(rows), n_cols), n_cols)
        return _words_to_ints(w), piv
    return _rref_rows(rows, n_cols)


# ---------------------------------------------------------------- operations


def rank(M: BitMatrix) -> int:
    """Rank over Z2 by Gaussian elimination (O(n^3) bit operations, word-parallel)."""
    if M.n_rows == 0 or M.n_cols == 0:
        return 0
    if M.n_rows * M.n_cols > _NUMPY_CUTOFF:
        return _rank_words(M.words, M.n_cols)
    return _rank_rows(M.rows)


def _rank_le_rows(rows: Iterable[int], k: int) -> bool:
    sums = {0}
    size = 0
    for r in rows:
        if r in sums:
            continue
        if size == k:
            return False
        sums |= {s ^ r for s in sums}
        size += 1
    return True


def rank_le(M: BitMatrix, k: int) -> bool:
    """Decide ``rank(M) <= k`` with the incremental spanning-set scheme.

    Rows are scanned in order while a table of all sums of the independent
    rows collected so far is kept; a row outside the table joins the set,
    and the answer is ``False`` as soon as ``k + 1`` rows have joined.
    Row rank equals column rank, so scanning rows instead of columns is
    equivalent. Cost is O(2^k n^2); for ``k`` above ``RANK_LE_TABLE_CAP``
    the table would dominate and plain elimination is used instead.
    """
    if k < 0:
        return False
    if k >= min(M.n_rows, M.n_cols):
        return True
    if k > RANK_LE_TABLE_CAP:
        return rank(M) <= k
    return _rank_le_rows(M.rows, k)


def det(M: BitMatrix) -> int:
    """Determinant over Z2; the empty matrix has determinant 1."""
    _require_square(M)
    return int(rank(M) == M.n_rows)


def is_degenerate(M: BitMatrix) -> bool:
    return det(M) == 0


def det_permutation_sum(M: BitMatrix) -> int:
    """Determinant as the parity of rook placements on the ones of M (slow; oracle use)."""
    from itertools import permutations

    _require_square(M)
    n = M.n_rows
    total = 0
    for sigma in permutations(range(n)):
        total ^= all((M.rows[i] >> sigma[i]) & 1 for i in range(n))
    return int(total)


# elementary operations: ("swap_rows", i, j), ("swap_cols", i, j),
# ("add_rows", src, dst) meaning row dst += row src, ("add_cols", src, dst)
ElementaryOp = tuple[str, int, int]


def _swap_bits(r: int, i: int, j: int) -> int:
    if ((r >> i) ^ (r >> j)) & 1:
        r ^= (1 << i) | (1 << j)
    return r


def apply_ops(M: BitMatrix, ops: Iterable[ElementaryOp]) -> BitMatrix:
    """Replay a transcript of elementary row/column operations."""
    rows = list(M.rows)
    for name, a, b in ops:
        if name == "swap_rows":
            rows[a], rows[b] = rows[b], rows[a]
        elif name == "add_rows":
            if a == b:
                raise ValueError("cannot add a row to itself")
            rows[b] ^= rows[a]
        elif name == "swap_cols":
            rows = [_swap_bits(r, a, b) for r in rows]
        elif name == "add_cols":
            if a == b:
                raise ValueError("cannot add a column to itself")
            rows = [r ^ (((r >> a) & 1) << b) for r in rows]
        else:
            raise ValueError(f"unknown elementary operation {name!r}")
    return BitMatrix(rows, M.n_cols)


def reduce_to_diagonal(M: BitMatrix) -> tuple[BitMatrix, list[ElementaryOp]]:
    """Bring M to diagonal form by swaps and row/column additions.

    At step t a one inside the lower-right block is moved to (t, t), then
    cleared out of its row and column. The result has zeros at every
    (i, j) with i != j (also for rectangular M) and its number of ones
    equals rank(M). The returned transcript replays with :func:`apply_ops`.
    """
    rows = list(M.rows)
    ops: list[ElementaryOp] = []
    n_rows, n_cols = M.n_rows, M.n_cols
    for t in range(min(n_rows, n_cols)):
        high = ~((1 << t) - 1)
        found = None
        for i in range(t, n_rows):
            r = rows[i] & high
            if r:
                found = (i, (r & -r).bit_length() - 1)
                break
        if found is None:
            break
        i, j = found
        if i != t:
            rows[t], rows[i] = rows[i], rows[t]
            ops.append(("swap_rows", t, i))
        if j != t:
            rows = [_swap_bits(r, t, j) for r in rows]
            ops.append(("swap_cols", t, j))
        bit = 1 << t
        for i2 in range(t + 1, n_rows):
            if rows[i2] & bit:
                rows[i2] ^= rows[t]
                ops.append(("add_rows", t, i2))
        rest = rows[t] & ~bit
        while rest:
            j2 = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            # column t is now e_t, so this only clears entry (t, j2)
            rows[t] ^= 1 << j2
            ops.append(("add_cols", t, j2))
    return BitMatrix(rows, n_cols), ops


@dataclass(frozen=True)
class AffineSpace:
    """``particular + span(kernel_basis)`` inside Z2^n_vars."""

    n_vars: int
    particular: int
    kernel_basis: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.kernel_basis)

    def __len__(self) -> int:
        return 1 << self.dimension

    def __bool__(self) -> bool:
        # an affine space always has a member; len() overflows past 2**63
        return True

    def member(self, coeffs: int) -> int:
        """The member ``particular + sum of basis[i] for bits i of coeffs``."""
        v = self.particular
        i = 0
        while coeffs:
            if coeffs & 1:
                v ^= self.kernel_basis[i]
            coeffs >>= 1
            i += 1
        return v

    def __iter__(self) -> Iterator[int]:
        v = self.particular
        yield v
        for t in range(1, len(self)):
            # t-1 -> t flips bits 0..(trailing zeros of t)
            diff = t ^ (t - 1)
            i = 0
            while diff:
                if diff & 1:
                    v ^= self.kernel_basis[i]
                diff >>= 1
                i += 1
            yield v

    def __contains__(self, v: int) -> bool:
        return _rank_rows(self.kernel_basis + (v ^ self.particular,)) == self.dimension

    def sample(self, rng: random.Random) -> int:
        return self.member(rng.getrandbits(self.dimension) if self.dimension else 0)


def solve_linear_system(A: BitMatrix, b) -> AffineSpace | None:
    """All solutions of ``A x = b`` over Z2, or ``None`` when infeasible.

    ``b`` is an int (bit i = right-hand side of row i) or a 0/1 sequence.
    """
    b = as_vector(b)
    if b >> A.n_rows:
        raise ShapeError(f"right-hand side does not match {A.n_rows} rows")
    n = A.n_cols
    aug = [r | (((b >> i) & 1) << n) for i, r in enumerate(A.rows)]
    reduced, pivots = rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    particular = 0
    for r, c in zip(reduced, pivots):
        if (r >> n) & 1:
            particular |= 1 << c
    pivot_set = set(pivots)
    kernel = []
    for f in range(n):
        if f in pivot_set:
            continue
        v = 1 << f
        for r, c in zip(reduced, pivots):
            if (r >> f) & 1:
                v |= 1 << c
        kernel.append(v)
    return AffineSpace(n, particular, tuple(kernel))


def count_rank(m: int, n: int, k: int) -> int:
    """Number of m x n matrices over Z2 of rank exactly k (exact integer)."""
    if k < 0 or k > min(m, n):
        return 0
    num = 1 << (k * (k - 1) // 2)
    den = 1
    for i in range(k):
        num *= ((1 << (m - i)) - 1) * ((1 << (n - i)) - 1)
        den *= (1 << (k - i)) - 1
    q, r = divmod(num, den)
    assert r == 0
    return q


# ---------------------------------------------------------------- text format


def parse_matrix(text: str) -> BitMatrix:
    """Parse the '0'/'1' row-per-line format; '#' lines and blank lines are skipped."""
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if " " in line:
            parts = line.split(" ")
            if any(len(p) != 1 for p in parts):
                raise MatrixFormatError(f"line {lineno}: entries must be single characters separated by single spaces")
            line = "".join(parts)
        if set(line) - {"0", "1"}:
            raise MatrixFormatError(f"line {lineno}: unexpected character in {raw!r}")
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise MatrixFormatError(f"line {lineno}: ragged row (expected {width} entries, got {len(line)})")
        rows.append(int(line[::-1], 2))
    return BitMatrix(rows, width or 0)


def format_matrix(M: BitMatrix, spaced: bool = False) -> str:
    sep = " " if spaced else ""
    return "".join(sep.join(map(str, r)) + "\n" for r in M.to_lists())


def read_matrix(path: str | Path) -> BitMatrix:
    return parse_matrix(Path(path).read_text())
