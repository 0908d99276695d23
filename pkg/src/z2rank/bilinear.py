"""Symmetric bilinear forms over Z2 and their canonical decomposition.

Every symmetric form splits into k hyperbolic planes (Gram block
[[0,1],[1,0]]), l odd lines (Gram entry 1) and a radical, with 2k + l equal
to its rank. The pair (k, l) is not an invariant: I_3 is congruent to
[1] + H, so only validity of a decomposition is certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gf2_core import BitMatrix, ShapeError, as_vector, int_to_bits, rank


def _check(A: BitMatrix) -> None:
    if not A.is_square:
        raise ShapeError("square matrix required")
    if not A.is_symmetric():
        raise ValueError("symmetric matrix required")


def evaluate_form(A: BitMatrix, U, V) -> int:
    """A(U, V) = sum of A[i][j] U_i V_j over Z2."""
    n = A.n_cols
    u, v = as_vector(U), as_vector(V)
    if u >> n or v >> n:
        raise ShapeError(f"vectors must have at most {n} coordinates")
    return (u & A.apply(v)).bit_count() & 1


def project_off_odd(A: BitMatrix, X, P) -> int:
    """P + A(X,P) X, which is A-orthogonal to X (needs A(X,X) = 1)."""
    x, p = as_vector(X), as_vector(P)
    if evaluate_form(A, x, x) != 1:
        raise ValueError("X must satisfy A(X,X) = 1")
    return p ^ x if evaluate_form(A, x, p) else p


def project_off_pair(A: BitMatrix, X, Y, P) -> int:
    """P + A(X,P) Y + A(Y,P) X, A-orthogonal to the hyperbolic pair X, Y."""
    x, y, p = as_vector(X), as_vector(Y), as_vector(P)
    if evaluate_form(A, x, y) != 1 or evaluate_form(A, x, x) or evaluate_form(A, y, y):
        raise ValueError("X, Y must satisfy A(X,Y) = 1 and A(X,X) = A(Y,Y) = 0")
    out = p
    if evaluate_form(A, x, p):
        out ^= y
    if evaluate_form(A, y, p):
        out ^= x
    return out


def gram(A: BitMatrix, basis: Sequence[int]) -> BitMatrix:
    images = [A.apply(b) for b in basis]
    rows = []
    for u in basis:
        rows.append(sum(((u & im).bit_count() & 1) << j for j, im in enumerate(images)))
    return BitMatrix(rows, len(basis))


def canonical_gram(k: int, l: int, n: int) -> BitMatrix:
    rows = [0] * n
    for i in range(k):
        rows[2 * i] = 1 << (2 * i + 1)
        rows[2 * i + 1] = 1 << (2 * i)
    for j in range(2 * k, 2 * k + l):
        rows[j] = 1 << j
    return BitMatrix(rows, n)


@dataclass(frozen=True)
class FormDecomposition:
    """Basis X1, Y1, ..., Xk, Yk, Z1, ..., Z_{n-2k}; Z1..Zl odd, the rest radical."""

    k: int
    l: int
    basis: tuple[int, ...]
    n: int

    @property
    def hyperbolic_pairs(self) -> list[tuple[int, int]]:
        return [(self.basis[2 * i], self.basis[2 * i + 1]) for i in range(self.k)]

    @property
    def odd(self) -> tuple[int, ...]:
        return self.basis[2 * self.k : 2 * self.k + self.l]

    @property
    def radical(self) -> tuple[int, ...]:
        return self.basis[2 * self.k + self.l :]

    def violations(self, A: BitMatrix) -> list[str]:
        """Failed invariants against A; empty when the decomposition is valid."""
        out = []
        if len(self.basis) != self.n or rank(BitMatrix(self.basis, self.n)) != self.n:
            out.append("basis is not a basis")
        if 2 * self.k + self.l > self.n:
            out.append("2k + l exceeds n")
        if gram(A, self.basis) != canonical_gram(self.k, self.l, self.n):
            out.append("Gram matrix is not canonical")
        if 2 * self.k + self.l != rank(A):
            out.append("2k + l differs from the rank")
        return out

    def to_json(self) -> dict:
        return {"k": self.k, "l": self.l, "basis": [int_to_bits(b, self.n) for b in self.basis]}


def classify(A: BitMatrix) -> FormDecomposition:
    """Decompose A by splitting off odd vectors first, then hyperbolic pairs.

    Generators start as the standard basis and are scanned in order; the
    first odd generator (or first lexicographic pair (i, j) with A = 1) is
    split off and the rest are projected onto its orthogonal complement.
    """
    _check(A)
    n = A.n_rows
    gens = [1 << i for i in range(n)]
    odd: list[int] = []
    pairs: list[int] = []
    while True:
        pick = next((i for i, g in enumerate(gens) if evaluate_form(A, g, g)), None)
        if pick is None:
            break
        x = gens.pop(pick)
        odd.append(x)
        gens = [project_off_odd(A, x, g) for g in gens]
    while True:
        # every generator is now even, so the remaining form is alternating
        pick = next(
            ((i, j) for i in range(len(gens)) for j in range(i + 1, len(gens)) if evaluate_form(A, gens[i], gens[j])),
            None,
        )
        if pick is None:
            break
        i, j = pick
        x, y = gens[i], gens[j]
        gens = [g for t, g in enumerate(gens) if t not in (i, j)]
        pairs += [x, y]
        gens = [project_off_pair(A, x, y, g) for g in gens]
    return FormDecomposition(len(pairs) // 2, len(odd), tuple(pairs + odd + gens), n)
