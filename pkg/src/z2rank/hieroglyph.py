"""Hieroglyphs (cyclic double-occurrence words) and their realizability.

A hieroglyph on n letters is a non-oriented cyclic word of length 2n in
which every letter occurs twice. Two letters overlap when they interlace
(``abab``); the overlap matrix M(H) records this, with zero diagonal. H is
weakly realizable on the disk with k Moebius bands iff R(M(H)) <= k.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .diag_completion import (
    DEFAULT_BUDGET,
    CompletionResult,
    Rank1Certificate,
    complete_to_rank_le1,
    min_rank,
    min_rank_exact,
)
from .gf2_core import BitMatrix


class HieroglyphError(ValueError):
    pass


def _symmetries(word: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    rev = word[::-1]
    for w in (word, rev):
        for s in range(len(w)):
            yield w[s:] + w[:s]


@dataclass(frozen=True)
class Hieroglyph:
    """Canonical hieroglyph: ``word`` is the least rotation/reversal, ``letters``
    is the alphabet in order of first occurrence in ``word``."""

    letters: tuple[str, ...]
    word: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.letters)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> Hieroglyph:
        tokens = tuple(tokens)
        counts = Counter(tokens)
        bad = sorted(t for t, c in counts.items() if c != 2)
        if bad:
            detail = ", ".join(f"{t!r} occurs {counts[t]} time(s)" for t in bad)
            raise HieroglyphError(f"every letter must occur exactly twice: {detail}")
        word = min(_symmetries(tokens)) if tokens else ()
        letters = tuple(dict.fromkeys(word))
        return cls(letters, word)

    def symmetric_words(self) -> list[tuple[str, ...]]:
        """All 2 * 2n rotations and reversals of the word (with repeats if any coincide)."""
        return list(_symmetries(self.word))

    def __str__(self) -> str:
        sep = "" if all(len(t) == 1 for t in self.word) else " "
        return sep.join(self.word)


def parse(text: str, multichar: bool = False) -> Hieroglyph:
    """Parse a hieroglyph.

    By default every non-whitespace character is a letter (letters and
    digits only). With ``multichar=True`` tokens are whitespace-separated.
    """
    if multichar:
        tokens = text.split()
    else:
        tokens = [c for c in text if not c.isspace()]
        odd = [c for c in tokens if not c.isalnum()]
        if odd:
            raise HieroglyphError(f"unexpected character {odd[0]!r}; letters and digits only")
    return Hieroglyph.from_tokens(tokens)


def _overlap_rows(word: tuple[str, ...], letters: tuple[str, ...]) -> list[int]:
    # row i = XOR of letter bits strictly between the two occurrences of i;
    # letters occurring twice in between cancel, leaving exactly the interlaced ones
    index = {t: i for i, t in enumerate(letters)}
    first: dict[str, int] = {}
    rows = [0] * len(letters)
    for pos, t in enumerate(word):
        if t in first:
            acc = 0
            for q in range(first[t] + 1, pos):
                acc ^= 1 << index[word[q]]
            rows[index[t]] = acc
        else:
            first[t] = pos
    return rows


@dataclass(frozen=True)
class OverlapMatrix:
    letters: tuple[str, ...]
    matrix: BitMatrix


def overlap_matrix(H: Hieroglyph) -> OverlapMatrix:
    return OverlapMatrix(H.letters, BitMatrix(_overlap_rows(H.word, H.letters), H.n))


def min_genus(H: Hieroglyph, budget: int = DEFAULT_BUDGET, threads: int = 1) -> int:
    """Least k with H weakly realizable on the disk with k Moebius bands."""
    return min_rank(overlap_matrix(H).matrix, budget=budget, threads=threads).achieved_rank


def genus_with_witness(H: Hieroglyph, budget: int = DEFAULT_BUDGET, threads: int = 1) -> CompletionResult:
    return min_rank(overlap_matrix(H).matrix, budget=budget, threads=threads)


@dataclass(frozen=True)
class Realizability:
    realizable: bool
    witness: tuple[int, ...] | None = None
    certificate: Rank1Certificate | None = None

    def __bool__(self) -> bool:
        return self.realizable


def realizable_on(H: Hieroglyph, k: int, threads: int = 1) -> Realizability:
    """Whether R(M(H)) <= k; on success carries the completing diagonal.

    The diagonal is reported as computed; it is not translated into ribbon
    twists.
    """
    res = min_rank_exact(overlap_matrix(H).matrix, k, threads=threads)
    if res is None:
        return Realizability(False)
    return Realizability(True, witness=tuple(res.witness.bits()))


def mobius_realizable(H: Hieroglyph) -> Realizability:
    """O(n^2) test for the Moebius band (R(M(H)) <= 1) with a certificate on failure."""
    out = complete_to_rank_le1(overlap_matrix(H).matrix)
    if isinstance(out, Rank1Certificate):
        return Realizability(False, certificate=out)
    return Realizability(True, witness=tuple(out.witness.bits()))


def all_hieroglyphs(n: int) -> list[Hieroglyph]:
    """Every hieroglyph on the letters a, b, c, ... (n of them) up to rotation,
    reversal and renaming of letters."""
    alphabet = [chr(ord("a") + i) for i in range(n)] if n <= 26 else [f"x{i}" for i in range(n)]
    seen: dict[tuple[int, ...], Hieroglyph] = {}

    def normal(word: tuple[str, ...]) -> tuple[int, ...]:
        best = None
        for w in _symmetries(word):
            names: dict[str, int] = {}
            key = tuple(names.setdefault(t, len(names)) for t in w)
            if best is None or key < best:
                best = key
        return best or ()

    def extend(word: list[str], used: int, open_: list[str]) -> None:
        if len(word) == 2 * n:
            key = normal(tuple(word))
            if key not in seen:
                seen[key] = Hieroglyph.from_tokens(alphabet[i] for i in key)
            return
        if used < n:
            t = alphabet[used]
            extend(word + [t], used + 1, open_ + [t])
        for t in list(open_):
            rest = [o for o in open_ if o != t]
            extend(word + [t], used, rest)

    extend([], 0, [])
    return [seen[k] for k in sorted(seen)]
