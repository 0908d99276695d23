import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from z2rank.diag_completion import brute_force_R
from z2rank.gf2_core import BitMatrix, rank
from z2rank.hieroglyph import (
    _overlap_rows,
    Hieroglyph,
    HieroglyphError,
    all_hieroglyphs,
    genus_with_witness,
    min_genus,
    mobius_realizable,
    overlap_matrix,
    parse,
    realizable_on,
)


def interlaced(word, a, b):
    """a and b interlace iff exactly one occurrence of b lies between the two a's."""
    i, j = [k for k, t in enumerate(word) if t == a]
    return sum(1 for t in word[i + 1 : j] if t == b) == 1


@st.composite
def words(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    letters = [chr(ord("a") + i) for i in range(n)] * 2
    return "".join(draw(st.permutations(letters)))


def test_genus_examples():
    assert min_genus(parse("aabbcc")) == 0
    assert min_genus(parse("aabcbc")) == 1
    assert min_genus(parse("abacbc")) == 2
    assert min_genus(parse("")) == 0


def test_overlap_examples():
    assert overlap_matrix(parse("abab")).matrix.to_lists() == [[0, 1], [1, 0]]
    ov = overlap_matrix(parse("aabcbc"))
    a, b, c = (ov.letters.index(x) for x in "abc")
    M = ov.matrix
    assert M[b, c] == M[c, b] == 1 and M[a, b] == M[a, c] == 0


@given(words())
def test_overlap_matches_definition(w):
    ov = overlap_matrix(parse(w))
    for i, x in enumerate(ov.letters):
        for j, y in enumerate(ov.letters):
            expected = int(i != j and interlaced(w, x, y))
            assert ov.matrix[i, j] == expected


@given(words())
def test_overlap_invariant_under_word_symmetries(w):
    H = parse(w)
    letters = tuple(sorted(H.letters))
    base = _overlap_rows(tuple(w), letters)
    syms = H.symmetric_words()
    assert len(syms) == 2 * len(w)
    for sym in syms:
        # raw rotated or reversed word, same letter order: no canonicalization involved
        assert _overlap_rows(sym, letters) == base
    rng = random.Random(len(w))
    s = rng.randrange(max(len(w), 1))
    assert parse(w[s:] + w[:s]) == H == parse(w[::-1])


@given(words(max_n=5))
def test_mobius_matches_genus(w):
    H = parse(w)
    res = mobius_realizable(H)
    assert bool(res) == (min_genus(H) <= 1)
    if not res:
        assert res.certificate.check(overlap_matrix(H).matrix)


@given(words(max_n=5), st.integers(0, 5))
def test_realizable_on_matches_oracle(w, k):
    H = parse(w)
    M = overlap_matrix(H).matrix
    res = realizable_on(H, k)
    assert bool(res) == (brute_force_R(M).achieved_rank <= k)
    if res:
        assert rank(M.with_diagonal(sum(b << i for i, b in enumerate(res.witness)))) <= k


def test_genus_witness_is_a_completion():
    H = parse("abacbc")
    res = genus_with_witness(H)
    assert rank(res.completed(overlap_matrix(H).matrix)) == 2


def test_enumeration_counts():
    # chord diagrams up to rotation and reflection
    assert [len(all_hieroglyphs(n)) for n in range(6)] == [1, 1, 2, 5, 17, 79]


@pytest.mark.parametrize("text", ["aab", "abc", "a-a", "aaa"])
def test_parse_errors(text):
    with pytest.raises(HieroglyphError):
        parse(text)


def test_multichar_tokens():
    H = parse("x1 x2 x1 x2", multichar=True)
    assert H.n == 2 and overlap_matrix(H).matrix == BitMatrix.from_lists([[0, 1], [1, 0]])
    assert str(H) == "x1 x2 x1 x2"
