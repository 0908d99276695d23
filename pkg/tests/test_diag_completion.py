import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import matrices, symmetric_matrices
from z2rank.diag_completion import (
    BudgetExceeded,
    DiagonalAssignment,
    OracleLimitExceeded,
    Rank1Certificate,
    brute_force_R,
    complete_degenerate,
    complete_nondegenerate,
    complete_to_rank_le1,
    min_rank,
    min_rank_approx,
    min_rank_exact,
    sharpness_experiment,
)
from z2rank.gf2_core import BitMatrix, det, popcount, rank

A1 = BitMatrix.from_lists([[0, 0, 0], [0, 0, 0], [0, 0, 0]])
A2 = BitMatrix.from_lists([[1, 1, 1], [1, 1, 1], [1, 1, 1]])
A3 = BitMatrix.from_lists([[1, 1, 1], [1, 0, 1], [1, 1, 1]])
A4 = BitMatrix.from_lists([[0, 1, 1], [0, 0, 1], [1, 0, 0]])
P1 = BitMatrix.from_lists([[1, 0, 1], [0, 0, 1], [0, 1, 0]])
P2 = BitMatrix.from_lists([[1, 0, 1], [0, 1, 0], [0, 0, 1]])


class TestFixedPoints:
    def test_R_values(self):
        assert [brute_force_R(A).achieved_rank for A in (A1, A2, A3, A4)] == [0, 1, 1, 2]
        assert [min_rank(A).achieved_rank for A in (A1, A2, A3, A4)] == [0, 1, 1, 2]

    def test_column_permutation_changes_R(self):
        assert min_rank(P1).achieved_rank == 2
        assert min_rank(P2).achieved_rank == 1

    def test_degenerate_completion_of_A4(self):
        D = complete_degenerate(A4)
        assert D.bits() == [0, 1, 1]
        assert det(D.apply(A4)) == 0

    def test_exact_search_on_A4(self):
        assert min_rank_exact(A4, 1) is None
        res = min_rank_exact(A4, 2)
        assert res.achieved_rank == 2 and rank(res.completed(A4)) == 2

    def test_single_off_diagonal_pair(self):
        M = BitMatrix.from_lists([[0, 0, 0], [0, 0, 1], [0, 1, 0]])
        res = min_rank_exact(M, 1)
        assert res.witness.bits() == [0, 1, 1] and res.achieved_rank == 1
        out = complete_to_rank_le1(M)
        assert out.witness.bits() == [0, 1, 1]


class TestMinRank:
    @given(matrices(max_rows=7, square=True))
    def test_agrees_with_brute_force(self, M):
        res = min_rank(M)
        assert res.achieved_rank == brute_force_R(M).achieved_rank
        assert rank(res.completed(M)) == res.achieved_rank

    @given(matrices(max_rows=6, square=True), st.integers(0, 6))
    def test_exact_decides_threshold(self, M, k):
        R = brute_force_R(M).achieved_rank
        res = min_rank_exact(M, k)
        if k < R:
            assert res is None
        else:
            assert res is not None and rank(res.completed(M)) == res.achieved_rank <= k

    @given(matrices(max_rows=7, square=True))
    def test_witness_equals_exact_search_at_R(self, M):
        res = min_rank(M)
        assert res == min_rank_exact(M, res.achieved_rank)

    @given(matrices(max_rows=8, square=True), st.integers(2, 5))
    def test_threads_do_not_change_the_answer(self, M, threads):
        assert min_rank(M, threads=threads) == min_rank(M)
        R = min_rank(M).achieved_rank
        assert min_rank_exact(M, R, threads=threads) == min_rank_exact(M, R)

    def test_input_diagonal_is_ignored(self):
        rng = random.Random(8)
        M = BitMatrix.random(6, 6, rng)
        assert min_rank(M) == min_rank(M.with_diagonal(0)) == min_rank(M.with_diagonal(0b111111))

    def test_budget_exceeded_carries_bounds(self):
        M = BitMatrix.random(12, 12, rng=1)
        with pytest.raises(BudgetExceeded) as info:
            min_rank(M, budget=12**4 + 500)
        exc = info.value
        assert exc.lower <= brute_force_R(M).achieved_rank <= exc.upper

    def test_empty(self):
        assert min_rank(BitMatrix([], 0)).achieved_rank == 0
        assert brute_force_R(BitMatrix([], 0)).achieved_rank == 0

    def test_oracle_limit(self):
        with pytest.raises(OracleLimitExceeded):
            brute_force_R(BitMatrix.zeros(5), limit=4)

    def test_to_json(self):
        assert min_rank(A4).to_json() == {"R": 2, "witness": min_rank(A4).witness.bits()}


class TestCompletions:
    @given(matrices(min_rows=1, max_rows=12, square=True))
    def test_nondegenerate_and_degenerate(self, M):
        assert det(complete_nondegenerate(M).apply(M)) == 1
        assert det(complete_degenerate(M).apply(M)) == 0

    def test_empty_nondegenerate(self):
        assert complete_nondegenerate(BitMatrix([], 0)).bits() == []
        with pytest.raises(ValueError):
            complete_degenerate(BitMatrix([], 0))

    @given(matrices(max_rows=7, square=True))
    def test_approximation_bracket(self, M):
        k = min_rank_approx(M)
        R = brute_force_R(M).achieved_rank
        assert k <= 2 * R and R <= k

    @given(matrices(min_rows=1, max_rows=10, square=True), st.integers(0, 2**10 - 1))
    def test_rank_change_laws(self, M, d):
        n = M.n_rows
        d &= (1 << n) - 1
        Mbar = complete_nondegenerate(M).apply(M)
        MD = Mbar + BitMatrix.diagonal_matrix(d, n)
        assert abs(rank(Mbar) - rank(MD)) <= popcount(d)
        assert 2 * rank(MD) >= rank(Mbar + BitMatrix.identity(n))


class TestRankOne:
    @given(symmetric_matrices(max_n=7))
    def test_matches_brute_force(self, M):
        out = complete_to_rank_le1(M)
        R = brute_force_R(M).achieved_rank
        if isinstance(out, Rank1Certificate):
            assert R >= 2
            assert out.check(M)
        else:
            assert R <= 1
            assert rank(out.completed(M)) == out.achieved_rank <= 1

    def test_certificates_are_checked_independently(self):
        M = BitMatrix.from_lists([[0, 1, 1], [1, 0, 0], [1, 0, 0]])
        cert = complete_to_rank_le1(M)
        assert cert.kind == "pattern3" and cert.check(M)
        # the same vertices do not show the pattern in the triangle
        T = BitMatrix.from_lists([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert not cert.check(T)

    def test_two_disjoint_edges_need_pattern4(self):
        M = BitMatrix.from_lists([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        cert = complete_to_rank_le1(M)
        assert cert.kind == "pattern4" and cert.check(M)

    def test_requires_symmetry(self):
        with pytest.raises(ValueError):
            complete_to_rank_le1(A4)


def test_diagonal_assignment_apply():
    D = DiagonalAssignment(0b101, 3)
    assert D.apply(A1).to_lists() == [[1, 0, 0], [0, 0, 0], [0, 0, 1]]


def test_sharpness_experiment_reports_without_asserting():
    out = sharpness_experiment(2)
    assert out["checked"] == 16
    # at least |m - k| changes are always needed, so a counterexample needs strictly more
    for c in out["counterexamples"]:
        assert c["changes"] > abs(c["rank"] - c["target"])
    assert {"matrix": [[0, 1], [0, 0]], "rank": 1, "target": 2, "changes": 2} in out["counterexamples"]
    sampled = sharpness_experiment(4, samples=20, seed=1)
    assert sampled["checked"] == 20


def test_enumeration_order_is_lexicographic_on_zero_sets():
    from z2rank.diag_completion import _lex_subsets

    got = list(_lex_subsets(3, 2))
    expected = sorted(Z for k in range(3) for Z in itertools.combinations(range(3), k))
    assert got == expected
