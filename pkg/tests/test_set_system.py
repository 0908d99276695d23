import itertools
import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from z2rank.gf2_core import AffineSpace, BitMatrix, MatrixFormatError, rank, solve_linear_system
from z2rank.set_system import (
    ChooseMatrix,
    SubsetIndexer,
    _LowRankSearch,
    _Reduced,
    build_constraint_system,
    delete_blocks,
    format_choose,
    matrix_to_vector,
    min_rank_over_space,
    n_variables,
    nontriviality_sum,
    parse_choose,
    partition_symmetric_difference,
    project_out_odd,
    rank_floor,
    restrict,
    sample_matrices,
    solve_choose_space,
    validate,
    vector_to_matrix,
)


@lru_cache(maxsize=None)
def space(m, l=3, even=False):
    return solve_choose_space(m, l, even)


def samples(m, l=3, even=False, count=20, seed=0):
    return sample_matrices(space(m, l, even), SubsetIndexer(m, l), count, seed=seed)


def zero(m, l=3):
    ix = SubsetIndexer(m, l)
    return ChooseMatrix(ix, BitMatrix.zeros(ix.size))


class TestIndexing:
    def test_lexicographic_round_trip(self):
        ix = SubsetIndexer(5, 3)
        assert ix.size == 10
        assert ix.subset_at(0) == (0, 1, 2) and ix.subset_at(9) == (2, 3, 4)
        assert list(ix.subsets) == sorted(ix.subsets)
        for i in range(ix.size):
            assert ix.index_of(ix.subset_at(i)) == i
        assert ix.index_of([2, 0, 1]) == 0

    def test_unknown_subset(self):
        with pytest.raises(KeyError):
            SubsetIndexer(4, 2).index_of((0, 5))

    @given(st.integers(0, 12), st.data())
    def test_upper_triangle_coordinates(self, n, data):
        v = data.draw(st.integers(0, (1 << n_variables(n)) - 1))
        M = vector_to_matrix(v, n)
        assert M.is_symmetric() and matrix_to_vector(M) == v


class TestConstraintSystem:
    def test_four_three_has_no_nontriviality_rows(self):
        C, b = build_constraint_system(4, 3, include=("nontriviality",))
        assert C.n_rows == 0
        C, b = build_constraint_system(4, 3)
        assert C.apply(0) == b == 0

    def test_five_three_has_no_triviality_rows(self):
        C, _ = build_constraint_system(5, 3, include=("triviality",))
        assert C.n_rows == 0

    @pytest.mark.parametrize("even", [False, True])
    def test_five_three_is_solvable(self, even):
        assert space(5, 3, even) is not None

    def test_even_rows_only_when_requested(self):
        C0, _ = build_constraint_system(5, 3, include=())
        C1, _ = build_constraint_system(5, 3, even=True, include=())
        assert C0.n_rows == 0 and C1.n_rows == 10

    def test_size_cap_and_bad_parameters(self):
        with pytest.raises(ValueError):
            build_constraint_system(12, 6)
        with pytest.raises(ValueError):
            build_constraint_system(3, 4)
        with pytest.raises(ValueError):
            solve_choose_space(3, 0)

    def test_infeasible_is_reported(self):
        # one element per subset: every diagonal entry must be 1 but all rows agree and off-diagonals vanish
        assert solve_choose_space(2, 1) is None
        assert solve_choose_space(1, 1).dimension == 0


class TestValidate:
    def test_zero_five_three_violates_every_nontriviality(self):
        bad = validate(zero(5))
        assert len(bad) == 5
        assert {v.kind for v in bad} == {"non-triviality"}

    def test_zero_four_three_is_valid(self):
        assert validate(zero(4)) == []

    @pytest.mark.parametrize("m,l,even", [(4, 3, False), (5, 3, False), (5, 3, True), (6, 3, False), (6, 3, True), (7, 3, True), (5, 2, False), (7, 4, True)])
    def test_solver_members_validate(self, m, l, even):
        for A in samples(m, l, even, count=10):
            assert validate(A, even=even) == []

    def test_violations_name_their_witnesses(self):
        A = samples(5)[0]
        ix = A.indexer
        i = ix.index_of((0, 1, 2))
        rows = list(A.matrix.rows)
        rows[i] ^= 1 << i
        bad = validate(ChooseMatrix(ix, BitMatrix(rows, ix.size)))
        assert bad and all(v.kind in ("linear dependence", "non-triviality") for v in bad)
        assert any(v.kind == "linear dependence" and v.where[1] == (0, 1, 2) for v in bad)

    def test_non_symmetric_rejected(self):
        ix = SubsetIndexer(4, 3)
        with pytest.raises(ValueError):
            validate(ChooseMatrix(ix, BitMatrix([0b10, 0, 0, 0], 4)))


class TestSolveRoutes:
    @pytest.mark.parametrize("m,l", [(5, 3), (6, 3), (7, 3), (6, 4), (7, 4), (4, 2)])
    @pytest.mark.parametrize("even", [False, True])
    def test_full_and_reduced_agree(self, m, l, even):
        full = solve_choose_space(m, l, even, method="full")
        red = solve_choose_space(m, l, even, method="reduced")
        assert (full is None) == (red is None)
        if full is None:
            return
        assert full.dimension == red.dimension
        assert red.particular in full
        assert all((full.particular ^ k) in full for k in red.kernel_basis)


class TestMinRank:
    @pytest.mark.parametrize(
        "m,even,expected",
        [(4, False, 0), (4, True, 0), (5, False, 1), (5, True, 2), (6, False, 1), (6, True, 2), (7, True, 2), (7, False, 2)],
    )
    def test_exact_small_minima(self, m, even, expected):
        rep = min_rank_over_space(space(m, 3, even), SubsetIndexer(m, 3), even, n_samples=500)
        assert rep.exact and rep.lower == rep.upper == expected
        assert rep.witness.rank() == expected
        assert validate(rep.witness, even=even) == []

    def test_enumeration_without_early_stop_agrees(self):
        a = min_rank_over_space(space(5), SubsetIndexer(5, 3), stop_at_floor=False)
        b = min_rank_over_space(space(5), SubsetIndexer(5, 3))
        assert a.lower == b.lower == 1

    def test_threads_do_not_change_the_report(self):
        for m, even in ((5, False), (6, True), (7, False)):
            args = (space(m, 3, even), SubsetIndexer(m, 3), even)
            one = min_rank_over_space(*args, n_samples=300, threads=1)
            many = min_rank_over_space(*args, n_samples=300, threads=4)
            assert (one.lower, one.upper, one.witness) == (many.lower, many.upper, many.witness)

    def test_bounds_beyond_the_threshold(self):
        rep = min_rank_over_space(space(8), SubsetIndexer(8, 3), n_samples=200)
        assert rep.lower >= rank_floor(8, 3) and rep.lower <= rep.upper
        assert rep.witness.rank() == rep.upper and validate(rep.witness) == []

    def test_floors(self):
        assert [rank_floor(m, 3) for m in range(3, 9)] == [0, 0, 1, 1, 2, 2]
        assert [rank_floor(m, 3, True) for m in range(3, 9)] == [0, 0, 2, 2, 2, 4]
        assert rank_floor(10, 4) == 2

    def test_infeasible_space_rejected(self):
        with pytest.raises(ValueError):
            min_rank_over_space(None, SubsetIndexer(2, 1))


def random_symmetric_space(n, seed):
    rng = random.Random(seed)
    nv = n_variables(n)
    rows = [rng.getrandbits(nv) for _ in range(rng.randint(nv - 8, nv))]
    return solve_linear_system(BitMatrix(rows, nv), rng.getrandbits(len(rows)))


@settings(max_examples=60)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_low_rank_search_is_complete(n, seed):
    sp = random_symmetric_space(n, seed)
    if sp is None:
        return
    true_min = min(rank(vector_to_matrix(v, n)) for v in sp)
    red = _Reduced(sp, n)
    search = _LowRankSearch(red)
    # searches run upward from a proven floor, so the contract is: nothing
    # below the true minimum, a hit at it
    for r in range(0, min(true_min, 3) + 1):
        found = search.find(r)
        assert (found is not None) == (r == true_min)
        if found is not None:
            A = red.lift(found)
            assert rank(A) <= r and matrix_to_vector(A) in sp


class TestReductions:
    def test_restrict_keeps_validity(self):
        for A in samples(5, count=5):
            assert validate(restrict(A)) == []
        Z = restrict(zero(4))
        assert Z.matrix.shape == (1, 1) and validate(Z) == []
        for A in samples(6, even=True, count=5):
            B = restrict(A)
            assert validate(B, even=True) == [] and B.rank() <= A.rank()
        with pytest.raises(ValueError):
            restrict(zero(3))

    def test_delete_one_block(self):
        hits = 0
        for A in samples(6, count=10):
            for X in A.indexer.subsets:
                if A.entry(X, X):
                    B = delete_blocks(A, X)
                    assert rank(B) < A.rank()
                    hits += 1
        assert hits

    def test_delete_pair_of_blocks(self):
        hits = 0
        for A in samples(8, even=True, count=3):
            for X, Y in itertools.combinations(A.indexer.subsets, 2):
                if A.entry(X, Y):
                    C = delete_blocks(A, X, Y)
                    assert rank(C) + 2 <= A.rank()
                    hits += 1
                    if hits > 40:
                        return
        assert hits

    def test_delete_preconditions(self):
        A = samples(6, even=True, count=1)[0]
        with pytest.raises(ValueError):
            delete_blocks(A, (0, 1, 2))
        with pytest.raises(ValueError):
            delete_blocks(zero(5), (0, 1, 2), (0, 1, 3))

    @pytest.mark.parametrize("m", [6, 7])
    def test_project_out_odd(self, m):
        hits = 0
        for A in samples(m, count=8):
            for X in A.indexer.subsets:
                if A.entry(X, X):
                    D = project_out_odd(A, X)
                    assert D.m == m - 2 and validate(D) == [] and D.rank() < A.rank()
                    if m == 7:
                        assert D.rank() >= 1
                    hits += 1
        assert hits

    def test_project_out_odd_requires_odd_subset(self):
        A = samples(6, even=True, count=1)[0]
        with pytest.raises(ValueError):
            project_out_odd(A, (0, 1, 2))


class TestNontriviality:
    def test_valid_and_zero(self):
        for A in samples(6, count=5):
            for i in range(6):
                rest = [x for x in range(6) if x != i]
                for F in itertools.combinations(rest, 4):
                    assert nontriviality_sum(A, F, i) == 1
        assert nontriviality_sum(zero(5), (1, 2, 3, 4), 0) == 0

    @pytest.mark.parametrize("m,l", [(5, 3), (6, 3), (7, 4)])
    def test_depends_only_on_the_union_under_linear_dependence(self, m, l):
        C, b = build_constraint_system(m, l, include=("dependence",))
        sp = solve_linear_system(C, b)
        ix = SubsetIndexer(m, l)
        for A in sample_matrices(sp, ix, 10, seed=3):
            for S in itertools.combinations(range(m), 2 * l - 1):
                values = {nontriviality_sum(A, tuple(x for x in S if x != i), i) for i in S}
                assert len(values) == 1

    def test_argument_checks(self):
        with pytest.raises(ValueError):
            nontriviality_sum(zero(5), (0, 1, 2, 3), 0)
        with pytest.raises(ValueError):
            nontriviality_sum(zero(5), (1, 2, 3), 0)


class TestPartitionIdentity:
    def test_identity_holds(self):
        from z2rank.set_system import verify_partition_identity

        assert verify_partition_identity()

    def test_named_pairs(self):
        overlapping = frozenset({(0, 1), (0, 2)})
        disjoint = frozenset({(0, 1), (2, 3)})
        for i in range(5):
            A_i = partition_symmetric_difference(i)
            assert overlapping not in A_i
            assert disjoint in A_i


class TestTextFormat:
    def test_round_trip_with_header(self):
        A = samples(5, count=1)[0]
        text = format_choose(A)
        assert text.startswith("# m=5 l=3\n")
        assert parse_choose(text) == A
        assert parse_choose(text, 5, 3) == A

    def test_header_mismatch(self):
        text = format_choose(zero(5))
        with pytest.raises(MatrixFormatError):
            parse_choose(text, 6, 3)

    def test_missing_header_needs_parameters(self):
        body = "0\n"
        with pytest.raises(MatrixFormatError):
            parse_choose(body)
        assert parse_choose(body, 3, 3).matrix.shape == (1, 1)

    def test_wrong_side(self):
        with pytest.raises(MatrixFormatError):
            parse_choose("# m=5 l=3\n01\n10\n")


def test_affine_space_from_reduced_route_is_consistent():
    sp = solve_choose_space(8, 4, method="reduced")
    assert isinstance(sp, AffineSpace) and sp.dimension == 595
    for A in sample_matrices(sp, SubsetIndexer(8, 4), 3, seed=2):
        assert validate(A) == []
        assert A.rank() >= rank_floor(8, 4)


@lru_cache(maxsize=None)
def exact_minimum(m, even):
    rep = min_rank_over_space(space(m, 3, even), SubsetIndexer(m, 3), even, n_samples=500)
    return rep.lower if rep.exact else None


def test_minima_are_monotone_and_obey_the_recurrences():
    r = {m: exact_minimum(m, False) for m in range(3, 8)}
    rt = {m: exact_minimum(m, True) for m in range(3, 8)}
    assert None not in r.values() and None not in rt.values()
    for m in range(4, 8):
        assert r[m - 1] <= r[m] and rt[m - 1] <= rt[m]
    # both recurrences concern m >= 2l - 1 = 5, where non-triviality applies
    for m in range(5, 8):
        assert r[m] >= min(r[m - 2] + 1, rt[m])
    for m in range(6, 8):
        assert rt[m] >= rt[m - 3] + 2


@pytest.mark.parametrize("m", [7, 8, 9, 10])
def test_four_subset_samples_respect_the_floor(m):
    sp = solve_choose_space(m, 4)
    floor = -(-(m - 2 * 4 + 2) // (4 - 1))
    for A in sample_matrices(sp, SubsetIndexer(m, 4), 5, seed=m):
        assert A.rank() >= floor
    assert validate(A) == []
