"""Tests for petal permutations and their equivalence classes."""

import pytest

from petalknot.errors import InvalidInputError
from petalknot.petalperm import (
    PetalPermutation,
    canonical_class,
    change_height,
    class_members,
    cyclic_distance,
    diffs,
    equivalent,
    from_diffs,
    is_extremal,
    min_adjacent_distance,
    parse_permutation,
    rank_compress,
    remove_trivial_petal,
    shift_heights,
    torus_permutation,
    trivial_petals,
)

TREFOIL = PetalPermutation((1, 3, 5, 2, 4))


class TestParsing:
    """Permutation text in the accepted shapes."""

    @pytest.mark.parametrize("text", ["1,3,5,2,4", "(1 3 5 2 4)", "[1, 3, 5, 2, 4]", " 1 3,5 2 4 "])
    def test_accepted_forms(self, text):
        assert parse_permutation(text) == TREFOIL

    def test_even_length_rejected(self):
        with pytest.raises(InvalidInputError, match="even length 4"):
            parse_permutation("1,2,3,4")

    def test_duplicate_reports_position(self):
        with pytest.raises(InvalidInputError, match="position 3"):
            parse_permutation("1,2,2")

    def test_out_of_range(self):
        with pytest.raises(InvalidInputError, match="outside 1..3"):
            parse_permutation("1,2,4")

    def test_not_an_integer(self):
        with pytest.raises(InvalidInputError, match="not an integer"):
            parse_permutation("1,x,3")

    def test_too_short(self):
        with pytest.raises(InvalidInputError, match="at least 3"):
            PetalPermutation((1,))


class TestClasses:
    def test_cyclic_access(self):
        assert TREFOIL[1] == 1
        assert TREFOIL[6] == 1
        assert TREFOIL[0] == 4
        assert str(TREFOIL) == "(1,3,5,2,4)"

    def test_diffs(self):
        assert diffs(TREFOIL) == (2, 2, 2, 2, 2)
        assert from_diffs((2, 2, 2, 2, 2)) == TREFOIL

    def test_height_shift_stays_in_class(self):
        sigma = PetalPermutation((1, 4, 5, 3, 7, 2, 6))
        for c in range(1, 7):
            assert equivalent(sigma, shift_heights(sigma, c))

    def test_rotation_stays_in_class(self):
        sigma = PetalPermutation((1, 4, 5, 3, 7, 2, 6))
        rotated = PetalPermutation(sigma.entries[2:] + sigma.entries[:2])
        assert equivalent(sigma, rotated)

    def test_p3_has_two_classes(self):
        assert canonical_class(PetalPermutation((1, 2, 3))) != canonical_class(
            PetalPermutation((1, 3, 2))
        )
        assert class_members(PetalPermutation((2, 3, 1))) == [PetalPermutation((1, 2, 3))]

    def test_canonical_representative_starts_at_one(self):
        key = canonical_class(PetalPermutation((3, 5, 2, 4, 1)))
        assert key.representative[1] == 1
        assert key.p == 5


class TestMoves:
    def test_cyclic_distance(self):
        assert cyclic_distance(5, 1, 5) == 1
        assert cyclic_distance(7, 2, 6) == 3
        with pytest.raises(InvalidInputError):
            cyclic_distance(5, 0, 2)

    def test_trivial_petals(self):
        assert trivial_petals(TREFOIL) == []
        assert trivial_petals(PetalPermutation((1, 2, 3))) == [1, 2, 3]

    def test_rank_compress(self):
        assert rank_compress([3, 7, 5]) == (1, 3, 2)

    def test_remove_trivial_petal(self):
        removed = remove_trivial_petal(PetalPermutation((1, 2, 3, 4, 5)), 1)
        assert removed == PetalPermutation((1, 2, 3))

    def test_remove_requires_trivial_petal(self):
        with pytest.raises(InvalidInputError, match="not a trivial petal"):
            remove_trivial_petal(TREFOIL, 1)

    def test_remove_below_four_rejected(self):
        with pytest.raises(InvalidInputError, match="already the unknot"):
            remove_trivial_petal(PetalPermutation((1, 2, 3)), 1)

    def test_change_height_reports_cost(self):
        moved, cost = change_height(TREFOIL, 1, 2)
        assert moved == PetalPermutation((2, 3, 5, 1, 4))
        assert cost == 1

    def test_change_height_range(self):
        with pytest.raises(InvalidInputError, match="rank 6"):
            change_height(TREFOIL, 1, 6)


class TestTorus:
    def test_torus_permutation(self):
        assert torus_permutation(2) == TREFOIL
        assert torus_permutation(3) == PetalPermutation((1, 4, 7, 3, 6, 2, 5))

    def test_torus_is_extremal(self):
        for r in range(1, 5):
            assert is_extremal(torus_permutation(r))

    def test_min_adjacent_distance(self):
        assert min_adjacent_distance(TREFOIL) == (1, 2)
        assert min_adjacent_distance(PetalPermutation((1, 4, 5, 3, 7, 2, 6))) == (2, 1)
