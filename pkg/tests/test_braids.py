"""Tests for braid and 4-plat closures."""

import pytest

from petalknot.braids import (
    braid_closure,
    conway_to_plat,
    plat_closure,
    torus_braid,
    torus_knot_alexander,
)
from petalknot.errors import InvalidInputError
from petalknot.invariants import alexander, determinant, fingerprint
from petalknot.laurent import LaurentPolynomial
from petalknot.petalperm import torus_permutation
from petalknot.simplify import petal_reduced_diagram

# T(4,5), coefficients from t^-6 to t^6
T45_ALEXANDER = LaurentPolynomial(
    {e - 6: c for e, c in enumerate([1, -1, 0, 0, 1, 0, -1, 0, 1, 0, 0, -1, 1]) if c}
)


class TestWords:
    def test_generator_out_of_range(self):
        with pytest.raises(InvalidInputError, match="position 2"):
            braid_closure([1, 3], 3)

    def test_zero_generator(self):
        with pytest.raises(InvalidInputError, match="generator 0"):
            braid_closure([0], 2)

    def test_torus_braid(self):
        assert torus_braid(2, 3) == [1, 1, 1]
        assert torus_braid(4, 5) == [1, 2, 3] * 5

    def test_torus_braid_range(self):
        with pytest.raises(InvalidInputError, match="out of range"):
            torus_braid(1, 3)


class TestConway:
    @pytest.mark.parametrize(
        "notation,word",
        [
            ([3], [2, 2, 2]),
            ([2, 2], [2, 2, -1, 2]),
            ([2, 1, 1], [2, 2, -1, 2]),
        ],
    )
    def test_words(self, notation, word):
        assert conway_to_plat(notation) == word

    def test_rejects_non_positive(self):
        with pytest.raises(InvalidInputError, match="positive integers"):
            conway_to_plat([2, 0])


class TestClosures:
    def test_braid_trefoil(self):
        pd = braid_closure([1, 1, 1], 2)
        assert pd.crossing_count == 3
        assert determinant(pd) == 3

    def test_two_component_closure(self):
        with pytest.raises(InvalidInputError, match="more than one component"):
            braid_closure([1, 1], 2)

    def test_one_crossing_unknot(self):
        assert fingerprint(braid_closure([1], 2)).is_unknot()

    def test_plat_trefoil(self):
        assert determinant(plat_closure(conway_to_plat([3]))) == 3

    def test_plat_figure_eight(self):
        pd = plat_closure(conway_to_plat([2, 2]))
        assert determinant(pd) == 5
        assert fingerprint(pd).is_amphichiral()

    def test_figure_eight_as_braid(self):
        assert determinant(braid_closure([1, -2, 1, -2], 3)) == 5


class TestTorusKnots:
    def test_trefoil_alexander(self):
        assert torus_knot_alexander(2, 3) == LaurentPolynomial({-1: 1, 0: -1, 1: 1})

    def test_t45_alexander(self):
        assert torus_knot_alexander(4, 5) == T45_ALEXANDER
        assert T45_ALEXANDER.evaluate(-1) == 5

    def test_t45_braid_closure(self):
        pd = braid_closure(torus_braid(4, 5), 4)
        assert pd.crossing_count == 15
        assert alexander(pd) == T45_ALEXANDER

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_petal_torus_knots_match_braids(self, r):
        petal = fingerprint(petal_reduced_diagram(torus_permutation(r)))
        braid = fingerprint(braid_closure(torus_braid(r + 1, r), r + 1))
        assert petal in (braid, braid.mirror())
