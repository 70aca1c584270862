"""Tests for the bracket, Jones and Alexander computations."""

import pytest

from petalknot.cache import FingerprintCache
from petalknot.errors import BudgetExceededError, InvalidDiagramError, VerificationError
from petalknot.invariants import (
    UNKNOT_FINGERPRINT,
    Fingerprint,
    alexander,
    alexander_matrix,
    determinant,
    fingerprint,
    jones,
    jones_t,
    kauffman_bracket,
    normalize_alexander,
)
from petalknot.laurent import LaurentPolynomial
from petalknot.planar import PlanarDiagram

TREFOIL = PlanarDiagram(((1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)), (1, 1, 1))
FIGURE_EIGHT = PlanarDiagram(
    ((4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)), (1, 1, -1, -1)
)

# Jones polynomials in powers of t^(1/2)
TREFOIL_JONES = LaurentPolynomial({2: 1, 6: 1, 8: -1})
FIGURE_EIGHT_JONES = LaurentPolynomial({-4: 1, -2: -1, 0: 1, 2: -1, 4: 1})


def mirror_pd(pd: PlanarDiagram) -> PlanarDiagram:
    """Swap over and under at every crossing."""
    crossings = []
    for (a, b, c, d), sign in zip(pd.crossings, pd.signs):
        crossings.append((d, a, b, c) if sign == 1 else (b, c, d, a))
    return PlanarDiagram(tuple(crossings), tuple(-s for s in pd.signs))


class TestBracket:
    def test_trivial_diagram(self):
        assert kauffman_bracket(PlanarDiagram()) == 1

    def test_budget(self):
        with pytest.raises(BudgetExceededError, match="3 crossings, bracket budget is 2") as info:
            kauffman_bracket(TREFOIL, budget=2)
        assert info.value.exit_code == 3

    def test_trefoil_jones_up_to_mirror(self):
        assert jones(TREFOIL) in (TREFOIL_JONES, TREFOIL_JONES.substitute_inverse())

    def test_mirror_inverts_jones(self):
        assert jones(mirror_pd(TREFOIL)) == jones(TREFOIL).substitute_inverse()

    def test_figure_eight_jones(self):
        assert jones(FIGURE_EIGHT) == FIGURE_EIGHT_JONES
        assert jones_t(FIGURE_EIGHT) == LaurentPolynomial({-2: 1, -1: -1, 0: 1, 1: -1, 2: 1})


class TestAlexander:
    def test_matrix_shape(self):
        rows = alexander_matrix(TREFOIL)
        assert len(rows) == 3
        assert all(len(row) == 3 for row in rows)

    def test_trefoil(self):
        assert alexander(TREFOIL) == LaurentPolynomial({-1: 1, 0: -1, 1: 1})
        assert determinant(TREFOIL) == 3

    def test_figure_eight(self):
        assert alexander(FIGURE_EIGHT) == LaurentPolynomial({-1: 1, 0: -3, 1: 1})
        assert determinant(FIGURE_EIGHT) == 5

    def test_mirror_has_same_alexander(self):
        assert alexander(mirror_pd(TREFOIL)) == alexander(TREFOIL)

    def test_normalize(self):
        raw = LaurentPolynomial({3: -1, 4: 1, 5: -1})
        assert normalize_alexander(raw) == LaurentPolynomial({-1: 1, 0: -1, 1: 1})

    def test_normalize_zero(self):
        with pytest.raises(InvalidDiagramError, match="vanished"):
            normalize_alexander(LaurentPolynomial.zero())

    def test_normalize_odd_span(self):
        with pytest.raises(VerificationError, match="odd degree span"):
            normalize_alexander(LaurentPolynomial({0: 1, 1: 1}))


class TestFingerprint:
    def test_trivial_is_unknot(self):
        assert fingerprint(PlanarDiagram()).is_unknot()
        assert UNKNOT_FINGERPRINT.is_amphichiral()

    def test_figure_eight_is_amphichiral(self):
        fp = fingerprint(FIGURE_EIGHT, cache=FingerprintCache())
        assert fp.is_amphichiral()
        assert fp.mirror() == fp
        assert fp.describe() == {
            "determinant": "5",
            "alexander": "t - 3 + t^-1",
            "jones": "t^2 - t + 1 - t^-1 + t^-2",
        }

    def test_trefoil_is_chiral(self):
        fp = fingerprint(TREFOIL, cache=FingerprintCache())
        assert not fp.is_amphichiral()
        assert fingerprint(mirror_pd(TREFOIL), cache=FingerprintCache()) == fp.mirror()

    def test_budget_applies_after_reduction(self):
        with pytest.raises(BudgetExceededError):
            fingerprint(TREFOIL, budget=2, cache=FingerprintCache())

    def test_cache_hit(self):
        cache = FingerprintCache()
        first = fingerprint(TREFOIL, cache=cache)
        assert fingerprint(TREFOIL, cache=cache) == first
        assert cache.stats()["hits"] == 1
        assert cache.size == 1

    def test_connected_sum(self):
        fp = fingerprint(TREFOIL, cache=FingerprintCache())
        granny = fp.connected_sum(fp)
        assert granny.determinant == 9
        assert granny.alexander == LaurentPolynomial({-2: 1, -1: -2, 0: 3, 1: -2, 2: 1})
        assert granny.jones == fp.jones * fp.jones

    def test_json(self):
        fp = fingerprint(FIGURE_EIGHT, cache=FingerprintCache())
        payload = fp.to_json()
        assert payload["determinant"] == 5
        assert payload["jones"]["var"] == "t^(1/2)"
        assert Fingerprint.from_json(payload) == fp
