"""Tests for PD codes, Gauss codes and polyline projection."""

import pytest

from petalknot.errors import DegenerateScheduleError, InvalidDiagramError, InvalidInputError
from petalknot.planar import (
    GaussEvent,
    PlanarDiagram,
    canonical_pd,
    format_gauss,
    gauss_code,
    parse_gauss,
    pd_from_gauss,
    polygon_gauss_code,
    polygon_pd,
)

TREFOIL_GAUSS = "O1+ U2+ O3+ U1+ O2+ U3+"
TREFOIL_PD = PlanarDiagram(((1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)), (1, 1, 1))


class TestPlanarDiagram:
    """Structural checks on PD codes."""

    def test_counts(self):
        assert TREFOIL_PD.crossing_count == 3
        assert TREFOIL_PD.writhe == 3
        assert not TREFOIL_PD.is_trivial()
        assert PlanarDiagram().is_trivial()

    def test_sign_count_mismatch(self):
        with pytest.raises(InvalidDiagramError, match="1 crossings but 2 signs"):
            PlanarDiagram(((1, 2, 2, 1),), (1, 1))

    def test_bad_sign(self):
        with pytest.raises(InvalidDiagramError, match="sign must be"):
            PlanarDiagram(((1, 2, 2, 1),), (0,))

    def test_label_used_three_times(self):
        with pytest.raises(InvalidDiagramError, match="arc label 1 appears 3 times"):
            PlanarDiagram(((1, 1, 2, 2), (1, 3, 3, 4)), (1, 1))

    def test_json(self):
        payload = TREFOIL_PD.to_json()
        assert payload == {
            "crossings": [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]],
            "signs": [1, 1, 1],
        }
        assert PlanarDiagram.from_json(payload) == TREFOIL_PD

    def test_json_missing_signs(self):
        with pytest.raises(InvalidInputError, match="'crossings' and 'signs'"):
            PlanarDiagram.from_json({"crossings": []})


class TestGaussCodes:
    def test_parse_and_format(self):
        events = parse_gauss(TREFOIL_GAUSS)
        assert events[0] == GaussEvent(0, True, 1)
        assert events[1] == GaussEvent(1, False, 1)
        assert format_gauss(events) == TREFOIL_GAUSS

    def test_parse_accepts_commas_and_unicode_minus(self):
        assert parse_gauss("o1−, u1−") == [GaussEvent(0, True, -1), GaussEvent(0, False, -1)]

    def test_bad_token(self):
        with pytest.raises(InvalidInputError, match="position 2"):
            parse_gauss("O1+ X1+")

    def test_walk_reproduces_code(self):
        pd = pd_from_gauss(parse_gauss(TREFOIL_GAUSS))
        assert pd.crossing_count == 3
        assert format_gauss(gauss_code(pd)) == TREFOIL_GAUSS

    def test_odd_event_count(self):
        with pytest.raises(InvalidDiagramError, match="odd number"):
            pd_from_gauss(parse_gauss("O1+ U1+ O2+"))

    def test_same_level_twice(self):
        with pytest.raises(InvalidDiagramError, match="same level"):
            pd_from_gauss(parse_gauss("O1+ O1+"))

    def test_inconsistent_signs(self):
        with pytest.raises(InvalidDiagramError, match="inconsistent signs"):
            pd_from_gauss(parse_gauss("O1+ U1-"))

    def test_canonical_relabels_from_one(self):
        shifted = PlanarDiagram(((3, 7, 4, 6), (5, 3, 6, 8), (7, 5, 8, 4)), (1, 1, 1))
        assert canonical_pd(shifted).crossing_count == 3
        assert sorted({v for x in canonical_pd(shifted).crossings for v in x}) == [1, 2, 3, 4, 5, 6]


class TestProjection:
    """A four-point polyline that crosses itself once."""

    KINK = [(0.0, 0.0, 0.0), (1.0, 1.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 1.0)]

    def test_single_crossing(self):
        events = polygon_gauss_code(self.KINK)
        assert [ev.over for ev in events] == [True, False]
        assert {ev.sign for ev in events} == {1}
        pd = polygon_pd(self.KINK)
        assert pd.crossing_count == 1
        assert pd.writhe == 1

    def test_equal_depth_is_degenerate(self):
        flat = self.KINK[:3] + [(0.0, 1.0, 0.0)]
        with pytest.raises(DegenerateScheduleError, match="equal depth"):
            polygon_gauss_code(flat)

    def test_bad_shape(self):
        with pytest.raises(InvalidInputError, match=r"\(n, 3\)"):
            polygon_gauss_code([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])

    def test_triangle_has_no_crossings(self):
        assert polygon_pd([(0, 0, 0), (1, 0, 0), (0, 1, 0)]).is_trivial()
