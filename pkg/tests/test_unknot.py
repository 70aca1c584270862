"""Tests for unknotting certificates."""

from dataclasses import replace

import pytest

from petalknot.errors import InvalidInputError, VerificationError
from petalknot.petalperm import PetalPermutation, torus_permutation
from petalknot.unknot import (
    HeightPass,
    HeightShift,
    RemovePetal,
    UnknottingCertificate,
    unknotting_bound,
    unknotting_sequence,
)

TREFOIL = PetalPermutation((1, 3, 5, 2, 4))


class TestBound:
    @pytest.mark.parametrize("p,bound", [(3, 0), (5, 1), (7, 3), (9, 6)])
    def test_values(self, p, bound):
        assert unknotting_bound(p) == bound

    def test_even_p(self):
        with pytest.raises(InvalidInputError):
            unknotting_bound(6)


class TestSequence:
    def test_trefoil(self):
        certificate = unknotting_sequence(TREFOIL)
        assert certificate.moves == (HeightPass(1, 2, 1), RemovePetal(1))
        assert certificate.total_cost == 1
        assert certificate.final == PetalPermutation((3, 1, 2))
        assert certificate.replay() == certificate.final

    def test_trivial_petal_first(self):
        certificate = unknotting_sequence(PetalPermutation((1, 4, 5, 3, 7, 2, 6)))
        assert certificate.moves[0] == RemovePetal(2)
        assert certificate.total_cost == 1
        assert certificate.bound == 3

    def test_wrapping_pair_is_shifted(self):
        certificate = unknotting_sequence(PetalPermutation((1, 4, 2, 5, 3)))
        assert certificate.moves == (HeightShift(2), HeightPass(1, 2, 1), RemovePetal(1))
        assert certificate.final == PetalPermutation((2, 1, 3))

    def test_three_petals_need_nothing(self):
        certificate = unknotting_sequence(PetalPermutation((1, 2, 3)))
        assert certificate.moves == ()
        assert certificate.total_cost == 0

    @pytest.mark.parametrize("r", [2, 3, 4])
    def test_torus_within_bound(self, r):
        sigma = torus_permutation(r)
        certificate = unknotting_sequence(sigma)
        assert certificate.total_cost <= unknotting_bound(sigma.p)
        certificate.replay()


class TestReplay:
    """Tampered certificates fail verification."""

    def test_wrong_total(self):
        certificate = replace(unknotting_sequence(TREFOIL), total_cost=0)
        with pytest.raises(VerificationError, match="do not add up"):
            certificate.replay()

    def test_wrong_final(self):
        certificate = replace(unknotting_sequence(TREFOIL), final=PetalPermutation((1, 2, 3)))
        with pytest.raises(VerificationError, match="replay ends at"):
            certificate.replay()

    def test_wrong_pass_cost(self):
        certificate = UnknottingCertificate(
            TREFOIL, (HeightPass(1, 2, 2), RemovePetal(1)), 2, PetalPermutation((3, 1, 2))
        )
        with pytest.raises(VerificationError, match="certificate says 2"):
            certificate.replay()

    def test_stops_early(self):
        certificate = UnknottingCertificate(TREFOIL, (), 0, TREFOIL)
        with pytest.raises(VerificationError, match="stops at 5 petals"):
            certificate.replay()


class TestJson:
    def test_payload(self):
        payload = unknotting_sequence(TREFOIL).to_json()
        assert payload == {
            "initial": [1, 3, 5, 2, 4],
            "moves": [
                {"kind": "pass", "position": 1, "new_rank": 2, "cost": 1},
                {"kind": "remove", "position": 1},
            ],
            "total_cost": 1,
            "final": [3, 1, 2],
            "bound": 1,
        }
        assert UnknottingCertificate.from_json(payload) == unknotting_sequence(TREFOIL)

    def test_unknown_move(self):
        payload = unknotting_sequence(TREFOIL).to_json()
        payload["moves"][0] = {"kind": "twist"}
        with pytest.raises(InvalidInputError, match="unknown move kind 'twist'"):
            UnknottingCertificate.from_json(payload)

    def test_malformed_move(self):
        payload = unknotting_sequence(TREFOIL).to_json()
        payload["moves"][0] = {"kind": "pass", "position": 1}
        with pytest.raises(InvalidInputError, match="malformed pass move"):
            UnknottingCertificate.from_json(payload)

    def test_missing_field(self):
        with pytest.raises(InvalidInputError, match="missing a field"):
            UnknottingCertificate.from_json({"initial": [1, 2, 3]})
