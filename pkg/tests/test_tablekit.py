"""Tests for the knot table and petal censuses."""

import json
import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from petalknot.errors import InvalidInputError
from petalknot.invariants import UNKNOT_FINGERPRINT, fingerprint
from petalknot.petalperm import PetalPermutation
from petalknot.resolve import resolve_with_retry
from petalknot.tablekit import (
    AMPHICHIRAL,
    AS_TABULATED,
    MIRROR,
    KnotRecord,
    KnotTable,
    check_bridge_bound,
    classify,
    enumerate_classes,
    identify,
    min_petal_search,
    uber_lower_bound,
)
from petalknot.uberdiag import from_petal

TREFOIL = PetalPermutation((1, 3, 5, 2, 4))


@pytest.fixture(scope="module")
def table():
    return KnotTable.load()


@pytest.fixture(scope="module")
def trefoil_fp():
    return fingerprint(resolve_with_retry(from_petal(TREFOIL)))


class TestKnotTable:
    """The bundled table."""

    def test_bundled_records(self, table):
        assert len(table) == 39
        assert table.by_name("8_21") is not None
        assert table.by_name("T(4,5)").fingerprint.determinant == 5
        assert table.by_name("9_1") is None

    def test_chirality(self, table):
        assert table.by_name("4_1").amphichiral
        assert not table.by_name("3_1").amphichiral

    def test_identify_both_chiralities(self, table, trefoil_fp):
        match = table.identify(trefoil_fp)
        mirrored = table.identify(trefoil_fp.mirror())
        assert {match.label, mirrored.label} == {"3_1", "m3_1"}
        assert {match.chirality, mirrored.chirality} == {AS_TABULATED, MIRROR}

    def test_identify_unknot(self, table):
        match = identify(UNKNOT_FINGERPRINT, table)
        assert match.label == "0_1"
        assert match.chirality == AMPHICHIRAL

    def test_unknown_fingerprint(self, table, trefoil_fp):
        assert table.identify(trefoil_fp.connected_sum(table.by_name("4_1").fingerprint)) is None

    def test_duplicate_fingerprints_rejected(self, table):
        record = table.by_name("3_1")
        with pytest.raises(InvalidInputError, match="share a fingerprint"):
            KnotTable([record, KnotRecord("copy", 3, 2, 1, record.fingerprint)])

    def test_record_json(self, table):
        record = table.by_name("5_2")
        assert KnotRecord.from_json(record.to_json()) == record

    def test_malformed_record(self):
        with pytest.raises(InvalidInputError, match="malformed knot record 'x'"):
            KnotRecord.from_json({"name": "x"})


class TestLoading:
    def test_missing_file(self):
        with pytest.raises(InvalidInputError, match="cannot read knot table"):
            KnotTable.load("/nonexistent/table.json")

    def test_must_be_array(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "table.json"
            path.write_text(json.dumps({"name": "0_1"}))
            with pytest.raises(InvalidInputError, match="JSON array"):
                KnotTable.load(path)

    def test_environment_override(self, table):
        with tempfile.TemporaryDirectory() as temp_dir:
            path = Path(temp_dir) / "small.json"
            records = [table.by_name("0_1").to_json(), table.by_name("3_1").to_json()]
            path.write_text(json.dumps(records))
            with patch.dict(os.environ, {"PETALKNOT_TABLE": str(path)}):
                small = KnotTable.load()
            assert len(small) == 2


class TestCensus:
    def test_enumerate_p3(self):
        assert list(enumerate_classes(3)) == [
            PetalPermutation((1, 2, 3)),
            PetalPermutation((1, 3, 2)),
        ]

    def test_enumerate_representatives_start_at_one(self):
        assert all(sigma[1] == 1 for sigma in enumerate_classes(5))

    @pytest.mark.parametrize("p", [1, 4, 11])
    def test_census_range(self, p):
        with pytest.raises(InvalidInputError, match="census needs odd p"):
            list(enumerate_classes(p))

    def test_classify_p3(self):
        census = classify(3)
        assert census.total_classes == 2
        assert len(census.rows) == 1
        assert census.rows[0].fingerprint.is_unknot()
        assert census.rows[0].class_count == 2

    def test_classify_p5(self, table, trefoil_fp):
        census = classify(5)
        labels = {row["knot"] for row in census.to_json(table)["rows"]}
        assert labels == {"0_1", "3_1", "m3_1"}
        assert trefoil_fp in census
        assert sum(row.class_count for row in census.rows) == census.total_classes
        assert not census.flagged

    def test_budget_flags_classes(self):
        census = classify(5, budget=0)
        assert census.flagged
        assert all(row.fingerprint.is_unknot() for row in census.rows)
        assert "budget exceeded" in census.to_csv()

    def test_csv(self, table):
        lines = classify(3).to_csv(table).splitlines()
        assert lines[0] == "knot,class_count,example,determinant,alexander,jones"
        assert lines[1].startswith("0_1,2,")

    def test_checkpoints_are_written_and_reused(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            first = classify(3, checkpoint_dir=temp_dir)
            shard = Path(temp_dir) / "p3-b24-shard0000.json"
            assert shard.exists()
            assert json.loads(shard.read_text())["p"] == 3
            assert classify(3, checkpoint_dir=temp_dir) == first

    def test_foreign_checkpoint_is_ignored(self):
        with tempfile.TemporaryDirectory() as temp_dir:
            shard = Path(temp_dir) / "p3-b24-shard0000.json"
            shard.write_text(json.dumps({"results": [[[1, 2, 4], None]]}))
            census = classify(3, checkpoint_dir=temp_dir)
            assert census.rows[0].class_count == 2

    @pytest.mark.slow
    def test_classify_p7_finds_torus_knot(self, table):
        census = classify(7)
        labels = {row["knot"] for row in census.to_json(table)["rows"]}
        assert labels & {"8_19", "m8_19"}
        assert not census.flagged


class TestSearchAndBridges:
    def test_min_petal_search(self, trefoil_fp):
        assert min_petal_search(UNKNOT_FINGERPRINT, p_max=5) == 3
        assert min_petal_search(trefoil_fp, p_max=5) == 5

    def test_min_petal_search_gives_up(self, table):
        assert min_petal_search(table.by_name("4_1").fingerprint, p_max=5) is None

    def test_uber_lower_bound(self):
        assert uber_lower_bound(2) == 4
        with pytest.raises(InvalidInputError):
            uber_lower_bound(0)

    def test_bridge_bound_holds(self, table):
        assert check_bridge_bound(from_petal(TREFOIL), table.by_name("3_1"))

    def test_bridge_bound_needs_matching_knot(self, table):
        with pytest.raises(InvalidInputError, match="does not represent 4_1"):
            check_bridge_bound(from_petal(TREFOIL), table.by_name("4_1"))
