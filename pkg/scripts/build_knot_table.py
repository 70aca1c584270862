#!/usr/bin/env python3
"""
Regenerate petalknot/data/knot_table.json from explicit diagrams.
Usage: python scripts/build_knot_table.py [output.json]

Every record is computed from a braid or 4-plat closure; determinants and,
where listed, Alexander polynomials are checked against the reference values
before anything is written.
"""

import json
import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from petalknot.braids import braid_closure, conway_to_plat, plat_closure
from petalknot.invariants import fingerprint
from petalknot.laurent import LaurentPolynomial
from petalknot.planar import PlanarDiagram

DEFAULT_OUTPUT = Path(__file__).resolve().parent.parent / "petalknot" / "data" / "knot_table.json"
BUDGET = 30
KNOTINFO = "crossing, bridge and unknotting numbers: KnotInfo; "

# name, Conway notation, unknotting number, determinant, amphichiral
TWO_BRIDGE = [
    ("3_1", [3], 1, 3, False),
    ("4_1", [2, 2], 1, 5, True),
    ("5_1", [5], 2, 5, False),
    ("5_2", [3, 2], 1, 7, False),
    ("6_1", [4, 2], 1, 9, False),
    ("6_2", [3, 1, 2], 1, 11, False),
    ("6_3", [2, 1, 1, 2], 1, 13, True),
    ("7_1", [7], 3, 7, False),
    ("7_2", [5, 2], 1, 11, False),
    ("7_3", [4, 3], 2, 13, False),
    ("7_4", [3, 1, 3], 2, 15, False),
    ("7_5", [3, 2, 2], 2, 17, False),
    ("7_6", [2, 2, 1, 2], 1, 19, False),
    ("7_7", [2, 1, 1, 1, 2], 1, 21, False),
    ("8_1", [6, 2], 1, 13, False),
    ("8_2", [5, 1, 2], 2, 17, False),
    ("8_3", [4, 4], 2, 17, True),
    ("8_4", [4, 1, 3], 2, 19, False),
    ("8_6", [3, 3, 2], 2, 23, False),
    ("8_7", [4, 1, 1, 2], 1, 23, False),
    ("8_8", [2, 3, 1, 2], 2, 25, False),
    ("8_9", [3, 1, 1, 3], 1, 25, True),
    ("8_11", [3, 2, 1, 2], 1, 27, False),
    ("8_12", [2, 2, 2, 2], 2, 29, True),
    ("8_13", [3, 1, 1, 1, 2], 1, 29, False),
    ("8_14", [2, 2, 1, 1, 2], 1, 31, False),
]

# name, braid word, strands, unknotting number, determinant, Alexander from t^-k to t^k, amphichiral
BRAIDS = [
    ("8_5", [-2, 1, 1, 1, -2, 1, 1, 1], 3, 2, 21, [1, -3, 4, -5, 4, -3, 1], False),
    ("8_10", [-2, -2, 1, 1, -2, 1, 1, 1], 3, 2, 27, [1, -3, 6, -7, 6, -3, 1], False),
    ("8_15", [1, 1, -2, 1, 3, 2, 2, 2, 3], 4, 2, 33, [3, -8, 11, -8, 3], False),
    ("8_16", [1, 1, -2, 1, 1, -2, 1, -2], 3, 2, 35, [1, -4, 8, -9, 8, -4, 1], False),
    ("8_17", [1, 1, -2, 1, -2, 1, -2, -2], 3, 1, 37, [1, -4, 8, -11, 8, -4, 1], True),
    ("8_18", [1, -2, 1, -2, 1, -2, 1, -2], 3, 2, 45, [1, -5, 10, -13, 10, -5, 1], True),
    ("8_19", [1, 2, 1, 2, 1, 2, 1, 2], 3, 3, 3, [1, -1, 0, 1, 0, -1, 1], False),
    ("8_20", [1, 1, 1, -2, -1, -1, -1, -2], 3, 1, 9, [1, -2, 3, -2, 1], False),
    ("8_21", [1, 1, 1, 2, -1, -1, 2, 2], 3, 1, 15, [1, -4, 5, -4, 1], False),
]


def _symmetric(coefficients: Sequence[int]) -> LaurentPolynomial:
    half = (len(coefficients) - 1) // 2
    return LaurentPolynomial({i - half: c for i, c in enumerate(coefficients) if c})


def _natural_key(record: Dict[str, Any]) -> tuple:
    chunks = re.split(r"(\d+)", record["name"])
    return (record["crossing_number"], [int(c) if c.isdigit() else c for c in chunks])


class TableBuilder:
    """Collects checked knot records"""

    def __init__(self, budget: int = BUDGET):
        self.budget = budget
        self.records: List[Dict[str, Any]] = []

    def add(
        self,
        name: str,
        pd: PlanarDiagram,
        crossing_number: int,
        bridge_number: int,
        unknotting_number: int,
        determinant: int,
        provenance: str,
        alexander: Optional[Sequence[int]] = None,
        amphichiral: bool = False,
    ) -> None:
        fp = fingerprint(pd, self.budget)
        if fp.determinant != determinant:
            raise ValueError(f"{name}: determinant {fp.determinant}, expected {determinant}")
        if alexander is not None and fp.alexander != _symmetric(alexander):
            raise ValueError(f"{name}: Alexander polynomial {fp.alexander}")
        if amphichiral and not fp.is_amphichiral():
            raise ValueError(f"{name}: Jones polynomial is not palindromic")
        self.records.append(
            {
                "name": name,
                "crossing_number": crossing_number,
                "bridge_number": bridge_number,
                "unknotting_number": unknotting_number,
                "chirality": "amphichiral" if amphichiral else "chiral",
                "fingerprint": fp.to_json(),
                "provenance": provenance,
            }
        )
        print(f"  {name:10s} det {fp.determinant:3d}  {fp.alexander}")

    def build(self) -> List[Dict[str, Any]]:
        self.add(
            "0_1",
            PlanarDiagram(),
            0,
            1,
            0,
            1,
            "invariants of the crossingless diagram",
            amphichiral=True,
        )
        for name, notation, u, det, amph in TWO_BRIDGE:
            source = "diagram: 4-plat closure of Conway notation " + " ".join(map(str, notation))
            pd = plat_closure(conway_to_plat(notation))
            crossings = int(name.split("_")[0])
            self.add(name, pd, crossings, 2, u, det, KNOTINFO + source, amphichiral=amph)
        for name, word, strands, u, det, alexander, amph in BRAIDS:
            source = f"diagram: closure of {strands}-braid " + " ".join(map(str, word))
            pd = braid_closure(word, strands)
            self.add(name, pd, 8, 3, u, det, KNOTINFO + source, alexander, amph)
        self.add(
            "T(4,5)",
            braid_closure([1, 2, 3] * 5, 4),
            15,
            4,
            6,
            5,
            "crossing, bridge and unknotting numbers of torus knots T(r,r+1): r^2-1, r, r(r-1)/2; "
            "diagram: closure of 4-braid (1 2 3)^5",
            [1, -1, 0, 0, 1, 0, -1, 0, 1, 0, 0, -1, 1],
        )
        self.add(
            "3_1#3_1",
            braid_closure([1, 1, 1, 2, 2, 2], 3),
            6,
            3,
            2,
            9,
            "granny knot, bridge number by Schubert additivity; "
            "diagram: closure of 3-braid 1 1 1 2 2 2",
        )
        self.add(
            "3_1#m3_1",
            braid_closure([1, 1, 1, -2, -2, -2], 3),
            6,
            3,
            2,
            9,
            "square knot, bridge number by Schubert additivity; "
            "diagram: closure of 3-braid 1 1 1 -2 -2 -2",
            amphichiral=True,
        )
        self.records.sort(key=_natural_key)
        seen = set()
        for record in self.records:
            key = json.dumps(record["fingerprint"], sort_keys=True)
            if key in seen:
                raise ValueError(f"{record['name']} repeats the fingerprint of an earlier record")
            seen.add(key)
        return self.records


def main() -> int:
    output = Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_OUTPUT
    print("🔨 Computing knot table records...")
    try:
        records = TableBuilder().build()
    except ValueError as e:
        print(f"❌ {e}")
        return 1
    output.write_text(json.dumps(records, indent=1) + "\n", encoding="utf-8")
    print(f"✅ Wrote {len(records)} records to {output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
