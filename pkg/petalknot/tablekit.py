"""
Knot tables and petal-permutation censuses.

``KnotTable`` is the bundled reference table (prime knots through eight
crossings, T(4, 5) and the two trefoil composites) keyed by fingerprint.
``classify`` runs the star pipeline on one representative of every
difference class at a given p and groups the classes by fingerprint; with
several workers the representatives are sharded over a process pool and
every finished shard can be checkpointed to disk.
"""

import csv
import io
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .config_loader import CensusConfig
from .container import get_container
from .errors import BudgetExceededError, InvalidInputError
from .implementations import LocalFileSystem
from .interfaces import FileSystem
from .invariants import DEFAULT_BRACKET_BUDGET, Fingerprint, fingerprint
from .petalknot_logging import get_logger, operation
from .petalperm import PetalPermutation, canonical_class
from .resolve import resolve_with_retry
from .simplify import petal_reduced_diagram
from .uberdiag import UbercrossingDiagram

logger = get_logger(__name__)

BUNDLED_TABLE = Path(__file__).parent / "data" / "knot_table.json"
MIN_CENSUS_P = 3
SHARD_SIZE = 256

AS_TABULATED = "as tabulated"
MIRROR = "mirror"
AMPHICHIRAL = "amphichiral"


def _file_system() -> FileSystem:
    container = get_container()
    if container.is_registered(FileSystem):
        return container.get(FileSystem)
    return LocalFileSystem()


@dataclass(frozen=True)
class KnotRecord:
    name: str
    crossing_number: int
    bridge_number: int
    unknotting_number: Optional[int]
    fingerprint: Fingerprint
    chirality: str = "chiral"
    provenance: str = ""

    @property
    def amphichiral(self) -> bool:
        return self.chirality == AMPHICHIRAL

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "crossing_number": self.crossing_number,
            "bridge_number": self.bridge_number,
            "unknotting_number": self.unknotting_number,
            "chirality": self.chirality,
            "fingerprint": self.fingerprint.to_json(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "KnotRecord":
        try:
            unknotting = payload.get("unknotting_number")
            return cls(
                name=str(payload["name"]),
                crossing_number=int(payload["crossing_number"]),
                bridge_number=int(payload["bridge_number"]),
                unknotting_number=None if unknotting is None else int(unknotting),
                fingerprint=Fingerprint.from_json(payload["fingerprint"]),
                chirality=str(payload.get("chirality", "chiral")),
                provenance=str(payload.get("provenance", "")),
            )
        except (KeyError, TypeError, ValueError) as e:
            name = payload.get("name", "?")
            raise InvalidInputError(f"malformed knot record {name!r}: {e}") from None


@dataclass(frozen=True)
class Match:
    """A table hit; ``chirality`` says whether the diagram is the tabulated knot or its mirror."""

    record: KnotRecord
    chirality: str

    @property
    def label(self) -> str:
        return f"m{self.record.name}" if self.chirality == MIRROR else self.record.name


class KnotTable:
    """Fingerprint-indexed knot records."""

    def __init__(self, records: Sequence[KnotRecord]):
        self.records: Tuple[KnotRecord, ...] = tuple(records)
        self._by_fingerprint: Dict[Fingerprint, KnotRecord] = {}
        self._by_name: Dict[str, KnotRecord] = {}
        for record in self.records:
            if record.fingerprint in self._by_fingerprint:
                other = self._by_fingerprint[record.fingerprint]
                raise InvalidInputError(f"{record.name} and {other.name} share a fingerprint")
            self._by_fingerprint[record.fingerprint] = record
            self._by_name[record.name] = record

    def __len__(self) -> int:
        return len(self.records)

    @classmethod
    def load(
        cls, path: Optional[Union[str, Path]] = None, fs: Optional[FileSystem] = None
    ) -> "KnotTable":
        """Load ``path``, else PETALKNOT_TABLE, else the bundled table."""
        if path is None:
            path = os.environ.get("PETALKNOT_TABLE") or BUNDLED_TABLE
        fs = fs or _file_system()
        try:
            payload = json.loads(fs.read_file(Path(path)))
        except (IOError, json.JSONDecodeError) as e:
            raise InvalidInputError(f"cannot read knot table {path}: {e}") from None
        if not isinstance(payload, list):
            raise InvalidInputError(f"knot table {path} must be a JSON array")
        table = cls([KnotRecord.from_json(item) for item in payload])
        logger.debug("Loaded knot table", path=str(path), records=len(table))
        return table

    def to_json(self) -> List[Dict[str, Any]]:
        return [record.to_json() for record in self.records]

    def by_name(self, name: str) -> Optional[KnotRecord]:
        return self._by_name.get(name)

    def identify(self, fp: Fingerprint) -> Optional[Match]:
        """Exact lookup, then lookup of the mirror image."""
        record = self._by_fingerprint.get(fp)
        if record is not None:
            return Match(record, AMPHICHIRAL if record.amphichiral else AS_TABULATED)
        record = self._by_fingerprint.get(fp.mirror())
        if record is not None:
            return Match(record, MIRROR)
        return None


def knot_table() -> KnotTable:
    """The container's table if one is registered, else a freshly loaded one."""
    container = get_container()
    if container.is_registered(KnotTable):
        return container.get(KnotTable)
    return KnotTable.load()


def identify(fp: Fingerprint, table: Optional[KnotTable] = None) -> Optional[Match]:
    return (table or knot_table()).identify(fp)


# -- census --------------------------------------------------------------------


def _check_census_p(p: int, p_max: int = CensusConfig.p_max) -> None:
    if p % 2 == 0 or not MIN_CENSUS_P <= p <= p_max:
        raise InvalidInputError(f"census needs odd p in {MIN_CENSUS_P}..{p_max}, got {p}")


def enumerate_classes(p: int) -> Iterator[PetalPermutation]:
    """One representative per difference class, sorted by canonical rotation."""
    _check_census_p(p)
    seen: Dict[Tuple[int, ...], PetalPermutation] = {}
    for tail in itertools.permutations(range(2, p + 1)):
        cls = canonical_class(PetalPermutation((1,) + tail))
        seen.setdefault(cls.canonical_rotation, cls.representative)
    for key in sorted(seen):
        yield seen[key]


@dataclass(frozen=True)
class ClassificationRow:
    fingerprint: Fingerprint
    class_count: int
    example: PetalPermutation


@dataclass(frozen=True)
class ClassificationTable:
    """Census of the difference classes at one p.

    ``flagged`` classes went over the bracket budget.
    """

    p: int
    rows: Tuple[ClassificationRow, ...]
    total_classes: int
    flagged: Tuple[PetalPermutation, ...] = ()
    budget: int = DEFAULT_BRACKET_BUDGET

    def row_for(self, fp: Fingerprint) -> Optional[ClassificationRow]:
        return next((row for row in self.rows if row.fingerprint == fp), None)

    def __contains__(self, fp: Fingerprint) -> bool:
        return self.row_for(fp) is not None

    def to_json(self, table: Optional[KnotTable] = None) -> Dict[str, Any]:
        rows = []
        for row in self.rows:
            match = table.identify(row.fingerprint) if table else None
            rows.append(
                {
                    "knot": match.label if match else None,
                    "class_count": row.class_count,
                    "example": row.example.to_json(),
                    "fingerprint": row.fingerprint.to_json(),
                }
            )
        return {
            "p": self.p,
            "total_classes": self.total_classes,
            "budget": self.budget,
            "rows": rows,
            "flagged": [sigma.to_json() for sigma in self.flagged],
        }

    def to_csv(self, table: Optional[KnotTable] = None) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["knot", "class_count", "example", "determinant", "alexander", "jones"])
        for row in self.rows:
            match = table.identify(row.fingerprint) if table else None
            described = row.fingerprint.describe()
            writer.writerow(
                [
                    match.label if match else "",
                    row.class_count,
                    str(row.example),
                    described["determinant"],
                    described["alexander"],
                    described["jones"],
                ]
            )
        for sigma in self.flagged:
            writer.writerow(["budget exceeded", 1, str(sigma), "", "", ""])
        return buffer.getvalue()


ShardResult = List[Tuple[List[int], Optional[Dict[str, Any]]]]


def _classify_shard(p: int, budget: int, shard: Sequence[Tuple[int, ...]]) -> ShardResult:
    """Fingerprints of one shard of representatives; None where the budget ran out."""
    results: ShardResult = []
    for entries in shard:
        sigma = PetalPermutation(entries)
        try:
            fp = fingerprint(petal_reduced_diagram(sigma), budget)
        except BudgetExceededError:
            results.append((list(entries), None))
            continue
        results.append((list(entries), fp.to_json()))
    return results


def _checkpoint_path(directory: Path, p: int, budget: int, index: int) -> Path:
    return directory / f"p{p}-b{budget}-shard{index:04d}.json"


def _load_checkpoint(
    fs: FileSystem, path: Path, shard: Sequence[Tuple[int, ...]]
) -> Optional[ShardResult]:
    if not fs.exists(path):
        return None
    try:
        payload = json.loads(fs.read_file(path))
        results = [(list(entries), fp) for entries, fp in payload["results"]]
    except (IOError, ValueError, KeyError, TypeError) as e:
        logger.warning("Ignoring unreadable checkpoint", path=str(path), error=str(e))
        return None
    if [tuple(entries) for entries, _ in results] != list(shard):
        logger.warning("Ignoring checkpoint for a different shard", path=str(path))
        return None
    return results


def classify(
    p: int,
    budget: int = DEFAULT_BRACKET_BUDGET,
    workers: int = 1,
    checkpoint_dir: Optional[Union[str, Path]] = None,
) -> ClassificationTable:
    """Fingerprint every difference class at ``p`` and group classes by knot."""
    representatives = [sigma.entries for sigma in enumerate_classes(p)]
    shards = [
        representatives[i : i + SHARD_SIZE] for i in range(0, len(representatives), SHARD_SIZE)
    ]
    fs = _file_system()
    directory = Path(checkpoint_dir) if checkpoint_dir else None

    with operation("classify", logger) as op:
        op.add_context(p=p, classes=len(representatives), shards=len(shards), workers=workers)
        results: List[Optional[ShardResult]] = [None] * len(shards)
        pending = []
        for index, shard in enumerate(shards):
            if directory is not None:
                path = _checkpoint_path(directory, p, budget, index)
                results[index] = _load_checkpoint(fs, path, shard)
            if results[index] is None:
                pending.append(index)
        if len(pending) < len(shards):
            op.log_progress("resuming from checkpoints", done=len(shards) - len(pending))

        def finish(index: int, shard_result: ShardResult) -> None:
            results[index] = shard_result
            if directory is not None:
                payload = {"p": p, "budget": budget, "shard": index, "results": shard_result}
                fs.write_file(_checkpoint_path(directory, p, budget, index), json.dumps(payload))
            op.log_progress("shard done", shard=index)

        if workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {
                    index: pool.submit(_classify_shard, p, budget, shards[index])
                    for index in pending
                }
                for index in pending:
                    finish(index, futures[index].result())
        else:
            for index in pending:
                finish(index, _classify_shard(p, budget, shards[index]))

    counts: Dict[Fingerprint, int] = {}
    examples: Dict[Fingerprint, PetalPermutation] = {}
    flagged: List[PetalPermutation] = []
    for shard_result in results:
        for entries, fp_json in shard_result or []:
            sigma = PetalPermutation(tuple(entries))
            if fp_json is None:
                logger.warning(
                    "Bracket budget exceeded; class flagged", permutation=str(sigma), budget=budget
                )
                flagged.append(sigma)
                continue
            fp = Fingerprint.from_json(fp_json)
            counts[fp] = counts.get(fp, 0) + 1
            examples.setdefault(fp, sigma)

    rows = tuple(ClassificationRow(fp, counts[fp], examples[fp]) for fp in examples)
    return ClassificationTable(p, rows, len(representatives), tuple(flagged), budget)


def min_petal_search(
    fp: Fingerprint,
    p_max: int = CensusConfig.p_max,
    budget: int = DEFAULT_BRACKET_BUDGET,
    workers: int = 1,
) -> Optional[int]:
    """Smallest p <= p_max with a petal permutation of this exact fingerprint."""
    _check_census_p(p_max)
    for p in range(MIN_CENSUS_P, p_max + 1, 2):
        if fp in classify(p, budget, workers):
            return p
    return None


# -- bridge bound ----------------------------------------------------------------


def uber_lower_bound(bridge_number: int) -> int:
    """An übercrossing diagram of a knot with bridge number b has at least 2b strands."""
    if bridge_number < 1:
        raise InvalidInputError(f"bridge number must be positive, got {bridge_number}")
    return 2 * bridge_number


def check_bridge_bound(
    diagram: UbercrossingDiagram,
    record: KnotRecord,
    budget: int = DEFAULT_BRACKET_BUDGET,
) -> bool:
    """True iff the diagram respects n >= 2b for the knot it represents."""
    fp = fingerprint(resolve_with_retry(diagram), budget)
    if fp not in (record.fingerprint, record.fingerprint.mirror()):
        raise InvalidInputError(f"diagram does not represent {record.name}")
    ok = diagram.n >= uber_lower_bound(record.bridge_number)
    if not ok:
        logger.warning("Diagram below the bridge bound", knot=record.name, strands=diagram.n)
    return ok
