"""
Unknotting certificates for petal permutations.

Each step of the greedy procedure picks the cyclically adjacent pair of
heights that are closest (mod p), passes the first strand through the strands
between them, and removes the trivial petal that results. The passes cost one
self-crossing change each, so a certificate's total cost bounds the
unknotting number from above by (p-1)(p-3)/8.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Tuple, Union

from .errors import InvalidInputError, VerificationError
from .petalknot_logging import get_logger
from .petalperm import (
    PetalPermutation,
    change_height,
    min_adjacent_distance,
    remove_trivial_petal,
    shift_heights,
)

logger = get_logger(__name__)


def unknotting_bound(p: int) -> int:
    if p < 3 or p % 2 == 0:
        raise InvalidInputError(f"petal count must be odd and at least 3, got {p}")
    return (p - 1) * (p - 3) // 8


@dataclass(frozen=True)
class HeightShift:
    """Cyclic height rotation h -> [h + c]_p; an equivalence, so it costs nothing."""

    c: int
    kind = "shift"

    @property
    def cost(self) -> int:
        return 0

    def apply(self, sigma: PetalPermutation) -> PetalPermutation:
        return shift_heights(sigma, self.c)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "c": self.c}


@dataclass(frozen=True)
class HeightPass:
    position: int
    new_rank: int
    cost: int
    kind = "pass"

    def apply(self, sigma: PetalPermutation) -> PetalPermutation:
        result, cost = change_height(sigma, self.position, self.new_rank)
        if cost != self.cost:
            raise VerificationError(
                f"height pass at position {self.position} costs {cost}, "
                f"certificate says {self.cost}"
            )
        return result

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "position": self.position,
            "new_rank": self.new_rank,
            "cost": self.cost,
        }


@dataclass(frozen=True)
class RemovePetal:
    position: int
    kind = "remove"

    @property
    def cost(self) -> int:
        return 0

    def apply(self, sigma: PetalPermutation) -> PetalPermutation:
        return remove_trivial_petal(sigma, self.position)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "position": self.position}


Move = Union[HeightShift, HeightPass, RemovePetal]


def _move_from_json(payload: Mapping[str, Any]) -> Move:
    kind = payload.get("kind")
    try:
        if kind == HeightShift.kind:
            return HeightShift(int(payload["c"]))
        if kind == HeightPass.kind:
            return HeightPass(
                int(payload["position"]), int(payload["new_rank"]), int(payload["cost"])
            )
        if kind == RemovePetal.kind:
            return RemovePetal(int(payload["position"]))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f"malformed {kind} move: {e}") from None
    raise InvalidInputError(f"unknown move kind {kind!r}")


@dataclass(frozen=True)
class UnknottingCertificate:
    initial: PetalPermutation
    moves: Tuple[Move, ...]
    total_cost: int
    final: PetalPermutation

    def replay(self) -> PetalPermutation:
        """Re-apply every move from ``initial``; raises if the record does not hold up."""
        sigma = self.initial
        for move in self.moves:
            sigma = move.apply(sigma)
        if sigma != self.final:
            raise VerificationError(f"replay ends at {sigma}, certificate says {self.final}")
        if sum(move.cost for move in self.moves) != self.total_cost:
            raise VerificationError("recorded pass costs do not add up to the total cost")
        if self.final.p != 3:
            raise VerificationError(f"certificate stops at {self.final.p} petals")
        return sigma

    @property
    def bound(self) -> int:
        return unknotting_bound(self.initial.p)

    def to_json(self) -> Dict[str, Any]:
        return {
            "initial": self.initial.to_json(),
            "moves": [move.to_json() for move in self.moves],
            "total_cost": self.total_cost,
            "final": self.final.to_json(),
            "bound": self.bound,
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "UnknottingCertificate":
        try:
            return cls(
                initial=PetalPermutation(tuple(payload["initial"])),
                moves=tuple(_move_from_json(m) for m in payload["moves"]),
                total_cost=int(payload["total_cost"]),
                final=PetalPermutation(tuple(payload["final"])),
            )
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"certificate JSON is missing a field: {e}") from None


def unknotting_sequence(sigma: PetalPermutation) -> UnknottingCertificate:
    current = sigma
    moves: List[Move] = []
    total = 0
    while current.p > 3:
        p = current.p
        position, distance = min_adjacent_distance(current)
        x, y = current[position], current[position + 1]
        if abs(x - y) > distance:
            # the short way round wraps past p; rotate heights so it does not
            shift = HeightShift(p - max(x, y) + 1)
            current = shift.apply(current)
            moves.append(shift)
            x, y = current[position], current[position + 1]
        if distance > 1:
            new_rank = y - 1 if x < y else y + 1
            current, cost = change_height(current, position, new_rank)
            moves.append(HeightPass(position, new_rank, cost))
            total += cost
        removal = RemovePetal(position)
        current = removal.apply(current)
        moves.append(removal)
        logger.debug("Unknotting step", petals=current.p, distance=distance, total_cost=total)

    certificate = UnknottingCertificate(sigma, tuple(moves), total, current)
    if total > certificate.bound:
        raise VerificationError(f"unknotting cost {total} exceeds the bound {certificate.bound}")
    return certificate
