"""
Petal permutations.

A petal permutation lists the heights of the p strands of a petal projection
read clockwise around the multi-crossing, height 1 being the top strand. Two
permutations describe the same projection up to moving the top strand to the
bottom when their cyclic difference sequences agree up to rotation.
"""

import re
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

from .errors import InvalidInputError


def reduce_mod(value: int, p: int) -> int:
    """Representative of ``value`` mod p in 1..p."""
    return (value - 1) % p + 1


@dataclass(frozen=True)
class PetalPermutation:
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        p = len(entries)
        seen = set()
        for position, value in enumerate(entries, start=1):
            if not 1 <= value <= p:
                raise InvalidInputError(f"entry {value} is outside 1..{p}", position=position)
            if value in seen:
                raise InvalidInputError(f"duplicate entry {value}", position=position)
            seen.add(value)
        if p < 3:
            raise InvalidInputError(f"a petal permutation needs at least 3 entries, got {p}")
        if p % 2 == 0:
            raise InvalidInputError(f"a petal permutation has odd length, got even length {p}")

    @property
    def p(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, position: int) -> int:
        """1-based cyclic access."""
        return self.entries[(position - 1) % self.p]

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.entries) + ")"

    def to_json(self) -> List[int]:
        return list(self.entries)


@dataclass(frozen=True)
class DifferenceClass:
    """Equivalence class key. Classes compare by their canonical rotation."""

    canonical_rotation: Tuple[int, ...]
    representative: PetalPermutation = field(compare=False)
    diffs: Tuple[int, ...] = field(compare=False)

    @property
    def p(self) -> int:
        return len(self.canonical_rotation)


_SEPARATORS = re.compile(r"[\s,]+")


def parse_permutation(text: str) -> PetalPermutation:
    """Parse ``"1,3,5,2,4"``, ``"(1 3 5 2 4)"`` and similar."""
    body = text.strip()
    if body[:1] in "([" and body[-1:] in ")]":
        body = body[1:-1]
    tokens = [tok for tok in _SEPARATORS.split(body) if tok]
    values = []
    for position, token in enumerate(tokens, start=1):
        try:
            values.append(int(token))
        except ValueError:
            raise InvalidInputError(f"not an integer: {token!r}", position=position) from None
    return PetalPermutation(tuple(values))


def diffs(sigma: PetalPermutation) -> Tuple[int, ...]:
    p = sigma.p
    return tuple((sigma[i + 1] - sigma[i]) % p for i in range(1, p + 1))


def from_diffs(steps: Sequence[int], start: int = 1) -> PetalPermutation:
    p = len(steps)
    entries = [start]
    for step in steps[:-1]:
        entries.append(reduce_mod(entries[-1] + step, p))
    return PetalPermutation(tuple(entries))


def _rotations(seq: Sequence[int]) -> Iterable[Tuple[int, ...]]:
    for r in range(len(seq)):
        yield tuple(seq[r:]) + tuple(seq[:r])


def canonical_class(sigma: PetalPermutation) -> DifferenceClass:
    d = diffs(sigma)
    best = min(_rotations(d))
    return DifferenceClass(canonical_rotation=best, representative=from_diffs(best), diffs=d)


def class_members(sigma: PetalPermutation) -> List[PetalPermutation]:
    """Every permutation with a_1 = 1 in the class of ``sigma``."""
    return sorted({from_diffs(rot) for rot in _rotations(diffs(sigma))}, key=lambda s: s.entries)


def equivalent(first: PetalPermutation, second: PetalPermutation) -> bool:
    return canonical_class(first) == canonical_class(second)


def cyclic_distance(p: int, x: int, y: int) -> int:
    if not (1 <= x <= p and 1 <= y <= p):
        raise InvalidInputError(f"heights {x}, {y} must lie in 1..{p}")
    d = (y - x) % p
    return min(d, p - d)


def trivial_petals(sigma: PetalPermutation) -> List[int]:
    """1-based positions i whose pair (a_i, a_{i+1}) has cyclic distance 1."""
    p = sigma.p
    return [i for i in range(1, p + 1) if cyclic_distance(p, sigma[i], sigma[i + 1]) == 1]


def rank_compress(values: Sequence[int]) -> Tuple[int, ...]:
    order = {v: rank for rank, v in enumerate(sorted(values), start=1)}
    return tuple(order[v] for v in values)


def remove_trivial_petal(sigma: PetalPermutation, position: int) -> PetalPermutation:
    p = sigma.p
    if p <= 3:
        raise InvalidInputError("a 3-petal projection is already the unknot; nothing to remove")
    if position not in trivial_petals(sigma):
        raise InvalidInputError(f"position {position} is not a trivial petal of {sigma}")
    drop = {position - 1, position % p}
    kept = [h for k, h in enumerate(sigma.entries) if k not in drop]
    return PetalPermutation(rank_compress(kept))


def change_height(
    sigma: PetalPermutation, position: int, new_rank: int
) -> Tuple[PetalPermutation, int]:
    """Move one strand to ``new_rank``; returns the permutation and the number of strands passed."""
    p = sigma.p
    if not 1 <= new_rank <= p:
        raise InvalidInputError(f"rank {new_rank} is outside 1..{p}")
    if not 1 <= position <= p:
        raise InvalidInputError(f"position {position} is outside 1..{p}")
    old = sigma[position]
    result = []
    for k, h in enumerate(sigma.entries, start=1):
        if k == position:
            result.append(new_rank)
        elif old < h <= new_rank:
            result.append(h - 1)
        elif new_rank <= h < old:
            result.append(h + 1)
        else:
            result.append(h)
    return PetalPermutation(tuple(result)), abs(new_rank - old)


def shift_heights(sigma: PetalPermutation, c: int) -> PetalPermutation:
    """Cyclic height rotation h -> [h + c]_p; the projection is unchanged up to isotopy."""
    return PetalPermutation(tuple(reduce_mod(h + c, sigma.p) for h in sigma.entries))


def torus_permutation(r: int) -> PetalPermutation:
    """Petal permutation of the torus knot T(r, r+1)."""
    if r < 1:
        raise InvalidInputError(f"r must be at least 1, got {r}")
    p = 2 * r + 1
    return PetalPermutation(tuple(reduce_mod(1 + i * r, p) for i in range(p)))


def is_extremal(sigma: PetalPermutation) -> bool:
    p = sigma.p
    half = (p - 1) // 2
    return all(cyclic_distance(p, sigma[i], sigma[i + 1]) == half for i in range(1, p + 1))


def min_adjacent_distance(sigma: PetalPermutation) -> Tuple[int, int]:
    """(position, distance) of the closest cyclic pair; ties go to the smallest position."""
    p = sigma.p
    return min(
        ((i, cyclic_distance(p, sigma[i], sigma[i + 1])) for i in range(1, p + 1)),
        key=lambda item: (item[1], item[0]),
    )
