"""
Braid and 4-plat closures as planar diagrams.

Braid words are lists of nonzero integers: ``i`` is sigma_i (the strand at
position i crosses over the strand at i+1), ``-i`` its inverse. The closures
are drawn as 3D polylines and projected with the same engine as the petal
constructions, so they double as independent oracles for the torus knots and
as the source of the bundled knot table diagrams.
"""

from typing import Dict, List, Sequence, Tuple

from .errors import InvalidInputError
from .invariants import normalize_alexander
from .laurent import LaurentPolynomial
from .planar import PlanarDiagram, polygon_pd

Point = Tuple[float, float, float]
Piece = Tuple[int, List[Point]]

PLAT_STRANDS = 4
_PLANE = 0.5


def _check_word(word: Sequence[int], strands: int) -> None:
    if strands < 1:
        raise InvalidInputError(f"a braid needs at least one strand, got {strands}")
    for position, g in enumerate(word, start=1):
        if g == 0 or abs(g) >= strands:
            raise InvalidInputError(
                f"generator {g} is not valid on {strands} strands", position=position
            )


def _layout(word: Sequence[int], strands: int) -> List[Dict[int, Piece]]:
    """For every letter, where each position goes and the points on the way."""
    pieces = []
    for k, g in enumerate(word):
        i = abs(g)
        level: Dict[int, Piece] = {}
        for pos in range(1, strands + 1):
            if pos in (i, i + 1):
                target = i + 1 if pos == i else i
                over = g > 0 if pos == i else g < 0
                depth = 0.0 if over else 1.0
                level[pos] = (
                    target,
                    [
                        (pos, k + 0.25, _PLANE),
                        (pos, k + 0.3, depth),
                        (target, k + 0.7, depth),
                        (target, k + 0.75, _PLANE),
                    ],
                )
            else:
                level[pos] = (pos, [(pos, k + 0.25, _PLANE), (pos, k + 0.75, _PLANE)])
        pieces.append(level)
    return pieces


def braid_closure(word: Sequence[int], strands: int) -> PlanarDiagram:
    """Closure of a braid; the closure must be a knot."""
    _check_word(word, strands)
    length = len(word)
    pieces = _layout(word, strands)
    points: List[Point] = []
    visited = set()
    pos = 1
    while True:
        visited.add(pos)
        for level in pieces:
            pos, path = level[pos]
            points.extend(path)
        # return loops are nested: position m runs closest to the braid
        lane = strands - pos + 1
        top = length + 0.1 * lane + 0.5
        bottom = -0.1 * lane - 0.5
        side = strands + 0.3 * lane + 0.2
        points += [
            (pos, top, _PLANE),
            (side, top, _PLANE),
            (side, bottom, _PLANE),
            (pos, bottom, _PLANE),
        ]
        if pos == 1:
            break
        if pos in visited:
            raise InvalidInputError("braid permutation does not return to the first strand")
    if len(visited) != strands:
        raise InvalidInputError(f"closure of {list(word)} has more than one component")
    return polygon_pd(points)


def _plat_partner(pos: int) -> int:
    return pos + 1 if pos % 2 else pos - 1


def plat_closure(word: Sequence[int]) -> PlanarDiagram:
    """4-plat closure: caps join (1,2) and (3,4) at the top, cups at the bottom."""
    _check_word(word, PLAT_STRANDS)
    length = len(word)
    pieces = _layout(word, PLAT_STRANDS)
    points: List[Point] = []
    pos = 1
    for _ in range(2 * PLAT_STRANDS + 1):
        for level in pieces:
            pos, path = level[pos]
            points.extend(path)
        partner = _plat_partner(pos)
        points += [(pos, length + 0.5, _PLANE), (partner, length + 0.5, _PLANE)]
        pos = partner

        for level in reversed(pieces):
            start = next(p for p, (target, _) in level.items() if target == pos)
            points.extend(reversed(level[start][1]))
            pos = start
        partner = _plat_partner(pos)
        points += [(pos, -0.5, _PLANE), (partner, -0.5, _PLANE)]
        pos = partner
        if pos == 1:
            return polygon_pd(points)
    raise InvalidInputError(f"4-plat closure of {list(word)} does not close up")


def conway_to_plat(coefficients: Sequence[int]) -> List[int]:
    """4-plat word of a rational knot from its Conway notation."""
    if not coefficients or any(c < 1 for c in coefficients):
        raise InvalidInputError("Conway notation needs positive integers")
    c = list(coefficients)
    if len(c) % 2 == 0:
        c[-1] -= 1
        c.append(1)
    word: List[int] = []
    for index, count in enumerate(c):
        word += [2 if index % 2 == 0 else -1] * count
    return word


def torus_braid(p: int, q: int) -> List[int]:
    """(sigma_1 ... sigma_{p-1})^q, whose closure on p strands is T(p, q)."""
    if p < 2 or q < 1:
        raise InvalidInputError(f"torus knot parameters out of range: ({p}, {q})")
    return list(range(1, p)) * q


def torus_knot_alexander(p: int, q: int) -> LaurentPolynomial:
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), symmetrised."""
    if p < 1 or q < 1:
        raise InvalidInputError(f"torus knot parameters out of range: ({p}, {q})")

    def t_power_minus_one(k: int) -> LaurentPolynomial:
        return LaurentPolynomial({k: 1, 0: -1})

    numerator = t_power_minus_one(p * q) * t_power_minus_one(1)
    quotient = numerator.exact_divide(t_power_minus_one(p) * t_power_minus_one(q))
    return normalize_alexander(quotient)
