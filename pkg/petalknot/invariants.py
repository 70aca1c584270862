"""
Exact knot invariants of planar diagrams.

The Kauffman bracket is evaluated as a state sum over a frontier of open arc
ends, the Alexander polynomial as a minor of the Alexander matrix (determinant
over ZZ[t] with sympy), and the two together with the determinant form the
``Fingerprint`` the package identifies knots by.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix

from .cache import FingerprintCache
from .container import get_container
from .errors import BudgetExceededError, InvalidDiagramError, VerificationError
from .laurent import LaurentPolynomial
from .petalknot_logging import get_logger
from .planar import PlanarDiagram
from .simplify import reduce_r1_r2

logger = get_logger(__name__)

DEFAULT_BRACKET_BUDGET = 24

_T = sympy.Symbol("t")
_A = LaurentPolynomial.monomial(1)
_A_INV = LaurentPolynomial.monomial(-1)
_DELTA = LaurentPolynomial({2: -1, -2: -1})


def _frontier_order(pd: PlanarDiagram) -> List[int]:
    """Greedy crossing order that keeps the number of open arc ends small."""
    count = pd.crossing_count
    used = [False] * count
    seen: Dict[int, int] = {}
    order = []
    for _ in range(count):
        best, best_score = -1, -1
        for k in range(count):
            if used[k]:
                continue
            score = sum(1 for label in pd.crossings[k] if seen.get(label) == 1)
            if score > best_score:
                best, best_score = k, score
        used[best] = True
        order.append(best)
        for label in pd.crossings[best]:
            seen[label] = seen.get(label, 0) + 1
    return order


def kauffman_bracket(pd: PlanarDiagram, budget: int = DEFAULT_BRACKET_BUDGET) -> LaurentPolynomial:
    """Normalised bracket <D> in A, with <unknot> = 1."""
    if pd.is_trivial():
        return LaurentPolynomial.one()
    if pd.crossing_count > budget:
        raise BudgetExceededError(pd.crossing_count, budget)

    # frontier state: pairing of open arc ends -> accumulated polynomial
    states: Dict[Tuple[Tuple[int, int], ...], Tuple[Dict[int, int], LaurentPolynomial]] = {
        (): ({}, LaurentPolynomial.one())
    }
    for k in _frontier_order(pd):
        a, b, c, d = pd.crossings[k]
        smoothings = (((a, b), (c, d), _A), ((a, d), (b, c), _A_INV))
        merged: Dict[Tuple[Tuple[int, int], ...], Tuple[Dict[int, int], LaurentPolynomial]] = {}
        for pairing, poly in states.values():
            for first, second, factor in smoothings:
                ends = dict(pairing)
                loops = 0
                for x, y in (first, second):
                    x_open, y_open = x in ends, y in ends
                    if x == y and not x_open:
                        loops += 1
                        continue
                    if x_open and y_open and ends[x] == y:
                        del ends[x], ends[y]
                        loops += 1
                        continue
                    far_x = ends.pop(x) if x_open else x
                    far_y = ends.pop(y) if y_open else y
                    if far_x == far_y:
                        ends.pop(far_x, None)
                        loops += 1
                        continue
                    ends[far_x] = far_y
                    ends[far_y] = far_x
                value = poly * factor
                for _ in range(loops):
                    value = value * _DELTA
                key = tuple(sorted((p, q) for p, q in ends.items() if p < q))
                if key in merged:
                    merged[key] = (merged[key][0], merged[key][1] + value)
                else:
                    merged[key] = (ends, value)
        states = {key: state for key, state in merged.items() if state[1]}

    total = LaurentPolynomial.zero()
    for _, poly in states.values():
        total = total + poly
    return total.exact_divide(_DELTA)


def jones(pd: PlanarDiagram, budget: int = DEFAULT_BRACKET_BUDGET) -> LaurentPolynomial:
    """Jones polynomial as integer exponents of t^(1/2).

    V = (-A^3)^(-w) <D> with A = t^(-1/4). For a knot every exponent of the
    result is even; that is checked rather than assumed.
    """
    w = pd.writhe
    factor = LaurentPolynomial.monomial(-3 * w, -1 if w % 2 else 1)
    normalised = kauffman_bracket(pd, budget) * factor
    if any(e % 2 for e, _ in normalised):
        raise VerificationError("bracket has an odd power of A after writhe normalisation")
    half = LaurentPolynomial({-e // 2: c for e, c in normalised})
    if any(e % 2 for e, _ in half):
        raise VerificationError("Jones polynomial of a knot has a half-integer power")
    return half


def jones_t(pd: PlanarDiagram, budget: int = DEFAULT_BRACKET_BUDGET) -> LaurentPolynomial:
    """Jones polynomial with integer exponents of t."""
    return jones(pd, budget).halve_exponents()


def normalize_alexander(poly: LaurentPolynomial) -> LaurentPolynomial:
    """Symmetric representative with positive leading coefficient."""
    if poly.is_zero():
        raise InvalidDiagramError("Alexander polynomial vanished")
    lo, hi = poly.min_degree, poly.max_degree
    if (hi - lo) % 2:
        raise VerificationError("Alexander polynomial has odd degree span")
    centred = poly.shift(-(lo + hi) // 2)
    return -centred if centred.leading_coefficient < 0 else centred


def alexander_matrix(pd: PlanarDiagram) -> List[List[LaurentPolynomial]]:
    """One row per crossing, one column per over-arc generator."""
    count = pd.crossing_count
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for crossing in pd.crossings:
        for label in crossing:
            parent.setdefault(label, label)
    # the over strand b -> d is one generator
    for _, b, _, d in pd.crossings:
        rb, rd = find(b), find(d)
        if rb != rd:
            parent[rb] = rd
    roots = sorted({find(label) for label in parent})
    if len(roots) != count:
        raise InvalidDiagramError(f"{len(roots)} over-arcs for {count} crossings")
    column = {root: i for i, root in enumerate(roots)}

    one_minus_t = LaurentPolynomial({0: 1, 1: -1})
    t = LaurentPolynomial.monomial(1)
    minus_one = LaurentPolynomial.monomial(0, -1)
    rows = []
    for (a, b, c, _), sign in zip(pd.crossings, pd.signs):
        row = [LaurentPolynomial.zero() for _ in range(count)]
        over, incoming, outgoing = column[find(b)], column[find(a)], column[find(c)]
        row[over] = row[over] + one_minus_t
        if sign == 1:
            row[incoming] = row[incoming] + t
            row[outgoing] = row[outgoing] + minus_one
        else:
            row[incoming] = row[incoming] + minus_one
            row[outgoing] = row[outgoing] + t
        rows.append(row)
    return rows


def alexander(pd: PlanarDiagram) -> LaurentPolynomial:
    """Normalised Alexander polynomial; polynomial time in the crossing count."""
    count = pd.crossing_count
    if count <= 1:
        return LaurentPolynomial.one()
    minor = [row[: count - 1] for row in alexander_matrix(pd)[: count - 1]]
    matrix = DomainMatrix.from_list_sympy(
        count - 1, count - 1, [[entry.to_sympy(_T) for entry in row] for row in minor]
    )
    matrix = matrix.convert_to(sympy.ZZ[_T])
    det = matrix.domain.to_sympy(matrix.det())
    return normalize_alexander(LaurentPolynomial.from_sympy(det, _T))


def determinant(pd: PlanarDiagram) -> int:
    return abs(alexander(pd).evaluate(-1))


@dataclass(frozen=True)
class Fingerprint:
    """(determinant, Alexander, Jones) identification key.

    ``jones`` is stored with integer exponents of t^(1/2).
    """

    determinant: int
    alexander: LaurentPolynomial
    jones: LaurentPolynomial

    def mirror(self) -> "Fingerprint":
        return Fingerprint(self.determinant, self.alexander, self.jones.substitute_inverse())

    def is_amphichiral(self) -> bool:
        return self.jones.is_palindromic()

    def is_unknot(self) -> bool:
        return self == UNKNOT_FINGERPRINT

    def connected_sum(self, other: "Fingerprint") -> "Fingerprint":
        """Fingerprint of the connected sum: every component multiplies."""
        return Fingerprint(
            self.determinant * other.determinant,
            normalize_alexander(self.alexander * other.alexander),
            self.jones * other.jones,
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "determinant": self.determinant,
            "alexander": self.alexander.to_json("t"),
            "jones": self.jones.to_json("t^(1/2)"),
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "Fingerprint":
        return cls(
            int(payload["determinant"]),
            LaurentPolynomial.from_json(payload["alexander"]),
            LaurentPolynomial.from_json(payload["jones"]),
        )

    def describe(self) -> Dict[str, str]:
        return {
            "determinant": str(self.determinant),
            "alexander": self.alexander.to_string("t"),
            "jones": self.jones.halve_exponents().to_string("t"),
        }


UNKNOT_FINGERPRINT = Fingerprint(1, LaurentPolynomial.one(), LaurentPolynomial.one())

_default_cache = FingerprintCache()


def fingerprint_cache() -> FingerprintCache:
    container = get_container()
    if container.is_registered(FingerprintCache):
        return container.get(FingerprintCache)
    return _default_cache


def fingerprint(
    pd: PlanarDiagram,
    budget: int = DEFAULT_BRACKET_BUDGET,
    cache: Optional[FingerprintCache] = None,
) -> Fingerprint:
    """Fingerprint of the knot a diagram represents.

    The diagram is shrunk with Reidemeister I/II moves first; the budget
    applies to the reduced crossing count.
    """
    reduced = reduce_r1_r2(pd)
    if reduced.is_trivial():
        return UNKNOT_FINGERPRINT
    if reduced.crossing_count > budget:
        raise BudgetExceededError(reduced.crossing_count, budget)
    cache = cache if cache is not None else fingerprint_cache()

    def compute() -> Fingerprint:
        logger.debug(
            "Computing fingerprint", crossings=pd.crossing_count, reduced=reduced.crossing_count
        )
        return Fingerprint(determinant(reduced), alexander(reduced), jones(reduced, budget))

    return cache.get_or_compute(cache.key_for(reduced), compute)
