"""
Übercrossing diagrams.

A diagram with n strands through a single multi-crossing is stored as the
strand heights plus the outer matching of the 2n endpoints placed clockwise on
a circle. Strand k owns the antipodal endpoints k and k+n; outer arcs never
cross anything, so (heights, matching) determines the knot.

Surgery on diagrams (unfolding the top strand, adding or removing trivial
loops, composition) is done on a cyclic list of endpoint objects and then
renumbered, which keeps every construction short and makes the antipodality
check a by-product of the renumbering.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .errors import HandednessConflictError, InvalidDiagramError, InvalidInputError
from .petalknot_logging import get_logger
from .petalperm import PetalPermutation, rank_compress, reduce_mod

logger = get_logger(__name__)

Arc = Tuple[int, int]


class Handedness(Enum):
    LEFT = "L"
    RIGHT = "R"

    def opposite(self) -> "Handedness":
        return Handedness.RIGHT if self is Handedness.LEFT else Handedness.LEFT


@dataclass(frozen=True)
class UbercrossingDiagram:
    n: int
    heights: Tuple[int, ...]
    matching: Tuple[Arc, ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in self.matching))
        object.__setattr__(self, "heights", tuple(int(h) for h in self.heights))
        object.__setattr__(self, "matching", pairs)
        self._validate()

    def _validate(self) -> None:
        n, size = self.n, 2 * self.n
        if n < 1:
            raise InvalidDiagramError("a diagram needs at least one strand")
        if len(self.heights) != n or sorted(self.heights) != list(range(1, n + 1)):
            raise InvalidDiagramError(f"heights {self.heights} are not a permutation of 1..{n}")
        labels = [label for pair in self.matching for label in pair]
        if sorted(labels) != list(range(1, size + 1)):
            raise InvalidDiagramError(f"matching is not a perfect matching of 1..{size}")
        if any(a == b for a, b in self.matching):
            raise InvalidDiagramError("matching joins an endpoint to itself")
        if n > 1:
            for a, b in self.matching:
                if b == self.antipode(a):
                    raise InvalidDiagramError(f"arc ({a},{b}) joins the two ends of one strand")
        for a, b in self.matching:
            for c, d in self.matching:
                if a < c and (a < c < b) != (a < d < b):
                    raise InvalidDiagramError(f"arcs ({a},{b}) and ({c},{d}) interleave")
        if len(self.traversal()) != n:
            raise InvalidDiagramError("diagram has more than one component")

    @cached_property
    def partner(self) -> Dict[int, int]:
        match: Dict[int, int] = {}
        for a, b in self.matching:
            match[a] = b
            match[b] = a
        return match

    @property
    def endpoint_count(self) -> int:
        return 2 * self.n

    def strand_of(self, endpoint: int) -> int:
        return reduce_mod(endpoint, self.n)

    def antipode(self, endpoint: int) -> int:
        return reduce_mod(endpoint + self.n, 2 * self.n)

    def height_of(self, strand: int) -> int:
        return self.heights[strand - 1]

    def strand_at_height(self, height: int) -> int:
        return self.heights.index(height) + 1

    def traversal(self) -> List[Tuple[int, int, int]]:
        """(strand, entry endpoint, exit endpoint) along the knot from endpoint 1."""
        result = []
        seen = set()
        endpoint = 1
        while True:
            strand = self.strand_of(endpoint)
            if strand in seen:
                raise InvalidDiagramError(f"traversal meets strand {strand} twice")
            seen.add(strand)
            exit_point = self.antipode(endpoint)
            result.append((strand, endpoint, exit_point))
            endpoint = self.partner[exit_point]
            if endpoint == 1 or len(result) > self.n:
                break
        return result

    def span(self, a: int, b: int) -> List[int]:
        """Endpoints on the shorter side of arc (a, b); on a tie, those strictly between them."""
        size = 2 * self.n
        x, y = min(a, b), max(a, b)
        inner = list(range(x + 1, y))
        outer = list(range(y + 1, size + 1)) + list(range(1, x))
        return outer if len(outer) < len(inner) else inner

    def nesting_arcs(self) -> List[Arc]:
        return [arc for arc in self.matching if self.span(*arc)]

    def is_petal(self) -> bool:
        return not self.nesting_arcs()

    def is_pre_petal(self) -> bool:
        return len(self.nesting_arcs()) == 1

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "heights": list(self.heights),
            "matching": [list(p) for p in self.matching],
        }

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "UbercrossingDiagram":
        try:
            matching = tuple(tuple(p) for p in payload["matching"])
            return cls(int(payload["n"]), tuple(payload["heights"]), matching)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidDiagramError):
                raise
            raise InvalidInputError(f"diagram JSON needs 'n', 'heights' and 'matching': {e}")


@dataclass(frozen=True)
class Ribbon:
    arc: Arc
    strands: Tuple[int, int]
    over_strand: int
    handedness: Handedness
    bottom: bool = False


# -- endpoint lists -----------------------------------------------------------


@dataclass(eq=False)
class _End:
    strand: Hashable
    label: Optional[int] = None


def _ends(diagram: UbercrossingDiagram, tag: str = "") -> Tuple[List[_End], Dict[Hashable, int]]:
    ends = [_End((tag, diagram.strand_of(j)), j) for j in range(1, 2 * diagram.n + 1)]
    heights = {(tag, k): diagram.heights[k - 1] for k in range(1, diagram.n + 1)}
    return ends, heights


def _arcs(
    diagram: UbercrossingDiagram, ends: Sequence[_End], skip: Sequence[Arc] = ()
) -> List[Tuple[_End, _End]]:
    skipped = {tuple(sorted(arc)) for arc in skip}
    return [(ends[a - 1], ends[b - 1]) for a, b in diagram.matching if (a, b) not in skipped]


def _rebuild(
    ends: Sequence[_End],
    arcs: Sequence[Tuple[_End, _End]],
    heights: Mapping[Hashable, int],
    start: int = 0,
) -> UbercrossingDiagram:
    """Renumber a cyclic endpoint list starting at ``start``."""
    ordered = list(ends[start:]) + list(ends[:start])
    n = len(ordered) // 2
    for j in range(n):
        if ordered[j].strand != ordered[j + n].strand:
            raise InvalidDiagramError(f"endpoint {j + 1} is not antipodal to its strand partner")
    position = {id(end): i + 1 for i, end in enumerate(ordered)}
    pairs = tuple((position[id(x)], position[id(y)]) for x, y in arcs)
    raw = [heights[ordered[k].strand] for k in range(n)]
    return UbercrossingDiagram(n, rank_compress(raw), pairs)


def _smallest_label_index(ends: Sequence[_End]) -> int:
    return min(
        (i for i, end in enumerate(ends) if end.label is not None), key=lambda i: ends[i].label
    )


# -- operations ---------------------------------------------------------------


def from_petal(sigma: PetalPermutation) -> UbercrossingDiagram:
    p = sigma.p
    pairs = tuple(
        (reduce_mod(p + 2 * t + 1, 2 * p), reduce_mod(p + 2 * t + 2, 2 * p)) for t in range(p)
    )
    return UbercrossingDiagram(p, sigma.entries, pairs)


def unfold_top(diagram: UbercrossingDiagram) -> UbercrossingDiagram:
    """Take the top strand off a petal diagram, leaving a pre-petal diagram."""
    if not diagram.is_petal():
        raise InvalidDiagramError("unfold_top needs a petal diagram")
    if diagram.n < 3:
        raise InvalidDiagramError("unfold_top needs at least 3 strands")
    top = diagram.strand_at_height(1)
    ends, heights = _ends(diagram)
    first, second = top, diagram.antipode(top)
    moved = (first, second)
    arcs = [
        (x, y) for x, y in _arcs(diagram, ends) if x.label not in moved and y.label not in moved
    ]
    arcs.append((ends[diagram.partner[first] - 1], ends[diagram.partner[second] - 1]))
    del heights[ends[first - 1].strand]
    rest = [end for end in ends if end.label not in moved]
    return _rebuild(rest, arcs, heights, _smallest_label_index(rest))


def fold_top(diagram: UbercrossingDiagram) -> UbercrossingDiagram:
    """Fold the nesting arc of a pre-petal diagram back into a new top strand.

    Right inverse of ``unfold_top`` up to knot type.
    """
    nesting = diagram.nesting_arcs()
    if len(nesting) != 1:
        raise InvalidDiagramError("fold_top needs exactly one nesting arc")
    inside = diagram.span(*nesting[0])
    if len(inside) != diagram.n - 2:
        raise InvalidDiagramError(
            f"nesting arc covers {len(inside)} endpoints, expected {diagram.n - 2}"
        )
    size = 2 * diagram.n
    x, y = reduce_mod(inside[0] - 1, size), reduce_mod(inside[-1] + 1, size)
    ends, heights = _ends(diagram)
    new_strand = object()
    t1, t2 = _End(new_strand), _End(new_strand)
    ordered: List[_End] = []
    for end in ends:
        if end.label == x:
            ordered.append(t1)
        ordered.append(end)
        if end.label == y:
            ordered.append(t2)
    arcs = _arcs(diagram, ends, skip=[(x, y)])
    arcs += [(t1, ends[x - 1]), (ends[y - 1], t2)]
    shifted: Dict[Hashable, int] = {key: h + 1 for key, h in heights.items()}
    shifted[new_strand] = 1
    return _rebuild(ordered, arcs, shifted, _smallest_label_index(ordered))


def mirror(diagram: UbercrossingDiagram) -> UbercrossingDiagram:
    """Reverse the clockwise order of the endpoints; heights stay with their strands."""
    n, size = diagram.n, 2 * diagram.n
    heights = tuple(diagram.heights[n - k] for k in range(1, n + 1))
    pairs = tuple((size + 1 - a, size + 1 - b) for a, b in diagram.matching)
    return UbercrossingDiagram(n, heights, pairs)


def ribbons(diagram: UbercrossingDiagram) -> List[Ribbon]:
    """One ribbon per arc joining clockwise-adjacent endpoints of different strands.

    RIGHT when the over strand owns the clockwise-earlier endpoint.
    """
    size = 2 * diagram.n
    spans = [set(diagram.span(*arc)) for arc in diagram.nesting_arcs()]
    result = []
    for u in range(1, size + 1):
        v = reduce_mod(u + 1, size)
        if diagram.partner[u] != v:
            continue
        su, sv = diagram.strand_of(u), diagram.strand_of(v)
        if su == sv:
            continue
        over = su if diagram.height_of(su) < diagram.height_of(sv) else sv
        bottom = diagram.n in (diagram.height_of(su), diagram.height_of(sv)) and any(
            u in inside and v in inside for inside in spans
        )
        result.append(
            Ribbon(
                arc=(u, v),
                strands=(su, sv),
                over_strand=over,
                handedness=Handedness.RIGHT if over == su else Handedness.LEFT,
                bottom=bottom,
            )
        )
    return result


def bottom_ribbon(diagram: UbercrossingDiagram) -> Ribbon:
    found = [r for r in ribbons(diagram) if r.bottom]
    if len(found) != 1:
        raise InvalidDiagramError(f"expected one bottom ribbon, found {len(found)}")
    return found[0]


def add_trivial_petal(
    diagram: UbercrossingDiagram, target_arc: Arc, height_slot: int, handedness: Handedness
) -> UbercrossingDiagram:
    """Insert two strands forming a trivial loop on ``target_arc`` at consecutive heights.

    ``target_arc`` is read as (a, b): the new loop sits right after endpoint a.
    """
    a, b = target_arc
    if diagram.partner.get(a) != b:
        raise InvalidInputError(f"({a},{b}) is not an arc of the diagram")
    if not 1 <= height_slot <= diagram.n + 1:
        raise InvalidInputError(f"height slot {height_slot} is outside 1..{diagram.n + 1}")
    ends, heights = _ends(diagram)
    first_new, second_new = object(), object()
    e1, e2, f1, f2 = _End(first_new), _End(second_new), _End(first_new), _End(second_new)
    far = diagram.antipode(a)
    ordered: List[_End] = []
    for end in ends:
        ordered.append(end)
        if end.label == a:
            ordered += [e1, e2]
        if end.label == far:
            ordered += [f1, f2]
    arcs = _arcs(diagram, ends, skip=[(a, b)])
    arcs += [(ends[a - 1], e1), (e2, ends[b - 1]), (f1, f2)]
    shifted: Dict[Hashable, int] = {
        key: h + 2 if h >= height_slot else h for key, h in heights.items()
    }
    if handedness is Handedness.RIGHT:
        upper, lower = first_new, second_new
    else:
        upper, lower = second_new, first_new
    shifted[upper] = height_slot
    shifted[lower] = height_slot + 1
    return _rebuild(ordered, arcs, shifted)


def remove_trivial_loop(diagram: UbercrossingDiagram, arc: Arc) -> UbercrossingDiagram:
    """Pull a loop between strands of consecutive heights out through the multi-crossing."""
    size = 2 * diagram.n
    x, y = arc
    if diagram.partner.get(x) != y:
        raise InvalidInputError(f"({x},{y}) is not an arc of the diagram")
    if reduce_mod(x + 1, size) != y:
        if reduce_mod(y + 1, size) != x:
            raise InvalidInputError(f"arc ({x},{y}) does not join adjacent endpoints")
        x, y = y, x
    sx, sy = diagram.strand_of(x), diagram.strand_of(y)
    if abs(diagram.height_of(sx) - diagram.height_of(sy)) != 1:
        raise InvalidInputError(f"strands {sx} and {sy} do not have consecutive heights")
    ax, ay = diagram.antipode(x), diagram.antipode(y)
    far_x, far_y = diagram.partner[ax], diagram.partner[ay]
    if far_x == ay:
        raise InvalidDiagramError("removing the loop would leave a closed component")
    ends, heights = _ends(diagram)
    gone = {x, y, ax, ay}
    arcs = [(p, q) for p, q in _arcs(diagram, ends) if p.label not in gone and q.label not in gone]
    arcs.append((ends[far_x - 1], ends[far_y - 1]))
    del heights[ends[x - 1].strand], heights[ends[y - 1].strand]
    rest = [end for end in ends if end.label not in gone]
    return _rebuild(rest, arcs, heights, _smallest_label_index(rest))


def compose(
    d1: UbercrossingDiagram, ribbon1: Ribbon, d2: UbercrossingDiagram
) -> UbercrossingDiagram:
    """Connected sum through a ribbon of ``d1`` and the bottom ribbon of pre-petal ``d2``.

    The endpoints of ``d2`` are inserted around ``ribbon1`` so that the bottom
    ribbon of ``d2`` nests it, the heights of ``d2`` go directly above the
    ribbon's over strand, and then the over strand and the bottom strand are
    spliced out. The result has n1 + n2 - 2 strands.
    """
    if ribbon1 not in ribbons(d1):
        raise InvalidInputError(f"ribbon on arc {ribbon1.arc} does not belong to the first diagram")
    if not d2.is_pre_petal():
        raise InvalidDiagramError("the second diagram must be pre-petal")
    low = bottom_ribbon(d2)
    if low.handedness is ribbon1.handedness:
        raise HandednessConflictError(
            f"both ribbons are {ribbon1.handedness.name.lower()}-handed; add a trivial petal first"
        )

    n1, n2 = d1.n, d2.n
    size1, size2 = 2 * n1, 2 * n2
    inside = d2.span(*d2.nesting_arcs()[0])
    x = reduce_mod(inside[0] - 1, size2)
    ends1, heights1 = _ends(d1, "a")
    ends2, heights2 = _ends(d2, "b")
    u, u_next = ribbon1.arc
    w, w_next = low.arc

    near = [ends2[reduce_mod(x + k, size2) - 1] for k in range(n2)]
    across = [ends2[reduce_mod(x + n2 + k, size2) - 1] for k in range(n2)]
    split = next(i for i, end in enumerate(near) if end.label == w)
    if split + 1 >= n2 or near[split + 1].label != w_next:
        raise InvalidDiagramError("bottom ribbon is not oriented inside the nesting arc")

    ordered: List[_End] = []
    for end in ends1:
        if end.label == u:
            ordered += near[: split + 1] + [end]
        elif end.label == u_next:
            ordered += [end] + near[split + 1 :]
        elif end.label == reduce_mod(u + n1, size1):
            ordered += across[: split + 1] + [end]
        elif end.label == reduce_mod(u_next + n1, size1):
            ordered += [end] + across[split + 1 :]
        else:
            ordered.append(end)

    over_height = d1.height_of(ribbon1.over_strand)
    heights: Dict[Hashable, int] = {
        key: h if h < over_height else h + n2 for key, h in heights1.items()
    }
    heights.update({key: over_height - 1 + h for key, h in heights2.items()})

    arcs = _arcs(d1, ends1) + _arcs(d2, ends2)
    bottom_strand = d2.strand_at_height(n2)
    o1 = u if d1.strand_of(u) == ribbon1.over_strand else u_next
    b1 = w if d2.strand_of(w) == bottom_strand else w_next
    spliced = [ends1[o1 - 1], ends1[d1.antipode(o1) - 1], ends2[b1 - 1], ends2[d2.antipode(b1) - 1]]
    gone = {id(end) for end in spliced}
    partner: Dict[int, _End] = {}
    for p, q in arcs:
        partner[id(p)] = q
        partner[id(q)] = p
    o_first, o_second, b_first, b_second = (partner[id(end)] for end in spliced)
    arcs = [(p, q) for p, q in arcs if id(p) not in gone and id(q) not in gone]
    arcs += [(o_first, b_first), (o_second, b_second)]
    del heights[spliced[0].strand], heights[spliced[2].strand]

    rest = [end for end in ordered if id(end) not in gone]
    start = next(i for i, end in enumerate(rest) if end.strand[0] == "a")
    result = _rebuild(rest, arcs, heights, start)
    logger.debug("Composed diagrams", n1=n1, n2=n2, n=result.n)
    return result


def compose_simple(d1: UbercrossingDiagram, d2: UbercrossingDiagram) -> UbercrossingDiagram:
    """Compose, first adding a trivial petal to ``d1`` when it has no usable ribbon."""
    wanted = bottom_ribbon(d2).handedness.opposite()
    usable = [r for r in ribbons(d1) if r.handedness is wanted]
    if not usable:
        logger.debug("No opposite-handed ribbon; adding a trivial petal", handedness=wanted.name)
        d1 = add_trivial_petal(d1, d1.matching[0], 1, wanted)
        usable = [r for r in ribbons(d1) if r.handedness is wanted]
    return compose(d1, usable[0], d2)


def composition_strand_bound(n1: int, p2: int) -> int:
    """Strand count of ``compose_simple`` when the fallback petal is needed."""
    return n1 + p2 - 1
