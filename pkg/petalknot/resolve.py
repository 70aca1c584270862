"""
From übercrossing diagrams to ordinary planar diagrams.

``resolve`` pulls the strands of the multi-crossing apart: strand k is the
chord from endpoint k to endpoint k+n, pushed sideways by a small offset, so
every pair of strands meets once inside the circle. Over/under comes from
the heights and signs from the orientation, so floating point only orders
intersections along each chord; a schedule that cannot do that reliably is
rejected and the caller retries.

``reverse_petal_diagram`` goes the other way. The top strand is unfolded,
the remaining strands become horizontal lines stacked by height across a
vertical axis A, and the outer arcs become vertical connectors on either side
of A. Over/under is decided by the side of A alone, so no depth is involved.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import DegenerateScheduleError, InvalidDiagramError, InvalidInputError
from .petalknot_logging import get_logger
from .petalperm import PetalPermutation, reduce_mod
from .planar import (
    GaussEvent,
    PlanarDiagram,
    crossing_sign,
    pd_from_gauss,
    polyline_intersections,
)
from .uberdiag import Arc, UbercrossingDiagram, from_petal, unfold_top

logger = get_logger(__name__)

DEFAULT_OFFSET_STEP = 1e-3
DEFAULT_TOLERANCE = 1e-9
DEFAULT_JITTER_SPAN = 0.05
DEFAULT_MAX_RETRIES = 5

# Intersections must stay well inside the unit circle.
INNER_RADIUS = 0.9
# Rotation added to the sideways view so no two line ends line up.
SIDEWAYS_JITTER = 0.0137
# Distance between a connector and the outermost line end it covers, per endpoint.
CONNECTOR_GAP = 0.01


@dataclass(frozen=True)
class PerturbationSchedule:
    offsets: Tuple[float, ...]
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        offsets = tuple(float(o) for o in self.offsets)
        object.__setattr__(self, "offsets", offsets)
        if len(set(offsets)) != len(offsets):
            raise InvalidInputError("perturbation offsets must be pairwise distinct")
        if any(abs(o) >= 0.1 for o in offsets):
            raise InvalidInputError("perturbation offsets must be smaller than 0.1")
        if self.tolerance <= 0:
            raise InvalidInputError("tolerance must be positive")

    @classmethod
    def default(
        cls, n: int, step: float = DEFAULT_OFFSET_STEP, tolerance: float = DEFAULT_TOLERANCE
    ) -> "PerturbationSchedule":
        return cls(tuple(k * step for k in range(1, n + 1)), tolerance)

    @classmethod
    def seeded(
        cls,
        n: int,
        seed: int,
        span: float = DEFAULT_JITTER_SPAN,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> "PerturbationSchedule":
        rng = np.random.default_rng(seed)
        return cls(tuple(rng.uniform(-span, span, size=n).tolist()), tolerance)


def _chord_frames(n: int) -> Tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(n) / (2 * n)
    direction = np.column_stack([np.sin(theta), np.cos(theta)])
    normal = np.column_stack([np.cos(theta), -np.sin(theta)])
    return direction, normal


def resolve(diagram: UbercrossingDiagram, schedule: PerturbationSchedule) -> PlanarDiagram:
    """Planar diagram with C(n, 2) crossings; the smaller height is over."""
    n = diagram.n
    if len(schedule.offsets) != n:
        raise InvalidInputError(f"schedule has {len(schedule.offsets)} offsets for {n} strands")
    if n == 1:
        return PlanarDiagram()

    direction, normal = _chord_frames(n)
    offsets = np.asarray(schedule.offsets)
    i_idx, j_idx = np.triu_indices(n, k=1)

    # t * d_i + o_i * nu_i = s * d_j + o_j * nu_j
    rhs = offsets[j_idx, None] * normal[j_idx] - offsets[i_idx, None] * normal[i_idx]
    di, dj = direction[i_idx], direction[j_idx]
    den = -di[:, 0] * dj[:, 1] + di[:, 1] * dj[:, 0]
    t = (-rhs[:, 0] * dj[:, 1] + rhs[:, 1] * dj[:, 0]) / den
    s = (di[:, 0] * rhs[:, 1] - di[:, 1] * rhs[:, 0]) / den

    hits: List[List[Tuple[float, int, int]]] = [[] for _ in range(n)]
    for cid, (i, j) in enumerate(zip(i_idx.tolist(), j_idx.tolist())):
        hits[i].append((float(t[cid]), cid, j))
        hits[j].append((float(s[cid]), cid, i))

    for k, strand_hits in enumerate(hits):
        params = sorted(h[0] for h in strand_hits)
        if any(abs(v) >= INNER_RADIUS for v in params):
            raise DegenerateScheduleError(f"strand {k + 1} meets another strand outside the star")
        if any(b - a <= schedule.tolerance for a, b in zip(params, params[1:])):
            raise DegenerateScheduleError(f"intersections on strand {k + 1} are too close to order")

    travel = diagram.traversal()
    # entering at endpoint k runs from t = +1 to t = -1
    heading = {strand - 1: (-1.0 if entry == strand else 1.0) for strand, entry, _ in travel}

    events: List[GaussEvent] = []
    for strand, entry, _ in travel:
        k = strand - 1
        forward = entry == strand
        for _, cid, other in sorted(hits[k], key=lambda h: -h[0] if forward else h[0]):
            k_over = diagram.heights[k] < diagram.heights[other]
            mine, theirs = direction[k] * heading[k], direction[other] * heading[other]
            sign = crossing_sign(mine, theirs) if k_over else crossing_sign(theirs, mine)
            events.append(GaussEvent(cid, k_over, sign))
    return pd_from_gauss(events)


def resolve_with_retry(
    diagram: UbercrossingDiagram,
    schedule: Optional[PerturbationSchedule] = None,
    max_retries: int = DEFAULT_MAX_RETRIES,
    seed: int = 0,
    jitter_span: float = DEFAULT_JITTER_SPAN,
) -> PlanarDiagram:
    """``resolve`` with the given (or default) schedule, then seeded schedules on degeneracy."""
    schedule = schedule or PerturbationSchedule.default(diagram.n)
    try:
        return resolve(diagram, schedule)
    except DegenerateScheduleError as first_error:
        last_error = first_error
    for attempt in range(1, max_retries + 1):
        logger.debug("Retrying degenerate schedule", attempt=attempt, reason=str(last_error))
        try:
            seeded = PerturbationSchedule.seeded(
                diagram.n, seed + attempt, jitter_span, schedule.tolerance
            )
            return resolve(diagram, seeded)
        except DegenerateScheduleError as e:
            last_error = e
    raise DegenerateScheduleError(f"no usable schedule after {max_retries} retries: {last_error}")


# -- sideways construction ----------------------------------------------------


@dataclass(frozen=True)
class SidewaysLayout:
    """A pre-petal diagram seen from the side.

    Strand k is the horizontal line y = -height(k) and the axis A is x = 0.
    Outer arcs are vertical connectors just outside the line ends they cover,
    the nesting loop rightmost. ``start`` is the row where the nesting
    connector begins. ``forward`` is false when the knot enters the nesting
    loop from the far end of its inside, so it is walked backwards from there.
    """

    points: np.ndarray
    start: int
    forward: bool = True


def sideways_layout(
    diagram: UbercrossingDiagram, jitter: float = SIDEWAYS_JITTER
) -> SidewaysLayout:
    nestings = diagram.nesting_arcs()
    if len(nestings) > 1:
        raise InvalidDiagramError("the sideways view needs at most one nesting loop")
    # the unknotted three-petal case unfolds to two petals and no nesting loop
    nesting = nestings[0] if nestings else diagram.matching[0]
    inside = diagram.span(*nesting)
    a, b = nesting
    if inside:
        first = inside[0] - 1
    else:
        first = a if reduce_mod(a + 1, 2 * diagram.n) == b else b
    near_end = reduce_mod(first, 2 * diagram.n)
    # the middle of the nesting loop faces right
    middle = first + (len(inside) + 1) / 2

    def x_of(endpoint: int) -> float:
        return math.cos(math.pi * (endpoint - middle) / diagram.n + jitter)

    arc_of: Dict[int, Arc] = {}
    connector: Dict[Arc, float] = {}
    for arc in diagram.matching:
        a, b = arc
        covered = [a, b, *diagram.span(a, b)]
        if x_of(a) * x_of(b) <= 0:
            raise DegenerateScheduleError(f"outer arc {arc} straddles the axis")
        reach = max(abs(x_of(j)) for j in covered)
        connector[arc] = math.copysign(reach + CONNECTOR_GAP * (len(covered) - 1), x_of(a))
        arc_of[a] = arc_of[b] = arc

    rows: List[Tuple[float, float]] = []
    start = 0
    forward = True
    for strand, entry, exit_point in diagram.traversal():
        y = -diagram.height_of(strand)
        rows += [(x_of(entry), y), (x_of(exit_point), y)]
        arc = arc_of[exit_point]
        if arc == nesting:
            start = len(rows)
            forward = exit_point == near_end
        target = diagram.strand_of(diagram.partner[exit_point])
        rows += [(connector[arc], y), (connector[arc], -diagram.height_of(target))]
    return SidewaysLayout(np.array(rows), start, forward)


def reverse_petal_diagram(
    sigma: PetalPermutation, jitter: float = SIDEWAYS_JITTER
) -> PlanarDiagram:
    """Double-crossing diagram of ``sigma`` read off its sideways pre-petal projection.

    Walking from the nesting connector in the direction that enters the
    nesting loop next to its inside, a crossing right of A is over at its
    first visit and one left of A is under.
    """
    layout = sideways_layout(unfold_top(from_petal(sigma)), jitter)
    points = layout.points
    size = len(points)
    direction = np.roll(points, -1, axis=0) - points

    step = 1 if layout.forward else -1
    passages: List[Tuple[float, int, int, float]] = []
    for cid, (i, t, j, u) in enumerate(polyline_intersections(points)):
        x = float(points[i, 0] + t * direction[i, 0])
        if abs(x) < DEFAULT_TOLERANCE:
            raise DegenerateScheduleError(f"crossing {cid} lies on the axis")
        passages.append((step * (i + t - layout.start) % size, cid, i, x))
        passages.append((step * (j + u - layout.start) % size, cid, j, x))
    passages.sort()

    visits: Dict[int, List[int]] = {}
    for _, cid, segment, _ in passages:
        visits.setdefault(cid, []).append(segment)

    events: List[GaussEvent] = []
    for _, cid, segment, x in passages:
        first_segment, second_segment = visits[cid]
        first = segment == first_segment
        over = (x > 0) == first
        other = second_segment if first else first_segment
        mine, theirs = direction[segment], direction[other]
        sign = crossing_sign(mine, theirs) if over else crossing_sign(theirs, mine)
        events.append(GaussEvent(cid, over, sign))
    pd = pd_from_gauss(events)
    logger.debug("Sideways diagram", permutation=str(sigma), crossings=pd.crossing_count)
    return pd
