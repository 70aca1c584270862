"""
Crossing reduction.

The star pipeline turns a petal diagram into a planar diagram with exactly
(p^2 - 2p - 3)/4 crossings. The p chords of the petal diagram are drawn as a
star between the petal tips; pulling the chord ends back inside the tips
removes one monogon per petal, and then the (p-3)/2 highest strands are
rerouted one at a time around the outside of the star.

``StarContext`` records which strands every strand meets, in order, at each
stage. Every move checks the diagram it is given against that record and
the diagram it returns against the updated one.

``reduce_r1_r2`` is the generic Reidemeister I/II shrinker used before every
exponential invariant computation.
"""

import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidDiagramError, InvalidInputError, VerificationError
from .petalknot_logging import get_logger
from .petalperm import PetalPermutation, reduce_mod
from .planar import PlanarDiagram, canonical_pd, gauss_code, polygon_pd
from .resolve import PerturbationSchedule, resolve_with_retry
from .uberdiag import UbercrossingDiagram, from_petal

logger = get_logger(__name__)

TIP_INSET = 0.02
LANE_RADIUS = 1.3
LANE_SPACING = 0.15
LANE_SAMPLES = 48
# Per removal iteration: how far a lane starts past its tip, and how far out its foot sits.
LANE_MARGIN = 0.01
FOOT_STEP = 0.003
# Two rerouted strands sharing a tip clasp between these radii.
CLASP_NEAR = 1.08
CLASP_FAR = 1.16
CLASP_REACH = 0.01

# (strand, other strand, strand is over)
Passage = Tuple[int, int, bool]


def crossing_bound(p: int) -> int:
    """Crossings left by the star pipeline on a p-petal diagram."""
    if p < 3 or p % 2 == 0:
        raise InvalidInputError(f"petal count must be odd and at least 3, got {p}")
    return (p * p - 2 * p - 3) // 4


def _point(theta: float) -> np.ndarray:
    return np.array([math.sin(theta), math.cos(theta)])


def _along(a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray) -> float:
    """Parameter along a->b where it meets the line c->d."""
    r, q, w = b - a, d - c, c - a
    return float((w[0] * q[1] - w[1] * q[0]) / (r[0] * q[1] - r[1] * q[0]))


@dataclass(frozen=True)
class StarContext:
    """The star drawing of a petal diagram at one stage of the pipeline.

    ``removed`` lists rerouted strands in removal order; ``monogons`` is true
    while the chord ends still poke out through the petal tips. Tips are
    numbered 0..p-1 clockwise and every tip joins two consecutive strands.
    """

    diagram: UbercrossingDiagram
    removed: Tuple[int, ...] = ()
    monogons: bool = True

    def __post_init__(self):
        if not self.diagram.is_petal():
            raise InvalidDiagramError("the star drawing needs a petal diagram")
        if len(set(self.removed)) != len(self.removed) or not all(
            1 <= s <= self.p for s in self.removed
        ):
            raise InvalidDiagramError(f"removed strands {self.removed} are not distinct strands")
        if self.monogons and self.removed:
            raise InvalidDiagramError("strands are rerouted only once the monogons are gone")

    @property
    def p(self) -> int:
        return self.diagram.n

    @property
    def height_order(self) -> Tuple[int, ...]:
        """Strands from top to bottom."""
        return tuple(self.diagram.strand_at_height(h) for h in range(1, self.p + 1))

    @property
    def removal_order(self) -> Tuple[int, ...]:
        return self.height_order[: (self.p - 3) // 2]

    @property
    def monogon_tips(self) -> Tuple[int, ...]:
        return tuple(range(self.p)) if self.monogons else ()

    def tips(self) -> Tuple[List[float], Dict[int, int]]:
        """Tip angles sorted by arc start, and the tip index of every endpoint."""
        size = 2 * self.p
        arcs = sorted(
            (a, b) if reduce_mod(a + 1, size) == b else (b, a) for a, b in self.diagram.matching
        )
        angles = []
        tip_of: Dict[int, int] = {}
        for index, (a, b) in enumerate(arcs):
            angles.append(2 * math.pi * (a - 1) / size + math.pi / size)
            tip_of[a] = tip_of[b] = index
        return angles, tip_of

    @cached_property
    def chords(self) -> Dict[int, Tuple[int, int]]:
        """Start and end tip of every strand, in knot order."""
        _, tip_of = self.tips()
        return {s: (tip_of[entry], tip_of[exit_point]) for s, entry, exit_point in self._travel}

    @cached_property
    def _travel(self) -> List[Tuple[int, int, int]]:
        return self.diagram.traversal()

    def iteration(self, strand: int) -> int:
        """Removal iteration that rerouted ``strand``; 0 while it is in the star."""
        return self.removed.index(strand) + 1 if strand in self.removed else 0

    def direction(self, strand: int) -> int:
        """+1 if the short way from the start tip to the end tip counts tips upwards."""
        start, end = self.chords[strand]
        return 1 if (end - start) % self.p <= (start - end) % self.p else -1

    def interior(self, strand: int) -> List[int]:
        """Tips strictly inside the short side of ``strand``, from its start."""
        start, end = self.chords[strand]
        step = self.direction(strand)
        inside = []
        tip = (start + step) % self.p
        while tip != end:
            inside.append(tip)
            tip = (tip + step) % self.p
        return inside

    def neighbour(self, tip: int, strand: int) -> int:
        """The other strand at ``tip``."""
        return next(s for s, ends in self.chords.items() if tip in ends and s != strand)

    def side(self, strand: int, tip: int) -> int:
        """Which way from ``tip`` the short side of ``strand`` lies."""
        start, _ = self.chords[strand]
        return self.direction(strand) if tip == start else -self.direction(strand)

    def shares_tip(self, strand: int, other: int) -> bool:
        return bool(set(self.chords[strand]) & set(self.chords[other]))

    def is_over(self, strand: int, other: int) -> bool:
        """In the star the smaller height is over; rerouted strands stack by removal order."""
        mine, theirs = self.iteration(strand), self.iteration(other)
        if mine and theirs:
            return mine > theirs
        return self.diagram.height_of(strand) < self.diagram.height_of(other)

    @cached_property
    def crossings(self) -> Dict[int, Tuple[int, ...]]:
        """Strands met by every strand, in order along it.

        An in-star strand meets the chords whose tips interleave with its own,
        and its two tip neighbours at the very ends while monogons remain. A
        rerouted strand meets the lanes of earlier rerouted strands above its
        tips and the feet of later ones below its lane; two rerouted strands
        sharing a tip clasp there, crossing twice.
        """
        return {
            s: self._outer(s) if self.iteration(s) else self._inner(s) for s, _, _ in self._travel
        }

    def _inner(self, strand: int) -> Tuple[int, ...]:
        angles, _ = self.tips()
        start, end = self.chords[strand]
        inside = set(self.interior(strand))
        hits = []
        for other, (c, d) in self.chords.items():
            if other == strand or self.iteration(other) or {c, d} & {start, end}:
                continue
            if (c in inside) == (d in inside):
                continue
            at = _along(
                _point(angles[start]), _point(angles[end]), _point(angles[c]), _point(angles[d])
            )
            hits.append((at, other))
        met = [other for _, other in sorted(hits)]
        if self.monogons:
            met = [self.neighbour(start, strand), *met, self.neighbour(end, strand)]
        return tuple(met)

    def _clasp(self, tip: int, strand: int) -> List[int]:
        other = self.neighbour(tip, strand)
        return [other, other] if self.iteration(other) else []

    def _outer(self, strand: int) -> Tuple[int, ...]:
        start, end = self.chords[strand]
        step = self.direction(strand)
        earlier = self.removed[: self.iteration(strand) - 1]
        later = set(self.removed[self.iteration(strand) :])
        met = self._clasp(start, strand)
        met += [q for q in earlier if start in self.interior(q)]
        for tip in self.interior(strand):
            feet = [q for q in later if tip in self.chords[q]]
            # the foot on the near side of the tip comes first
            met += sorted(feet, key=lambda q: self.side(q, tip) != -step)
        met += [q for q in reversed(earlier) if end in self.interior(q)]
        met += self._clasp(end, strand)
        return tuple(met)

    def passages(self) -> List[Passage]:
        """Every crossing passage along the knot, from endpoint 1."""
        return [
            (s, other, self.is_over(s, other))
            for s, _, _ in self._travel
            for other in self.crossings[s]
        ]

    def expected_crossings(self) -> int:
        """Crossing count the construction guarantees at this stage."""
        p = self.p
        count = p * (p - 1) // 2
        if not self.monogons:
            count -= p
        for i in range(1, len(self.removed) + 1):
            count -= p - 2 * i - 1
        return count


def star_polygon(ctx: StarContext) -> np.ndarray:
    angles, _ = ctx.tips()
    inset = -TIP_INSET if ctx.monogons else TIP_INSET

    rows: List[List[float]] = []
    for strand, _, _ in ctx.diagram.traversal():
        start, end = ctx.chords[strand]
        it = ctx.iteration(strand)
        if not it:
            depth = ctx.diagram.height_of(strand)
            unit = _point(angles[end]) - _point(angles[start])
            unit /= np.linalg.norm(unit)
            a = _point(angles[start]) + inset * unit
            b = _point(angles[end]) - inset * unit
            rows += [[a[0], a[1], depth], [b[0], b[1], depth]]
            continue

        # rerouted strands pass over everything, later ones over earlier ones
        depth = -it
        step = ctx.direction(strand)
        theta0 = angles[start]
        sweep = ((angles[end] - theta0) * step) % (2 * math.pi)
        theta1 = theta0 + step * sweep
        lane = LANE_RADIUS + LANE_SPACING * it
        margin = LANE_MARGIN * it
        foot = 1 + FOOT_STEP * it
        lane_angles = np.linspace(theta0 + step * margin, theta1 - step * margin, LANE_SAMPLES + 1)
        rows.append(_at(foot, theta0, depth))
        rows += _clasp_rows(ctx, strand, start, theta0, depth, leaving=True)
        rows += [_at(lane, t, depth) for t in lane_angles]
        rows += _clasp_rows(ctx, strand, end, theta1, depth, leaving=False)
        rows.append(_at(foot, theta1, depth))
    return np.array(rows)


def _at(radius: float, theta: float, depth: float) -> List[float]:
    return [radius * math.sin(theta), radius * math.cos(theta), depth]


def _clasp_rows(
    ctx: StarContext, strand: int, tip: int, theta: float, depth: float, leaving: bool
) -> List[List[float]]:
    """A finger over the foot of an earlier rerouted strand at the same tip."""
    other = ctx.neighbour(tip, strand)
    if not 0 < ctx.iteration(other) < ctx.iteration(strand):
        return []
    away = theta + ctx.side(other, tip) * (LANE_MARGIN * ctx.iteration(other) + CLASP_REACH)
    back = theta + ctx.side(strand, tip) * CLASP_REACH
    corners = [(CLASP_NEAR, theta), (CLASP_NEAR, away), (CLASP_FAR, away), (CLASP_FAR, back)]
    if not leaving:
        corners.reverse()
    return [_at(radius, angle, depth) for radius, angle in corners]


def star_diagram(ctx: StarContext) -> PlanarDiagram:
    return polygon_pd(star_polygon(ctx))


def follows_star(pd: PlanarDiagram, ctx: StarContext) -> bool:
    """True if walking ``pd`` from some arc meets the strands exactly as ``ctx`` records."""
    expected = ctx.passages()
    events = gauss_code(pd)
    if len(events) != len(expected):
        return False
    if not events:
        return True
    for shift in range(len(events)):
        pairs: Dict[int, Tuple[int, int]] = {}
        closed = set()
        for (strand, other, over), ev in zip(expected, events[shift:] + events[:shift]):
            if ev.over != over:
                break
            if ev.crossing not in pairs:
                pairs[ev.crossing] = (strand, other)
            elif pairs[ev.crossing] != (other, strand) or ev.crossing in closed:
                break
            else:
                closed.add(ev.crossing)
        else:
            return True
    return False


def _check_input(pd: PlanarDiagram, ctx: StarContext) -> None:
    if pd.crossing_count != ctx.expected_crossings():
        raise InvalidDiagramError(
            f"diagram has {pd.crossing_count} crossings, the star has {ctx.expected_crossings()}"
        )
    if not follows_star(pd, ctx):
        raise InvalidDiagramError("diagram does not follow the star drawing it is paired with")


def _check_output(pd: PlanarDiagram, ctx: StarContext, stage: str) -> None:
    if pd.crossing_count != ctx.expected_crossings():
        raise VerificationError(
            f"{stage} left {pd.crossing_count} crossings, expected {ctx.expected_crossings()}"
        )
    if not follows_star(pd, ctx):
        raise VerificationError(f"{stage} does not follow the star drawing")


def redraw_as_star(resolved: PlanarDiagram, ctx: StarContext) -> PlanarDiagram:
    """The star drawing of the multi-crossing ``resolved`` was pulled apart from.

    Both pull the same strands apart pairwise, so crossing count and writhe
    must agree.
    """
    if not ctx.monogons or ctx.removed:
        raise InvalidDiagramError("only the full star can stand in for a resolved diagram")
    star = star_diagram(ctx)
    if (star.crossing_count, star.writhe) != (resolved.crossing_count, resolved.writhe):
        raise VerificationError(
            f"star drawing has {star.crossing_count} crossings and writhe {star.writhe}, "
            f"resolved diagram has {resolved.crossing_count} and {resolved.writhe}"
        )
    _check_output(star, ctx, "star drawing")
    return star


def remove_monogons(pd: PlanarDiagram, ctx: StarContext) -> Tuple[PlanarDiagram, StarContext]:
    """Pull every chord end back inside its petal tip: one Reidemeister I move per petal."""
    if not ctx.monogons:
        raise InvalidDiagramError("monogons were already removed from this star")
    _check_input(pd, ctx)

    kinks: Dict[int, Tuple[int, int]] = {}
    for k, x in enumerate(pd.crossings):
        for i in range(4):
            if x[i] == x[(i + 1) % 4]:
                kinks.setdefault(k, (x[(i + 2) % 4], x[(i + 3) % 4]))
    if len(kinks) != len(ctx.monogon_tips):
        raise VerificationError(f"found {len(kinks)} monogons at {ctx.p} petal tips")

    after = replace(ctx, monogons=False)
    result = _drop_and_merge(pd, list(kinks), list(kinks.values()))
    _check_output(result, after, "monogon removal")
    short = [s for s, met in after.crossings.items() if len(met) != ctx.p - 3]
    if short:
        raise VerificationError(f"strands {short} do not meet p - 3 others after monogon removal")
    return result, after


def strand_removal(
    pd: PlanarDiagram, ctx: StarContext, iteration: int
) -> Tuple[PlanarDiagram, StarContext]:
    """Reroute the highest in-star strand around the side with fewer petals.

    The strand loses its p - 2 - i crossings in the star and meets the i - 1
    earlier rerouted strands instead, for a net change of 2i + 1 - p. An
    earlier rerouted strand sharing a tip with it was never met in the star,
    which leaves one more crossing to delete; the two clasp at that tip,
    which makes one more.
    """
    limit = (ctx.p - 3) // 2
    if not 1 <= iteration <= limit:
        raise InvalidInputError(f"strand removal iteration {iteration} is outside 1..{limit}")
    if ctx.monogons:
        raise InvalidDiagramError("remove the monogons before removing strands")
    if len(ctx.removed) != iteration - 1:
        raise InvalidDiagramError(f"iteration {iteration} follows {len(ctx.removed)} removals")
    _check_input(pd, ctx)

    strand = ctx.removal_order[iteration - 1]
    clasps = sum(1 for q in ctx.removed if ctx.shares_tip(q, strand))
    deleted = len(ctx.crossings[strand])
    if deleted != ctx.p - 2 - iteration + clasps:
        raise VerificationError(
            f"strand {strand} meets {deleted} strands in the star, "
            f"expected {ctx.p - 2 - iteration + clasps}"
        )

    after = replace(ctx, removed=ctx.removed + (strand,))
    result = star_diagram(after)
    _check_output(result, after, f"strand removal {iteration}")
    created = len(after.crossings[strand])
    if created != iteration - 1 + clasps:
        raise VerificationError(
            f"rerouted strand {strand} meets {created} strands, expected {iteration - 1 + clasps}"
        )
    change = result.crossing_count - pd.crossing_count
    if change != 2 * iteration + 1 - ctx.p:
        raise VerificationError(
            f"strand removal changed the crossing count by {change}, "
            f"expected {2 * iteration + 1 - ctx.p}"
        )
    logger.debug(
        "Removed strand",
        strand=strand,
        iteration=iteration,
        deleted=deleted,
        created=created,
        clasps=clasps,
    )
    return result, after


def petal_reduced_diagram(
    sigma: PetalPermutation, schedule: Optional[PerturbationSchedule] = None
) -> PlanarDiagram:
    """resolve, then remove monogons, then (p-3)/2 strand removals."""
    diagram = from_petal(sigma)
    ctx = StarContext(diagram)
    pd = redraw_as_star(resolve_with_retry(diagram, schedule), ctx)
    pd, ctx = remove_monogons(pd, ctx)
    for i in range(1, (ctx.p - 3) // 2 + 1):
        pd, ctx = strand_removal(pd, ctx, i)
    if pd.crossing_count != crossing_bound(sigma.p):
        raise VerificationError(
            f"reduced diagram has {pd.crossing_count} crossings, bound is {crossing_bound(sigma.p)}"
        )
    return pd


# -- Reidemeister I / II --------------------------------------------------------


def _drop_and_merge(
    pd: PlanarDiagram, drop: Sequence[int], pairs: Sequence[Tuple[int, int]]
) -> PlanarDiagram:
    """Remove crossings ``drop`` and glue the arc labels in ``pairs``."""
    keep = [k for k in range(pd.crossing_count) if k not in drop]
    if not keep:
        return PlanarDiagram()
    parent: Dict[int, int] = {}

    def find(label: int) -> int:
        while parent.get(label, label) != label:
            label = parent[label]
        return label

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    relabelled = PlanarDiagram(
        tuple(tuple(find(v) for v in pd.crossings[k]) for k in keep),
        tuple(pd.signs[k] for k in keep),
    )
    return canonical_pd(relabelled)


def _find_r1(pd: PlanarDiagram) -> Optional[Tuple[int, int]]:
    for k, x in enumerate(pd.crossings):
        for i in range(4):
            if x[i] == x[(i + 1) % 4]:
                return k, i
    return None


def _find_r2(pd: PlanarDiagram) -> Optional[Tuple[int, int, int, int]]:
    """Two crossings bounding a bigon whose sides are both over (or both under) one strand."""
    crossings = pd.crossings
    for k1, x in enumerate(crossings):
        for k2, y in enumerate(crossings):
            if k1 == k2:
                continue
            for i in range(4):
                v, u = x[i], x[(i + 1) % 4]
                if u == v:
                    continue
                for j in range(4):
                    if y[j] != u or y[(j + 1) % 4] != v:
                        continue
                    # odd positions of a PD tuple are over-strand arcs
                    u_over = (i + 1) % 4 % 2 == 1 and j % 2 == 1
                    v_over = i % 2 == 1 and (j + 1) % 4 % 2 == 1
                    if u_over or v_over:
                        return k1, k2, i, j
    return None


def reduce_r1_r2(pd: PlanarDiagram) -> PlanarDiagram:
    """Apply crossing-removing Reidemeister I and II moves until none applies."""
    if pd.is_trivial():
        return pd
    current = canonical_pd(pd)
    while not current.is_trivial():
        kink = _find_r1(current)
        if kink:
            k, i = kink
            x = current.crossings[k]
            current = _drop_and_merge(current, [k], [(x[(i + 2) % 4], x[(i + 3) % 4])])
            continue

        bigon = _find_r2(current)
        if bigon:
            k1, k2, i, j = bigon
            x, y = current.crossings[k1], current.crossings[k2]
            current = _drop_and_merge(
                current,
                [k1, k2],
                [(x[(i + 3) % 4], y[(j + 2) % 4]), (x[(i + 2) % 4], y[(j + 3) % 4])],
            )
            continue
        break
    if pd.crossing_count != current.crossing_count:
        logger.debug(
            "Reidemeister reduction", before=pd.crossing_count, after=current.crossing_count
        )
    return current
