"""
Ordinary double-crossing knot diagrams.

A ``PlanarDiagram`` is a PD code: one 4-tuple of arc labels per crossing,
counterclockwise from the incoming under-strand, plus a sign per crossing.
Arc labels run 1..2C consecutively along the oriented knot.

This module also hosts the projection engine every geometric construction in
the package goes through: a closed polyline with a depth coordinate is
projected to the plane and turned into a signed Gauss code.
"""

import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateScheduleError, InvalidDiagramError, InvalidInputError

Crossing = Tuple[int, int, int, int]

# Strict interior test for segment parameters.
SEGMENT_EPS = 1e-12
# Depth values closer than this at a crossing cannot be ordered.
DEPTH_EPS = 1e-12


class GaussEvent(NamedTuple):
    """One passage through a crossing along the traversal."""

    crossing: int
    over: bool
    sign: int


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: Tuple[Crossing, ...] = ()
    signs: Tuple[int, ...] = ()

    def __post_init__(self):
        crossings = tuple(tuple(int(v) for v in x) for x in self.crossings)
        object.__setattr__(self, "crossings", crossings)
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.crossings) != len(self.signs):
            raise InvalidDiagramError(
                f"{len(self.crossings)} crossings but {len(self.signs)} signs"
            )
        for k, x in enumerate(self.crossings):
            if len(x) != 4:
                raise InvalidDiagramError(f"crossing {k + 1} does not have 4 labels")
        for s in self.signs:
            if s not in (1, -1):
                raise InvalidDiagramError(f"crossing sign must be +1 or -1, got {s}")
        counts: Dict[int, int] = {}
        for x in self.crossings:
            for label in x:
                counts[label] = counts.get(label, 0) + 1
        bad = sorted(label for label, c in counts.items() if c != 2)
        if bad:
            raise InvalidDiagramError(f"arc label {bad[0]} appears {counts[bad[0]]} times")

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def is_trivial(self) -> bool:
        return not self.crossings

    def to_json(self) -> Dict[str, Any]:
        return {"crossings": [list(x) for x in self.crossings], "signs": list(self.signs)}

    @classmethod
    def from_json(cls, payload: Mapping[str, Any]) -> "PlanarDiagram":
        try:
            crossings = [tuple(x) for x in payload["crossings"]]
            signs = list(payload["signs"])
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"PD JSON needs 'crossings' and 'signs': {e}")
        return cls(tuple(crossings), tuple(signs))


def writhe(pd: PlanarDiagram) -> int:
    return pd.writhe


def pd_from_gauss(events: Sequence[GaussEvent]) -> PlanarDiagram:
    """Build the PD code of a signed Gauss code.

    Crossings are numbered by first appearance. The passage at event e enters
    on arc e+1 and leaves on arc e+2 (wrapping to 1).
    """
    m = len(events)
    if m == 0:
        return PlanarDiagram()
    if m % 2:
        raise InvalidDiagramError("Gauss code has an odd number of events")

    order: Dict[int, int] = {}
    for ev in events:
        order.setdefault(ev.crossing, len(order))
    count = m // 2
    if len(order) != count:
        raise InvalidDiagramError("every crossing must be visited exactly twice")

    under: List[Optional[int]] = [None] * count
    over: List[Optional[int]] = [None] * count
    signs = [0] * count
    for e, ev in enumerate(events):
        k = order[ev.crossing]
        slot = over if ev.over else under
        if slot[k] is not None:
            raise InvalidDiagramError(f"crossing {ev.crossing} passed twice on the same level")
        slot[k] = e
        if signs[k] and signs[k] != ev.sign:
            raise InvalidDiagramError(f"crossing {ev.crossing} has inconsistent signs")
        signs[k] = ev.sign

    def in_label(e: int) -> int:
        return e + 1

    def out_label(e: int) -> int:
        return (e + 1) % m + 1

    crossings: List[Crossing] = []
    for k in range(count):
        u, o = under[k], over[k]
        if u is None or o is None:
            raise InvalidDiagramError("every crossing needs one over and one under passage")
        if signs[k] == -1:
            crossings.append((in_label(u), in_label(o), out_label(u), out_label(o)))
        else:
            crossings.append((in_label(u), out_label(o), out_label(u), in_label(o)))
    return PlanarDiagram(tuple(crossings), tuple(signs))


def gauss_code(pd: PlanarDiagram, start_label: Optional[int] = None) -> List[GaussEvent]:
    """Walk the diagram from ``start_label`` (default: smallest label)."""
    if pd.is_trivial():
        return []

    # incoming label -> (crossing, over?, outgoing label)
    passages: Dict[int, Tuple[int, bool, int]] = {}

    def add(label: int, value: Tuple[int, bool, int]) -> None:
        if label in passages:
            raise InvalidDiagramError(f"arc {label} enters two crossings")
        passages[label] = value

    for k, (a, b, c, d) in enumerate(pd.crossings):
        add(a, (k, False, c))
        if pd.signs[k] == -1:
            add(b, (k, True, d))
        else:
            add(d, (k, True, b))

    label = min(passages) if start_label is None else start_label
    start = label
    ids: Dict[int, int] = {}
    seen = set()
    events: List[GaussEvent] = []
    for _ in range(2 * pd.crossing_count):
        if label not in passages:
            raise InvalidDiagramError(f"traversal breaks at arc {label}")
        if label in seen:
            raise InvalidDiagramError("diagram has more than one component")
        seen.add(label)
        k, is_over, nxt = passages[label]
        ids.setdefault(k, len(ids))
        events.append(GaussEvent(ids[k], is_over, pd.signs[k]))
        label = nxt
    if label != start:
        raise InvalidDiagramError("traversal does not close")
    return events


def canonical_pd(pd: PlanarDiagram) -> PlanarDiagram:
    """Relabel arcs consecutively from the smallest label and renumber crossings."""
    return pd_from_gauss(gauss_code(pd))


# -- Gauss text -------------------------------------------------------------

_TOKEN = re.compile(r"^([OUou])(\d+)([+-])$")


def format_gauss(events: Iterable[GaussEvent]) -> str:
    """Render as ``O1+ U2- ...`` with 1-based crossing ids."""
    return " ".join(
        f"{'O' if ev.over else 'U'}{ev.crossing + 1}{'+' if ev.sign > 0 else '-'}" for ev in events
    )


def parse_gauss(text: str) -> List[GaussEvent]:
    events = []
    for position, token in enumerate(text.replace(",", " ").split(), start=1):
        match = _TOKEN.match(token.replace("−", "-"))
        if not match:
            raise InvalidInputError(f"bad Gauss token {token!r}", position=position)
        kind, ident, sign = match.groups()
        events.append(GaussEvent(int(ident) - 1, kind.upper() == "O", 1 if sign == "+" else -1))
    return events


# -- projection engine --------------------------------------------------------


def polyline_intersections(points: Any) -> List[Tuple[int, float, int, float]]:
    """Transverse double points of a closed polyline, by its first two coordinates.

    Each hit is ``(i, t, j, u)`` with i < j: segment i at parameter t meets
    segment j at parameter u. Segment k runs from row k to row k+1 (the last
    one back to row 0); adjacent segments are never compared.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] < 2:
        raise InvalidInputError("polyline must be an (n, 2) or (n, 3) array")
    pts = pts[:, :2]
    n = len(pts)
    if n < 3:
        return []

    direction = np.roll(pts, -1, axis=0) - pts
    i_idx, j_idx = np.triu_indices(n, k=2)
    keep = ~((i_idx == 0) & (j_idx == n - 1))
    i_idx, j_idx = i_idx[keep], j_idx[keep]

    r = direction[i_idx]
    s = direction[j_idx]
    qp = pts[j_idx] - pts[i_idx]
    den = r[:, 0] * s[:, 1] - r[:, 1] * s[:, 0]
    live = np.abs(den) >= 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]) / den
        u = (qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]) / den
    hit = (
        live
        & (t > SEGMENT_EPS)
        & (t < 1 - SEGMENT_EPS)
        & (u > SEGMENT_EPS)
        & (u < 1 - SEGMENT_EPS)
    )
    return [(int(i_idx[h]), float(t[h]), int(j_idx[h]), float(u[h])) for h in np.flatnonzero(hit)]


def crossing_sign(over_dir: Any, under_dir: Any) -> int:
    """+1 iff the over direction turns counterclockwise onto the under direction."""
    return 1 if over_dir[0] * under_dir[1] - over_dir[1] * under_dir[0] > 0 else -1


def polygon_gauss_code(points: Any) -> List[GaussEvent]:
    """Signed Gauss code of a closed polyline given as rows (x, y, depth).

    Consecutive rows (and the last/first pair) are joined by straight
    segments. At every transverse double point the passage with smaller depth
    is over.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise InvalidInputError("polyline must be an (n, 3) array of (x, y, depth)")
    if len(pts) < 3:
        return []

    end = np.roll(pts, -1, axis=0)
    direction = end[:, :2] - pts[:, :2]
    events: List[Tuple[float, GaussEvent]] = []
    for cid, (i, ti, j, uj) in enumerate(polyline_intersections(pts)):
        depth_i = pts[i, 2] + ti * (end[i, 2] - pts[i, 2])
        depth_j = pts[j, 2] + uj * (end[j, 2] - pts[j, 2])
        if abs(depth_i - depth_j) < DEPTH_EPS:
            raise DegenerateScheduleError(f"segments {i} and {j} cross at equal depth")
        i_over = depth_i < depth_j
        r, s = direction[i], direction[j]
        sign = crossing_sign(r, s) if i_over else crossing_sign(s, r)
        events.append((i + ti, GaussEvent(cid, i_over, sign)))
        events.append((j + uj, GaussEvent(cid, not i_over, sign)))

    events.sort(key=lambda item: item[0])
    return [ev for _, ev in events]


def polygon_pd(points: Any) -> PlanarDiagram:
    return pd_from_gauss(polygon_gauss_code(points))
