"""SVG drawings of übercrossing diagrams: chords through the centre, loops around it."""

import math
from typing import List, Optional, Tuple

import numpy as np

from .errors import InvalidInputError
from .petalperm import PetalPermutation, reduce_mod
from .uberdiag import UbercrossingDiagram, from_petal

DEFAULT_CANVAS = 1000
LOOP_SAMPLES = 48
PETAL_BULGE = 0.35
NESTING_STEP = 0.15

_HEADER = (
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n'
)
_STYLE = (
    "<style>"
    ".chord{{stroke:#222;stroke-width:{w}}}"
    ".loop{{fill:none;stroke:#222;stroke-width:{w}}}"
    ".nesting{{fill:none;stroke:#b03030;stroke-width:{w}}}"
    ".height{{font-family:sans-serif;font-size:{f}px;text-anchor:middle;dominant-baseline:middle}}"
    ".title{{font-family:sans-serif;font-size:{f}px}}"
    "</style>\n"
)


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _sweep_steps(diagram: UbercrossingDiagram, a: int, b: int) -> int:
    """Signed number of endpoint steps from a to b around the inside of the arc."""
    size = diagram.endpoint_count
    inside = diagram.span(a, b)
    step = reduce_mod(a + 1, size)
    forward = step in inside if inside else step == b
    steps = (b - a) % size
    return steps if forward else -(size - steps)


def render_svg(
    diagram: UbercrossingDiagram, canvas: int = DEFAULT_CANVAS, title: Optional[str] = None
) -> str:
    """Deterministic SVG of ``diagram`` on a square canvas."""
    if canvas < 100:
        raise InvalidInputError(f"canvas must be at least 100 pixels, got {canvas}")
    size = diagram.endpoint_count
    centre = canvas / 2
    radius = 0.28 * canvas
    stroke = max(1.0, canvas / 400)
    font = max(8.0, canvas / 50)

    def angle(j: int) -> float:
        return 2 * math.pi * (j - 1) / size

    def point(r: float, theta: float) -> Tuple[float, float]:
        return centre + r * math.sin(theta), centre - r * math.cos(theta)

    parts: List[str] = [_HEADER.format(size=canvas), _STYLE.format(w=_fmt(stroke), f=_fmt(font))]
    if title:
        parts.append(
            f'<text class="title" x="{_fmt(font)}" y="{_fmt(1.5 * font)}">{title}</text>\n'
        )

    for k in range(1, diagram.n + 1):
        x1, y1 = point(radius, angle(k))
        x2, y2 = point(radius, angle(k + diagram.n))
        parts.append(
            f'<line class="chord" data-strand="{k}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>\n'
        )

    fractions = np.linspace(0.0, 1.0, LOOP_SAMPLES + 1)
    nesting = set(diagram.nesting_arcs())
    for a, b in diagram.matching:
        covered = len(diagram.span(a, b))
        is_nesting = (a, b) in nesting
        bulge = PETAL_BULGE + (NESTING_STEP * covered if is_nesting else 0.0)
        sweep = _sweep_steps(diagram, a, b) * 2 * math.pi / size
        r = radius * (1 + bulge * np.sin(np.pi * fractions))
        theta = angle(a) + sweep * fractions
        points = [point(ri, ti) for ri, ti in zip(r, theta)]
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        css = "nesting" if is_nesting else "loop"
        parts.append(f'<polyline class="{css}" data-arc="{a}-{b}" points="{coords}"/>\n')

    for k in range(1, diagram.n + 1):
        x, y = point(radius * 0.88, angle(k) + math.pi / (2 * size))
        label = diagram.height_of(k)
        parts.append(f'<text class="height" x="{_fmt(x)}" y="{_fmt(y)}">{label}</text>\n')

    parts.append("</svg>\n")
    return "".join(parts)


def render_petal_svg(sigma: PetalPermutation, canvas: int = DEFAULT_CANVAS) -> str:
    return render_svg(from_petal(sigma), canvas, title=str(sigma))
