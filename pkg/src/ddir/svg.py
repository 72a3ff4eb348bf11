"""Deterministic SVG drawings of configurations.

Coordinates are converted to decimals only for output; nothing computed here
feeds back into any predicate.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .config import Configuration
from .geometry import slope_of

SLOPE_COLORS = ("#1f4e9c", "#c0392b", "#8e44ad", "#d35400", "#16a085", "#7f6000", "#2c3e50")
PROBE_FILL = "#2e9e48"
PILLAR_FILL = "#7a7a7a"
HIGHLIGHT = "#f1c40f"


def _fmt(x: Fraction, precision: int) -> str:
    text = f"{float(x):.{precision}f}".rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


def render_svg(
    config: Configuration,
    size: int = 800,
    precision: int = 3,
    labels: bool = False,
    highlight: Sequence[int] = (),
    title: Optional[str] = None,
) -> str:
    """Probes green, pillars shaded grey, roots dashed, segments coloured by slope."""
    pad = 10
    scale = Fraction(size)

    def X(x) -> str:
        return _fmt(pad + scale * x, precision)

    def Y(y) -> str:
        return _fmt(pad + scale * (1 - y), precision)

    def W(w) -> str:
        return _fmt(scale * w, precision)

    total = size + 2 * pad
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" '
        f'viewBox="0 0 {total} {total}">'
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(f'<rect x="{pad}" y="{pad}" width="{size}" height="{size}" fill="white" stroke="black"/>')
    probes = sorted(config.probes, key=lambda p: (p.rect.y_lo, p.rect.x_lo))
    out.append('<g id="probes">')
    for i, p in enumerate(probes):
        r = p.rect
        out.append(
            f'<rect x="{X(r.x_lo)}" y="{Y(r.y_hi)}" width="{W(r.width)}" height="{W(r.height)}" '
            f'fill="{PROBE_FILL}" fill-opacity="0.25" stroke="{PROBE_FILL}" stroke-width="0.5"/>'
        )
        for pil in p.pillars:
            out.append(
                f'<rect x="{X(pil.x_lo)}" y="{Y(pil.y_hi)}" width="{W(pil.width)}" height="{W(pil.height)}" '
                f'fill="{PILLAR_FILL}" fill-opacity="0.3" stroke="none"/>'
            )
        rt = p.root
        out.append(
            f'<rect x="{X(rt.x_lo)}" y="{Y(rt.y_hi)}" width="{W(rt.width)}" height="{W(rt.height)}" '
            f'fill="none" stroke="{PROBE_FILL}" stroke-width="0.5" stroke-dasharray="2,2"/>'
        )
        if labels:
            fs = _fmt(max(Fraction(4), min(Fraction(12), scale * r.height)), 1)
            out.append(
                f'<text x="{X(r.x_hi)}" y="{Y((r.y_lo + r.y_hi) / 2)}" font-size="{fs}" '
                f'text-anchor="end" dominant-baseline="middle">{i}</text>'
            )
    out.append("</g>")
    slopes = sorted({slope_of(s) for s in config.segments})
    color_of = {sl: SLOPE_COLORS[i % len(SLOPE_COLORS)] for i, sl in enumerate(slopes)}
    marked = set(highlight)
    out.append('<g id="segments" stroke-linecap="round">')
    for i, s in enumerate(config.segments):
        color = HIGHLIGHT if i in marked else color_of[slope_of(s)]
        width = "1.5" if i in marked else "0.8"
        out.append(
            f'<line x1="{X(s.a.x)}" y1="{Y(s.a.y)}" x2="{X(s.b.x)}" y2="{Y(s.b.y)}" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
