"""Standalone SVG rendering of vowel-space trajectories and Likert bars.

Output is plain SVG 1.1 with an embedded stylesheet. Every coordinate is
written with fixed precision, so identical inputs give identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence
from xml.sax.saxutils import escape

from .perception import LIKERT_LABELS, N_LEVELS, Accent, AccentAggregate
from .vowels import VowelCategory
from .vowelspace import Trajectory, VowelSpace, hull_outline

# One colour per vowel category, in VowelCategory order.
DEFAULT_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79",
)
# Rating 0..4: browns for "not like", greens for "completely".
LIKERT_PALETTE = ("#8c510a", "#d8b365", "#e8e3d3", "#5ab4ac", "#01665e")
LABEL_MODES = ("lexical-word", "ipa", "step-number")

_STYLE = (
    "text{font-family:sans-serif;font-size:12px;fill:#222}"
    ".axis{stroke:#222;stroke-width:1}"
    ".grid{stroke:#ddd;stroke-width:0.5}"
    ".trajectory{fill:none;stroke-width:1.5}"
    ".step-label{font-size:9px}"
    ".ref-label{font-weight:bold}"
    ".hull{fill:none;stroke:#d62728;stroke-width:1;stroke-dasharray:4 3}"
    ".ref-hull{fill:none;stroke:#2ca02c;stroke-width:1.5}"
    ".title{font-size:14px}"
)


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class PlotOptions:
    width: int = 760
    height: int = 560
    f1_range: tuple[float, float] = (200.0, 900.0)
    f2_range: tuple[float, float] = (600.0, 2600.0)
    show_reference: bool = True
    show_hull: bool = False
    label_mode: str = "lexical-word"
    palette: tuple[str, ...] = DEFAULT_PALETTE
    title: str = ""
    margins: tuple[int, int, int, int] = field(default=(50, 30, 60, 70))  # top, right, bottom, left

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")
        for name in ("f1_range", "f2_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"{name} must be an increasing finite interval, got {(lo, hi)}")
        if self.label_mode not in LABEL_MODES:
            raise ValueError(f"label_mode must be one of {LABEL_MODES}, got {self.label_mode!r}")
        if len(self.palette) < len(VowelCategory):
            raise ValueError(f"palette needs at least {len(VowelCategory)} colours")
        object.__setattr__(self, "palette", tuple(self.palette))

    def colour(self, vowel: VowelCategory) -> str:
        return self.palette[list(VowelCategory).index(vowel)]


def _f(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _open(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<style>{_STYLE}</style>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]


def _text(x: float, y: float, s: str, cls: str = "", anchor: str = "middle", fill: str | None = None,
          extra: str = "") -> str:
    attrs = f' class="{cls}"' if cls else ""
    attrs += f' fill="{fill}"' if fill else ""
    return f'<text{attrs} x="{_f(x)}" y="{_f(y)}" text-anchor="{anchor}"{extra}>{escape(s)}</text>'


def _expand(rng: tuple[float, float], values: Sequence[float], unit: float) -> tuple[float, float]:
    lo, hi = rng
    if values:
        lo = min(lo, math.floor(min(values) / unit) * unit)
        hi = max(hi, math.ceil(max(values) / unit) * unit)
    return lo, hi


def _ticks(lo: float, hi: float, step: float) -> list[float]:
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int(math.floor((hi - first) / step + 1e-9)) + 1)]


def step_label(step: int, all_steps: Sequence[int]) -> str:
    """Checkpoint label: thousands of steps when every step is a multiple of 1000."""
    if all(s % 1000 == 0 for s in all_steps):
        return str(step // 1000)
    return str(step)


def render_vowel_space_svg(trajectory: Trajectory, options: PlotOptions = PlotOptions()) -> str:
    """Vowel chart with one polyline per vowel tracing its checkpoints in step order.

    High front vowels plot top-left: F1 grows downward and F2 grows
    leftward. Each checkpoint point is marked and labelled with its step;
    the reference space, when present and enabled, is drawn with
    lexical-set labels in the vowel's colour.
    """
    ref = trajectory.reference if options.show_reference else None
    if not trajectory.spaces and ref is None:
        raise RenderError("nothing to plot: trajectory has no spaces and no reference")

    spaces = list(trajectory.spaces) + ([ref] if ref is not None else [])
    f1s = [p.f1_hz for s in spaces for p in s.points.values()]
    f2s = [p.f2_hz for s in spaces for p in s.points.values()]
    f1_lo, f1_hi = _expand(options.f1_range, f1s, 100.0)
    f2_lo, f2_hi = _expand(options.f2_range, f2s, 100.0)

    top, right, bottom, left = options.margins
    pw = options.width - left - right
    ph = options.height - top - bottom

    def xy(f1: float, f2: float) -> tuple[float, float]:
        return left + (f2_hi - f2) / (f2_hi - f2_lo) * pw, top + (f1 - f1_lo) / (f1_hi - f1_lo) * ph

    out = _open(options.width, options.height)
    if options.title:
        out.append(_text(options.width / 2, 22, options.title, "title"))

    out.append('<g class="axes">')
    for t in _ticks(f2_lo, f2_hi, 200.0):
        x, _ = xy(f1_lo, t)
        out.append(f'<line class="grid" x1="{_f(x)}" y1="{top}" x2="{_f(x)}" y2="{top + ph}"/>')
        out.append(_text(x, top + ph + 16, f"{t:g}"))
    for t in _ticks(f1_lo, f1_hi, 100.0):
        _, y = xy(t, f2_lo)
        out.append(f'<line class="grid" x1="{left}" y1="{_f(y)}" x2="{left + pw}" y2="{_f(y)}"/>')
        out.append(_text(left - 6, y + 4, f"{t:g}", anchor="end"))
    out.append(f'<rect class="axis" x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none"/>')
    out.append(_text(left + pw / 2, options.height - 18, "F2 (Hz)"))
    out.append(_text(16, top + ph / 2, "F1 (Hz)", extra=f' transform="rotate(-90 16 {_f(top + ph / 2)})"'))
    out.append("</g>")

    if options.show_hull:
        hulls = [(trajectory.spaces[-1], "hull")] if trajectory.spaces else []
        if ref is not None:
            hulls.append((ref, "ref-hull"))
        for space, cls in hulls:
            verts = hull_outline(space)
            if verts:
                pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (xy(space.points[v].f1_hz, space.points[v].f2_hz)
                                                              for v in verts))
                out.append(f'<polygon class="{cls}" points="{pts}"/>')

    steps = trajectory.steps
    out.append('<g class="trajectories">')
    for vowel in VowelCategory:
        path = trajectory.path(vowel)
        if len(path) >= 2:
            pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in (xy(p.f1_hz, p.f2_hz) for _, p in path))
            out.append(f'<polyline class="trajectory" data-vowel="{vowel.name}" '
                       f'stroke="{options.colour(vowel)}" points="{pts}"/>')
    out.append("</g>")

    out.append('<g class="points">')
    for vowel in VowelCategory:
        path = trajectory.path(vowel)
        colour = options.colour(vowel)
        for step, p in path:
            x, y = xy(p.f1_hz, p.f2_hz)
            out.append(f'<circle class="point" data-vowel="{vowel.name}" data-step="{step}" '
                       f'cx="{_f(x)}" cy="{_f(y)}" r="3.5" fill="{colour}"/>')
            out.append(_text(x + 5, y - 5, step_label(step, steps), "step-label", "start", colour))
        if path and options.label_mode != "step-number":
            x, y = xy(path[-1][1].f1_hz, path[-1][1].f2_hz)
            name = vowel.name if options.label_mode == "lexical-word" else vowel.ipa
            out.append(_text(x, y + 16, name, "vowel-label", fill=colour))
    out.append("</g>")

    if ref is not None:
        out.append('<g class="reference">')
        for vowel, p in ref.points.items():
            x, y = xy(p.f1_hz, p.f2_hz)
            colour = options.colour(vowel)
            out.append(f'<rect class="ref-point" data-vowel="{vowel.name}" x="{_f(x - 3)}" y="{_f(y - 3)}" '
                       f'width="6" height="6" fill="{colour}"/>')
            out.append(_text(x, y - 7, vowel.name, "ref-label", fill=colour))
        out.append("</g>")

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_likert_svg(aggregates: Sequence[AccentAggregate], options: PlotOptions = PlotOptions()) -> str:
    """Stacked Likert bars, one panel per accent and one bar per checkpoint.

    Bands stack bottom-to-top from rating 0 to rating 4, each as tall as
    its proportion of the bar.
    """
    if not aggregates:
        raise RenderError("no Likert aggregates to plot")
    accents = [a for a in Accent if any(g.accent == a for g in aggregates)]
    steps = sorted({g.step for g in aggregates})
    by_key = {(g.step, g.accent): g for g in aggregates}

    top, right, bottom, left = options.margins
    legend_h = 24
    ph = options.height - top - bottom - legend_h
    pw = options.width - left - right
    gap = 20.0
    panel_w = (pw - gap * (len(accents) - 1)) / len(accents)
    slot = panel_w / len(steps)
    bar_w = slot * 0.7
    base = top + ph

    out = _open(options.width, options.height)
    if options.title:
        out.append(_text(options.width / 2, 22, options.title, "title"))
    out.append('<g class="axes">')
    for pct in range(0, 101, 25):
        y = base - pct / 100 * ph
        out.append(f'<line class="grid" x1="{left}" y1="{_f(y)}" x2="{left + pw}" y2="{_f(y)}"/>')
        out.append(_text(left - 6, y + 4, f"{pct}%", anchor="end"))
    out.append("</g>")

    for i, accent in enumerate(accents):
        x0 = left + i * (panel_w + gap)
        out.append(f'<g class="panel" data-accent="{accent.value}">')
        out.append(_text(x0 + panel_w / 2, top - 8, accent.value, "panel-title"))
        for j, step in enumerate(steps):
            g = by_key.get((step, accent))
            x = x0 + j * slot + (slot - bar_w) / 2
            out.append(_text(x + bar_w / 2, base + 16, step_label(step, steps), "bar-label"))
            if g is None:
                continue
            out.append(f'<g class="bar" data-accent="{accent.value}" data-step="{step}" data-n="{g.n}" '
                       f'data-height="{_f(ph)}">')
            cum = 0.0
            for k, p in enumerate(g.proportions):
                if p <= 0:
                    continue
                y_top = base - (cum + p) * ph
                y_bot = base - cum * ph
                cum += p
                out.append(f'<rect class="band" data-rating="{k}" x="{_f(x)}" y="{y_top:.3f}" width="{_f(bar_w)}" '
                           f'height="{y_bot - y_top:.3f}" fill="{LIKERT_PALETTE[k]}"/>')
            out.append("</g>")
        out.append("</g>")

    out.append('<g class="legend">')
    sw = pw / N_LEVELS
    ly = options.height - legend_h
    for k in range(N_LEVELS):
        lx = left + k * sw
        out.append(f'<rect class="legend-swatch" x="{_f(lx)}" y="{_f(ly - 10)}" width="10" height="10" '
                   f'fill="{LIKERT_PALETTE[k]}"/>')
        out.append(_text(lx + 14, ly, LIKERT_LABELS[k], anchor="start", extra=' font-size="10"'))
    out.append(_text(left + pw / 2, base + 34, "training step (thousands)" if all(s % 1000 == 0 for s in steps)
                     else "training step"))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def space_only_trajectory(space: VowelSpace) -> Trajectory:
    """Trajectory holding only a reference space, for reference-only charts."""
    return Trajectory((), reference=space)
