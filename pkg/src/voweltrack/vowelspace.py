"""Vowel spaces per checkpoint, their trajectory over training, and geometry."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formant import FormantTrack
from .textgrid import VowelSegment
from .vowels import F1_RANGE, F2_RANGE, VowelCategory

SPACE_COLUMNS = ("step", "vowel", "n_tokens", "f1_hz_mean", "f2_hz_mean", "f1_hz_sd", "f2_hz_sd")
CONVERGENCE_COLUMNS = ("step", "mean_dist_hz", "hull_area_hz2")


class SegmentRangeError(ValueError):
    pass


class ComparisonError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


class DegenerateHullWarning(UserWarning):
    pass


class Strategy(str, Enum):
    MIDDLE_HALF_MEAN = "middle-half-mean"
    MIDPOINT = "midpoint"


@dataclass(frozen=True)
class VowelToken:
    vowel: VowelCategory
    f1_hz: float
    f2_hz: float
    step: int
    source: str = ""

    def __post_init__(self):
        if not (self.f1_hz > 0 and self.f2_hz > 0):
            raise ValueError(f"formant values must be positive, got F1={self.f1_hz}, F2={self.f2_hz}")
        if self.step < 0:
            raise ValueError(f"step must be non-negative, got {self.step}")

    @property
    def out_of_range(self) -> bool:
        """True when F1 or F2 falls outside the usual adult vowel bands."""
        return not (F1_RANGE[0] <= self.f1_hz <= F1_RANGE[1] and F2_RANGE[0] <= self.f2_hz <= F2_RANGE[1])


@dataclass(frozen=True)
class VowelPoint:
    f1_hz: float
    f2_hz: float
    n_tokens: int
    f1_sd: float = 0.0
    f2_sd: float = 0.0

    @property
    def sd_defined(self) -> bool:
        return self.n_tokens > 1


@dataclass(frozen=True)
class VowelSpace:
    step: int
    points: Mapping[VowelCategory, VowelPoint]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        ordered = {v: self.points[v] for v in VowelCategory if v in self.points}
        for v, p in ordered.items():
            if p.n_tokens < 1:
                raise ValueError(f"{v.name}: token count must be >= 1")
        object.__setattr__(self, "points", ordered)

    @property
    def categories(self) -> frozenset[VowelCategory]:
        return frozenset(self.points)

    @classmethod
    def from_means(cls, step: int, means: Mapping[VowelCategory, tuple[float, float]]) -> VowelSpace:
        return cls(step, {v: VowelPoint(f1, f2, 1) for v, (f1, f2) in means.items()})


@dataclass(frozen=True)
class Trajectory:
    spaces: tuple[VowelSpace, ...]
    reference: VowelSpace | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        spaces = tuple(self.spaces)
        object.__setattr__(self, "spaces", spaces)
        steps = [s.step for s in spaces]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError(f"trajectory steps must be strictly increasing, got {steps}")
        notes = list(self.warnings)
        if spaces:
            inventory = spaces[0].categories
            for s in spaces[1:]:
                if s.categories != inventory:
                    diff = sorted(v.name for v in s.categories ^ inventory)
                    notes.append(f"step {s.step}: vowel inventory differs from step {spaces[0].step} ({', '.join(diff)})")
        object.__setattr__(self, "warnings", tuple(notes))

    @property
    def steps(self) -> list[int]:
        return [s.step for s in self.spaces]

    def path(self, vowel: VowelCategory) -> list[tuple[int, VowelPoint]]:
        return [(s.step, s.points[vowel]) for s in self.spaces if vowel in s.points]


def measure_vowel(
    track: FormantTrack,
    segment: VowelSegment,
    strategy: Strategy | str = Strategy.MIDDLE_HALF_MEAN,
) -> tuple[float, float] | None:
    """(F1, F2) for one vowel segment, or None when no frame has two formants.

    ``middle-half-mean`` averages frames whose centres fall in the central
    half of the segment; ``midpoint`` takes the usable frame nearest the
    segment centre.
    """
    strategy = Strategy(strategy)
    tol = 1e-9
    if segment.start < -tol or segment.end > track.duration_s + tol:
        raise SegmentRangeError(
            f"segment [{segment.start}, {segment.end}] outside track range [0, {track.duration_s}]"
        )
    usable = [f for f in track.frames if len(f.formants) >= 2 and segment.start <= f.time_s <= segment.end]
    if strategy is Strategy.MIDDLE_HALF_MEAN:
        quarter = 0.25 * segment.duration
        lo, hi = segment.start + quarter - tol, segment.end - quarter + tol
        chosen = [f for f in usable if lo <= f.time_s <= hi]
        if not chosen:
            return None
        return (
            float(np.mean([f.formants[0].frequency for f in chosen])),
            float(np.mean([f.formants[1].frequency for f in chosen])),
        )
    if not usable:
        return None
    centre = 0.5 * (segment.start + segment.end)
    best = min(usable, key=lambda f: (abs(f.time_s - centre), f.time_s))
    return best.formants[0].frequency, best.formants[1].frequency


def build_space(tokens: Iterable[VowelToken], step: int) -> VowelSpace:
    """Per-vowel mean and sample SD of F1 and F2; SD is 0 for single tokens."""
    by_vowel: dict[VowelCategory, list[VowelToken]] = {}
    for tok in tokens:
        if tok.step != step:
            raise ValueError(f"token from step {tok.step} passed to build_space for step {step}")
        by_vowel.setdefault(tok.vowel, []).append(tok)
    if not by_vowel:
        return VowelSpace(step, {}, (f"step {step}: no vowel tokens",))

    points = {}
    notes = []
    for vowel, toks in by_vowel.items():
        f1 = np.array([t.f1_hz for t in toks])
        f2 = np.array([t.f2_hz for t in toks])
        n = len(toks)
        if n == 1:
            notes.append(f"step {step}: {vowel.name} has a single token, SD reported as 0")
        points[vowel] = VowelPoint(
            float(f1.mean()), float(f2.mean()), n,
            float(f1.std(ddof=1)) if n > 1 else 0.0,
            float(f2.std(ddof=1)) if n > 1 else 0.0,
        )
    return VowelSpace(step, points, tuple(notes))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    """Hull vertices counter-clockwise (monotone chain); collinear points excluded."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_area(vertices: Sequence[tuple[float, float]]) -> float:
    """Shoelace area of a simple polygon."""
    n = len(vertices)
    if n < 3:
        return 0.0
    s = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2.0


def _plane(space: VowelSpace) -> dict[VowelCategory, tuple[float, float]]:
    return {v: (p.f2_hz, p.f1_hz) for v, p in space.points.items()}


def hull_area(space: VowelSpace) -> float:
    """Area (Hz^2) of the convex hull of the vowel points in the (F2, F1) plane."""
    hull = convex_hull(_plane(space).values())
    return polygon_area(hull) if len(hull) >= 3 else 0.0


def hull_outline(space: VowelSpace) -> list[VowelCategory]:
    """Vowels at hull vertices, in counter-clockwise (F2, F1) order."""
    coords = _plane(space)
    order = []
    for vertex in convex_hull(coords.values()):
        order += [v for v, c in coords.items() if c == vertex]
    return order if len(order) >= 3 else []


def point_vowels(space: VowelSpace) -> set[VowelCategory]:
    """Vowels that are vertices of the space's convex hull.

    Collinear or fewer than three distinct points leave no hull; an empty
    set is returned with a :class:`DegenerateHullWarning`.
    """
    outline = hull_outline(space)
    if not outline:
        warnings.warn(f"step {space.step}: vowel points do not span a hull", DegenerateHullWarning, stacklevel=2)
    return set(outline)


@dataclass(frozen=True)
class DistanceReport:
    per_vowel: Mapping[VowelCategory, float]
    mean: float
    unshared: frozenset[VowelCategory]


def distance_to_reference(space: VowelSpace, reference: VowelSpace) -> DistanceReport:
    """Euclidean (F1, F2) distance in Hz from each vowel to its reference position."""
    shared = [v for v in VowelCategory if v in space.points and v in reference.points]
    if not shared:
        raise ComparisonError(f"step {space.step} shares no vowel categories with the reference")
    per = {
        v: math.hypot(space.points[v].f1_hz - reference.points[v].f1_hz,
                      space.points[v].f2_hz - reference.points[v].f2_hz)
        for v in shared
    }
    return DistanceReport(per, math.fsum(per.values()) / len(per), space.categories ^ reference.categories)


@dataclass(frozen=True)
class ConvergencePoint:
    step: int
    mean_dist_hz: float | None
    hull_area_hz2: float


def convergence_curve(trajectory: Trajectory, require_reference: bool = True) -> list[ConvergencePoint]:
    """Mean distance to the reference and hull area at every checkpoint."""
    ref = trajectory.reference
    if ref is None and require_reference:
        raise ConfigurationError("convergence needs a reference vowel space")
    return [
        ConvergencePoint(s.step, distance_to_reference(s, ref).mean if ref is not None else None, hull_area(s))
        for s in trajectory.spaces
    ]


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def space_csv(spaces: Iterable[VowelSpace]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SPACE_COLUMNS)
    for space in spaces:
        for v, p in space.points.items():
            w.writerow([space.step, v.name, p.n_tokens, _fmt(p.f1_hz), _fmt(p.f2_hz), _fmt(p.f1_sd), _fmt(p.f2_sd)])
    return buf.getvalue()


def write_space_csv(path: str | Path, spaces: Iterable[VowelSpace]) -> None:
    Path(path).write_text(space_csv(spaces), encoding="utf-8")


def parse_space_csv(text: str) -> list[VowelSpace]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if rows and set(SPACE_COLUMNS) - set(rows[0]):
        raise ValueError(f"space CSV must have columns {','.join(SPACE_COLUMNS)}")
    grouped: dict[int, dict[VowelCategory, VowelPoint]] = {}
    for i, row in enumerate(rows, 2):
        try:
            step = int(row["step"])
            grouped.setdefault(step, {})[VowelCategory.from_name(row["vowel"])] = VowelPoint(
                float(row["f1_hz_mean"]), float(row["f2_hz_mean"]), int(row["n_tokens"]),
                float(row["f1_hz_sd"] or 0), float(row["f2_hz_sd"] or 0),
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(f"space CSV line {i}: {exc}") from None
    return [VowelSpace(step, pts) for step, pts in sorted(grouped.items())]


def read_space_csv(path: str | Path) -> list[VowelSpace]:
    return parse_space_csv(Path(path).read_text(encoding="utf-8"))


def read_reference_csv(path: str | Path) -> VowelSpace:
    spaces = read_space_csv(path)
    if len(spaces) != 1:
        raise ValueError(f"{path}: reference CSV must hold exactly one step, found {len(spaces)}")
    return spaces[0]


def convergence_csv(curve: Iterable[ConvergencePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CONVERGENCE_COLUMNS)
    for c in curve:
        w.writerow([c.step, "" if c.mean_dist_hz is None else _fmt(c.mean_dist_hz), _fmt(c.hull_area_hz2)])
    return buf.getvalue()
