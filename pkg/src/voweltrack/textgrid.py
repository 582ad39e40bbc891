"""Praat TextGrid reading and writing, and vowel segment extraction.

Both the long ("ooTextFile" with ``key = value`` lines) and the short
layout are handled by the same reader: the file is reduced to its sequence
of numbers, quoted strings and ``<exists>`` flags, which is identical for
the two layouts.
"""

from __future__ import annotations

import codecs
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

from .vowels import DEFAULT_LABEL_MAP, VowelCategory

DEFAULT_PHONE_TIER = "MAU"
DEFAULT_WORD_TIER = "ORT-MAU"
# Segments shorter than this cannot fill one analysis window.
MIN_SEGMENT_S = 0.030
# Slack for boundary comparisons; aligners print times with limited precision.
_TIME_EPS = 1e-9


class TextGridParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class TierNotFoundError(LookupError):
    pass


class Interval(NamedTuple):
    start: float
    end: float
    label: str


@dataclass(frozen=True)
class IntervalTier:
    name: str
    intervals: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(Interval(*iv) for iv in self.intervals))
        prev_end = None
        for iv in self.intervals:
            if not iv.start < iv.end:
                raise ValueError(f"tier {self.name!r}: interval {iv} has start >= end")
            if prev_end is not None and iv.start < prev_end - _TIME_EPS:
                raise ValueError(f"tier {self.name!r}: interval {iv} overlaps or precedes its predecessor")
            prev_end = iv.end

    @property
    def xmin(self) -> float:
        return self.intervals[0].start if self.intervals else 0.0

    @property
    def xmax(self) -> float:
        return self.intervals[-1].end if self.intervals else 0.0


@dataclass(frozen=True)
class Alignment:
    tiers: tuple[IntervalTier, ...]
    xmin: float
    xmax: float
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if self.xmin > self.xmax:
            raise ValueError(f"xmin {self.xmin} > xmax {self.xmax}")
        for tier in self.tiers:
            if tier.intervals and (tier.xmin < self.xmin - _TIME_EPS or tier.xmax > self.xmax + _TIME_EPS):
                raise ValueError(f"tier {tier.name!r} extends beyond [{self.xmin}, {self.xmax}]")

    def tier(self, name: str) -> IntervalTier:
        for t in self.tiers:
            if t.name == name:
                return t
        available = ", ".join(repr(t.name) for t in self.tiers) or "none"
        raise TierNotFoundError(f"no tier named {name!r}; available tiers: {available}")


@dataclass(frozen=True)
class VowelSegment:
    vowel: VowelCategory
    start: float
    end: float
    word: str | None = None
    clip_ref: str = ""

    @property
    def duration(self) -> float:
        return self.end - self.start

    @property
    def too_short(self) -> bool:
        return self.duration < MIN_SEGMENT_S


_TOKEN_RE = re.compile(
    r"""
    (?P<string>"(?:[^"]|"")*")
  | (?P<open>")
  | (?P<flag><exists>|<absent>)
  | (?P<index>\[\s*\d*\s*\])
  | (?P<number>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(?![\w.])
  | (?P<word>[^\s"=:\[\]<>]+)
  | (?P<punct>[=:\[\]<>])
  | (?P<space>\s+)
    """,
    re.VERBOSE,
)


class _Tokens:
    """Cursor over the numbers, strings and flags of a TextGrid file."""

    def __init__(self, text: str):
        self.items: list[tuple[str, object, int]] = []
        line = 1
        for m in _TOKEN_RE.finditer(text):
            kind = m.lastgroup
            value = m.group()
            if kind == "open":
                raise TextGridParseError("unbalanced quote", line)
            if kind == "string":
                self.items.append(("string", value[1:-1].replace('""', '"'), line))
            elif kind == "number":
                self.items.append(("number", float(value), line))
            elif kind == "flag":
                self.items.append(("flag", value == "<exists>", line))
            line += value.count("\n")
        self.pos = 0
        self.last_line = line

    def _next(self, kind: str, what: str):
        if self.pos >= len(self.items):
            raise TextGridParseError(f"unexpected end of file, expected {what}", self.last_line)
        k, value, line = self.items[self.pos]
        if k != kind:
            raise TextGridParseError(f"expected {what}, found {k} {value!r}", line)
        self.pos += 1
        return value, line

    def string(self, what: str) -> str:
        return self._next("string", what)[0]

    def number(self, what: str) -> float:
        return self._next("number", what)[0]

    def count(self, what: str) -> int:
        value, line = self._next("number", what)
        if value != int(value) or value < 0:
            raise TextGridParseError(f"{what} must be a non-negative integer, got {value}", line)
        return int(value)

    def peek_flag(self) -> bool | None:
        if self.pos < len(self.items) and self.items[self.pos][0] == "flag":
            self.pos += 1
            return self.items[self.pos - 1][1]
        return None

    @property
    def line(self) -> int:
        return self.items[self.pos][2] if self.pos < len(self.items) else self.last_line


def decode_textgrid(data: bytes) -> str:
    """Decode TextGrid bytes: UTF-16 and UTF-8 BOMs are honoured, otherwise UTF-8."""
    if data.startswith((codecs.BOM_UTF16_LE, codecs.BOM_UTF16_BE)):
        return data.decode("utf-16")
    return data.decode("utf-8-sig")


def parse_textgrid(text: str | bytes) -> Alignment:
    """Parse a long- or short-form TextGrid into an :class:`Alignment`.

    Point tiers are skipped and noted in ``Alignment.warnings``.
    """
    if isinstance(text, bytes):
        text = decode_textgrid(text)
    text = text.lstrip("\ufeff")
    toks = _Tokens(text)

    if toks.string("file type") != "ooTextFile":
        raise TextGridParseError("missing 'ooTextFile' header", 1)
    if toks.string("object class") != "TextGrid":
        raise TextGridParseError("object class is not 'TextGrid'", toks.line)
    xmin = toks.number("xmin")
    xmax = toks.number("xmax")
    if xmin > xmax:
        raise TextGridParseError(f"xmin {xmin} > xmax {xmax}", toks.line)
    exists = toks.peek_flag()
    n_tiers = toks.count("tier count") if exists is not False else 0

    tiers, warnings = [], []
    for i in range(1, n_tiers + 1):
        tier_line = toks.line
        kind = toks.string(f"class of tier {i}")
        name = toks.string(f"name of tier {i}")
        t_min = toks.number(f"xmin of tier {i}")
        t_max = toks.number(f"xmax of tier {i}")
        if t_min < xmin - _TIME_EPS or t_max > xmax + _TIME_EPS or t_min > t_max:
            raise TextGridParseError(f"tier {name!r} bounds [{t_min}, {t_max}] outside [{xmin}, {xmax}]", tier_line)
        n = toks.count(f"size of tier {name!r}")
        if kind == "IntervalTier":
            intervals = []
            prev_end = t_min
            for _ in range(n):
                line = toks.line
                start = toks.number("interval xmin")
                end = toks.number("interval xmax")
                label = toks.string("interval text").strip()
                if not start < end or start < prev_end - _TIME_EPS or end > t_max + _TIME_EPS:
                    raise TextGridParseError(f"non-monotone interval [{start}, {end}] in tier {name!r}", line)
                intervals.append(Interval(start, end, label))
                prev_end = end
            tiers.append(IntervalTier(name, tuple(intervals)))
        elif kind == "TextTier":
            for _ in range(n):
                toks.number("point time")
                toks.string("point mark")
            warnings.append(f"point tier {name!r} skipped")
        else:
            raise TextGridParseError(f"unknown tier class {kind!r}", tier_line)
    return Alignment(tuple(tiers), xmin, xmax, tuple(warnings))


def read_textgrid(path: str | Path) -> Alignment:
    path = Path(path)
    try:
        return parse_textgrid(path.read_bytes())
    except TextGridParseError as exc:
        raise TextGridParseError(f"{path}: {exc}") from None


def _num(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _quote(s: str) -> str:
    return '"' + s.replace('"', '""') + '"'


def serialize_textgrid(alignment: Alignment, short: bool = False) -> str:
    """Render in Praat's long (default) or short text layout."""
    out = ['File type = "ooTextFile"', 'Object class = "TextGrid"', ""]
    tiers = alignment.tiers
    if short:
        out += [_num(alignment.xmin), _num(alignment.xmax), "<exists>", str(len(tiers))]
        for tier in tiers:
            out += ['"IntervalTier"', _quote(tier.name), _num(alignment.xmin), _num(alignment.xmax),
                    str(len(tier.intervals))]
            for iv in tier.intervals:
                out += [_num(iv.start), _num(iv.end), _quote(iv.label)]
    else:
        out += [f"xmin = {_num(alignment.xmin)} ", f"xmax = {_num(alignment.xmax)} ", "tiers? <exists> ",
                f"size = {len(tiers)} ", "item []: "]
        for i, tier in enumerate(tiers, 1):
            out += [
                f"    item [{i}]:",
                '        class = "IntervalTier" ',
                f"        name = {_quote(tier.name)} ",
                f"        xmin = {_num(alignment.xmin)} ",
                f"        xmax = {_num(alignment.xmax)} ",
                f"        intervals: size = {len(tier.intervals)} ",
            ]
            for j, iv in enumerate(tier.intervals, 1):
                out += [
                    f"        intervals [{j}]:",
                    f"            xmin = {_num(iv.start)} ",
                    f"            xmax = {_num(iv.end)} ",
                    f"            text = {_quote(iv.label)} ",
                ]
    return "\n".join(out) + "\n"


def write_textgrid(path: str | Path, alignment: Alignment, short: bool = False, encoding: str = "utf-8") -> None:
    Path(path).write_text(serialize_textgrid(alignment, short), encoding=encoding)


def extract_vowel_segments(
    alignment: Alignment,
    phone_tier: str = DEFAULT_PHONE_TIER,
    word_tier: str | None = None,
    label_map: Mapping[str, VowelCategory] = DEFAULT_LABEL_MAP,
    clip_ref: str = "",
) -> list[VowelSegment]:
    """Phone intervals whose label maps to a vowel category, in time order.

    With ``word_tier`` each segment carries the label of the word interval
    containing its midpoint.
    """
    phones = alignment.tier(phone_tier)
    words: Sequence[Interval] = alignment.tier(word_tier).intervals if word_tier else ()
    segments = []
    for iv in phones.intervals:
        vowel = label_map.get(iv.label)
        if vowel is None:
            continue
        word = None
        if word_tier:
            mid = 0.5 * (iv.start + iv.end)
            word = next((w.label for w in words if w.start <= mid <= w.end), None)
        segments.append(VowelSegment(vowel, iv.start, iv.end, word, clip_ref))
    return segments
