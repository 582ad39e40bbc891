"""Perception-test materials and Likert response aggregation."""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .vowels import HVD_WORDS, CHECKPOINT_STEPS, VowelCategory

N_LEVELS = 5
LIKERT_LABELS = (
    "Not at all like this accent",
    "Slightly like this accent",
    "Somewhat like this accent",
    "Mainly this accent",
    "Completely this accent",
)
PLACEHOLDER = "{word}"
DEFAULT_CARRIER = "Say the word {word} again"

# Two test words per accent-marked vowel: the lexical-set keyword and its hVd word.
STIMULUS_WORDS: dict[VowelCategory, tuple[str, str]] = {
    VowelCategory.LOT: ("lot", "hod"),
    VowelCategory.KIT: ("kit", "hid"),
    VowelCategory.TRAP: ("trap", "had"),
    VowelCategory.DRESS: ("dress", "head"),
    VowelCategory.START: ("start", "hard"),
    VowelCategory.NURSE: ("nurse", "heard"),
    VowelCategory.GOOSE: ("goose", "who'd"),
    VowelCategory.FLEECE: ("fleece", "heed"),
}

RESPONSE_COLUMNS = ("participant", "step", "sentence", "accent", "rating")
AGGREGATE_COLUMNS = ("step", "accent", "p0", "p1", "p2", "p3", "p4", "n")


class TemplateError(ValueError):
    pass


class LikertValidationError(ValueError):
    pass


class Accent(str, Enum):
    GAE = "GAE"
    NZE = "NZE"
    AusE = "AusE"
    CanE = "CanE"


@dataclass(frozen=True)
class WordList:
    index: int
    words: tuple[str, ...]

    @property
    def rendered(self) -> str:
        return render_word_list(self.words)


def render_word_list(words: Sequence[str]) -> str:
    return "...".join(words) + "."


def generate_word_lists(n_lists: int, seed: int, extra_words: Sequence[str] = ()) -> list[WordList]:
    """Seeded random orderings of the 11 hVd words.

    ``extra_words`` are shuffled in alongside the 11 (for lists that repeat
    anchor words). Lists are pairwise distinct whenever enough orderings
    exist.
    """
    if n_lists < 1:
        raise ValueError("n_lists must be >= 1")
    for w in extra_words:
        if w not in HVD_WORDS:
            raise ValueError(f"{w!r} is not an hVd word")
    pool = list(HVD_WORDS) + list(extra_words)
    distinct_limit = math.factorial(len(pool))
    for w in set(pool):
        distinct_limit //= math.factorial(pool.count(w))
    rng = random.Random(seed)
    seen: set[tuple[str, ...]] = set()
    lists = []
    while len(lists) < n_lists:
        order = tuple(rng.sample(pool, len(pool)))
        if order in seen and len(seen) < distinct_limit:
            continue
        seen.add(order)
        lists.append(WordList(len(lists) + 1, order))
    return lists


def generate_stimulus_sentences(words: Iterable[str], carrier: str = DEFAULT_CARRIER) -> list[str]:
    """Substitute each word into the carrier's single ``{word}`` slot."""
    n = carrier.count(PLACEHOLDER)
    if n != 1:
        raise TemplateError(f"carrier must contain exactly one {PLACEHOLDER} placeholder, found {n}")
    return [carrier.replace(PLACEHOLDER, w) for w in words]


@dataclass(frozen=True)
class Stimulus:
    step: int
    vowel: VowelCategory
    sentence: str


def perception_test_sentences(
    steps: Sequence[int] = CHECKPOINT_STEPS,
    words: dict[VowelCategory, tuple[str, ...]] = STIMULUS_WORDS,
    carrier: str = DEFAULT_CARRIER,
) -> list[Stimulus]:
    """Every test word in the carrier, once per checkpoint."""
    out = []
    for step in steps:
        for vowel, ws in words.items():
            out += [Stimulus(step, vowel, s) for s in generate_stimulus_sentences(ws, carrier)]
    return out


@dataclass(frozen=True)
class LikertResponse:
    participant: str
    step: int
    sentence: str
    accent: Accent
    rating: int


@dataclass(frozen=True)
class AccentAggregate:
    step: int
    accent: Accent
    proportions: tuple[float, ...]
    n: int

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(round(p * self.n) for p in self.proportions)


def bin_continuous_rating(value: float) -> int:
    """Map a slider position in [0, 1] to one of the five Likert bands."""
    if not 0.0 <= value <= 1.0:
        raise LikertValidationError(f"continuous rating {value} outside [0, 1]")
    return min(int(value * N_LEVELS), N_LEVELS - 1)


def aggregate_likert(responses: Iterable[LikertResponse]) -> list[AccentAggregate]:
    """Rating proportions per (step, accent), ordered by step then accent."""
    accent_order = {a: i for i, a in enumerate(Accent)}
    counts: dict[tuple[int, Accent], list[int]] = {}
    for i, r in enumerate(responses):
        if isinstance(r.rating, bool) or r.rating not in range(N_LEVELS):
            raise LikertValidationError(
                f"response {i} (participant {r.participant!r}, sentence {r.sentence!r}): "
                f"rating {r.rating!r} outside 0..{N_LEVELS - 1}"
            )
        if not isinstance(r.accent, Accent):
            raise LikertValidationError(f"response {i}: unknown accent {r.accent!r}")
        counts.setdefault((r.step, r.accent), [0] * N_LEVELS)[r.rating] += 1
    out = []
    for (step, accent), c in sorted(counts.items(), key=lambda kv: (kv[0][0], accent_order[kv[0][1]])):
        n = sum(c)
        out.append(AccentAggregate(step, accent, tuple(k / n for k in c), n))
    return out


def parse_responses_csv(text: str, continuous: bool = False) -> list[LikertResponse]:
    """Read ``participant,step,sentence,accent,rating`` rows.

    With ``continuous`` the rating column holds slider positions in [0, 1].
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or set(RESPONSE_COLUMNS) - set(reader.fieldnames):
        raise LikertValidationError(f"responses CSV must have columns {','.join(RESPONSE_COLUMNS)}")
    out = []
    for line, row in enumerate(reader, 2):
        try:
            accent = Accent(row["accent"].strip())
        except ValueError:
            raise LikertValidationError(f"line {line}: unknown accent {row['accent']!r}") from None
        try:
            raw = row["rating"].strip()
            rating = bin_continuous_rating(float(raw)) if continuous else int(raw)
            step = int(row["step"])
        except LikertValidationError as exc:
            raise LikertValidationError(f"line {line}: {exc}") from None
        except ValueError:
            raise LikertValidationError(f"line {line}: non-numeric step or rating") from None
        if not 0 <= rating < N_LEVELS:
            raise LikertValidationError(f"line {line}: rating {rating} outside 0..{N_LEVELS - 1}")
        out.append(LikertResponse(row["participant"], step, row["sentence"], accent, rating))
    return out


def read_responses_csv(path: str | Path, continuous: bool = False) -> list[LikertResponse]:
    return parse_responses_csv(Path(path).read_text(encoding="utf-8"), continuous)


def aggregates_csv(aggregates: Iterable[AccentAggregate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGGREGATE_COLUMNS)
    for a in aggregates:
        w.writerow([a.step, a.accent.value, *(f"{p:.6f}" for p in a.proportions), a.n])
    return buf.getvalue()
