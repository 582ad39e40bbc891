"""NZE monophthong inventory, keyed by Wells lexical set."""

from __future__ import annotations

import enum
from pathlib import Path
from typing import Mapping

# Acoustic plausibility bands for adult speech (Hz).
F1_RANGE = (200.0, 900.0)
F2_RANGE = (600.0, 2600.0)

# Checkpoints evaluated during fine-tuning, in steps past the pre-trained model.
CHECKPOINT_STEPS = (0, 1000, 3000, 7000, 10000, 16000, 20000, 28000)


class VowelCategory(enum.Enum):
    """One of the 11 NZE monophthongs.

    Each member carries its IPA symbol, the hVd carrier word and whether
    the vowel is one of those most different between GAE and NZE.
    """

    STRUT = ("ʌ", "hud", False)
    LOT = ("ɒ", "hod", True)
    KIT = ("ɪ", "hid", True)
    TRAP = ("æ", "had", True)
    FOOT = ("ʊ", "hood", False)
    DRESS = ("e", "head", True)
    START = ("ɑː", "hard", True)
    NURSE = ("ɜː", "heard", True)
    GOOSE = ("ʉː", "who'd", True)
    THOUGHT = ("oː", "horde", False)
    FLEECE = ("iː", "heed", True)

    def __init__(self, ipa: str, hvd: str, accent_marked: bool):
        self.ipa = ipa
        self.hvd = hvd
        self.accent_marked = accent_marked

    @classmethod
    def from_name(cls, name: str) -> VowelCategory:
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown vowel category {name!r}") from None

    @classmethod
    def from_hvd(cls, word: str) -> VowelCategory:
        for v in cls:
            if v.hvd == word:
                return v
        raise ValueError(f"{word!r} is not an hVd word")


HVD_WORDS = tuple(v.hvd for v in VowelCategory)
NZE_POINT_VOWELS = frozenset({VowelCategory.FLEECE, VowelCategory.THOUGHT, VowelCategory.START})
GAE_POINT_VOWELS = frozenset(
    {VowelCategory.FLEECE, VowelCategory.TRAP, VowelCategory.START, VowelCategory.GOOSE}
)

_V = VowelCategory
# SAMPA/X-SAMPA spellings as emitted by aligners, then IPA with both length marks.
DEFAULT_LABEL_MAP: dict[str, VowelCategory] = {
    "V": _V.STRUT, "6": _V.STRUT, "ʌ": _V.STRUT, "ɐ": _V.STRUT,
    "Q": _V.LOT, "ɒ": _V.LOT,
    "I": _V.KIT, "ɪ": _V.KIT, "ə": _V.KIT, "@": _V.KIT,
    "{": _V.TRAP, "æ": _V.TRAP,
    "U": _V.FOOT, "ʊ": _V.FOOT,
    "e": _V.DRESS, "E": _V.DRESS, "ɛ": _V.DRESS,
    "A:": _V.START, "6:": _V.START, "a:": _V.START,
    "ɑː": _V.START, "ɑ:": _V.START, "ɐː": _V.START, "ɐ:": _V.START,
    "3:": _V.NURSE, "2:": _V.NURSE, "ɜː": _V.NURSE, "ɜ:": _V.NURSE, "øː": _V.NURSE, "ø:": _V.NURSE,
    "u:": _V.GOOSE, "}:": _V.GOOSE, "ʉː": _V.GOOSE, "ʉ:": _V.GOOSE, "uː": _V.GOOSE,
    "O:": _V.THOUGHT, "o:": _V.THOUGHT, "oː": _V.THOUGHT, "ɔː": _V.THOUGHT, "ɔ:": _V.THOUGHT,
    "i:": _V.FLEECE, "iː": _V.FLEECE,
}
del _V


def parse_label_map(text: str) -> dict[str, VowelCategory]:
    """Parse ``phone_label = CATEGORY`` lines; lines starting with ``#`` are comments."""
    mapping: dict[str, VowelCategory] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, name = line.rpartition("=")
        label = label.strip()
        if not sep or not label:
            raise ValueError(f"label map line {lineno}: expected 'label = CATEGORY', got {raw!r}")
        try:
            mapping[label] = VowelCategory.from_name(name)
        except ValueError as exc:
            raise ValueError(f"label map line {lineno}: {exc}") from None
    return mapping


def load_label_map(path: str | Path) -> dict[str, VowelCategory]:
    return parse_label_map(Path(path).read_text(encoding="utf-8"))


def label_map_lines(mapping: Mapping[str, VowelCategory]) -> str:
    return "".join(f"{label} = {cat.name}\n" for label, cat in mapping.items())
