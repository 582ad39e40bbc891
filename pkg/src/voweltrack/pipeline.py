"""Per-checkpoint analysis: WAV + TextGrid pairs to vowel tokens and spaces."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .audio import read_wav
from .config import PipelineSettings
from .formant import track_formants
from .textgrid import extract_vowel_segments, read_textgrid
from .vowelspace import VowelSpace, VowelToken, build_space, measure_vowel

log = logging.getLogger(__name__)

TEXTGRID_SUFFIXES = (".textgrid",)


class ManifestError(ValueError):
    pass


@dataclass
class FileResult:
    stem: str
    tokens: list[VowelToken] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    error: str | None = None

    def log_record(self, step: int) -> str:
        rec = {"step": step, "stem": self.stem, "tokens": len(self.tokens), "warnings": self.warnings}
        if self.error:
            rec["error"] = self.error
        return json.dumps(rec, ensure_ascii=False, sort_keys=True)


@dataclass
class StepResult:
    step: int
    space: VowelSpace
    files: list[FileResult]
    unpaired: list[str]

    @property
    def n_tokens(self) -> int:
        return sum(len(f.tokens) for f in self.files)

    def log_lines(self) -> list[str]:
        lines = [f.log_record(self.step) for f in self.files]
        lines += [json.dumps({"step": self.step, "stem": s, "tokens": 0, "warnings": ["no matching TextGrid or WAV"]},
                             sort_keys=True) for s in self.unpaired]
        return lines


def pair_files(wav_dir: Path, textgrid_dir: Path) -> tuple[list[tuple[str, Path, Path]], list[str]]:
    """Match WAV and TextGrid files by stem; returns pairs and unmatched stems."""
    wavs = {p.stem: p for p in wav_dir.iterdir() if p.is_file() and p.suffix.lower() == ".wav"}
    grids = {p.stem: p for p in textgrid_dir.iterdir() if p.is_file() and p.suffix.lower() in TEXTGRID_SUFFIXES}
    pairs = [(s, wavs[s], grids[s]) for s in sorted(wavs.keys() & grids.keys())]
    unpaired = sorted(wavs.keys() ^ grids.keys())
    return pairs, unpaired


def analyze_pair(stem: str, wav_path: Path, tg_path: Path, step: int, settings: PipelineSettings) -> FileResult:
    """Vowel tokens for one utterance; failures are captured, not raised."""
    result = FileResult(stem)
    try:
        clip = read_wav(wav_path)
        alignment = read_textgrid(tg_path)
        result.warnings += alignment.warnings
        track = track_formants(clip, settings.formant)
        result.warnings += track.warnings
        segments = extract_vowel_segments(alignment, settings.phone_tier, settings.word_tier,
                                          settings.label_map, clip_ref=stem)
        for seg in segments:
            where = f"{seg.vowel.name} at {seg.start:.3f}-{seg.end:.3f} s"
            if seg.too_short:
                result.warnings.append(f"{where}: shorter than 30 ms")
            if seg.end > track.duration_s + 1e-6:
                result.warnings.append(f"{where}: beyond end of audio, skipped")
                continue
            measured = measure_vowel(track, seg, settings.strategy)
            if measured is None:
                result.warnings.append(f"{where}: no frame with two formants")
                continue
            tok = VowelToken(seg.vowel, measured[0], measured[1], step, f"{stem}@{seg.start:.3f}")
            if tok.out_of_range:
                result.warnings.append(f"{where}: F1={tok.f1_hz:.0f} F2={tok.f2_hz:.0f} Hz outside typical range")
            result.tokens.append(tok)
    except Exception as exc:  # per-file isolation; reported in the run log
        result.error = f"{type(exc).__name__}: {exc}"
        log.warning("%s: %s", stem, result.error)
    return result


def _analyze_star(args):
    return analyze_pair(*args)


def analyze_step(
    wav_dir: str | Path,
    textgrid_dir: str | Path,
    step: int,
    settings: PipelineSettings = PipelineSettings(),
    jobs: int = 1,
) -> StepResult:
    """Analyse every WAV/TextGrid pair of one checkpoint and build its vowel space."""
    wav_dir, textgrid_dir = Path(wav_dir), Path(textgrid_dir)
    for d in (wav_dir, textgrid_dir):
        if not d.is_dir():
            raise FileNotFoundError(f"step {step}: directory {d} does not exist")
    pairs, unpaired = pair_files(wav_dir, textgrid_dir)
    if not pairs:
        raise FileNotFoundError(f"step {step}: no WAV/TextGrid pairs in {wav_dir} and {textgrid_dir}")
    work = [(stem, w, t, step, settings) for stem, w, t in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            files = list(pool.map(_analyze_star, work))
    else:
        files = [analyze_pair(*w) for w in work]
    tokens = [t for f in files for t in f.tokens]
    return StepResult(step, build_space(tokens, step), files, unpaired)


@dataclass(frozen=True)
class ManifestEntry:
    step: int
    wav_dir: Path
    textgrid_dir: Path


def parse_manifest(text: str, base_dir: str | Path = ".") -> list[ManifestEntry]:
    """Read ``step<TAB>wav_dir<TAB>textgrid_dir`` lines; relative paths resolve against ``base_dir``."""
    base = Path(base_dir)
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\r\n").split("\t")
        if len(parts) != 3:
            raise ManifestError(f"manifest line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        try:
            step = int(parts[0])
        except ValueError:
            raise ManifestError(f"manifest line {lineno}: step {parts[0]!r} is not an integer") from None
        if step < 0:
            raise ManifestError(f"manifest line {lineno}: negative step {step}")
        entries.append(ManifestEntry(step, base / parts[1].strip(), base / parts[2].strip()))
    steps = [e.step for e in entries]
    if len(set(steps)) != len(steps):
        raise ManifestError(f"manifest has duplicate steps: {steps}")
    if steps != sorted(steps):
        raise ManifestError(f"manifest steps must be ascending, got {steps}")
    if not entries:
        raise ManifestError("manifest lists no checkpoints")
    return entries


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), path.parent)


def check_manifest(entries: Sequence[ManifestEntry]) -> None:
    for e in entries:
        for d in (e.wav_dir, e.textgrid_dir):
            if not d.is_dir():
                raise ManifestError(f"step {e.step}: directory {d} does not exist")
