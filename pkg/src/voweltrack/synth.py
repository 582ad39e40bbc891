"""Source-filter vowel synthesis for fixtures and demos.

An impulse train, rolled off like a voiced source, is shaped by cascaded
two-pole resonators, so the resonance frequencies of the output are known
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import signal

from .audio import AudioClip
from .textgrid import Alignment, IntervalTier
from .vowels import VowelCategory


def impulse_train(f0: float, duration: float, sample_rate: int) -> np.ndarray:
    n = int(round(duration * sample_rate))
    x = np.zeros(n)
    period = sample_rate / f0
    x[np.round(np.arange(0, n, period)).astype(int) % max(n, 1)] = 1.0
    return x


def source_rolloff(x: np.ndarray, corner_hz: float, sample_rate: int) -> np.ndarray:
    """One-pole low-pass: -6 dB/octave above ``corner_hz``.

    Approximates glottal roll-off (-12 dB/octave) combined with lip
    radiation (+6 dB/octave).
    """
    return signal.lfilter([1.0], [1.0, -np.exp(-2.0 * np.pi * corner_hz / sample_rate)], x)


def resonate(x: np.ndarray, freq: float, bandwidth: float, sample_rate: int) -> np.ndarray:
    """Unity-DC-gain digital resonator."""
    r = np.exp(-np.pi * bandwidth / sample_rate)
    b1 = 2.0 * r * np.cos(2.0 * np.pi * freq / sample_rate)
    b2 = -r * r
    return signal.lfilter([1.0 - b1 - b2], [1.0, -b1, -b2], x)


def synth_vowel(
    resonances: Sequence[tuple[float, float]],
    duration: float = 0.3,
    sample_rate: int = 16000,
    f0: float = 100.0,
    amplitude: float = 0.5,
    rolloff_hz: float | None = 100.0,
) -> np.ndarray:
    """Impulse train at ``f0`` through each (frequency, bandwidth) resonator in turn.

    ``rolloff_hz=None`` leaves the source spectrally flat.
    """
    y = impulse_train(f0, duration, sample_rate)
    if rolloff_hz is not None:
        y = source_rolloff(y, rolloff_hz, sample_rate)
    for freq, bw in resonances:
        y = resonate(y, freq, bw, sample_rate)
    peak = np.max(np.abs(y))
    return y * (amplitude / peak) if peak > 0 else y


# Bandwidths used for synthetic F1 and F2.
DEFAULT_BANDWIDTHS = (80.0, 90.0)


@dataclass(frozen=True)
class SynthWordList:
    clip: AudioClip
    alignment: Alignment


def synth_word_list(
    words: Sequence[VowelCategory],
    targets: Mapping[VowelCategory, tuple[float, float]],
    sample_rate: int = 16000,
    vowel_s: float = 0.2,
    gap_s: float = 0.1,
    f0: float = 110.0,
    source_path: str | None = None,
) -> SynthWordList:
    """Render an hVd word list as vowels separated by silence, with its alignment.

    The alignment follows the usual aligner layout: an ``ORT-MAU`` word tier
    and a ``MAU`` phone tier with X-SAMPA-style labels (``h``, vowel, ``d``).
    """
    from .vowels import DEFAULT_LABEL_MAP

    # First SAMPA spelling per category.
    sampa = {}
    for label, cat in DEFAULT_LABEL_MAP.items():
        sampa.setdefault(cat, label)

    pieces = [np.zeros(int(round(gap_s * sample_rate)))]
    words_iv, phones_iv = [], []
    t = gap_s
    h_s = d_s = gap_s / 4
    for cat in words:
        f1, f2 = targets[cat]
        vowel = synth_vowel([(f1, DEFAULT_BANDWIDTHS[0]), (f2, DEFAULT_BANDWIDTHS[1])],
                            vowel_s, sample_rate, f0)
        pieces += [vowel, np.zeros(int(round(gap_s * sample_rate)))]
        start, end = t, t + vowel_s
        words_iv.append((start - h_s, end + d_s, cat.hvd))
        phones_iv += [(start - h_s, start, "h"), (start, end, sampa[cat]), (end, end + d_s, "d")]
        t = end + gap_s
    samples = np.concatenate(pieces)
    total = samples.size / sample_rate

    def fill(intervals):
        out, cursor = [], 0.0
        for s, e, lab in intervals:
            if s > cursor:
                out.append((cursor, s, ""))
            out.append((s, e, lab))
            cursor = e
        if cursor < total:
            out.append((cursor, total, ""))
        return tuple(out)

    alignment = Alignment(
        (IntervalTier("ORT-MAU", fill(words_iv)), IntervalTier("MAU", fill(phones_iv))), 0.0, total
    )
    return SynthWordList(AudioClip(samples, sample_rate, source_path), alignment)
