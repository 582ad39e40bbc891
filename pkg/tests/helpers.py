"""Shared fixture builders for the test suite."""

from pathlib import Path

import numpy as np

from voweltrack.audio import write_wav
from voweltrack.perception import generate_word_lists
from voweltrack.synth import synth_word_list
from voweltrack.textgrid import write_textgrid
from voweltrack.vowels import VowelCategory as V

# Plausible adult female NZE targets (Hz); KIT centralised, DRESS/TRAP raised, GOOSE fronted.
NZE_TARGETS = {
    V.FLEECE: (350.0, 2550.0),
    V.KIT: (500.0, 1900.0),
    V.DRESS: (420.0, 2450.0),
    V.TRAP: (560.0, 2200.0),
    V.START: (850.0, 1450.0),
    V.STRUT: (820.0, 1500.0),
    V.LOT: (640.0, 1050.0),
    V.THOUGHT: (420.0, 850.0),
    V.FOOT: (450.0, 1350.0),
    V.GOOSE: (370.0, 2050.0),
    V.NURSE: (480.0, 1800.0),
}


def write_word_list_corpus(root: Path, n_lists: int = 5, seed: int = 3, targets=NZE_TARGETS) -> tuple[Path, Path]:
    """Synthesise ``n_lists`` shuffled hVd word lists with alignments under ``root``.

    Each list is read at its own f0, as separate recordings would be.
    """
    wav_dir, tg_dir = root / "wav", root / "tg"
    wav_dir.mkdir(parents=True, exist_ok=True)
    tg_dir.mkdir(parents=True, exist_ok=True)
    for wl in generate_word_lists(n_lists, seed):
        synth = synth_word_list([V.from_hvd(w) for w in wl.words], targets, f0=95.0 + 10.0 * wl.index)
        write_wav(wav_dir / f"list{wl.index}.wav", synth.clip)
        write_textgrid(tg_dir / f"list{wl.index}.TextGrid", synth.alignment)
    return wav_dir, tg_dir


def simulate_ar(coefficients, n: int, seed: int, burn_in: int = 1000) -> np.ndarray:
    """Direct recursion x[n] = sum a_k x[n-k] + e[n] with unit Gaussian noise."""
    rng = np.random.default_rng(seed)
    a = np.asarray(coefficients, dtype=float)
    p = a.size
    e = rng.standard_normal(n + burn_in)
    x = np.zeros(n + burn_in)
    for i in range(n + burn_in):
        past = x[max(i - p, 0):i][::-1]
        x[i] = e[i] + np.dot(a[: past.size], past)
    return x[burn_in:]


def linear_trajectory_spaces(targets, start_offset, steps):
    """Spaces moving linearly from ``targets + start_offset`` to ``targets``.

    ``start_offset`` maps vowel -> (dF1, dF2); at step s the offset is
    scaled by ``1 - s / steps[-1]``.
    """
    from voweltrack.vowelspace import VowelSpace

    last = steps[-1]
    spaces = []
    for s in steps:
        frac = 1.0 - s / last
        means = {v: (f1 + frac * start_offset[v][0], f2 + frac * start_offset[v][1]) for v, (f1, f2) in targets.items()}
        spaces.append(VowelSpace.from_means(s, means))
    return spaces


def converging_targets(step: int, last: int, centre=(550.0, 1600.0), pull=0.8):
    """NZE targets pulled toward a central vowel, released linearly by ``last``."""
    frac = pull * (1.0 - step / last)
    return {v: (f1 + frac * (centre[0] - f1), f2 + frac * (centre[1] - f2)) for v, (f1, f2) in NZE_TARGETS.items()}
