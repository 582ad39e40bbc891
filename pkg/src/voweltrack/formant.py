"""Burg linear prediction and LPC-root formant tracking."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .audio import AudioClip, preemphasize, resample

# Formants closer than this to DC or to the analysis Nyquist are discarded.
EDGE_HZ = 50.0
# Keeps the lattice strictly stable when forward and backward errors coincide exactly.
_MAX_REFLECTION = 1.0 - 1e-12
# Stages past this relative error only fit rounding noise.
_ENERGY_FLOOR = np.finfo(np.float64).eps
# Pulls every pole inward by this factor so rounding in the step-up cannot push
# a near-circle pole outside; widens bandwidths by well under 0.01 Hz.
_POLE_CONTRACTION = 1.0 - 1e-6


class FormantError(ArithmeticError):
    """Numerical failure while converting predictor coefficients to formants."""


@dataclass(frozen=True)
class FormantConfig:
    max_formant_hz: float = 5500.0
    n_formants: int = 5
    window_s: float = 0.025
    time_step_s: float = 0.00625
    preemph_from_hz: float = 50.0
    # Poles broader than this model spectral tilt, not resonances; None keeps all.
    max_bandwidth_hz: float | None = 600.0

    def __post_init__(self):
        if self.max_formant_hz <= 0:
            raise ValueError("max_formant_hz must be > 0")
        if int(self.n_formants) != self.n_formants or self.n_formants < 1:
            raise ValueError("n_formants must be an integer >= 1")
        if self.window_s <= 0 or self.time_step_s <= 0:
            raise ValueError("window_s and time_step_s must be > 0")
        if self.preemph_from_hz < 0:
            raise ValueError("preemph_from_hz must be >= 0")
        if self.max_bandwidth_hz is not None and self.max_bandwidth_hz <= 0:
            raise ValueError("max_bandwidth_hz must be > 0 or None")

    @property
    def analysis_rate(self) -> int:
        return int(round(2 * self.max_formant_hz))

    @property
    def lpc_order(self) -> int:
        return 2 * int(self.n_formants)


@dataclass(frozen=True)
class Formant:
    frequency: float
    bandwidth: float


@dataclass(frozen=True)
class FormantFrame:
    time_s: float
    formants: tuple[Formant, ...]

    def frequency(self, n: int) -> float | None:
        """Frequency of formant ``n`` (1-based), or None when absent."""
        return self.formants[n - 1].frequency if 0 < n <= len(self.formants) else None


@dataclass(frozen=True)
class FormantTrack:
    frames: tuple[FormantFrame, ...]
    config: FormantConfig
    clip_ref: str = ""
    duration_s: float = 0.0
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def times(self) -> np.ndarray:
        return np.array([f.time_s for f in self.frames])

    def to_csv(self) -> str:
        """Per-frame dump: ``time_s,f1_hz,b1_hz,...`` with blanks for missing formants."""
        n = self.config.n_formants
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time_s"] + [f"{k}{i}_hz" for i in range(1, n + 1) for k in ("f", "b")])
        for frame in self.frames:
            row = [f"{frame.time_s:.6f}"]
            for i in range(n):
                if i < len(frame.formants):
                    fm = frame.formants[i]
                    row += [f"{fm.frequency:.3f}", f"{fm.bandwidth:.3f}"]
                else:
                    row += ["", ""]
            w.writerow(row)
        return buf.getvalue()


def burg(frame: Sequence[float], order: int) -> tuple[np.ndarray, float]:
    """Fit an autoregressive predictor with Burg's forward-backward lattice.

    Parameters
    ----------
    frame : sequence of float
        Samples to model; length must exceed ``order``.
    order : int
        Number of predictor coefficients.

    Returns
    -------
    coefficients : ndarray, shape (order,)
        ``a[k-1]`` such that ``x[n] ~ sum_k a[k-1] * x[n-k]``.
    residual_energy : float
        Mean-square prediction error, starting from the frame's mean square
        and shrinking by ``1 - k**2`` per reflection coefficient ``k``.

    Once the error falls to rounding level the remaining coefficients stay
    zero, and all poles are scaled by a factor just under one.
    """
    x = np.asarray(frame, dtype=np.float64)
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    if order >= x.size:
        raise ValueError(f"order {order} needs more than {x.size} samples")

    energy = float(np.dot(x, x) / x.size) if x.size else 0.0
    floor = energy * _ENERGY_FLOOR
    # Error filter A(z) = 1 + sum c[k] z^-(k+1); prediction coefficients are -c.
    c = np.zeros(0)
    ef = x[1:].copy()
    eb = x[:-1].copy()
    for _ in range(order):
        den = np.dot(ef, ef) + np.dot(eb, eb)
        if den <= 0.0 or energy <= floor:
            break
        k = -2.0 * np.dot(ef, eb) / den
        k = min(max(k, -_MAX_REFLECTION), _MAX_REFLECTION)
        c = np.concatenate([c + k * c[::-1], [k]])
        energy *= 1.0 - k * k
        ef, eb = ef[1:] + k * eb[1:], eb[:-1] + k * ef[:-1]

    coefficients = np.zeros(order)
    coefficients[:c.size] = -c * _POLE_CONTRACTION ** np.arange(1, c.size + 1)
    return coefficients, energy


def _companion_roots(coefficients: np.ndarray) -> np.ndarray:
    """Roots of ``z^p - a1 z^(p-1) - ... - ap`` as companion-matrix eigenvalues."""
    p = coefficients.size
    companion = np.zeros((p, p))
    companion[0, :] = coefficients
    companion[np.arange(1, p), np.arange(p - 1)] = 1.0
    try:
        # LAPACK geev balances the matrix before the QR iteration.
        return np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as exc:
        raise FormantError(f"root finding did not converge for degree-{p} polynomial") from exc


def lpc_to_formants(coefficients: Sequence[float], sample_rate: float) -> list[Formant]:
    """Resonances of the all-pole model ``1 / (1 - sum a_k z^-k)``, ascending by frequency."""
    a = np.asarray(coefficients, dtype=np.float64)
    if a.size == 0:
        return []
    if not np.all(np.isfinite(a)):
        raise FormantError(f"non-finite coefficients in degree-{a.size} polynomial")
    nyquist = sample_rate / 2.0
    out = []
    for r in _companion_roots(a):
        mag = abs(r)
        if r.imag <= 0 or not 0.0 < mag < 1.0:
            continue
        freq = math.atan2(r.imag, r.real) * sample_rate / (2 * math.pi)
        if freq <= EDGE_HZ or freq >= nyquist - EDGE_HZ:
            continue
        out.append(Formant(freq, -math.log(mag) * sample_rate / math.pi))
    out.sort(key=lambda f: f.frequency)
    return out


def gaussian_window(n: int) -> np.ndarray:
    """Gaussian taper reaching zero at both ends, ``exp(-12)`` edge subtracted."""
    if n < 2:
        return np.ones(n)
    mid = 0.5 * (n + 1)
    i = np.arange(1, n + 1)
    edge = math.exp(-12.0)
    return (np.exp(-48.0 * (i - mid) ** 2 / (n + 1) ** 2) - edge) / (1.0 - edge)


def frame_times(duration: float, window_duration: float, time_step: float) -> np.ndarray:
    """Centres of analysis frames spread symmetrically over the clip."""
    if duration < window_duration:
        return np.zeros(0)
    n = int(math.floor((duration - window_duration) / time_step + 1e-9)) + 1
    t1 = 0.5 * (duration - (n - 1) * time_step)
    return t1 + time_step * np.arange(n)


def track_formants(clip: AudioClip, config: FormantConfig = FormantConfig()) -> FormantTrack:
    """Per-frame formant estimates for a clip.

    The clip is resampled to twice the formant ceiling and pre-emphasised;
    each Gaussian-windowed frame (physical length ``2 * window_s``) is fitted
    with a Burg predictor of order ``2 * n_formants`` whose roots give the
    formants. Candidates broader than ``max_bandwidth_hz`` are dropped and
    at most ``n_formants`` are kept per frame.
    """
    if len(clip) == 0:
        raise ValueError("cannot track formants of an empty clip")
    ref = clip.source_path or ""
    sound = preemphasize(resample(clip, config.analysis_rate), config.preemph_from_hz)
    fs = sound.sample_rate
    x = sound.samples

    window_duration = 2.0 * config.window_s
    times = frame_times(clip.duration, window_duration, config.time_step_s)
    if times.size == 0:
        msg = f"clip of {clip.duration:.4f} s is shorter than one {window_duration:.4f} s analysis window"
        return FormantTrack((), config, ref, clip.duration, (msg,))

    n_win = int(round(window_duration * fs))
    n_win += 1 - n_win % 2
    half = n_win // 2
    window = gaussian_window(n_win)
    order = config.lpc_order
    padded = np.concatenate([np.zeros(half), x, np.zeros(half + 1)])

    frames = []
    for t in times:
        centre = int(round(t * fs))
        seg = padded[centre:centre + n_win] * window
        coeffs, _ = burg(seg, order)
        found = lpc_to_formants(coeffs, fs)
        if config.max_bandwidth_hz is not None:
            found = [f for f in found if f.bandwidth <= config.max_bandwidth_hz]
        found = found[: config.n_formants]
        frames.append(FormantFrame(float(t), tuple(found)))
    return FormantTrack(tuple(frames), config, ref, clip.duration)
