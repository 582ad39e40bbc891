"""WAV input/output, resampling and pre-emphasis."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import signal

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_IEEE_FLOAT = 0x0003
WAVE_FORMAT_EXTENSIBLE = 0xFFFE

# Resampler quality floor: attenuation at and beyond the lower Nyquist.
STOPBAND_DB = 70.0
# Passband edge as a fraction of the lower Nyquist; the transition band fills the rest.
PASSBAND_FRACTION = 0.9


class WavFormatError(ValueError):
    """Malformed RIFF/WAVE structure."""


class UnsupportedFormatError(WavFormatError):
    """Well-formed WAVE file in an encoding we do not decode."""


@dataclass(frozen=True, eq=False)
class AudioClip:
    samples: np.ndarray
    sample_rate: int
    source_path: str | None = None

    def __post_init__(self):
        if int(self.sample_rate) != self.sample_rate or self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be a positive integer, got {self.sample_rate!r}")
        x = np.array(self.samples, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite")
        x.flags.writeable = False
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate

    def with_samples(self, samples, sample_rate: int | None = None) -> AudioClip:
        return AudioClip(samples, sample_rate or self.sample_rate, self.source_path)


def _iter_chunks(data: bytes):
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        name = cid.decode("latin-1")
        body = data[pos + 8:pos + 8 + size]
        if len(body) < size:
            # A truncated data chunk is common from interrupted writers; other chunks are fatal.
            if name != "data":
                raise WavFormatError(f"chunk {name!r} declares {size} bytes, only {len(body)} present")
        yield name, body
        pos += 8 + size + (size & 1)


def read_wav(path: str | Path) -> AudioClip:
    """Read a PCM16 or float32 WAV file, mixing multi-channel audio down to mono."""
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: missing RIFF/WAVE header in chunk 'RIFF'")

    fmt = None
    payload = None
    for name, body in _iter_chunks(data):
        if name == "fmt ":
            if len(body) < 16:
                raise WavFormatError(f"{path}: chunk 'fmt ' is {len(body)} bytes, need at least 16")
            fmt = struct.unpack_from("<HHIIHH", body)
            tag = fmt[0]
            if tag == WAVE_FORMAT_EXTENSIBLE:
                if len(body) < 40:
                    raise WavFormatError(f"{path}: chunk 'fmt ' too short for WAVE_FORMAT_EXTENSIBLE")
                (tag,) = struct.unpack_from("<H", body, 24)
                fmt = (tag,) + fmt[1:]
        elif name == "data":
            payload = body
    if fmt is None:
        raise WavFormatError(f"{path}: chunk 'fmt ' not found")
    if payload is None:
        raise WavFormatError(f"{path}: chunk 'data' not found")

    tag, channels, rate, _, block_align, bits = fmt
    if channels < 1:
        raise WavFormatError(f"{path}: chunk 'fmt ' declares {channels} channels")
    if tag == WAVE_FORMAT_PCM and bits == 16:
        dtype, scale = np.dtype("<i2"), 1.0 / 32768.0
    elif tag == WAVE_FORMAT_IEEE_FLOAT and bits == 32:
        dtype, scale = np.dtype("<f4"), 1.0
    else:
        raise UnsupportedFormatError(f"{path}: format tag {tag:#06x} with {bits} bits is not supported")
    if block_align != channels * dtype.itemsize:
        raise WavFormatError(f"{path}: chunk 'fmt ' block_align {block_align} inconsistent with {channels}x{bits} bits")

    n_frames = len(payload) // block_align
    raw = np.frombuffer(payload[:n_frames * block_align], dtype=dtype).astype(np.float64) * scale
    mono = raw.reshape(n_frames, channels).mean(axis=1)
    return AudioClip(mono, rate, str(path))


def write_wav(path: str | Path, clip: AudioClip, encoding: str = "pcm16") -> None:
    """Write a mono WAV file; encoding is ``pcm16`` or ``float32``."""
    if encoding == "pcm16":
        pcm = np.clip(np.round(clip.samples * 32768.0), -32768, 32767).astype("<i2")
        tag, bits = WAVE_FORMAT_PCM, 16
    elif encoding == "float32":
        pcm = clip.samples.astype("<f4")
        tag, bits = WAVE_FORMAT_IEEE_FLOAT, 32
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    body = pcm.tobytes()
    block = bits // 8
    fmt = struct.pack("<HHIIHH", tag, 1, clip.sample_rate, clip.sample_rate * block, block, bits)
    out = b"".join([
        b"RIFF", struct.pack("<I", 4 + 8 + len(fmt) + 8 + len(body) + (len(body) & 1)), b"WAVE",
        b"fmt ", struct.pack("<I", len(fmt)), fmt,
        b"data", struct.pack("<I", len(body)), body, b"\0" * (len(body) & 1),
    ])
    Path(path).write_bytes(out)


@lru_cache(maxsize=32)
def _antialias_filter(up: int, source_rate: int, target_rate: int) -> np.ndarray:
    fs = source_rate * up  # rate of the zero-stuffed intermediate signal
    low_nyq = min(source_rate, target_rate) / 2.0
    width = (1.0 - PASSBAND_FRACTION) * low_nyq
    numtaps, beta = signal.kaiserord(STOPBAND_DB, width / (fs / 2.0))
    numtaps |= 1
    cutoff = low_nyq - width / 2.0
    return signal.firwin(numtaps, cutoff, window=("kaiser", beta), fs=fs)  # resample_poly applies the gain of up


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    """Kaiser-windowed-sinc polyphase resampling to ``target_rate``.

    Everything at or above the lower of the two Nyquist frequencies is
    attenuated by at least ``STOPBAND_DB``.
    """
    if target_rate <= 0 or int(target_rate) != target_rate:
        raise ValueError(f"target_rate must be a positive integer, got {target_rate!r}")
    target_rate = int(target_rate)
    if target_rate == clip.sample_rate:
        return clip
    ratio = Fraction(target_rate, clip.sample_rate)
    up, down = ratio.numerator, ratio.denominator
    h = _antialias_filter(up, clip.sample_rate, target_rate)
    if clip.samples.size == 0:
        return clip.with_samples([], target_rate)
    y = signal.resample_poly(clip.samples, up, down, window=h)
    return clip.with_samples(y, target_rate)


def preemphasis_coefficient(from_hz: float, sample_rate: float) -> float:
    return float(np.exp(-2.0 * np.pi * from_hz / sample_rate))


def preemphasize(clip: AudioClip, from_hz: float = 50.0) -> AudioClip:
    """First-order pre-emphasis ``y[n] = x[n] - a*x[n-1]``.

    The first sample is treated as if preceded by itself, giving
    ``y[0] = x[0] * (1 - a)`` rather than an onset spike.
    """
    if from_hz < 0:
        raise ValueError(f"from_hz must be >= 0, got {from_hz}")
    a = preemphasis_coefficient(from_hz, clip.sample_rate)
    x = clip.samples
    if x.size == 0:
        return clip
    y = np.empty_like(x)
    y[0] = x[0] * (1.0 - a)
    y[1:] = x[1:] - a * x[:-1]
    return clip.with_samples(y)
