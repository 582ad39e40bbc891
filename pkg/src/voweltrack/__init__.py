"""Vowel-space evaluation of speech-synthesis training checkpoints."""

from .audio import AudioClip, preemphasize, read_wav, resample, write_wav
from .formant import FormantConfig, FormantTrack, burg, lpc_to_formants, track_formants
from .perception import aggregate_likert, generate_stimulus_sentences, generate_word_lists
from .textgrid import Alignment, IntervalTier, VowelSegment, extract_vowel_segments, parse_textgrid
from .vowels import CHECKPOINT_STEPS, VowelCategory
from .vowelspace import (
    Trajectory,
    VowelSpace,
    VowelToken,
    build_space,
    convergence_curve,
    distance_to_reference,
    hull_area,
    measure_vowel,
    point_vowels,
)

__version__ = "0.1.0"
