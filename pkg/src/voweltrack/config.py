"""Flat ``key = value`` configuration files.

Keys are the field names of :class:`FormantConfig`, :class:`PlotOptions`
and :class:`PipelineSettings`. Ranges and palettes are comma separated.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .formant import FormantConfig
from .textgrid import DEFAULT_PHONE_TIER, DEFAULT_WORD_TIER
from .viz import PlotOptions
from .vowels import DEFAULT_LABEL_MAP, VowelCategory, load_label_map
from .vowelspace import Strategy


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineSettings:
    formant: FormantConfig = FormantConfig()
    plot: PlotOptions = PlotOptions()
    phone_tier: str = DEFAULT_PHONE_TIER
    word_tier: str | None = DEFAULT_WORD_TIER
    strategy: Strategy = Strategy.MIDDLE_HALF_MEAN
    label_map: Mapping[str, VowelCategory] = field(default_factory=lambda: dict(DEFAULT_LABEL_MAP))


_BOOL = {"true": True, "yes": True, "1": True, "on": True, "false": False, "no": False, "0": False, "off": False}


def _convert(key: str, raw: str, current: Any) -> Any:
    raw = raw.strip()
    try:
        if key == "max_bandwidth_hz":
            return None if raw.lower() in ("", "none", "off") else float(raw)
        if key == "word_tier":
            return None if raw.lower() in ("", "none") else raw
        if isinstance(current, bool):
            return _BOOL[raw.lower()]
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
        if key in ("f1_range", "f2_range"):
            lo, hi = (float(p) for p in raw.split(","))
            return (lo, hi)
        if key == "palette":
            return tuple(p.strip() for p in raw.split(",") if p.strip())
        if key == "strategy":
            return Strategy(raw)
        if key == "margins":
            return tuple(int(p) for p in raw.split(","))
        return raw
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config(text: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {line!r}")
        out[key.strip()] = value.strip()
    return out


def build_settings(values: Mapping[str, str], base: PipelineSettings = PipelineSettings()) -> PipelineSettings:
    """Apply raw string settings to ``base``; unknown keys are rejected."""
    formant_keys = {f.name for f in dataclasses.fields(FormantConfig)}
    plot_keys = {f.name for f in dataclasses.fields(PlotOptions)}
    top_keys = {"phone_tier", "word_tier", "strategy", "label_map"}
    formant_kw, plot_kw, top_kw = {}, {}, {}
    for key, raw in values.items():
        if key in formant_keys:
            formant_kw[key] = _convert(key, raw, getattr(base.formant, key))
        elif key in plot_keys:
            plot_kw[key] = _convert(key, raw, getattr(base.plot, key))
        elif key == "label_map":
            top_kw[key] = load_label_map(raw)
        elif key in top_keys:
            top_kw[key] = _convert(key, raw, getattr(base, key))
        else:
            raise ConfigError(f"unknown config key {key!r}")
    try:
        return dataclasses.replace(
            base,
            formant=dataclasses.replace(base.formant, **formant_kw),
            plot=dataclasses.replace(base.plot, **plot_kw),
            **top_kw,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_settings(path: str | Path | None, overrides: Mapping[str, str] = {}) -> PipelineSettings:
    values = parse_config(Path(path).read_text(encoding="utf-8")) if path else {}
    values.update(overrides)
    return build_settings(values)
