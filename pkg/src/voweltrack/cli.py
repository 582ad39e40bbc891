"""Command-line entry point: ``voweltrack {analyze,trajectory,stimuli,likert}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import perception, viz
from .config import ConfigError, PipelineSettings, load_settings
from .pipeline import ManifestError, analyze_step, check_manifest, read_manifest
from .vowels import CHECKPOINT_STEPS
from .vowelspace import (
    Trajectory,
    convergence_csv,
    convergence_curve,
    read_reference_csv,
    space_csv,
)

log = logging.getLogger("voweltrack")

EXIT_OK = 0
EXIT_FAIL = 1


def runlog_path(out: Path) -> Path:
    return out.with_name(out.stem + ".runlog.jsonl")


def _write(path: str | Path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _settings(args) -> PipelineSettings:
    overrides = {}
    for key in ("max_formant_hz", "strategy", "phone_tier", "word_tier", "label_map", "label_mode"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = str(value)
    if getattr(args, "show_hull", False):
        overrides["show_hull"] = "true"
    return load_settings(args.config, overrides)


def cmd_analyze(args) -> int:
    settings = _settings(args)
    out = Path(args.out)
    try:
        result = analyze_step(args.wav_dir, args.textgrid_dir, args.step, settings, args.jobs)
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    runlog_path(out).write_text("\n".join(result.log_lines()) + "\n", encoding="utf-8")
    for stem in result.unpaired:
        log.warning("%s: no matching WAV/TextGrid, skipped", stem)
    if not result.space.points:
        log.warning("step %d: no vowel tokens extracted, nothing written to %s", args.step, out)
        return EXIT_FAIL
    _write(out, space_csv([result.space]))
    log.info("step %d: %d tokens, %d vowels -> %s", args.step, result.n_tokens, len(result.space.points), out)
    return EXIT_OK


def cmd_trajectory(args) -> int:
    settings = _settings(args)
    try:
        entries = read_manifest(args.manifest)
        check_manifest(entries)
    except (ManifestError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    reference = read_reference_csv(args.reference) if args.reference else None

    spaces, log_lines = [], []
    for entry in entries:
        try:
            result = analyze_step(entry.wav_dir, entry.textgrid_dir, entry.step, settings, args.jobs)
        except FileNotFoundError as exc:
            log.error("%s", exc)
            return EXIT_FAIL
        log_lines += result.log_lines()
        if result.space.points:
            spaces.append(result.space)
        else:
            log.warning("step %d: no vowel tokens, left out of the trajectory", entry.step)
    if not spaces:
        log.error("no checkpoint produced vowel tokens")
        return EXIT_FAIL

    trajectory = Trajectory(tuple(spaces), reference)
    for note in trajectory.warnings:
        log.warning("%s", note)
    out_svg, out_csv = Path(args.out_svg), Path(args.out_csv)
    curve = convergence_curve(trajectory, require_reference=False)
    runlog_path(out_csv).write_text("\n".join(log_lines) + "\n", encoding="utf-8")
    _write(out_csv, convergence_csv(curve))
    _write(out_svg, viz.render_vowel_space_svg(trajectory, settings.plot))
    if args.spaces_csv:
        _write(args.spaces_csv, space_csv(spaces))
    log.info("%d checkpoints -> %s, %s", len(spaces), out_svg, out_csv)
    return EXIT_OK


def _read_words(args) -> list[str]:
    if args.words_file:
        return [w.strip() for w in Path(args.words_file).read_text(encoding="utf-8").splitlines() if w.strip()]
    if args.words:
        return [w.strip() for w in args.words.split(",") if w.strip()]
    return [w for pair in perception.STIMULUS_WORDS.values() for w in pair]


def cmd_stimuli(args) -> int:
    if args.mode == "hvd-lists":
        extra = [w.strip() for w in args.extra.split(",") if w.strip()] if args.extra else []
        lists = perception.generate_word_lists(args.n, args.seed, extra)
        text = "".join(wl.rendered + "\n" for wl in lists)
    else:
        words = _read_words(args)
        try:
            sentences = perception.generate_stimulus_sentences(words, args.carrier)
        except perception.TemplateError as exc:
            log.error("%s", exc)
            return EXIT_FAIL
        if args.steps:
            steps = CHECKPOINT_STEPS if args.steps == "standard" else [int(s) for s in args.steps.split(",")]
            sentences = [s for _ in steps for s in sentences]
        text = "".join(s + "\n" for s in sentences)
    _write(args.out, text)
    return EXIT_OK


def cmd_likert(args) -> int:
    settings = _settings(args)
    try:
        responses = perception.read_responses_csv(args.responses_csv, continuous=args.continuous)
        aggregates = perception.aggregate_likert(responses)
    except perception.LikertValidationError as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    if not aggregates:
        log.error("%s: no responses", args.responses_csv)
        return EXIT_FAIL
    _write(args.out_csv, perception.aggregates_csv(aggregates))
    _write(args.out_svg, viz.render_likert_svg(aggregates, settings.plot))
    return EXIT_OK


def _analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--label-map", dest="label_map", help="phone label to vowel category map file")
    p.add_argument("--strategy", choices=["middle-half-mean", "midpoint"])
    p.add_argument("--max-formant-hz", dest="max_formant_hz", type=float)
    p.add_argument("--phone-tier", dest="phone_tier")
    p.add_argument("--word-tier", dest="word_tier", help="word tier name, or 'none'")
    p.add_argument("--jobs", type=int, default=1, help="worker processes per checkpoint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voweltrack", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="vowel space of one checkpoint")
    p.add_argument("wav_dir")
    p.add_argument("textgrid_dir")
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--out", required=True, help="space CSV")
    _analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trajectory", help="vowel spaces over a manifest of checkpoints")
    p.add_argument("manifest", help="step<TAB>wav_dir<TAB>textgrid_dir per line")
    p.add_argument("--out-svg", required=True)
    p.add_argument("--out-csv", required=True, help="convergence CSV")
    p.add_argument("--reference", help="single-step space CSV of the target accent")
    p.add_argument("--spaces-csv", help="also write every checkpoint's space CSV here")
    p.add_argument("--show-hull", action="store_true")
    p.add_argument("--label-mode", dest="label_mode", choices=list(viz.LABEL_MODES))
    _analysis_flags(p)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("stimuli", help="hVd word lists or carrier sentences")
    p.add_argument("--mode", choices=["hvd-lists", "carrier"], required=True)
    p.add_argument("--n", type=int, default=5, help="number of word lists")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extra", help="comma-separated hVd words repeated in every list")
    p.add_argument("--words", help="comma-separated words for carrier mode")
    p.add_argument("--words-file", help="one word per line for carrier mode")
    p.add_argument("--carrier", default=perception.DEFAULT_CARRIER)
    p.add_argument("--steps", help="repeat sentences per checkpoint: comma list or 'standard'")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_stimuli)

    p = sub.add_parser("likert", help="aggregate Likert responses and draw stacked bars")
    p.add_argument("responses_csv")
    p.add_argument("--out-svg", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--continuous", action="store_true", help="ratings are slider positions in [0, 1]")
    p.add_argument("--config")
    p.set_defaults(func=cmd_likert)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
