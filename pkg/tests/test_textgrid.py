from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from voweltrack.textgrid import (
    Alignment,
    Interval,
    IntervalTier,
    TextGridParseError,
    TierNotFoundError,
    extract_vowel_segments,
    parse_textgrid,
    read_textgrid,
    serialize_textgrid,
    write_textgrid,
)
from voweltrack.vowels import VowelCategory as V, load_label_map, parse_label_map

DATA = Path(__file__).parent / "data"
FIXTURES = sorted(DATA.glob("*.TextGrid"))


def test_fixture_corpus_present():
    assert len(FIXTURES) >= 6


def test_minimal_long_form():
    a = read_textgrid(DATA / "hid_long.TextGrid")
    assert (a.xmin, a.xmax) == (0.0, 0.62)
    assert [t.name for t in a.tiers] == ["ORT-MAU", "MAU"]
    assert a.tier("MAU").intervals[2] == Interval(0.19, 0.41, "I")


def test_short_form_matches_long_form_structure():
    a = read_textgrid(DATA / "whod_short.TextGrid")
    assert [len(t.intervals) for t in a.tiers] == [3, 5]
    assert a.tier("ORT-MAU").intervals[1].label == "who'd"


def test_zero_tiers():
    a = read_textgrid(DATA / "no_tiers.TextGrid")
    assert a.tiers == ()
    assert a.xmax == 3.25


def test_doubled_quotes_and_ipa():
    a = read_textgrid(DATA / "quoted_ipa.TextGrid")
    tier = a.tiers[0]
    assert tier.name == 'phones "IPA"'
    assert tier.intervals[0].label == 'say "hard" now'
    assert [iv.label for iv in tier.intervals[1:]] == ["ɑː", "ʉː", "æ"]


def test_point_tier_skipped_with_warning():
    a = read_textgrid(DATA / "point_tier.TextGrid")
    assert [t.name for t in a.tiers] == ["MAU"]
    assert any("tones" in w for w in a.warnings)


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
@pytest.mark.parametrize("short", [False, True], ids=["long", "short"])
@pytest.mark.parametrize("encoding", ["utf-8", "utf-16"])
def test_round_trip(tmp_path, path, short, encoding):
    first = read_textgrid(path)
    out = tmp_path / "rt.TextGrid"
    write_textgrid(out, first, short=short, encoding=encoding)
    assert read_textgrid(out) == first


def test_utf16_bytes_decoded():
    text = (DATA / "quoted_ipa.TextGrid").read_text(encoding="utf-8")
    for enc in ("utf-16", "utf-16-le", "utf-16-be"):
        data = text.encode(enc)
        if enc != "utf-16":
            data = ("\ufeff" + text).encode(enc)
        assert parse_textgrid(data) == parse_textgrid(text)


def test_utf8_bom_accepted():
    text = (DATA / "hid_long.TextGrid").read_text(encoding="utf-8")
    assert parse_textgrid(b"\xef\xbb\xbf" + text.encode()) == parse_textgrid(text)


labels = st.text(st.characters(blacklist_categories=("Cs", "Cc", "Zs", "Zl", "Zp")), max_size=8)


@st.composite
def alignments(draw):
    n_tiers = draw(st.integers(0, 3))
    cuts = sorted(set(draw(st.lists(st.integers(1, 999), min_size=1, max_size=10))))
    bounds = [0] + cuts + [1000]
    tiers = []
    for i in range(n_tiers):
        ivs = [Interval(a / 250, b / 250, draw(labels)) for a, b in zip(bounds, bounds[1:])]
        tiers.append(IntervalTier(f"tier{i}", tuple(ivs)))
    return Alignment(tuple(tiers), 0.0, 4.0)


@settings(max_examples=60, deadline=None)
@given(alignments(), st.booleans())
def test_round_trip_property(alignment, short):
    assert parse_textgrid(serialize_textgrid(alignment, short)) == alignment


def test_hid_yields_kit():
    segs = extract_vowel_segments(read_textgrid(DATA / "hid_long.TextGrid"), word_tier="ORT-MAU")
    assert [(s.vowel, s.word) for s in segs] == [(V.KIT, "hid")]
    assert segs[0].start == 0.19 and segs[0].end == 0.41


def test_whod_yields_goose():
    segs = extract_vowel_segments(read_textgrid(DATA / "whod_short.TextGrid"), word_tier="ORT-MAU")
    assert [(s.vowel, s.word) for s in segs] == [(V.GOOSE, "who'd")]


def test_ipa_labels_map():
    a = read_textgrid(DATA / "quoted_ipa.TextGrid")
    segs = extract_vowel_segments(a, phone_tier='phones "IPA"')
    assert [s.vowel for s in segs] == [V.START, V.GOOSE, V.TRAP]


def test_consonants_only_gives_no_segments():
    tier = IntervalTier("MAU", ((0, 0.1, "h"), (0.1, 0.2, "d"), (0.2, 0.3, "<p:>")))
    assert extract_vowel_segments(Alignment((tier,), 0, 0.3)) == []


def test_missing_tier_lists_available():
    a = read_textgrid(DATA / "hid_long.TextGrid")
    with pytest.raises(TierNotFoundError, match="ORT-MAU"):
        extract_vowel_segments(a, phone_tier="phones")


def test_short_segment_flag():
    tier = IntervalTier("MAU", ((0, 0.02, "I"), (0.02, 0.1, "I")))
    segs = extract_vowel_segments(Alignment((tier,), 0, 0.1))
    assert [s.too_short for s in segs] == [True, False]


def test_unbalanced_quote_reports_line():
    bad = (DATA / "hid_long.TextGrid").read_text().replace('text = "hid"', 'text = "hid')
    with pytest.raises(TextGridParseError) as info:
        parse_textgrid(bad)
    assert info.value.line is not None
    assert "line" in str(info.value)


def test_non_monotone_interval_reports_line():
    bad = (DATA / "hid_long.TextGrid").read_text().replace("xmin = 0.41", "xmin = 0.30")
    with pytest.raises(TextGridParseError, match="non-monotone") as info:
        parse_textgrid(bad)
    assert info.value.line == 46


def test_missing_header():
    with pytest.raises(TextGridParseError, match="ooTextFile"):
        parse_textgrid('File type = "somethingElse"\nObject class = "TextGrid"\n')


def test_truncated_file():
    text = (DATA / "hid_long.TextGrid").read_text()
    with pytest.raises(TextGridParseError):
        parse_textgrid(text[: len(text) // 2])


def test_label_map_file(tmp_path):
    path = tmp_path / "map.txt"
    path.write_text("# custom\nih = KIT\nuw = GOOSE\n\n", encoding="utf-8")
    mapping = load_label_map(path)
    assert mapping == {"ih": V.KIT, "uw": V.GOOSE}
    tier = IntervalTier("MAU", ((0, 0.1, "ih"), (0.1, 0.2, "I")))
    segs = extract_vowel_segments(Alignment((tier,), 0, 0.2), label_map=mapping)
    assert [s.vowel for s in segs] == [V.KIT]


def test_label_map_rejects_unknown_category():
    with pytest.raises(ValueError):
        parse_label_map("ih = SCHWA\n")
