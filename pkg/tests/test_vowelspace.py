import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from helpers import linear_trajectory_spaces
from voweltrack.formant import Formant, FormantConfig, FormantFrame, FormantTrack
from voweltrack.textgrid import VowelSegment
from voweltrack.vowels import CHECKPOINT_STEPS, VowelCategory as V
from voweltrack.vowelspace import (
    ComparisonError,
    ConfigurationError,
    DegenerateHullWarning,
    SegmentRangeError,
    Trajectory,
    VowelPoint,
    VowelSpace,
    VowelToken,
    build_space,
    convergence_csv,
    convergence_curve,
    convex_hull,
    distance_to_reference,
    hull_area,
    hull_outline,
    measure_vowel,
    parse_space_csv,
    point_vowels,
    polygon_area,
    space_csv,
)

CATS = list(V)


def track_from(f1_of_t, f2=1500.0, duration=1.0, step=0.005, formants=2):
    frames = []
    for t in np.arange(step, duration, step):
        fs = (Formant(f1_of_t(t), 80.0), Formant(f2, 90.0), Formant(2800.0, 120.0))[:formants]
        frames.append(FormantFrame(float(t), fs))
    return FormantTrack(tuple(frames), FormantConfig(), "t", duration)


def space_of(step=0, **coords):
    return VowelSpace.from_means(step, {V[k]: v for k, v in coords.items()})


# --- measure_vowel -------------------------------------------------------------------

@pytest.mark.parametrize("strategy", ["middle-half-mean", "midpoint"])
def test_constant_track(strategy):
    track = track_from(lambda t: 500.0)
    assert measure_vowel(track, VowelSegment(V.KIT, 0.2, 0.6), strategy) == (500.0, 1500.0)


def test_ramp_middle_half_mean():
    # Frames every 5 ms, segment centred on a frame so the window is symmetric.
    seg = VowelSegment(V.KIT, 0.2, 0.6)
    track = track_from(lambda t: 400.0 + 200.0 * (t - 0.2) / 0.4)
    f1, _ = measure_vowel(track, seg)
    assert f1 == pytest.approx(500.0, abs=1e-9)


def test_midpoint_picks_centre_frame():
    seg = VowelSegment(V.KIT, 0.2, 0.6)
    track = track_from(lambda t: 1000.0 * t)
    assert measure_vowel(track, seg, "midpoint")[0] == pytest.approx(400.0)


def test_no_usable_frames():
    track = track_from(lambda t: 500.0, formants=1)
    seg = VowelSegment(V.KIT, 0.2, 0.6)
    assert measure_vowel(track, seg) is None
    assert measure_vowel(track, seg, "midpoint") is None


def test_segment_outside_track():
    with pytest.raises(SegmentRangeError):
        measure_vowel(track_from(lambda t: 500.0), VowelSegment(V.KIT, 0.8, 1.2))


# --- tokens and build_space ---------------------------------------------------------

@pytest.mark.parametrize("f1,f2,flag", [
    (500, 1500, False), (200, 600, False), (900, 2600, False),
    (199, 1500, True), (901, 1500, True), (500, 599, True), (500, 2601, True),
])
def test_range_flag(f1, f2, flag):
    assert VowelToken(V.KIT, f1, f2, 0).out_of_range is flag


def test_token_requires_positive_values():
    with pytest.raises(ValueError):
        VowelToken(V.KIT, 0, 1500, 0)


def test_two_token_mean():
    space = build_space([VowelToken(V.KIT, 400, 2000, 0), VowelToken(V.KIT, 440, 2080, 0)], 0)
    p = space.points[V.KIT]
    assert (p.f1_hz, p.f2_hz, p.n_tokens) == (420, 2040, 2)
    assert p.f1_sd == pytest.approx(math.sqrt(800))
    assert p.f2_sd == pytest.approx(math.sqrt(3200))


def test_single_token_sd_zero():
    space = build_space([VowelToken(v, 300 + i, 1000 + i, 7) for i, v in enumerate(CATS)], 7)
    assert len(space.points) == 11
    for i, v in enumerate(CATS):
        p = space.points[v]
        assert (p.f1_hz, p.f2_hz, p.f1_sd, p.f2_sd, p.sd_defined) == (300 + i, 1000 + i, 0, 0, False)
    assert space.warnings


def test_eleven_by_five():
    tokens = [VowelToken(v, 300 + 10 * k, 1200 + k, 0, f"list{k}") for v in CATS for k in range(5)]
    space = build_space(tokens, 0)
    assert len(space.points) == 11
    assert all(p.n_tokens == 5 for p in space.points.values())


def test_empty_tokens():
    space = build_space([], 3)
    assert space.points == {}
    assert "no vowel tokens" in space.warnings[0]


def test_mixed_steps_rejected():
    with pytest.raises(ValueError):
        build_space([VowelToken(V.KIT, 400, 2000, 1)], 0)


finite_hz = st.floats(100, 3000, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(CATS), finite_hz, finite_hz), min_size=1, max_size=30),
       st.randoms(), st.floats(-50, 50), st.floats(-50, 50))
def test_build_space_permutation_and_translation(rows, rnd, d1, d2):
    tokens = [VowelToken(v, a, b, 0) for v, a, b in rows]
    shuffled = tokens[:]
    rnd.shuffle(shuffled)
    base, perm = build_space(tokens, 0), build_space(shuffled, 0)
    moved = build_space([VowelToken(t.vowel, t.f1_hz + d1 + 100, t.f2_hz + d2 + 100, 0) for t in tokens], 0)
    for v, p in base.points.items():
        assert perm.points[v].f1_hz == pytest.approx(p.f1_hz)
        assert perm.points[v].f2_hz == pytest.approx(p.f2_hz)
        assert moved.points[v].f1_hz == pytest.approx(p.f1_hz + d1 + 100)
        assert moved.points[v].f2_hz == pytest.approx(p.f2_hz + d2 + 100)
        assert moved.points[v].f1_sd == pytest.approx(p.f1_sd, abs=1e-6)


def test_points_kept_in_category_order():
    space = VowelSpace(0, {V.FLEECE: VowelPoint(300, 2400, 1), V.STRUT: VowelPoint(700, 1400, 1)})
    assert list(space.points) == [V.STRUT, V.FLEECE]


# --- geometry -----------------------------------------------------------------------

def test_two_points_zero_area():
    assert polygon_area(convex_hull([(0, 0), (1, 1)])) == 0.0
    assert hull_area(space_of(KIT=(400, 2000), FOOT=(450, 1300))) == 0.0


def test_unit_square():
    assert polygon_area(convex_hull([(0, 0), (0, 1), (1, 0), (1, 1)])) == 1.0


def test_interior_point_ignored():
    assert polygon_area(convex_hull([(0, 0), (2, 0), (0, 2), (0.5, 0.5)])) == 2.0


def test_collinear_points_excluded():
    assert convex_hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2), (1, 2)]) == [(0, 0), (2, 0), (2, 2), (0, 2)]


points2d = st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=3, max_size=25)


@settings(max_examples=100, deadline=None)
@given(points2d, st.floats(0.01, 100), st.randoms())
def test_hull_area_scale_and_permutation(pts, s, rnd):
    area = polygon_area(convex_hull(pts))
    shuffled = pts[:]
    rnd.shuffle(shuffled)
    assert polygon_area(convex_hull(shuffled)) == area
    scaled = polygon_area(convex_hull([(s * x, s * y) for x, y in pts]))
    assert scaled == pytest.approx(s * s * area, rel=1e-9, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(points2d)
def test_hull_area_matches_qhull(pts):
    arr = np.array(pts)
    try:
        expected = ConvexHull(arr).volume
    except Exception:  # qhull rejects flat inputs
        expected = 0.0
    assert polygon_area(convex_hull(pts)) == pytest.approx(expected, rel=1e-9, abs=1e-6)


def test_point_vowels_triangle():
    space = space_of(FLEECE=(300, 2400), THOUGHT=(400, 700), START=(750, 1300), DRESS=(450, 2000))
    assert point_vowels(space) == {V.FLEECE, V.THOUGHT, V.START}


def test_point_vowels_square():
    space = space_of(FLEECE=(300, 2400), GOOSE=(300, 800), TRAP=(800, 2400), LOT=(800, 800))
    assert point_vowels(space) == {V.FLEECE, V.GOOSE, V.TRAP, V.LOT}


def test_point_vowels_collinear_warns():
    space = space_of(FLEECE=(300, 2400), KIT=(400, 2000), DRESS=(500, 1600))
    with pytest.warns(DegenerateHullWarning):
        assert point_vowels(space) == set()


def test_hull_outline_counter_clockwise():
    space = space_of(FLEECE=(300, 2400), THOUGHT=(400, 700), START=(750, 1300), DRESS=(450, 2000))
    outline = hull_outline(space)
    assert set(outline) == {V.FLEECE, V.THOUGHT, V.START}
    assert outline[0] == V.THOUGHT  # lowest F2 first


def test_shared_coordinates_both_on_hull():
    space = space_of(FLEECE=(300, 2400), KIT=(300, 2400), THOUGHT=(400, 700), START=(750, 1300))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert point_vowels(space) == {V.FLEECE, V.KIT, V.THOUGHT, V.START}


# --- distances and convergence ---------------------------------------------------------

REF = {V.FLEECE: (350, 2550), V.KIT: (500, 1900), V.THOUGHT: (420, 850), V.START: (850, 1450)}


def test_identical_spaces_zero_distance():
    rep = distance_to_reference(VowelSpace.from_means(0, REF), VowelSpace.from_means(0, REF))
    assert rep.mean == 0 and set(rep.per_vowel.values()) == {0.0}


def test_uniform_translation():
    moved = {v: (f1 + 30, f2) for v, (f1, f2) in REF.items()}
    rep = distance_to_reference(VowelSpace.from_means(0, moved), VowelSpace.from_means(0, REF))
    assert rep.mean == pytest.approx(30) and all(d == pytest.approx(30) for d in rep.per_vowel.values())


def test_three_four_five():
    rep = distance_to_reference(space_of(KIT=(400, 2000)), space_of(KIT=(430, 2040)))
    assert rep.per_vowel[V.KIT] == 50.0 and rep.mean == 50.0


def test_unshared_categories_listed():
    rep = distance_to_reference(space_of(KIT=(400, 2000), FOOT=(450, 1300)), space_of(KIT=(430, 2040), LOT=(600, 1000)))
    assert set(rep.per_vowel) == {V.KIT}
    assert rep.unshared == {V.FOOT, V.LOT}


def test_no_shared_categories():
    with pytest.raises(ComparisonError):
        distance_to_reference(space_of(KIT=(400, 2000)), space_of(LOT=(600, 1000)))


def test_convergence_requires_reference():
    with pytest.raises(ConfigurationError):
        convergence_curve(Trajectory((space_of(KIT=(400, 2000)),)))
    curve = convergence_curve(Trajectory((space_of(KIT=(400, 2000)),)), require_reference=False)
    assert curve[0].mean_dist_hz is None


def test_converged_trajectory():
    ref = VowelSpace.from_means(0, REF)
    traj = Trajectory(tuple(VowelSpace.from_means(s, REF) for s in CHECKPOINT_STEPS), ref)
    assert all(c.mean_dist_hz == 0 for c in convergence_curve(traj))


def test_two_step_direct_evaluation():
    ref = space_of(KIT=(400, 2000))
    traj = Trajectory((space_of(0, KIT=(460, 2080)), space_of(1000, KIT=(424, 2032))), ref)
    curve = convergence_curve(traj)
    assert [(c.step, c.mean_dist_hz) for c in curve] == [(0, 100.0), (1000, 40.0)]


def test_linear_interpolation_deltas():
    offsets = {v: (120.0 + 10 * i, -300.0 + 45 * i) for i, v in enumerate(REF)}
    spaces = linear_trajectory_spaces(REF, offsets, CHECKPOINT_STEPS)
    curve = convergence_curve(Trajectory(tuple(spaces), VowelSpace.from_means(0, REF)))
    start = math.fsum(math.hypot(*o) for o in offsets.values()) / len(offsets)
    expected = [start * (1 - s / CHECKPOINT_STEPS[-1]) for s in CHECKPOINT_STEPS]
    got = [c.mean_dist_hz for c in curve]
    assert all(b < a for a, b in zip(got, got[1:]))
    assert np.max(np.abs(np.array(got) - expected)) <= 1e-9
    assert np.max(np.abs(np.diff(got) - np.diff(expected))) <= 1e-9


def test_trajectory_steps_strict():
    with pytest.raises(ValueError):
        Trajectory((space_of(10, KIT=(400, 2000)), space_of(10, KIT=(400, 2000))))


def test_trajectory_inventory_mismatch_warns():
    traj = Trajectory((space_of(0, KIT=(400, 2000), FOOT=(450, 1300)), space_of(1, KIT=(400, 2000))))
    assert "FOOT" in traj.warnings[0]
    assert [s for s, _ in traj.path(V.FOOT)] == [0]


# --- CSV -------------------------------------------------------------------------

def test_space_csv_round_trip():
    tokens = [VowelToken(v, 300 + 10 * k + i, 1200 + 7 * k, 1000) for i, v in enumerate(CATS) for k in range(3)]
    space = build_space(tokens, 1000)
    text = space_csv([space])
    assert text.splitlines()[0] == "step,vowel,n_tokens,f1_hz_mean,f2_hz_mean,f1_hz_sd,f2_hz_sd"
    (back,) = parse_space_csv(text)
    assert back.step == 1000 and list(back.points) == list(space.points)
    for v, p in space.points.items():
        q = back.points[v]
        assert q.n_tokens == p.n_tokens
        assert q.f1_hz == pytest.approx(p.f1_hz, abs=5e-5)
        assert q.f2_sd == pytest.approx(p.f2_sd, abs=5e-5)
    assert space_csv(parse_space_csv(text)) == text


def test_convergence_csv_blank_distance():
    traj = Trajectory((space_of(0, KIT=(400, 2000), FOOT=(450, 1300), LOT=(600, 1000)),))
    text = convergence_csv(convergence_curve(traj, require_reference=False))
    assert text.splitlines() == ["step,mean_dist_hz,hull_area_hz2", "0,,45000.0000"]
