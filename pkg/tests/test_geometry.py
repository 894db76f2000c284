import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from families import random_profile
from revlambda import (CircleSpec, HalfPlanePoint, ProfileCurve, arclength_reparametrize,
                       chord_replace, constant_speed_samples, curve_length, invert_in_circle,
                       lambda1, radial_extent, resample, segment, validate_curve)
from revlambda.errors import CurveError, DomainError
from revlambda.geometry import inversion_map


def semicircle(center, radius, n, phi0=-math.pi / 2, phi1=math.pi / 2):
    phi = np.linspace(phi0, phi1, n + 1)
    return ProfileCurve(np.column_stack([center[0] + radius * np.cos(phi),
                                         center[1] + radius * np.sin(phi)]))


# --- types

def test_half_plane_point_rejects_axis():
    with pytest.raises(DomainError):
        HalfPlanePoint(0.0, 1.0)
    assert tuple(HalfPlanePoint(1, 2)) == (1.0, 2.0)


def test_circle_smallness_condition():
    CircleSpec((1.0, 0.0), 0.2)
    with pytest.raises(DomainError):
        CircleSpec((1.0, 0.0), 0.21)
    with pytest.raises(DomainError):
        CircleSpec((1.0, 0.0), 0.0)


# --- validate_curve

def test_valid_vertical_segment():
    assert validate_curve(segment((1, 0), (1, 1), 10)) == []


def test_sample_on_axis_is_reported():
    pts = segment((1, 0), (1, 1), 10).samples.copy()
    pts[4, 0] = 0.0
    bad = validate_curve(ProfileCurve(pts))
    assert [(v.index, v.invariant) for v in bad] == [(4, "x > 0")]


def test_endpoint_mismatch_is_reported():
    c = segment((1, 0), (1, 1), 10)
    bad = validate_curve(ProfileCurve(c.samples, p=(1.0, 0.1), q=c.q))
    assert [(v.index, v.invariant) for v in bad] == [(0, "endpoint p")]


def test_repeated_sample_is_reported():
    pts = segment((1, 0), (1, 1), 4).samples.copy()
    pts[2] = pts[1]
    assert [v.invariant for v in validate_curve(ProfileCurve(pts))] == ["regular"]


# --- reparametrization

def test_reparametrize_constant_speed_is_identity():
    c = segment((1, 0), (2, 1), 50)
    assert np.allclose(arclength_reparametrize(c).samples, c.samples, atol=1e-12, rtol=0)


def test_reparametrize_clustered_segment_gives_uniform_samples():
    n = 40
    t = np.linspace(0.0, 1.0, n + 1) ** 2
    out = arclength_reparametrize(segment((1, 0), (1, 1), n, t=t))
    expect = np.column_stack([np.ones(n + 1), np.linspace(0, 1, n + 1)])
    assert np.allclose(out.samples, expect, atol=1e-12, rtol=0)


def test_reparametrize_random_curve_has_equal_chords():
    rng = np.random.default_rng(3)
    for _ in range(5):
        prof = random_profile(rng)
        t = np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 99)]))
        out = arclength_reparametrize(ProfileCurve(prof(t)[0]))
        ch = out.chords()
        assert np.ptp(ch) <= 1e-10 * ch.mean()
        assert out.n == 100
        assert validate_curve(out) == []


def test_reparametrize_is_idempotent():
    rng = np.random.default_rng(4)
    once = arclength_reparametrize(random_profile(rng).uniform(200))
    twice = arclength_reparametrize(once)
    assert np.max(np.abs(once.samples - twice.samples)) <= 1e-10


def test_reparametrize_stays_on_polyline():
    c = ProfileCurve([[1, 0], [2, 0], [2, 1]])
    out = arclength_reparametrize(c)
    # both new chords equal; the middle sample sits on one of the two legs
    mid = out.samples[1]
    assert math.isclose(out.chords()[0], out.chords()[1], rel_tol=1e-12)
    assert math.isclose(mid[1], 0.0, abs_tol=1e-12) or math.isclose(mid[0], 2.0, abs_tol=1e-12)


def test_reparametrize_constant_curve_errors():
    with pytest.raises(CurveError):
        arclength_reparametrize(ProfileCurve([[1, 0], [1, 0]]))


def test_constant_speed_samples_of_smooth_curve():
    prof = random_profile(np.random.default_rng(5))
    curve, t = constant_speed_samples(prof, 256)
    ch = curve.chords()
    assert np.ptp(ch) <= 1e-10 * ch.mean()
    assert np.all(np.diff(t) > 0)
    assert curve.samples[0].tolist() == list(prof.p) and curve.samples[-1].tolist() == list(prof.q)


def test_resample_keeps_endpoints():
    c = resample(segment((1, 0), (1, 1), 10), 37)
    assert c.n == 37 and validate_curve(c) == []


# --- length and extent

def test_curve_length_examples():
    assert curve_length(segment((1, 0), (1, 1), 7)) == pytest.approx(1.0, abs=1e-15)
    assert curve_length(segment((1, 0), (2, 1), 1)) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert abs(curve_length(semicircle((2, 0), 1.0, 10_000)) - math.pi) <= 1e-6


def test_radial_extent_examples():
    assert radial_extent(segment((1, 0), (1, 1), 5)) == (1.0, 1.0)
    assert radial_extent(segment((1, 0), (2, 0), 5)) == (1.0, 2.0)
    a, b = radial_extent(semicircle((2, 0), 0.5, 1000, 0.0, math.pi))
    assert a == pytest.approx(1.5, abs=1e-12) and b == pytest.approx(2.5, abs=1e-12)


# --- inversion

def test_inversion_map_radius():
    out = inversion_map([[1.0 + 0.2, 0.5]], (1.0, 0.5), 0.1)
    assert np.allclose(out, [[1.05, 0.5]], atol=1e-15)


def test_arc_on_circle_is_fixed():
    c = semicircle((1.0, 0.5), 0.1, 20)
    c = ProfileCurve(np.vstack([[1.0, 0.2], c.samples, [1.0, 0.9]]))
    out = invert_in_circle(c, CircleSpec((1.0, 0.5), 0.1), 1, 21)
    assert np.allclose(out.samples, c.samples, atol=1e-14)


def test_inversion_is_involution_on_arc():
    base = semicircle((1.0, 0.5), 0.15, 20)
    pts = base.samples.copy()
    pts[0], pts[-1] = (1.0, 0.4), (1.0, 0.6)
    c = ProfileCurve(np.vstack([[1.0, 0.0], pts, [1.0, 1.0]]))
    circ = CircleSpec((1.0, 0.5), 0.1)
    once = invert_in_circle(c, circ, 1, 21)
    assert np.all(np.hypot(*(once.samples[2:21] - [1.0, 0.5]).T) < 0.1)
    with pytest.raises(CurveError):
        invert_in_circle(once, circ, 1, 21)   # interior now inside the circle
    back = ProfileCurve(np.vstack([c.samples[:2], inversion_map(once.samples[2:21], (1.0, 0.5), 0.1),
                                   c.samples[21:]]))
    assert np.max(np.abs(back.samples - c.samples)) <= 1e-10


def test_inversion_preconditions():
    c = segment((1, 0), (1, 1), 10)
    with pytest.raises(CurveError, match="not on the circle"):
        invert_in_circle(c, CircleSpec((1.05, 0.5), 0.1), 4, 6)
    far = ProfileCurve(np.vstack([[1, 0], [1, 0.4], [1.5, 0.5], [1, 0.6], [1, 1]]))
    with pytest.raises(CurveError, match="farther"):
        invert_in_circle(far, CircleSpec((1.0, 0.5), 0.1), 1, 3)


def test_inversion_of_bulge_raises_lambda():
    from families import bulge_curve
    from revlambda.maximizer import find_bulges
    c = bulge_curve()
    i1, i2, circ = find_bulges(c)[0]
    before = lambda1(arclength_reparametrize(c)).lambda1
    after = lambda1(arclength_reparametrize(invert_in_circle(c, circ, i1, i2))).lambda1
    assert after > before


# --- chord replacement

def test_chord_of_segment_is_segment():
    c = segment((1, 0), (1.5, 1), 12)
    assert np.allclose(chord_replace(c, 0, 12).samples, c.samples, atol=1e-15)


def test_detour_becomes_vertical_segment():
    c = ProfileCurve([[1, 0], [2, 0.5], [1, 1]])
    assert np.allclose(chord_replace(c, 0, 2).samples, [[1, 0], [1, 0.5], [1, 1]])


def test_chord_over_zigzag_does_not_lower_lambda():
    n = 200
    t = np.linspace(0, 1, n + 1)
    pts = np.column_stack([1 + 0.03 * np.sign(np.sin(20 * np.pi * t)) * (np.abs(t - 0.5) < 0.2),
                           t])
    c = ProfileCurve(pts)
    i1, i2 = 60, 140
    before = lambda1(arclength_reparametrize(c)).lambda1
    after = lambda1(arclength_reparametrize(chord_replace(c, i1, i2))).lambda1
    assert after >= before


def test_chord_replace_bad_indices():
    with pytest.raises(CurveError):
        chord_replace(segment((1, 0), (1, 1), 4), 3, 2)


# --- properties

coords = st.floats(0.2, 3.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, st.floats(-2.0, 2.0)), min_size=2, max_size=30, unique=True))
def test_extent_bounds_every_sample(points):
    c = ProfileCurve(points)
    a, b = radial_extent(c)
    assert np.all((a <= c.F) & (c.F <= b)) and 0 < a <= b


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(8, 300))
def test_ops_produce_valid_curves(seed, n):
    prof = random_profile(np.random.default_rng(seed))
    c = prof.uniform(n)
    out = arclength_reparametrize(c)
    assert validate_curve(out) == []
    i1, i2 = sorted(np.random.default_rng(seed).choice(np.arange(n + 1), 2, replace=False))
    assert validate_curve(chord_replace(c, int(i1), int(i2))) == []
