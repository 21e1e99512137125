import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hull_limits.errors import DomainError, ParameterError
from hull_limits.geometry import (
    Ellipsoid,
    Hull2D,
    Interval,
    Polytope,
    SupportProfile,
    area2d,
    convex_hull_2d,
    diameter2d,
    ellipsoid_support,
    grid_error_bound,
    hausdorff_intervals,
    hausdorff_profiles,
    hull2d_insert,
    hull2d_vertices,
    make_direction_grid,
    profile_of_points,
)
from oracles import brute_force_hull_vertices, interval_hausdorff_by_neighbourhoods, support_on_grid


def as_set(vertices):
    return {tuple(np.round(v, 12)) for v in np.asarray(vertices)}


# --- direction grids --------------------------------------------------------


def test_grid_1d_is_axis_pair():
    g = make_direction_grid(1, 2)
    assert g.directions.tolist() == [[1.0], [-1.0]]
    assert make_direction_grid(1, 50).m == 2


def test_grid_2d_equiangular_m4():
    g = make_direction_grid(2, 4)
    np.testing.assert_array_equal(g.directions, [[1, 0], [0, 1], [-1, 0], [0, -1]])
    assert g.kind == "equiangular-2d"


def test_grid_2d_angles():
    g = make_direction_grid(2, 7)
    ang = np.mod(np.arctan2(g.directions[:, 1], g.directions[:, 0]), 2 * np.pi)
    np.testing.assert_allclose(ang, 2 * np.pi * np.arange(7) / 7, atol=1e-12)


@pytest.mark.parametrize("d,m", [(3, 100), (3, 1024), (5, 200)])
def test_grid_sphere_invariants(d, m):
    g = make_direction_grid(d, m)
    assert g.directions.shape == (m, d)
    np.testing.assert_allclose(np.linalg.norm(g.directions, axis=1), 1.0, atol=1e-12)
    dots = g.directions @ g.directions.T
    np.fill_diagonal(dots, -2)
    assert dots.max() < 1
    assert len(np.unique(g.directions, axis=0)) == m
    np.testing.assert_array_equal(make_direction_grid(d, m).directions, g.directions)


@pytest.mark.parametrize("d,m", [(0, 4), (-1, 4), (2, 1), (3, 0), (2.5, 4)])
def test_grid_rejects_bad_parameters(d, m):
    with pytest.raises(ParameterError):
        make_direction_grid(d, m)


def test_grid_defaults():
    assert make_direction_grid(2).m == 512
    assert make_direction_grid(3).m == 1024


def test_grid_error_bound_formula():
    assert grid_error_bound(2.0, 512) == pytest.approx(2 * (1 - math.cos(math.pi / 512)))


# --- support profiles ----------------------------------------------------------


def test_profile_of_origin_is_zero():
    for d, m in [(1, 2), (2, 16), (3, 50)]:
        g = make_direction_grid(d, m)
        assert np.all(profile_of_points(np.zeros((1, d)), g).values == 0)


def test_profile_of_segment():
    g = make_direction_grid(2, 4)
    np.testing.assert_array_equal(profile_of_points([[1, 0], [-1, 0]], g).values, [1, 0, 1, 0])


def test_profile_empty_points_is_domain_error():
    with pytest.raises(DomainError):
        profile_of_points(np.empty((0, 2)), make_direction_grid(2, 8))


def test_profile_dimension_mismatch():
    with pytest.raises(ParameterError):
        profile_of_points(np.zeros((3, 3)), make_direction_grid(2, 8))


@pytest.mark.parametrize("seed", range(5))
def test_profile_matches_brute_force_hull(seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((20, 2))
    g = make_direction_grid(2, 360)
    verts = brute_force_hull_vertices(pts)
    np.testing.assert_array_equal(profile_of_points(pts, g).values, support_on_grid(verts, g.directions))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 200))
def test_profile_agrees_with_exact_hull(seed, n):
    pts = np.random.default_rng(seed).standard_normal((n, 2))
    g = make_direction_grid(2, 64)
    hull = Hull2D(pts).vertices()
    np.testing.assert_array_equal(profile_of_points(pts, g).values, profile_of_points(hull, g).values)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 50), st.integers(1, 3))
def test_profile_monotone_under_insertion(seed, n, d):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n + 1, d))
    g = make_direction_grid(d, 40)
    assert np.all(profile_of_points(pts, g).values >= profile_of_points(pts[:n], g).values)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_profile_positive_homogeneity(seed, lam):
    pts = np.random.default_rng(seed).standard_normal((30, 2))
    g = make_direction_grid(2, 50)
    np.testing.assert_allclose(profile_of_points(lam * pts, g).values,
                               lam * profile_of_points(pts, g).values, rtol=1e-12, atol=1e-300)


def test_profile_lower_bound_invariant():
    pts = np.random.default_rng(1).standard_normal((15, 3))
    g = make_direction_grid(3, 80)
    vals = profile_of_points(pts, g).values
    for x in pts:
        assert np.all(vals >= (g.directions @ x).min() - 1e-15)


# --- ellipsoids and polytopes ------------------------------------------------------


def test_ellipsoid_support_examples():
    e = Ellipsoid(np.eye(2))
    for a in np.linspace(0, 2 * np.pi, 9):
        assert ellipsoid_support(e, [math.cos(a), math.sin(a)]) == pytest.approx(1.0, abs=1e-15)
    e = Ellipsoid(np.diag([4.0, 1.0]))
    assert ellipsoid_support(e, [1, 0]) == 2.0
    th = np.array([1, 1]) / math.sqrt(2)
    assert ellipsoid_support(e, th) == pytest.approx(math.sqrt(2.5), abs=1e-12)


def test_ellipsoid_support_against_dense_boundary():
    # boundary of {Sigma^{1/2} u}: (2 cos t, sin t); maximize <x, theta>
    t = np.linspace(0, 2 * np.pi, 200_001)
    boundary = np.column_stack([2 * np.cos(t), np.sin(t)])
    th = np.array([1, 1]) / math.sqrt(2)
    brute = (boundary @ th).max()
    assert brute == pytest.approx(1.5811, abs=1e-4)
    assert ellipsoid_support(Ellipsoid(np.diag([4.0, 1.0])), th) == pytest.approx(brute, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 100.0), st.floats(0, 2 * math.pi))
def test_isotropic_support_equals_sigma(s, a):
    e = Ellipsoid(s**2 * np.eye(2))
    assert ellipsoid_support(e, [math.cos(a), math.sin(a)]) == pytest.approx(s, rel=1e-12, abs=1e-12)


def test_ellipsoid_validation():
    with pytest.raises(DomainError):
        Ellipsoid([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(DomainError):
        Ellipsoid([[1.0, 0.0], [0.0, -1.0]])
    with pytest.raises(ParameterError):
        Ellipsoid(np.ones((2, 3)))
    with pytest.raises(ParameterError):
        ellipsoid_support(Ellipsoid(np.eye(2)), [1, 0, 0])


def test_rank_deficient_ellipsoid_is_a_segment():
    e = Ellipsoid([[1.0, 0.0], [0.0, 0.0]])
    g = make_direction_grid(2, 8)
    np.testing.assert_allclose(e.profile(g).values, np.abs(g.directions[:, 0]), atol=1e-15)
    assert np.all(e.profile(g).values >= 0)


def test_ellipsoid_profile_matches_pointwise_support():
    e = Ellipsoid([[4.0, 1.0], [1.0, 2.0]])
    g = make_direction_grid(2, 33)
    np.testing.assert_allclose(e.profile(g).values, [ellipsoid_support(e, th) for th in g.directions], rtol=1e-14)


def test_polytope_support_is_vertex_max():
    p = Polytope.symmetric([[1, 0], [0, 1]])
    g = make_direction_grid(2, 8)
    np.testing.assert_allclose(p.profile(g).values, np.abs(g.directions).max(axis=1))
    assert p.support([1, 0]) == 1.0


def test_interval_validation():
    with pytest.raises(ParameterError):
        Interval(1.0, 0.0)


# --- Hausdorff distances -----------------------------------------------------------


def test_hausdorff_identity_and_segment():
    g = make_direction_grid(2, 4)
    p = profile_of_points([[1, 0], [-1, 0]], g)
    assert hausdorff_profiles(p, p) == 0.0
    assert hausdorff_profiles(p, profile_of_points([[0, 0]], g)) == 1.0


def test_hausdorff_square_vs_disk():
    g = make_direction_grid(2, 3600)
    square = profile_of_points(list(itertools.product([-1, 1], repeat=2)), g)
    disk = Ellipsoid(np.eye(2)).profile(g)
    assert hausdorff_profiles(square, disk) == pytest.approx(math.sqrt(2) - 1, abs=1e-3)


def test_hausdorff_rejects_mismatched_grids():
    a = profile_of_points([[0, 0]], make_direction_grid(2, 8))
    b = profile_of_points([[0, 0]], make_direction_grid(2, 16))
    with pytest.raises(ParameterError):
        hausdorff_profiles(a, b)


def test_profile_requires_matching_length():
    with pytest.raises(ParameterError):
        SupportProfile(make_direction_grid(2, 4), np.zeros(3))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_grid_hausdorff_metric_axioms(seed):
    rng = np.random.default_rng(seed)
    g = make_direction_grid(2, 32)
    p, q, r = (SupportProfile(g, rng.normal(size=32)) for _ in range(3))
    assert hausdorff_profiles(p, p) == 0
    assert hausdorff_profiles(p, q) == hausdorff_profiles(q, p)
    assert hausdorff_profiles(p, r) <= hausdorff_profiles(p, q) + hausdorff_profiles(q, r) + 1e-15


@pytest.mark.parametrize("a,b,expected", [((0, 1), (0, 2), 1.0), ((-1, 1), (-1, 1), 0.0), ((-0.9, 0.8), (-1, 1), 0.2)])
def test_hausdorff_interval_examples(a, b, expected):
    assert hausdorff_intervals(Interval(*a), Interval(*b)) == pytest.approx(expected, abs=1e-15)


intervals = st.tuples(st.floats(-3, 3), st.floats(0, 3)).map(lambda t: Interval(t[0], t[0] + t[1]))


@settings(max_examples=100, deadline=None)
@given(intervals, intervals)
def test_hausdorff_intervals_matches_neighbourhood_definition(a, b):
    exact = hausdorff_intervals(a, b)
    assert abs(interval_hausdorff_by_neighbourhoods(a, b) - exact) <= 1e-3 + 1e-12


def test_grid_hausdorff_is_exact_in_1d():
    g = make_direction_grid(1)
    a, b = Interval(-0.9, 0.8), Interval(-1, 1)
    assert hausdorff_profiles(a.profile(g), b.profile(g)) == pytest.approx(hausdorff_intervals(a, b))


# --- exact 2-D hull ----------------------------------------------------------------


def test_hull_drops_interior_point():
    h = Hull2D()
    for p in [(0, 0), (1, 0), (0, 1), (0.1, 0.1)]:
        hull2d_insert(h, p)
    assert as_set(hull2d_vertices(h)) == {(0, 0), (1, 0), (0, 1)}


@pytest.mark.parametrize("order", list(itertools.permutations(range(4))))
def test_hull_square_any_order_ccw(order):
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]
    h = Hull2D()
    for i in order:
        h.insert(corners[i])
    v = h.vertices()
    assert as_set(v) == set(corners)
    assert v.tolist() == [[0, 0], [1, 0], [1, 1], [0, 1]]


def test_hull_collinear_and_duplicates():
    h = Hull2D([(0, 0), (1, 0), (2, 0), (2, 0), (1, 1e-300 * 0), (2, 2), (0, 2), (1, 2), (0, 1)])
    assert as_set(h.vertices()) == {(0, 0), (2, 0), (2, 2), (0, 2)}
    assert len(Hull2D([(1, 1)] * 5)) == 1
    assert len(Hull2D([(0, 0), (1, 1), (2, 2), (3, 3)])) == 2


def test_hull_is_ccw_and_strictly_convex():
    v = Hull2D(np.random.default_rng(4).standard_normal((500, 2))).vertices()
    nxt, nxt2 = np.roll(v, -1, axis=0), np.roll(v, -2, axis=0)
    cross = (nxt[:, 0] - v[:, 0]) * (nxt2[:, 1] - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (nxt2[:, 0] - v[:, 0])
    assert np.all(cross > 0)


def test_hull_1000_points_matches_brute_force():
    seed = 0
    pts = np.random.default_rng(seed).standard_normal((1000, 2))
    h = Hull2D()
    for p in pts:
        h.insert(p)
    assert as_set(h.vertices()) == as_set(brute_force_hull_vertices(pts))
    assert as_set(convex_hull_2d(pts)) == as_set(brute_force_hull_vertices(pts))


def test_hull_batch_equals_incremental():
    pts = np.random.default_rng(9).standard_normal((3000, 2)) * [3, 1]
    one = Hull2D()
    for p in pts:
        one.insert(p)
    batch = Hull2D()
    for chunk in np.array_split(pts, 7):
        batch.extend(chunk)
    np.testing.assert_array_equal(one.vertices(), batch.vertices())


# --- functionals -------------------------------------------------------------------


def test_square_diameter_and_area():
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert diameter2d(sq) == pytest.approx(math.sqrt(2))
    assert area2d(sq) == pytest.approx(1.0)
    assert area2d(sq[::-1]) == pytest.approx(1.0)


def test_single_point_functionals():
    assert diameter2d([(3, 4)]) == 0.0
    assert area2d([(3, 4)]) == 0.0


def test_regular_polygon_area():
    m = 360
    a = 2 * np.pi * np.arange(m) / m
    poly = np.column_stack([np.cos(a), np.sin(a)])
    assert area2d(poly) == pytest.approx(m / 2 * math.sin(2 * math.pi / m), rel=1e-12)
    assert area2d(poly) == pytest.approx(math.pi, abs=1e-3)
    assert diameter2d(poly) == pytest.approx(2.0)
