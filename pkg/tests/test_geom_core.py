import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logbm.errors import DegenerateBody, DimensionMismatch, UnboundedBody, UnsupportedDimension
from logbm.geom_core import (
    EuclideanBall,
    Subspace,
    body_from_json,
    box,
    cross_polytope,
    cube,
    in_out_radius,
    linear_image,
    make_hpoly,
    make_vpoly,
    polar_dual,
    project,
    regular_polygon,
    schwartz_profile,
    section,
    to_hrep,
    to_vrep,
)
from logbm.measure import volume
from logbm.sample import random_sym_vpoly, random_vpoly

E2 = np.array([[1.0, 0], [-1, 0], [0, 1], [0, -1]])


def _same_points(a, b, tol=1e-9):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return bool(np.all(d.min(axis=1) < tol) and np.all(d.min(axis=0) < tol))


# ---------------------------------------------------------------- construction
def test_hpoly_square():
    K = make_hpoly(E2, np.ones(4))
    assert _same_points(K.vertices, [[1, 1], [1, -1], [-1, 1], [-1, -1]])
    assert volume(K) == pytest.approx(4.0)


def test_hpoly_strip_is_unbounded():
    with pytest.raises(UnboundedBody):
        make_hpoly(E2[:2], np.ones(2))


def test_hpoly_symmetrize_single_normal_still_unbounded():
    with pytest.raises(UnboundedBody):
        make_hpoly([[1.0, 0.0]], [1.0], symmetrize=True)


def test_vpoly_cross_polytope():
    K = make_vpoly(E2)
    assert len(K.vertices) == 4
    assert volume(K) == pytest.approx(2.0)


def test_vpoly_drops_interior_point():
    K = make_vpoly([[1, 1], [1, -1], [-1, 1], [-1, -1], [0, 0.5]])
    assert len(K.vertices) == 4


def test_vpoly_collinear_is_degenerate():
    with pytest.raises(DegenerateBody):
        make_vpoly([[0, 0], [1, 1], [2, 2]])


def test_dimension_mismatch():
    with pytest.raises((DimensionMismatch, ValueError)):
        make_hpoly(E2, np.ones(3))


# ---------------------------------------------------------------- support / gauge
def test_support_examples():
    C2, B = cube(2), cross_polytope(2)
    assert C2.support(np.array([1, 1]) / np.sqrt(2)) == pytest.approx(np.sqrt(2))
    assert B.support(np.array([1.0, 0.0])) == pytest.approx(1.0)
    assert C2.support(np.zeros(2)) == 0.0


def test_support_lp_matches_vertex_max():
    K = random_vpoly(3, 8, 4)
    u = np.array([0.3, -0.2, 0.9])
    assert K.support_lp(u) == pytest.approx(K.support(u), abs=1e-10)


def test_gauge_examples():
    assert cube(2).gauge(np.array([2.0, 0.0])) == pytest.approx(2.0)
    assert cube(3).gauge(np.zeros(3)) == 0.0
    assert cross_polytope(2).gauge(np.array([0.5, 0.5])) == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.1, 5.0))
def test_gauge_homogeneous_and_polar_support(seed, c):
    K = random_vpoly(2, 6, seed)
    x = np.array([0.7, -0.4])
    assert K.gauge(c * x) == pytest.approx(c * K.gauge(x), rel=1e-12)
    assert K.gauge(x) == pytest.approx(polar_dual(K).support(x), rel=1e-9)


# ---------------------------------------------------------------- polarity
def test_polar_of_cube_is_cross_polytope():
    D = polar_dual(cube(3))
    assert _same_points(D.vertices, np.vstack([np.eye(3), -np.eye(3)]))


def test_polar_equilateral_triangle_area():
    T = regular_polygon(3)
    assert volume(T) == pytest.approx(3 * np.sqrt(3) / 4, abs=1e-12)
    assert volume(polar_dual(T)) == pytest.approx(3 * np.sqrt(3), abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_polarity_is_involution(seed, n):
    K = random_vpoly(n, 7, seed)
    KK = polar_dual(polar_dual(K))
    assert _same_points(KK.vertices, K.vertices, tol=1e-8)


def test_polar_idempotent_normalization():
    K = polar_dual(cube(2))
    assert np.allclose(np.linalg.norm(polar_dual(K).normals, axis=1), 1.0)


# ---------------------------------------------------------------- conversions
def test_cube3_vertices():
    assert _same_points(to_vrep(cube(3)).vertices, np.array(np.meshgrid(*[[1, -1]] * 3)).reshape(3, -1).T)


def test_cross3_facets():
    K = to_hrep(cross_polytope(3))
    assert len(K.normals) == 8
    assert np.allclose(np.abs(K.normals), 1 / np.sqrt(3))
    assert np.allclose(K.offsets, 1 / np.sqrt(3))


def test_high_dimension_vertex_enumeration_unsupported():
    with pytest.raises(UnsupportedDimension):
        to_vrep(cube(5))


def test_linear_image():
    assert _same_points(linear_image(cube(2), np.eye(2)).vertices, cube(2).vertices)
    K = linear_image(cube(2), np.diag([2.0, 1.0]))
    assert _same_points(K.vertices, box([2.0, 1.0]).vertices)


def test_json_round_trip_is_exact():
    K = random_sym_vpoly(3, 5, 11)
    R = body_from_json(K.to_json())
    assert np.array_equal(R.vertices, K.vertices)
    assert np.array_equal(R.normals, K.normals)


# ---------------------------------------------------------------- sections, projections
def test_section_and_projection():
    H2 = Subspace.coordinate(3, [0, 1])
    assert volume(section(cube(3), H2)) == pytest.approx(4.0)
    seg = project(cube(3), Subspace.coordinate(3, [0]))
    assert seg.support(np.array([1.0])) == pytest.approx(1.0)
    assert seg.support(np.array([-1.0])) == pytest.approx(1.0)
    P = project(cross_polytope(3), H2)
    assert _same_points(P.vertices, E2)


def test_in_out_radius():
    assert in_out_radius(cube(2)) == pytest.approx((1.0, np.sqrt(2)))
    r, R = in_out_radius(regular_polygon(64))
    assert abs(r - 1) < 2e-3 and abs(R - 1) < 2e-3
    assert in_out_radius(linear_image(cube(2), np.diag([3.0, 1.0]))) == pytest.approx((1.0, np.sqrt(10)))


def test_schwartz_profile_of_square():
    r = schwartz_profile(cube(2), np.array([1.0, 0.0]), np.array([0.0]))
    assert r[0] == pytest.approx(1.0)


def test_symmetry_flags():
    assert cube(3).is_symmetric
    assert not regular_polygon(3).is_symmetric


def test_ball_functional():
    B = EuclideanBall(3, 2.0)
    assert B.support(np.array([0, 0, 1.0])) == pytest.approx(2.0)
    assert B.gauge(np.array([1.0, 0, 0])) == pytest.approx(0.5)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_polarity_support_on_probe(seed, n):
    from logbm.sample import sphere_uniform

    K = random_vpoly(n, 7, seed)
    u = sphere_uniform(n, 1000, seed)
    assert np.max(np.abs(polar_dual(polar_dual(K)).support(u) - K.support(u))) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_support_of_linear_image(seed):
    rng = np.random.default_rng(seed)
    K = random_vpoly(2, 6, seed)
    T = rng.normal(size=(2, 2)) + 2 * np.eye(2)
    u = rng.normal(size=(5, 2))
    assert np.allclose(linear_image(K, T).support(u), K.support(u @ T), atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.floats(1.0, 3.0))
def test_containment_order(seed, c):
    K = random_sym_vpoly(2, 4, seed)
    L = make_hpoly(K.normals, c * K.offsets)
    assert np.all(L.gauge(K.vertices) <= 1 + 1e-12)
    u = np.random.default_rng(seed).normal(size=(20, 2))
    assert np.all(K.support(u) <= L.support(u) + 1e-12)


def test_schwartz_profile_endpoint_is_support():
    K = random_sym_vpoly(2, 4, 6)
    u = np.array([0.6, 0.8])
    h = K.support(u)
    r = schwartz_profile(K, u, np.array([h * (1 - 1e-9), h * 1.01]))
    assert r[1] == 0.0 and r[0] >= 0.0


def test_body_json_shapes():
    assert cube(2).to_json()["rep"] == "H" and cube(2).to_json()["symmetric"] is True
    assert set(cross_polytope(2).to_json()) >= {"rep", "vertices"}
