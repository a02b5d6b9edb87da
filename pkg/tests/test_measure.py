import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logbm.errors import InvalidP, NotIsotropic
from logbm.geom_core import EuclideanBall, box, cross_polytope, cube, linear_image, make_vpoly, regular_polygon
from logbm.measure import (
    DensitySpec,
    ball_volume,
    cone_volume,
    density_norm_constant,
    isotropic_constant,
    isotropic_map,
    mc_mean,
    measure_of,
    moments,
    quermass,
    sigma2,
    sphere_area,
    steiner_fit,
    volume,
    volume_mc,
    volume_sphere,
)
from logbm.measure.quadrature import arc_quadrature
from logbm.sample import random_sym_vpoly, random_vpoly


# ---------------------------------------------------------------- volumes
def test_exact_volumes():
    assert volume(cube(2)) == pytest.approx(4.0)
    assert volume(cube(3)) == pytest.approx(8.0)
    assert volume(cross_polytope(3)) == pytest.approx(4 / 3)
    simplex = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]])
    assert volume(make_vpoly(simplex - simplex.mean(axis=0))) == pytest.approx(1 / 6)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_volume_linear_image(seed, n):
    K = random_vpoly(n, 8, seed)
    A = np.random.default_rng(seed).normal(size=(n, n)) + 3 * np.eye(n)
    assert volume(linear_image(K, A)) == pytest.approx(abs(np.linalg.det(A)) * volume(K), rel=1e-9)


def test_volume_mc_examples():
    est = volume_mc(cube(4), 10**5, seed=1)
    assert abs(est.value - 16) <= 3 * est.stderr + 1e-12
    est = volume_mc(cross_polytope(4), 10**5, seed=2)
    assert abs(est.value - 2 / 3) <= 3 * est.stderr


def test_volume_sphere():
    assert volume_sphere(EuclideanBall(2).gauge, 2) == pytest.approx(math.pi, rel=1e-10)
    K = cube(2)
    c = 1.7
    q = arc_quadrature(np.array([np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4]))
    base = volume_sphere(K.gauge, 2, q)
    assert base == pytest.approx(4.0, rel=1e-10)
    assert volume_sphere(lambda x: c * K.gauge(x), 2, q) == pytest.approx(base * c ** -2, rel=1e-12)


def test_ball_constants():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


def test_cone_volumes():
    assert np.allclose(cone_volume(cube(2)), 1.0)
    assert np.allclose(cone_volume(cube(3)), 8 / 6)
    K = random_vpoly(3, 9, 5)
    assert cone_volume(K).sum() == pytest.approx(volume(K), rel=1e-10)


# ---------------------------------------------------------------- Monte Carlo engine
def test_mc_mean_chunk_independent_of_scheduling():
    f = lambda rng, k: rng.random((k, 2))  # noqa: E731
    a = mc_mean(f, 200_000, 3)
    b = mc_mean(f, 200_000, 3)
    assert np.array_equal(a.mean, b.mean) and np.array_equal(a.cov, b.cov)
    assert np.allclose(a.mean, 0.5, atol=5e-3)


def test_mc_stderr_scales():
    f = lambda rng, k: rng.random((k, 1))  # noqa: E731
    s1 = np.sqrt(mc_mean(f, 10_000, 0).cov[0, 0])
    s2 = np.sqrt(mc_mean(f, 160_000, 0).cov[0, 0])
    assert s1 / s2 == pytest.approx(4.0, rel=0.05)


# ---------------------------------------------------------------- densities
def test_gaussian_interval():
    for method in ("indicator", "radial"):
        est = measure_of(box([1.0]), DensitySpec.gaussian(1.0), 200_000, 1, method=method)
        assert abs(est.value - math.erf(2 ** -0.5)) <= 3 * est.stderr + 1e-12


def test_gaussian_whole_space():
    assert measure_of(None, DensitySpec.gaussian(2.0), 1000, 0).value == pytest.approx(1.0)


def test_lebesgue_and_uniform_on():
    assert measure_of(cube(2), DensitySpec.lebesgue()).value == pytest.approx(4.0)
    W = box([0.5, 2.0])
    assert measure_of(cube(2), DensitySpec.uniform_on(W)).value == pytest.approx(2.0)
    assert measure_of(W, DensitySpec.uniform_on(W)).value == pytest.approx(volume(W))


def test_density_validation():
    with pytest.raises(InvalidP):
        DensitySpec.gauge_exp(cube(2), 0.5)
    with pytest.raises(ValueError):
        DensitySpec.gaussian(-1.0)


def test_norm_constant_one_dimensional_exact():
    assert density_norm_constant(box([1.0]), 1.0).value == pytest.approx(1.0, abs=1e-6)
    assert density_norm_constant(box([1.0]), 2.0).value == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-6)


def test_norm_constant_square():
    est = density_norm_constant(cube(2), 2.0, 200_000, 0)
    assert abs(est.value - 1.0) <= 4 * est.stderr


# ---------------------------------------------------------------- quermassintegrals
def test_quermass_square_and_disc():
    est = quermass(cube(2), 1, n_subspaces=2000, seed=0)
    assert abs(est.value - 4.0) <= 3 * est.stderr
    assert quermass(cube(2), 0).value == pytest.approx(4.0)
    assert quermass(cube(2), 2).value == pytest.approx(math.pi)
    assert quermass(regular_polygon(64), 1, method="exact").value == pytest.approx(math.pi, rel=1e-2)


def test_quermass_exact_cube3():
    assert quermass(cube(3), 1, method="exact").value == pytest.approx(8.0)
    assert quermass(cube(3), 2, method="exact").value == pytest.approx(2 * math.pi)


def test_steiner_fit_square():
    fit = steiner_fit(cube(2))
    assert fit.coefficients == pytest.approx([4.0, 8.0, math.pi], rel=1e-4)
    assert fit.quermass == pytest.approx([4.0, 4.0, math.pi], rel=1e-4)


def test_steiner_fit_ball():
    fit = steiner_fit(regular_polygon(90))
    assert fit.quermass == pytest.approx([math.pi] * 3, rel=1e-2)


# ---------------------------------------------------------------- moments and isotropy
def test_unconditional_off_diagonal_vanishes():
    m = moments(box([1.0, 2.0]), n_samples=200_000, seed=4)
    assert abs(m.covariance[0, 1]) <= 3 * m.covariance_stderr[0, 1]


def test_isotropic_map_of_box():
    T = isotropic_map(linear_image(cube(2), np.diag([2.0, 1.0])), 400_000, 0)
    M = T @ np.diag([2.0, 1.0])
    G = M.T @ M
    assert G[0, 1] == pytest.approx(0.0, abs=2e-2)
    assert G[0, 0] / G[1, 1] == pytest.approx(1.0, rel=2e-2)
    assert isotropic_map(cube(3), 200_000, 0) == pytest.approx(np.eye(3), abs=2e-2)


def test_isotropic_constant_cube():
    est = isotropic_constant(cube(2), 200_000, 0)
    assert est.value == pytest.approx(1 / math.sqrt(12), rel=1e-2)


def test_isotropic_constant_exceeds_ball():
    ball = isotropic_constant(regular_polygon(256), 200_000, 0).value
    K = random_sym_vpoly(2, 3, 7)
    LK = isotropic_constant(linear_image(K, isotropic_map(K, 200_000, 1)), 200_000, 2).value
    assert LK >= ball - 3e-3


def test_sigma2_cube_and_anisotropy_guard():
    est = sigma2(cube(2), 400_000, 0)
    assert est.value == pytest.approx(0.8, rel=2e-2)
    with pytest.raises(NotIsotropic):
        sigma2(box([1.0, 3.0]), 200_000, 0)


def test_quermass_homogeneity():
    K = random_sym_vpoly(3, 4, 2)
    for t in (0.5, 2.0):
        a = quermass(K, 1, n_subspaces=1000, seed=1)
        b = quermass(linear_image(K, t * np.eye(3)), 1, n_subspaces=1000, seed=1)
        assert abs(b.value - t ** 2 * a.value) <= 4 * math.hypot(b.stderr, t ** 2 * a.stderr) + 1e-12


def test_norm_constant_independent_of_body():
    a = density_norm_constant(cube(2), 1.0, 200_000, 0)
    b = density_norm_constant(random_sym_vpoly(2, 3, 5), 1.0, 200_000, 1)
    assert abs(a.value - b.value) <= 4 * math.hypot(a.stderr, b.stderr)


def test_isotropic_map_unit_determinant():
    T = isotropic_map(random_sym_vpoly(2, 3, 9), 100_000, 0)
    assert abs(np.linalg.det(T) - 1) <= 1e-9
