import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logbm.combine import DirectionGrid, FlowSpec, VertexFlow
from logbm.errors import CentroidNotOrigin, NotATriangle, NotSymmetric, NumericalFailure
from logbm.geom_core import (
    EuclideanBall,
    Segment,
    Subspace,
    body_from_json,
    box,
    cube,
    dilate_body,
    linear_image,
    make_vpoly,
    regular_polygon,
)
from logbm.measure import DensitySpec
from logbm.sample import random_sym_vpoly, random_triangle_centroid, random_unconditional, random_vertex_flow, random_vpoly
from logbm.verify import (
    check_dual_log_bm,
    check_dual_quermass,
    check_dual_quermass_dim,
    check_gaussian_dilates,
    check_isotropy_derivative,
    check_log_bm,
    check_moment_gap,
    check_section_containment,
    check_simplex_lower_bound,
    check_strip_b,
    check_triangle_logbm,
    check_variance_bound,
    hunt,
    scan_b,
    scan_dual_b,
    scan_dual_family,
)
from logbm.verify.checks import mahler_product
from logbm.verify.reports import atomic_write, dump_json, inequality_report, scan_report

G2 = DirectionGrid.default(2)


def _rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


# ---------------------------------------------------------------- reports
def test_inequality_report_json_shape(tmp_path):
    rep = inequality_report("demo", 1.0, 2.0, "le", tolerance=1e-9)
    data = rep.to_json()
    assert data["pass"] is True and data["margin"] > 0
    path = tmp_path / "r.json"
    dump_json(rep, str(path))
    assert json.loads(path.read_text())["check_name"] == "demo"


def test_atomic_write_replaces(tmp_path):
    p = tmp_path / "x.txt"
    atomic_write(str(p), "a")
    atomic_write(str(p), "b")
    assert p.read_text() == "b"
    assert [f.name for f in tmp_path.iterdir()] == ["x.txt"]


def test_scan_report_basics():
    t = np.linspace(0, 1, 5)
    rep = scan_report("s", t, np.exp(-t ** 2), "concave")
    assert rep.passed and rep.min_second_diff > 0
    assert not scan_report("s", t, np.exp(t ** 2), "concave").passed
    assert "second_diff" in rep.to_csv().splitlines()[0]
    with pytest.raises(NumericalFailure):
        scan_report("s", t, [1.0, 0.0, 0.0, 0.0, 0.0], "concave")


# ---------------------------------------------------------------- log-BM
def test_log_bm_identity_case():
    K = random_sym_vpoly(2, 4, 0)
    rep = check_log_bm(K, K, 0.4, grid=G2.refine_with(K.normals))
    assert rep.passed and abs(rep.margin) < 1e-12


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([0.25, 0.5, 0.75]))
def test_log_bm_planar_property(seed, lam):
    K, L = random_sym_vpoly(2, 4, seed), random_sym_vpoly(2, 4, seed + 1)
    assert check_log_bm(K, L, lam, grid=G2).margin >= -1e-6


def test_log_bm_unconditional_boxes_3d():
    rep = check_log_bm(box([1, 2, 0.5]), box([2, 0.3, 1]), 0.5, grid=DirectionGrid.default(3))
    assert rep.passed


def test_log_bm_requires_symmetry():
    with pytest.raises(NotSymmetric):
        check_log_bm(regular_polygon(3), cube(2), 0.5)


def test_log_bm_gaussian():
    rep = check_log_bm(cube(2), random_sym_vpoly(2, 4, 3), 0.5, DensitySpec.gaussian(1.0), G2,
                       n_samples=100_000, seed=1)
    assert rep.passed and rep.stderr > 0


# ---------------------------------------------------------------- B-theorem scans
def test_scan_b_lebesgue_is_log_affine():
    rep = scan_b(DensitySpec.lebesgue(), cube(2), FlowSpec([1.0, 2.0]), np.linspace(-1, 1, 11))
    assert np.abs(rep.second_diffs).max() <= 1e-9
    assert rep.values[5] == pytest.approx(4.0)


def test_scan_b_gaussian_cube():
    rep = scan_b(DensitySpec.gaussian(1.0), cube(2), FlowSpec([1.0, 1.0]), np.linspace(-1, 1, 11),
                 n_samples=100_000, seed=2)
    assert rep.passed


def test_scan_b_unconditional_density_3d():
    dens = DensitySpec.gauge_exp(box([1.0, 2.0, 0.5]), 2.0)
    rep = scan_b(dens, random_unconditional(3, 2, 5), FlowSpec([1.0, -0.5, 0.2]), np.linspace(-0.5, 0.5, 7),
                 n_samples=100_000, seed=3)
    assert rep.passed


def test_strip_examples():
    assert check_strip_b(box([0.5, 2.0]), [1.0, 0.0], 1.0, np.linspace(-1, 1, 21)).passed
    assert check_strip_b(regular_polygon(64), [0.0, 1.0], 1.0, np.linspace(-1, 1.5, 26)).passed
    inside = check_strip_b(cube(2), [1.0, 0.0], 10.0, np.linspace(-1, 1, 9))
    assert np.abs(inside.second_diffs).max() <= 1e-12


def test_strip_disc_matches_segment_formula():
    from logbm.verify.scans import strip_volume

    P = regular_polygon(2048)
    r = 1.5
    expect = 2 * r * r * math.asin(1 / r) + 2 * math.sqrt(r * r - 1)
    assert strip_volume(P, [1.0, 0.0], 1.0, math.log(r)) == pytest.approx(expect, rel=1e-5)


# ---------------------------------------------------------------- dual log-BM
def test_dual_log_bm_identity():
    K = random_vpoly(2, 6, 1)
    rep = check_dual_log_bm(K, K, 0.3, G2)
    assert rep.passed and abs(rep.margin) < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.floats(0.05, 0.95))
def test_dual_log_bm_triangles(seed, lam):
    t1, t2 = random_triangle_centroid(seed), random_triangle_centroid(seed + 1)
    assert check_dual_log_bm(t1, t2, lam, G2).margin >= -1e-9


def test_dual_log_bm_3d():
    g = DirectionGrid.default(3)
    rep = check_dual_log_bm(random_vpoly(3, 8, 0), random_vpoly(3, 8, 1), 0.5, g)
    assert rep.margin >= -1e-8


# ---------------------------------------------------------------- dual B-theorem
def test_dual_b_uniform_exponent_is_affine():
    x = np.array([[1.0, 0.2], [-0.3, 1.0], [-1.0, -0.2], [0.3, -1.0]])
    rep = scan_dual_b(VertexFlow(x, [0.4] * 4), np.linspace(-1, 1, 21))
    assert np.abs(rep.second_diffs).max() <= 1e-12


def test_dual_b_random_flows():
    for s in range(10):
        flow = random_vertex_flow(2, 6, s)
        assert scan_dual_b(flow, np.linspace(*flow.window, 21)).min_second_diff >= -1e-9


def test_dual_b_triangle_cones():
    """Each origin cone over an edge is log-affine, so their sum is log-convex."""
    x = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])
    a = np.array([0.2, -0.3, 0.5])
    t = np.linspace(-1, 1, 11)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        cone = [abs(np.linalg.det(np.array([x[i] * np.exp(a[i] * s), x[j] * np.exp(a[j] * s)]))) / 2 for s in t]
        assert np.abs(np.diff(np.log(cone), 2)).max() <= 1e-12
    rep = scan_dual_b(VertexFlow(x, a), t)
    assert rep.passed and rep.min_second_diff > 0


def test_simplex_lower_bound_cases():
    flow = random_vertex_flow(2, 6, 7)
    r0 = check_simplex_lower_bound(flow, 0.0, 0.0)
    assert abs(r0.margin) <= 1e-12
    for r in (-0.3, 0.3):
        assert check_simplex_lower_bound(flow, 0.0, r).passed
    x = np.array([[1.0, 0.2], [-0.3, 1.0], [-1.0, -0.2], [0.3, -1.0]])
    assert abs(check_simplex_lower_bound(VertexFlow(x, [0.4] * 4), 0.0, 0.25).margin) <= 1e-12


# ---------------------------------------------------------------- dual quermassintegrals
def test_dual_quermass_identity_and_pairs():
    K = random_vpoly(2, 6, 2)
    assert abs(check_dual_quermass(K, K, 0.5, 1.0, 1, G2).margin) <= 1e-9
    L = random_vpoly(2, 6, 3)
    for p in (0.0, 1.0, 2.0):
        assert check_dual_quermass(K, L, 0.3, p, 1, G2).margin >= -1e-8


def test_dual_quermass_dim_implies_multiplicative():
    K, L = random_vpoly(2, 6, 4), random_vpoly(2, 6, 5)
    rep = check_dual_quermass_dim(K, L, 0.6, 2.0, 1, G2)
    assert rep.margin >= -1e-8
    assert rep.params["implies_multiplicative"] and rep.params["multiplicative_pass"]
    assert abs(check_dual_quermass_dim(K, K, 0.6, 2.0, 1, G2).margin) <= 1e-9


def test_dual_quermass_3d_kubota():
    g = DirectionGrid.default(3, 500)
    K, L = random_sym_vpoly(3, 4, 1), random_sym_vpoly(3, 4, 2)
    rep = check_dual_quermass(K, L, 0.5, 1.0, 1, g, n_subspaces=500, seed=0, method="kubota")
    assert rep.passed and rep.stderr > 0


# ---------------------------------------------------------------- dilates, sections, triangles
def test_gaussian_dilates():
    assert abs(check_gaussian_dilates(DensitySpec.gaussian(1.0), cube(2), 1.0, 1.0, 0.3,
                                      n_samples=10_000, seed=0).margin) <= 1e-12
    rep = check_gaussian_dilates(DensitySpec.gaussian(1.0), cube(2), 0.5, 2.0, 0.3, n_samples=100_000, seed=1)
    assert rep.passed
    leb = check_gaussian_dilates(DensitySpec.lebesgue(), cube(2), 0.5, 2.0, 0.3)
    assert abs(leb.margin) <= 1e-12


def test_section_containment():
    K, L = random_sym_vpoly(2, 4, 1), random_sym_vpoly(2, 4, 2)
    H = Subspace.coordinate(2, [0])
    assert check_section_containment(K, K, 0.5, H, G2, n_probes=50).margin >= -1e-12
    assert check_section_containment(K, L, 0.5, H, G2, n_probes=50).passed
    K3, L3 = random_sym_vpoly(3, 4, 3), random_sym_vpoly(3, 4, 4)
    g3 = DirectionGrid.default(3, 800)
    assert check_section_containment(K3, L3, 0.4, Subspace.coordinate(3, [0, 2]), g3, n_probes=100).passed


def test_triangle_examples():
    T = regular_polygon(3)
    assert mahler_product(T) == pytest.approx(6.75, abs=1e-9)
    same = check_triangle_logbm(T, T, 0.5, G2)
    assert same.passed and same.params["mahler_1"] == pytest.approx(6.75, abs=1e-9)
    assert check_triangle_logbm(T, linear_image(T, _rot(0.4)), 0.5, G2).passed
    assert check_triangle_logbm(T, dilate_body(T, 1.7), 0.5, G2).passed


def test_triangle_input_validation():
    with pytest.raises(NotATriangle):
        check_triangle_logbm(cube(2), regular_polygon(3), 0.5)
    off = make_vpoly(regular_polygon(3).vertices + [0.1, 0.0])
    with pytest.raises(CentroidNotOrigin):
        check_triangle_logbm(off, regular_polygon(3), 0.5)


# ---------------------------------------------------------------- smoothed duals
def test_dual_family_examples():
    t = np.linspace(-2, 2, 21)
    assert scan_dual_family(cube(2), EuclideanBall(2), 2.0, 1.0, t).passed
    assert scan_dual_family(box([1, 2]), box([0.5, 1]), 1.0, 0.7, t).passed
    assert scan_dual_family(cube(2), Segment(np.array([1.0, 0.0])), 2.0, 1.0, t).passed


def test_dual_family_identity_closed_form():
    K, p, a, n = random_sym_vpoly(2, 4, 3), 2.0, 0.7, 2
    t = np.linspace(-1, 1, 11)
    rep = scan_dual_family(K, K, p, a, t)
    f = -(n / p) * np.log1p(np.exp(t) * a)
    expect = f[:-2] - 2 * f[1:-1] + f[2:]
    assert np.abs(rep.second_diffs - expect).max() <= 1e-9


def test_moment_gap_disc():
    P = regular_polygon(64)
    rep = check_moment_gap(P, P, 2.0, 1.0, n_samples=200_000, seed=0)
    assert rep.passed
    assert rep.lhs == pytest.approx(math.pi ** 2 / 192, rel=2e-2)
    assert rep.rhs == pytest.approx(math.pi ** 2 / 32, rel=2e-2)


def test_moment_gap_boxes():
    assert check_moment_gap(box([1, 2]), box([0.5, 1]), 2.0, 1.0, n_samples=100_000, seed=0).passed


def test_isotropy_derivative():
    ball = check_isotropy_derivative(regular_polygon(720), 1.0, [1.0, 0.0])
    assert abs(ball.lhs) <= 1e-10 and abs(ball.rhs) <= 1e-10
    rep = check_isotropy_derivative(linear_image(cube(2), np.diag([2.0, 1.0])), 1.0, [1.0, 0.0])
    assert rep.passed


def test_variance_bound_square():
    rep = check_variance_bound(cube(2), 1.0, n_samples=100_000, seed=0)
    assert rep.passed


# ---------------------------------------------------------------- hunt
def test_hunt_reproducible_and_replayable():
    a = hunt("dual-log-bm", 2, 6, seed=3)
    b = hunt("dual-log-bm", 2, 6, seed=3)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert not a.confirmed
    trial, rep = a.worst[0]
    inst = rep.params["instance"]
    again = check_dual_log_bm(body_from_json(inst["K"]), body_from_json(inst["L"]), inst["lambda"],
                              DirectionGrid.default(2))
    assert again.margin == rep.margin


def test_hunt_triangles_planar_only():
    with pytest.raises(ValueError):
        hunt("triangle-logbm", 3, 1)


@pytest.mark.parametrize("name", ["dual-b", "simplex-lower-bound", "dual-quermass", "section-containment"])
def test_hunt_each_generator(name):
    res = hunt(name, 2, 2, seed=1, probes=20)
    assert len(res.worst) == 2 and not res.confirmed
    json.dumps(res.to_json())
