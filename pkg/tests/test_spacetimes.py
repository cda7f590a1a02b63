"""Model-spacetime oracles: cone rules, sampling, curves, arctan extension."""

import math

import numpy as np
import pytest

from cltlab.setlimits import DomainError
from cltlab.spacetimes import (
    HALF_PI,
    ChartError,
    conformal_factor,
    conformal_factor_gradient,
    curve_points,
    hstrip,
    mink2,
    mink2_square_extension,
    null_geodesic,
    sample,
    square,
    timelike_geodesic,
    to_extension,
    to_extension_arr,
    vstrip,
)


# ---------------------------------------------------------------- oracles

def test_mink2_chron_basic():
    M = mink2()
    assert M.chron((0, 0), (1, 0))
    assert not M.chron((0, 0), (1, 2))


def test_vstrip_chron_inside_strip():
    V = vstrip()
    assert V.chron((0, 0.5), (2, -0.5))  # dt=2 > 1=|dx|


def test_caus_null_related():
    M = mink2()
    assert M.caus((0, 0), (1, 1))
    assert not M.chron((0, 0), (1, 1))


def test_out_of_chart_rejected():
    with pytest.raises(ChartError):
        vstrip().chron((0, 1.5), (2, 0))
    with pytest.raises(ChartError):
        hstrip().caus((1.5, 0), (2, 0))


def test_oracle_sanity_random_batch():
    rng = np.random.default_rng(101)
    M = mink2()
    pts = rng.uniform(-5, 5, size=(400, 2))
    for _ in range(10_000):
        i, j = rng.integers(0, len(pts), size=2)
        p, q = pts[i], pts[j]
        chron = M.chron(p, q)
        # irreflexivity / antisymmetry
        if np.all(p == q):
            assert not chron
        if chron:
            assert not M.chron(q, p)
            assert M.caus(p, q)  # chron implies caus
        # literal cone rule
        dt, dx = q[0] - p[0], q[1] - p[1]
        assert chron == (dt > abs(dx) + 1e-9)


def test_caus_transitive_and_pushup_sampled_triples():
    rng = np.random.default_rng(103)
    M = mink2()
    pts = rng.uniform(-4, 4, size=(300, 2))
    checked = 0
    for _ in range(100_000):
        i, j, k = rng.integers(0, len(pts), size=3)
        p, q, r = pts[i], pts[j], pts[k]
        if M.caus(p, q) and M.caus(q, r):
            assert M.caus(p, r)
            checked += 1
        if M.caus(p, q) and M.chron(q, r):
            assert M.chron(p, r)  # push-up
        if M.chron(p, q) and M.caus(q, r):
            assert M.chron(p, r)
    assert checked > 100


# ---------------------------------------------------------------- sampling

def test_sample_counts_mink2():
    cloud = sample(mink2(), 0.5, ((-1, 1), (-1, 1)))
    assert len(cloud) == 25


def test_sample_vstrip_includes_boundary_columns():
    cloud = sample(vstrip(), 0.5, ((-1, 1), (-2, 2)))
    xs = np.unique(cloud.points[:, 1])
    assert xs.min() == -1.0 and xs.max() == 1.0
    assert len(xs) == 5


def test_sample_refinement_nests():
    win = ((-1, 1), (-1, 1))
    coarse = sample(mink2(), 0.5, win)
    fine = sample(mink2(), 0.25, win)
    fine_keys = {tuple(np.round(p, 9)) for p in fine.points}
    assert all(tuple(np.round(p, 9)) in fine_keys for p in coarse.points)


def test_sample_empty_window_rejected():
    with pytest.raises(ChartError):
        sample(hstrip(), 0.1, ((2, 3), (-1, 1)))


# ---------------------------------------------------------------- curves

def test_vertical_geodesic_chain():
    M = mink2()
    pts = curve_points(M, timelike_geodesic((0, 0), 0.0), 3)
    assert np.allclose(pts, [(0, 0), (1, 0), (2, 0)])


def test_null_geodesic_chron_flat():
    M = mink2()
    c = null_geodesic("u", 0.0, domain=(0.0, float("inf")))
    pts = curve_points(M, c, 5)
    u = pts[:, 0] - pts[:, 1]
    v = pts[:, 0] + pts[:, 1]
    assert np.allclose(u, 0.0)
    assert np.all(np.diff(v) > 0)


def test_timelike_chain_validity_batch():
    rng = np.random.default_rng(11)
    M = mink2()
    for _ in range(50):
        beta = float(rng.uniform(-0.9, 0.9))
        base = tuple(rng.uniform(-1, 1, size=2))
        pts = curve_points(M, timelike_geodesic(base, beta), 8, schedule="geometric", step=0.1)
        for p, q in zip(pts[:-1], pts[1:]):
            assert M.chron(p, q)


def test_curve_needs_two_points_and_domain():
    M = mink2()
    with pytest.raises(DomainError):
        curve_points(M, timelike_geodesic(), 1)
    with pytest.raises(DomainError):
        curve_points(M, timelike_geodesic(domain=(1.0, 1.0)), 3)


def test_beta_must_be_subluminal():
    with pytest.raises(DomainError):
        timelike_geodesic((0, 0), 1.0)


# ---------------------------------------------------------------- extension

def test_to_extension_origin_and_quarter():
    assert to_extension((0, 0)) == (0.0, 0.0)
    # null coordinates (u, v) = (1, 0) correspond to (t, x) = (1/2, -1/2)
    up, vp = to_extension((0.5, -0.5))
    assert up == pytest.approx(math.pi / 4)
    assert vp == pytest.approx(0.0)


def test_to_extension_chron_isomorphism_batch():
    rng = np.random.default_rng(21)
    M, S = mink2(), square()
    pts = rng.uniform(-5, 5, size=(200, 2))
    img = to_extension_arr(pts)
    for _ in range(10_000):
        i, j = rng.integers(0, 200, size=2)
        assert M.chron(pts[i], pts[j]) == S.chron(img[i], img[j])


def test_conformal_factor_values():
    assert conformal_factor((0, 0)) == pytest.approx(1.0)
    assert conformal_factor((HALF_PI, 0)) == pytest.approx(0.0)
    assert conformal_factor_gradient((HALF_PI, 0)) == pytest.approx((-1.0, 0.0))


def test_conformal_factor_corner_degenerate():
    corner = (HALF_PI, HALF_PI)
    assert conformal_factor(corner) == pytest.approx(0.0)
    g = conformal_factor_gradient(corner)
    assert g == pytest.approx((0.0, 0.0))


def test_extension_constructor_spot_checks():
    ext = mink2_square_extension()
    assert ext.base.name == "mink2"
    assert ext.on_future_boundary((0.3, HALF_PI))
    assert ext.on_future_boundary(ext.i_plus())
    assert not ext.on_future_boundary((0.3, 0.3))
    assert not ext.on_future_boundary((-HALF_PI, HALF_PI))  # no past below it
    assert not ext.on_future_boundary((0.3, -HALF_PI))


# ---------------------------------------------------------------- hstrip ceiling

def test_hstrip_chain_respects_ceiling():
    rng = np.random.default_rng(31)
    H = hstrip()
    for _ in range(40):
        x0 = float(rng.uniform(-1, 1))
        t0 = float(rng.uniform(-0.9, 0.0))
        beta = float(rng.uniform(-0.7, 0.7))
        s_exit = 1.0 - t0  # parameter at which t reaches the ceiling
        c = timelike_geodesic((t0, x0), beta, domain=(0.0, s_exit))
        pts = curve_points(H, c, 10, schedule="geometric")
        assert np.all(pts[:, 0] <= 1.0)
        for p, q in zip(pts[:-1], pts[1:]):
            assert H.chron(p, q)
