"""Null-infinity classification, the compact-future operator, regularity,
and the conformal-edge inclusion check."""

import math

import numpy as np
import pytest

from cltlab.cboundary import BoundaryCatalogue, ip_of_curve, ip_of_point, psi
from cltlab.causal_tools import rect_region
from cltlab.scri import (
    ScriLabel,
    check_ample,
    check_past_complete,
    check_voila,
    classify_boundary_ip,
    conformal_scri,
    i_plus_tilde,
)
from cltlab.setlimits import DomainError
from cltlab.spacetimes import (
    HALF_PI,
    mink2,
    mink2_square_extension,
    null_geodesic,
    sample,
    timelike_geodesic,
)

M = mink2()
H = 0.1
# family parameters extend past the compact regions used below, so each
# component keeps members escaping their futures
CS = np.linspace(-3.0, 3.0, 7)


@pytest.fixture(scope="module")
def cloud():
    return sample(M, H, ((-2.0, 2.0), (-2.0, 2.0)))


@pytest.fixture(scope="module")
def catalogue(cloud):
    entries = []
    for c in CS:
        entries.append(ip_of_curve(M, cloud, null_geodesic("u", float(c), domain=(-5.0, float("inf"))), k=16))
    for c in CS:
        entries.append(
            ip_of_curve(
                M, cloud, null_geodesic("v", float(c), domain=(-5.0, float("inf"))), k=16, label=f"v<{c:g}"
            )
        )
    entries.append(ip_of_curve(M, cloud, timelike_geodesic((0, 0), 0.0), k=10, label="i+"))
    return BoundaryCatalogue(M, H, entries)


def scri_members(cat):
    return [e for e in cat.entries if e.family is not None]


# ---------------------------------------------------------------- classification

def test_classify_null_ray_halfplane(cloud, catalogue):
    cls = classify_boundary_ip(M, catalogue.entries[3])  # u-family
    assert cls.label == ScriLabel.NULL_INFINITY
    assert cls.diagnostics["family"] == "u"
    assert cls.diagnostics["parameter"] == pytest.approx(CS[3], abs=1e-9)
    assert all(flag for _, flag in cls.generators)


def test_classify_timelike_tip(cloud, catalogue):
    cls = classify_boundary_ip(M, catalogue.entries[-1])
    assert cls.label == ScriLabel.TIMELIKE_INFINITY


def test_classify_rejects_interior(cloud):
    P = ip_of_point(M, cloud, (1.0, 0.0))
    with pytest.raises(DomainError):
        classify_boundary_ip(M, P)


def test_classification_exact_over_catalogue(catalogue):
    labels = [classify_boundary_ip(M, e).label for e in catalogue.entries]
    assert labels[:-1] == [ScriLabel.NULL_INFINITY] * 14
    assert labels[-1] == ScriLabel.TIMELIKE_INFINITY
    assert ScriLabel.UNCLASSIFIED not in labels


# ---------------------------------------------------------------- compact future

def test_i_plus_tilde_origin(cloud, catalogue):
    C = rect_region(M, 0.0, 0.0, 0.0, 0.0, name="origin")
    got = {P.label for P in i_plus_tilde(M, cloud, C, catalogue)}
    expected = {"i+"}
    for c in CS:
        if c >= 0:
            expected.add(f"u<{c:g}")
            expected.add(f"v<{c:g}")
    assert got == expected


def test_i_plus_tilde_empty_region(cloud, catalogue):
    C = rect_region(M, 5, 6, 5, 6, name="empty")
    assert i_plus_tilde(M, cloud, C, catalogue) == []


def test_i_plus_tilde_monotone_in_c(cloud, catalogue):
    small = rect_region(M, -0.2, 0.2, -0.2, 0.2)
    large = rect_region(M, -1.0, 1.0, -1.0, 1.0)
    a = {P.label for P in i_plus_tilde(M, cloud, small, catalogue)}
    b = {P.label for P in i_plus_tilde(M, cloud, large, catalogue)}
    assert a <= b


def test_i_plus_tilde_upward_closed(cloud, catalogue):
    C = rect_region(M, -1.0, 1.0, -1.0, 1.0)
    inside = i_plus_tilde(M, cloud, C, catalogue)
    ids = {id(P) for P in inside}
    for P in inside:
        for Q in catalogue.entries:
            if not (P.indicator.mask & ~Q.indicator.mask).any():
                assert id(Q) in ids  # indicator order is respected


# ---------------------------------------------------------------- regularity

def test_ample_for_unit_box(cloud, catalogue):
    comps = {
        "u-family": [e for e in catalogue.entries if e.family and e.family[0] == "u"],
        "v-family": [e for e in catalogue.entries if e.family and e.family[0] == "v"],
    }
    rep = check_ample(M, cloud, catalogue, comps, rect_region(M, -1, 1, -1, 1))
    assert rep["ok"]
    for comp in rep["components"].values():
        assert comp["escaping"]


def test_ample_reports_failure_for_huge_region(cloud, catalogue):
    comps = {"u-family": [e for e in catalogue.entries if e.family and e.family[0] == "u"]}
    # region so large its pasts contain every catalogued half-plane
    rep = check_ample(M, cloud, catalogue, comps, rect_region(M, -2, 2, -2, 2))
    assert not rep["ok"]


def test_ample_empty_region_trivial(cloud, catalogue):
    comps = {"u-family": [e for e in catalogue.entries if e.family and e.family[0] == "u"]}
    rep = check_ample(M, cloud, catalogue, comps, rect_region(M, 5, 6, 5, 6))
    assert rep["ok"]


def test_past_complete_full_catalogue(catalogue):
    rep = check_past_complete(catalogue, scri_members(catalogue))
    assert rep["ok"]


def test_past_complete_detects_corruption(catalogue):
    members = scri_members(catalogue)
    # drop one mid-family entry: its superset stays, so the check must fail
    dropped = [m for m in members if m.label != "u<0"]
    rep = check_past_complete(catalogue, dropped)
    assert not rep["ok"]
    assert ("u<0", "u<0.5") in rep["violations"] or any(
        q == "u<0" for q, _ in rep["violations"]
    )


# ---------------------------------------------------------------- conformal edges

def test_conformal_scri_membership():
    ext = mink2_square_extension()
    edges = conformal_scri(ext, [0.0, -1.0, 1.0])
    vpts = edges["v-edge"]
    assert (0.0, HALF_PI) in vpts
    assert (math.atan(-1.0), HALF_PI) in vpts
    for p in edges["u-edge"]:
        assert p[0] == HALF_PI and abs(p[1]) < HALF_PI


def test_conformal_scri_excludes_corner():
    ext = mink2_square_extension()
    edges = conformal_scri(ext, np.linspace(-5, 5, 21))
    for pts in edges.values():
        assert all(p != (HALF_PI, HALF_PI) for p in pts)
        assert len(pts) == 21


def test_voila_all_edge_points_null_infinity(cloud):
    ext = mink2_square_extension()
    edges = conformal_scri(ext, CS)
    rep = check_voila(ext, cloud, edges)
    assert rep.n_points == 14
    assert rep.ok


def test_psi_of_edge_classifies_null(cloud):
    ext = mink2_square_extension()
    p = (math.atan(0.5), HALF_PI)
    entry = psi(ext, p, cloud)
    cls = classify_boundary_ip(M, entry)
    assert cls.label == ScriLabel.NULL_INFINITY
    assert cls.diagnostics["parameter"] == pytest.approx(0.5, abs=2 * H)
