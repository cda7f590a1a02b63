"""Null infinity for sampled future boundaries.

Classification of boundary entries against the analytic half-plane
families, the future-of-a-compact-region operator on a catalogue, the
ampleness and past-completeness checks, conformal null-infinity extraction
on the square, and the inclusion of the conformal points into the
classified null infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cboundary import BoundaryCatalogue, CompletionPoint, psi
from .causal_tools import Region
from .setlimits import DomainError, PointCloud
from .spacetimes import (
    HALF_PI,
    ConformalExtension,
    ModelSpacetime,
    conformal_factor,
    conformal_factor_gradient,
)

__all__ = [
    "ScriLabel",
    "ScriClassification",
    "classify_boundary_ip",
    "i_plus_tilde",
    "check_ample",
    "check_past_complete",
    "conformal_scri",
    "check_voila",
    "ScriReport",
]

_EPS = 1e-9


class ScriLabel:
    NULL_INFINITY = "null-infinity"
    TIMELIKE_INFINITY = "timelike-infinity"
    UNCLASSIFIED = "unclassified"


@dataclass
class ScriClassification:
    entry: CompletionPoint
    label: str
    generators: list = field(default_factory=list)  # (description, future_complete flag)
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_null_infinity(self) -> bool:
        return self.label == ScriLabel.NULL_INFINITY


def _collar_match(model: ModelSpacetime, cloud: PointCloud, mask: np.ndarray, family: str, c: float, width: float) -> bool:
    """Indicator agrees with the sampled half-plane {family < c}, any
    disagreement confined to a collar of the dividing null line."""
    u, v = model.null_coords(cloud.points)
    w = u if family == "u" else v
    ref = w < c - _EPS
    diff = mask != ref
    if not diff.any():
        return True
    # collar measured along the null coordinate; chart distance to the
    # dividing line is |w - c| / sqrt(2)
    return bool(np.all(np.abs(w[diff] - c) <= 2.0 * width + _EPS))


def classify_boundary_ip(model: ModelSpacetime, P: CompletionPoint) -> ScriClassification:
    """Match a boundary entry against the analytic families of the plane.

    Half-plane indicators (u or v bounded, the other direction filling the
    window) classify as null infinity, with their generating null rays
    recorded as affinely complete (closed-form fact of the flat plane);
    the full-window indicator is timelike infinity; anything else is
    returned unclassified with diagnostics.
    """
    if model.name != "mink2":
        raise DomainError("classification implemented for the plane model only")
    if P.kind != "tip":
        raise DomainError("classification applies to boundary entries only")
    cloud = P.indicator.cloud
    mask = P.indicator.mask
    h = cloud.h
    u, v = model.null_coords(cloud.points)

    if mask.all():
        return ScriClassification(
            entry=P,
            label=ScriLabel.TIMELIKE_INFINITY,
            generators=[("inextendible timelike curves", True)],
            diagnostics={"member_count": int(mask.sum())},
        )

    umax, vmax = u[mask].max(), v[mask].max()
    for family, c in (("u", umax + h), ("v", vmax + h)):
        if _collar_match(model, cloud, mask, family, c, 2 * h):
            return ScriClassification(
                entry=P,
                label=ScriLabel.NULL_INFINITY,
                generators=[(f"null ray {family}={c:g} (all parallel generators)", True)],
                diagnostics={"family": family, "parameter": float(c)},
            )
    return ScriClassification(
        entry=P,
        label=ScriLabel.UNCLASSIFIED,
        diagnostics={
            "member_count": int(mask.sum()),
            "umax": float(umax),
            "vmax": float(vmax),
            "window_umax": float(u.max()),
            "window_vmax": float(v.max()),
        },
    )


def i_plus_tilde(
    model: ModelSpacetime,
    cloud: PointCloud,
    C: Region,
    catalogue: BoundaryCatalogue,
) -> list[CompletionPoint]:
    """Catalogue entries whose indicator contains the (non-empty) past of
    some sample of the compact region C.

    Containment of a sampled past in P means the sample dominates no
    non-member of P, answered for all samples at once from P's sorted
    non-member frontier.
    """
    from .causal_tools import future_mask

    c_mask = C.sampled(cloud).mask
    if not c_mask.any():
        return []
    u, v = model.null_coords(cloud.points)
    has_past = future_mask(model, cloud, np.ones(len(cloud), dtype=bool), strict=True)
    candidates = c_mask & has_past
    if not candidates.any():
        return []
    cu, cv = u[candidates], v[candidates]
    out = []
    for P in catalogue.entries:
        nonmember = ~P.indicator.mask
        if not nonmember.any():
            out.append(P)  # the full-window entry contains every point-past
            continue
        nm_u = u[nonmember]
        nm_v = v[nonmember]
        order = np.argsort(nm_u, kind="stable")
        nm_u, nm_v = nm_u[order], nm_v[order]
        prefix_min_v = np.minimum.accumulate(nm_v)
        # strictly-below count of non-members in u for each candidate
        pos = np.searchsorted(nm_u, cu - _EPS, side="left")
        frontier = np.where(pos > 0, prefix_min_v[np.maximum(pos - 1, 0)], np.inf)
        contained = frontier >= cv - _EPS  # no non-member strictly below
        if contained.any():
            out.append(P)
    return out


def check_ample(
    model: ModelSpacetime,
    cloud: PointCloud,
    catalogue: BoundaryCatalogue,
    scri_components: dict[str, list[CompletionPoint]],
    C: Region,
) -> dict:
    """Each declared component of null infinity must have a member escaping
    the future of the compact region C."""
    inside = {id(P) for P in i_plus_tilde(model, cloud, C, catalogue)}
    report = {"components": {}, "ok": True}
    for name, members in scri_components.items():
        escapes = [P.label for P in members if id(P) not in inside]
        report["components"][name] = {"n": len(members), "escaping": escapes}
        if not escapes:
            report["ok"] = False
    if not report["ok"]:
        report["note"] = (
            "no escaping member found; the catalogue's parameter range is "
            "window-truncated, so a failure may reflect the truncation rather "
            "than the component"
        )
    return report


def check_past_complete(
    catalogue: BoundaryCatalogue,
    scri_members: Sequence[CompletionPoint],
) -> dict:
    """Boundary entries sitting inside a null-infinity member must be
    null-infinity members themselves."""
    scri_ids = {id(P) for P in scri_members}
    violations = []
    for P in scri_members:
        for Q in catalogue.boundary_entries():
            if Q is P or id(Q) in scri_ids:
                continue
            if not (Q.indicator.mask & ~P.indicator.mask).any():
                violations.append((Q.label, P.label))
    return {"ok": not violations, "violations": violations}


def conformal_scri(ext: ConformalExtension, ray_parameters: Sequence[float]) -> dict:
    """Future-boundary points where the conformal factor vanishes with a
    non-zero gradient: the two open future edges of the square, sampled at
    the endpoints of the rays u=c and v=c for the given parameters.

    The future corner, where the gradient vanishes too, is excluded."""
    edges = {"u-edge": [], "v-edge": []}  # u-edge: points (pi/2, v'), v-edge: (u', pi/2)
    for c in ray_parameters:
        for name, p in (
            ("v-edge", (math.atan(c), HALF_PI)),
            ("u-edge", (HALF_PI, math.atan(c))),
        ):
            if not ext.on_future_boundary(p):
                continue
            if abs(conformal_factor(p)) > _EPS:
                continue
            g = conformal_factor_gradient(p)
            if math.hypot(*g) <= _EPS:
                continue  # degenerate corner
            edges[name].append(p)
    corner = ext.i_plus()
    assert math.hypot(*conformal_factor_gradient(corner)) <= _EPS
    return edges


@dataclass
class ScriReport:
    n_points: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def check_voila(
    ext: ConformalExtension,
    cloud: PointCloud,
    edges: dict[str, list],
) -> ScriReport:
    """Every sampled conformal null-infinity point pulls back to an entry
    classified as null infinity."""
    failures = []
    n = 0
    for name, points in edges.items():
        for p in points:
            n += 1
            try:
                entry = psi(ext, p, cloud)
                cls = classify_boundary_ip(ext.base, entry)
                if not cls.is_null_infinity:
                    failures.append((name, p, cls.label))
            except Exception as exc:  # empty pullback etc.
                failures.append((name, p, str(exc)))
    return ScriReport(n_points=n, failures=failures)
