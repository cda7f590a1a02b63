"""Causal-structure scans over sampled regions.

Causal convexity, future/past precompactness, sampled future boundaries,
achronality, and the future-nesting verification for conformal extensions.

All four models have product-order cones in null coordinates, so the
quantifier scans reduce to sorted dominance sweeps, O(m log m) in the cloud
size, instead of cubic triple loops.  Witnesses are extracted for every
failed check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .setlimits import DomainError, PointCloud, Provenance, SampledSet
from .spacetimes import HALF_PI, ConformalExtension, ModelSpacetime

__all__ = [
    "Region",
    "ConvexityResult",
    "AchronalityResult",
    "NestingReport",
    "rect_region",
    "past_cone_region",
    "future_cone_region",
    "null_halfplane_region",
    "band_region",
    "union_region",
    "intersection_region",
    "difference_region",
    "future_mask",
    "past_mask",
    "is_causally_convex",
    "is_future_precompact",
    "future_boundary",
    "is_achronal",
    "check_future_nesting",
    "cauchy_roof_check",
]

_EPS = 1e-9


# ------------------------------------------------------------------ regions

@dataclass(frozen=True)
class Region:
    """Chart region: a membership predicate plus its sampled form."""

    model: ModelSpacetime
    name: str
    predicate: Callable[[np.ndarray], np.ndarray]

    def sampled(self, cloud: PointCloud) -> SampledSet:
        mask = np.asarray(self.predicate(cloud.points), dtype=bool)
        return SampledSet(cloud, mask, Provenance.FORMULA)


def rect_region(model, t0, t1, x0, x1, name="rect") -> Region:
    def pred(pts):
        t, x = pts[:, 0], pts[:, 1]
        return (t >= t0 - _EPS) & (t <= t1 + _EPS) & (x >= x0 - _EPS) & (x <= x1 + _EPS)

    return Region(model, name, pred)


def past_cone_region(model, apex, name=None) -> Region:
    ta, xa = float(apex[0]), float(apex[1])

    def pred(pts):
        t, x = pts[:, 0], pts[:, 1]
        return (ta - t) > np.abs(xa - x) + _EPS

    return Region(model, name or f"past-cone({ta},{xa})", pred)


def future_cone_region(model, apex, name=None) -> Region:
    ta, xa = float(apex[0]), float(apex[1])

    def pred(pts):
        t, x = pts[:, 0], pts[:, 1]
        return (t - ta) > np.abs(x - xa) + _EPS

    return Region(model, name or f"future-cone({ta},{xa})", pred)


def null_halfplane_region(model, family: str, c: float, name=None) -> Region:
    """{u < c} or {v < c} in the model's null coordinates."""
    if family not in ("u", "v"):
        raise DomainError("family must be 'u' or 'v'")

    def pred(pts):
        u, v = model.null_coords(pts)
        w = u if family == "u" else v
        return w < c - _EPS

    return Region(model, name or f"{family}<{c}", pred)


def band_region(model, axis: str, lo: float, hi: float, name=None) -> Region:
    i = {"t": 0, "x": 1}[axis]

    def pred(pts):
        return (pts[:, i] > lo - _EPS) & (pts[:, i] < hi + _EPS)

    return Region(model, name or f"band({axis})", pred)


def union_region(a: Region, b: Region, name=None) -> Region:
    return Region(a.model, name or f"({a.name})|({b.name})", lambda p: a.predicate(p) | b.predicate(p))


def intersection_region(a: Region, b: Region, name=None) -> Region:
    return Region(a.model, name or f"({a.name})&({b.name})", lambda p: a.predicate(p) & b.predicate(p))


def difference_region(a: Region, b: Region, name=None) -> Region:
    return Region(a.model, name or f"({a.name})-({b.name})", lambda p: a.predicate(p) & ~b.predicate(p))


# ------------------------------------------------------------------ scans

def _dominance_mask(u, v, member_mask, *, strict: bool, above: bool) -> np.ndarray:
    """Points with a member coordinate-wise below them.

    above=True, strict: some member (u', v') with u' < u and v' < v.
    above=True, non-strict: u' <= u and v' <= v (members qualify themselves).
    above=False mirrors the comparison.  One sorted sweep, vectorized.
    """
    member_mask = np.asarray(member_mask, dtype=bool)
    m = len(u)
    if not member_mask.any():
        return np.zeros(m, dtype=bool)
    if not above:
        return _dominance_mask(-u, -v, member_mask, strict=strict, above=True)
    order = np.argsort(u, kind="stable")
    su, sv, sm = u[order], v[order], member_mask[order]
    member_v = np.where(sm, sv, np.inf)
    prefix_min = np.minimum.accumulate(member_v)
    new_group = np.empty(m, dtype=bool)
    new_group[0] = True
    new_group[1:] = (su[1:] - su[:-1]) > _EPS
    group_id = np.cumsum(new_group) - 1
    starts = np.flatnonzero(new_group)
    prev_last = starts[group_id] - 1
    before = np.where(prev_last >= 0, prefix_min[np.maximum(prev_last, 0)], np.inf)
    if strict:
        hit = sv - before > _EPS
    else:
        group_min = np.minimum.reduceat(member_v, starts)[group_id]
        ref = np.minimum(before, group_min)
        hit = sv - ref > -_EPS
    out = np.zeros(m, dtype=bool)
    out[order] = hit
    return out


def future_mask(model: ModelSpacetime, cloud: PointCloud, member_mask, *, strict=True) -> np.ndarray:
    """I^+(A) (strict) or J^+(A) (non-strict) over the cloud."""
    u, v = model.null_coords(cloud.points)
    return _dominance_mask(u, v, np.asarray(member_mask, dtype=bool), strict=strict, above=True)


def past_mask(model: ModelSpacetime, cloud: PointCloud, member_mask, *, strict=True) -> np.ndarray:
    u, v = model.null_coords(cloud.points)
    return _dominance_mask(u, v, np.asarray(member_mask, dtype=bool), strict=strict, above=False)


# ------------------------------------------------------------------ checks

@dataclass
class ConvexityResult:
    ok: bool
    witness: tuple | None = None  # (x, z, y) chart points with x <= z <= y, z outside

    def __bool__(self):
        return self.ok


def is_causally_convex(model: ModelSpacetime, A: Region, cloud: PointCloud) -> ConvexityResult:
    """A is causally convex iff no cloud point outside A lies causally
    between two members; equivalently J^+(A) and J^-(A) only meet inside A."""
    mask = A.sampled(cloud).mask
    if not mask.any():
        raise DomainError("region samples empty")
    up = future_mask(model, cloud, mask, strict=False)
    down = past_mask(model, cloud, mask, strict=False)
    bad = up & down & ~mask
    if not bad.any():
        return ConvexityResult(True)
    z_idx = int(np.flatnonzero(bad)[0])
    z = cloud.points[z_idx]
    members = cloud.points[mask]
    x = next(p for p in members if model.caus(p, z))
    y = next(p for p in members if model.caus(z, p))
    return ConvexityResult(False, (tuple(x), tuple(z), tuple(y)))


def is_future_precompact(model: ModelSpacetime, A: Region, K: Region, cloud: PointCloud) -> bool:
    """Every sample of A is chron-below some sample of the (bounded) K."""
    a_mask = A.sampled(cloud).mask
    k_mask = K.sampled(cloud).mask
    if not a_mask.any():
        return True  # vacuous
    if not k_mask.any():
        return False
    below_k = past_mask(model, cloud, k_mask, strict=True)
    return bool(np.all(below_k[a_mask]))


def _frontier_mask(cloud: PointCloud, mask: np.ndarray) -> np.ndarray:
    """Non-members with a member within one grid step (the discrete frontier
    of an open region, biased to the outside as the continuum one is)."""
    members = cloud.points[mask]
    if len(members) == 0:
        return np.zeros(len(cloud), dtype=bool)
    from scipy.spatial import cKDTree

    d, _ = cKDTree(members).query(cloud.points, k=1)
    return (~mask) & (d <= cloud.h + _EPS)


def future_boundary(model: ModelSpacetime, A: Region, cloud: PointCloud) -> SampledSet:
    """Sampled future boundary: frontier points lying in the strict future
    of the region."""
    mask = A.sampled(cloud).mask
    fr = _frontier_mask(cloud, mask)
    up = future_mask(model, cloud, mask, strict=True)
    return SampledSet(cloud, fr & up, Provenance.FORMULA)


@dataclass
class AchronalityResult:
    ok: bool
    witness: tuple | None = None  # (p, q) with p << q

    def __bool__(self):
        return self.ok


def is_achronal(model: ModelSpacetime, S: SampledSet) -> AchronalityResult:
    mask = S.mask
    if not mask.any():
        return AchronalityResult(True)
    cloud = S.cloud
    up = future_mask(model, cloud, mask, strict=True)
    bad = up & mask
    if not bad.any():
        return AchronalityResult(True)
    q_idx = int(np.flatnonzero(bad)[0])
    q = cloud.points[q_idx]
    p = next(p for p in cloud.points[mask] if model.chron(p, q))
    return AchronalityResult(False, (tuple(p), tuple(q)))


@dataclass
class NestingReport:
    ambient_globally_hyperbolic: bool  # analytic flag, recorded not computed
    causally_convex: ConvexityResult = field(default=None)
    future_precompact: bool = False
    boundary_achronal: AchronalityResult = field(default=None)

    @property
    def ok(self) -> bool:
        return (
            self.ambient_globally_hyperbolic
            and bool(self.causally_convex)
            and self.future_precompact
            and bool(self.boundary_achronal)
        )


def _image_region(ext: ConformalExtension) -> Region:
    def pred(pts):
        u, v = pts[:, 0], pts[:, 1]
        return (np.abs(u) < HALF_PI - _EPS) & (np.abs(v) < HALF_PI - _EPS)

    return Region(ext.ambient, "embedded-image", pred)


def _future_edge_mask(cloud: PointCloud) -> np.ndarray:
    u, v = cloud.points[:, 0], cloud.points[:, 1]
    on_u = np.abs(u - HALF_PI) <= _EPS
    on_v = np.abs(v - HALF_PI) <= _EPS
    has_past = (u > -HALF_PI + _EPS) & (v > -HALF_PI + _EPS)
    return (on_u | on_v) & has_past


def check_future_nesting(ext: ConformalExtension, ambient_cloud: PointCloud) -> NestingReport:
    """Both image clauses of the nesting condition, on the ambient sample:
    causal convexity, and future precompactness against a collar of the
    future corner.  Ambient global hyperbolicity is the model's analytic
    attribute.  The future boundary sample is also checked achronal."""
    image = _image_region(ext)
    collar = 4 * ambient_cloud.h
    K = rect_region(
        ext.ambient,
        HALF_PI - collar,
        HALF_PI,
        HALF_PI - collar,
        HALF_PI,
        name="future-corner-collar",
    )
    convex = is_causally_convex(ext.ambient, image, ambient_cloud)
    precompact = is_future_precompact(ext.ambient, image, K, ambient_cloud)
    boundary = SampledSet(ambient_cloud, _future_edge_mask(ambient_cloud), Provenance.FORMULA)
    achronal = is_achronal(ext.ambient, boundary)
    return NestingReport(
        ambient_globally_hyperbolic=ext.ambient.globally_hyperbolic,
        causally_convex=convex,
        future_precompact=precompact,
        boundary_achronal=achronal,
    )


def cauchy_roof_check(ext: ConformalExtension, n_samples: int = 41, t_line: float = 0.0) -> dict:
    """Flow embedded Cauchy-line samples straight up (increasing t' at fixed
    x') and verify each vertical line meets the future boundary exactly once.

    In null coordinates the line x' = const first leaves the open square
    through v' = pi/2 when x' > 0, through u' = pi/2 when x' < 0, and at the
    corner when x' = 0; the hit is unique since the two future edges form an
    achronal roof.
    """
    xs = np.linspace(-6.0, 6.0, n_samples)
    hits = []
    failures = 0
    for x0 in xs:
        up, vp = np.arctan(t_line - x0), np.arctan(t_line + x0)
        xprime = (vp - up) / 2.0
        # first exit of the vertical line (u', v') = (tau - x', tau + x')
        tau_exit = HALF_PI - abs(xprime)
        hit = (tau_exit - xprime, tau_exit + xprime)
        on_boundary = ext.on_future_boundary(hit, tol=1e-9)
        unique = abs(hit[0] - HALF_PI) <= 1e-12 or abs(hit[1] - HALF_PI) <= 1e-12
        if not (on_boundary and unique):
            failures += 1
        hits.append(hit)
    return {"n": n_samples, "failures": failures, "hits": hits}
