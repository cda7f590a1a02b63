"""Sampled future completions of the model spacetimes.

Completion points are sampled indecomposable pasts: interior point-pasts,
or terminal pasts generated by curves.  On top of them: the completion
chronology, boundary catalogues with their achronality check, the
interior-restriction map for the strip with timelike walls, and the
conformal-square correspondence (chain endpoints and the boundary pullback).

Window truncation: a sampled indicator only shows a set inside the window,
so the completion relation cannot be certified from masks alone (a window
corner would falsely dominate any truncated half-plane).  Each completion
point therefore records its analytic future extent (sup of u and of v over
the untruncated set), known from its provenance, and the relation test uses
the extent; the mask containment it implies is exactly the sampled reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .causal_tools import past_mask
from .setlimits import (
    DistanceProfile,
    DomainError,
    PointCloud,
    Provenance,
    SampledSet,
    dist_profile,
)
from .spacetimes import (
    HALF_PI,
    ChartError,
    ConformalExtension,
    CurveDescriptor,
    CurveKind,
    ModelSpacetime,
    curve_points,
)

__all__ = [
    "CompletionPoint",
    "BoundaryCatalogue",
    "ResolutionError",
    "ip_of_point",
    "ip_of_curve",
    "completion_rel",
    "check_boundary_achronal",
    "AchronalReport",
    "restrict_F",
    "classify_f_image",
    "FImage",
    "chain_endpoint_in_extension",
    "psi",
    "null_endpoint_check",
    "interior_mask_vstrip",
]

_EPS = 1e-9


class ResolutionError(ValueError):
    """The construction needs a finer grid or longer curve sampling."""


def _downset_violation(model: ModelSpacetime, cloud: PointCloud, mask: np.ndarray) -> int | None:
    """Index of a non-member strictly chron-below a member, or None."""
    below_member = past_mask(model, cloud, mask, strict=True)
    bad = below_member & ~mask
    if bad.any():
        return int(np.flatnonzero(bad)[0])
    return None


@dataclass
class CompletionPoint:
    """Tagged element of a sampled future completion.

    kind 'interior': the past of a chart point (anchor).
    kind 'tip': a terminal past, from a curve or a boundary pullback.
    ``future_extent`` is (sup u, sup v) of the untruncated set in the base
    model's null coordinates (inf where unbounded); ``family`` carries an
    analytic label such as ("u", c) for the half-plane {u < c}.
    ``window_truncated`` flags indicators that meet the window frontier.
    """

    model: ModelSpacetime
    kind: str
    indicator: SampledSet
    label: str
    anchor: tuple[float, float] | None = None
    curve: CurveDescriptor | None = None
    family: tuple[str, float] | None = None
    future_extent: tuple[float, float] = (math.inf, math.inf)
    window_truncated: bool = False
    _profile: DistanceProfile | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("interior", "tip"):
            raise DomainError(f"unknown completion tag {self.kind!r}")
        if not self.indicator.mask.any():
            raise ResolutionError(f"completion point {self.label!r} has an empty indicator")
        bad = _downset_violation(self.model, self.indicator.cloud, self.indicator.mask)
        if bad is not None:
            p = tuple(self.indicator.cloud.points[bad])
            raise DomainError(f"indicator of {self.label!r} is not a chron-down-set (at {p})")

    @property
    def profile(self) -> DistanceProfile:
        if self._profile is None:
            self._profile = dist_profile(self.indicator)
        return self._profile

    def same_indicator(self, other: "CompletionPoint") -> bool:
        return np.array_equal(self.indicator.mask, other.indicator.mask)


def ip_of_point(model: ModelSpacetime, cloud: PointCloud, p, label: str | None = None) -> CompletionPoint:
    """Interior completion point: the sampled strict past of a chart point."""
    if not model.in_chart(p):
        raise ChartError(f"{tuple(p)} outside the {model.name} chart")
    uv = model.null_coords(cloud.points)
    mask = model.chron_mask_below(uv, p)
    if not mask.any():
        raise ResolutionError(
            f"past of {tuple(p)} is empty at this resolution (point too close to the window's past edge)"
        )
    up, vp = model._uv(p)
    return CompletionPoint(
        model=model,
        kind="interior",
        indicator=SampledSet(cloud, mask, Provenance.PAST_OF_POINT),
        label=label or f"I-({p[0]:g},{p[1]:g})",
        anchor=(float(p[0]), float(p[1])),
        future_extent=(up, vp),
    )


def _curve_future_extent(c: CurveDescriptor, model: ModelSpacetime) -> tuple[float, float]:
    b = c.domain[1]
    if math.isinf(b):
        if c.kind is CurveKind.NULL_GEODESIC:
            return (c.offset, math.inf) if c.family == "u" else (math.inf, c.offset)
        return (math.inf, math.inf)
    end = c.point(b)
    return model._uv(end)


def _curve_future_endpoint(model: ModelSpacetime, c: CurveDescriptor):
    b = c.domain[1]
    if math.isinf(b):
        return None
    end = c.point(b)
    return end if model.in_chart(end) else None


def ip_of_curve(
    model: ModelSpacetime,
    cloud: PointCloud,
    c: CurveDescriptor,
    k: int,
    schedule: str = "linear",
    step: float = 1.0,
    label: str | None = None,
) -> CompletionPoint:
    """Past of a future-directed curve: union of the point-pasts of k curve
    samples.  Stability is verified by doubling (the k-sample and 2k-sample
    indicators must agree); a terminal tag is assigned exactly when the
    curve has no future endpoint in the model."""
    uv = model.null_coords(cloud.points)

    def union_mask(kk: int) -> np.ndarray:
        pts = curve_points(model, c, kk, schedule=schedule, step=step)
        mask = np.zeros(len(cloud), dtype=bool)
        for p in pts:
            mask |= model.chron_mask_below(uv, p)
        return mask

    mask = union_mask(k)
    if not np.array_equal(mask, union_mask(2 * k)):
        raise ResolutionError("curve past did not stabilize between k and 2k samples")
    if not mask.any():
        raise ResolutionError("curve past is empty on this window")

    endpoint = _curve_future_endpoint(model, c)
    if endpoint is None:
        family = None
        if c.kind is CurveKind.NULL_GEODESIC:
            family = (c.family, c.offset)
        name = label or (f"{family[0]}<{family[1]:g}" if family else "tip")
        return CompletionPoint(
            model=model,
            kind="tip",
            indicator=SampledSet(cloud, mask, Provenance.PAST_OF_CURVE),
            label=name,
            curve=c,
            family=family,
            future_extent=_curve_future_extent(c, model),
            window_truncated=True,
        )
    up, vp = model._uv(endpoint)
    return CompletionPoint(
        model=model,
        kind="interior",
        indicator=SampledSet(cloud, mask, Provenance.PAST_OF_CURVE),
        label=label or f"I-({endpoint[0]:g},{endpoint[1]:g})",
        anchor=(float(endpoint[0]), float(endpoint[1])),
        curve=c,
        future_extent=(up, vp),
    )


def completion_rel(P: CompletionPoint, Q: CompletionPoint) -> bool:
    """The completion chronology: some sample x of Q, outside P, whose past
    contains P.  Containment is certified against P's analytic future
    extent, which the sampled mask containment follows from."""
    if P.indicator.cloud is not Q.indicator.cloud:
        raise DomainError("completion points live on different clouds")
    su, sv = P.future_extent
    if math.isinf(su) or math.isinf(sv):
        return False
    cand = Q.indicator.mask & ~P.indicator.mask
    if not cand.any():
        return False
    u, v = P.model.null_coords(P.indicator.cloud.points)
    hit = cand & (u >= su - _EPS) & (v >= sv - _EPS)
    return bool(hit.any())


@dataclass
class AchronalReport:
    n_entries: int
    pairs_checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class BoundaryCatalogue:
    """Catalogue of completion points at one resolution; entries must be
    pairwise distinct as sampled sets with unique labels."""

    model: ModelSpacetime
    h: float
    entries: list[CompletionPoint]

    def __post_init__(self):
        labels = [e.label for e in self.entries]
        if len(set(labels)) != len(labels):
            raise DomainError("catalogue labels must be unique")
        for i, a in enumerate(self.entries):
            for b in self.entries[i + 1 :]:
                if a.same_indicator(b):
                    raise DomainError(f"entries {a.label!r} and {b.label!r} sample the same set")

    def boundary_entries(self) -> list[CompletionPoint]:
        return [e for e in self.entries if e.kind == "tip"]

    def __len__(self):
        return len(self.entries)


def check_boundary_achronal(catalogue: BoundaryCatalogue) -> AchronalReport:
    """No ordered pair of boundary entries may satisfy the completion
    chronology."""
    tips = catalogue.boundary_entries()
    violations = []
    pairs = 0
    for P in tips:
        for Q in tips:
            if P is Q:
                continue
            pairs += 1
            if completion_rel(P, Q):
                violations.append((P.label, Q.label))
    return AchronalReport(n_entries=len(tips), pairs_checked=pairs, violations=violations)


# ------------------------------------------------------------ strip interior map

def interior_mask_vstrip(cloud: PointCloud) -> np.ndarray:
    """Samples of the open interior |x| < 1 of the vertical strip."""
    return np.abs(cloud.points[:, 1]) < 1.0 - _EPS


@dataclass
class FImage:
    source: CompletionPoint
    mask: np.ndarray  # indicator of the interior restriction, on the full cloud
    source_class: str  # 'interior-past' | 'wall-past' | 'tip'
    image_class: str

    @property
    def matches(self) -> bool:
        return self.source_class == self.image_class


def _source_class(entry: CompletionPoint) -> str:
    if entry.kind == "tip":
        return "tip"
    if abs(abs(entry.anchor[1]) - 1.0) <= _EPS:
        return "wall-past"
    return "interior-past"


def classify_f_image(
    model: ModelSpacetime,
    cloud: PointCloud,
    interior: np.ndarray,
    image_mask: np.ndarray,
    h: float,
) -> str:
    """Classify an interior-restricted down-set from the image alone.

    The apex is reconstructed from the image's null-coordinate extents; an
    apex within one grid step of a wall is indistinguishable from a wall
    point at resolution h, so the wall band is [1-2h, 1].  Interior apexes
    are verified by exact cone comparison.
    """
    if np.array_equal(image_mask, interior):
        return "tip"
    u, v = model.null_coords(cloud.points)
    U = u[image_mask].max()
    V = v[image_mask].max()
    apex_u, apex_v = U + h, V + h
    apex_x = (apex_v - apex_u) / 2.0
    apex_t = (apex_v + apex_u) / 2.0
    if abs(apex_x) >= 1.0 - 2 * h - _EPS:
        return "wall-past"
    uv = (u, v)
    cone = model.chron_mask_below(uv, (apex_t, apex_x)) & interior
    if np.array_equal(cone, image_mask):
        return "interior-past"
    return "wall-past"


def restrict_F(entry: CompletionPoint, interior: np.ndarray) -> FImage:
    """Interior restriction of a strip completion point: indicator meets the
    open interior; classified and compared with its source class."""
    mask = entry.indicator.mask & interior
    if not mask.any():
        raise ResolutionError(f"interior restriction of {entry.label!r} is empty")
    cloud = entry.indicator.cloud
    image_class = classify_f_image(entry.model, cloud, interior, mask, cloud.h)
    return FImage(
        source=entry,
        mask=mask,
        source_class=_source_class(entry),
        image_class=image_class,
    )


# ------------------------------------------------------------ conformal square

def chain_endpoint_in_extension(ext: ConformalExtension, chain: np.ndarray, h: float):
    """Limit of the embedded chain in the closed square.

    Convergence is declared when consecutive embedded points come within
    h/4; coordinates within h/4 of +/- pi/2 are then snapped to the edge.
    Returns a future-boundary point of the extension.
    """
    chain = np.asarray(chain, dtype=float)
    if len(chain) < 3:
        raise DomainError("need at least three chain points")
    emb = ext.embed(chain)
    gaps = np.linalg.norm(np.diff(emb, axis=0), axis=1)
    if gaps[-1] > h / 4:
        raise ResolutionError(
            f"embedded chain tail not converged: final gap {gaps[-1]:.3g} > h/4 = {h / 4:.3g}"
        )
    end = emb[-1].copy()
    for i in (0, 1):
        if abs(end[i] - HALF_PI) <= h / 4:
            end[i] = HALF_PI
        elif abs(end[i] + HALF_PI) <= h / 4:
            end[i] = -HALF_PI
    p = (float(end[0]), float(end[1]))
    if not ext.on_future_boundary(p):
        raise ResolutionError(f"embedded chain limit {p} is not on the future boundary")
    return p


def psi(ext: ConformalExtension, p, cloud: PointCloud, label: str | None = None) -> CompletionPoint:
    """Pullback of a future-boundary point: base samples whose embedding is
    chron-below p in the ambient square.  Always a terminal tag."""
    if not ext.on_future_boundary(p):
        raise DomainError(f"{tuple(p)} is not on the future boundary of the extension")
    emb = ext.embed(cloud.points)
    pu, pv = float(p[0]), float(p[1])
    mask = (pu - emb[:, 0] > _EPS) & (pv - emb[:, 1] > _EPS)
    if not mask.any():
        raise ResolutionError(f"pullback of {tuple(p)} misses the sampled window")
    sup_u = math.inf if abs(pu - HALF_PI) <= _EPS else math.tan(pu)
    sup_v = math.inf if abs(pv - HALF_PI) <= _EPS else math.tan(pv)
    family = None
    if math.isinf(sup_v) and not math.isinf(sup_u):
        family = ("u", sup_u)
    elif math.isinf(sup_u) and not math.isinf(sup_v):
        family = ("v", sup_v)
    return CompletionPoint(
        model=ext.base,
        kind="tip",
        indicator=SampledSet(cloud, mask, Provenance.PAST_OF_CURVE),
        label=label or f"psi({pu:.4f},{pv:.4f})",
        family=family,
        future_extent=(sup_u, sup_v),
        window_truncated=True,
    )


@dataclass
class EndpointReport:
    n_curves: int
    failures: list
    endpoints: list

    @property
    def ok(self) -> bool:
        return not self.failures


def null_endpoint_check(
    ext: ConformalExtension,
    curves: Sequence[CurveDescriptor],
    h: float,
    k: int = 24,
) -> EndpointReport:
    """Every future-inextendible null geodesic's embedded tail converges to
    a future-boundary point.  Non-null curves are rejected up front."""
    for c in curves:
        if c.kind is not CurveKind.NULL_GEODESIC:
            raise DomainError("null_endpoint_check expects null geodesics only")
    failures = []
    endpoints = []
    for i, c in enumerate(curves):
        chain = curve_points(ext.base, c, k, schedule="geometric", step=1.0)
        try:
            p = chain_endpoint_in_extension(ext, chain, h)
            endpoints.append(p)
        except (ResolutionError, DomainError) as exc:
            failures.append((i, str(exc)))
            endpoints.append(None)
    return EndpointReport(n_curves=len(curves), failures=failures, endpoints=endpoints)
