"""Analytic 2D model spacetimes with chronology and causality oracles.

Four flat models are provided:

* ``mink2``    — the full (t, x) plane,
* ``hstrip``   — the closed horizontal strip -1 <= t <= 1 (spacelike edges;
  only a chronological-set example, never claimed globally hyperbolic with
  timelike boundary),
* ``vstrip``   — the closed vertical strip |x| <= 1 (timelike edges; the
  globally-hyperbolic-with-timelike-boundary instance),
* ``square``   — the open square (-pi/2, pi/2)^2 in null coordinates, the
  target of the arctan extension of the plane.

In all of them the light cones are straight, so the chronology reduces to a
strict product order in null coordinates u = t - x, v = t + x (the square
chart is native null).  Charts are convex, which makes segment containment
automatic for the strip models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .setlimits import DomainError, PointCloud

__all__ = [
    "ModelSpacetime",
    "CurveKind",
    "CurveDescriptor",
    "ConformalExtension",
    "ChartError",
    "mink2",
    "hstrip",
    "vstrip",
    "square",
    "sample",
    "curve_points",
    "timelike_geodesic",
    "null_geodesic",
    "to_extension",
    "conformal_factor",
    "conformal_factor_gradient",
    "mink2_square_extension",
    "HALF_PI",
]

HALF_PI = math.pi / 2.0

# Strictness guard for oracle comparisons: genuine causal separations in the
# sampled experiments are O(h) >> this, while null-aligned float noise is
# far below it.  Comparisons scale it by the coordinate magnitude, since
# rounding in u = t - x is relative (curve samples reach |s| ~ 1e7).
_EPS = 1e-9


def _tol(*coords: float) -> float:
    return _EPS * max(1.0, *(abs(c) for c in coords))


class ChartError(ValueError):
    """Point outside the model chart, or an empty sampling window."""


@dataclass(frozen=True)
class ModelSpacetime:
    """Chart domain with closed-form chronology/causality oracles."""

    name: str
    t_range: tuple[float, float]
    x_range: tuple[float, float]
    coords: str  # "tx" or "null"
    boundary: str
    globally_hyperbolic: bool  # analytic attribute, not computed

    def in_chart(self, p) -> bool:
        t, x = float(p[0]), float(p[1])
        return (
            self.t_range[0] - _EPS <= t <= self.t_range[1] + _EPS
            and self.x_range[0] - _EPS <= x <= self.x_range[1] + _EPS
        )

    def _require(self, *points):
        for p in points:
            if not self.in_chart(p):
                raise ChartError(f"point {tuple(p)} outside the {self.name} chart")

    def null_coords(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(u, v) arrays for an (N, 2) array of chart points."""
        pts = np.asarray(pts, dtype=float)
        a, b = pts[..., 0], pts[..., 1]
        if self.coords == "null":
            return a, b
        return a - b, a + b

    def chron(self, p, q) -> bool:
        """p << q: strict cone rule (both null coordinates increase)."""
        self._require(p, q)
        (up, vp), (uq, vq) = self._uv(p), self._uv(q)
        tol = _tol(up, vp, uq, vq)
        return uq - up > tol and vq - vp > tol

    def caus(self, p, q) -> bool:
        """p <= q: causal cone rule (both null coordinates non-decreasing)."""
        self._require(p, q)
        (up, vp), (uq, vq) = self._uv(p), self._uv(q)
        tol = _tol(up, vp, uq, vq)
        return uq - up > -tol and vq - vp > -tol

    def _uv(self, p) -> tuple[float, float]:
        t, x = float(p[0]), float(p[1])
        if self.coords == "null":
            return t, x
        return t - x, t + x

    def chron_mask_below(self, cloud_uv: tuple[np.ndarray, np.ndarray], apex) -> np.ndarray:
        """Mask of cloud points strictly chron-below the apex."""
        u, v = cloud_uv
        ua, va = self._uv(apex)
        tol = _tol(ua, va)
        return (ua - u > tol) & (va - v > tol)


def mink2() -> ModelSpacetime:
    inf = float("inf")
    return ModelSpacetime("mink2", (-inf, inf), (-inf, inf), "tx", "", True)


def hstrip() -> ModelSpacetime:
    inf = float("inf")
    return ModelSpacetime("hstrip", (-1.0, 1.0), (-inf, inf), "tx", "spacelike t=+/-1", False)


def vstrip() -> ModelSpacetime:
    inf = float("inf")
    return ModelSpacetime("vstrip", (-inf, inf), (-1.0, 1.0), "tx", "timelike x=+/-1", True)


def square() -> ModelSpacetime:
    """The closed square in null coordinates; its interior is the embedded
    image of the plane, its boundary hosts the conformal boundary points."""
    return ModelSpacetime(
        "square", (-HALF_PI, HALF_PI), (-HALF_PI, HALF_PI), "null", "square edges", True
    )


def _axis(lo: float, hi: float, h: float, chart_hi: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / h + 1e-9)) + 1
    vals = lo + np.arange(n) * h
    # A finite closed chart edge joins the grid even when the spacing
    # misses it (e.g. the square's edges at pi/2).
    if hi == chart_hi and math.isfinite(hi) and hi - vals[-1] > 1e-12:
        vals = np.append(vals, hi)
    return vals


def sample(model: ModelSpacetime, h: float, window) -> PointCloud:
    """Regular grid of spacing h on the window clipped to the chart.

    The grid is anchored at the clipped window minimum, so halving h nests
    the coarser grid.  Closed chart edges contribute their boundary
    rows/columns whenever the window reaches them.
    """
    if h <= 0:
        raise ChartError("spacing must be positive")
    (t0, t1), (x0, x1) = window
    t0, t1 = max(t0, model.t_range[0]), min(t1, model.t_range[1])
    x0, x1 = max(x0, model.x_range[0]), min(x1, model.x_range[1])
    if t0 > t1 or x0 > x1:
        raise ChartError("window does not meet the chart")
    ts = _axis(t0, t1, h, model.t_range[1])
    xs = _axis(x0, x1, h, model.x_range[1])
    tt, xx = np.meshgrid(ts, xs, indexing="ij")
    return PointCloud(np.column_stack([tt.ravel(), xx.ravel()]), h)


class CurveKind(Enum):
    TIMELIKE_GEODESIC = "timelike-geodesic"
    NULL_GEODESIC = "null-geodesic"
    PARAMETRIZED = "parametrized"


@dataclass(frozen=True)
class CurveDescriptor:
    """Future-directed curve in a model chart.

    Timelike geodesics: point(s) = (t0 + s, x0 + beta*s), |beta| < 1.
    Null geodesics: the ray u = offset (family "u", increasing v = s) or
    v = offset (family "v", increasing u = s).
    Parametrized curves supply their own chart map.
    """

    kind: CurveKind
    base: tuple[float, float] = (0.0, 0.0)
    beta: float = 0.0
    family: str = "u"
    offset: float = 0.0
    domain: tuple[float, float] = (0.0, float("inf"))
    affine_complete_future: bool = True  # analytic flag
    chart_map: Callable[[float], tuple[float, float]] | None = None

    def point(self, s: float) -> tuple[float, float]:
        if self.kind is CurveKind.TIMELIKE_GEODESIC:
            return (self.base[0] + s, self.base[1] + self.beta * s)
        if self.kind is CurveKind.NULL_GEODESIC:
            if self.family == "u":
                return ((self.offset + s) / 2.0, (s - self.offset) / 2.0)
            return ((self.offset + s) / 2.0, (self.offset - s) / 2.0)
        return self.chart_map(s)


def timelike_geodesic(base=(0.0, 0.0), beta=0.0, domain=(0.0, float("inf"))) -> CurveDescriptor:
    if abs(beta) >= 1:
        raise DomainError("timelike geodesics need |beta| < 1")
    return CurveDescriptor(CurveKind.TIMELIKE_GEODESIC, base=base, beta=beta, domain=domain)


def null_geodesic(family: str, offset: float, domain=(-4.0, float("inf"))) -> CurveDescriptor:
    if family not in ("u", "v"):
        raise DomainError("null family must be 'u' or 'v'")
    return CurveDescriptor(CurveKind.NULL_GEODESIC, family=family, offset=offset, domain=domain)


def _schedule(domain: tuple[float, float], k: int, schedule: str, step: float) -> np.ndarray:
    a, b = domain
    if k < 2:
        raise DomainError("need at least two curve samples")
    if not (a < b):
        raise DomainError("degenerate curve domain")
    if math.isinf(b):
        if schedule == "linear":
            return a + step * np.arange(k)
        if schedule == "geometric":
            return a + step * (np.power(2.0, np.arange(k)) - 1.0)
    else:
        span = b - a
        if schedule == "linear":
            return a + span * (np.arange(1, k + 1) / (k + 1.0))
        if schedule == "geometric":
            return b - span * np.power(2.0, -np.arange(1, k + 1, dtype=float))
    raise DomainError(f"unknown schedule {schedule!r}")


def curve_points(
    model: ModelSpacetime,
    c: CurveDescriptor,
    k: int,
    schedule: str = "linear",
    step: float = 1.0,
) -> np.ndarray:
    """k strictly parameter-increasing samples approaching the future end of
    the domain.  Timelike samples are verified pairwise-consecutive
    chron-related; null samples caus-related and chron-flat."""
    params = _schedule(c.domain, k, schedule, step)
    pts = np.array([c.point(float(s)) for s in params])
    for p in pts:
        if not model.in_chart(p):
            raise ChartError(f"curve leaves the {model.name} chart at {tuple(p)}")
    for p, q in zip(pts[:-1], pts[1:]):
        # Pairs separated below float-resolvable scale are skipped: the
        # geodesic families are monotone analytically, only the samples
        # collapse (deep geometric tails).
        if max(abs(q[0] - p[0]), abs(q[1] - p[1])) <= 1e-8:
            continue
        if c.kind is CurveKind.TIMELIKE_GEODESIC and not model.chron(p, q):
            raise DomainError("timelike curve samples are not chron-increasing")
        if c.kind is CurveKind.NULL_GEODESIC:
            if not model.caus(p, q) or model.chron(p, q):
                raise DomainError("null curve samples must be caus-increasing, chron-flat")
    return pts


# ------------------------------------------------------------ conformal square

def to_extension(p) -> tuple[float, float]:
    """Chart map of the plane into the open square: null coordinates are
    compressed through arctan."""
    t, x = float(p[0]), float(p[1])
    return (math.atan(t - x), math.atan(t + x))


def to_extension_arr(pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    u = pts[..., 0] - pts[..., 1]
    v = pts[..., 0] + pts[..., 1]
    return np.stack([np.arctan(u), np.arctan(v)], axis=-1)


def conformal_factor(sq_pt) -> float:
    """cos(u') cos(v'): positive on the open square, zero on its boundary."""
    up, vp = float(sq_pt[0]), float(sq_pt[1])
    return math.cos(up) * math.cos(vp)


def conformal_factor_gradient(sq_pt) -> tuple[float, float]:
    up, vp = float(sq_pt[0]), float(sq_pt[1])
    return (-math.sin(up) * math.cos(vp), -math.cos(up) * math.sin(vp))


@dataclass(frozen=True)
class ConformalExtension:
    """Open conformal embedding of a base model into an ambient model, with
    the future boundary of the image."""

    base: ModelSpacetime
    ambient: ModelSpacetime
    embed: Callable[[np.ndarray], np.ndarray]
    omega: Callable[[tuple[float, float]], float]

    def __post_init__(self):
        self._spot_check()

    def _spot_check(self):
        rng = np.random.default_rng(7)
        pts = rng.uniform(-3, 3, size=(96, 2))
        img = self.embed(pts)
        # injectivity on samples
        flat = {tuple(np.round(q, 12)) for q in img}
        if len(flat) != len(img):
            raise DomainError("embedding is not injective on samples")
        # chron preservation both ways (time-orientation preserving)
        for _ in range(128):
            i, j = rng.integers(0, len(pts), size=2)
            if (i != j) and self.base.chron(pts[i], pts[j]) != self.ambient.chron(img[i], img[j]):
                raise DomainError("embedding does not preserve the chronology on samples")
        # positive conformal factor on the image of base samples
        if any(self.omega(q) <= 0 for q in img):
            raise DomainError("conformal factor must be positive on the embedded base")

    def on_future_boundary(self, p, tol: float = 1e-9) -> bool:
        """Membership in the future boundary of the image: closed-square
        boundary points with some image point strictly below."""
        up, vp = float(p[0]), float(p[1])
        inside = abs(up) <= HALF_PI + tol and abs(vp) <= HALF_PI + tol
        on_edge = abs(up - HALF_PI) <= tol or abs(vp - HALF_PI) <= tol
        has_past = up > -HALF_PI + tol and vp > -HALF_PI + tol
        return inside and on_edge and has_past

    def i_plus(self) -> tuple[float, float]:
        return (HALF_PI, HALF_PI)


def mink2_square_extension() -> ConformalExtension:
    return ConformalExtension(
        base=mink2(),
        ambient=square(),
        embed=to_extension_arr,
        omega=conformal_factor,
    )
