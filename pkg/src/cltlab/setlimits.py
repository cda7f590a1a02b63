"""Hausdorff set limits on finite point clouds.

Upper/lower limits in both the metric (open-ball) and open (exact
membership) versions, distance profiles with the sup-norm convergence test,
and the two limit operators over an IP catalogue together with their
comparison report.

Finitization: a SetSequence declares a stabilization horizon N0.  On the
tail window [N0, N] each point's membership pattern must be constant or
monotone ("stabilized" tails: the conceptual infinite extension is
eventually constant, so the limit set is at(N)), or else the whole tail
must repeat a cycle of period >= 2 ("periodic" tails: the extension repeats
the cycle, so upper/lower limits are the union/intersection over one
cycle).  Anything else is rejected at construction, which is what makes the
limits below exact rather than approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "PointCloud",
    "Provenance",
    "SampledSet",
    "SetSequence",
    "DistanceProfile",
    "TaucResult",
    "LimitComparison",
    "ToleranceError",
    "DomainError",
    "limsup_liminf_metric",
    "closed_limit",
    "limsup_liminf_open",
    "dist_profile",
    "tauc_converges",
    "hausdorff_gap",
    "l_h",
    "l_chr",
    "compare_limits",
    "subsequence",
]


# Strict comparisons on grid-derived distances guard against float fuzz at
# exact grid multiples; meaningful gaps are O(h), far above this.
_EPS = 1e-9


class ToleranceError(ValueError):
    """Requested tolerance is below the sampling resolution."""


class DomainError(ValueError):
    """Operation applied outside its domain (e.g. empty member set)."""


class PointCloud:
    """Finite sample of a chart region: coordinates, metric, spacing h.

    Only the Euclidean chart metric is implemented; symmetry, vanishing
    diagonal and the triangle inequality are spot-checked on a deterministic
    sample of triples at construction.
    """

    def __init__(self, points: np.ndarray, h: float, metric: str = "euclidean"):
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2 or len(points) == 0:
            raise DomainError("point cloud must be a non-empty (N, d) array")
        if not np.isfinite(points).all():
            raise DomainError("point cloud has non-finite coordinates")
        if h <= 0:
            raise DomainError("resolution h must be positive")
        if metric != "euclidean":
            raise DomainError(f"unsupported metric {metric!r}")
        self.points = points
        self.points.setflags(write=False)
        self.h = float(h)
        self.metric = metric
        self._tree: cKDTree | None = None
        self._spot_check_metric()

    def _spot_check_metric(self):
        rng = np.random.default_rng(0)
        n = len(self.points)
        idx = rng.integers(0, n, size=(min(128, n * n), 3))
        a, b, c = (self.points[idx[:, k]] for k in range(3))
        dab = np.linalg.norm(a - b, axis=1)
        dba = np.linalg.norm(b - a, axis=1)
        dac = np.linalg.norm(a - c, axis=1)
        dcb = np.linalg.norm(c - b, axis=1)
        if not np.allclose(dab, dba):
            raise DomainError("metric asymmetry detected")
        if np.any(dab > dac + dcb + 1e-9):
            raise DomainError("triangle inequality violated")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.points[i] - self.points[j]))

    def tree(self) -> cKDTree:
        if self._tree is None:
            self._tree = cKDTree(self.points)
        return self._tree


class Provenance(Enum):
    EXPLICIT = "explicit"
    PAST_OF_POINT = "past-of-point"
    PAST_OF_CURVE = "past-of-curve"
    FORMULA = "formula"


@dataclass(frozen=True)
class SampledSet:
    """Subset of a fixed cloud, as a boolean membership mask."""

    cloud: PointCloud
    mask: np.ndarray
    provenance: Provenance = Provenance.EXPLICIT

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (len(self.cloud),):
            raise DomainError("mask length must match the cloud")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_indices(cls, cloud: PointCloud, indices: Iterable[int], provenance=Provenance.EXPLICIT):
        mask = np.zeros(len(cloud), dtype=bool)
        mask[list(indices)] = True
        return cls(cloud, mask, provenance)

    @classmethod
    def from_predicate(cls, cloud: PointCloud, pred: Callable[[np.ndarray], np.ndarray]):
        return cls(cloud, np.asarray(pred(cloud.points), dtype=bool), Provenance.FORMULA)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def coords(self) -> np.ndarray:
        return self.cloud.points[self.mask]

    def __len__(self) -> int:
        return int(self.mask.sum())

    def same_as(self, other: "SampledSet") -> bool:
        return self.cloud is other.cloud and bool(np.array_equal(self.mask, other.mask))


class TailMode(Enum):
    STABILIZED = "stabilized"
    PERIODIC = "periodic"


class SetSequence:
    """Indexed family n -> SampledSet, 1 <= n <= N, with a declared tail.

    ``tail_start`` (N0 < N) opens the window the limits are read from; the
    tail must satisfy the stabilization contract described in the module
    docstring.  The prefix before N0 is unconstrained.
    """

    def __init__(self, sets: Sequence[SampledSet], tail_start: int):
        sets = list(sets)
        if len(sets) < 2:
            raise DomainError("a SetSequence needs at least two entries")
        cloud = sets[0].cloud
        if any(s.cloud is not cloud for s in sets):
            raise DomainError("all entries must share one cloud")
        if not (1 <= tail_start < len(sets)):
            raise DomainError("tail_start must satisfy 1 <= N0 < N")
        self.sets = sets
        self.cloud = cloud
        self.tail_start = int(tail_start)
        self.tail_mode, self.period = self._classify_tail()

    @property
    def length(self) -> int:
        return len(self.sets)

    def at(self, n: int) -> SampledSet:
        if not (1 <= n <= len(self.sets)):
            raise DomainError(f"index {n} outside 1..{len(self.sets)}")
        return self.sets[n - 1]

    def _tail_masks(self) -> np.ndarray:
        return np.stack([s.mask for s in self.sets[self.tail_start - 1 :]])

    def _classify_tail(self) -> tuple[TailMode, int | None]:
        tail = self._tail_masks()
        switches = (tail[1:] != tail[:-1]).sum(axis=0)
        if np.all(switches <= 1):
            return TailMode.STABILIZED, None
        t = len(tail)
        for p in range(2, t // 2 + 1):
            if (t % p == 0) and all(
                np.array_equal(tail[i], tail[i % p]) for i in range(t)
            ):
                return TailMode.PERIODIC, p
        raise DomainError(
            "stabilization contract violated: tail membership is neither "
            "per-point constant/monotone nor a repeated cycle"
        )

    def tail_limit_masks(self) -> tuple[np.ndarray, np.ndarray]:
        """(limsup mask, liminf mask) of the conceptual tail extension."""
        tail = self._tail_masks()
        if self.tail_mode is TailMode.STABILIZED:
            final = tail[-1]
            return final.copy(), final.copy()
        cycle = tail[-self.period :]
        return cycle.any(axis=0), cycle.all(axis=0)

    def cycle_masks(self) -> list[np.ndarray]:
        """The distinct tail states the limits are evaluated against."""
        tail = self._tail_masks()
        if self.tail_mode is TailMode.STABILIZED:
            return [tail[-1]]
        return [m for m in tail[-self.period :]]


def subsequence(seq: SetSequence, indices: Sequence[int]) -> SetSequence:
    """Subsequence at the given strictly increasing 1-based indices; the tail
    start is re-declared at the first retained tail index."""
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise DomainError("subsequence indices must be strictly increasing")
    keep = [seq.at(i) for i in indices]
    tail_positions = [k for k, i in enumerate(indices, start=1) if i >= seq.tail_start]
    if not tail_positions or tail_positions[0] >= len(keep):
        raise DomainError("subsequence must retain at least two tail entries")
    return SetSequence(keep, tail_positions[0])


@dataclass(frozen=True)
class DistanceProfile:
    """Per-cloud-point distance to a non-empty member set, with the index of
    a nearest member attaining it."""

    cloud: PointCloud
    values: np.ndarray
    nearest: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)
        self.nearest.setflags(write=False)


def dist_profile(S: SampledSet) -> DistanceProfile:
    """d(x, S) for every cloud point, via a KD-tree over the members.

    Attains zero exactly on members; ``nearest`` holds a member index
    realizing the minimum for each cloud point.
    """
    member_idx = S.indices
    if len(member_idx) == 0:
        raise DomainError("distance profile of an empty set is undefined")
    tree = cKDTree(S.cloud.points[member_idx])
    values, local = tree.query(S.cloud.points, k=1)
    return DistanceProfile(S.cloud, np.asarray(values, dtype=float), member_idx[local])


def _hit_mask(cloud: PointCloud, member_mask: np.ndarray, r: float) -> np.ndarray:
    """Cloud points whose *open* r-ball meets the member set."""
    if not member_mask.any():
        return np.zeros(len(cloud), dtype=bool)
    tree = cKDTree(cloud.points[member_mask])
    d, _ = tree.query(cloud.points, k=1)
    return d < r - _EPS


def limsup_liminf_metric(seq: SetSequence, r: float) -> tuple[SampledSet, SampledSet]:
    """Metric upper/lower limits: points whose open r-ball meets the tail
    states cofinally (upper) resp. at every cycle state (lower)."""
    if r < seq.cloud.h / 2:
        raise ToleranceError(f"radius {r} is below half the resolution {seq.cloud.h}")
    states = seq.cycle_masks()
    hits = [_hit_mask(seq.cloud, m, r) for m in states]
    upper = np.logical_or.reduce(hits)
    lower = np.logical_and.reduce(hits)
    return (
        SampledSet(seq.cloud, upper, Provenance.FORMULA),
        SampledSet(seq.cloud, lower, Provenance.FORMULA),
    )


def closed_limit(seq: SetSequence, r: float) -> SampledSet | None:
    """The common value of the metric upper and lower limits, if they agree."""
    upper, lower = limsup_liminf_metric(seq, r)
    if np.array_equal(upper.mask, lower.mask):
        return upper
    return None


def limsup_liminf_open(seq: SetSequence) -> tuple[SampledSet, SampledSet]:
    """Exact-membership upper/lower limits of the conceptual tail extension."""
    upper, lower = seq.tail_limit_masks()
    return (
        SampledSet(seq.cloud, upper, Provenance.FORMULA),
        SampledSet(seq.cloud, lower, Provenance.FORMULA),
    )


@dataclass(frozen=True)
class TaucResult:
    converged: bool
    gaps: np.ndarray  # sup-norm profile gap per index n = 1..N
    tail_start: int
    tol: float

    @property
    def tail_gaps(self) -> np.ndarray:
        return self.gaps[self.tail_start - 1 :]


def tauc_converges(seq: SetSequence, S: SampledSet, tol: float) -> TaucResult:
    """Distance-profile convergence: sup-norm gap to S at most tol on the
    whole tail window.  Reports the full gap trajectory."""
    if tol < seq.cloud.h:
        raise ToleranceError(f"tolerance {tol} is below the resolution {seq.cloud.h}")
    if len(S) == 0:
        raise DomainError("target set must be non-empty")
    target = dist_profile(S).values
    gaps = np.empty(seq.length)
    for n in range(1, seq.length + 1):
        A = seq.at(n)
        if len(A) == 0:
            raise DomainError(f"entry {n} is empty")
        gaps[n - 1] = float(np.max(np.abs(dist_profile(A).values - target)))
    converged = bool(np.all(gaps[seq.tail_start - 1 :] <= tol + _EPS))
    return TaucResult(converged=converged, gaps=gaps, tail_start=seq.tail_start, tol=tol)


def hausdorff_gap(A: SampledSet, B: SampledSet) -> float:
    """Hausdorff distance between two non-empty sampled sets on one cloud."""
    if A.cloud is not B.cloud:
        raise DomainError("sets live on different clouds")
    if len(A) == 0 or len(B) == 0:
        raise DomainError("Hausdorff distance of an empty set is undefined")
    pa = dist_profile(A).values
    pb = dist_profile(B).values
    return float(max(pb[A.mask].max(), pa[B.mask].max()))


def _symdiff_count(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.count_nonzero(a != b))


def l_h(seq: SetSequence, catalogue: Sequence[SampledSet], tol_count: int = 0) -> list[SampledSet]:
    """Hausdorff open-limit operator over a catalogue.

    Returns the entries equal to both open limits; exact by default, or
    within a symmetric-difference count when comparing sampled layers.
    At most one entry can match exactly.
    """
    upper, lower = limsup_liminf_open(seq)
    out = []
    for P in catalogue:
        if (
            _symdiff_count(P.mask, upper.mask) <= tol_count
            and _symdiff_count(P.mask, lower.mask) <= tol_count
        ):
            out.append(P)
    return out


def l_chr(seq: SetSequence, catalogue: Sequence[SampledSet]) -> list[SampledSet]:
    """Chronological limit operator relative to a catalogue.

    Entries contained in the open lower limit and maximal (by inclusion)
    among catalogue entries contained in the open upper limit.  Maximality
    is relative to the supplied catalogue; the completeness of the catalogue
    is the caller's responsibility.
    """
    upper, lower = limsup_liminf_open(seq)
    inside_upper = [P for P in catalogue if not (P.mask & ~upper.mask).any()]
    out = []
    for P in catalogue:
        if (P.mask & ~lower.mask).any():
            continue
        is_max = True
        for Q in inside_upper:
            if (P.mask & ~Q.mask).any():
                continue
            if (Q.mask & ~P.mask).any():
                is_max = False
                break
        if is_max:
            out.append(P)
    return out


@dataclass
class LimitComparison:
    n_sequences: int = 0
    containment_violations: list = field(default_factory=list)
    non_hausdorff_witnesses: list = field(default_factory=list)
    separation_witnesses: list = field(default_factory=list)
    batch_all_single: bool = True
    batch_equal: bool = True
    # maximality is evaluated relative to the supplied catalogue; its
    # completeness is the caller's declared responsibility
    note: str = "chronological-operator maximality is catalogue-relative"

    @property
    def containment_ok(self) -> bool:
        return not self.containment_violations


def compare_limits(
    sequences: Sequence[SetSequence],
    catalogue: Sequence[SampledSet],
) -> LimitComparison:
    """Run both limit operators over a batch and compare them.

    Asserts the operator containment sequence-wise, flags any sequence with
    two or more chronological limits (a Hausdorff failure witness) or with a
    chronological limit that is not an open limit (a separation witness),
    and, on batches where every chronological limit is at most a singleton,
    records whether the two operators agreed everywhere.
    """
    report = LimitComparison(n_sequences=len(sequences))
    for k, seq in enumerate(sequences):
        lh = l_h(seq, catalogue)
        lchr = l_chr(seq, catalogue)
        lh_ids = {id(P) for P in lh}
        lchr_ids = {id(P) for P in lchr}
        if not lh_ids <= lchr_ids:
            report.containment_violations.append(k)
        if len(lchr) >= 2:
            report.non_hausdorff_witnesses.append(k)
            report.batch_all_single = False
        if lchr_ids - lh_ids:
            report.separation_witnesses.append(k)
        if lh_ids != lchr_ids:
            report.batch_equal = False
    return report
