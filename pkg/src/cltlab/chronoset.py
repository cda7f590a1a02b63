"""Finite chronological sets: strict orders with past-set and completion machinery.

A ChronoSet is a finite ground set with an irreflexive, antisymmetric,
transitively closed relation ``x << y``, stored as an explicit reachability
matrix.  On top of it we build strict pasts, reflexive down-sets,
indecomposable past sets (IPs), future limits, category-property flags and
the future completion whose ground set is the non-empty IPs.

Convention note: strict pasts (``past_of``, ``future_limits``) follow the
strict relation exactly.  All IP/completion machinery runs on *reflexive*
down-sets, which on finite orders play the role open past sets play in the
continuum (an IP is then exactly a down-set with a unique maximal element,
i.e. a principal down-set).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "ChronoSet",
    "Convention",
    "DownSet",
    "CategoryFlags",
    "IpClass",
    "IpClassification",
    "FutureCompletion",
    "past_of",
    "future_of",
    "down_of",
    "is_ip",
    "has_unique_maximal",
    "maximal_elements",
    "future_limits",
    "classify_ip",
    "category_flags",
    "future_completion",
    "is_future_continuous",
    "time_dual",
    "all_downsets",
    "all_ips",
    "directedness_diagnostic",
    "strict_pip_census",
    "to_text",
    "from_text",
]

# Enumeration of down-subsets is exponential in the candidate set size; this
# cap keeps accidental misuse from hanging the process.
_ENUM_CAP = 22


class ChronoSetError(ValueError):
    """Invalid construction or use of a ChronoSet."""


class Convention(Enum):
    STRICT = "strict"
    REFLEXIVE = "reflexive"


class ChronoSet:
    """Finite ground set with a strict, transitive, antisymmetric relation.

    ``rel[i, j]`` means ``labels[i] << labels[j]``.  Validated at
    construction: irreflexivity, antisymmetry, transitive closure, and (by
    default) the condition that every point is related to at least one other
    point.  Pass ``check_c1=False`` to admit degenerate instances such as
    antichains, which are still useful as completion inputs.
    """

    def __init__(self, labels: Sequence[str], rel: np.ndarray, *, check_c1: bool = True):
        labels = tuple(str(l) for l in labels)
        if len(labels) == 0:
            raise ChronoSetError("ground set must be non-empty")
        if len(set(labels)) != len(labels):
            raise ChronoSetError("duplicate labels")
        rel = np.asarray(rel, dtype=bool)
        n = len(labels)
        if rel.shape != (n, n):
            raise ChronoSetError(f"relation matrix must be {n}x{n}, got {rel.shape}")
        if rel.diagonal().any():
            raise ChronoSetError("relation is not irreflexive")
        if (rel & rel.T).any():
            raise ChronoSetError("relation is not antisymmetric")
        closure = rel @ rel
        if (closure & ~rel).any():
            raise ChronoSetError("relation is not transitively closed")
        if check_c1 and n > 1:
            isolated = ~(rel.any(axis=0) | rel.any(axis=1))
            if isolated.any():
                bad = labels[int(np.flatnonzero(isolated)[0])]
                raise ChronoSetError(
                    f"point {bad!r} is unrelated to every other point (pass check_c1=False to allow)"
                )
        self.labels = labels
        self.rel = rel
        self.rel.setflags(write=False)
        self.index: dict[str, int] = {l: i for i, l in enumerate(labels)}
        # Bitmask of strict predecessors/successors per point, for subset scans.
        self._pred_masks = tuple(_mask_from_bool(rel[:, j]) for j in range(n))
        self._succ_masks = tuple(_mask_from_bool(rel[i, :]) for i in range(n))

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_edges(
        cls,
        labels: Sequence[str],
        edges: Iterable[tuple[str, str]],
        *,
        check_c1: bool = True,
    ) -> "ChronoSet":
        """Build from arbitrary strict-order edges; the transitive closure is taken."""
        labels = tuple(str(l) for l in labels)
        idx = {l: i for i, l in enumerate(labels)}
        n = len(labels)
        rel = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            if a not in idx or b not in idx:
                raise ChronoSetError(f"edge ({a!r}, {b!r}) uses unknown labels")
            rel[idx[a], idx[b]] = True
        rel = _transitive_closure(rel)
        return cls(labels, rel, check_c1=check_c1)

    def lt(self, a: str, b: str) -> bool:
        """a << b."""
        return bool(self.rel[self._at(a), self._at(b)])

    def _at(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise ChronoSetError(f"unknown label {label!r}") from None

    def _indices(self, points: Iterable[str]) -> frozenset[int]:
        return frozenset(self._at(p) for p in points)

    def _labels_of(self, indices: Iterable[int]) -> frozenset[str]:
        return frozenset(self.labels[i] for i in indices)

    def __repr__(self) -> str:
        return f"ChronoSet({len(self.labels)} points, {int(self.rel.sum())} relations)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChronoSet):
            return NotImplemented
        return self.labels == other.labels and bool(np.array_equal(self.rel, other.rel))

    def __hash__(self) -> int:
        return hash((self.labels, self.rel.tobytes()))


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    out = rel.copy()
    while True:
        nxt = out | (out @ out)
        if np.array_equal(nxt, out):
            return out
        out = nxt


def _mask_from_bool(row: np.ndarray) -> int:
    m = 0
    for i in np.flatnonzero(row):
        m |= 1 << int(i)
    return m


def _mask_from_indices(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def _indices_from_mask(mask: int) -> frozenset[int]:
    out = set()
    i = 0
    while mask:
        if mask & 1:
            out.add(i)
        mask >>= 1
        i += 1
    return frozenset(out)


@dataclass(frozen=True)
class DownSet:
    """A down-closed subset of a ChronoSet.

    Reflexive convention: ``y <= x`` (i.e. ``y << x`` or ``y == x``) and
    ``x in members`` imply ``y in members``.  The strict convention
    (``members == past_of(members)`` exactly) is admitted for completeness
    but is unsatisfiable for non-empty sets on finite orders.
    """

    owner: ChronoSet
    members: frozenset[str]
    convention: Convention = Convention.REFLEXIVE

    def __post_init__(self):
        idx = self.owner._indices(self.members)
        if self.convention is Convention.REFLEXIVE:
            closed = _down_close_indices(self.owner, idx)
            if closed != idx:
                raise ChronoSetError("member set is not down-closed under the reflexive convention")
        else:
            if past_of(self.owner, self.members) != self.members:
                raise ChronoSetError("member set is not a strict past set")

    @property
    def mask(self) -> int:
        return _mask_from_indices(self.owner._indices(self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CategoryFlags:
    past_regular: bool
    past_determined: bool
    past_distinguishing: bool
    future_distinguishing: bool
    future_complete: bool


def past_of(C: ChronoSet, A: Iterable[str]) -> frozenset[str]:
    """Strict past: every point lying strictly below some element of A."""
    idx = C._indices(A)
    if not idx:
        return frozenset()
    cols = C.rel[:, sorted(idx)]
    return C._labels_of(np.flatnonzero(cols.any(axis=1)))


def future_of(C: ChronoSet, A: Iterable[str]) -> frozenset[str]:
    """Strict future, the time dual of past_of."""
    idx = C._indices(A)
    if not idx:
        return frozenset()
    rows = C.rel[sorted(idx), :]
    return C._labels_of(np.flatnonzero(rows.any(axis=0)))


def _down_close_indices(C: ChronoSet, idx: frozenset[int]) -> frozenset[int]:
    if not idx:
        return idx
    cols = C.rel[:, sorted(idx)]
    return idx | frozenset(int(i) for i in np.flatnonzero(cols.any(axis=1)))


def down_of(C: ChronoSet, A: Iterable[str]) -> DownSet:
    """Reflexive down-closure A ∪ past_of(A); idempotent."""
    return DownSet(C, C._labels_of(_down_close_indices(C, C._indices(A))))


def maximal_elements(C: ChronoSet, members: Iterable[str]) -> frozenset[str]:
    idx = sorted(C._indices(members))
    if not idx:
        return frozenset()
    sub = C.rel[np.ix_(idx, idx)]
    return C._labels_of(idx[i] for i in np.flatnonzero(~sub.any(axis=1)))


def has_unique_maximal(C: ChronoSet, members: Iterable[str]) -> bool:
    """Independent IP oracle: exactly one maximal element."""
    return len(maximal_elements(C, members)) == 1


def _downsubset_masks(C: ChronoSet, p_mask: int, p_indices: Sequence[int]):
    """Yield masks of all reflexive down-closed subsets of the set p_mask."""
    k = len(p_indices)
    if k > _ENUM_CAP:
        raise ChronoSetError(f"down-subset enumeration capped at {_ENUM_CAP} elements, got {k}")
    preds = [C._pred_masks[i] & p_mask for i in p_indices]
    bits = [1 << i for i in p_indices]
    for combo in range(1 << k):
        m = 0
        need = 0
        for j in range(k):
            if combo & (1 << j):
                m |= bits[j]
                need |= preds[j]
        if need & ~m:
            continue
        yield m


def _downclose_mask(C: ChronoSet, mask: int) -> int:
    out = mask
    for i in _indices_from_mask(mask):
        out |= C._pred_masks[i]
    return out


def is_ip(C: ChronoSet, P: DownSet) -> bool:
    """True iff P cannot be written as a union of two proper down-subsets.

    Runs an exhaustive decomposition search: P is decomposable iff some
    proper down-subset D leaves a remainder whose down-closure is still a
    proper subset (that closure is then the second part of a decomposition,
    and any decomposition arises this way).  Empty sets are not IPs.
    """
    if P.convention is not Convention.REFLEXIVE:
        raise ChronoSetError("is_ip expects a reflexive DownSet")
    if not P.members:
        return False
    p_indices = sorted(C._indices(P.members))
    p_mask = _mask_from_indices(p_indices)
    for d1 in _downsubset_masks(C, p_mask, p_indices):
        if d1 == p_mask:
            continue
        rest = p_mask & ~d1
        if _downclose_mask(C, rest) != p_mask:
            return False
    return True


def future_limits(C: ChronoSet, A: Iterable[str]) -> frozenset[str]:
    """Future limits of A under the strict relation.

    x qualifies when A lies strictly below x and everything strictly below x
    is strictly below some element of A.
    """
    a_idx = sorted(C._indices(A))
    if not a_idx:
        raise ChronoSetError("future_limits requires a non-empty set")
    out = []
    below_a = C.rel[:, a_idx].any(axis=1)
    for x in range(C.n):
        if not C.rel[a_idx, x].all():
            continue
        y_below_x = C.rel[:, x]
        if np.all(~y_below_x | below_a):
            out.append(x)
    return C._labels_of(out)


class IpClass(Enum):
    PIP = "pip"
    TIP = "tip"


@dataclass(frozen=True)
class IpClassification:
    kind: IpClass
    witnesses: frozenset[str]


def classify_ip(C: ChronoSet, P: DownSet) -> IpClassification:
    """PIP with its future-limit witnesses, else TIP.  Requires is_ip(C, P)."""
    if not is_ip(C, P):
        raise ChronoSetError("classify_ip requires an indecomposable down-set")
    lims = future_limits(C, P.members)
    if lims:
        return IpClassification(IpClass.PIP, lims)
    return IpClassification(IpClass.TIP, frozenset())


def _is_strict_past_set(C: ChronoSet, members: frozenset[str]) -> bool:
    return past_of(C, members) == members


def _is_strict_ip(C: ChronoSet, members: frozenset[str]) -> bool:
    """Strict-convention IP check (definitional; non-empty finite strict past
    sets do not exist, so this is false for every non-empty candidate)."""
    if not members:
        return False
    if not _is_strict_past_set(C, members):
        return False
    idx = sorted(C._indices(members))
    p_mask = _mask_from_indices(idx)
    subsets = []
    for combo in range(1 << len(idx)):
        m = 0
        for j in range(len(idx)):
            if combo & (1 << j):
                m |= 1 << idx[j]
        if m != p_mask and _is_strict_past_set(C, C._labels_of(_indices_from_mask(m))):
            subsets.append(m)
    return not any(a | b == p_mask for a in subsets for b in subsets)


def category_flags(C: ChronoSet) -> CategoryFlags:
    """Definitional quantifier elimination for the category-property flags."""
    n = C.n
    pasts = [past_of(C, [l]) for l in C.labels]
    futures = [future_of(C, [l]) for l in C.labels]

    past_regular = all(p and _is_strict_ip(C, p) for p in pasts)

    past_determined = True
    for w in range(n):
        for y in np.flatnonzero(C.rel[w, :]):
            for x in range(n):
                if pasts[x] and pasts[x] <= pasts[w] and not C.rel[x, y]:
                    past_determined = False
                    break
            if not past_determined:
                break
        if not past_determined:
            break

    past_distinguishing = all(
        pasts[i] != pasts[j] for i in range(n) for j in range(i + 1, n)
    )
    future_distinguishing = all(
        futures[i] != futures[j] for i in range(n) for j in range(i + 1, n)
    )

    # Non-empty reflexive IPs are exactly the principal down-sets (unique
    # maximal element); future-complete means each admits a strict future
    # limit when viewed as a point set.
    future_complete = all(bool(future_limits(C, down_of(C, [l]).members)) for l in C.labels)

    return CategoryFlags(
        past_regular=past_regular,
        past_determined=past_determined,
        past_distinguishing=past_distinguishing,
        future_distinguishing=future_distinguishing,
        future_complete=future_complete,
    )


def all_downsets(C: ChronoSet) -> list[DownSet]:
    """All reflexive down-sets, including the empty one.  Exponential; capped."""
    if C.n > _ENUM_CAP:
        raise ChronoSetError(f"down-set enumeration capped at {_ENUM_CAP} points")
    full = (1 << C.n) - 1
    out = []
    for m in _downsubset_masks(C, full, list(range(C.n))):
        out.append(DownSet(C, C._labels_of(_indices_from_mask(m))))
    return out


def all_ips(C: ChronoSet) -> list[DownSet]:
    """All non-empty reflexive IPs (the principal down-sets, by the
    unique-maximal characterisation verified in the test suite)."""
    seen = set()
    out = []
    for l in C.labels:
        d = down_of(C, [l])
        if d.members not in seen:
            seen.add(d.members)
            out.append(d)
    return out


@dataclass(frozen=True)
class FutureCompletion:
    """Future completion: ground set of non-empty IPs with the induced
    chronology, plus the inclusion map of the original points."""

    chrono: ChronoSet
    ips: tuple[frozenset[str], ...]
    inclusion: Mapping[str, str]
    source_flags: CategoryFlags


def _ip_label(members: frozenset[str]) -> str:
    return "{" + ",".join(sorted(members)) + "}"


def completion_lt(C: ChronoSet, P: frozenset[str], Q: frozenset[str]) -> bool:
    """Completion chronology: some x in Q\\P has P inside its strict-below
    reflexive down-set (down_of({x}) minus x itself)."""
    for x in Q - P:
        below = down_of(C, [x]).members - {x}
        if P <= below:
            return True
    return False


def future_completion(C: ChronoSet) -> FutureCompletion:
    """Ground set of all non-empty reflexive IPs with the induced strict
    order; the result's relation is re-validated at construction."""
    ips = tuple(ip.members for ip in all_ips(C))
    labels = [_ip_label(m) for m in ips]
    k = len(ips)
    rel = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            if i != j and completion_lt(C, ips[i], ips[j]):
                rel[i, j] = True
    chrono = ChronoSet(labels, rel, check_c1=False)
    inclusion = {l: _ip_label(down_of(C, [l]).members) for l in C.labels}
    return FutureCompletion(
        chrono=chrono, ips=ips, inclusion=inclusion, source_flags=category_flags(C)
    )


def _all_chain_sets(C: ChronoSet) -> list[frozenset[int]]:
    """All non-empty totally ordered subsets (the point sets of chains)."""
    chains: list[frozenset[int]] = []

    def extend(chain: list[int], last: int):
        chains.append(frozenset(chain))
        for nxt in np.flatnonzero(C.rel[last, :]):
            chain.append(int(nxt))
            extend(chain, int(nxt))
            chain.pop()

    for start in range(C.n):
        extend([start], start)
    seen = set()
    out = []
    for c in chains:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def is_future_continuous(f: Mapping[str, str], source: ChronoSet, target: ChronoSet) -> bool:
    """f preserves the relation and carries every finite chain's future-limit
    witnesses to future-limit witnesses of the image chain.

    Enumerates all chains of the source; exponential in pathological cases,
    intended for small ground sets.
    """
    for l in source.labels:
        if l not in f:
            raise ChronoSetError(f"map is not total: missing {l!r}")
        if f[l] not in target.index:
            raise ChronoSetError(f"map target {f[l]!r} is not a point of the target")
    for a in source.labels:
        for b in source.labels:
            if source.lt(a, b) and not target.lt(f[a], f[b]):
                return False
    for chain in _all_chain_sets(source):
        A = source._labels_of(chain)
        image = frozenset(f[a] for a in A)
        target_limits = None
        for w in future_limits(source, A):
            if target_limits is None:
                target_limits = future_limits(target, image)
            if f[w] not in target_limits:
                return False
    return True


def time_dual(C: ChronoSet) -> ChronoSet:
    """Relation transposed; an involution.  IPs of the dual are the IFs of
    the original."""
    return ChronoSet(C.labels, C.rel.T.copy(), check_c1=False)


def directedness_diagnostic(C: ChronoSet, P: DownSet) -> dict:
    """Report-only: strict directedness of P (every two members have a common
    strict upper bound in P).  Vacuously unachievable for maximal elements on
    finite orders, so this is a diagnostic, never the finite IP test.
    """
    idx = sorted(C._indices(P.members))
    failures = []
    for a in idx:
        for b in idx:
            if not any(C.rel[a, z] and C.rel[b, z] for z in idx):
                failures.append((C.labels[a], C.labels[b]))
    return {"directed": not failures, "failing_pairs": failures[:8], "n_failures": len(failures)}


def strict_pip_census(C: ChronoSet) -> dict:
    """Report-only: how many reflexive IPs admit a strict future limit."""
    ips = all_ips(C)
    with_limit = sum(1 for ip in ips if future_limits(C, ip.members))
    return {"n_ips": len(ips), "n_with_strict_future_limit": with_limit}


def _cover_edges(C: ChronoSet) -> list[tuple[str, str]]:
    out = []
    for i in range(C.n):
        for j in np.flatnonzero(C.rel[i, :]):
            through = C.rel[i, :] & C.rel[:, j]
            if not through.any():
                out.append((C.labels[i], C.labels[int(j)]))
    return out


def to_text(C: ChronoSet) -> str:
    """Adjacency-list text form: one line per point, 'label: succ1 succ2 ...'
    listing strict covers.  The transitive closure is recomputed on load."""
    covers: dict[str, list[str]] = {l: [] for l in C.labels}
    for a, b in _cover_edges(C):
        covers[a].append(b)
    lines = [f"{l}: {' '.join(covers[l])}".rstrip() for l in C.labels]
    return "\n".join(lines) + "\n"


def from_text(text: str, *, check_c1: bool = True) -> ChronoSet:
    labels = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ChronoSetError(f"line {lineno}: expected 'label: successors'")
        head, _, tail = line.partition(":")
        label = head.strip()
        if not label:
            raise ChronoSetError(f"line {lineno}: empty label")
        labels.append(label)
        edges.append((label, tail.split()))
    known = set(labels)
    flat = []
    for a, succs in edges:
        for b in succs:
            if b not in known:
                raise ChronoSetError(f"unknown successor {b!r} for {a!r}")
            flat.append((a, b))
    return ChronoSet.from_edges(labels, flat, check_c1=check_c1)
