"""Seeded generators for scripted verification inputs.

Everything here is deterministic given a numpy Generator; the CLI suites and
the test suite share these so that check outcomes are reproducible.
"""

from __future__ import annotations

import numpy as np

from .chronoset import ChronoSet, all_ips, down_of
from .setlimits import PointCloud, Provenance, SampledSet, SetSequence

__all__ = [
    "random_chronoset",
    "random_labels",
    "chronoset_cloud",
    "downset_sample",
    "scripted_finite_sequence",
]

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def random_labels(n: int) -> list[str]:
    if n <= len(_ALPHABET):
        return list(_ALPHABET[:n])
    return [f"p{i}" for i in range(n)]


def random_chronoset(
    rng: np.random.Generator,
    n_min: int = 2,
    n_max: int = 10,
    density: tuple[float, float] = (0.15, 0.6),
) -> ChronoSet:
    """Random strict order: sample a DAG on a shuffled topological order,
    transitively close, and patch isolated points so condition C1 holds."""
    n = int(rng.integers(n_min, n_max + 1))
    p = float(rng.uniform(*density))
    order = rng.permutation(n)
    rel = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                rel[order[i], order[j]] = True
    # C1 patch: tie isolated points below their successor in the sampled order.
    for i in range(n):
        a = order[i]
        if not rel[a, :].any() and not rel[:, a].any():
            b = order[(i + 1) % n]
            if i + 1 < n:
                rel[a, b] = True
            else:
                rel[b, a] = True
    closed = rel.copy()
    while True:
        nxt = closed | (closed @ closed)
        if np.array_equal(nxt, closed):
            break
        closed = nxt
    return ChronoSet(random_labels(n), closed)


def chronoset_cloud(C: ChronoSet) -> PointCloud:
    """Degenerate 1D cloud indexing a finite ground set, for the open-limit
    operators (the metric is never consulted in the finite layer)."""
    return PointCloud(np.arange(C.n, dtype=float)[:, None], h=1.0)


def downset_sample(C: ChronoSet, cloud: PointCloud, members) -> SampledSet:
    idx = [C.index[m] for m in members]
    return SampledSet.from_indices(cloud, idx, Provenance.EXPLICIT)


def scripted_finite_sequence(
    rng: np.random.Generator,
    C: ChronoSet,
    cloud: PointCloud,
    kind: str,
) -> tuple[SetSequence, list[SampledSet]]:
    """One scripted IP sequence over a finite order, plus its catalogue.

    Kinds: 'constant', 'chain' (an inclusion-increasing run of principal
    down-sets, then constant), 'alternating' (a periodic two-cycle), and
    'noisy-constant' (arbitrary IPs before the tail, constant afterwards).
    """
    ips = all_ips(C)
    catalogue = [downset_sample(C, cloud, ip.members) for ip in ips]
    pick = lambda: catalogue[int(rng.integers(len(catalogue)))]

    if kind == "constant":
        P = pick()
        return SetSequence([P] * 6, tail_start=2), catalogue

    if kind == "chain":
        start = C.labels[int(rng.integers(C.n))]
        run = [down_of(C, [start]).members]
        current = start
        while True:
            ups = [l for l in C.labels if C.lt(current, l)]
            if not ups:
                break
            current = ups[int(rng.integers(len(ups)))]
            run.append(down_of(C, [current]).members)
        sets = [downset_sample(C, cloud, m) for m in run]
        sets += [sets[-1]] * 3
        return SetSequence(sets, tail_start=len(run)), catalogue

    if kind == "alternating":
        A, B = pick(), pick()
        sets = [A, B] * 4
        return SetSequence(sets, tail_start=3), catalogue

    if kind == "noisy-constant":
        P = pick()
        prefix = [pick() for _ in range(int(rng.integers(1, 4)))]
        sets = prefix + [P] * 4
        return SetSequence(sets, tail_start=len(prefix) + 1), catalogue

    raise ValueError(f"unknown scripted kind {kind!r}")
