"""Brute-force reference scorers, used only by the test suite.

Everything here is recomputed from the raw definitions with dense matrices
and per-query set scans.  None of the production graph machinery is reused;
the duplication is deliberate so the two routes can check each other.
Intended for graphs of a few dozen nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decay import DecayParams, ExpDecayParams
from .scoring import MethodId

__all__ = ["ToyGraph", "random_toy", "random_decay", "naive_score", "exhaustive_auc"]


@dataclass
class ToyGraph:
    """A small raw edge list (may contain self-loops and unordered pairs)
    plus the snapshot period used to turn timestamps into decay times."""

    n: int
    edges: list[tuple[int, int, int]]
    period: float = 1.0


def random_toy(
    seed: int,
    max_nodes: int = 50,
    min_nodes: int = 8,
    self_loop_rate: float = 0.05,
    dup_rate: float = 0.25,
) -> ToyGraph:
    """Random multigraph with timestamp ties, duplicated multi-edges, the
    occasional self-loop, and a randomized snapshot period."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(min_nodes, max_nodes + 1))
    n_edges = int(rng.integers(n, 4 * n))
    t_span = int(rng.integers(5, 40))
    edges = []
    for _ in range(n_edges):
        u = int(rng.integers(0, n))
        if rng.random() < self_loop_rate:
            v = u
        else:
            v = int(rng.integers(0, n))
        ts = int(rng.integers(1, t_span + 1))
        edges.append((u, v, ts))
        if u != v and rng.random() < dup_rate:
            edges.append((u, v, int(rng.integers(1, t_span + 1))))
    period = float(rng.choice([0.5, 1.0, 2.5]))
    return ToyGraph(n=n, edges=edges, period=period)


def random_decay(seed: int, allow_exp: bool = False) -> DecayParams | ExpDecayParams:
    """Random decay parameters in comfortably representable ranges."""
    rng = np.random.default_rng(seed)
    if allow_exp and rng.random() < 0.2:
        return ExpDecayParams(theta=float(rng.uniform(0.05, 0.95)))
    return DecayParams(
        p=float(rng.uniform(0.5, 10.0)),
        q=float(rng.uniform(0.0, 10.0)),
        a=float(rng.uniform(2.0, 8.0)),
    )


def _clean_edges(edges) -> list[tuple[int, int, int]]:
    return [(min(u, v), max(u, v), ts) for u, v, ts in edges if u != v]


def _weight(elapsed: float, params) -> float:
    if isinstance(params, DecayParams):
        return (1.0 / (1.0 + math.exp(elapsed / params.p - params.a)) + params.q) / (
            params.q + 1.0
        )
    return math.exp(-params.theta * elapsed)


def _floor(params) -> float:
    if isinstance(params, DecayParams):
        return params.q / (params.q + 1.0)
    return 0.0


def _dense(toy: ToyGraph, params, edges=None, t_ref=None):
    """Dense decayed adjacency and multiplicity matrices for a toy graph."""
    if edges is None:
        edges = _clean_edges(toy.edges)
    if t_ref is None:
        t_ref = max(ts for _, _, ts in edges)
    A = np.zeros((toy.n, toy.n))
    M = np.zeros((toy.n, toy.n), dtype=np.int64)
    for u, v, ts in edges:
        w = _weight((t_ref - ts) / toy.period, params)
        A[u, v] += w
        A[v, u] += w
        M[u, v] += 1
        M[v, u] += 1
    return A, M


def _neighbors(A, v):
    return [z for z in range(A.shape[0]) if A[v, z] > 0]


def _wdeg(A, v):
    return float(A[v].sum())


def _common(A, x, y):
    return [z for z in range(A.shape[0]) if A[x, z] > 0 and A[y, z] > 0]


def _hidden(A, x, y):
    """Hidden nodes of endpoint x for pair (x, y), straight from the set
    definition."""
    n = A.shape[0]
    out = []
    for h in range(n):
        if h in (x, y):
            continue
        if A[y, h] > 0 and A[x, h] == 0:
            if any(A[x, z] > 0 and A[h, z] > 0 for z in range(n)):
                out.append(h)
    return out


def _latent(A, M, params, i, j):
    if A[i, j] > 0:
        raise ValueError("latent weight undefined for adjacent pairs")
    cn = _common(A, i, j)
    if not cn:
        return 0.0
    scale = sum((A[i, z] + A[z, j]) / (M[i, z] + M[z, j]) for z in cn)
    scale /= min(len(_neighbors(A, i)), len(_neighbors(A, j)))
    return _floor(params) * scale


def _lcl(A, cn):
    total = 0.0
    for a in range(len(cn)):
        for b in range(a + 1, len(cn)):
            if A[cn[a], cn[b]] > 0:
                total += A[cn[a], cn[b]]
    return total


def naive_score(
    method: MethodId,
    toy: ToyGraph,
    params,
    x: int,
    y: int,
    cclp_mode: str = "local",
    edges=None,
    t_ref=None,
) -> float:
    """Score one pair by literal translation of each method's definition."""
    A, M = _dense(toy, params, edges=edges, t_ref=t_ref)
    cn = _common(A, x, y)

    if method is MethodId.CN_ASF:
        return 0.5 * sum(A[x, z] + A[y, z] for z in cn)
    if method is MethodId.JA_ASF:
        denom = _wdeg(A, x) + _wdeg(A, y)
        if denom == 0.0:
            return 0.0
        return 0.5 * sum(A[x, z] + A[y, z] for z in cn) / denom
    if method is MethodId.PA_ASF:
        return _wdeg(A, x) * _wdeg(A, y)
    if method is MethodId.RA_ASF:
        return sum(1.0 / _wdeg(A, z) for z in cn)
    if method is MethodId.CAR_ASF:
        return 0.5 * sum(A[x, z] + A[y, z] for z in cn) * _lcl(A, cn)
    if method is MethodId.CCLP_ASF:
        total = 0.0
        for z in cn:
            dz = len(_neighbors(A, z))
            if dz < 2:
                continue
            tri = _lcl(A, _neighbors(A, z)) if cclp_mode == "local" else _lcl(A, cn)
            total += tri / (dz * (dz - 1) / 2.0)
        return total
    if method is MethodId.TLPSS:
        def directed(a, b):
            s = sum(A[a, z] / _wdeg(A, z) for z in cn)
            for h in _hidden(A, a, b):
                s += _latent(A, M, params, a, h) / _wdeg(A, h)
            return s

        return 0.5 * (directed(x, y) + directed(y, x))
    raise ValueError(f"unknown method {method!r}")


def naive_hidden(toy: ToyGraph, params, x: int, y: int) -> set[int]:
    A, _ = _dense(toy, params)
    return set(_hidden(A, x, y))


def naive_latent(toy: ToyGraph, params, i: int, j: int) -> float:
    A, M = _dense(toy, params)
    return _latent(A, M, params, i, j)


def exhaustive_auc(toy: ToyGraph, method: MethodId, params, ratio: float = 0.9) -> float:
    """AUC by full enumeration of positive x negative comparisons over an
    independently re-derived time split of the toy."""
    edges = sorted(_clean_edges(toy.edges), key=lambda e: e[2])
    if not edges:
        raise ValueError("toy graph has no usable edges")
    stamps = sorted({ts for _, _, ts in edges})
    total = len(edges)
    t_split = None
    for t in stamps:
        if sum(1 for e in edges if e[2] <= t) >= ratio * total:
            t_split = t
            break
    if t_split == stamps[-1]:
        raise ValueError("no test period remains after the split")
    train = [e for e in edges if e[2] <= t_split]
    test = [e for e in edges if e[2] > t_split]
    train_pairs = {(u, v) for u, v, _ in train}
    test_pairs = {(u, v) for u, v, _ in test}
    positives = sorted(test_pairs - train_pairs)
    if not positives:
        raise ValueError("no new links in the test period")
    negatives = [
        (i, j)
        for i in range(toy.n)
        for j in range(i + 1, toy.n)
        if (i, j) not in train_pairs and (i, j) not in test_pairs
    ]
    if not negatives:
        raise ValueError("no negative pairs exist")

    def score(i, j):
        return naive_score(method, toy, params, i, j, edges=train, t_ref=t_split)

    pos_scores = [score(i, j) for i, j in positives]
    neg_scores = [score(i, j) for i, j in negatives]
    wins = 0.0
    for ps in pos_scores:
        for ns in neg_scores:
            if ps > ns:
                wins += 1.0
            elif ps == ns:
                wins += 0.5
    return wins / (len(pos_scores) * len(neg_scores))
