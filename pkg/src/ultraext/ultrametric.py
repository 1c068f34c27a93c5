"""Ultrametrics: validation, the subdominant (minimax-path) ultrametric,
scaling, and stretch/approximation statistics over pair scopes."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import StrongTriangleViolation
from .metric_core import (
    FiniteMetricSpace,
    SubsetSelection,
    _as_square,
    check_basic_axioms,
    find_triangle_violation,
    restrict,
)


class Ultrametric(FiniteMetricSpace):
    """Distance matrix satisfying ``rho(x,z) <= max(rho(x,y), rho(y,z))``."""

    __slots__ = ()

    @staticmethod
    def _check(d: np.ndarray) -> None:
        check_basic_axioms(d)
        # the strong inequality implies the ordinary one, so only it is scanned
        hit = find_triangle_violation(d, np.maximum)
        if hit is not None:
            raise StrongTriangleViolation(*hit)


def validate_ultrametric(matrix) -> Ultrametric:
    return Ultrametric(matrix)


def is_ultrametric(matrix) -> bool:
    try:
        Ultrametric(matrix)
    except ValueError:
        return False
    return True


def uniform_ultrametric(n: int, value: float) -> Ultrametric:
    """Every distinct pair at distance ``value``."""
    if n > 1 and not value > 0:
        raise ValueError("uniform value must be positive")
    d = np.full((n, n), float(value))
    np.fill_diagonal(d, 0.0)
    return Ultrametric._unchecked(d)


def minimax_closure(weights) -> np.ndarray:
    """Minimax-path values of a complete weighted graph.

    ``weights[i, j] = inf`` marks an absent edge; the diagonal is ignored.
    Builds a minimum spanning tree with Prim's algorithm, then replays its
    edges in increasing order (single linkage): when two clusters merge at
    weight ``w`` every cross pair gets value ``w``. O(n^2).

    Raises ``ValueError`` if the finite edges do not connect the graph.
    """
    w = np.array(weights, dtype=float)
    n = w.shape[0]
    out = np.zeros((n, n))
    if n == 1:
        return out
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    key = w[0].copy()
    parent = np.zeros(n, dtype=int)
    key[0] = np.inf
    edges = []
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, key)
        j = int(np.argmin(cand))
        if not np.isfinite(cand[j]):
            raise ValueError("finite edges do not connect the graph")
        edges.append((cand[j], int(parent[j]), j))
        in_tree[j] = True
        better = (w[j] < key) & ~in_tree
        key[better] = w[j][better]
        parent[better] = j

    edges.sort(key=lambda e: e[0])
    label = list(range(n))
    members = {i: [i] for i in range(n)}
    for weight, a, b in edges:
        ra, rb = label[a], label[b]
        ma, mb = members[ra], members[rb]
        out[np.ix_(ma, mb)] = weight
        out[np.ix_(mb, ma)] = weight
        if len(ma) < len(mb):
            ra, rb, ma, mb = rb, ra, mb, ma
        for v in mb:
            label[v] = ra
        ma.extend(mb)
        del members[rb]
    return out


def subdominant_ultrametric(space: FiniteMetricSpace) -> Ultrametric:
    """Largest ultrametric below ``space`` pointwise (single-linkage cophenetic)."""
    return Ultrametric._unchecked(minimax_closure(space.dist))


def scale(rho: Ultrametric, c: float) -> Ultrametric:
    if not c > 0:
        raise ValueError(f"scale factor must be positive, got {c!r}")
    return Ultrametric._unchecked(rho.dist * float(c))


class ScopeTag(enum.Enum):
    ALL = "all"      # X x X
    CROSS = "cross"  # S x X
    INNER = "inner"  # S x S


@dataclass(frozen=True)
class PairScope:
    """Set of unordered distinct pairs over which stretches are measured."""

    tag: ScopeTag
    subset: SubsetSelection | None = None

    def __post_init__(self):
        if (self.tag is ScopeTag.ALL) != (self.subset is None):
            raise ValueError("subset is required exactly when the scope is not ALL")

    @classmethod
    def all(cls):
        return cls(ScopeTag.ALL)

    @classmethod
    def cross(cls, subset):
        return cls(ScopeTag.CROSS, subset)

    @classmethod
    def inner(cls, subset):
        return cls(ScopeTag.INNER, subset)

    def pairs(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Index arrays ``(a, b)`` of the scope's pairs.

        ALL and INNER list ``a < b``; CROSS lists ``a`` in S, in S-order, with
        pairs inside S appearing once.
        """
        if self.subset is not None and self.subset.parent_size != n:
            raise ValueError(f"scope subset indexes n={self.subset.parent_size}, not {n}")
        if self.tag is ScopeTag.ALL:
            a, b = np.triu_indices(n, 1)
            return a, b
        s = self.subset.array
        if self.tag is ScopeTag.INNER:
            i, j = np.triu_indices(len(s), 1)
            return s[i], s[j]
        mask = self.subset.mask
        a = np.repeat(s, n)
        b = np.tile(np.arange(n), len(s))
        keep = (a != b) & ~(mask[b] & (b < a))
        return a[keep], b[keep]


@dataclass(frozen=True)
class ApproximationReport:
    """Stretch ``rho/d`` extremes over a pair scope.

    With ``scaling_c = 1/min_stretch``: ``d <= c*rho <= factor_D*d`` on the scope.
    """

    scaling_c: float
    factor_D: float
    max_stretch: float
    min_stretch: float
    max_pair: tuple
    min_pair: tuple


def stretches(rho, d, scope: PairScope):
    r = _as_square(rho)
    dd = _as_square(d)
    if r.shape != dd.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {dd.shape}")
    a, b = scope.pairs(dd.shape[0])
    return a, b, r[a, b] / dd[a, b]


def approximation_parameters(rho, d, scope: PairScope | None = None) -> ApproximationReport:
    """Canonical ``c`` and ``D`` for ``rho`` approximating ``d`` on ``scope``.

    Ties in the witness pairs resolve to the first pair in scope order.
    """
    scope = scope or PairScope.all()
    a, b, s = stretches(rho, d, scope)
    if len(s) == 0:
        raise ValueError("pair scope is empty")
    hi, lo = int(np.argmax(s)), int(np.argmin(s))
    max_s, min_s = float(s[hi]), float(s[lo])
    return ApproximationReport(
        scaling_c=1.0 / min_s,
        factor_D=max_s / min_s,
        max_stretch=max_s,
        min_stretch=min_s,
        max_pair=(int(a[hi]), int(b[hi])),
        min_pair=(int(a[lo]), int(b[lo])),
    )


def dominating_ultrametric_on_subset(space: FiniteMetricSpace, subset: SubsetSelection):
    """Ultrametric ``rho`` on ``subset`` with ``d <= rho <= D*d`` there.

    Scales the subdominant ultrametric of ``d|S`` up until it dominates.
    Returns ``(rho, D)``; a single-point subset gives the zero matrix and D = 1.
    """
    sub = restrict(space, subset)
    if sub.n == 1:
        return Ultrametric._unchecked(np.zeros((1, 1))), 1.0
    rho_sub = minimax_closure(sub.dist)
    a, b = np.triu_indices(sub.n, 1)
    c = float(np.max(sub.dist[a, b] / rho_sub[a, b]))
    rho = Ultrametric._unchecked(rho_sub * c)
    return rho, approximation_parameters(rho, sub).factor_D
