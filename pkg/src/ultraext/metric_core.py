"""Finite metric spaces on dense indices ``0..n-1``, generators and restriction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    AsymmetricEntry,
    MatrixShapeError,
    NonFiniteEntry,
    NonpositiveOffDiagonal,
    NonzeroDiagonal,
    TriangleViolation,
)

# relative slack for the (strong) triangle inequality and all bound checks
TOL = 1e-9


def _as_square(matrix) -> np.ndarray:
    arr = np.array(getattr(matrix, "dist", matrix), dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MatrixShapeError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise MatrixShapeError("empty matrix")
    return arr


def check_basic_axioms(d: np.ndarray) -> None:
    """Finite entries, zero diagonal, exact symmetry, positive off-diagonal."""
    bad = np.argwhere(~np.isfinite(d))
    if len(bad):
        i, j = map(int, bad[0])
        raise NonFiniteEntry(i, j, float(d[i, j]))
    diag = np.flatnonzero(np.diag(d) != 0)
    if len(diag):
        i = int(diag[0])
        raise NonzeroDiagonal(i, float(d[i, i]))
    asym = np.argwhere(np.triu(d != d.T))
    if len(asym):
        i, j = map(int, asym[0])
        raise AsymmetricEntry(i, j, float(d[i, j]), float(d[j, i]))
    n = d.shape[0]
    nonpos = np.argwhere((d <= 0) & ~np.eye(n, dtype=bool))
    if len(nonpos):
        i, j = map(int, nonpos[0])
        raise NonpositiveOffDiagonal(i, j, float(d[i, j]))


def find_triangle_violation(d: np.ndarray, combine=np.add):
    """Return the first ``(x, z, via)`` with ``d[x,z] > combine(d[x,via], d[via,z])``.

    Triples are scanned in lexicographic ``(x, z, via)`` order. ``combine`` is
    ``np.add`` for the triangle inequality and ``np.maximum`` for the strong
    one. Returns ``None`` when every triple passes within ``TOL``.
    """
    for x in range(d.shape[0]):
        # bound[z, via] = combine(d[x, via], d[via, z])
        bound = combine(d[x][None, :], d)
        viol = d[x][:, None] > bound * (1.0 + TOL)
        hits = np.argwhere(viol)
        if len(hits):
            z, via = map(int, hits[0])
            return x, z, via, float(d[x, z]), float(bound[z, via])
    return None


class FiniteMetricSpace:
    """Validated symmetric distance matrix. Immutable."""

    __slots__ = ("_dist",)

    def __init__(self, matrix):
        d = _as_square(matrix)
        self._check(d)
        d.setflags(write=False)
        self._dist = d

    @classmethod
    def _unchecked(cls, d: np.ndarray):
        obj = cls.__new__(cls)
        d = np.array(d, dtype=float)
        d.setflags(write=False)
        obj._dist = d
        return obj

    @staticmethod
    def _check(d: np.ndarray) -> None:
        check_basic_axioms(d)
        hit = find_triangle_violation(d, np.add)
        if hit is not None:
            raise TriangleViolation(*hit)

    @property
    def dist(self) -> np.ndarray:
        return self._dist

    @property
    def n(self) -> int:
        return self._dist.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace) or type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._dist, other._dist)

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


@dataclass(frozen=True)
class SubsetSelection:
    """Canonical (sorted, deduplicated) nonempty index set inside ``0..parent_size-1``."""

    indices: tuple
    parent_size: int

    def __post_init__(self):
        idx = tuple(sorted({int(i) for i in self.indices}))
        if not idx:
            raise ValueError("subset must be nonempty")
        if idx[0] < 0 or idx[-1] >= self.parent_size:
            bad = idx[0] if idx[0] < 0 else idx[-1]
            raise IndexError(f"subset index {bad} out of range for n={self.parent_size}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def full(cls, n: int) -> "SubsetSelection":
        return cls(tuple(range(n)), n)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return i in self.indices

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent_size, dtype=bool)
        m[list(self.indices)] = True
        return m

    def position(self, i: int) -> int:
        """Position of point ``i`` inside the subset ordering."""
        try:
            return self.indices.index(i)
        except ValueError:
            raise KeyError(f"{i} is not in the subset") from None

    def compose(self, inner: "SubsetSelection") -> "SubsetSelection":
        """Map a subset of the restricted space back to ambient indices."""
        if inner.parent_size != len(self):
            raise ValueError("inner subset does not index this subset")
        return SubsetSelection(tuple(self.indices[a] for a in inner.indices), self.parent_size)


def validate_metric(matrix) -> FiniteMetricSpace:
    """Check the metric axioms and return the validated space.

    Raises the first violated axiom with its witness; the triangle check uses
    relative slack ``TOL``.
    """
    return FiniteMetricSpace(matrix)


def path_metric(n: int) -> FiniteMetricSpace:
    """Line metric ``|i - j|`` on ``n >= 2`` consecutive integers."""
    if n < 2:
        raise ValueError("path_metric needs n >= 2")
    idx = np.arange(n, dtype=float)
    return FiniteMetricSpace._unchecked(np.abs(idx[:, None] - idx[None, :]))


def shortest_path_closure(w: np.ndarray) -> np.ndarray:
    """All-pairs shortest path lengths (Floyd-Warshall) of a dense weight matrix."""
    d = np.array(w, dtype=float)
    for k in range(d.shape[0]):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def random_metric(n: int, seed: int) -> FiniteMetricSpace:
    """Symmetric uniform ``[1, 2]`` weights closed under shortest paths.

    Deterministic given ``(n, seed)``.
    """
    if n < 2:
        raise ValueError("random_metric needs n >= 2")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.uniform(1.0, 2.0, size=(n, n)), 1)
    d = shortest_path_closure(upper + upper.T)
    return FiniteMetricSpace(d)


def restrict(space: FiniteMetricSpace, subset: SubsetSelection | Iterable[int]):
    """Sub-space on ``subset``; keeps the concrete type (ultrametrics stay ultrametric)."""
    if not isinstance(subset, SubsetSelection):
        subset = SubsetSelection(tuple(subset), space.n)
    if subset.parent_size != space.n:
        raise IndexError(
            f"subset indexes a space of size {subset.parent_size}, got n={space.n}"
        )
    idx = subset.array
    return type(space)._unchecked(space.dist[np.ix_(idx, idx)])
