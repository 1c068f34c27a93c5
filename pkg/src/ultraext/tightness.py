"""The line instance on which ``2D + 1`` cannot be beaten, the chain
argument certifying it, and a brute-force oracle for the least achievable
S x X distortion of any extension on small spaces.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from .errors import DominanceViolated, MatrixShapeError, ValidationError
from .extension import _subset_rho, extend, verify_extension
from .metric_core import (
    TOL,
    FiniteMetricSpace,
    SubsetSelection,
    _as_square,
    path_metric,
    random_metric,
    restrict,
)
from .ultrametric import (
    PairScope,
    Ultrametric,
    approximation_parameters,
    minimax_closure,
    scale,
    subdominant_ultrametric,
    uniform_ultrametric,
)

ORACLE_MAX_POINTS = 16
GRID_SIZE = 512
_INVPHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class WorstCaseInstance:
    D: int
    space: FiniteMetricSpace
    subset: SubsetSelection
    rho: Ultrametric


def _positive_int(D) -> int:
    if isinstance(D, bool) or not isinstance(D, numbers.Integral) or D < 1:
        raise ValueError(f"D must be a positive integer, got {D!r}")
    return int(D)


def worst_case_instance(D: int) -> WorstCaseInstance:
    """Points ``0..2D+1`` on a line, S the odd points, rho uniform ``2D`` on S.

    Subset distances are the even numbers ``2..2D``, so the uniform value has
    stretch between 1 and D.
    """
    D = _positive_int(D)
    space = path_metric(2 * D + 2)
    subset = SubsetSelection(tuple(range(1, 2 * D + 2, 2)), space.n)
    rho = uniform_ultrametric(D + 1, 2 * D)
    rep = approximation_parameters(rho, restrict(space, subset))
    if rep.factor_D > D * (1 + TOL) or rep.min_stretch < 1 - TOL:
        raise RuntimeError(f"uniform subset ultrametric is not a {D}-approximation")
    return WorstCaseInstance(D, space, subset, rho)


def chain_lower_bound(rhobar, D: int) -> float:
    """Largest ``rhobar(i, i+1)`` along the line instance with parameter ``D``.

    ``rhobar`` must dominate the line distance on S x X. The strong triangle
    inequality along ``0, 1, ..., 2D+1`` then forces the returned value to be
    at least ``rhobar(0, 2D+1) >= 2D + 1``; each adjacent pair has an endpoint
    in S and unit distance, so this is an S x X stretch.
    """
    D = _positive_int(D)
    rb = rhobar if isinstance(rhobar, Ultrametric) else Ultrametric(rhobar)
    inst = worst_case_instance(D)
    n = inst.space.n
    if rb.n != n:
        raise MatrixShapeError(f"expected {n} points for D={D}, got {rb.n}")
    m, d = rb.dist, inst.space.dist
    a, b = PairScope.cross(inst.subset).pairs(n)
    short = m[a, b] < d[a, b] * (1 - TOL)
    if short.any():
        k = int(np.flatnonzero(short)[0])
        raise DominanceViolated((int(a[k]), int(b[k])), float(m[a[k], b[k]]), float(d[a[k], b[k]]))

    steps = m[np.arange(n - 1), np.arange(1, n)]
    top = float(steps.max())
    end = float(m[0, n - 1])
    if top < end * (1 - TOL):
        raise ValidationError(f"chain maximum {top!r} below rhobar(0,{n - 1})={end!r}")
    if end < (2 * D + 1) * (1 - TOL):
        raise ValidationError(f"rhobar(0,{n - 1})={end!r} below {2 * D + 1}")
    return top


def sample_dominating_ultrametrics(D: int, count: int, seed: int = 0):
    """Ultrametrics on the line instance that dominate d on S x X.

    Cycles through three families: the extension output scaled past the
    dominance threshold, uniform values ``>= 2D + 1``, and subdominant
    ultrametrics of random metrics scaled until they dominate.
    """
    D = _positive_int(D)
    inst = worst_case_instance(D)
    base = extend(inst.space, inst.subset, inst.rho, D)
    a, b = PairScope.cross(inst.subset).pairs(inst.space.n)
    d = inst.space.dist
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        kind = k % 3
        if kind == 0:
            need = float(np.max(d[a, b] / base.dist[a, b]))
            out.append(scale(base, need * (1 + rng.uniform(0, 1))))
        elif kind == 1:
            out.append(uniform_ultrametric(inst.space.n, (2 * D + 1) * (1 + rng.uniform(0, 1))))
        else:
            sub = subdominant_ultrametric(random_metric(inst.space.n, int(rng.integers(2**31))))
            need = float(np.max(d[a, b] / sub.dist[a, b]))
            out.append(scale(sub, need))
    return out


@dataclass(frozen=True)
class BoundConstraints:
    """Entrywise box ``lower <= rhobar <= upper`` for a candidate ultrametric.

    ``upper = inf`` means the pair is unconstrained from above. Pairs in
    ``equal`` must match ``upper`` exactly (within slack).
    """

    lower: np.ndarray
    upper: np.ndarray
    equal: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=float)
        up = np.array(self.upper, dtype=float)
        eq = np.array(self.equal, dtype=bool)
        if lo.ndim != 2 or lo.shape[0] != lo.shape[1] or up.shape != lo.shape or eq.shape != lo.shape:
            raise MatrixShapeError("lower, upper and equal must be square and of equal shape")
        if not np.isfinite(lo).all() or (lo < 0).any():
            raise ValidationError("lower bounds must be finite and nonnegative")
        if np.isnan(up).any():
            raise ValidationError("upper bounds must not be NaN")
        off = ~np.eye(lo.shape[0], dtype=bool)
        if (np.diag(lo) != 0).any() or (np.diag(up) != 0).any():
            raise ValidationError("bounds must have a zero diagonal")
        if (up[off] <= 0).any():
            raise ValidationError("off-diagonal upper bounds must be positive")
        if not (np.array_equal(lo, lo.T) and np.array_equal(up, up.T) and np.array_equal(eq, eq.T)):
            raise ValidationError("bounds must be symmetric")
        if (eq & ~np.isfinite(up)).any():
            raise ValidationError("equality constraint on an unbounded pair")
        for name, arr in (("lower", lo), ("upper", up), ("equal", eq)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def extension_constraints(space: FiniteMetricSpace, subset: SubsetSelection, rho, c: float, t: float) -> BoundConstraints:
    """Box for: ``rhobar = c*rho`` on S x S and ``d <= rhobar <= t*d`` on S x X."""
    r = _subset_rho(rho, subset)
    n = space.n
    d = space.dist
    mask = subset.mask
    off = ~np.eye(n, dtype=bool)
    inner = mask[:, None] & mask[None, :] & off
    cross = (mask[:, None] | mask[None, :]) & off & ~inner

    lower = np.zeros((n, n))
    upper = np.full((n, n), np.inf)
    np.fill_diagonal(upper, 0.0)
    lower[cross] = d[cross]
    upper[cross] = t * d[cross]

    s = subset.array
    target = np.zeros((n, n))
    target[np.ix_(s, s)] = c * r
    lower[inner] = np.maximum(d[inner], target[inner])
    upper[inner] = np.minimum(t * d[inner], target[inner])
    return BoundConstraints(lower, upper, inner)


def feasible_extension_exists(constraints: BoundConstraints):
    """Return ``(feasible, witness)`` for the box ``constraints``.

    The minimax closure of ``upper`` is the largest ultrametric below it, so
    the box holds an ultrametric iff that closure clears ``lower`` and meets
    every equality pair. The witness is the closure, or ``None``.
    """
    try:
        m = minimax_closure(constraints.upper)
    except ValueError as exc:
        raise ValidationError(f"malformed constraints: {exc}") from None
    if (m < constraints.lower * (1 - TOL)).any():
        return False, None
    eq = constraints.equal
    if (np.abs(m[eq] - constraints.upper[eq]) > TOL * constraints.upper[eq]).any():
        return False, None
    return True, Ultrametric._unchecked(m)


@dataclass(frozen=True)
class OracleResult:
    t: float
    c: float
    witness: Ultrametric


def optimal_extension(space: FiniteMetricSpace, subset: SubsetSelection, rho,
                      resolution: float = 1e-6) -> OracleResult:
    """Least S x X distortion over all extensions of a rescaled ``rho``.

    For each scale ``c`` the least feasible ``t`` is found by bisection on
    ``[1, t_max]``; ``c`` is searched on a 512-point grid followed by
    golden-section refinement around the best grid point. Ties are resolved
    toward larger ``c``, the side on which a plateau can still descend.
    """
    if space.n > ORACLE_MAX_POINTS:
        raise ValueError(f"oracle is limited to {ORACLE_MAX_POINTS} points, got {space.n}")
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    r = _subset_rho(rho, subset)
    if not isinstance(rho, Ultrametric):
        Ultrametric(r)

    if len(subset) == 1:
        D = 1.0
        grid = np.array([1.0])
    else:
        rep = approximation_parameters(r, restrict(space, subset))
        D = rep.factor_D
        t_max = 10 * (2 * D + 1)
        grid = np.linspace(1.0 / rep.min_stretch, t_max / rep.max_stretch, GRID_SIZE)
    t_max = 10 * (2 * D + 1)

    def feasible(c, t):
        return feasible_extension_exists(extension_constraints(space, subset, r, c, t))[0]

    memo = {}

    def least_t(c):
        if c in memo:
            return memo[c]
        if not feasible(c, t_max):
            value = math.inf
        elif feasible(c, 1.0):
            value = 1.0
        else:
            lo, hi = 1.0, t_max
            while hi - lo > resolution:
                mid = 0.5 * (lo + hi)
                if feasible(c, mid):
                    hi = mid
                else:
                    lo = mid
            value = hi
        memo[c] = value
        return value

    values = np.full(len(grid), math.inf)
    best = math.inf
    for i, c in enumerate(grid):
        c = float(c)
        # anything infeasible at the incumbent is strictly worse; skip the bisection
        if best < math.inf and not feasible(c, best):
            continue
        values[i] = least_t(c)
        best = min(best, values[i])
    if best == math.inf:
        raise ValueError(f"no feasible extension with distortion below t_max={t_max:g}")

    i = int(np.flatnonzero(values == best)[-1])
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, len(grid) - 1)])
    x1, x2 = b - _INVPHI * (b - a), a + _INVPHI * (b - a)
    for _ in range(200):
        if b - a <= 1e-12 * max(1.0, b):
            break
        if least_t(x1) < least_t(x2):
            b, x2 = x2, x1
            x1 = b - _INVPHI * (b - a)
        else:
            a, x1 = x1, x2
            x2 = a + _INVPHI * (b - a)
    least_t(a)
    least_t(b)

    t_opt, c_opt = min((t, c) for c, t in memo.items())
    _, witness = feasible_extension_exists(extension_constraints(space, subset, r, c_opt, t_opt))
    return OracleResult(t_opt, c_opt, witness)


def optimal_extension_distortion(space: FiniteMetricSpace, subset: SubsetSelection, rho,
                                 resolution: float = 1e-6) -> float:
    return optimal_extension(space, subset, rho, resolution).t


@dataclass(frozen=True)
class TightnessResult:
    D: int
    construction_distortion: float
    oracle: OracleResult
    chain_bound: float

    @property
    def expected(self) -> int:
        return 2 * self.D + 1


def reproduce_tightness(D: int, resolution: float = 1e-6) -> TightnessResult:
    """Run the construction, the oracle and the chain bound on the line instance."""
    inst = worst_case_instance(D)
    rhobar = extend(inst.space, inst.subset, inst.rho, inst.D)
    report = verify_extension(inst.space, inst.subset, inst.rho, rhobar, inst.D)
    oracle = optimal_extension(inst.space, inst.subset, inst.rho, resolution)
    rep = approximation_parameters(rhobar, inst.space, PairScope.cross(inst.subset))
    chain = chain_lower_bound(scale(rhobar, rep.scaling_c), inst.D)
    return TightnessResult(inst.D, report.cross_distortion, oracle, chain)
