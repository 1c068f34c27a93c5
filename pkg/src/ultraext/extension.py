"""Extending an ultrametric from a subset S to the whole space X.

Each point ``y`` is sent to its nearest subset point ``N(y)`` and

    rhobar(x, y) = max(2D d(x, N(x)), 2D d(y, N(y)), rho(N(x), N(y)))

for ``x != y``. When ``d <= rho <= D d`` on S this is an ultrametric that
equals ``rho`` on S x S, satisfies ``rhobar >= D/(D+1) d`` on X x X (the
constant written ``2D/(2(D+1))``), and ``2D/(2D+1) d <= rhobar <= 2D d`` on
S x X, hence distortion at most ``2D + 1`` there.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .errors import HypothesisViolated, MatrixShapeError
from .metric_core import (
    TOL,
    FiniteMetricSpace,
    SubsetSelection,
    _as_square,
    check_basic_axioms,
    find_triangle_violation,
    restrict,
)
from .textio import format_number
from .ultrametric import PairScope, Ultrametric, approximation_parameters, stretches


@dataclass(frozen=True)
class NearestNeighborMap:
    assign: np.ndarray      # N(y) as an ambient index
    position: np.ndarray    # N(y) as a position inside the subset
    dist_to_s: np.ndarray   # d(y, N(y))


def nearest_neighbor_map(space: FiniteMetricSpace, subset: SubsetSelection) -> NearestNeighborMap:
    """Exact nearest subset point for every point; ties go to the lowest index."""
    if subset.parent_size != space.n:
        raise IndexError("subset does not index this space")
    s = subset.array
    block = space.dist[:, s]
    pos = np.argmin(block, axis=1)  # first minimum = lowest index, s is sorted
    return NearestNeighborMap(
        assign=s[pos],
        position=pos,
        dist_to_s=block[np.arange(space.n), pos],
    )


def _subset_rho(rho, subset: SubsetSelection) -> np.ndarray:
    r = _as_square(rho)
    if r.shape[0] != len(subset):
        raise MatrixShapeError(
            f"rho is {r.shape[0]}x{r.shape[0]} but the subset has {len(subset)} points"
        )
    return r


def check_hypothesis(space: FiniteMetricSpace, subset: SubsetSelection, rho, D: float) -> None:
    """Raise ``HypothesisViolated`` unless ``d <= rho <= D*d`` on subset pairs."""
    r = _subset_rho(rho, subset)
    d = restrict(space, subset).dist
    a, b = np.triu_indices(len(subset), 1)
    low = r[a, b] < d[a, b] * (1.0 - TOL)
    high = r[a, b] > D * d[a, b] * (1.0 + TOL)
    for side, bad in (("lower", low), ("upper", high)):
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            i, j = int(a[k]), int(b[k])
            pair = (subset.indices[i], subset.indices[j])
            raise HypothesisViolated(pair, side, float(r[i, j]), float(d[i, j]), D)


def infer_factor(space: FiniteMetricSpace, subset: SubsetSelection, rho) -> float:
    """Distortion of ``rho`` against ``d|S`` (1 for a single point)."""
    if len(subset) == 1:
        return 1.0
    return approximation_parameters(_subset_rho(rho, subset), restrict(space, subset)).factor_D


def extend(space: FiniteMetricSpace, subset: SubsetSelection, rho, D: float | None = None) -> Ultrametric:
    """Nearest-neighbor extension of ``rho`` (an ultrametric on ``subset``) to X.

    ``D`` is the hypothesised approximation factor; when omitted it is inferred
    as the distortion of ``rho`` on S. Raises ``HypothesisViolated`` when
    ``d <= rho <= D*d`` fails on S beyond the relative slack.
    """
    r = _subset_rho(rho, subset)
    if not isinstance(rho, Ultrametric):
        Ultrametric(r)
    if D is None:
        D = infer_factor(space, subset, r)
    D = float(D)
    if not D >= 1:
        raise ValueError(f"approximation factor must be >= 1, got {D!r}")
    check_hypothesis(space, subset, r, D)

    nn = nearest_neighbor_map(space, subset)
    reach = 2 * D * nn.dist_to_s
    out = np.maximum(np.maximum(reach[:, None], reach[None, :]), r[np.ix_(nn.position, nn.position)])
    np.fill_diagonal(out, 0.0)
    s = subset.array
    out[np.ix_(s, s)] = r  # verbatim copy keeps S x S bit-exact
    return Ultrametric(out)


@dataclass(frozen=True)
class ExtensionReport:
    D: float
    restriction_exact: bool
    global_lower_ok: bool
    global_lower_ratio: float
    global_lower_pair: tuple
    cross_lower_ok: bool
    cross_lower_ratio: float
    cross_lower_pair: tuple
    cross_upper_ok: bool
    cross_upper_ratio: float
    cross_upper_pair: tuple
    cross_distortion: float
    is_ultrametric: bool
    ultrametric_witness: tuple | None = None
    D_inferred: bool = False

    @property
    def ok(self) -> bool:
        return (self.restriction_exact and self.global_lower_ok and self.cross_lower_ok
                and self.cross_upper_ok and self.is_ultrametric)

    def as_text(self) -> str:
        """Flat ``key=value`` block, one field per line."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                text = str(value).lower()
            elif isinstance(value, float):
                text = format_number(value)
            elif isinstance(value, tuple):
                text = ",".join(str(v) for v in value)
            elif value is None:
                text = "none"
            else:
                text = str(value)
            lines.append(f"{f.name}={text}")
        lines.append(f"ok={str(self.ok).lower()}")
        return "\n".join(lines) + "\n"


def _extreme(a, b, ratios, pick):
    if len(ratios) == 0:
        return 1.0, ()
    k = int(pick(ratios))
    return float(ratios[k]), (int(a[k]), int(b[k]))


def _ultrametric_witness(m: np.ndarray):
    try:
        check_basic_axioms(m)
    except ValueError as exc:
        return tuple(v for v in (getattr(exc, "i", None), getattr(exc, "j", None)) if v is not None)
    hit = find_triangle_violation(m, np.maximum)
    return None if hit is None else hit[:3]


def verify_extension(space: FiniteMetricSpace, subset: SubsetSelection, rho, rhobar, D: float,
                     D_inferred: bool = False) -> ExtensionReport:
    """Check the three extension guarantees and the ultrametric property.

    ``rhobar`` may be any square matrix; failures are reported, not raised.
    Ratios are normalised so that 1 is the bound: lower ratios must be
    ``>= 1 - TOL`` and the upper ratio ``<= 1 + TOL``.
    """
    r = _subset_rho(rho, subset)
    rb = _as_square(rhobar)
    if rb.shape[0] != space.n:
        raise MatrixShapeError(f"rhobar is {rb.shape[0]}x{rb.shape[0]}, space has n={space.n}")
    D = float(D)
    s = subset.array
    restriction_exact = bool(np.array_equal(rb[np.ix_(s, s)], r))

    global_coef = 2 * D / (2 * (D + 1))
    a, b, st = stretches(rb, space.dist, PairScope.all())
    g_ratio, g_pair = _extreme(a, b, st / global_coef, np.argmin)

    a, b, st = stretches(rb, space.dist, PairScope.cross(subset))
    cl_ratio, cl_pair = _extreme(a, b, st / (2 * D / (2 * D + 1)), np.argmin)
    cu_ratio, cu_pair = _extreme(a, b, st / (2 * D), np.argmax)
    if len(st) and st.min() > 0:
        distortion = float(st.max() / st.min())
    elif len(st):
        distortion = float("inf")
    else:
        distortion = 1.0

    witness = _ultrametric_witness(rb)
    return ExtensionReport(
        D=D,
        restriction_exact=restriction_exact,
        global_lower_ok=g_ratio >= 1 - TOL,
        global_lower_ratio=g_ratio,
        global_lower_pair=g_pair,
        cross_lower_ok=cl_ratio >= 1 - TOL,
        cross_lower_ratio=cl_ratio,
        cross_lower_pair=cl_pair,
        cross_upper_ok=cu_ratio <= 1 + TOL,
        cross_upper_ratio=cu_ratio,
        cross_upper_pair=cu_pair,
        cross_distortion=distortion,
        is_ultrametric=witness is None,
        ultrametric_witness=witness,
        D_inferred=D_inferred,
    )
