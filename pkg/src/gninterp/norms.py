"""Grid-based norm evaluation for smooth compactly supported functions.

Three numerical primitives, each returning a value plus an error estimate:

* Lebesgue norms by tensor-product composite Simpson quadrature with one
  Richardson halving step (the discrepancy between the coarse and fine pass
  drives both the extrapolation and the error estimate).
* Sup norms by grid maximization with local refinement around the argmax.
* Holder seminorms by scanning pairwise difference quotients, again with
  local refinement around the best pair.

Derivative norms reduce a jet to a scalar field pointwise by taking the max
over all components of the given total order; sup parts of Holder norms take
the max across orders. Seminorm parts sum the per-component pair sups.

The pair scan used by :func:`holder_seminorm` and :func:`brute_force_holder`
is one shared routine, so with refinement turned off the two agree bit for
bit on the same grid. All reductions run in a fixed order; repeated calls
give identical floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence

import numpy as np

from .errors import GridTooCoarse, OracleTooLarge
from .indices import SpaceIndex, holder_signature
from .taylor import Key, multi_indices_exact
from .testfn import TestFunction

# Defaults keep full pair scans comfortably inside the point cap below.
DEFAULT_LP_POINTS = {1: 257, 2: 33, 3: 17}
DEFAULT_PAIR_POINTS = {1: 129, 2: 25, 3: 9}

# Hard ceiling on points entering a pairwise scan (the scan is quadratic).
PAIR_POINT_CAP = 4096

# Pairs closer than this are skipped in difference quotients.
MIN_PAIR_SEPARATION = 1e-9

_PAIR_CHUNK = 512


@dataclass(frozen=True)
class GridSpec:
    """Uniform tensor grid on a box, the same point count along every axis."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    points_per_axis: int

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi have different lengths")
        if self.points_per_axis < 3:
            raise ValueError("need at least 3 points per axis")

    @property
    def ndim(self) -> int:
        return len(self.lo)

    @property
    def npoints(self) -> int:
        return self.points_per_axis ** self.ndim

    def axes(self) -> list[np.ndarray]:
        return [
            np.linspace(self.lo[i], self.hi[i], self.points_per_axis)
            for i in range(self.ndim)
        ]

    def spacing(self) -> np.ndarray:
        return (np.asarray(self.hi) - np.asarray(self.lo)) / (self.points_per_axis - 1)

    def mesh(self) -> np.ndarray:
        """All grid points as an (npoints, ndim) array, C order."""
        grids = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=-1)

    def refined(self) -> "GridSpec":
        """Same box with doubled resolution (shared nodes at even indices)."""
        return GridSpec(self.lo, self.hi, 2 * self.points_per_axis - 1)


def default_grid(fn: TestFunction, kind: str = "lp", margin: float = 1.05) -> GridSpec:
    """Grid covering the support box of ``fn`` with a small margin.

    ``kind`` selects the resolution table: "lp" for quadrature and sup scans,
    "pair" for the quadratic-cost Holder scans.
    """
    table = DEFAULT_PAIR_POINTS if kind == "pair" else DEFAULT_LP_POINTS
    lo, hi = fn.bounding_box(margin)
    return GridSpec(tuple(lo), tuple(hi), table[fn.ndim])


@dataclass(frozen=True)
class NormValue:
    """A computed norm with a (heuristic) error estimate and method tag."""

    value: float
    error_estimate: float
    method: str

    def __float__(self) -> float:
        return self.value


def _max_component_field(fn: TestFunction, pts: np.ndarray, order: int) -> np.ndarray:
    """Pointwise max of |D^alpha u| over all alpha of the given total order."""
    jet = fn.jet(pts, order)
    keys = multi_indices_exact(fn.ndim, order)
    field = np.abs(jet[keys[0]])
    for key in keys[1:]:
        field = np.maximum(field, np.abs(jet[key]))
    return field


def _simpson_weights(m: int, h: float) -> np.ndarray:
    if m % 2 == 0:
        raise ValueError("composite Simpson needs an odd point count")
    w = np.ones(m)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def _simpson_integral(field: np.ndarray, grid: GridSpec) -> float:
    h = grid.spacing()
    out = field.reshape((grid.points_per_axis,) * grid.ndim)
    for ax in range(grid.ndim):
        out = np.tensordot(out, _simpson_weights(grid.points_per_axis, h[ax]), axes=([0], [0]))
    return float(out)


def lp_norm(
    fn: TestFunction,
    p: float | Fraction,
    order: int = 0,
    grid: GridSpec | None = None,
    coarse_tol: float = 0.10,
) -> NormValue:
    """L^p norm of the order-th derivative (pointwise max over components).

    Composite Simpson on the given grid and on its refinement; the pair is
    Richardson-extrapolated and their discrepancy becomes the error estimate.
    A relative discrepancy above ``coarse_tol`` raises GridTooCoarse.
    """
    p = float(p)
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if grid is None:
        grid = default_grid(fn, "lp")
    fine = grid.refined()
    ic = _simpson_integral(_max_component_field(fn, grid.mesh(), order) ** p, grid)
    i_f = _simpson_integral(_max_component_field(fn, fine.mesh(), order) ** p, fine)
    if ic == 0.0 and i_f == 0.0:
        return NormValue(0.0, 0.0, "simpson+richardson")
    denom = max(abs(i_f), abs(ic))
    rel = abs(i_f - ic) / denom
    if rel > coarse_tol:
        raise GridTooCoarse(
            f"Simpson passes disagree by {rel:.1%} (> {coarse_tol:.0%}); refine the grid"
        )
    # Simpson error is O(h^4): the halved grid removes ~15/16 of it.
    correction = (i_f - ic) / 15.0
    integral = i_f + correction
    value = integral ** (1.0 / p)
    err = abs(correction) / (p * integral) * value if integral > 0 else 0.0
    return NormValue(value, err, "simpson+richardson")


def lp_norm_midpoint_oracle(
    fn: TestFunction,
    p: float | Fraction,
    order: int = 0,
    grid: GridSpec | None = None,
) -> NormValue:
    """Independent L^p check: midpoint rule on cell centers.

    Shares no evaluation points with the Simpson grid, so agreement within
    the combined error estimates is meaningful evidence.
    """
    p = float(p)
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if grid is None:
        grid = default_grid(fn, "lp")
    m = grid.points_per_axis - 1  # cells per axis
    lo = np.asarray(grid.lo)
    h = (np.asarray(grid.hi) - lo) / m
    axes = [lo[i] + (np.arange(m) + 0.5) * h[i] for i in range(grid.ndim)]
    mesh = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
    field = _max_component_field(fn, mesh, order) ** p
    integral = float(np.sum(field.reshape((m,) * grid.ndim))) * float(np.prod(h))
    if integral <= 0.0:
        return NormValue(0.0, 0.0, "midpoint")
    value = integral ** (1.0 / p)
    # Midpoint is O(h^2); estimate via a half-resolution pass.
    m2 = m // 2
    axes2 = [lo[i] + (np.arange(m2) + 0.5) * (h[i] * m / m2) for i in range(grid.ndim)]
    mesh2 = np.stack([g.ravel() for g in np.meshgrid(*axes2, indexing="ij")], axis=-1)
    coarse = float(np.sum(_max_component_field(fn, mesh2, order) ** p)) * float(
        np.prod(h * m / m2)
    )
    # Halving an O(h^2) rule leaves |I - I_coarse| ~ 3x the fine error for
    # smooth fields; /2 keeps headroom for the kinks |D^l u| introduces.
    err_int = abs(integral - coarse) / 2.0
    err = err_int / (p * integral) * value
    return NormValue(value, err, "midpoint")


def sup_norm(
    fn: TestFunction,
    order: int = 0,
    grid: GridSpec | None = None,
    refinements: int = 2,
) -> NormValue:
    """Sup over space of the pointwise max over order-th derivative components.

    Grid maximum, then local 9-points-per-axis sweeps around the argmax with
    the spacing shrunk 4x per round. The error estimate is the last observed
    improvement (floored at machine precision of the value).
    """
    if grid is None:
        grid = default_grid(fn, "lp")
    pts = grid.mesh()
    field = _max_component_field(fn, pts, order)
    best_i = int(np.argmax(field))
    best = float(field[best_i])
    center = pts[best_i]
    h = grid.spacing()
    improvement = 0.0
    for _ in range(refinements):
        axes = [np.linspace(center[i] - h[i], center[i] + h[i], 9) for i in range(fn.ndim)]
        local = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
        lf = _max_component_field(fn, local, order)
        li = int(np.argmax(lf))
        if float(lf[li]) > best:
            improvement = float(lf[li]) - best
            best = float(lf[li])
            center = local[li]
        h = h / 4.0
    err = max(improvement, np.finfo(float).eps * abs(best))
    return NormValue(best, err, "grid_sup")


# -- pairwise Holder scans ----------------------------------------------------


def _pair_scan(
    points: np.ndarray,
    comps: Mapping[Key, np.ndarray],
    gamma: float,
) -> tuple[Dict[Key, float], Dict[Key, tuple[np.ndarray, np.ndarray]]]:
    """Best difference quotient |v(x)-v(y)| / |x-y|^gamma per component.

    Scans every unordered pair of rows of ``points`` in fixed chunk order.
    Returns per-component sups and the attaining pairs.
    """
    n = points.shape[0]
    keys = sorted(comps)
    sups = {k: 0.0 for k in keys}
    pairs: Dict[Key, tuple[np.ndarray, np.ndarray]] = {
        k: (points[0], points[0]) for k in keys
    }
    for start in range(0, n, _PAIR_CHUNK):
        block = points[start : start + _PAIR_CHUNK]
        diff = block[:, None, :] - points[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        ok = dist >= MIN_PAIR_SEPARATION
        denom = np.where(ok, dist, 1.0) ** gamma
        for k in keys:
            v = comps[k]
            num = np.abs(v[start : start + _PAIR_CHUNK, None] - v[None, :])
            q = np.where(ok, num / denom, 0.0)
            fi = int(np.argmax(q))
            i, j = divmod(fi, n)
            if float(q[i, j]) > sups[k]:
                sups[k] = float(q[i, j])
                pairs[k] = (block[i], points[j])
    return sups, pairs


def _exact_order_components(fn: TestFunction, pts: np.ndarray, order: int) -> Dict[Key, np.ndarray]:
    jet = fn.jet(pts, order)
    return {k: jet[k] for k in multi_indices_exact(fn.ndim, order)}


def holder_seminorm(
    fn: TestFunction,
    order: int,
    gamma: float,
    grid: GridSpec | None = None,
    refinements: int = 3,
) -> NormValue:
    """Sum over order-th derivative components of the sup difference quotient.

    ``gamma`` is the quotient exponent in (0, 1]. Each component's best pair
    from the global scan is refined locally: 5 points per axis around both
    endpoints, all pairs among the combined cloud, spacing shrunk 4x per
    round. With ``refinements=0`` this equals :func:`brute_force_holder` on
    the same grid exactly.
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if grid is None:
        grid = default_grid(fn, "pair")
    if grid.npoints > PAIR_POINT_CAP:
        raise OracleTooLarge(
            f"{grid.npoints} points exceed the pair-scan cap of {PAIR_POINT_CAP}"
        )
    pts = grid.mesh()
    comps = _exact_order_components(fn, pts, order)
    sups, pairs = _pair_scan(pts, comps, float(gamma))

    improvement = 0.0
    h0 = grid.spacing()
    for key in sorted(comps):
        h = h0.copy()
        for _ in range(refinements):
            x_star, y_star = pairs[key]
            cloud = []
            for c in (x_star, y_star):
                axes = [np.linspace(c[i] - h[i], c[i] + h[i], 5) for i in range(fn.ndim)]
                cloud.append(
                    np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1)
                )
            local = np.concatenate(cloud, axis=0)
            lsup, lpair = _pair_scan(local, _exact_order_components(fn, local, order), float(gamma))
            if lsup[key] > sups[key]:
                improvement = max(improvement, lsup[key] - sups[key])
                sups[key] = lsup[key]
                pairs[key] = lpair[key]
            h = h / 4.0
    total = 0.0
    for key in sorted(sups):
        total += sups[key]
    err = max(improvement, np.finfo(float).eps * abs(total))
    return NormValue(total, err, "pair_sup")


def brute_force_holder(
    fn: TestFunction,
    order: int,
    gamma: float,
    grid: GridSpec,
) -> NormValue:
    """Reference Holder seminorm: the raw pair scan on an explicit grid.

    No refinement, no extrapolation; used as the oracle the fast path must
    reproduce bit for bit. Grids beyond the point cap raise OracleTooLarge.
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if grid.npoints > PAIR_POINT_CAP:
        raise OracleTooLarge(
            f"{grid.npoints} points exceed the pair-scan cap of {PAIR_POINT_CAP}"
        )
    pts = grid.mesh()
    sups, _ = _pair_scan(pts, _exact_order_components(fn, pts, order), float(gamma))
    total = 0.0
    for key in sorted(sups):
        total += sups[key]
    return NormValue(total, np.finfo(float).eps * abs(total), "pair_sup_brute")


# -- scale-indexed dispatch ---------------------------------------------------


def xnorm(
    fn: TestFunction,
    s: Fraction | int | str,
    order: int = 0,
    mode: str = "full",
    lp_grid: GridSpec | None = None,
    pair_grid: GridSpec | None = None,
) -> NormValue:
    """Norm of the order-th derivative in the space of scale ``s``.

    Positive scales are Lebesgue norms with p = 1/s, scale zero is the sup
    norm, negative scales are Holder norms assembled from the signature of
    the scale: sups of orders ``order .. order+p1`` plus the exponent-p2
    seminorm at order ``order+p1``.

    ``mode`` is "full" or "seminorm". For negative scales "seminorm" drops
    the sup part; for scale zero both modes are the grid sup; for positive
    scales both modes coincide.
    """
    if mode not in ("full", "seminorm"):
        raise ValueError(f"mode must be 'full' or 'seminorm', got {mode!r}")
    idx = SpaceIndex(s, fn.ndim)
    if idx.s > 0:
        return lp_norm(fn, 1 / idx.s, order=order, grid=lp_grid)
    if idx.s == 0:
        return sup_norm(fn, order=order, grid=lp_grid)
    sig = holder_signature(idx)
    semi = holder_seminorm(fn, order + sig.p1, float(sig.p2), grid=pair_grid)
    if mode == "seminorm":
        return semi
    sup_part = 0.0
    sup_err = 0.0
    for m in range(order, order + sig.p1 + 1):
        nv = sup_norm(fn, order=m, grid=lp_grid)
        if nv.value > sup_part:
            sup_part, sup_err = nv.value, nv.error_estimate
    return NormValue(sup_part + semi.value, sup_err + semi.error_estimate, "pair_sup")


def check_holder_equality(
    fn: TestFunction,
    s: Fraction | int | str,
    lp_grid: GridSpec | None = None,
    pair_grid: GridSpec | None = None,
) -> tuple[NormValue, NormValue]:
    """Derivative norm at negative scale s against the space one step down.

    Returns ``(lhs, rhs)`` where ``rhs`` is the full scale-s norm of the
    gradient (orders 1 .. p1+1 sups plus the top seminorm) and ``lhs`` is
    the order->=1 part of the scale-(s - 1/n) norm of the function itself.
    The two sides enumerate the same components, so they agree up to
    floating-point identity; the order-0 sup belongs to neither side.
    """
    idx = SpaceIndex(s, fn.ndim)
    holder_signature(idx)  # s < 0 check
    if pair_grid is None:
        pair_grid = default_grid(fn, "pair")
    down = holder_signature(SpaceIndex(idx.s - Fraction(1, fn.ndim), fn.ndim))
    sup_part = 0.0
    sup_err = 0.0
    for m in range(1, down.p1 + 1):
        nv = sup_norm(fn, order=m, grid=lp_grid)
        if nv.value > sup_part:
            sup_part, sup_err = nv.value, nv.error_estimate
    semi = holder_seminorm(fn, down.p1, float(down.p2), grid=pair_grid)
    lhs = NormValue(sup_part + semi.value, sup_err + semi.error_estimate, "pair_sup")
    rhs = xnorm(fn, idx.s, order=1, mode="full", lp_grid=lp_grid, pair_grid=pair_grid)
    return lhs, rhs
