"""Multiplicative interpolation between three scale-indexed norms.

A triple of scales ``left < mid < right`` (each a rational s = 1/p, with
negative values meaning Holder-type spaces) is *interpolable* when the middle
norm is bounded by the product of the outer norms raised to the affine
weights: ``mid = eta*left + (1-eta)*right``. This module classifies a triple
by how such a bound is proved and, where the proof is quantitative, exposes
the constant.

Case taxonomy (precedence order):

* ``lebesgue``: all scales >= 0; log-convexity of Lebesgue norms, constant 1.
* ``holder_same``: all scales negative within one signature level; constant 1
  for the seminorm parts.
* ``holder_step``: the middle scale sits exactly on the signature boundary
  separating the outer levels; explicit constant ``(1+1/p2_left)^(1-eta)``.
* ``ck_step``: all scales are negative integer multiples of 1/n; classical
  derivative interpolation, with the factor-2 bound for one-step triples.
* ``*_bridged``: the right scale is a boundary; after trading whole
  derivatives the triple becomes same/step-shaped against a sup norm, which
  costs the quantitative constant (bound None).
* ``mixed``: the middle scale is exactly 0 with the left scale in [-1/n, 0);
  a ball-averaging argument gives an analytic constant, exposed separately.
* ``composite``: everything else; the span is cut at every signature boundary
  (and at 0 when crossing) and the pieces are chained by reiteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import IntegralDiverges, NotInterpolable
from .indices import Rational, SpaceIndex, as_rational, holder_signature
from .norms import GridSpec, NormValue, sup_norm, xnorm
from .testfn import TestFunction


class InterpCase(str, Enum):
    LEBESGUE = "lebesgue"
    HOLDER_SAME = "holder_same"
    HOLDER_STEP = "holder_step"
    CK_STEP = "ck_step"
    HOLDER_SAME_BRIDGED = "holder_same_bridged"
    HOLDER_STEP_BRIDGED = "holder_step_bridged"
    MIXED = "mixed"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class InterpolationTriple:
    """Scales left < mid < right with the induced affine weight.

    The weight of the left norm is ``eta = (right - mid) / (right - left)``,
    so that ``mid = eta*left + (1-eta)*right`` exactly.
    """

    n: int
    left: Fraction
    mid: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", as_rational(self.left))
        object.__setattr__(self, "mid", as_rational(self.mid))
        object.__setattr__(self, "right", as_rational(self.right))
        for s in (self.left, self.mid, self.right):
            SpaceIndex(s, self.n)  # validates n >= 1 and s <= 1
        if not (self.left < self.mid < self.right):
            raise NotInterpolable(
                f"scales must be strictly ordered, got {self.left} < {self.mid} < {self.right}"
            )

    @property
    def eta(self) -> Fraction:
        return (self.right - self.mid) / (self.right - self.left)


@dataclass(frozen=True)
class Classification:
    case: InterpCase
    eta: Fraction
    bound: Optional[float]
    shift: int = 0
    detail: str = ""
    nodes: tuple[Fraction, ...] = ()


def _p1(s: Fraction, n: int) -> int:
    return holder_signature(SpaceIndex(s, n)).p1


def _p2(s: Fraction, n: int) -> Fraction:
    return holder_signature(SpaceIndex(s, n)).p2


def _is_boundary(s: Fraction, n: int) -> bool:
    """True when n*s is a negative integer (the scale sits on a signature edge)."""
    return s < 0 and (n * s).denominator == 1


def holder_step_constant(p2_left: Fraction | float, eta: Fraction | float) -> float:
    """Constant for a boundary-step triple: (1 + 1/p2_left)^(1-eta)."""
    return float((1.0 + 1.0 / float(p2_left)) ** (1.0 - float(eta)))


# Pure in the (frozen) triple and hit repeatedly with the same scales when
# chains are enumerated, so the recursion into composites is worth caching.
@lru_cache(maxsize=None)
def classify_triple(t: InterpolationTriple) -> Classification:
    """Decide how the middle norm interpolates and with what constant.

    Bounds returned here apply to seminorm-mode norms for the Holder cases
    and to full norms in the Lebesgue case; cases without a quantitative
    constant return ``bound=None``.
    """
    n, eta = t.n, t.eta

    if t.left >= 0:
        return Classification(InterpCase.LEBESGUE, eta, 1.0, detail="log-convex in 1/p")

    if t.right <= 0:
        integral = all(_is_boundary(s, n) or s == 0 for s in (t.left, t.mid, t.right))
        if integral:
            ks = tuple(int(-n * s) for s in (t.left, t.mid, t.right))
            one_step = ks[0] - ks[1] == 1 and ks[1] - ks[2] == 1
            # One-step bound via second differences along a coordinate line:
            # |D^j| <= 2 sqrt(|D^(j-1)| * |D^(j+1)|) pointwise in the sups.
            return Classification(
                InterpCase.CK_STEP,
                eta,
                2.0 if one_step else None,
                detail=f"derivative orders {ks[0]} > {ks[1]} > {ks[2]}",
            )
        if t.right < 0 and not _is_boundary(t.right, n):
            p1s = (_p1(t.left, n), _p1(t.mid, n), _p1(t.right, n))
            if p1s[0] == p1s[1] == p1s[2]:
                return Classification(
                    InterpCase.HOLDER_SAME, eta, 1.0, detail=f"signature level {p1s[0]}"
                )
            if p1s[1] == p1s[2] and p1s[0] == p1s[1] + 1 and _p2(t.mid, n) == 1:
                return Classification(
                    InterpCase.HOLDER_STEP,
                    eta,
                    holder_step_constant(_p2(t.left, n), eta),
                    detail=f"boundary at {t.mid}",
                )
            return _classify_composite(t)
        # right sits on a boundary (or at 0): trade whole derivatives so the
        # right norm becomes a sup, then reuse the same/step shapes.
        shift = int(-n * t.right)
        sl = t.left + Fraction(shift, n)
        sm = t.mid + Fraction(shift, n)
        if _p1(sl, n) == _p1(sm, n) == 0:
            return Classification(
                InterpCase.HOLDER_SAME_BRIDGED, eta, None, shift=shift,
                detail=f"derivative shift {shift}, sup right endpoint",
            )
        if _p1(sl, n) == 1 and _p1(sm, n) == 0 and _p2(sm, n) == 1:
            return Classification(
                InterpCase.HOLDER_STEP_BRIDGED, eta, None, shift=shift,
                detail=f"derivative shift {shift}, boundary at {sm}",
            )
        return _classify_composite(t)

    # crossing: left < 0 < right
    if t.mid == 0 and t.left >= Fraction(-1, n):
        return Classification(
            InterpCase.MIXED, eta, None,
            detail="sup norm between a Holder seminorm and a Lebesgue norm",
        )
    return _classify_composite(t)


def composite_nodes(t: InterpolationTriple) -> tuple[Fraction, ...]:
    """Cut points for a composite triple: endpoints, mid, every signature
    boundary strictly inside the span, and 0 when the span crosses it."""
    nodes = {t.left, t.mid, t.right}
    j = 1
    while Fraction(-j, t.n) > t.left:
        b = Fraction(-j, t.n)
        if b < t.right:
            nodes.add(b)
        j += 1
    if t.left < 0 < t.right:
        nodes.add(Fraction(0))
    return tuple(sorted(nodes))


def _classify_composite(t: InterpolationTriple) -> Classification:
    nodes = composite_nodes(t)
    pieces = []
    for i in range(1, len(nodes) - 1):
        sub = InterpolationTriple(t.n, nodes[i - 1], nodes[i], nodes[i + 1])
        c = classify_triple(sub)
        if c.case is InterpCase.COMPOSITE:
            raise AssertionError(f"composite piece failed to reduce: {sub}")
        pieces.append(c.case.value)
    # Sanity: eliminating the interior nodes must land on the original weight.
    final = _eliminate_to_triple(nodes, t.mid)
    if final != t.eta:
        raise AssertionError(f"reiteration weight mismatch: {final} != {t.eta}")
    return Classification(
        InterpCase.COMPOSITE, t.eta, None, detail="+".join(pieces), nodes=nodes
    )


# -- reiteration --------------------------------------------------------------


def reiteration_theta(eta1: Rational, eta2: Rational) -> Fraction:
    """Weight of the far-left norm after chaining two interpolation facts.

    Fact 1 places x between (a, y) with weight eta1; fact 2 places y between
    (x, b) with weight eta2. Then x sits between (a, b) with this weight.
    """
    e1, e2 = as_rational(eta1), as_rational(eta2)
    return e1 / (1 - e2 + e1 * e2)


def reiteration_second(eta1: Rational, eta2: Rational) -> Fraction:
    """Weight placing y (from the same two facts) between (a, b)."""
    e1, e2 = as_rational(eta1), as_rational(eta2)
    return e1 * e2 / (1 - e2 + e1 * e2)


def reiteration_constants(c1: float, c2: float, eta1: Rational, eta2: Rational) -> tuple[float, float]:
    """Constants accompanying the two reiterated facts.

    Returns (constant for x between (a,b), constant for y between (a,b)).
    """
    e1, e2 = float(as_rational(eta1)), float(as_rational(eta2))
    d = 1.0 - e2 + e1 * e2
    return (c1 * c2 ** (1.0 - e1)) ** (1.0 / d), (c2 * c1**e2) ** (1.0 / d)


def _eliminate_to_triple(nodes: Sequence[Fraction], mid: Fraction) -> Fraction:
    """Chain the adjacent-triple facts down to (left, mid, right); return the
    final weight of the left endpoint. Elimination is exact in rationals."""
    nodes = list(nodes)
    etas = {
        nodes[i]: (nodes[i + 1] - nodes[i]) / (nodes[i + 1] - nodes[i - 1])
        for i in range(1, len(nodes) - 1)
    }
    # Left of mid: repeatedly merge the leftmost interior node into its right
    # neighbour's fact.
    while True:
        interior = [s for s in nodes[1:-1] if s != mid]
        left_side = [s for s in interior if s < mid]
        if not left_side:
            break
        y = left_side[0]
        i = nodes.index(y)
        e1, e2 = etas.pop(y), etas[nodes[i + 1]]
        etas[nodes[i + 1]] = reiteration_second(e1, e2)
        nodes.pop(i)
    # Right of mid: mirror image (weights flip to 1-eta).
    while True:
        interior = [s for s in nodes[1:-1] if s != mid]
        if not interior:
            break
        y = interior[-1]
        i = nodes.index(y)
        e1, e2 = 1 - etas.pop(y), 1 - etas[nodes[i - 1]]
        etas[nodes[i - 1]] = 1 - reiteration_second(e1, e2)
        nodes.pop(i)
    return etas[mid]


# -- the crossing case constant ----------------------------------------------


def mixed_case_integral(n: int, lam2: float, p: float) -> float:
    """(1/lam2) * integral_0^1 (1-s)^p s^(n/lam2 - 1) ds.

    The kernel arising from averaging over the ball on which a function stays
    within its Holder modulus of the sup. Diverges for p <= -1 or lam2 <= 0.
    """
    lam2, p = float(lam2), float(p)
    if p <= -1.0 or lam2 <= 0.0 or n < 1:
        raise IntegralDiverges(f"integral parameters out of range: n={n}, lam2={lam2}, p={p}")
    a = n / lam2
    val, _ = quad(lambda s: (1.0 - s) ** p * s ** (a - 1.0), 0.0, 1.0)
    return val / lam2


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def mixed_case_constant(n: int, left: Rational, right: Rational) -> float:
    """Analytic constant for the mixed case: sup norm between a Holder
    seminorm (scale ``left`` in [-1/n, 0)) and a Lebesgue norm (scale
    ``right`` in (0, 1]).

    Equals ``(n * omega_n * M)^(-right*(1-eta))`` with M the kernel integral
    and eta the affine weight of the left norm.
    """
    left, right = as_rational(left), as_rational(right)
    if not (Fraction(-1, n) <= left < 0 < right <= 1):
        raise IntegralDiverges(f"scales out of the mixed-case range: {left}, {right}")
    lam2 = float(-n * left)
    p = 1.0 / float(right)
    eta = right / (right - left)  # weight solving 0 = eta*left + (1-eta)*right
    m = mixed_case_integral(n, lam2, p)
    expo = -float(right * (1 - eta))
    return (n * unit_ball_volume(n) * m) ** expo


# -- elementary split bound ---------------------------------------------------


def split_sum_inequality(a: Sequence[float], b: Sequence[float], eta: float) -> tuple[float, float]:
    """Termwise vs summed geometric mixing of two nonnegative sequences.

    Returns ``(sum_i a_i^eta * b_i^(1-eta), (sum a)^eta * (sum b)^(1-eta))``;
    the first never exceeds the second. This is what lets per-component
    seminorm sups be summed without losing the interpolation exponent.
    """
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    if av.shape != bv.shape:
        raise ValueError("sequences must have equal length")
    if np.any(av < 0) or np.any(bv < 0):
        raise ValueError("sequences must be nonnegative")
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    lhs = float(np.sum(av**eta * bv ** (1.0 - eta)))
    rhs = float(np.sum(av)) ** eta * float(np.sum(bv)) ** (1.0 - eta)
    return lhs, rhs


# -- numerical checking -------------------------------------------------------


@dataclass(frozen=True)
class InterpolationReport:
    triple: InterpolationTriple
    classification: Classification
    mid_norm: NormValue
    left_norm: NormValue
    right_norm: NormValue
    ratio: float
    bound: Optional[float]
    ok: Optional[bool]
    rel_error: float


def check_interpolation(
    t: InterpolationTriple,
    fn: TestFunction,
    mode: str = "seminorm",
    lp_grid: GridSpec | None = None,
    pair_grid: GridSpec | None = None,
    slack: float = 1e-9,
) -> InterpolationReport:
    """Measure the interpolation ratio for one function and compare it to the
    classified bound (when one exists).

    ``ratio = mid / (left^eta * right^(1-eta))`` with all three norms taken
    in the requested mode. ``ok`` is None for cases without a quantitative
    bound, else whether the ratio stays under the bound after inflating it by
    the propagated grid-error estimates plus ``slack``.
    """
    cls = classify_triple(t)
    if cls.case is InterpCase.CK_STEP:
        # Integer scales mean whole-derivative sup norms; the factor-2 bound
        # is a statement about those, not about the pair-scan seminorms.
        orders = tuple(int(-t.n * s) for s in (t.left, t.mid, t.right))
        return ck_interpolation_check(fn, orders, grid=lp_grid)
    kw = dict(lp_grid=lp_grid, pair_grid=pair_grid)
    mid_nv = xnorm(fn, t.mid, mode=mode, **kw)
    left_nv = xnorm(fn, t.left, mode=mode, **kw)
    right_nv = xnorm(fn, t.right, mode=mode, **kw)
    eta = float(t.eta)
    denom = left_nv.value**eta * right_nv.value ** (1.0 - eta)
    ratio = mid_nv.value / denom if denom > 0 else math.inf
    rel = 0.0
    for nv, w in ((mid_nv, 1.0), (left_nv, eta), (right_nv, 1.0 - eta)):
        if nv.value > 0:
            rel += float(w * nv.error_estimate / nv.value)
    ok = None
    if cls.bound is not None:
        ok = bool(ratio <= cls.bound * (1.0 + rel + slack))
    return InterpolationReport(t, cls, mid_nv, left_nv, right_nv, ratio, cls.bound, ok, rel)


def ck_interpolation_check(
    fn: TestFunction,
    orders: tuple[int, int, int],
    grid: GridSpec | None = None,
) -> InterpolationReport:
    """Interpolation of sup norms of whole derivatives.

    ``orders`` is (high, middle, low) with high > middle > low >= 0. The
    one-step case (j+1, j, j-1) carries the factor-2 line-restriction bound;
    wider gaps are measured without a reference constant.
    """
    k1, k2, k3 = orders
    if not (k1 > k2 > k3 >= 0):
        raise NotInterpolable(f"orders must decrease strictly, got {orders}")
    t = InterpolationTriple(
        fn.ndim, Fraction(-k1, fn.ndim), Fraction(-k2, fn.ndim), Fraction(-k3, fn.ndim)
    )
    cls = classify_triple(t)
    n1 = sup_norm(fn, order=k1, grid=grid)
    n2 = sup_norm(fn, order=k2, grid=grid)
    n3 = sup_norm(fn, order=k3, grid=grid)
    eta = float(t.eta)
    denom = n1.value**eta * n3.value ** (1.0 - eta)
    ratio = n2.value / denom if denom > 0 else math.inf
    rel = float(
        sum(
            w * nv.error_estimate / nv.value
            for nv, w in ((n2, 1.0), (n1, eta), (n3, 1.0 - eta))
            if nv.value > 0
        )
    )
    ok = None if cls.bound is None else bool(ratio <= cls.bound * (1.0 + rel + 1e-9))
    return InterpolationReport(t, cls, n2, n1, n3, ratio, cls.bound, ok, rel)
