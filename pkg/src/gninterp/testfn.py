"""Smooth, compactly supported test functions with exact derivative jets.

Every function here is built from a profile on the closed unit ball and an
affine frame: ``u(x) = amp * P((x - center) / radius)``. Derivatives come from
truncated Taylor arithmetic (:mod:`gninterp.taylor`), not finite differences,
so jets are accurate to rounding even next to the support boundary where the
profiles are flat to infinite order.

Families
--------
``bump(R)``
    The classical mollifier ``exp(-1/(1 - |y|^2))`` on ``|y| < 1``.
``bump_poly(R, deg, axis)``
    Bump times the monomial ``y_axis^deg``; odd degrees give sign changes.
``bump_wave(R, omega)``
    Bump times ``cos(omega * y_1)``; omega is radians per support radius, so
    dilation does not change the number of oscillations.
``plateau(R, rho)``
    Equal to 1 on ``|y| <= rho`` (exactly, with zero jets), 0 outside the unit
    ball, glued by the standard exp-quotient partition in between.

Functions can be described by and parsed from compact strings such as
``"bump(R=1)*dilate(2)*translate(0.3)*amp(0.5)"``; see :func:`parse_testfn`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Sequence

import numpy as np

from .errors import BadParams, DslSyntaxError, JetOrderOverflow, UnknownFamily, UnsupportedDimension
from .taylor import (
    Key,
    TaylorSeries,
    exp,
    factorial_of,
    int_pow,
    multi_indices,
    reciprocal,
    sin_cos,
)

MAX_JET_ORDER = 6
MAX_DIM = 3

# Below this distance-squared to the support sphere the profile is smaller
# than any double, so the jet is set to zero outright. Keeping the threshold
# this coarse also caps intermediate coefficient growth (~(1/cutoff)^12)
# safely below overflow.
BOUNDARY_CUTOFF = 1e-12

Profile = Callable[[Sequence[TaylorSeries]], TaylorSeries]


def _radius2(seeds: Sequence[TaylorSeries]) -> TaylorSeries:
    acc = seeds[0] * seeds[0]
    for s in seeds[1:]:
        acc = acc + s * s
    return acc


def _bump(seeds: Sequence[TaylorSeries]) -> TaylorSeries:
    g = 1.0 - _radius2(seeds)
    g0 = np.asarray(g.const, dtype=float)
    inside = g0 > BOUNDARY_CUTOFF
    safe = np.where(inside, g0, 1.0)
    w = reciprocal(g, safe_const=safe)
    e0 = np.where(inside, np.exp(-1.0 / safe), 0.0)
    s = exp(-w, const_exp=e0)
    zero = TaylorSeries(s.nvars, s.order, {})
    return s.where(inside, zero)


def _plateau(seeds: Sequence[TaylorSeries], rho: float) -> TaylorSeries:
    # t runs affinely from 0 at the support sphere to 1 at the plateau edge.
    t = (1.0 - _radius2(seeds)).scale(1.0 / (1.0 - rho * rho))
    t0 = np.asarray(t.const, dtype=float)
    nvars, order = t.nvars, t.order

    trans = (t0 > BOUNDARY_CUTOFF) & (t0 < 1.0 - BOUNDARY_CUTOFF)
    plateau = t0 >= 1.0 - BOUNDARY_CUTOFF

    safe_t = np.where(trans, t0, 0.5)
    s = (1.0 - t).where(trans, TaylorSeries.constant(0.5, nvars, order))
    safe_s = np.asarray(s.const, dtype=float)

    # psi = phi(t) / (phi(t) + phi(1-t)) with phi = exp(-1/.): the sum's
    # constant term stays >= e^-2 on the transition band, so the quotient is
    # well conditioned even where one phi underflows to zero.
    phi_t = exp(-reciprocal(t, safe_const=safe_t), const_exp=np.where(trans, np.exp(-1.0 / safe_t), 0.0))
    phi_s = exp(-reciprocal(s, safe_const=safe_s), const_exp=np.where(trans, np.exp(-1.0 / safe_s), 0.0))
    denom = phi_t + phi_s
    psi = phi_t * reciprocal(denom, safe_const=np.where(trans, np.asarray(denom.const, dtype=float), 1.0))

    one = TaylorSeries.constant(np.where(plateau, 1.0, 0.0), nvars, order)
    zero = TaylorSeries(nvars, order, {})
    return psi.where(trans, one.where(plateau, zero))


@dataclass(frozen=True)
class TestFunction:
    """A smooth function of compact support with an affine frame.

    ``u(x) = amp * P((x - center) / radius)`` where the profile P lives on the
    unit ball. Instances are immutable; transforms return new objects.
    """

    ndim: int
    family: str
    profile: Profile = field(repr=False, compare=False)
    radius: float
    center: tuple[float, ...]
    amp: float = 1.0
    ops: tuple[str, ...] = ()

    def __post_init__(self):
        if not (1 <= self.ndim <= MAX_DIM):
            raise UnsupportedDimension(f"ndim={self.ndim} not supported (1..{MAX_DIM})")
        if not (self.radius > 0):
            raise BadParams(f"support radius must be positive, got {self.radius}")
        if len(self.center) != self.ndim:
            raise BadParams("center length does not match ndim")

    # -- geometry -------------------------------------------------------------

    def support(self) -> tuple[np.ndarray, float]:
        """Center and radius of the closed support ball."""
        return np.asarray(self.center, dtype=float), self.radius

    def bounding_box(self, margin: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        c, r = self.support()
        return c - margin * r, c + margin * r

    # -- transforms -----------------------------------------------------------

    def dilate(self, lam: float) -> "TestFunction":
        """x -> u(lam * x). Shrinks the support ball by lam."""
        if not (lam > 0):
            raise BadParams(f"dilation factor must be positive, got {lam}")
        return replace(
            self,
            radius=self.radius / lam,
            center=tuple(c / lam for c in self.center),
            ops=self.ops + (f"dilate({lam!r})",),
        )

    def translate(self, shift: Sequence[float] | float) -> "TestFunction":
        """x -> u(x - shift). A scalar shift moves along the first axis."""
        vec = np.zeros(self.ndim)
        arr = np.atleast_1d(np.asarray(shift, dtype=float))
        if arr.size == 1:
            vec[0] = arr[0]
        elif arr.size == self.ndim:
            vec = arr
        else:
            raise BadParams(f"shift has {arr.size} entries for ndim={self.ndim}")
        return replace(
            self,
            center=tuple(np.asarray(self.center) + vec),
            ops=self.ops + ("translate(" + ",".join(f"{float(v)!r}" for v in vec) + ")",),
        )

    def scaled(self, factor: float) -> "TestFunction":
        """Multiply amplitudes by a constant."""
        return replace(self, amp=self.amp * factor, ops=self.ops + (f"amp({factor!r})",))

    # -- evaluation -----------------------------------------------------------

    def jet(self, points: np.ndarray, order: int) -> Dict[Key, np.ndarray]:
        """All derivatives up to total order at the given points.

        Returns ``{alpha: D^alpha u(points)}`` for every multi-index with
        ``|alpha| <= order``, each value an array over the points.
        """
        if not (0 <= order <= MAX_JET_ORDER):
            raise JetOrderOverflow(f"jet order {order} outside 0..{MAX_JET_ORDER}")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.ndim:
            raise BadParams(f"points have dimension {pts.shape[1]}, function has {self.ndim}")
        y = (pts - np.asarray(self.center)) / self.radius
        seeds = [TaylorSeries.variable(ax, y[:, ax], self.ndim, order) for ax in range(self.ndim)]
        series = self.profile(seeds)
        npts = pts.shape[0]
        out: Dict[Key, np.ndarray] = {}
        for alpha in multi_indices(self.ndim, order):
            c = series.coeffs.get(alpha)
            scale = self.amp * self.radius ** (-sum(alpha)) * factorial_of(alpha)
            if c is None:
                out[alpha] = np.zeros(npts)
            else:
                out[alpha] = np.broadcast_to(np.asarray(c, dtype=float), (npts,)) * scale
        return out

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.jet(points, 0)[(0,) * self.ndim]

    def describe(self) -> str:
        """Round-trippable constructor string (see :func:`parse_testfn`)."""
        return "*".join((self.family,) + self.ops)


# -- family factories ---------------------------------------------------------


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0:
        raise BadParams(f"{name} must be positive, got {value}")
    return value


def bump(ndim: int, R: float = 1.0) -> TestFunction:
    R = _require_positive("R", R)
    return TestFunction(ndim, f"bump(R={R!r})", _bump, R, (0.0,) * ndim)


def bump_poly(ndim: int, R: float = 1.0, deg: int = 1, axis: int = 0) -> TestFunction:
    R = _require_positive("R", R)
    if int(deg) != deg or deg < 0:
        raise BadParams(f"deg must be a nonnegative integer, got {deg}")
    deg = int(deg)
    if not (0 <= axis < ndim):
        raise BadParams(f"axis {axis} out of range for ndim={ndim}")
    axis = int(axis)

    def profile(seeds: Sequence[TaylorSeries]) -> TaylorSeries:
        return int_pow(seeds[axis], deg) * _bump(seeds)

    return TestFunction(ndim, f"bump_poly(R={R!r},deg={deg},axis={axis})", profile, R, (0.0,) * ndim)


def bump_wave(ndim: int, R: float = 1.0, omega: float = 3.0) -> TestFunction:
    R = _require_positive("R", R)
    omega = float(omega)

    def profile(seeds: Sequence[TaylorSeries]) -> TaylorSeries:
        _, cos_part = sin_cos(seeds[0].scale(omega))
        return cos_part * _bump(seeds)

    return TestFunction(ndim, f"bump_wave(R={R!r},omega={omega!r})", profile, R, (0.0,) * ndim)


def plateau(ndim: int, R: float = 1.0, rho: float = 0.5) -> TestFunction:
    R = _require_positive("R", R)
    rho = float(rho)
    if not (0.0 < rho < 1.0):
        raise BadParams(f"rho must lie strictly between 0 and 1, got {rho}")

    def profile(seeds: Sequence[TaylorSeries]) -> TaylorSeries:
        return _plateau(seeds, rho)

    return TestFunction(ndim, f"plateau(R={R!r},rho={rho!r})", profile, R, (0.0,) * ndim)


FAMILIES: Dict[str, Callable[..., TestFunction]] = {
    "bump": bump,
    "bump_poly": bump_poly,
    "bump_wave": bump_wave,
    "plateau": plateau,
}

_CALL_RE = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$")
_INT_PARAMS = {"deg", "axis"}


def _parse_call(piece: str) -> tuple[str, str]:
    m = _CALL_RE.match(piece)
    if m is None:
        raise DslSyntaxError(f"expected name(args), got {piece!r}")
    return m.group(1), m.group(2).strip()


def parse_testfn(text: str, ndim: int) -> TestFunction:
    """Build a test function from a descriptor string.

    The grammar is a family call followed by zero or more transforms, joined
    by ``*``: ``bump(R=1)*dilate(2)*translate(0.3,-0.1)*amp(0.5)``. Family
    arguments are ``key=value``; transform arguments are positional numbers.
    """
    pieces = text.split("*")
    if not pieces or not pieces[0].strip():
        raise DslSyntaxError("empty descriptor")

    name, argstr = _parse_call(pieces[0])
    factory = FAMILIES.get(name)
    if factory is None:
        raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    kwargs: Dict[str, float] = {}
    if argstr:
        for part in argstr.split(","):
            if "=" not in part:
                raise DslSyntaxError(f"family arguments must be key=value, got {part!r}")
            key, _, val = part.partition("=")
            key = key.strip()
            try:
                kwargs[key] = int(val) if key in _INT_PARAMS else float(val)
            except ValueError as exc:
                raise DslSyntaxError(f"bad value for {key}: {val.strip()!r}") from exc
    try:
        fn = factory(ndim, **kwargs)
    except TypeError as exc:
        raise BadParams(f"bad arguments for {name}: {exc}") from exc

    for piece in pieces[1:]:
        op, argstr = _parse_call(piece)
        try:
            args = [float(v) for v in argstr.split(",")] if argstr else []
        except ValueError as exc:
            raise DslSyntaxError(f"bad transform arguments: {argstr!r}") from exc
        if op == "dilate":
            if len(args) != 1:
                raise DslSyntaxError("dilate takes one factor")
            fn = fn.dilate(args[0])
        elif op == "translate":
            if not args:
                raise DslSyntaxError("translate needs at least one coordinate")
            fn = fn.translate(args if len(args) > 1 else args[0])
        elif op == "amp":
            if len(args) != 1:
                raise DslSyntaxError("amp takes one factor")
            fn = fn.scaled(args[0])
        else:
            raise DslSyntaxError(f"unknown transform {op!r}")
    return fn
