"""Exact arithmetic on the reciprocal integrability scale s = 1/p.

A single rational parameter s describes the whole scale of spaces used here:
``s in (0, 1]`` is the Lebesgue range (p = 1/s >= 1), ``s = 0`` is the sup
norm, and ``s < 0`` is the Holder range, where the space C^{p1,p2} is read off
from the signature

    p1 = -floor(n*s + 1),    p2 = -n*s - p1,    p2 in (0, 1].

All index manipulation is done in ``fractions.Fraction``; floats never enter
parameter logic, so round-trips and balance checks are exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    BorderlineIndex,
    DegenerateCondition,
    IndeterminateTheta,
    NonHolderIndex,
    ScaleOverflow,
    ThetaOutOfRange,
)

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Convert exact input to a Fraction.

    Accepts ints, Fractions and strings of the form ``"num"`` or ``"num/den"``.
    Decimal strings and floats are rejected: indices must stay exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"not an exact rational: {value!r} (use num or num/den)")
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


@dataclass(frozen=True)
class SpaceIndex:
    """One point s = 1/p on the scale, in ambient dimension n."""

    s: Fraction
    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.s, Fraction):
            object.__setattr__(self, "s", as_rational(self.s))
        if self.n < 1:
            raise ValueError(f"dimension must be positive, got n={self.n}")
        if self.s > 1:
            raise ScaleOverflow(f"s={self.s} lies above the scale (p in (0,1) is excluded)")

    @property
    def regime(self) -> str:
        if self.s > 0:
            return "lebesgue"
        if self.s == 0:
            return "sup"
        return "holder"

    @property
    def p(self) -> Optional[Fraction]:
        """The exponent p = 1/s, or None for s = 0 (p = infinity)."""
        if self.s == 0:
            return None
        return 1 / self.s


@dataclass(frozen=True)
class HolderSignature:
    """Integer and fractional smoothness (p1, p2) of a Holder-range index."""

    p1: int
    p2: Fraction

    def __post_init__(self) -> None:
        if self.p1 < 0:
            raise ValueError(f"integer part must be >= 0, got {self.p1}")
        if not (0 < self.p2 <= 1):
            raise ValueError(f"fractional part must lie in (0,1], got {self.p2}")


def holder_signature(idx: SpaceIndex) -> HolderSignature:
    """Signature (p1, p2) of a Holder-range index, with p2 in (0, 1].

    Boundary values s = -j/n carry p2 = 1 (the Lipschitz end of C^{j-1,p2}),
    not p2 = 0; that choice keeps p2 positive and makes the map s -> (p1, p2)
    a bijection onto its range.
    """
    if idx.s >= 0:
        raise NonHolderIndex(f"s={idx.s} is not in the Holder range (need s < 0)")
    ns = idx.n * idx.s
    p1 = -math.floor(ns + 1)
    p2 = -ns - p1
    return HolderSignature(p1=p1, p2=p2)


def signature_index(sig: HolderSignature, n: int) -> SpaceIndex:
    """Inverse of :func:`holder_signature`: s = -(p1 + p2)/n."""
    return SpaceIndex(s=-Fraction(sig.p1 + sig.p2, 1) / n, n=n)


def sobolev_sharp(idx: SpaceIndex) -> SpaceIndex:
    """Index after one derivative is given up: s* = s - 1/n.

    Raises BorderlineIndex at s = 1/n (p = n), where no target space exists.
    """
    step = Fraction(1, idx.n)
    if idx.s == step:
        raise BorderlineIndex(f"s={idx.s} equals 1/n: p = n has no sharp conjugate")
    return SpaceIndex(s=idx.s - step, n=idx.n)


def sobolev_flat(idx: SpaceIndex) -> SpaceIndex:
    """Index after one derivative is gained: s_* = s + 1/n.

    Raises ScaleOverflow when the result would leave the scale (s_* > 1).
    """
    out = idx.s + Fraction(1, idx.n)
    if out > 1:
        raise ScaleOverflow(f"s={idx.s} + 1/{idx.n} = {out} exceeds 1")
    return SpaceIndex(s=out, n=idx.n)


def solve_theta(
    n: int, k: int, l: int, sp: Fraction, sq: Fraction, sr: Fraction
) -> Fraction:
    """Weight theta from the balance sq - l/n = theta*(sp - k/n) + (1-theta)*sr."""
    num = sq - Fraction(l, n) - sr
    den = sp - Fraction(k, n) - sr
    if den == 0:
        if num == 0:
            raise IndeterminateTheta(
                "balance holds for every theta (sp - k/n = sr and sq - l/n = sr)"
            )
        raise DegenerateCondition(
            f"no theta satisfies the balance: sp - k/n = sr = {sr} but sq - l/n != sr"
        )
    return num / den


def solve_q(
    n: int, k: int, l: int, sp: Fraction, sr: Fraction, theta: Fraction
) -> Fraction:
    """Target index sq from the balance, for theta in [l/k, 1]."""
    if not (Fraction(l, k) <= theta <= 1):
        raise ThetaOutOfRange(f"theta={theta} outside [{Fraction(l, k)}, 1]")
    return Fraction(l, n) + theta * (sp - Fraction(k, n)) + (1 - theta) * sr


@dataclass(frozen=True)
class InequalityInstance:
    """One fully specified instance: derivative orders, indices and weight.

    ``sp`` indexes the norm of the k-th derivatives, ``sr`` the norm of the
    function itself, ``sq`` the norm of the l-th derivatives, and ``theta``
    weights the two right-hand factors.
    """

    n: int
    k: int
    l: int
    sp: Fraction
    sq: Fraction
    sr: Fraction
    theta: Fraction


@dataclass(frozen=True)
class Violation:
    kind: str  # 'range' | 'balance' | 'exclusion' | 'theta'
    message: str


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    violations: tuple[Violation, ...]


def _range_violations(inst: InequalityInstance) -> list[Violation]:
    out = []
    if inst.n < 1:
        out.append(Violation("range", f"dimension n={inst.n} must be >= 1"))
    if not (1 <= inst.l < inst.k):
        out.append(Violation("range", f"orders must satisfy 1 <= l < k, got l={inst.l}, k={inst.k}"))
    for name, s in (("sp", inst.sp), ("sq", inst.sq), ("sr", inst.sr)):
        if s > 1:
            out.append(Violation("range", f"{name}={s} above the scale (p in (0,1) excluded)"))
        elif s == 0:
            out.append(Violation("range", f"{name}=0 (p = infinity) is outside the admissible exponents"))
    return out


def validate_instance(inst: InequalityInstance) -> ValidityReport:
    """Check range, balance, the p-exclusion set, and the theta window.

    The exclusion rejects n*sp in {1, ..., k-l}: exactly the values for which
    some index in the descent from order k to order l lands on the borderline
    p = n and the sharp embedding chain breaks.
    """
    violations = _range_violations(inst)

    lhs = inst.sq - Fraction(inst.l, inst.n)
    rhs = inst.theta * (inst.sp - Fraction(inst.k, inst.n)) + (1 - inst.theta) * inst.sr
    if lhs != rhs:
        violations.append(
            Violation("balance", f"sq - l/n = {lhs} but theta*(sp - k/n) + (1-theta)*sr = {rhs}")
        )

    nsp = inst.n * inst.sp
    if nsp.denominator == 1 and 1 <= nsp.numerator <= inst.k - inst.l:
        violations.append(
            Violation("exclusion", f"n*sp = {nsp} lies in the excluded set {{1,...,{inst.k - inst.l}}}")
        )

    lo = Fraction(inst.l, inst.k)
    if not (lo <= inst.theta <= 1):
        violations.append(Violation("theta", f"theta={inst.theta} outside [{lo}, 1]"))

    return ValidityReport(ok=not violations, violations=tuple(violations))


def format_index(s: Fraction, n: int) -> str:
    """Readable form of an index, e.g. ``s=-1/2 (p=-2, C^{1,1/2})`` for n=3."""
    if s > 0:
        p = 1 / s
        space = f"L^{p}"
        return f"s={s} (p={p}, {space})"
    if s == 0:
        return "s=0 (p=inf, L^inf)"
    sig = holder_signature(SpaceIndex(s=s, n=n))
    p = 1 / s
    return f"s={s} (p={p}, C^{{{sig.p1},{sig.p2}}})"


def solve_missing(
    n: int,
    k: int,
    l: int,
    sp: Optional[Fraction] = None,
    sq: Optional[Fraction] = None,
    sr: Optional[Fraction] = None,
    theta: Optional[Fraction] = None,
) -> tuple[dict, list[str]]:
    """Fill in unknowns of the balance relation from the known values.

    Returns ``(values, unconstrained)`` where ``values`` maps each of
    ``sp, sq, sr, theta`` to its (given or solved) Fraction, and
    ``unconstrained`` lists names whose value does not influence the balance
    (e.g. ``sr`` when theta = 1). Raises DegenerateCondition when the system
    cannot determine the unknowns.
    """
    known = {"sp": sp, "sq": sq, "sr": sr, "theta": theta}
    missing = [name for name, v in known.items() if v is None]
    if not missing:
        return dict(known), []

    if theta is None:
        if sp is None or sq is None or sr is None:
            raise DegenerateCondition(
                "cannot solve: theta unknown together with " + ", ".join(m for m in missing if m != "theta")
            )
        known["theta"] = solve_theta(n, k, l, sp, sq, sr)
        return known, []

    # theta known: the balance is linear in sp, sq, sr with coefficients
    # (theta, -1, 1-theta); zero coefficients leave their index unconstrained.
    coeff = {"sp": theta, "sq": Fraction(-1), "sr": 1 - theta}
    unconstrained = [name for name in missing if coeff[name] == 0]
    to_solve = [name for name in missing if coeff[name] != 0]
    if len(to_solve) > 1:
        raise DegenerateCondition("underdetermined: " + " and ".join(to_solve) + " both unknown")
    if to_solve:
        name = to_solve[0]
        const = Fraction(l, n) - theta * Fraction(k, n)
        acc = const  # balance rewritten as sum(coeff_i * s_i) + const = 0
        for other, c in coeff.items():
            if other != name and known[other] is not None:
                acc += c * known[other]
        known[name] = -acc / coeff[name]
    return known, unconstrained
