"""Command-line front end.

Subcommands wrap the library modules one-to-one: ``params`` solves and
validates index tuples, ``norm`` evaluates a single norm, ``check`` measures
one interpolation triple, ``sweep`` runs the dilation invariance check,
``derive`` builds and serializes proof chains, ``oracle`` compares the fast
norm paths against their brute-force references.

Exit codes: 0 success, 1 mathematical violation, 2 parse or config errors.
Machine output is CSV with a comment header naming version, seed, and config
source; nothing is written to stderr on success.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .derivation import (
    derive_chain,
    describe_step,
    dilation_sweep,
    format_certificate,
)
from .errors import GNInterpError, InternalBorderline
from .indices import (
    InequalityInstance,
    SpaceIndex,
    as_rational,
    format_index,
    solve_missing,
    validate_instance,
)
from .interp import InterpolationTriple, check_interpolation
from .norms import (
    GridSpec,
    brute_force_holder,
    default_grid,
    holder_seminorm,
    lp_norm,
    lp_norm_midpoint_oracle,
    xnorm,
)
from .testfn import parse_testfn

ENV_CONFIG = "GNINTERP_CONFIG"

_CONFIG_KEYS = {"points", "pair_points", "tolerance_ratio", "seed", "threads", "out"}


@dataclass(frozen=True)
class RunConfig:
    points: Optional[int] = None
    pair_points: Optional[int] = None
    tolerance_ratio: float = 0.01
    seed: int = 0
    threads: Optional[int] = None
    out: Optional[str] = None
    source: str = "-"


def load_config(path: Optional[str]) -> RunConfig:
    """Read a key=value config file; unknown keys are errors."""
    if path is None:
        return RunConfig()
    cfg = RunConfig(source=path)
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config entry {raw.strip()!r}")
        if key in ("points", "pair_points", "seed", "threads"):
            cfg = replace(cfg, **{key: int(value)})
        elif key == "tolerance_ratio":
            tol = float(value)
            if tol <= 0:
                raise ValueError(f"{path}:{lineno}: tolerance_ratio must be positive")
            cfg = replace(cfg, tolerance_ratio=tol)
        else:
            cfg = replace(cfg, out=value)
    return cfg


def _merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(os.environ.get(ENV_CONFIG))
    for key in ("points", "pair_points", "seed", "threads", "out"):
        value = getattr(args, key, None)
        if value is not None:
            cfg = replace(cfg, **{key: value})
    if getattr(args, "tolerance_ratio", None) is not None:
        cfg = replace(cfg, tolerance_ratio=args.tolerance_ratio)
    if cfg.threads is None:
        cfg = replace(cfg, threads=os.cpu_count())
    return cfg


# --- small parsers ------------------------------------------------------------


def _rational(text: str) -> Fraction:
    return as_rational(text)


def _index_scale(text: str) -> Fraction:
    """Integrability exponent -> scale: s = 1/p, with "inf" meaning s = 0."""
    if text.strip().lower() == "inf":
        return Fraction(0)
    p = as_rational(text)
    if p == 0:
        raise ValueError("exponent 0 has no index scale (use 'inf' for s=0)")
    return 1 / p


def _exponent_str(s: Fraction) -> str:
    return "inf" if s == 0 else str(1 / s)


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def parse_instance(text: str) -> InequalityInstance:
    """Instance string "n=1,k=2,l=1,p=2,r=-1,theta=3/4"; missing indices solved.

    ``p``/``q``/``r`` follow the exponent convention (scale = reciprocal,
    "inf" for the sup scale); ``theta`` is a rational weight.
    """
    fields: dict[str, str] = {}
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        key, sep, value = tok.partition("=")
        if not sep:
            raise ValueError(f"instance entry {tok!r} is not key=value")
        fields[key.strip()] = value.strip()
    unknown = set(fields) - {"n", "k", "l", "p", "q", "r", "theta"}
    if unknown:
        raise ValueError(f"unknown instance keys {sorted(unknown)}")
    try:
        n, k, l = int(fields["n"]), int(fields["k"]), int(fields["l"])
    except KeyError as exc:
        raise ValueError(f"instance needs n, k and l (missing {exc})") from exc
    sp = _index_scale(fields["p"]) if "p" in fields else None
    sq = _index_scale(fields["q"]) if "q" in fields else None
    sr = _index_scale(fields["r"]) if "r" in fields else None
    theta = as_rational(fields["theta"]) if "theta" in fields else None
    values, unconstrained = solve_missing(n, k, l, sp=sp, sq=sq, sr=sr, theta=theta)
    for name in unconstrained:
        if values[name] is None:
            values[name] = values["sq"]
    missing = [name for name, v in values.items() if v is None]
    if missing:
        raise ValueError(f"instance underdetermined: missing {missing}")
    return InequalityInstance(
        n=n, k=k, l=l, sp=values["sp"], sq=values["sq"], sr=values["sr"], theta=values["theta"]
    )


def _grids(fn, cfg: RunConfig) -> tuple[Optional[GridSpec], Optional[GridSpec]]:
    lp = pair = None
    if cfg.points is not None:
        lp = replace(default_grid(fn, kind="lp"), points_per_axis=cfg.points)
    if cfg.pair_points is not None:
        pair = replace(default_grid(fn, kind="pair"), points_per_axis=cfg.pair_points)
    return lp, pair


# --- output -------------------------------------------------------------------


def _format_cell(value) -> str:
    if isinstance(value, float):
        # float() strips numpy scalar wrappers so repr stays plain.
        return repr(float(value))
    return str(value)


def _emit(cfg: RunConfig, columns: Sequence[str], rows: Sequence[Sequence], out: Optional[str]) -> None:
    lines = [f"# gninterp {__version__} seed={cfg.seed} config={cfg.source}"]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- subcommands --------------------------------------------------------------


def _cmd_params(args: argparse.Namespace, cfg: RunConfig) -> int:
    given = {
        "sp": _index_scale(args.p) if args.p else None,
        "sq": _index_scale(args.q) if args.q else None,
        "sr": _index_scale(args.r) if args.r else None,
        "theta": as_rational(args.theta) if args.theta else None,
    }
    if sum(v is not None for v in given.values()) < 2:
        print("error: need at least two of --p --q --r --theta", file=sys.stderr)
        return 2
    values, unconstrained = solve_missing(args.n, args.k, args.l, **given)
    for name in unconstrained:
        if values[name] is None:
            values[name] = values["sq"]
    print(f"n={args.n} k={args.k} l={args.l}")
    for flag, name in (("p", "sp"), ("q", "sq"), ("r", "sr")):
        s = values[name]
        tag = " (unconstrained)" if name in unconstrained else ""
        print(f"{flag}={_exponent_str(s)} {format_index(s, args.n)}{tag}")
    print(f"theta={values['theta']}")
    inst = InequalityInstance(
        n=args.n, k=args.k, l=args.l,
        sp=values["sp"], sq=values["sq"], sr=values["sr"], theta=values["theta"],
    )
    report = validate_instance(inst)
    if report.ok:
        print("valid: yes")
        return 0
    print("valid: no")
    for v in report.violations:
        print(f"violation[{v.kind}]: {v.message}")
    return 2


def _cmd_norm(args: argparse.Namespace, cfg: RunConfig) -> int:
    fn = parse_testfn(args.fn, args.n)
    lp_grid, pair_grid = _grids(fn, cfg)
    mode = "seminorm" if args.seminorm else "full"
    nv = xnorm(fn, args.s, order=args.order, mode=mode, lp_grid=lp_grid, pair_grid=pair_grid)
    _emit(
        cfg,
        ("fn", "n", "s", "order", "mode", "value", "error_estimate", "method"),
        [(args.fn, args.n, args.s, args.order, mode, nv.value, nv.error_estimate, nv.method)],
        cfg.out,
    )
    return 0


def _cmd_check(args: argparse.Namespace, cfg: RunConfig) -> int:
    fn = parse_testfn(args.fn, args.n)
    lp_grid, pair_grid = _grids(fn, cfg)
    triple = InterpolationTriple(args.n, args.left, args.mid, args.right)
    mode = "full" if args.full else "seminorm"
    rep = check_interpolation(triple, fn, mode=mode, lp_grid=lp_grid, pair_grid=pair_grid)
    _emit(
        cfg,
        ("case", "eta", "left", "mid", "right", "ratio", "bound", "ok"),
        [(
            rep.classification.case.value,
            rep.classification.eta,
            args.left,
            args.mid,
            args.right,
            rep.ratio,
            "-" if rep.bound is None else rep.bound,
            "-" if rep.ok is None else rep.ok,
        )],
        cfg.out,
    )
    return 1 if rep.ok is False else 0


def _cmd_sweep(args: argparse.Namespace, cfg: RunConfig) -> int:
    inst = parse_instance(args.instance)
    fn = parse_testfn(args.fn, inst.n)
    lp_grid, pair_grid = _grids(fn, cfg)
    points = dilation_sweep(inst, fn, args.lambdas, lp_grid=lp_grid, pair_grid=pair_grid)
    rows = [(lam, ratio) for lam, ratio in points]
    _emit(cfg, ("lambda", "ratio"), rows, cfg.out)
    ratios = [r for _, r in points]
    spread = max(ratios) / min(ratios) if min(ratios) > 0 else float("inf")
    return 1 if spread > 1 + cfg.tolerance_ratio else 0


def _cmd_derive(args: argparse.Namespace, cfg: RunConfig) -> int:
    inst = parse_instance(args.instance)
    chain = derive_chain(inst)
    print(
        f"instance n={inst.n} k={inst.k} l={inst.l} sp={inst.sp} sq={inst.sq}"
        f" sr={inst.sr} theta={inst.theta}"
    )
    for step in chain.steps:
        print(describe_step(step))
    const = chain.final_constant
    print(f"final constant: {'empirical' if const is None else f'{const:.6g}'}")
    if args.out:
        Path(args.out).write_text(format_certificate(chain))
    return 0


def _cmd_oracle(args: argparse.Namespace, cfg: RunConfig) -> int:
    fn = parse_testfn(args.fn, args.n)
    if args.holder:
        grid = replace(default_grid(fn, kind="pair"), points_per_axis=args.points)
        gamma = float(as_rational(args.p2))
        fast = holder_seminorm(fn, args.order, gamma, grid=grid, refinements=0)
        brute = brute_force_holder(fn, args.order, gamma, grid=grid)
        equal = fast.value == brute.value
        _emit(
            cfg,
            ("mode", "points", "fast", "brute", "equal"),
            [("holder", args.points, fast.value, brute.value, equal)],
            cfg.out,
        )
        return 0 if equal else 1
    grid = replace(default_grid(fn, kind="lp"), points_per_axis=args.points)
    p = float(as_rational(args.p))
    fast = lp_norm(fn, p, order=args.order, grid=grid)
    brute = lp_norm_midpoint_oracle(fn, p, order=args.order, grid=grid)
    budget = fast.error_estimate + brute.error_estimate
    agree = abs(fast.value - brute.value) <= budget
    _emit(
        cfg,
        ("mode", "points", "fast", "brute", "difference", "budget", "agree"),
        [("lp", args.points, fast.value, brute.value, abs(fast.value - brute.value), budget, agree)],
        cfg.out,
    )
    return 0 if agree else 1


# --- parser -------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser, points: bool = True) -> None:
    sub.add_argument("--out", help="write CSV to this path instead of stdout")
    if points:
        sub.add_argument("--points", type=int, help="integration grid points per axis (odd)")
        sub.add_argument("--pair-points", dest="pair_points", type=int, help="pair-scan grid points per axis")
    sub.add_argument("--seed", type=int, help="seed recorded in output headers")
    sub.add_argument("--threads", type=int, help="worker cap for parallel norm evaluation")
    sub.add_argument("--tolerance-ratio", dest="tolerance_ratio", type=float, help="allowed ratio spread in sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gninterp",
        description="Derivative interpolation inequalities on the unified Lebesgue/Holder scale.",
    )
    parser.add_argument("--version", action="version", version=f"gninterp {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("params", help="solve and validate an index tuple")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", help="exponent for the k-th derivative norm (rational or 'inf')")
    p.add_argument("--q", help="exponent for the l-th derivative norm")
    p.add_argument("--r", help="exponent for the undifferentiated norm")
    p.add_argument("--theta", help="interpolation weight (rational)")
    p.set_defaults(handler=_cmd_params)

    p = subs.add_parser("norm", help="evaluate one norm of a family function")
    p.add_argument("--fn", required=True, help="function DSL, e.g. \"bump(R=1)\"")
    p.add_argument("--n", type=int, required=True, help="ambient dimension")
    p.add_argument("--s", type=_rational, required=True, help="index scale s = 1/p")
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--seminorm", action="store_true", help="top-order functional only")
    _add_common(p)
    p.set_defaults(handler=_cmd_norm)

    p = subs.add_parser("check", help="measure one interpolation triple")
    p.add_argument("--fn", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--left", type=_rational, required=True)
    p.add_argument("--mid", type=_rational, required=True)
    p.add_argument("--right", type=_rational, required=True)
    p.add_argument("--full", action="store_true", help="full norms instead of seminorms")
    _add_common(p)
    p.set_defaults(handler=_cmd_check)

    p = subs.add_parser("sweep", help="dilation invariance of the end-to-end ratio")
    p.add_argument("--instance", required=True, help="e.g. \"n=1,k=2,l=1,p=2,r=-1,theta=3/4\"")
    p.add_argument("--fn", default="bump(R=1)")
    p.add_argument("--lambdas", type=_float_list, default=[0.5, 1.0, 2.0])
    p.add_argument("--seminorm", action="store_true", help="accepted for symmetry; sweeps always use seminorms")
    _add_common(p)
    p.set_defaults(handler=_cmd_sweep)

    p = subs.add_parser("derive", help="build the proof chain for an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", help="write the certificate file here")
    p.set_defaults(handler=_cmd_derive)

    p = subs.add_parser("oracle", help="fast paths against brute-force references")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--holder", action="store_true", help="pair-scan seminorm against brute force")
    group.add_argument("--lp", action="store_true", help="Simpson integral against midpoint rule")
    p.add_argument("--fn", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--order", type=int, default=0)
    p.add_argument("--p2", help="Holder exponent (rational), for --holder")
    p.add_argument("--p", help="Lebesgue exponent (rational), for --lp")
    p.add_argument("--points", type=int, default=65, help="grid points per axis for both paths")
    _add_common(p, points=False)
    p.set_defaults(handler=_cmd_oracle)

    # Bare negative rationals ("-1/2") must parse as values, not flags.
    matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")
    for sub in [parser, *subs.choices.values()]:
        if hasattr(sub, "_negative_number_matcher"):
            sub._negative_number_matcher = matcher

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        if args.subcommand == "oracle":
            if args.holder and args.p2 is None:
                parser.error("--holder requires --p2")
            if args.lp and args.p is None:
                parser.error("--lp requires --p")
        return args.handler(args, cfg)
    except InternalBorderline as exc:
        print(f"internal borderline: {exc}", file=sys.stderr)
        for step in exc.partial_steps:
            print(f"  partial: {describe_step(step)}", file=sys.stderr)
        return 1
    except (GNInterpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
