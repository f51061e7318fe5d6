"""Derivative interpolation inequalities on a unified Lebesgue/Holder scale.

Each admissible index is a rational scale s = 1/p: positive for Lebesgue
exponents, zero for the sup norm, negative for Holder classes. The package
solves and validates index tuples, evaluates the matching norms on smooth
compactly supported families, classifies and measures three-point
interpolation bounds, and derives machine-checkable proof chains for the
full derivative inequality, including their numerical verification.
"""

from .errors import (
    BadCertificate,
    BadParams,
    BorderlineIndex,
    BrokenChain,
    DegenerateCondition,
    DslSyntaxError,
    GNInterpError,
    GridTooCoarse,
    IndeterminateTheta,
    InternalBorderline,
    InvalidBase,
    IntegralDiverges,
    InvalidInstance,
    JetOrderOverflow,
    NonHolderIndex,
    NotInterpolable,
    OracleTooLarge,
    ScaleOverflow,
    ThetaOutOfRange,
    UnknownFamily,
    UnsupportedDimension,
)
from .indices import (
    HolderSignature,
    InequalityInstance,
    SpaceIndex,
    ValidityReport,
    Violation,
    as_rational,
    format_index,
    holder_signature,
    signature_index,
    sobolev_flat,
    sobolev_sharp,
    solve_missing,
    solve_q,
    solve_theta,
    validate_instance,
)
from .testfn import (
    TestFunction,
    bump,
    bump_poly,
    bump_wave,
    parse_testfn,
    plateau,
)
from .norms import (
    GridSpec,
    NormValue,
    brute_force_holder,
    check_holder_equality,
    default_grid,
    holder_seminorm,
    lp_norm,
    lp_norm_midpoint_oracle,
    sup_norm,
    xnorm,
)
from .interp import (
    Classification,
    InterpCase,
    InterpolationReport,
    InterpolationTriple,
    check_interpolation,
    ck_interpolation_check,
    classify_triple,
    composite_nodes,
    holder_step_constant,
    mixed_case_constant,
    reiteration_constants,
    reiteration_second,
    reiteration_theta,
    split_sum_inequality,
)
from .derivation import (
    ChainEvaluation,
    ProofChain,
    Slot,
    Step,
    StepMeasurement,
    base_lemma_step,
    base_lemma_steps,
    chain_constant,
    derive_chain,
    describe_step,
    dilation_slope,
    dilation_sweep,
    evaluate_chain,
    format_certificate,
    parse_certificate,
    sobolev_chain,
    verify_chain,
    verify_step,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "GNInterpError",
    "BadCertificate",
    "BadParams",
    "BorderlineIndex",
    "BrokenChain",
    "DegenerateCondition",
    "DslSyntaxError",
    "GridTooCoarse",
    "IndeterminateTheta",
    "IntegralDiverges",
    "InternalBorderline",
    "InvalidBase",
    "InvalidInstance",
    "JetOrderOverflow",
    "NonHolderIndex",
    "NotInterpolable",
    "OracleTooLarge",
    "ScaleOverflow",
    "ThetaOutOfRange",
    "UnknownFamily",
    "UnsupportedDimension",
    # indices
    "HolderSignature",
    "InequalityInstance",
    "SpaceIndex",
    "ValidityReport",
    "Violation",
    "as_rational",
    "format_index",
    "holder_signature",
    "signature_index",
    "sobolev_flat",
    "sobolev_sharp",
    "solve_missing",
    "solve_q",
    "solve_theta",
    "validate_instance",
    # test functions
    "TestFunction",
    "bump",
    "bump_poly",
    "bump_wave",
    "parse_testfn",
    "plateau",
    # norms
    "GridSpec",
    "NormValue",
    "brute_force_holder",
    "check_holder_equality",
    "default_grid",
    "holder_seminorm",
    "lp_norm",
    "lp_norm_midpoint_oracle",
    "sup_norm",
    "xnorm",
    # interpolation
    "Classification",
    "InterpCase",
    "InterpolationReport",
    "InterpolationTriple",
    "check_interpolation",
    "ck_interpolation_check",
    "classify_triple",
    "composite_nodes",
    "holder_step_constant",
    "mixed_case_constant",
    "reiteration_constants",
    "reiteration_second",
    "reiteration_theta",
    "split_sum_inequality",
    # derivation
    "ChainEvaluation",
    "ProofChain",
    "Slot",
    "Step",
    "StepMeasurement",
    "base_lemma_step",
    "base_lemma_steps",
    "chain_constant",
    "derive_chain",
    "describe_step",
    "dilation_slope",
    "dilation_sweep",
    "evaluate_chain",
    "format_certificate",
    "parse_certificate",
    "sobolev_chain",
    "verify_chain",
    "verify_step",
]
