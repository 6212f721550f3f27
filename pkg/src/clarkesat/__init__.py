"""Certified construction and evaluation of Clarke-saturated Lipschitz functions.

Everything is exact rational arithmetic end to end: interval sets, fat
Cantor sets with finite-depth covers, the staged splitting partition of the
line, function evaluations with certified error intervals, and the
saturation certificates themselves.
"""

from .cantor import (
    Containment,
    FatCantorSet,
    MeasureBound,
    find_gap,
    svc_cover,
    svc_measure_in,
    svc_membership,
)
from .errors import NotYetCovered, ToleranceExhausted
from .functions import (
    FiniteSupport,
    GeneratorSource,
    SaturatedFunction,
    ShiftedSaturatedFunction,
    ValueBound,
    eval_f,
    eval_f1,
    eval_g,
    export_samples,
    lipschitz_lower_bound,
    lipschitz_norm,
    ones_generator,
    parse_mu_spec,
    sample_gradient,
    shift_to_ball,
)
from .partition import (
    PartitionMembership,
    SplittingCertificate,
    SplittingPartition,
    StageRecord,
    build_partition,
    enumerated_interval,
    enumeration_index,
    extend_partition,
    first_index_inside,
    hosts_pairwise_disjoint,
    load,
    loads,
    measure_in,
    membership,
    save,
    saves,
    splitting_certificate,
    splitting_certificate_auto,
)
from .rationals import Interval, IntervalSet, Rational, format_rational, parse_rational
from .stress import OracleResponse, TrajectoryPoint, oracle, run_subgradient, stationarity_gap, trajectory_csv
from .verifier import (
    IsometryWitness,
    SaturationCertificate,
    certify_saturation,
    independence_fingerprint,
    isometry_witness,
)

__version__ = "0.1.0"

__all__ = [
    "Containment",
    "FatCantorSet",
    "FiniteSupport",
    "GeneratorSource",
    "Interval",
    "IntervalSet",
    "IsometryWitness",
    "MeasureBound",
    "NotYetCovered",
    "OracleResponse",
    "PartitionMembership",
    "Rational",
    "SaturatedFunction",
    "SaturationCertificate",
    "ShiftedSaturatedFunction",
    "SplittingCertificate",
    "SplittingPartition",
    "StageRecord",
    "ToleranceExhausted",
    "TrajectoryPoint",
    "ValueBound",
    "build_partition",
    "certify_saturation",
    "enumerated_interval",
    "enumeration_index",
    "eval_f",
    "eval_f1",
    "eval_g",
    "export_samples",
    "extend_partition",
    "find_gap",
    "first_index_inside",
    "format_rational",
    "hosts_pairwise_disjoint",
    "independence_fingerprint",
    "isometry_witness",
    "lipschitz_lower_bound",
    "lipschitz_norm",
    "load",
    "loads",
    "measure_in",
    "membership",
    "ones_generator",
    "oracle",
    "parse_mu_spec",
    "parse_rational",
    "run_subgradient",
    "sample_gradient",
    "save",
    "saves",
    "shift_to_ball",
    "splitting_certificate",
    "splitting_certificate_auto",
    "stationarity_gap",
    "svc_cover",
    "svc_measure_in",
    "svc_membership",
    "trajectory_csv",
]
