"""Exact computations on Bott towers: fans, primitive relations, Mori and nef
cones, and Fano / weak Fano / log Fano classification."""
from .classify import (
    FanoReport,
    InconsistencyError,
    LogFanoReport,
    RayType,
    census,
    classify_fano,
    log_fano_certificate,
    oracle_cross_check,
    ray_types,
)
from .core import (
    MINUS,
    PLUS,
    BottMatrix,
    CurveClass,
    Divisor,
    MatrixFormatError,
    PlusDivisor,
    RayId,
    parse_matrix,
    read_matrix,
)
from .divisors import (
    HTable,
    NefCertificate,
    canonical_data,
    h_table,
    nef_generators,
    relation_degrees,
    to_plus_basis,
)
from .fan import (
    OracleCapExceeded,
    OracleReport,
    Ray,
    Wall,
    build_rays,
    enumerate_walls,
    oracle_report,
    wall_curve_class,
)
from .relations import PrimitiveRelation, ReductionTrace, all_relations, primitive_relation, relation_wall

__version__ = "0.1.0"
