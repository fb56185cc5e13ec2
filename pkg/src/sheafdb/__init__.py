"""Relational databases as measurement scenarios.

Semiring-valued tables over a cover of attribute sets, with decision
procedures for compatibility, universal relations, local hidden variable
models, strong contextuality, Kochen-Specker-type obstructions and schema
acyclicity.
"""
from .core import (
    DEFAULT_CAP, EmpiricalModel, Schema, Valuation, attrset, enumerate_tuples,
    make_distribution, make_schema, model_from_tables,
)
from .semiring import BOOLEAN, MINPLUS, PROBABILITY, REAL, Semiring
from .interchange import parse_model, parse_schema, serialize_model, serialize_schema
from .relalg import (
    difference, intersect, natural_join, project, pushforward, tensor, union,
)
from .gluing import (
    ContextualityClass, check_compatibility, classify, lhv_feasible,
    strong_contextuality, universal_relation,
)
from .structure import (
    generate_compatible_instance, gyo_acyclicity, ks_global_section,
    one_in_k_instance, parity_divisor_check, vorobev_guarantee,
)
from .models import bell_model, ghz_model, hardy_model, ks18_schema, triangle_schema

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CAP", "EmpiricalModel", "Schema", "Valuation", "attrset", "enumerate_tuples",
    "make_distribution", "make_schema", "model_from_tables",
    "BOOLEAN", "MINPLUS", "PROBABILITY", "REAL", "Semiring",
    "parse_model", "parse_schema", "serialize_model", "serialize_schema",
    "difference", "intersect", "natural_join", "project", "pushforward", "tensor", "union",
    "ContextualityClass", "check_compatibility", "classify", "lhv_feasible",
    "strong_contextuality", "universal_relation",
    "generate_compatible_instance", "gyo_acyclicity", "ks_global_section",
    "one_in_k_instance", "parity_divisor_check", "vorobev_guarantee",
    "bell_model", "ghz_model", "hardy_model", "ks18_schema", "triangle_schema",
]
