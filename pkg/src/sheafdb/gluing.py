"""Compatibility, gluing and the contextuality hierarchy.

An empirical model glues when a single table over all attributes restricts
to every context table. For relations this is the universal relation
problem; for probability tables it is the existence of a local hidden
variable model.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional

from .core import (
    DEFAULT_CAP, EmpiricalModel, Valuation, enumerate_tuples, is_normalized, restrictor,
)
from .errors import NotNormalized, WrongSemiring
from .relalg import join_all, project
from .semiring import BOOLEAN, PROBABILITY, REAL_TOLERANCE
from .solver import (
    Feasible, FarkasCertificate, LinearSystem, SupportConstraintSet,
    find_assignment, lp_feasible,
)


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    overlap: tuple
    marginal_i: Valuation
    marginal_j: Valuation


@dataclass(frozen=True)
class CompatibilityReport:
    violations: tuple = ()

    @property
    def compatible(self) -> bool:
        return not self.violations


def check_compatibility(m: EmpiricalModel, tol: float = REAL_TOLERANCE) -> CompatibilityReport:
    """Compare the marginals of every pair of tables on their overlap.

    Comparison is exact except for floating-point tables, where entries may
    differ by ``tol``.
    """
    out = []
    tables = m.tables
    for i, j in itertools.combinations(range(len(tables)), 2):
        overlap = tuple(a for a in tables[i].base if a in tables[j].domains)
        mi, mj = project(tables[i], overlap), project(tables[j], overlap)
        if not mi.close_to(mj, tol):
            out.append(Violation(i, j, overlap, mi, mj))
    return CompatibilityReport(tuple(out))


@dataclass(frozen=True)
class GlueResult:
    """``witness`` is the join of all tables when it glues, else ``None``."""

    witness: Optional[Valuation]
    largest: bool = False

    @property
    def exists(self) -> bool:
        return self.witness is not None


def universal_relation(m: EmpiricalModel, cap: int = DEFAULT_CAP) -> GlueResult:
    """Decide whether a boolean instance has a universal relation.

    The join of all tables contains every glue, so a glue exists exactly when
    the join itself projects back onto each table; in that case it is the
    largest one.
    """
    if m.semiring is not BOOLEAN:
        raise WrongSemiring("universal_relation needs a boolean model; take its support first")
    joined = join_all(m.tables, cap)
    for t in m.tables:
        if project(joined, t.base) != t:
            return GlueResult(None)
    return GlueResult(joined, largest=True)


@dataclass(frozen=True)
class LhvResult:
    """Either a global distribution or a Farkas certificate over ``system``."""

    system: LinearSystem
    distribution: Optional[Valuation] = None
    certificate: Optional[FarkasCertificate] = None

    @property
    def feasible(self) -> bool:
        return self.distribution is not None


def hidden_variable_system(m: EmpiricalModel, cap: int = DEFAULT_CAP) -> LinearSystem:
    """One column per global tuple, one row per (context, tuple) entry.

    Row ``(C, t)`` reads ``sum of X_s over s with s|C = t  =  d_C(t)``.
    Rows follow context order then canonical tuple order; columns follow
    canonical global tuple order.
    """
    schema = m.schema
    gattrs = schema.global_attrs
    globals_ = enumerate_tuples(gattrs, schema.domains, cap)
    matrix, rhs, labels = [], [], []
    for ctx, table in zip(schema.contexts, m.tables):
        idx = restrictor(gattrs, ctx)
        local = enumerate_tuples(ctx, schema.domains, cap)
        pos = {t: k for k, t in enumerate(local)}
        block = [[0] * len(globals_) for _ in local]
        for col, s in enumerate(globals_):
            block[pos[tuple(s[i] for i in idx)]][col] = 1
        matrix.extend(block)
        rhs.extend(table[t] for t in local)
        labels.extend((ctx, t) for t in local)
    return LinearSystem(matrix, rhs, columns=list(globals_), rows=labels)


def lhv_feasible(m: EmpiricalModel, cap: int = DEFAULT_CAP) -> LhvResult:
    """Decide whether a probability model has a local hidden variable model."""
    if m.semiring is not PROBABILITY:
        raise WrongSemiring(f"lhv_feasible needs a probability model, got {m.semiring.name}")
    for ctx, t in zip(m.contexts, m.tables):
        if not is_normalized(t):
            raise NotNormalized(t.total(), f"table {list(ctx)}")
    system = hidden_variable_system(m, cap)
    result = lp_feasible(system)
    if isinstance(result, Feasible):
        d = Valuation(PROBABILITY, m.schema.global_attrs, m.schema.domains,
                      zip(system.columns, result.x), validate=False)
        return LhvResult(system, distribution=d)
    return LhvResult(system, certificate=result.certificate)


def support_constraints(m: EmpiricalModel) -> SupportConstraintSet:
    return SupportConstraintSet(m.contexts, [t.support() for t in m.tables])


def strong_contextuality(m: EmpiricalModel, cap: int = DEFAULT_CAP) -> Optional[dict]:
    """A global assignment consistent with every support, or ``None``.

    ``None`` means the model is strongly contextual. The witness is the first
    one met by the search of :func:`sheafdb.solver.find_assignment`.
    """
    return find_assignment(support_constraints(m), m.schema.domains, cap)


class ContextualityClass(IntEnum):
    NON_CONTEXTUAL = 0
    PROBABILISTICALLY_CONTEXTUAL = 1
    LOGICALLY_CONTEXTUAL = 2
    STRONGLY_CONTEXTUAL = 3

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")


@dataclass
class Classification:
    """Outcome of :func:`classify` plus every intermediate result."""

    cls: ContextualityClass
    lhv: Optional[LhvResult] = None
    support_glue: Optional[GlueResult] = None
    witness: Optional[dict] = None


def classify(m: EmpiricalModel, cap: int = DEFAULT_CAP) -> Classification:
    """Place ``m`` in the hierarchy non-contextual < probabilistic < logical < strong."""
    if m.semiring is PROBABILITY:
        lhv = lhv_feasible(m, cap)
        if lhv.feasible:
            return Classification(ContextualityClass.NON_CONTEXTUAL, lhv=lhv)
        support = m.support()
    elif m.semiring is BOOLEAN:
        lhv = None
        support = m
    else:
        raise WrongSemiring(f"classify needs a boolean or probability model, got {m.semiring.name}")

    glue = universal_relation(support, cap)
    if glue.exists:
        cls = (ContextualityClass.PROBABILISTICALLY_CONTEXTUAL if lhv is not None
               else ContextualityClass.NON_CONTEXTUAL)
        return Classification(cls, lhv=lhv, support_glue=glue)
    witness = strong_contextuality(support, cap)
    cls = (ContextualityClass.LOGICALLY_CONTEXTUAL if witness is not None
           else ContextualityClass.STRONGLY_CONTEXTUAL)
    return Classification(cls, lhv=lhv, support_glue=glue, witness=witness)


def marginalize(d: Valuation, m_or_contexts) -> list[Valuation]:
    """Project a global table onto each context (of a model or a list)."""
    ctxs = getattr(m_or_contexts, "contexts", m_or_contexts)
    return [project(d, c) for c in ctxs]


__all__ = [
    "Violation", "CompatibilityReport", "check_compatibility", "GlueResult",
    "universal_relation", "LhvResult", "hidden_variable_system", "lhv_feasible",
    "support_constraints", "strong_contextuality", "ContextualityClass",
    "Classification", "classify", "marginalize",
]
