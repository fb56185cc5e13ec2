"""Attributes, schemas, tuples, valuations and empirical models.

Conventions used throughout the package:

* an attribute is a non-empty string; an attribute set is a tuple of
  distinct attribute names sorted lexicographically;
* a tuple over an attribute set ``A`` is a plain Python tuple of domain
  tokens aligned with ``A`` (so ``("0", "1")`` over ``("a", "b")`` means
  ``{a: 0, b: 1}``);
* tuples are enumerated lexicographically: canonical attribute order, then
  declared domain order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    BaseMismatch, DuplicateAttribute, DuplicateContext, EmptyDomain,
    EnumerationTooLarge, MissingDomain, NotNormalized, UnknownAttribute,
    ValueOutsideDomain, WrongSemiring, FormatError,
)
from .semiring import BOOLEAN, PROBABILITY, REAL, MINPLUS, Semiring

DEFAULT_CAP = 2 ** 24

AttributeSet = tuple  # tuple[str, ...], sorted, distinct
Row = tuple           # tuple[str, ...], aligned with an AttributeSet


def attrset(names: Iterable[str]) -> AttributeSet:
    """Canonical attribute set from any iterable of names."""
    names = list(names)
    for n in names:
        if not isinstance(n, str) or not n:
            raise FormatError(f"attribute names must be non-empty strings, got {n!r}")
    if len(set(names)) != len(names):
        raise DuplicateAttribute(f"duplicate attribute in {names}")
    return tuple(sorted(names))


def restrictor(source: Sequence[str], target: Sequence[str]):
    """Index list mapping tuples over ``source`` to tuples over ``target``."""
    pos = {a: i for i, a in enumerate(source)}
    try:
        return [pos[a] for a in target]
    except KeyError as e:
        raise UnknownAttribute(e.args[0]) from None


def restrict_row(row: Row, idx) -> Row:
    return tuple(row[i] for i in idx)


def tuple_count(attrs: Sequence[str], domains: Mapping[str, Sequence[str]]) -> int:
    return math.prod(len(domains[a]) for a in attrs)


def enumerate_tuples(attrs: Sequence[str], domains: Mapping[str, Sequence[str]],
                     cap: int = DEFAULT_CAP) -> list[Row]:
    """All tuples over ``attrs`` in canonical order.

    Raises EnumerationTooLarge rather than truncating.
    """
    attrs = attrset(attrs)
    for a in attrs:
        if a not in domains:
            raise MissingDomain(a)
    n = tuple_count(attrs, domains)
    if n > cap:
        raise EnumerationTooLarge(n, cap)
    return list(itertools.product(*(domains[a] for a in attrs)))


def _normalize_domains(domains: Mapping[str, Iterable]) -> dict[str, tuple[str, ...]]:
    out = {}
    for a, dom in domains.items():
        dom = tuple(str(v) for v in dom)
        if not dom:
            raise EmptyDomain(a)
        if len(set(dom)) != len(dom):
            raise FormatError(f"domain of {a!r} repeats a value")
        out[a] = dom
    return out


@dataclass(frozen=True)
class Schema:
    """A finite cover of attribute sets together with attribute domains.

    ``contexts`` keeps the order in which contexts were given (tables are
    matched by position); each context is itself canonically sorted.
    """

    contexts: tuple
    domains: Mapping[str, tuple] = field(compare=True)

    @property
    def global_attrs(self) -> AttributeSet:
        return tuple(sorted(set().union(*self.contexts))) if self.contexts else ()

    @property
    def attributes(self) -> AttributeSet:
        return self.global_attrs

    def index(self, context: Iterable[str]) -> int:
        return self.contexts.index(attrset(context))

    def domains_for(self, attrs: Iterable[str]) -> dict[str, tuple]:
        return {a: self.domains[a] for a in attrs}

    def contexts_containing(self, attribute: str) -> list[int]:
        return [i for i, c in enumerate(self.contexts) if attribute in c]

    def global_tuple_count(self) -> int:
        return tuple_count(self.global_attrs, self.domains)

    def __hash__(self):
        return hash((self.contexts, tuple(sorted(self.domains.items()))))


def make_schema(contexts: Iterable[Iterable[str]],
                domains: Mapping[str, Iterable]) -> Schema:
    """Build a schema, checking that every attribute has a non-empty domain.

    Domains of attributes that occur in no context are dropped.
    """
    ctxs = [attrset(c) for c in contexts]
    if not ctxs:
        raise FormatError("a schema needs at least one context")
    seen = set()
    for c in ctxs:
        if c in seen:
            raise DuplicateContext(c)
        seen.add(c)
    doms = _normalize_domains(domains)
    used = set().union(*ctxs)
    for a in sorted(used):
        if a not in doms:
            raise MissingDomain(a)
    return Schema(tuple(ctxs), {a: doms[a] for a in sorted(used)})


class Valuation:
    """A finite-support map from tuples over ``base`` into a semiring.

    Zero entries are dropped on construction, so the stored keys are exactly
    the support.  Instances are immutable.
    """

    __slots__ = ("semiring", "base", "domains", "_entries", "_hash")

    def __init__(self, semiring: Semiring, base: Iterable[str],
                 domains: Mapping[str, Iterable], entries=None, *, validate=True):
        base = attrset(base)
        doms = {}
        for a in base:
            if a not in domains:
                raise MissingDomain(a)
            doms[a] = tuple(domains[a])
        data = {}
        items = entries.items() if isinstance(entries, Mapping) else (entries or ())
        for row, value in items:
            row = tuple(row)
            if validate:
                if len(row) != len(base):
                    raise FormatError(f"tuple {row!r} does not match attributes {list(base)}")
                for a, v in zip(base, row):
                    if v not in doms[a]:
                        raise ValueOutsideDomain(a, v)
                value = semiring.check(value)
            if row in data:
                value = semiring.add(data[row], value)
            if semiring.is_zero(value):
                data.pop(row, None)
            else:
                data[row] = value
        self.semiring = semiring
        self.base = base
        self.domains = doms
        self._entries = data
        self._hash = None

    @classmethod
    def from_dicts(cls, semiring, domains, entries: Iterable[tuple[Mapping[str, str], object]],
                   base: Iterable[str] | None = None):
        """Build from ``({attr: value}, weight)`` pairs."""
        entries = list(entries)
        if base is None:
            if not entries:
                raise ValueError("base is required for an empty valuation")
            base = entries[0][0].keys()
        base = attrset(base)
        rows = []
        for assignment, w in entries:
            if set(assignment) != set(base):
                raise FormatError(f"tuple {dict(assignment)} is not over {list(base)}")
            rows.append((tuple(str(assignment[a]) for a in base), w))
        return cls(semiring, base, domains, rows)

    @classmethod
    def relation(cls, base, domains, rows: Iterable[Row]):
        return cls(BOOLEAN, base, domains, [(r, True) for r in rows])

    def items(self):
        return self._entries.items()

    def keys(self):
        return self._entries.keys()

    def support(self) -> frozenset:
        return frozenset(self._entries)

    def __getitem__(self, row) -> object:
        return self._entries.get(tuple(row), self.semiring.zero)

    def get(self, assignment: Mapping[str, str]):
        return self[tuple(str(assignment[a]) for a in self.base)]

    def __contains__(self, row) -> bool:
        return tuple(row) in self._entries

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self.sorted_rows())

    def sorted_rows(self) -> list[Row]:
        order = [{v: i for i, v in enumerate(self.domains[a])} for a in self.base]
        return sorted(self._entries, key=lambda r: [o[v] for o, v in zip(order, r)])

    def total(self):
        return self.semiring.sum(self._entries.values())

    def as_dicts(self) -> list[tuple[dict[str, str], object]]:
        return [(dict(zip(self.base, r)), self._entries[r]) for r in self.sorted_rows()]

    def to_boolean(self) -> "Valuation":
        """Image under the support homomorphism."""
        return Valuation(BOOLEAN, self.base, self.domains,
                         [(r, True) for r in self._entries], validate=False)

    def same_shape(self, other: "Valuation"):
        if self.semiring is not other.semiring:
            raise WrongSemiring(
                f"cannot combine {self.semiring.name} and {other.semiring.name} valuations")
        if self.base != other.base:
            raise BaseMismatch(f"attribute sets differ: {list(self.base)} vs {list(other.base)}")
        if self.domains != other.domains:
            raise BaseMismatch("domains differ")

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return (self.semiring is other.semiring and self.base == other.base
                and self.domains == other.domains and self._entries == other._entries)

    def close_to(self, other: "Valuation", tol: float) -> bool:
        """Equality allowing ``tol`` per entry for inexact semirings."""
        if self.semiring.exact:
            return self == other
        if self.base != other.base:
            return False
        rows = set(self._entries) | set(other._entries)
        return all(abs(self[r] - other[r]) <= tol for r in rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.semiring.name, self.base,
                               frozenset(self._entries.items())))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{r}: {self.semiring.format(v)}" for r, v in
                         ((r, self._entries[r]) for r in self.sorted_rows()))
        return f"Valuation<{self.semiring.name} {list(self.base)}>{{{body}}}"


def is_normalized(v: Valuation, tol: float = 1e-9) -> bool:
    s = v.semiring
    if s is BOOLEAN:
        return len(v) > 0
    if s is REAL:
        return abs(v.total() - 1.0) <= tol
    return v.total() == s.one


def make_distribution(v: Valuation) -> Valuation:
    """Return ``v`` after checking that its total weight is the semiring one.

    The comparison is exact for boolean, probability and min-plus tables.
    """
    if not is_normalized(v):
        raise NotNormalized(v.total())
    return v


@dataclass(frozen=True, eq=False)
class EmpiricalModel:
    """One table per context of ``schema``, all over the same semiring."""

    schema: Schema
    semiring: Semiring
    tables: tuple
    distributions: bool = True

    def __post_init__(self):
        tables = tuple(self.tables)
        object.__setattr__(self, "tables", tables)
        if len(tables) != len(self.schema.contexts):
            raise FormatError(
                f"{len(tables)} tables for {len(self.schema.contexts)} contexts")
        for i, (ctx, t) in enumerate(zip(self.schema.contexts, tables)):
            if t.base != ctx:
                raise BaseMismatch(f"table {i} is over {list(t.base)}, context is {list(ctx)}")
            if t.semiring is not self.semiring:
                raise WrongSemiring(f"table {i} is over {t.semiring.name}, "
                                    f"model is over {self.semiring.name}")
            if t.domains != self.schema.domains_for(ctx):
                raise BaseMismatch(f"table {i} domains differ from the schema")
            if self.distributions and not is_normalized(t):
                raise NotNormalized(t.total(), f"table {list(ctx)}")

    @property
    def contexts(self):
        return self.schema.contexts

    def table(self, context: Iterable[str]) -> Valuation:
        return self.tables[self.schema.index(context)]

    def support(self) -> "EmpiricalModel":
        return EmpiricalModel(self.schema, BOOLEAN, [t.to_boolean() for t in self.tables],
                              self.distributions)

    def __eq__(self, other):
        if not isinstance(other, EmpiricalModel):
            return NotImplemented
        return (self.schema == other.schema and self.semiring is other.semiring
                and self.tables == other.tables and self.distributions == other.distributions)

    def __hash__(self):
        return hash((self.schema, self.semiring.name, self.tables))


def model_from_tables(schema: Schema, semiring: Semiring,
                      tables: Sequence[Mapping[Row, object]],
                      distributions: bool = True) -> EmpiricalModel:
    """Convenience constructor from per-context ``{row: weight}`` dicts."""
    vals = [Valuation(semiring, ctx, schema.domains_for(ctx), t)
            for ctx, t in zip(schema.contexts, tables)]
    return EmpiricalModel(schema, semiring, vals, distributions)


__all__ = [
    "AttributeSet", "Row", "DEFAULT_CAP", "attrset", "restrictor", "restrict_row",
    "tuple_count", "enumerate_tuples", "Schema", "make_schema", "Valuation",
    "is_normalized", "make_distribution", "EmpiricalModel", "model_from_tables",
    "BOOLEAN", "PROBABILITY", "MINPLUS", "REAL",
]
