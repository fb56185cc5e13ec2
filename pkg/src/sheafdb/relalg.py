"""Relational algebra over semiring-valued tables.

Projection is the pushforward along tuple restriction, so for boolean
tables it is ordinary projection and for probability tables it is
marginalization.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping

from .core import Valuation, attrset, restrictor
from .errors import BaseMismatch, DomainMismatch, NotSubset, PartialMap, WrongSemiring
from .semiring import BOOLEAN

TENSOR_TAGS = ("0/", "1/")


def pushforward(v: Valuation, f: Callable | Mapping, base: Iterable[str],
                domains: Mapping[str, Iterable]) -> Valuation:
    """Image of ``v`` along ``f``: ``y -> sum of v(x) over f(x) = y``.

    ``f`` maps tuples over ``v.base`` to tuples over ``base``; it may be a
    callable or a mapping. It only needs to be defined on the support.
    """
    s = v.semiring
    lookup = f.get if isinstance(f, Mapping) else f
    out: dict = {}
    for row, w in v.items():
        try:
            y = lookup(row)
        except (KeyError, IndexError):
            y = None
        if y is None:
            raise PartialMap(row)
        y = tuple(y)
        out[y] = s.add(out[y], w) if y in out else w
    return Valuation(s, base, domains, out)


def project(v: Valuation, attrs: Iterable[str]) -> Valuation:
    """Restrict every tuple of ``v`` to ``attrs`` and add up collisions."""
    target = attrset(attrs)
    missing = set(target) - set(v.base)
    if missing:
        raise NotSubset(f"{sorted(missing)} not in {list(v.base)}")
    if target == v.base:
        return v
    idx = restrictor(v.base, target)
    s = v.semiring
    out: dict = {}
    for row, w in v.items():
        y = tuple(row[i] for i in idx)
        out[y] = s.add(out[y], w) if y in out else w
    return Valuation(s, target, {a: v.domains[a] for a in target}, out, validate=False)


def _shared_domains(v: Valuation, w: Valuation) -> dict:
    doms = dict(v.domains)
    for a, d in w.domains.items():
        if a in doms and doms[a] != d:
            raise DomainMismatch(a)
        doms[a] = d
    return doms


def _same_semiring(v: Valuation, w: Valuation):
    if v.semiring is not w.semiring:
        raise WrongSemiring(
            f"cannot combine {v.semiring.name} and {w.semiring.name} valuations; "
            "apply the support map first")


def natural_join(r: Valuation, s: Valuation) -> Valuation:
    """Natural join over ``r.base | s.base``.

    The weight of a joined tuple is the product of the weights of its two
    restrictions, which is plain set semantics for relations. Tuples are
    matched by hashing on the shared attributes.
    """
    _same_semiring(r, s)
    doms = _shared_domains(r, s)
    base = attrset(set(r.base) | set(s.base))
    shared = [a for a in r.base if a in s.domains]
    r_key = restrictor(r.base, shared)
    s_key = restrictor(s.base, shared)
    s_rest = [a for a in s.base if a not in r.domains]
    s_rest_idx = restrictor(s.base, s_rest)

    buckets = defaultdict(list)
    for row, w in s.items():
        buckets[tuple(row[i] for i in s_key)].append((tuple(row[i] for i in s_rest_idx), w))

    # Assemble output tuples in canonical order from (r row + s remainder).
    layout = list(r.base) + s_rest
    order = restrictor(layout, base)
    mul = r.semiring.mul
    out = {}
    for row, w in r.items():
        for extra, w2 in buckets.get(tuple(row[i] for i in r_key), ()):
            full = row + extra
            out[tuple(full[i] for i in order)] = mul(w, w2)
    return Valuation(r.semiring, base, doms, out, validate=False)


def join_all(tables: Iterable[Valuation], cap: int | None = None) -> Valuation:
    """Left fold of :func:`natural_join`; optionally bound intermediate sizes."""
    from .errors import EnumerationTooLarge

    it = iter(tables)
    acc = next(it)
    for t in it:
        acc = natural_join(acc, t)
        if cap is not None and len(acc) > cap:
            raise EnumerationTooLarge(len(acc), cap)
    return acc


def tensor(r: Valuation, s: Valuation) -> Valuation:
    """Independent combination over the tagged disjoint union of attributes.

    Attributes of ``r`` are renamed ``0/name`` and those of ``s`` ``1/name``.
    """
    _same_semiring(r, s)
    left = [TENSOR_TAGS[0] + a for a in r.base]
    right = [TENSOR_TAGS[1] + a for a in s.base]
    doms = {t: r.domains[a] for t, a in zip(left, r.base)}
    doms.update({t: s.domains[a] for t, a in zip(right, s.base)})
    base = attrset(left + right)
    order = restrictor(left + right, base)
    mul = r.semiring.mul
    out = {}
    for row, w in r.items():
        for row2, w2 in s.items():
            full = row + row2
            out[tuple(full[i] for i in order)] = mul(w, w2)
    return Valuation(r.semiring, base, doms, out, validate=False)


def _relations(r: Valuation, s: Valuation):
    if r.semiring is not BOOLEAN or s.semiring is not BOOLEAN:
        raise WrongSemiring("set operations need boolean relations")
    if r.base != s.base or r.domains != s.domains:
        raise BaseMismatch(f"relations over {list(r.base)} and {list(s.base)}")


def union(r: Valuation, s: Valuation) -> Valuation:
    _relations(r, s)
    return Valuation.relation(r.base, r.domains, r.support() | s.support())


def intersect(r: Valuation, s: Valuation) -> Valuation:
    _relations(r, s)
    return Valuation.relation(r.base, r.domains, r.support() & s.support())


def difference(r: Valuation, s: Valuation) -> Valuation:
    _relations(r, s)
    return Valuation.relation(r.base, r.domains, r.support() - s.support())


def included(r: Valuation, s: Valuation) -> bool:
    """Support inclusion ``supp(r) <= supp(s)`` for tables over the same base."""
    if r.base != s.base:
        raise BaseMismatch(f"{list(r.base)} vs {list(s.base)}")
    return r.support() <= s.support()


def rename(v: Valuation, mapping: Mapping[str, str]) -> Valuation:
    """Rename attributes (used to compare tables over different contexts)."""
    new = [mapping.get(a, a) for a in v.base]
    base = attrset(new)
    order = restrictor(new, base)
    doms = {mapping.get(a, a): d for a, d in v.domains.items()}
    return Valuation(v.semiring, base, doms,
                     {tuple(r[i] for i in order): w for r, w in v.items()}, validate=False)
