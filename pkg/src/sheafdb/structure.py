"""Schema-level analyses that do not depend on a particular instance.

Includes the ONE-IN-k (Kochen-Specker) instance of a binary schema, the
parity-divisor test, exact search for ONE-IN-k global sections, GYO
acyclicity and a generator of compatible probabilistic instances on
acyclic schemas.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Optional

from .core import (
    DEFAULT_CAP, EmpiricalModel, Schema, Valuation, enumerate_tuples, restrictor,
)
from .errors import EnumerationTooLarge, NonBinaryDomain, NotAcyclic
from .relalg import project
from .semiring import BOOLEAN, PROBABILITY

BINARY = ("0", "1")


def incidence_profile(schema: Schema) -> Counter:
    """``|Sigma(a)|`` for every attribute: how many contexts contain it."""
    counts = Counter()
    for ctx in schema.contexts:
        counts.update(ctx)
    return counts


def _require_binary(schema: Schema):
    for a in schema.global_attrs:
        if tuple(schema.domains[a]) != BINARY:
            raise NonBinaryDomain(a)


def one_in_k_instance(schema: Schema) -> EmpiricalModel:
    """Boolean model whose tables hold exactly the tuples with a single 1."""
    _require_binary(schema)
    tables = []
    for ctx in schema.contexts:
        rows = [tuple("1" if j == k else "0" for j in range(len(ctx))) for k in range(len(ctx))]
        tables.append(Valuation.relation(ctx, schema.domains_for(ctx), rows))
    # An empty context has no such tuple, so its table is not a distribution.
    return EmpiricalModel(schema, BOOLEAN, tables, distributions=all(schema.contexts))


@dataclass(frozen=True)
class NoGlobalSection:
    divisor: int


@dataclass(frozen=True)
class Inconclusive:
    divisor: int


def parity_divisor_check(schema: Schema):
    """gcd of the incidence counts must divide the number of contexts.

    When it does not, no ONE-IN-k global section exists.
    """
    counts = incidence_profile(schema)
    g = reduce(math.gcd, counts.values(), 0)
    if g > 1 and len(schema.contexts) % g:
        return NoGlobalSection(g)
    return Inconclusive(g)


def ks_global_section(schema: Schema, cap: int = DEFAULT_CAP) -> Optional[dict]:
    """Find an assignment putting exactly one 1 in every context, or ``None``.

    Such an assignment is the same thing as a set of attributes whose
    incidence sets partition the contexts, so the search picks, for the
    first context without a 1, which of its attributes carries the 1
    (trying them in canonical order) and zeroes every attribute sharing a
    context with it.
    """
    _require_binary(schema)
    size = schema.global_tuple_count()
    if size > cap:
        raise EnumerationTooLarge(size, cap)
    ctxs = schema.contexts
    attrs = schema.global_attrs
    containing = {a: schema.contexts_containing(a) for a in attrs}
    value: dict[str, str] = {}
    covered = [False] * len(ctxs)

    def choose(a):
        """Set ``a`` to 1; return the undo log or None on conflict."""
        if value.get(a) == "0" or any(covered[i] for i in containing[a]):
            return None
        log_vals, log_cov = [a], []
        value[a] = "1"
        for i in containing[a]:
            covered[i] = True
            log_cov.append(i)
            for b in ctxs[i]:
                if b != a:
                    if value.get(b) == "1":
                        undo((log_vals, log_cov))
                        return None
                    if b not in value:
                        value[b] = "0"
                        log_vals.append(b)
        return log_vals, log_cov

    def undo(log):
        for b in log[0]:
            del value[b]
        for i in log[1]:
            covered[i] = False

    def search():
        i = next((k for k, c in enumerate(covered) if not c), None)
        if i is None:
            return True
        for a in ctxs[i]:
            log = choose(a)
            if log is None:
                continue
            if search():
                return True
            undo(log)
        return False

    if not search():
        return None
    witness = {a: value.get(a, "0") for a in attrs}
    if not is_one_in_k_section(schema, witness):
        raise AssertionError("ONE-IN-k witness failed re-verification")
    return witness


def is_one_in_k_section(schema: Schema, s: dict) -> bool:
    return all(sum(s[a] == "1" for a in ctx) == 1 for ctx in schema.contexts)


# -- GYO reduction ------------------------------------------------------------

@dataclass(frozen=True)
class RemoveAttribute:
    attribute: str
    context: int


@dataclass(frozen=True)
class RemoveContext:
    context: int
    into: int


@dataclass(frozen=True)
class Acyclic:
    steps: tuple

    @property
    def acyclic(self):
        return True


@dataclass(frozen=True)
class Cyclic:
    core: tuple  # (context index, residual attribute set) pairs
    steps: tuple = ()

    @property
    def acyclic(self):
        return False


def _gyo_step(edges: dict):
    """First applicable GYO step on ``edges`` (index -> frozenset), or None."""
    counts = Counter(a for e in edges.values() for a in e)
    for i in sorted(edges):
        for a in sorted(edges[i]):
            if counts[a] == 1:
                return RemoveAttribute(a, i)
    for i in sorted(edges):
        for j in sorted(edges):
            if i != j and edges[i] <= edges[j]:
                return RemoveContext(i, j)
    return None


def apply_gyo_step(edges: dict, step) -> dict:
    """Apply ``step`` to a copy of ``edges``; raise ValueError if it is illegal."""
    edges = dict(edges)
    if isinstance(step, RemoveAttribute):
        if step.context not in edges or step.attribute not in edges[step.context]:
            raise ValueError(f"{step} does not apply")
        if any(step.attribute in e for k, e in edges.items() if k != step.context):
            raise ValueError(f"{step.attribute!r} occurs in another context")
        edges[step.context] = edges[step.context] - {step.attribute}
    elif isinstance(step, RemoveContext):
        if (step.context not in edges or step.into not in edges
                or step.context == step.into or not edges[step.context] <= edges[step.into]):
            raise ValueError(f"{step} does not apply")
        del edges[step.context]
    else:
        raise TypeError(step)
    return edges


def hyperedges(schema: Schema) -> dict:
    return {i: frozenset(c) for i, c in enumerate(schema.contexts)}


def gyo_acyclicity(schema: Schema):
    """GYO reduction: drop attributes private to one context and contexts
    contained in another until neither applies.

    The schema is acyclic when at most one (empty) context remains.
    """
    edges = hyperedges(schema)
    steps = []
    while True:
        step = _gyo_step(edges)
        if step is None:
            break
        edges = apply_gyo_step(edges, step)
        steps.append(step)
    if len(edges) <= 1 and all(not e for e in edges.values()):
        return Acyclic(tuple(steps))
    return Cyclic(tuple(sorted((i, tuple(sorted(e))) for i, e in edges.items())), tuple(steps))


def replay_gyo(schema: Schema, steps) -> dict:
    edges = hyperedges(schema)
    for step in steps:
        edges = apply_gyo_step(edges, step)
    return edges


def vorobev_guarantee(schema: Schema) -> bool:
    """True when every compatible probabilistic instance on ``schema`` glues."""
    return gyo_acyclicity(schema).acyclic


def join_tree_order(schema: Schema, result=None) -> list[tuple[int, Optional[int]]]:
    """``(context, parent)`` pairs, root first, read off a GYO reduction.

    Each context's overlap with the contexts listed before it lies inside
    its parent (running intersection).
    """
    result = result or gyo_acyclicity(schema)
    if not result.acyclic:
        raise NotAcyclic("schema is cyclic")
    removed = [(s.context, s.into) for s in result.steps if isinstance(s, RemoveContext)]
    gone = {c for c, _ in removed}
    roots = [i for i in range(len(schema.contexts)) if i not in gone]
    order = [(r, None) for r in roots]
    order += list(reversed(removed))
    return order


def _random_distribution(rng: random.Random, n: int, denominator: int) -> list[Fraction]:
    """``n`` weights with common denominator ``denominator`` summing to 1."""
    cuts = sorted(rng.randint(0, denominator) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return [Fraction(p, denominator) for p in parts]


def generate_compatible_instance(schema: Schema, seed: int,
                                 max_denominator: int = 64) -> EmpiricalModel:
    """Random compatible probability model on an acyclic schema.

    Contexts are filled along a join tree: the root gets a random
    distribution; every later context keeps its parent's marginal on the
    shared attributes and draws random conditionals for the rest. Sampled
    pieces have denominators at most ``max_denominator``.
    """
    rng = random.Random(seed)
    tree = join_tree_order(schema)
    tables: dict[int, Valuation] = {}
    covered: set = set()
    for ctx_idx, parent in tree:
        ctx = schema.contexts[ctx_idx]
        doms = schema.domains_for(ctx)
        shared = tuple(a for a in ctx if a in covered)
        if parent is not None and not set(shared) <= set(schema.contexts[parent]):
            raise NotAcyclic("join tree lost the running intersection property")
        rest = tuple(a for a in ctx if a not in covered)
        if shared:
            holder = next(tables[p] for p in tables if set(shared) <= set(schema.contexts[p]))
            marginal = project(holder, shared)
        else:
            marginal = None
        rest_rows = enumerate_tuples(rest, doms)
        layout = shared + rest
        order = restrictor(layout, ctx)
        entries = {}
        heads = marginal.items() if marginal is not None else [((), Fraction(1))]
        for head, w in heads:
            weights = _random_distribution(rng, len(rest_rows), max_denominator)
            for tail, q in zip(rest_rows, weights):
                full = head + tail
                entries[tuple(full[i] for i in order)] = w * q
        tables[ctx_idx] = Valuation(PROBABILITY, ctx, doms, entries)
        covered |= set(ctx)
    return EmpiricalModel(schema, PROBABILITY, [tables[i] for i in range(len(schema.contexts))])
