"""Built-in schemas and empirical models."""
from __future__ import annotations

import itertools
from fractions import Fraction as F

from .core import DEFAULT_CAP, EmpiricalModel, Valuation, make_schema, model_from_tables
from .errors import EnumerationTooLarge
from .semiring import BOOLEAN, PROBABILITY

BIT = ("0", "1")

# Alice chooses a or a', Bob chooses b or b'.
BELL_CONTEXTS = (("a", "b"), ("a'", "b"), ("a", "b'"), ("a'", "b'"))

# Columns (0,0), (1,0), (0,1), (1,1) with Alice's outcome first.
_COLUMNS = (("0", "0"), ("1", "0"), ("0", "1"), ("1", "1"))

BELL_TABLE = (
    (F(1, 2), F(0), F(0), F(1, 2)),
    (F(3, 8), F(1, 8), F(1, 8), F(3, 8)),
    (F(3, 8), F(1, 8), F(1, 8), F(3, 8)),
    (F(1, 8), F(3, 8), F(3, 8), F(1, 8)),
)

HARDY_SUPPORT = (
    (1, 1, 1, 1),
    (0, 1, 1, 1),
    (0, 1, 1, 1),
    (1, 1, 1, 0),
)

KS18_CONTEXTS = (
    "ABCD", "AEFG", "HICJ", "HKGL", "BEMN", "IKNO", "PQDJ", "PRFL", "QRMO",
)


def bell_schema():
    return make_schema(BELL_CONTEXTS, {a: BIT for a in ("a", "a'", "b", "b'")})


def _two_party(semiring, rows):
    schema = bell_schema()
    tables = []
    for ctx, weights in zip(BELL_CONTEXTS, rows):
        # Contexts are stored sorted; Alice's attribute sorts first in all four.
        assert schema.contexts[len(tables)] == ctx
        tables.append({col: w for col, w in zip(_COLUMNS, weights)})
    return model_from_tables(schema, semiring, tables)


def bell_model() -> EmpiricalModel:
    return _two_party(PROBABILITY, BELL_TABLE)


def hardy_model() -> EmpiricalModel:
    return _two_party(BOOLEAN, [[bool(v) for v in r] for r in HARDY_SUPPORT])


def ghz_name(setting: str, party: int) -> str:
    return f"{setting}({party})"


def ghz_parity_allows(settings, outcome) -> bool:
    """Whether ``outcome`` is possible in the context with ``settings``.

    Even Y-counts fix the parity of the number of 1 outcomes (even for
    0 mod 4, odd for 2 mod 4); odd Y-counts leave every outcome possible.
    """
    ys = sum(s == "Y" for s in settings)
    if ys % 2:
        return True
    ones = sum(v == "1" for v in outcome)
    return ones % 2 == (ys % 4) // 2


def ghz_model(n: int, cap: int = DEFAULT_CAP) -> EmpiricalModel:
    """Possibilistic GHZ model for ``n`` parties with settings X(i), Y(i)."""
    if n < 2:
        raise ValueError("GHZ models need at least two parties")
    if 4 ** n > cap:
        raise EnumerationTooLarge(4 ** n, cap)
    parties = range(1, n + 1)
    domains = {ghz_name(s, i): BIT for i in parties for s in "XY"}
    # Party 1 varies fastest, matching MeasurementScenario.settings().
    choices = [c[::-1] for c in itertools.product("XY", repeat=n)]
    contexts = [[ghz_name(s, i) for s, i in zip(c, parties)] for c in choices]
    schema = make_schema(contexts, domains)
    tables = []
    for settings, ctx in zip(choices, schema.contexts):
        # ctx is sorted by name; recover each attribute's setting from it.
        by_name = {ghz_name(s, i): s for s, i in zip(settings, parties)}
        ordered = [by_name[a] for a in ctx]
        rows = [o for o in itertools.product(BIT, repeat=n) if ghz_parity_allows(ordered, o)]
        tables.append(Valuation.relation(ctx, schema.domains_for(ctx), rows))
    return EmpiricalModel(schema, BOOLEAN, tables)


def ks18_schema():
    """The 18-attribute, 9-context Kochen-Specker schema (U1..U9)."""
    contexts = [list(c) for c in KS18_CONTEXTS]
    return make_schema(contexts, {a: BIT for c in contexts for a in c})


def triangle_schema():
    return make_schema([("a", "b"), ("b", "c"), ("a", "c")], {a: BIT for a in "abc"})


def chain_schema(length: int = 3):
    """``{x0,x1}, {x1,x2}, ...``; ``length=3`` gives {a,b},{b,c},{c,d}."""
    names = [chr(ord("a") + k) for k in range(length + 1)]
    return make_schema(list(zip(names, names[1:])), {a: BIT for a in names})


def triangle_anticorrelation_model() -> EmpiricalModel:
    """Each pair table uniform on (0,1), (1,0): compatible, but does not glue."""
    schema = triangle_schema()
    half = F(1, 2)
    return model_from_tables(schema, PROBABILITY,
                             [{("0", "1"): half, ("1", "0"): half}] * 3)


BUILTIN_SCHEMAS = {"bell": bell_schema, "ks18": ks18_schema, "triangle": triangle_schema}
