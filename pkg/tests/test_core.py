import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafdb import models, quantum
from sheafdb.core import (
    EmpiricalModel, Valuation, enumerate_tuples, make_distribution, make_schema,
    model_from_tables,
)
from sheafdb.errors import (
    DuplicateContext, EmptyDomain, EnumerationTooLarge, FormatError, MissingDomain,
    NotNormalized, UnknownAttribute, ValueOutsideDomain,
)
from sheafdb.interchange import parse_model, parse_schema, serialize_model, serialize_schema
from sheafdb.semiring import BOOLEAN, MINPLUS, PROBABILITY, parse_rational
from sheafdb.structure import one_in_k_instance

BIT = ("0", "1")

fractions = st.fractions(min_value=0, max_value=10, max_denominator=12)
carriers = {
    "boolean": st.booleans(),
    "probability": fractions,
    "minplus": st.one_of(fractions, st.just(math.inf)),
}
rings = {"boolean": BOOLEAN, "probability": PROBABILITY, "minplus": MINPLUS}


@pytest.mark.parametrize("name", sorted(rings))
def test_semiring_laws(name):
    s = rings[name]
    x_ = carriers[name]

    @settings(max_examples=150, deadline=None)
    @given(x_, x_, x_)
    def laws(x, y, z):
        add, mul = s.add, s.mul
        assert add(x, y) == add(y, x)
        assert add(add(x, y), z) == add(x, add(y, z))
        assert add(x, s.zero) == x
        assert mul(x, y) == mul(y, x)
        assert mul(mul(x, y), z) == mul(x, mul(y, z))
        assert mul(x, s.one) == x
        assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
        assert mul(x, s.zero) == s.zero

    laws()


def test_rational_parsing_reduces():
    assert parse_rational("2/4") == F(1, 2)
    assert parse_rational("3") == 3
    for bad in ("-1/2", "1/0", "0.5", "a"):
        with pytest.raises(FormatError):
            parse_rational(bad)


# -- schemas and tuples ------------------------------------------------------------

def test_bell_schema():
    s = make_schema([("a", "b"), ("a'", "b"), ("a", "b'"), ("a'", "b'")],
                    {a: BIT for a in ("a", "a'", "b", "b'")})
    assert s.global_attrs == ("a", "a'", "b", "b'")
    assert len(s.contexts) == 4


def test_triangle_and_single_context():
    assert models.triangle_schema().global_attrs == ("a", "b", "c")
    assert make_schema([("a",)], {"a": BIT}).global_attrs == ("a",)


def test_schema_errors():
    with pytest.raises(MissingDomain):
        make_schema([("a", "b")], {"a": BIT})
    with pytest.raises(EmptyDomain):
        make_schema([("a",)], {"a": ()})
    with pytest.raises(DuplicateContext):
        make_schema([("a", "b"), ("b", "a")], {"a": BIT, "b": BIT})


def test_enumerate_tuples():
    doms = {a: BIT for a in "abcd"}
    assert enumerate_tuples(("a", "b"), doms) == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
    assert enumerate_tuples((), doms) == [()]
    assert len(enumerate_tuples(tuple("ABCD"), {a: BIT for a in "ABCD"})) == 16
    with pytest.raises(EnumerationTooLarge):
        enumerate_tuples(tuple("abcd"), doms, cap=15)


def test_distribution_checks():
    doms = {"a": BIT, "b": BIT}
    make_distribution(Valuation.relation(("a", "b"), doms, [("0", "0"), ("1", "1")]))
    make_distribution(Valuation(PROBABILITY, ("a", "b"), doms,
                                {("0", "0"): F(1, 2), ("1", "1"): F(1, 2)}))
    with pytest.raises(NotNormalized) as err:
        make_distribution(Valuation(PROBABILITY, ("a", "b"), doms, {("0", "0"): F(1, 2)}))
    assert err.value.total == F(1, 2)
    with pytest.raises(NotNormalized):
        make_distribution(Valuation.relation(("a",), doms, []))


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.tuples(st.sampled_from(BIT), st.sampled_from(BIT)), fractions))
def test_valuations_store_exactly_the_support(entries):
    v = Valuation(PROBABILITY, ("a", "b"), {"a": BIT, "b": BIT}, entries)
    assert v.support() == {r for r, w in entries.items() if w != 0}
    assert all(w != 0 for _, w in v.items())


def test_valuation_rejects_bad_rows():
    doms = {"a": BIT}
    with pytest.raises(ValueOutsideDomain):
        Valuation.relation(("a",), doms, [("2",)])
    with pytest.raises(FormatError):
        Valuation.relation(("a",), doms, [("0", "1")])


def test_model_requires_normalized_tables():
    s = models.triangle_schema()
    with pytest.raises(NotNormalized):
        model_from_tables(s, PROBABILITY, [{("0", "1"): F(1, 2)}] * 3)
    m = model_from_tables(s, PROBABILITY, [{("0", "1"): F(1, 2)}] * 3, distributions=False)
    assert isinstance(m, EmpiricalModel)


# -- interchange -------------------------------------------------------------------

def _builtins():
    yield models.bell_model()
    yield models.hardy_model()
    for n in (2, 3, 4):
        yield models.ghz_model(n)
    yield models.triangle_anticorrelation_model()
    yield one_in_k_instance(models.ks18_schema())
    yield quantum.born_model(quantum.bell_state(), quantum.bell_scenario(**quantum.BELL_ANGLES))


@pytest.mark.parametrize("m", list(_builtins()), ids=lambda m: f"{m.semiring.name}-{len(m.contexts)}")
def test_round_trip(m):
    again = parse_model(serialize_model(m))
    assert again == m
    assert serialize_model(again) == serialize_model(m)


def test_schema_round_trip():
    for s in (models.ks18_schema(), models.triangle_schema(), models.chain_schema(4)):
        assert parse_schema(serialize_schema(s)) == s


def _bell_doc():
    return json.loads(serialize_model(models.bell_model()))


def test_parse_bell_file():
    m = parse_model(serialize_model(models.bell_model()))
    assert len(m.contexts) == 4
    assert sum(len(enumerate_tuples(t.base, t.domains)) for t in m.tables) == 16
    assert m.table(("a", "b"))[("0", "0")] == F(1, 2)


def test_parse_reduces_and_defaults_to_zero():
    doc = _bell_doc()
    table = next(t for t in doc["tables"] if t["context"] == ["a", "b"])
    for row in table["rows"]:
        if row["tuple"] == {"a": "0", "b": "0"}:
            row["value"] = "2/4"
    m = parse_model(json.dumps(doc))
    assert m.table(("a", "b"))[("0", "0")] == F(1, 2)
    # the zero-weight (1,0) row is simply absent from the file
    assert all(r["tuple"] != {"a": "1", "b": "0"} for r in table["rows"])
    assert m.table(("a", "b"))[("1", "0")] == 0


@pytest.mark.parametrize("mutate, error", [
    (lambda d: d["tables"][0]["rows"][0]["tuple"].update(a="7"), ValueOutsideDomain),
    (lambda d: d["contexts"].append(["z"]), UnknownAttribute),
    (lambda d: d.pop("semiring"), FormatError),
    (lambda d: d["tables"][0]["rows"].append(dict(d["tables"][0]["rows"][0])), FormatError),
    (lambda d: d["tables"][0]["rows"][0].update(value="9/8"), NotNormalized),
])
def test_parse_errors(mutate, error):
    doc = _bell_doc()
    mutate(doc)
    with pytest.raises(error):
        parse_model(json.dumps(doc))


def test_parse_rejects_non_json():
    with pytest.raises(FormatError):
        parse_model("{not json")
