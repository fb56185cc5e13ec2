"""JSON interchange format for schemas and empirical models.

Layout::

    {
      "semiring": "boolean" | "probability" | "minplus" | "real",
      "distributions": true,
      "attributes": [{"name": "a", "domain": ["0", "1"]}, ...],
      "contexts": [["a", "b"], ...],
      "tables": [{"context": ["a", "b"],
                  "rows": [{"tuple": {"a": "0", "b": "0"}, "value": "1/2"}, ...]}, ...]
    }

Omitted rows carry the semiring zero. A schema-only file omits ``tables``
(and may omit ``semiring``).
"""
from __future__ import annotations

import json
from typing import Any

from .core import EmpiricalModel, Schema, Valuation, attrset, make_schema
from .errors import FormatError, UnknownAttribute, ValueOutsideDomain
from .semiring import get_semiring


def _expect(cond, message, location):
    if not cond:
        raise FormatError(message, location)


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, f"line {e.lineno} column {e.colno}") from None
    _expect(isinstance(doc, dict), "top level must be an object", "$")
    return doc


def _schema_from_doc(doc: dict) -> Schema:
    attrs = doc.get("attributes")
    _expect(isinstance(attrs, list), "'attributes' must be an array", "$.attributes")
    domains: dict[str, list] = {}
    for i, entry in enumerate(attrs):
        loc = f"$.attributes[{i}]"
        _expect(isinstance(entry, dict), "attribute entry must be an object", loc)
        name, dom = entry.get("name"), entry.get("domain")
        _expect(isinstance(name, str) and name, "attribute name must be a non-empty string", loc)
        _expect(isinstance(dom, list) and all(isinstance(v, str) for v in dom),
                "domain must be an array of strings", loc + ".domain")
        _expect(name not in domains, f"attribute {name!r} declared twice", loc)
        domains[name] = dom
    ctxs = doc.get("contexts")
    _expect(isinstance(ctxs, list), "'contexts' must be an array", "$.contexts")
    for i, c in enumerate(ctxs):
        _expect(isinstance(c, list) and all(isinstance(a, str) for a in c),
                "context must be an array of attribute names", f"$.contexts[{i}]")
        for a in c:
            if a not in domains:
                raise UnknownAttribute(a)
    return make_schema(ctxs, domains)


def parse_schema(text: str) -> Schema:
    """Read a schema; any ``tables`` entry is ignored."""
    return _schema_from_doc(_load(text))


def parse_model(text: str) -> EmpiricalModel:
    doc = _load(text)
    schema = _schema_from_doc(doc)
    _expect("semiring" in doc, "missing 'semiring'", "$")
    semiring = get_semiring(doc["semiring"])
    distributions = doc.get("distributions", True)
    _expect(isinstance(distributions, bool), "'distributions' must be a boolean",
            "$.distributions")
    tables = doc.get("tables")
    _expect(isinstance(tables, list), "'tables' must be an array", "$.tables")

    rows_by_ctx: dict[tuple, list] = {}
    for i, t in enumerate(tables):
        loc = f"$.tables[{i}]"
        _expect(isinstance(t, dict), "table must be an object", loc)
        ctx_names = t.get("context")
        _expect(isinstance(ctx_names, list), "table needs a 'context' array", loc + ".context")
        for a in ctx_names:
            if a not in schema.domains:
                raise UnknownAttribute(a)
        ctx = attrset(ctx_names)
        _expect(ctx in schema.contexts, f"table context {ctx_names} is not in 'contexts'",
                loc + ".context")
        _expect(ctx not in rows_by_ctx, f"second table for context {ctx_names}", loc)
        rows = t.get("rows", [])
        _expect(isinstance(rows, list), "'rows' must be an array", loc + ".rows")
        parsed = []
        seen = set()
        for j, r in enumerate(rows):
            rloc = f"{loc}.rows[{j}]"
            _expect(isinstance(r, dict) and isinstance(r.get("tuple"), dict),
                    "row needs a 'tuple' object", rloc)
            tup = r["tuple"]
            for a in tup:
                if a not in schema.domains:
                    raise UnknownAttribute(a)
            _expect(set(tup) == set(ctx), f"tuple attributes {sorted(tup)} differ from "
                    f"context {list(ctx)}", rloc + ".tuple")
            row = []
            for a in ctx:
                v = tup[a]
                _expect(isinstance(v, str), "tuple values must be strings", rloc + ".tuple")
                if v not in schema.domains[a]:
                    raise ValueOutsideDomain(a, v)
                row.append(v)
            row = tuple(row)
            _expect(row not in seen, f"duplicate tuple {dict(tup)}", rloc)
            seen.add(row)
            raw = r.get("value")
            _expect(isinstance(raw, str), "row value must be a string", rloc + ".value")
            value = semiring.parse(raw)
            parsed.append((row, value))
        rows_by_ctx[ctx] = parsed

    vals = [Valuation(semiring, ctx, schema.domains_for(ctx), rows_by_ctx.get(ctx, ()))
            for ctx in schema.contexts]
    return EmpiricalModel(schema, semiring, vals, distributions)


def schema_to_doc(schema: Schema) -> dict[str, Any]:
    return {
        "attributes": [{"name": a, "domain": list(schema.domains[a])}
                       for a in schema.global_attrs],
        "contexts": [list(c) for c in schema.contexts],
    }


def model_to_doc(m: EmpiricalModel) -> dict[str, Any]:
    doc: dict[str, Any] = {"semiring": m.semiring.name, "distributions": m.distributions}
    doc.update(schema_to_doc(m.schema))
    doc["tables"] = [
        {"context": list(t.base),
         "rows": [{"tuple": dict(zip(t.base, r)), "value": m.semiring.format(t[r])}
                  for r in t.sorted_rows()]}
        for t in m.tables
    ]
    return doc


def serialize_model(m: EmpiricalModel, indent: int | None = 1) -> str:
    return json.dumps(model_to_doc(m), indent=indent, ensure_ascii=False)


def serialize_schema(schema: Schema, indent: int | None = 1) -> str:
    return json.dumps(schema_to_doc(schema), indent=indent, ensure_ascii=False)
