"""Command-line interface.

Analysis commands print a JSON report on stdout. Contextuality, infeasibility
and cyclicity are findings, not failures: the exit status is 0 whenever the
analysis ran, 2 for malformed input and 3 when an enumeration cap is hit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import re
import sys
import time

from . import models, quantum
from .core import DEFAULT_CAP, EmpiricalModel, Valuation
from .errors import EnumerationTooLarge, MalformedInput, NotAcyclic, NoNearbyRational, SheafDBError
from .gluing import check_compatibility, classify, lhv_feasible, universal_relation
from .interchange import parse_model, parse_schema, serialize_model, serialize_schema
from .semiring import BOOLEAN, PROBABILITY, format_rational
from .structure import (
    Acyclic, NoGlobalSection, RemoveAttribute, generate_compatible_instance,
    gyo_acyclicity, ks_global_section, one_in_k_instance, parity_divisor_check,
)

EXIT_OK, EXIT_MALFORMED, EXIT_CAP = 0, 2, 3


def _read(path: str) -> tuple[str, str]:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise MalformedInput(f"cannot read {path}: {e.strerror}") from None
    return text, hashlib.sha256(text.encode("utf-8")).hexdigest()


def rows_json(v: Valuation, with_values=False):
    if with_values:
        return [{"tuple": t, "value": v.semiring.format(w)} for t, w in v.as_dicts()]
    return [t for t, _ in v.as_dicts()]


def certificate_json(lhv):
    y = lhv.certificate.y
    return {
        "y": [format_rational(c) for c in y],
        "nonzero": [{"context": list(ctx), "tuple": dict(zip(ctx, t)),
                     "coefficient": format_rational(c)}
                    for (ctx, t), c in zip(lhv.system.rows, y) if c],
    }


def lhv_json(lhv):
    if lhv.feasible:
        return {"feasible": True, "distribution": rows_json(lhv.distribution, True)}
    return {"feasible": False, "certificate": certificate_json(lhv)}


def glue_json(res):
    if res.exists:
        return {"exists": True, "largest": res.largest, "relation": rows_json(res.witness)}
    return {"exists": False}


def cmd_check(args, model):
    rep = check_compatibility(model)
    return {
        "compatible": rep.compatible,
        "violations": [
            {"contexts": [list(model.contexts[v.i]), list(model.contexts[v.j])],
             "overlap": list(v.overlap),
             "marginals": [rows_json(v.marginal_i, True), rows_json(v.marginal_j, True)]}
            for v in rep.violations
        ],
    }


def cmd_glue(args, model):
    if model.semiring is BOOLEAN:
        return {"kind": "universal-relation", **glue_json(universal_relation(model, args.cap))}
    if model.semiring is PROBABILITY:
        return {"kind": "hidden-variable", **lhv_json(lhv_feasible(model, args.cap))}
    raise MalformedInput(f"glue needs a boolean or probability model, got {model.semiring.name}")


def cmd_classify(args, model):
    c = classify(model, args.cap)
    out = {"class": c.cls.label, "compatible": check_compatibility(model).compatible}
    if c.lhv is not None:
        out["hidden_variable"] = lhv_json(c.lhv)
    if c.support_glue is not None:
        out["support_universal_relation"] = glue_json(c.support_glue)
    if c.support_glue is not None and not c.support_glue.exists:
        out["global_assignment"] = c.witness
    return out


def cmd_schema(args, schema):
    run_all = not (args.acyclicity or args.parity or args.ks)
    out = {}
    if run_all or args.acyclicity:
        res = gyo_acyclicity(schema)
        if isinstance(res, Acyclic):
            out["acyclicity"] = {
                "acyclic": True,
                "steps": [({"remove_attribute": s.attribute, "context": s.context}
                           if isinstance(s, RemoveAttribute)
                           else {"remove_context": s.context, "into": s.into})
                          for s in res.steps]}
        else:
            out["acyclicity"] = {"acyclic": False,
                                 "core": [{"context": i, "attributes": list(e)}
                                          for i, e in res.core]}
    if run_all or args.parity:
        res = parity_divisor_check(schema)
        out["parity"] = {"result": ("NoGlobalSection" if isinstance(res, NoGlobalSection)
                                    else "Inconclusive"),
                         "divisor": res.divisor, "contexts": len(schema.contexts)}
    if run_all or args.ks:
        w = ks_global_section(schema, args.cap)
        out["ks"] = {"result": "NoSection"} if w is None else {"result": "Section", "witness": w}
    return out


_ANGLE = re.compile(r"^\s*([+-]?)\s*(\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*(pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from ``0.5``, ``pi/3``, ``-pi/3``, ``2*pi/3`` and the like."""
    m = _ANGLE.match(text)
    if not m or not (m.group(2) or m.group(3)):
        raise MalformedInput(f"cannot parse angle {text!r}")
    sign, coef, pi, den = m.groups()
    value = float(coef) if coef else 1.0
    if pi:
        value *= math.pi
    if den:
        value /= float(den)
    return -value if sign == "-" else value


def parse_party(spec: str) -> dict:
    party = {}
    for item in spec.split(","):
        if "=" not in item:
            raise MalformedInput(f"setting {item!r} must look like name=angle")
        name, angle = item.split("=", 1)
        name = name.strip()
        if not name or name in party:
            raise MalformedInput(f"bad or repeated setting name in {spec!r}")
        party[name] = parse_angle(angle)
    return party


def build_quantum(args) -> EmpiricalModel:
    if args.state == "bell":
        state = quantum.bell_state()
        scenario = quantum.bell_scenario(**quantum.BELL_ANGLES)
    else:
        state = quantum.ghz_state(args.n)
        scenario = quantum.ghz_scenario(args.n)
    if args.angles:
        scenario = quantum.MeasurementScenario.from_angles([parse_party(p) for p in args.angles])
        if scenario.n != state.n:
            raise MalformedInput(f"{scenario.n} parties given for a {state.n}-party state")
    m = quantum.born_model(state, scenario)
    if args.rationalize:
        m = quantum.rationalize(m, args.rationalize)
    return m


def build_generated(args):
    name = args.name
    if name == "bell":
        return models.bell_model()
    if name == "hardy":
        return models.hardy_model()
    if name == "ghz":
        return models.ghz_model(args.n, args.cap)
    schema = {"ks18": models.ks18_schema, "triangle": models.triangle_schema,
              "chain": lambda: models.chain_schema(args.length)}[name]()
    return one_in_k_instance(schema) if args.one_in_k else schema


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sheafdb", description=__doc__.splitlines()[0])
    p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="largest tuple enumeration allowed (default 2^24)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a built-in model or schema")
    g.add_argument("name", choices=["bell", "hardy", "ghz", "ks18", "triangle", "chain"])
    g.add_argument("--n", type=int, default=3, help="GHZ party count")
    g.add_argument("--length", type=int, default=3, help="chain length")
    g.add_argument("--one-in-k", action="store_true",
                   help="for schemas, emit the ONE-IN-k instance instead")

    for name, help_ in (("check", "compatibility (no-signalling) report"),
                        ("glue", "universal relation or hidden-variable model"),
                        ("classify", "place the model in the contextuality hierarchy"),
                        ("dump-system", "print the hidden-variable linear system")):
        c = sub.add_parser(name, help=help_)
        c.add_argument("file", help="model file, or - for stdin")

    s = sub.add_parser("schema", help="instance-independent schema analyses")
    s.add_argument("file")
    s.add_argument("--acyclicity", action="store_true")
    s.add_argument("--parity", action="store_true")
    s.add_argument("--ks", action="store_true")

    q = sub.add_parser("quantum", help="Born-rule model from a Bell or GHZ state")
    q.add_argument("state", choices=["bell", "ghz"])
    q.add_argument("--n", type=int, default=3, help="GHZ party count")
    q.add_argument("--angles", nargs="+", metavar="PARTY",
                   help="one 'name=angle,name=angle' spec per party, e.g. \"a=0,a'=pi/3\"")
    q.add_argument("--rationalize", type=int, metavar="N",
                   help="snap probabilities to rationals with denominator <= N")

    r = sub.add_parser("sample", help="random compatible instance on an acyclic schema")
    r.add_argument("file")
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--max-denominator", type=int, default=64)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = make_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        if args.command == "generate":
            obj = build_generated(args)
            text = serialize_model(obj) if isinstance(obj, EmpiricalModel) else serialize_schema(obj)
            print(text, file=stdout)
            return EXIT_OK
        if args.command == "quantum":
            print(serialize_model(build_quantum(args)), file=stdout)
            return EXIT_OK
        text, digest = _read(args.file)
        if args.command == "sample":
            schema = parse_schema(text)
            print(serialize_model(generate_compatible_instance(
                schema, args.seed, args.max_denominator)), file=stdout)
            return EXIT_OK
        if args.command == "schema":
            result = cmd_schema(args, parse_schema(text))
        else:
            model = parse_model(text)
            if args.command == "dump-system":
                from .gluing import hidden_variable_system
                print(hidden_variable_system(model, args.cap).dump(), end="", file=stdout)
                return EXIT_OK
            result = {"check": cmd_check, "glue": cmd_glue,
                      "classify": cmd_classify}[args.command](args, model)
        report = {
            "command": args.command,
            "argv": list(argv) if argv is not None else sys.argv[1:],
            "input": {"path": args.file, "sha256": digest},
            "result": result,
            "elapsed_seconds": round(time.perf_counter() - start, 6),
        }
        print(json.dumps(report, indent=1, ensure_ascii=False), file=stdout)
        return EXIT_OK
    except EnumerationTooLarge as e:
        print(f"sheafdb: {e}", file=stderr)
        return EXIT_CAP
    except (MalformedInput, NotAcyclic, NoNearbyRational, ValueError) as e:
        print(f"sheafdb: {e}", file=stderr)
        return EXIT_MALFORMED
    except SheafDBError as e:
        print(f"sheafdb: {e}", file=stderr)
        return EXIT_MALFORMED


def main(argv=None) -> int:
    return run(argv)
