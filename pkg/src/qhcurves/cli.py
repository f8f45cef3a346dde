"""Command-line front end: curve files in, deterministic JSON or text reports out.

A curve file is JSON::

    {"name": "cusp",
     "variables": ["x", "y"],
     "branches": [{"x": {"2": "1"}, "y": {"3": "1"}}],
     "equations": ["y^2 - x^3"],
     "options": {"order": 16}}

A series is either ``{exponent: rational}`` (an exact polynomial; ``{}`` is
zero) or ``{"num": [...], "den": [...]}`` with coefficient lists in
increasing degree and ``den[0] != 0``.  Rationals are integers or strings
such as ``"-3/4"``; floats are rejected.

Exit codes: 0 success, 1 computation error, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Sequence

from gmpy2 import mpq

from .algebra import (DEFAULT_MAX_ORDER, DEFAULT_ORDER, AlgebraModel, CurveSpec, SeriesSource,
                      build_algebra, verify_equations)
from .criteria import (jacobian_ideal, module_MA, qh_report, rho_invariant, rho_prime_invariant,
                       ring_colength, vasconcelos_step)
from .errors import ComputationError, CurveError, InputError, SchemaError
from .ideals import (dual_ideal, endo_ring, length_quotient, maximal, module_generators,
                     module_isomorphic, normalization, unit_ideal)
from .polynomial import Polynomial
from .semigroup import is_symmetric, semigroup_of_curve, symmetry_violations
from .series import Rational, format_rational, rational, series_tdt

log = logging.getLogger(__name__)

COMMANDS = ("analyze", "semigroup", "gorenstein", "qh", "rho", "ideals", "normalize-step",
            "verify-appendix")

APPENDIX_EQUATION = "x^4 - y*(x+y)^4"
APPENDIX_JET = {5: 5, 6: 6, 7: 7}


# ---------------------------------------------------------------- parsing

def _series_spec(value: Any, where: str) -> SeriesSource:
    if not isinstance(value, dict):
        raise SchemaError("series must be an object", where)
    try:
        if "num" in value or "den" in value:
            extra = set(value) - {"num", "den"}
            if extra:
                raise SchemaError(f"unexpected keys {sorted(extra)}", where)
            num, den = value.get("num", []), value.get("den", [1])
            if not isinstance(num, list) or not isinstance(den, list) or not den:
                raise SchemaError("num and den must be coefficient lists, den non-empty", where)
            return SeriesSource(tuple(rational(c) for c in num), tuple(rational(c) for c in den))
        terms = {}
        for exp, c in value.items():
            try:
                e = int(exp)
            except ValueError:
                raise SchemaError(f"exponent {exp!r} is not an integer", where) from None
            terms[e] = rational(c)
        return SeriesSource.polynomial(terms)
    except SchemaError as exc:
        if exc.field is not None:
            raise
        raise SchemaError(str(exc), where) from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc), where) from None


def parse_curve_file(data: bytes | str) -> tuple[CurveSpec, dict]:
    """Validate a curve file; returns the curve and its ``options`` object."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    unknown = set(doc) - {"name", "variables", "branches", "equations", "options"}
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}")
    name = doc.get("name", "curve")
    if not isinstance(name, str):
        raise SchemaError("must be a string", "name")
    branches = doc.get("branches")
    if not isinstance(branches, list) or not branches:
        raise SchemaError("must be a non-empty list", "branches")
    variables = doc.get("variables")
    if variables is None:
        first = branches[0]
        if not isinstance(first, dict):
            raise SchemaError("must be an object", "branches[0]")
        variables = list(first)
    if (not isinstance(variables, list) or not variables
            or not all(isinstance(v, str) and v.isidentifier() for v in variables)
            or len(set(variables)) != len(variables)):
        raise SchemaError("must be a list of distinct identifiers", "variables")

    param = []
    for i, branch in enumerate(branches):
        where = f"branches[{i}]"
        if not isinstance(branch, dict):
            raise SchemaError("must be an object", where)
        missing = [v for v in variables if v not in branch]
        extra = [v for v in branch if v not in variables]
        if missing or extra:
            raise SchemaError(f"coordinates must be exactly {variables} "
                              f"(missing {missing}, unexpected {extra})", where)
        param.append(tuple(_series_spec(branch[v], f"{where}.{v}") for v in variables))

    equations = doc.get("equations")
    if equations is not None:
        if not isinstance(equations, list) or not all(isinstance(e, str) for e in equations):
            raise SchemaError("must be a list of strings", "equations")
        polys = []
        for k, text in enumerate(equations):
            try:
                polys.append(Polynomial.parse(text, variables))
            except SchemaError as exc:
                raise SchemaError(str(exc), f"equations[{k}]") from None
        equations = tuple(polys) or None

    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise SchemaError("must be an object", "options")
    for key in ("order", "max_order"):
        if key in options and (not isinstance(options[key], int) or options[key] < 2):
            raise SchemaError("must be an integer >= 2", f"options.{key}")
    spec = CurveSpec(tuple(param), tuple(variables), equations, name)
    return spec, options


# ---------------------------------------------------------------- rendering

def to_plain(value: Any) -> Any:
    """JSON-ready form: rationals as strings, tuples as lists, witnesses as term lists."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Rational):
        return format_rational(value)
    if isinstance(value, float):
        if value == float("inf"):
            return "inf"
        raise TypeError("floats are never reported")
    if isinstance(value, dict):
        if value and all(isinstance(k, tuple) for k in value):
            # sparse vector {(exponent, branch): coeff}
            return [[e, i, format_rational(c)] for (e, i), c in
                    sorted(value.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_plain(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    raise TypeError(f"cannot report {type(value).__name__}")


def emit_report(doc: dict, fmt: str = "json") -> bytes:
    plain = to_plain(doc)
    if fmt == "json":
        return (json.dumps(plain, sort_keys=True, ensure_ascii=False) + "\n").encode()
    lines = []
    for key in sorted(plain):
        lines.append(f"{key}: {json.dumps(plain[key], sort_keys=True, ensure_ascii=False)}")
    return ("\n".join(lines) + "\n").encode()


# ---------------------------------------------------------------- commands

def _base(model: AlgebraModel) -> dict:
    return {"name": model.name, "r": model.r, "delta": model.delta, "tau": model.tau}


def cmd_semigroup(model: AlgebraModel) -> dict:
    table = semigroup_of_curve(model)
    return {**_base(model), "gamma_box": table.box(), "symmetric": is_symmetric(table),
            "symmetry_violations": symmetry_violations(table)}


def cmd_gorenstein(model: AlgebraModel) -> dict:
    table = semigroup_of_curve(model)
    sym = is_symmetric(table)
    dual_len = length_quotient(dual_ideal(maximal(model)), unit_ideal(model)) \
        if not model.smooth else 0
    return {**_base(model), "gorenstein": sym, "symmetric": sym,
            "length_dual_maximal": dual_len}


def cmd_qh(model: AlgebraModel) -> dict:
    rep = qh_report(model)
    keys = ("qh_exact_differentials", "qh_unit_multiplication", "unit_witness", "qh_rho_prime",
            "qh_rho", "syntactic_weights", "quasihomogeneous", "gorenstein", "checks")
    return {**_base(model), **{k: getattr(rep, k) for k in keys}}


def cmd_rho(model: AlgebraModel) -> dict:
    out = {**_base(model), "rho_prime": rho_prime_invariant(model)}
    spec = model.spec
    out["rho"] = rho_invariant(model) if spec is not None and spec.equations else None
    return out


def cmd_ideals(model: AlgebraModel) -> dict:
    A = unit_ideal(model)
    out = {**_base(model), "length_normalization": length_quotient(normalization(model), A)}
    if model.smooth:
        return out
    m = maximal(model)
    M = module_MA(model)
    out.update({
        "maximal": {"lo": m.lo, "colength": m.colength(), "generators": len(module_generators(m)),
                    "length_dual": length_quotient(dual_ideal(m), A),
                    "length_endo": length_quotient(endo_ring(m), A)},
        "module_MA": {"lo": M.lo, "colength": M.colength(),
                      "generators": len(module_generators(M)),
                      "length_endo": length_quotient(endo_ring(M), A),
                      "isomorphic_to_maximal": module_isomorphic(m, M).isomorphic},
    })
    spec = model.spec
    if spec is not None and spec.equations:
        J = jacobian_ideal(model)
        out["jacobian"] = {"lo": J.lo, "colength": J.colength(),
                           "generators": len(module_generators(J))}
    return out


def cmd_normalize_step(model: AlgebraModel) -> dict:
    step = vasconcelos_step(model)
    fixed = step is model
    return {**_base(model), "fixed_point": fixed,
            "colength_step": 0 if fixed else ring_colength(step, model),
            "step_delta": step.delta,
            "step_is_normalization": step.delta == (0,) * model.r,
            "length_normalization": length_quotient(normalization(model), unit_ideal(model))}


def cmd_analyze(model: AlgebraModel) -> dict:
    rep = qh_report(model)
    doc = rep.to_dict()
    doc["gamma_box"] = doc.pop("gamma")
    doc["certified_conductor"] = model.stability_certified
    return doc


def appendix_curve() -> CurveSpec:
    x = SeriesSource((0, 0, 0, 0, 0, 1), (1, -1))
    y = SeriesSource.polynomial({4: 1})
    eq = Polynomial.parse(APPENDIX_EQUATION, ("x", "y"))
    return CurveSpec(((x, y),), ("x", "y"), (eq,), "appendix")


def cmd_verify_appendix(model: AlgebraModel) -> dict:
    spec = model.spec
    jet = series_tdt(spec.series(0, 0, 8)).truncate(8).terms()
    M = module_MA(model)
    m = maximal(model)
    iso = module_isomorphic(M, m)
    rep = qh_report(model)
    checks = {
        "equations_vanish": verify_equations(spec, max(model.moduli)),
        "tdt_x_jet": dict(jet) == {e: mpq(c) for e, c in APPENDIX_JET.items()},
        "M_not_isomorphic_to_m": not iso.isomorphic,
        "exact_differentials_false": rep.qh_exact_differentials is False,
        "unit_multiplication_false": rep.qh_unit_multiplication is False,
        "rho_prime_criterion_false": rep.qh_rho_prime is False,
        "rho_criterion_false": rep.qh_rho is False,
        "rho_equals_rho_prime": rep.rho == rep.rho_prime,
        "rho_at_least_2": rep.rho is not None and rep.rho >= 2,
    }
    return {"name": "appendix", "delta": model.delta, "tdt_x_jet": {e: jet[e] for e in sorted(jet)},
            "rho": rep.rho, "rho_prime": rep.rho_prime, "checks": checks,
            "ok": all(checks.values())}


HANDLERS = {
    "analyze": cmd_analyze,
    "semigroup": cmd_semigroup,
    "gorenstein": cmd_gorenstein,
    "qh": cmd_qh,
    "rho": cmd_rho,
    "ideals": cmd_ideals,
    "normalize-step": cmd_normalize_step,
    "verify-appendix": cmd_verify_appendix,
}


def run_command(cmd: str, spec: CurveSpec | None, options: dict | None = None) -> dict:
    """Run one pipeline; with ``options["certify"]`` everything is recomputed at doubled order."""
    options = options or {}
    order = options.get("order", DEFAULT_ORDER)
    max_order = options.get("max_order", DEFAULT_MAX_ORDER)
    if cmd not in HANDLERS:
        raise SchemaError(f"unknown command {cmd!r}", "command")
    if cmd == "verify-appendix":
        spec = appendix_curve()
    model = build_algebra(spec, order, max_order)
    doc = HANDLERS[cmd](model)
    if options.get("certify"):
        doubled = 2 * max(model.moduli)
        again = HANDLERS[cmd](build_algebra(spec, doubled, max(max_order, 2 * doubled)))
        if to_plain(again) != to_plain(doc):
            raise ComputationError("results changed at doubled truncation order")
        doc = {**doc, "certified": True}
    return doc


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qhcurves", description="Exact invariants and quasihomogeneity tests for curve singularities")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("file", nargs="?", help="curve description (JSON); '-' reads stdin")
    parser.add_argument("--order", type=int, default=None, help=f"initial truncation order (default {DEFAULT_ORDER})")
    parser.add_argument("--max-order", type=int, default=None,
                        help=f"cap for order doubling (default {DEFAULT_MAX_ORDER})")
    parser.add_argument("--certify", action="store_true", help="recompute at doubled order and compare")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    out = sys.stdout.buffer
    try:
        spec, options = None, {}
        if args.command != "verify-appendix":
            if args.file is None:
                raise SchemaError("a curve file is required", "file")
            try:
                data = sys.stdin.buffer.read() if args.file == "-" else open(args.file, "rb").read()
            except OSError as exc:
                raise SchemaError(str(exc), "file") from None
            spec, options = parse_curve_file(data)
        if args.order is not None:
            options["order"] = args.order
        if args.max_order is not None:
            options["max_order"] = args.max_order
        for key in ("order", "max_order"):
            if key in options and options[key] < 2:
                raise SchemaError("must be at least 2", key)
        options["certify"] = args.certify
        doc = run_command(args.command, spec, options)
    except InputError as exc:
        out.write(emit_report({"error": type(exc).__name__, "message": str(exc)}, "json"))
        return 2
    except (CurveError, ArithmeticError) as exc:
        out.write(emit_report({"error": type(exc).__name__, "message": str(exc)}, "json"))
        return 1
    out.write(emit_report(doc, args.format))
    if args.command == "verify-appendix" and not doc["ok"]:
        return 1
    return 0
