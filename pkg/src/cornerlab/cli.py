"""Command-line front end.

Exit codes: 0 success, 1 mathematical negative (with witness), 2 input
error, 3 a search or iteration cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from cornerlab import acceptance, examples, exactlp, gjfun, hull, lift
from cornerlab.model import InstanceError, MixedInstance, PureInstance, instance_from_json
from cornerlab.numctx import ComparisonCapExceeded, ContextMismatch

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _env_cap(default: int) -> int:
    env = os.environ.get("CORNERLAB_CAP")
    if env is None:
        return default
    try:
        return int(env)
    except ValueError:
        raise InputError(f"CORNERLAB_CAP must be an integer, got {env!r}") from None


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def _point(text: str) -> list[Fraction]:
    """``"[1/5, 2/3]"`` or ``"1/5,2/3"``."""
    body = text.strip().removeprefix("[").removesuffix("]")
    if not body.strip():
        return []
    return [_frac(t.strip().strip('"')) for t in body.split(",")]


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e})") from None


def _fr(v) -> str:
    return str(Fraction(v))


# ---------------------------------------------------------------------------
# reports


def corner_report(cp: hull.CornerPolyhedron, with_facets: bool) -> dict:
    out = {
        "complete": cp.complete,
        "degree_bounds": {"points": cp.bounds.points, "rays": cp.bounds.rays},
        "E": [list(e) for e in cp.E],
        "rays": [list(r) for r in cp.rays],
        "aff": {"Theta": [[_fr(v) for v in row] for row in cp.theta], "d": [_fr(v) for v in cp.d]},
        "rec": None, "rationality": None, "facets": None,
    }
    if cp.E:
        rec = hull.recession_cone(cp)
        out["rec"] = {"Theta": [[_fr(v) for v in row] for row in rec.theta],
                      "generators": [list(g) for g in rec.generators]}
        if cp.complete:
            r = hull.rationality_report(cp)
            out["rationality"] = {"P_rational": r.P_rational, "rec_is_orthant": r.rec_is_orthant,
                                  "full_dimensional": r.full_dimensional, "dimension": r.dimension,
                                  "closure_equals_conv": r.closure_equals_conv}
            if with_facets:
                out["facets"] = [{"coeffs": [_fr(v) for v in f.coeffs], "rhs": _fr(f.rhs)} for f in hull.facets(cp)]
    return out


# ---------------------------------------------------------------------------
# commands: each returns (exit code, result dict)


def cmd_corner_compute(a) -> tuple[int, dict]:
    inst = instance_from_json(_load_json(a.instance))
    cp = hull.build(inst, cap=a.cap, node_cap=a.node_cap or _env_cap(hull.DEFAULT_NODE_CAP))
    rep = corner_report(cp, a.facets)
    rep["instance"] = inst.to_json()
    return (EXIT_OK if cp.complete else EXIT_CAP), rep


def _function(path: str):
    return gjfun.function_from_json(_load_json(path))


def _pwl(f) -> gjfun.PwlPeriodic:
    return f.base if isinstance(f, gjfun.ShiftedFunction) else f


def cmd_fn_check(a) -> tuple[int, dict]:
    f = _pwl(_function(a.function))
    b = _frac(a.b)
    rep = gjfun.check_minimal_pure(f, b).to_json()
    if rep["minimal"]:
        _, psi = gjfun.check_liftable(f, b)
        rep["liftable"] = True
        rep["psi"] = psi.to_json()
        rep["mixed"] = gjfun.check_mixed_minimal(psi, f, b, 1).to_json()
        return EXIT_OK, rep
    return EXIT_NEGATIVE, rep


def cmd_fn_lift_slope(a) -> tuple[int, dict]:
    f = _pwl(_function(a.function))
    sub, wit = gjfun.check_subadditive(f)
    if not sub or f.values[0] != 0:
        return EXIT_NEGATIVE, {"subadditive": sub, "zero_at_origin": f.values[0] == 0,
                               "witness": None if wit is None else [_fr(wit[0]), _fr(wit[1])]}
    psi = gjfun.slope_lift(f)
    return EXIT_OK, {"psi": psi.to_json(), "lipschitz": _fr(psi.lipschitz), "sublinear": psi.is_sublinear()}


def cmd_fn_extract_theta(a) -> tuple[int, dict]:
    g = _function(a.function)
    if not isinstance(g, gjfun.ShiftedFunction):
        raise InputError("extract-theta needs a function with a 'shift' entry")
    if a.K <= 0:
        raise InputError("--K must be positive")
    est = gjfun.extract_theta(g, a.K)
    res = {s: e.to_json() for s, e in est.items()}
    ok = all(e.within_bound() for e in est.values())
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"estimates": res}


def _lift_data(path: str) -> lift.LiftData:
    obj = _load_json(path)
    inst = instance_from_json(obj)
    if not isinstance(inst, MixedInstance):
        inst = MixedInstance(inst.b, inst.P, lift.unit_directions(inst.n))
    h = [_frac(str(v)) for v in obj.get("h", [])]
    d = [_frac(str(v)) for v in obj.get("d", [])]
    return lift.LiftData(inst, h, d)


def cmd_lift_eval(a) -> tuple[int, dict]:
    ld = _lift_data(a.data)
    p = _point(a.point)
    cap = a.node_cap or _env_cap(exactlp.DEFAULT_NODE_CAP)
    return EXIT_OK, {"point": [_fr(v) for v in p], "psi": _fr(lift.trivial_psi(ld, p)),
                     "pi": _fr(lift.trivial_pi(ld, p, cap))}


def cmd_lift_validate(a) -> tuple[int, dict]:
    ld = _lift_data(a.data)
    res = lift.validity_oracle(ld, _frac(a.alpha), a.node_cap or _env_cap(exactlp.DEFAULT_NODE_CAP))
    code = EXIT_CAP if res.valid is None else (EXIT_OK if res.valid else EXIT_NEGATIVE)
    return code, res.to_json()


def _parse_facet(text: str) -> hull.Facet:
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"bad facet JSON: {e}") from None
        return hull.Facet(tuple(_frac(str(v)) for v in obj["coeffs"]), _frac(str(obj.get("rhs", 1))))
    if ">=" in text:
        lhs, rhs = text.split(">=", 1)
        return hull.Facet(tuple(_point(lhs)), _frac(rhs))
    return hull.Facet(tuple(_point(text)), Fraction(1))


def cmd_lift_facet_dominate(a) -> tuple[int, dict]:
    inst = instance_from_json(_load_json(a.instance))
    cap = a.node_cap or _env_cap(exactlp.DEFAULT_NODE_CAP)
    cp = hull.build(inst, node_cap=_env_cap(hull.DEFAULT_NODE_CAP))
    facet = _parse_facet(a.facet)
    if len(facet.coeffs) != len(inst.P):
        raise InputError("facet needs one coefficient per entry of P")
    try:
        dom = lift.facet_dominate(cp, facet, node_cap=cap)
    except lift.LiftError as e:
        raise InputError(str(e)) from None
    rep = dom.to_json()
    ok = dom.dominates and dom.data_validity.valid and dom.tuple_validity.valid
    return (EXIT_OK if ok else EXIT_NEGATIVE), rep


def cmd_lift_separate(a) -> tuple[int, dict]:
    inst = instance_from_json(_load_json(a.instance))
    cp = hull.build(inst, node_cap=_env_cap(hull.DEFAULT_NODE_CAP))
    y = _point(a.point)
    if len(y) != len(inst.P):
        raise InputError("point needs one entry per element of P")
    out = lift.separate_from_closure(cp, y)
    if out == "member":
        return EXIT_OK, {"member": True}
    return EXIT_OK, {"member": False, "d": [_fr(v) for v in out.d], "alpha": _fr(out.alpha)}


def cmd_examples_not_closed(a) -> tuple[int, dict]:
    w = examples.not_closed_sequence(_frac(a.eps), a.omega, _frac(a.b))
    return (EXIT_OK if w.verified else EXIT_NEGATIVE), w.to_json()


def cmd_examples_pure_integer(a) -> tuple[int, dict]:
    rep = examples.pure_integer_example(_frac(a.b), a.omega)
    return (EXIT_OK if rep.verified else EXIT_NEGATIVE), rep.to_json()


def cmd_selftest(a) -> tuple[int, dict]:
    only = [int(t) for t in a.only.split(",")] if a.only else None
    results = acceptance.run_all(only)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.ok for r in results)
    return (EXIT_OK if ok else EXIT_NEGATIVE), {"criteria": [r.to_json() for r in results], "all_passed": ok}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")
    common.add_argument("--node-cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="cornerlab", description="Exact corner polyhedra and cut-generating functions.")
    sub = p.add_subparsers(dest="group", required=True)

    corner = sub.add_parser("corner").add_subparsers(dest="cmd", required=True)
    c = corner.add_parser("compute", parents=[common])
    c.add_argument("--instance", required=True)
    c.add_argument("--cap", type=int, default=None, help="maximum total degree to explore")
    c.add_argument("--facets", action="store_true")
    c.set_defaults(func=cmd_corner_compute)

    fn = sub.add_parser("fn").add_subparsers(dest="cmd", required=True)
    c = fn.add_parser("check", parents=[common])
    c.add_argument("--function", required=True)
    c.add_argument("--b", required=True)
    c.set_defaults(func=cmd_fn_check)
    c = fn.add_parser("lift-slope", parents=[common])
    c.add_argument("--function", required=True)
    c.set_defaults(func=cmd_fn_lift_slope)
    c = fn.add_parser("extract-theta", parents=[common])
    c.add_argument("--function", required=True)
    c.add_argument("--K", type=int, default=1000)
    c.set_defaults(func=cmd_fn_extract_theta)

    lf = sub.add_parser("lift").add_subparsers(dest="cmd", required=True)
    c = lf.add_parser("eval", parents=[common])
    c.add_argument("--data", required=True)
    c.add_argument("--point", required=True)
    c.set_defaults(func=cmd_lift_eval)
    c = lf.add_parser("validate", parents=[common])
    c.add_argument("--data", required=True)
    c.add_argument("--alpha", default="1")
    c.set_defaults(func=cmd_lift_validate)
    c = lf.add_parser("facet-dominate", parents=[common])
    c.add_argument("--instance", required=True)
    c.add_argument("--facet", required=True, help='"1/2,1" (rhs 1), "1/2,1>=1" or JSON {"coeffs": [...], "rhs": "1"}')
    c.set_defaults(func=cmd_lift_facet_dominate)
    c = lf.add_parser("separate", parents=[common])
    c.add_argument("--instance", required=True)
    c.add_argument("--point", required=True)
    c.set_defaults(func=cmd_lift_separate)

    ex = sub.add_parser("examples").add_subparsers(dest="cmd", required=True)
    c = ex.add_parser("not-closed", parents=[common])
    c.add_argument("--omega", default="sqrt2")
    c.add_argument("--eps", default="1/10")
    c.add_argument("--b", default="1/2")
    c.set_defaults(func=cmd_examples_not_closed)
    c = ex.add_parser("pure-integer", parents=[common])
    c.add_argument("--omega", default="sqrt2")
    c.add_argument("--b", default="1/2")
    c.set_defaults(func=cmd_examples_pure_integer)

    c = sub.add_parser("selftest", parents=[common])
    c.add_argument("--only", default=None, help="comma-separated criterion numbers")
    c.set_defaults(func=cmd_selftest)
    return p


def _render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(f"{pad}- {json.dumps(v)}" for v in obj)
    return pad + json.dumps(obj)


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    t0 = time.perf_counter()
    try:
        code, result = a.func(a)
        status = {EXIT_OK: "ok", EXIT_NEGATIVE: "negative", EXIT_CAP: "cap-exceeded"}[code]
    except (InputError, InstanceError, ContextMismatch, KeyError, ValueError, TypeError,
            hull.EmptyCornerError, lift.LiftError) as e:
        code, status, result = EXIT_INPUT, "input-error", {"error": f"{type(e).__name__}: {e}"}
    except (hull.IncompleteError, lift.CapExceeded, ComparisonCapExceeded) as e:
        code, status, result = EXIT_CAP, "cap-exceeded", {"error": f"{type(e).__name__}: {e}"}
    report = {"command": argv, "status": status, "exit_code": code, "result": result}
    if not a.no_timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 6)
    if a.format == "text":
        print(_render_text(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return code


def main() -> None:
    sys.exit(run())
