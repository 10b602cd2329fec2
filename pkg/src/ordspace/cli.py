"""Command-line front end.

Every command reads one space file and writes a JSON report (stdout or
``--out``).  Reports embed their inputs, so ``ordspace verify report.json``
can re-check the certificates without the original files.

Exit codes: 0 success, 2 parse error, 3 failed precondition (or failed
verification), 4 capability limit, 5 tolerance not reached.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import arch, funcsys, norms, order
from . import cone as cn
from .core import fmt_scalar, fmt_vector
from .errors import OrderSpaceError, ParseError, PreconditionError
from .io import canonical, digest, jsonable, parse_element, parse_space, space_to_json

DEFAULT_TOL = 1e-6


# ------------------------------------------------------------ serialization


def _terms_json(terms):
    return [{"lambda": [a, b], "element": list(h), "kind": k} for (a, b), h, k in terms]


def interval_json(iv: norms.CertifiedInterval) -> dict:
    certs = {}
    for side, c in iv.certificates.items():
        c = dict(c)
        if "decomposition" in c:
            c["decomposition"] = _terms_json(c["decomposition"])
        certs[side] = c
    return jsonable(
        {
            "lower": iv.lower,
            "upper": iv.upper,
            "lower_float": float(iv.lower),
            "upper_float": float(iv.upper),
            "exact": iv.exact,
            "tol": iv.tol,
            "status": iv.status,
            "method_notes": iv.method_notes,
            "certificates": certs,
        }
    )


def _F(s):
    return Fraction(s)


def _vecF(xs):
    return tuple(Fraction(x) for x in xs)


def interval_from_json(obj) -> norms.CertifiedInterval:
    certs = {}
    for side, c in obj["certificates"].items():
        c = dict(c)
        if "decomposition" in c:
            c["decomposition"] = tuple(
                ((_F(t["lambda"][0]), _F(t["lambda"][1])), _vecF(t["element"]), t["kind"]) for t in c["decomposition"]
            )
        for key in ("bound", "value", "minimal_norm_lower"):
            if key in c:
                c[key] = _F(c[key])
        if c.get("functional") is not None:
            c["functional"] = tuple(_vecF(g) for g in c["functional"])
        if c.get("state") is not None:
            c["state"] = _vecF(c["state"])
        certs[side] = c
    return norms.CertifiedInterval(_F(obj["lower"]), _F(obj["upper"]), float(obj["tol"]), obj["method_notes"], certs, obj["status"])


def minimal_json(m: norms.MinimalNorm) -> dict:
    return jsonable(
        {
            "value": m.value,
            "squared": m.squared,
            "lower": m.lower,
            "upper": m.upper,
            "witness": m.witness,
        }
    )


# ---------------------------------------------------------------- commands


def _element(args, space, blocks, required=True):
    src = args.element if getattr(args, "element", None) is not None else blocks.get("element")
    if src is None:
        if required:
            raise ParseError("no element given (use --element or an 'element' block)")
        return None
    return parse_element(src, space)


def _ideal(args, blocks):
    if getattr(args, "ideal", None):
        try:
            raw = json.loads(args.ideal)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--ideal must be a JSON list of vectors: {exc}") from exc
        return [tuple(Fraction(str(x)) for x in v) for v in raw]
    return blocks.get("ideal", [])


def _quotient_json(q: arch.QuotientResult) -> dict:
    return jsonable(
        {
            "projection": q.projection,
            "section": q.section,
            "kernel": q.kernel,
            "identity": q.is_identity,
            "space": space_to_json(q.space),
            "notes": q.notes,
        }
    )


def cmd_validate(args, space, blocks, inputs):
    report = order.check_space(space)
    result = {"valid": report["valid"], "checks": report["checks"], "r_witnesses": report["r_witnesses"]}
    if report["valid"]:
        result["archimedean"] = order.is_archimedean(space)
    if "violated_row" in report:
        result["violated_row"] = report["violated_row"]
    code = 0 if report["valid"] else 3
    return result, {}, code


def cmd_archimedean(args, space, blocks, inputs):
    order.validate_space(space)
    arch_ok = order.is_archimedean(space)
    result = {"archimedean": arch_ok}
    if space.polyhedral:
        D, N = arch.compute_D_and_N(space)
        result["N"] = [fmt_vector(v) for v in N]
        w = order.non_archimedean_witness(space)
        if w is not None:
            samples = [Fraction(1, 2**k) for k in range(12)]
            result["witness"] = {
                "h": fmt_vector(w),
                "h_in_cone": cn.member(space.cone, w),
                "r_e_plus_h_in_cone_for_r": [
                    fmt_scalar(r) for r in samples if cn.member(space.cone, tuple(r * a + b for a, b in zip(space.unit, w)))
                ],
            }
    return result, {}, 0


def cmd_seminorm(args, space, blocks, inputs):
    order.validate_space(space)
    v = _element(args, space, blocks)
    if any(v.im):
        raise PreconditionError("the order seminorm is defined on hermitian elements")
    iv = order.state_interval(space, v.re)
    result = {"alpha": iv.alpha, "beta": iv.beta, "seminorm": max(abs(iv.alpha), abs(iv.beta))}
    certs = {"alpha_state": iv.alpha_state, "beta_state": iv.beta_state}
    notes = ["computed on the closure of the cone"] if not cn.is_closed(space.cone) else []
    return jsonable(result), jsonable(certs), 0, notes


def cmd_states(args, space, blocks, inputs):
    order.validate_space(space)
    sp = order.state_polytope(space)
    result = {
        "extreme_states": [fmt_vector(f) for f in sp.extreme_states],
        "constraints": [{"row": fmt_vector(g), "rhs": fmt_scalar(b)} for g, b in sp.constraints],
    }
    return result, {}, 0


def cmd_norm(args, space, blocks, inputs):
    order.validate_space(space)
    v = _element(args, space, blocks)
    kind = args.kind
    kw = {"max_rounds": args.max_rounds} if space.polyhedral else {}
    if kind == "m":
        m = norms.minimal_norm(space, v, args.tol)
        out = minimal_json(m)
        code = 0
        if m.squared is None and m.upper - m.lower > args.tol:
            code = 5
        return out, {}, code
    if kind == "M":
        iv = norms.maximal_norm(space, v, args.tol, **kw)
    elif kind == "dec":
        iv = norms.decomposition_norm(space, v, args.tol, **kw)
    else:
        if args.t is None:
            raise ParseError("--kind t needs --t")
        t = float(args.t) if space.mode.value == "approx" else Fraction(args.t)
        iv = norms.convex_combination_norm(space, v, t, args.tol, **kw)
    out = interval_json(iv)
    return out, {}, 0 if iv.status == "ok" else 5


def cmd_archimedeanize(args, space, blocks, inputs):
    order.validate_space(space)
    return _quotient_json(arch.archimedeanize(space)), {}, 0


def cmd_quotient(args, space, blocks, inputs):
    order.validate_space(space)
    J = _ideal(args, blocks)
    inputs["ideal"] = [fmt_vector(v) for v in J]
    return _quotient_json(arch.quotient(space, J)), {}, 0


def cmd_arch_quotient(args, space, blocks, inputs):
    order.validate_space(space)
    J = _ideal(args, blocks)
    inputs["ideal"] = [fmt_vector(v) for v in J]
    return _quotient_json(arch.arch_quotient(space, J)), {}, 0


def cmd_embed(args, space, blocks, inputs):
    order.validate_space(space)
    emb = funcsys.kadison_embed(space)
    rep = funcsys.verify_embedding(space, emb, args.samples, args.seed)
    result = {"extreme_states": [fmt_vector(f) for f in emb.extreme_states], "verification": rep}
    return jsonable(result), {}, 0 if rep["passed"] else 3


def cmd_extend(args, space, blocks, inputs):
    order.validate_space(space)
    f = blocks.get("functional")
    if f is None:
        raise ParseError("extend-functional needs a 'functional' block")
    ext = order.extend_with_steps(space, f["basis"], f["values"])
    result = {
        "functional": fmt_vector(ext.functional.coeffs),
        "positive": order.is_positive_functional(space, ext.functional),
        "steps": [
            {"direction": fmt_vector(s.direction), "lower": fmt_scalar(s.lower), "gamma": fmt_scalar(s.gamma), "upper": fmt_scalar(s.upper)}
            for s in ext.steps
        ],
    }
    return result, {}, 0


def cmd_first_iso(args, space, blocks, inputs):
    order.validate_space(space)
    mp = blocks.get("map")
    if mp is None:
        raise ParseError("first-iso needs a 'map' block")
    order.validate_space(mp["target"])
    rep = arch.first_isomorphism(space, mp["matrix"], mp["target"])
    quo = rep.pop("quotient")
    rep["quotient"] = _quotient_json(quo)
    return jsonable(rep), {}, 0


COMMANDS = {
    "validate": cmd_validate,
    "archimedean-check": cmd_archimedean,
    "seminorm": cmd_seminorm,
    "states": cmd_states,
    "norm": cmd_norm,
    "archimedeanize": cmd_archimedeanize,
    "quotient": cmd_quotient,
    "arch-quotient": cmd_arch_quotient,
    "embed": cmd_embed,
    "extend-functional": cmd_extend,
    "first-iso": cmd_first_iso,
}


# ------------------------------------------------------------------ verify


def verify_report(report: dict) -> tuple[bool, list[str]]:
    """Re-check a report from its embedded inputs; returns ``(ok, messages)``."""
    inputs = report["inputs"]
    op = report["operation"]
    space, blocks = parse_space(inputs["space"])
    if "map" in inputs:
        blocks["map"] = parse_space({**inputs["space"], "map": inputs["map"]})[1]["map"]
    msgs = []
    res = report["result"]
    if op == "norm" and inputs["flags"].get("kind") in ("M", "dec") and space.polyhedral:
        v = parse_element(inputs["element"], space)
        iv = interval_from_json(res)
        ok = norms.check_interval(space, v, iv, inputs["flags"]["kind"])
        msgs.append(f"{inputs['flags']['kind']} certificates {'verified' if ok else 'FAILED'}")
        return ok, msgs
    if op == "norm" and inputs["flags"].get("kind") == "m" and space.polyhedral:
        v = parse_element(inputs["element"], space)
        f = _vecF(res["witness"])
        sq = Fraction(res["squared"])
        sp, w = norms._reduce(space, v)

        def mod2(g):
            return sum(a * b for a, b in zip(g, w.re)) ** 2 + sum(a * b for a, b in zip(g, w.im)) ** 2

        attained = (
            order.is_positive_functional(sp, f)
            and sum(a * b for a, b in zip(f, sp.unit)) == 1
            and mod2(f) == sq
        )
        # upper side through an independent vertex enumeration of the state polytope
        upper_ok = all(mod2(g) <= sq for g in order.state_polytope(sp).extreme_states)
        ok = attained and upper_ok
        msgs.append(f"minimal norm squared {fmt_scalar(sq)} {'verified' if ok else 'FAILED'}")
        return ok, msgs
    if op == "seminorm":
        v = parse_element(inputs["element"], space)
        alpha, beta = Fraction(res["alpha"]), Fraction(res["beta"])
        closed = cn.closure(space.cone)
        fa, fb = _vecF(report["certificates"]["alpha_state"]), _vecF(report["certificates"]["beta_state"])
        ok = cn.member(closed, tuple(x - alpha * e for x, e in zip(v.re, space.unit)))
        ok &= cn.member(closed, tuple(beta * e - x for x, e in zip(v.re, space.unit)))
        for f, val in ((fa, alpha), (fb, beta)):
            ok &= order.is_positive_functional(space, f)
            ok &= sum(a * b for a, b in zip(f, space.unit)) == 1
            ok &= sum(a * b for a, b in zip(f, v.re)) == val
        msgs.append(f"state interval [{res['alpha']}, {res['beta']}] {'verified' if ok else 'FAILED'}")
        return bool(ok), msgs
    # everything else: recompute deterministically and compare
    ns = argparse.Namespace(**inputs["flags"])
    ns.tol = float(ns.tol)
    ns.element = inputs.get("element")
    ns.ideal = json.dumps(inputs["ideal"]) if "ideal" in inputs else None
    if op == "extend-functional":
        blocks["functional"] = parse_space({**inputs["space"], "functional": inputs["functional"]})[1]["functional"]
    out = COMMANDS[op](ns, space, blocks, dict(inputs))
    again = jsonable(out[0])
    ok = canonical(again) == canonical(res)
    msgs.append(f"{op}: recomputation {'matches' if ok else 'DIFFERS'}")
    return ok, msgs


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordspace", description="Ordered *-vector space toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("space", help="space file (JSON)")
        s.add_argument("--out", help="write the report here instead of stdout")
        s.add_argument("--tol", type=float, default=DEFAULT_TOL)
        s.add_argument("--max-rounds", dest="max_rounds", type=int, default=40)
        if name in ("norm", "seminorm"):
            s.add_argument("--element", help="element string, e.g. '(1,0)+(0,1)i' or 'E12'")
        if name == "norm":
            s.add_argument("--kind", choices=["m", "M", "dec", "t"], required=True)
            s.add_argument("--t", help="weight of the minimal norm for --kind t")
        if name in ("quotient", "arch-quotient"):
            s.add_argument("--ideal", help="JSON list of basis vectors of J")
        if name == "embed":
            s.add_argument("--samples", type=int, default=100)
            s.add_argument("--seed", type=int, default=0)
    v = sub.add_parser("verify")
    v.add_argument("report")
    return p


def _emit(text, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            try:
                report = json.loads(Path(args.report).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ParseError(f"cannot read report: {exc}") from exc
            try:
                ok, msgs = verify_report(report)
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                ok, msgs = False, [f"malformed report: {type(exc).__name__}: {exc}"]
            _emit(canonical({"operation": "verify", "verified": ok, "messages": msgs}), None)
            return 0 if ok else 3
        path = Path(args.space)
        try:
            raw = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read {path}: {exc}") from exc
        start = time.perf_counter()
        space, blocks = parse_space(raw, path.parent)
        flags = {"tol": args.tol, "max_rounds": args.max_rounds}
        for key in ("kind", "t", "samples", "seed"):
            if hasattr(args, key):
                flags[key] = getattr(args, key)
        inputs = {"space": space_to_json(space), "flags": flags}
        element = getattr(args, "element", None)
        if element is None and "element" in raw:
            element = raw["element"]
        if element is not None:
            inputs["element"] = element
        if "map" in raw:
            m = dict(raw["map"])
            if isinstance(m["target"], str):
                m["target"] = json.loads((path.parent / m["target"]).read_text())
            inputs["map"] = m
        if "functional" in raw:
            inputs["functional"] = raw["functional"]
        out = COMMANDS[args.command](args, space, blocks, inputs)
        result, certs, code = out[:3]
        warnings = out[3] if len(out) > 3 else []
        report = {
            "operation": args.command,
            "inputs": inputs,
            "inputs_digest": digest(inputs),
            "result": result,
            "certificates": certs,
            "warnings": warnings,
            "timing": {"seconds": round(time.perf_counter() - start, 6)},
        }
        _emit(canonical(jsonable(report)), args.out)
        return code
    except OrderSpaceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        report = getattr(exc, "report", None)
        if report is not None:
            sys.stderr.write(canonical(jsonable(report)) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
