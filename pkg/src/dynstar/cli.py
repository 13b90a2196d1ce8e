"""Batch command-line front-end.

Each subcommand wraps one verification pipeline and emits a deterministic
JSON report. Exit status: 0 when every requested check passes, 1 when a
check fails (the report carries the residuals), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from . import classify as cls
from . import rootsystems as rsys
from .enveloping import PBWAlgebra
from .lie import realize_lie_algebra, sl2, tensor2_from_names, tensor_to_json
from .scalars import Context, PoleError
from .twist import (abrr_twist, check_cdybe, check_dynamical_twist,
                    check_h_invariance, classical_limit_r)


class SchemaError(ValueError):
    pass


def _context(rank: int = 4) -> Context:
    return Context(["lam", "hbar"] + [f"t{i}" for i in range(1, rank + 1)])


def _parse_simple_token(tok: str, rank: int) -> tuple[int, ...]:
    tok = tok.strip()
    if not (tok.startswith("a") and tok[1:].isdigit()):
        raise SchemaError(f"bad simple-root token {tok!r} (expected aK)")
    k = int(tok[1:])
    if not 1 <= k <= rank:
        raise SchemaError(f"simple-root index out of range in {tok!r}")
    return tuple(1 if i == k - 1 else 0 for i in range(rank))


def _parse_delta(s: Optional[str], rank: int) -> list[tuple[int, ...]]:
    if not s or s.lower() == "none":
        return []
    return [_parse_simple_token(t, rank) for t in s.split(",")]


def _parse_u(s: Optional[str], rank: int) -> list[tuple[int, ...]]:
    if not s or s.lower() == "none":
        return []
    out = []
    for tok in s.split(","):
        tok = tok.strip()
        if not tok.startswith("pm-"):
            raise SchemaError(f"bad U token {tok!r} (expected pm-aK)")
        r = _parse_simple_token(tok[3:], rank)
        out.append(r)
        out.append(tuple(-c for c in r))
    return out


def _parse_t(s: Optional[str], rank: int, ctx: Context) -> dict:
    if not s:
        return {}
    out = {}
    for item in s.split(","):
        if "=" not in item:
            raise SchemaError(f"bad t binding {item!r} (expected aK=expr)")
        key, val = item.split("=", 1)
        out[_parse_simple_token(key, rank)] = ctx(val)
    return out


def _spec_from_args(args) -> tuple:
    family = args.type.upper()
    rank = args.rank
    if family not in ("A", "B", "C", "D"):
        raise SchemaError(f"unknown family {args.type!r}")
    rs = rsys.build_root_system(family, rank)
    table = rsys.chevalley_constants(rs)
    ctx = _context(rank)
    delta = _parse_delta(args.delta, rank)
    U = _parse_u(args.u, rank)
    t = _parse_t(getattr(args, "t", None), rank, ctx)
    spec = cls.make_spec(table, ctx, delta, U, t=t or None)
    return spec, table, ctx


def _root_str(a) -> str:
    return "(" + ",".join(str(c) for c in a) + ")"


def cmd_classify(args) -> dict:
    spec, table, ctx = _spec_from_args(args)
    fam = cls.build_coefficients(spec)
    report = cls.check_coefficient_conditions(fam)
    report["shift_form"] = cls.check_shift_form(fam)
    out = {
        "coefficients": {_root_str(a): fam[a].to_string()
                         for a in sorted(spec.system.roots)},
        "conditions": _jsonable(report),
        "ok": report["all_ok"] and report["shift_form"],
    }
    return out


def cmd_verify_rmatrix(args) -> dict:
    spec, table, ctx = _spec_from_args(args)
    fam = cls.build_coefficients(spec)
    g = realize_lie_algebra(table, ctx, U=spec.U)
    b = cls.coefficients_to_tensor(fam, g)
    try:
        member = cls.check_in_M_Omega(b, g)
        quasi_unitary = True
    except cls.QuasiUnitarityError:
        member, quasi_unitary = False, False
    witnesses = []
    if args.recover:
        for w in cls.recover_classification(fam, ctx, table):
            witnesses.append({
                "simple": [_root_str(a) for a in w["simple"]],
                "delta": [_root_str(a) for a in w["delta"]],
                "t": {_root_str(k): v.to_string() for k, v in w["t"].items()},
            })
    return {
        "quasi_unitary": quasi_unitary,
        "in_M_Omega": member,
        "tensor": tensor_to_json(b.pruned()),
        "witnesses": witnesses,
        "ok": quasi_unitary and member,
    }


def cmd_lagrangian(args) -> dict:
    spec, table, ctx = _spec_from_args(args)
    g = realize_lie_algebra(table, ctx, U=spec.U)
    lag, report = cls.build_lagrangian(spec, g)
    report = dict(report)
    report["ok"] = report.pop("all_ok")
    return report


def cmd_abrr_check(args) -> dict:
    ctx = _context()
    U = PBWAlgebra(sl2(ctx), order=("y", "h", "x"))
    J = abrr_twist(U, args.order)
    rep = check_dynamical_twist(J)
    counit_ok = _counit_ok(J)
    return {
        "order": args.order,
        "cocycle": rep,
        "counit_ok": counit_ok,
        "h_invariant": check_h_invariance(J),
        "ok": rep["ok"] and counit_ok,
    }


def _counit_ok(J) -> bool:
    from .enveloping import TensorUEA
    unit1 = TensorUEA.unit((J.slots[0],))
    for r, t in enumerate(J.orders):
        for slot in (0, 1):
            e = t.slot_counit(slot)
            want = unit1 if r == 0 else TensorUEA((J.slots[0],), {})
            if not (e - want).is_zero():
                return False
    return True


def cmd_cdybe_check(args) -> dict:
    ctx = _context()
    g = sl2(ctx)
    U = PBWAlgebra(g, order=("y", "h", "x"))
    J = abrr_twist(U, max(args.order, 1))
    r = classical_limit_r(J)
    expected = tensor2_from_names(g, {("x", "y"): ctx("1/lam"),
                                      ("y", "x"): ctx("-1/lam")})
    limit_ok = (r - expected).is_zero()
    rep = check_cdybe(r, [("h", "lam")])
    return {
        "r": tensor_to_json(r.pruned()),
        "classical_limit_is_u_lambda": limit_ok,
        "cdybe": rep,
        "ok": limit_ok and rep["ok"],
    }


def cmd_star(args) -> dict:
    from .orbits import verify_orbit_identities
    ctx = _context()
    rep = verify_orbit_identities(ctx, twist_order=min(args.order, 3))
    rep = _jsonable(rep)
    if args.identity != "all":
        if args.identity not in rep:
            raise SchemaError(f"unknown identity {args.identity!r}")
        sub = rep[args.identity]
        return {"identity": args.identity, **sub}
    rep["ok"] = rep.pop("all_ok")
    return rep


def cmd_verma_oracle(args) -> dict:
    from .verma import FiniteModule, compose_and_extract
    ctx = _context()
    if args.v % 2 or args.w % 2:
        raise SchemaError("module highest weights must be even "
                          "(odd ones have no zero-weight vector)")
    V = FiniteModule(ctx, args.v)
    W = FiniteModule(ctx, args.w)
    v0 = {args.v // 2: ctx.one()}
    w0 = {args.w // 2: ctx.one()}
    scale = {1: 2} if args.mutate else None
    rep = compose_and_extract(ctx, V, W, v0, w0, term_scale=scale)
    rep["mutated"] = bool(args.mutate)
    rep["ok"] = rep["status"] == "match"
    return rep


def cmd_project_twist(args) -> dict:
    from .projection import (check_nondynamical_twist, closed_form_jv,
                             project_twist, split_basis_sl2)
    ctx = _context()
    U = PBWAlgebra(sl2(ctx), order=("y", "h", "x"))
    sp_ = split_basis_sl2(ctx, args.variant)
    J = abrr_twist(U, args.order)
    Jv = project_twist(J, sp_)
    cf = closed_form_jv(sp_, args.order)
    closed_match = all(
        (Jv.series.order(k) - cf.series.order(k)).is_zero()
        for k in range(args.order + 1))
    rep = check_nondynamical_twist(Jv)
    return {
        "order": args.order,
        "variant": args.variant,
        "series": Jv.series.to_json(),
        "matches_closed_form": closed_match,
        "axioms": rep,
        "ok": closed_match and rep["ok"],
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_string"):
        return obj.to_string()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


_COMMANDS = {
    "classify": cmd_classify,
    "verify-rmatrix": cmd_verify_rmatrix,
    "lagrangian": cmd_lagrangian,
    "abrr-check": cmd_abrr_check,
    "cdybe-check": cmd_cdybe_check,
    "star": cmd_star,
    "verma-oracle": cmd_verma_oracle,
    "project-twist": cmd_project_twist,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dynstar",
        description="Exact verification of dynamical r-matrix, twist and "
                    "star-product identities.")
    p.add_argument("--job", help="JSON job file; its fields override flags")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--json-out", help="write the report to this path")
        sp.add_argument("--canonical", action="store_true",
                        help="omit timing for byte-identical reports")

    def rootargs(sp):
        sp.add_argument("--type", required=True, help="root-system family A|B|C|D")
        sp.add_argument("--rank", type=int, required=True)
        sp.add_argument("--delta", help="Levi simple roots, e.g. a1,a3")
        sp.add_argument("--u", help="reductive subset, e.g. pm-a1 (or none)")
        sp.add_argument("--t", help="t bindings, e.g. a1=t1,a3=2")

    sp = sub.add_parser("classify", help="coefficient family and conditions")
    rootargs(sp); common(sp)

    sp = sub.add_parser("verify-rmatrix", help="tensor-level membership check")
    rootargs(sp)
    sp.add_argument("--recover", action="store_true",
                    help="also run the converse recovery")
    common(sp)

    sp = sub.add_parser("lagrangian", help="Lagrangian subalgebra report")
    rootargs(sp); common(sp)

    sp = sub.add_parser("abrr-check", help="dynamical twist equation")
    sp.add_argument("--order", type=int, default=4)
    common(sp)

    sp = sub.add_parser("cdybe-check", help="classical limit and CDYBE")
    sp.add_argument("--order", type=int, default=4)
    common(sp)

    sp = sub.add_parser("star", help="orbit star-product identities")
    sp.add_argument("--order", type=int, default=3)
    sp.add_argument("--identity", default="all",
                    choices=["all", "commutator", "casimir", "associativity",
                             "quasiclassical", "equivariance",
                             "scalar_reduction", "degree_bound",
                             "filtration_dims"])
    sp.add_argument("--hbar-one", action="store_true",
                    help="report identities at deformation value 1 (default)")
    common(sp)

    sp = sub.add_parser("verma-oracle", help="intertwiner composition oracle")
    sp.add_argument("--v", type=int, default=2, help="highest weight of V")
    sp.add_argument("--w", type=int, default=2, help="highest weight of W")
    sp.add_argument("--mutate", action="store_true",
                    help="double the first twist term (sensitivity control)")
    common(sp)

    sp = sub.add_parser("project-twist", help="projection to an ordinary twist")
    sp.add_argument("--order", type=int, default=4)
    sp.add_argument("--variant", default="standard",
                    choices=["standard", "chevalley"])
    common(sp)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.job:
        try:
            with open(args.job) as fh:
                job = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            print(f"error: cannot read job file: {e}", file=sys.stderr)
            return 2
        merged = [job.pop("command", args.command)]
        if merged[0] is None:
            print("error: job file missing command", file=sys.stderr)
            return 2
        for k, v in job.items():
            flag = "--" + k.replace("_", "-")
            if isinstance(v, bool):
                if v:
                    merged.append(flag)
            else:
                merged.extend([flag, str(v)])
        args = parser.parse_args(merged)
    if not args.command:
        parser.print_help()
        return 2
    t0 = time.monotonic()
    try:
        report = _COMMANDS[args.command](args)
    except (SchemaError, KeyError, rsys.RootSystemError, cls.SpecError,
            PoleError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    report = {"command": args.command, **_jsonable(report)}
    if not getattr(args, "canonical", False):
        report["elapsed_seconds"] = round(time.monotonic() - t0, 3)
    text = json.dumps(report, indent=2, sort_keys=True)
    if getattr(args, "json_out", None):
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    status = "PASS" if report.get("ok") else "FAIL"
    print(f"{args.command}: {status}")
    print(text)
    return 0 if report.get("ok") else 1


def main() -> None:
    sys.exit(run())
