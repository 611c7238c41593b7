"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 internal
consistency failure.
"""

import argparse
import json
import sys
from collections import Counter

from .arith import OrderDisc, ValidationError, psi, split_discriminant
from .fields import FieldSymbol, compose_rcf, field_degree, tensor_rcf
from .forms import class_number, reduced_forms, two_torsion_count
from .graph import build_graph, double_cover, to_dot
from .locus import fiber_X0MN, primitive_X0MN, x1_fiber
from .pathstats import orbit_counts, type_counts
from .tables import class_d, class_e, path_classes


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _field_json(sym: FieldSymbol) -> dict:
    return {"base": sym.base, "m": sym.m, "canonicalM": sym.canonical_m()}


def _field_text(sym: FieldSymbol) -> str:
    canon = sym.canonical_m()
    extra = "" if canon == sym.m else f" [= {sym.base}({canon})]"
    return f"{sym.base}({sym.m}){extra}"


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _order_from_args(args) -> OrderDisc:
    if args.disc is not None:
        if args.dk is not None or args.f is not None:
            raise ValidationError("give either --disc or --dk/--f, not both")
        return split_discriminant(args.disc)
    if args.dk is None:
        raise ValidationError("a discriminant is required (--disc or --dk/--f)")
    return OrderDisc.from_parts(args.dk, args.f if args.f is not None else 1)


def _add_order_flags(p):
    p.add_argument("--dk", type=int, help="fundamental discriminant")
    p.add_argument("--f", type=int, help="conductor (with --dk)")
    p.add_argument("--disc", type=int, help="full discriminant f^2*dk")


def _cmd_fiber(args) -> int:
    order = _order_from_args(args)
    report = fiber_X0MN(order, args.M, args.N)
    payload = {
        "curve": {"M": report.M, "N": report.N},
        "order": {"deltaK": order.delta_K, "f": order.f},
        "classes": [
            {
                "field": _field_json(c.field),
                "d": c.d,
                "e": c.e,
                "count": c.count,
            }
            for c in report.classes
        ],
        "checkTotal": report.check_total,
        "psiCheck": report.psi_ok,
    }
    if args.format == "json":
        print(_dumps(payload))
    elif args.format == "csv":
        print("base,m,degree,d,e,count")
        for c in report.classes:
            print(
                f"{c.field.base},{c.field.m},{field_degree(c.field)},"
                f"{c.d},{c.e},{c.count}"
            )
    else:
        print(f"fiber of X0({report.M},{report.N}) over J_{order.delta}")
        for c in report.classes:
            print(
                f"  {_field_text(c.field):<18} d={c.d:<5} e={c.e} count={c.count}"
            )
        print(f"  total e*d*count = {report.check_total}"
              f" (expected {report.expected_total})")
    return 0


def _cmd_primitive(args) -> int:
    order = _order_from_args(args)
    fields, degrees = primitive_X0MN(order, args.M, args.N)
    payload = {
        "curve": {"M": args.M, "N": args.N},
        "order": {"deltaK": order.delta_K, "f": order.f},
        "primitiveFields": [_field_json(s) for s in fields],
        "primitiveDegrees": degrees,
    }
    if args.format == "json":
        print(_dumps(payload))
    else:
        names = ", ".join(_field_text(s) for s in fields)
        print(f"primitive residue fields on X0({args.M},{args.N}): {names}")
        print(f"primitive degrees: {', '.join(map(str, degrees))}")
    return 0


def _cmd_x1(args) -> int:
    order = _order_from_args(args)
    kind = "elliptic" if args.elliptic else "non-elliptic"
    e, f_deg, count = x1_fiber(order, args.M, args.N, kind)
    payload = {
        "curve": {"M": args.M, "N": args.N},
        "order": {"deltaK": order.delta_K, "f": order.f},
        "kind": kind,
        "e": e,
        "f": f_deg,
        "points": count,
    }
    if args.format == "json":
        print(_dumps(payload))
    else:
        print(f"X1({args.M},{args.N}) over the point: e={e} f={f_deg} points={count}")
    return 0


def _cmd_classgroup(args) -> int:
    h = class_number(args.disc)
    r2 = two_torsion_count(args.disc)
    forms = reduced_forms(args.disc)
    payload = {
        "disc": args.disc,
        "classNumber": h,
        "twoTorsion": r2,
        "forms": [list(f) for f in forms],
    }
    if args.format == "json":
        print(_dumps(payload))
    else:
        print(f"h({args.disc}) = {h}, #Pic[2] = {r2}")
        for f in forms:
            print(f"  {f}")
    return 0


def _parse_symbol(text: str, dk: int) -> FieldSymbol:
    t = text.strip().replace("(", ":").replace(")", "")
    base, _, m = t.partition(":")
    if base not in ("Q", "K") or not m.isdigit():
        raise ValidationError(f"cannot parse field symbol {text!r} (use K:6 or Q:10)")
    return FieldSymbol(base, int(m), dk)


def _cmd_rcf(args) -> int:
    if args.op == "compose":
        factors = [
            FieldSymbol("K", int(m), args.dk)
            for m in args.conductors.split(",")
        ]
        res = compose_rcf(factors)
        payload = {
            "closure": _field_json(res.closure),
            "index": res.index,
            "degree": res.degree(),
        }
    else:
        left = _parse_symbol(args.left, args.dk)
        right = _parse_symbol(args.right, args.dk)
        from math import gcd

        parts = tensor_rcf(left, right, gcd(left.m, right.m))
        payload = {
            "factors": [
                {
                    "closure": _field_json(p.closure),
                    "index": p.index,
                    "degree": p.degree(),
                }
                for p in parts
            ]
        }
    if args.format == "json":
        print(_dumps(payload))
    else:
        print(_dumps(payload))
    return 0


def _cmd_graph(args) -> int:
    if args.double:
        g = double_cover(args.dk, args.l, args.f0, args.depth)
    else:
        g = build_graph(args.dk, args.l, args.f0, args.depth)
    if args.dot:
        print(to_dot(g))
        return 0
    print(f"graph (dK={args.dk}, l={args.l}, f0={args.f0}) to depth {args.depth}"
          f"{' [double cover]' if args.double else ''}")
    for m in range(args.depth + 1):
        print(
            f"  level {m}: {g.level_counts[m]} vertices,"
            f" {g.real_vertex_count(m)} fixed by conjugation"
        )
    return 0


def _cmd_check(args) -> int:
    if not args.sweep:
        raise ValidationError("nothing to check; pass --sweep")
    failures = 0
    for dk in (-3, -4):
        for f in range(1, 7):
            order = OrderDisc.from_parts(dk, f)
            for ell in (2, 3, 5, 7, 13):
                for a in range(1, 6):
                    classes = path_classes(order, ell, a)
                    total = sum(
                        class_e(order, c) * class_d(order, c) * c.count
                        for c in classes
                    )
                    if total != psi(ell**a):
                        failures += 1
    print(f"psi-sum sweep: {'ok' if failures == 0 else f'{failures} failures'}")
    mism = 0
    for dk in (-3, -4):
        for f0 in (1, 2, 3):
            for ell in (2, 3, 5, 7, 13):
                if f0 % ell == 0:
                    continue
                for L in (0, 1):
                    for a in range(1, 5):
                        order = OrderDisc.from_parts(dk, ell**L * f0)
                        table = Counter()
                        for c in path_classes(order, ell, a):
                            table[c.bhd] += (
                                class_e(order, c) * class_d(order, c) * c.count
                            )
                        walker = {
                            t: v[0] for t, v in type_counts(dk, ell, f0, L, a).items()
                        }
                        if dict(table) != walker:
                            mism += 1
    print(f"oracle equivalence sweep: {'ok' if mism == 0 else f'{mism} failures'}")
    orbit_bad = 0
    for dk in (-3, -4):
        for ell in (2, 3, 5, 7, 13):
            for a in range(1, 6):
                order = OrderDisc.from_parts(dk, 1)
                q = Counter()
                mT = {}
                for c in path_classes(order, ell, a):
                    if not c.field.contains_K:
                        q[c.bhd] += c.count
                    mT[c.bhd] = c.field.m
                for t, (_tot, real) in orbit_counts(dk, ell, a).items():
                    want = (
                        q[t] * two_torsion_count(mT[t] ** 2 * dk) if q[t] else 0
                    )
                    if real != want:
                        orbit_bad += 1
    print(f"real-orbit identity sweep: {'ok' if orbit_bad == 0 else f'{orbit_bad} failures'}")
    if failures or mism or orbit_bad:
        raise AssertionError("self-check sweep failed")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="cmlocus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fiber", help="fiber of X0(M,N) over a CM point")
    _add_order_flags(p)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.set_defaults(func=_cmd_fiber)

    p = sub.add_parser("primitive", help="primitive residue fields and degrees")
    _add_order_flags(p)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_primitive)

    p = sub.add_parser("x1", help="X1(M,N) -> X0(M,N) transfer data")
    _add_order_flags(p)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--elliptic", action="store_true")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_x1)

    p = sub.add_parser("classgroup", help="reduced forms, h and 2-torsion")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_classgroup)

    p = sub.add_parser("rcf", help="ring class field composita and tensors")
    p.add_argument("op", choices=("compose", "tensor"))
    p.add_argument("--dk", type=int, required=True)
    p.add_argument("--conductors", help="comma list for compose, e.g. 2,3")
    p.add_argument("--left", help="tensor factor, e.g. K:6")
    p.add_argument("--right", help="tensor factor, e.g. Q:10")
    p.add_argument("--format", choices=("table", "json"), default="json")
    p.set_defaults(func=_cmd_rcf)

    p = sub.add_parser("graph", help="truncated isogeny graph summary / DOT")
    p.add_argument("--dk", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--f0", type=int, default=1)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--double", action="store_true")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("check", help="internal consistency sweeps")
    p.add_argument("--sweep", action="store_true")
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"validation error: {err}", file=sys.stderr)
        return 2
    except AssertionError as err:
        print(f"internal consistency failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
