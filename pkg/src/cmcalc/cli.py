"""Command-line driver: enumerate, check, zeta, rayclass, transfer, serre.

All input and output is JSON with sorted keys and integer-only payloads, so
identical invocations produce byte-identical reports.  Exit codes: 0 all
requested checks passed, 1 at least one failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .battery import BATTERY_NAMES, battery_field, closure_of
from .cmtypes import (
    CMFieldHandle,
    enumerate_cm_types,
    is_primitive,
    reflex_field,
    reflex_type,
)
from .cocycle import WSystem, choose_w_system, cocycle_report
from .errors import CMError
from .groups import abelianization, make_group, transfer
from .quadratic import (
    QuadField,
    canonical_weight_one_spec,
    parse_ideal,
    ray_class_group,
)
from .serre import mumford_tate_rank, serre_report
from .zeta import CurveSpec, verify_cm_zeta, verify_res_scalars


class InputError(Exception):
    pass


def _load_field_file(path: str) -> CMFieldHandle:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        group_spec = data["group"]
        if isinstance(group_spec, str):
            with open(group_spec) as fh:
                group_spec = json.load(fh)
        group = make_group(group_spec["table"], names=group_spec.get("names"))
        fixer = group.subgroup(data["H"])
        return CMFieldHandle(group=group, iota=int(data["iota"]), fixer=fixer)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed field file {path}: {exc}") from exc
    except CMError as exc:
        raise InputError(f"invalid field data in {path}: {exc}") from exc


def _resolve_field(args) -> tuple[str, CMFieldHandle]:
    if getattr(args, "battery", None):
        if args.battery not in BATTERY_NAMES:
            raise InputError(
                f"unknown battery context {args.battery!r}; "
                f"choose from {', '.join(BATTERY_NAMES)}"
            )
        return args.battery, battery_field(args.battery)
    if getattr(args, "field_file", None):
        return args.field_file, _load_field_file(args.field_file)
    raise InputError("pass --battery NAME or a field file")


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def cmd_enumerate(args) -> int:
    name, field = _resolve_field(args)
    types = []
    for cm_type in enumerate_cm_types(field):
        reflex = reflex_field(cm_type)
        types.append(
            {
                "phi": list(cm_type.cosets),
                "reflex_fixer": list(reflex.fixer.elements),
                "reflex_degree": reflex.degree,
                "reflex_type": list(reflex_type(cm_type).cosets),
                "primitive": is_primitive(cm_type),
                "mt_rank": mumford_tate_rank(cm_type),
            }
        )
    _emit(
        {
            "field": name,
            "degree": field.degree,
            "cosets": [list(c) for c in field.cosets],
            "types": types,
        }
    )
    return 0


def _broken_w_system(field) -> WSystem:
    """A deliberately corrupted representative system (test-only fault)."""
    good = choose_w_system(field)
    reps = list(good.reps)
    c, ic = field.iota_pairs[0]
    coset = field.cosets[ic]
    alternative = next(
        (w for w in coset if w != reps[ic]), None
    )
    if alternative is None:
        return good
    reps[ic] = alternative
    broken = WSystem.__new__(WSystem)
    object.__setattr__(broken, "field", field)
    object.__setattr__(broken, "reps", tuple(reps))
    return broken


def cmd_check(args) -> int:
    if args.battery == "all":
        names = list(BATTERY_NAMES)
    else:
        names = [args.battery]
        if args.battery not in BATTERY_NAMES:
            raise InputError(f"unknown battery context {args.battery!r}")
    suites = ("serre", "cocycle") if args.suite == "all" else (args.suite,)
    report = {"suite": args.suite, "seed": args.seed, "trials": args.trials, "fields": {}}
    failures = 0
    for name in names:
        field = battery_field(name)
        entry = {}
        if "serre" in suites:
            serre_part = {}
            if field.is_galois():
                serre_part["field"] = serre_report(field)
            else:
                serre_part["field"] = {"skipped": "field is not Galois over Q"}
            serre_part["closure"] = serre_report(closure_of(field))
            entry["serre"] = serre_part
        if "cocycle" in suites:
            broken = _broken_w_system(field) if args.inject_fault else None
            entry["cocycle"] = cocycle_report(
                field, trials=args.trials, seed=args.seed, extra_system=broken
            )
        report["fields"][name] = entry
        for part in entry.values():
            stack = [part]
            while stack:
                node = stack.pop()
                if isinstance(node, dict):
                    if node.get("passed") is False:
                        failures += 1
                    stack.extend(node.values())
                elif isinstance(node, list):
                    stack.extend(node)
    report["summary"] = {"failures": failures}
    _emit(report)
    return 0 if failures == 0 else 1


def cmd_zeta(args) -> int:
    try:
        a4_s, a6_s = args.curve.split(",")
        a4, a6 = int(a4_s), int(a6_s)
    except ValueError as exc:
        raise InputError(f"--curve expects 'a4,a6', got {args.curve!r}") from exc
    try:
        field = QuadField(args.d)
    except CMError as exc:
        raise InputError(str(exc)) from exc
    curve = CurveSpec(a4=a4, a6=a6, cm_field=field)
    spec = canonical_weight_one_spec(field)
    report = verify_cm_zeta(curve, spec, args.pmax)
    if args.res_scalars:
        report["scalar_restriction"] = verify_res_scalars(curve, args.res_scalars)
    if not args.verbose:
        report["primes"] = [e for e in report["primes"] if not e["match"]]
    _emit(report)
    return 0 if report["passed"] else 1


def cmd_rayclass(args) -> int:
    try:
        field = QuadField(args.d)
        modulus = parse_ideal(field, args.modulus)
    except (CMError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    rcg = ray_class_group(field, modulus)
    _emit(
        {
            "d": args.d,
            "modulus": modulus.to_json(),
            "modulus_norm": modulus.norm,
            "order": rcg.order,
            "structure": list(rcg.structure),
        }
    )
    return 0


def cmd_transfer(args) -> int:
    name, field = _resolve_field(args)
    group = field.group
    sub = field.fixer
    if args.subgroup:
        try:
            sub = group.subgroup(json.loads(args.subgroup))
        except (ValueError, CMError) as exc:
            raise InputError(f"bad --subgroup: {exc}") from exc
    quotient = abelianization(sub)
    if args.element is not None:
        elements = [args.element]
    else:
        elements = list(group.elements())
    values = {
        str(g): list(transfer(group, sub, g, quotient=quotient)) for g in elements
    }
    _emit(
        {
            "field": name,
            "subgroup": list(sub.elements),
            "quotient_invariants": list(quotient.moduli),
            "transfer": values,
        }
    )
    return 0


def cmd_serre(args) -> int:
    name, field = _resolve_field(args)
    target = field if field.is_galois() else closure_of(field)
    note = None if field.is_galois() else "field not Galois; reporting its closure"
    report = {"field": name, "report": serre_report(target)}
    if note:
        report["note"] = note
    _emit(report)
    return 0 if report["report"]["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cm",
        description="Exact checks for CM-type combinatorics, character "
        "lattices, transfer cocycles, and CM zeta factorizations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list CM-types with reflex data")
    p_enum.add_argument("field_file", nargs="?", help="JSON field file")
    p_enum.add_argument("--battery", help="built-in context name")
    p_enum.set_defaults(func=cmd_enumerate)

    p_check = sub.add_parser("check", help="run identity suites")
    p_check.add_argument("--suite", choices=("serre", "cocycle", "all"), default="all")
    p_check.add_argument("--battery", default="all")
    p_check.add_argument("--trials", type=int, default=100)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p_check.set_defaults(func=cmd_check)

    p_zeta = sub.add_parser("zeta", help="compare counting and character factors")
    p_zeta.add_argument("--curve", required=True, help="a4,a6")
    p_zeta.add_argument("--d", type=int, required=True, help="CM field selector")
    p_zeta.add_argument("--pmax", type=int, default=1000)
    p_zeta.add_argument(
        "--res-scalars",
        type=int,
        default=0,
        metavar="PMAX",
        help="also run the scalar-restriction check up to PMAX",
    )
    p_zeta.add_argument("--verbose", action="store_true", help="list every prime")
    p_zeta.set_defaults(func=cmd_zeta)

    p_ray = sub.add_parser("rayclass", help="ray class group of a modulus")
    p_ray.add_argument("--d", type=int, required=True)
    p_ray.add_argument("--modulus", required=True, help="gen:a,b[^k] or hnf:n,c,d")
    p_ray.set_defaults(func=cmd_rayclass)

    p_tr = sub.add_parser("transfer", help="transfer values into a subgroup")
    p_tr.add_argument("field_file", nargs="?")
    p_tr.add_argument("--battery")
    p_tr.add_argument("--element", type=int, default=None)
    p_tr.add_argument("--subgroup", help="JSON list of element indices")
    p_tr.set_defaults(func=cmd_transfer)

    p_serre = sub.add_parser("serre", help="character-lattice report for a field")
    p_serre.add_argument("field_file", nargs="?")
    p_serre.add_argument("--battery")
    p_serre.set_defaults(func=cmd_serre)

    return parser


def _fuse_dash_values(argv: list[str]) -> list[str]:
    """Join '--flag -1,0' into '--flag=-1,0' so leading-dash values parse."""
    fused = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if (
            tok in ("--curve", "--modulus", "--subgroup")
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
        ):
            fused.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            fused.append(tok)
    return fused


def main(argv=None) -> int:
    # honored for compatibility with callers that set it; execution is
    # sequential either way, so reports never depend on it
    os.environ.get("CM_THREADS")
    parser = build_parser()
    args = parser.parse_args(_fuse_dash_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CMError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
