"""Command-line interface for the exact Hopf-module engine.

Subcommands
-----------
verify        axioms, integrals and normalization of an algebra
evaluate      matrix (and renormalized trace, when open) of a diagram file
chromatic     construct a chromatic map and verify its defining identity
invariant     closed-manifold scalar of a surgery program
suite         property batteries: hopf, mtrace, chromatic, tqft or all
spanning-dim  upper bound for the skein space of a genus-g surface

Exit codes: 0 when every requested check passes, 1 when a computation or a
check fails (the failing witness is printed), 2 on usage errors.  With
``--out`` the structured report is also written as JSON; identical
invocations produce byte-identical report files, so wall-clock timing is
printed on stdout only.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from hopfmod.builtins import BUILTIN_NAMES, load_algebra
from hopfmod.chromatic import (chromatic_left, chromatic_right,
                               chromatic_two_sided, standard_test_modules,
                               verify_chromatic)
from hopfmod.diagrams import (OpenPresentation, diagram_from_json, evaluate,
                              fprime)
from hopfmod.fields import field_from_json
from hopfmod.hopf import HopfAlgebra, HopfError
from hopfmod.mtrace import NotUnimodular, TraceContext, property_battery
from hopfmod.rep import dual_left, regular, tensor, trivial
from hopfmod.tqft import (DEFAULT_SIZE_CAP, k_invariant, load_program,
                          normalization_info, relations_report,
                          skein_spanning_dim)


def _parse_field_override(text: str):
    if text == "rational":
        return "rational"
    kind, _, value = text.partition(":")
    if kind in ("prime", "cyclotomic") and value.isdigit():
        return {kind: int(value)}
    raise argparse.ArgumentTypeError(
        f"{text!r} is not 'rational', 'prime:<p>' or 'cyclotomic:<n>'")


def _get_algebra(args) -> HopfAlgebra:
    ref = args.algebra
    override = getattr(args, "field_override", None)
    if override is None:
        return load_algebra(ref)
    if ref in BUILTIN_NAMES:
        raise HopfError(
            "--field-override applies to algebra files, not built-in names")
    data = json.loads(Path(ref).read_text())
    data["field"] = field_from_json(override).describe()
    alg = HopfAlgebra.from_json(data)
    alg.validate()
    return alg


def _emit(args, report: dict) -> None:
    if args.out:
        Path(args.out).write_text(
            json.dumps(report, sort_keys=True, indent=2) + "\n")


def _flag(ok: bool) -> str:
    return "pass" if ok else "FAIL"


# -- subcommands ----------------------------------------------------------------

def cmd_verify(args) -> int:
    alg = _get_algebra(args)
    F = alg.field
    axioms = alg.verify_axioms()
    pinned = alg.apply_integral(alg.cointegral) == F.one
    report = {
        "command": "verify",
        "algebra": alg.name,
        "fingerprint": alg.fingerprint(),
        "axioms": {name: {"ok": ok, "witness": witness}
                   for name, (ok, witness) in sorted(axioms.items())},
        "integral_normalized": pinned,
        "unimodular": alg.is_unimodular,
        "semisimple": alg.is_semisimple,
        "unibalanced": alg.is_unibalanced(),
        "timing": None,
    }
    report["ok"] = pinned and all(ok for ok, _ in axioms.values())
    for name, (ok, witness) in sorted(axioms.items()):
        extra = "" if ok else f"  witness basis index {witness}"
        print(f"  axiom {name}: {_flag(ok)}{extra}")
    print(f"  integral normalization lambda(Lambda)=1: {_flag(pinned)}")
    print(f"  unimodular={alg.is_unimodular} semisimple={alg.is_semisimple} "
          f"unibalanced={alg.is_unibalanced()}")
    print(f"{alg.name}: {_flag(report['ok'])}")
    _emit(args, report)
    return 0 if report["ok"] else 1


def cmd_evaluate(args) -> int:
    alg = _get_algebra(args)
    F = alg.field
    data = json.loads(Path(args.diagram).read_text())
    diagram = diagram_from_json(alg, data)
    mat = evaluate(diagram)
    report = {
        "command": "evaluate",
        "algebra": alg.name,
        "fingerprint": alg.fingerprint(),
        "diagram": args.diagram,
        "matrix": [[F.to_json(x) for x in row] for row in mat.rows],
        "timing": None,
        "ok": True,
    }
    if diagram.is_closed:
        print(f"closed evaluation: {F.to_json(mat.rows[0][0])}")
    else:
        print(f"evaluation matrix: {mat.nrows} x {mat.ncols}")
    try:
        pres = OpenPresentation(diagram)
        value = fprime(TraceContext(alg), pres)
        report["fprime"] = F.to_json(value)
        print(f"renormalized invariant (cut {pres.cut_module.label}): "
              f"{F.to_json(value)}")
    except (ValueError, NotUnimodular):
        pass
    _emit(args, report)
    return 0


def cmd_chromatic(args) -> int:
    alg = _get_algebra(args)
    G = regular(alg)
    if args.kind == "two_sided":
        c = chromatic_two_sided(alg)
        tests = standard_test_modules(alg)
    else:
        c = chromatic_left(alg) if args.kind == "left" \
            else chromatic_right(alg)
        tests = [trivial(alg), G, tensor(G, G)]
    result = verify_chromatic(c, tests)
    report = {"command": "chromatic", "kind": args.kind,
              "timing": None, **result}
    for entry in result["results"]:
        print(f"  identity on {entry['module']}: {_flag(entry['ok'])} "
              f"({entry['route']})")
    print(f"{alg.name} chromatic[{args.kind}]: {_flag(result['ok'])}")
    _emit(args, report)
    return 0 if result["ok"] else 1


def cmd_invariant(args) -> int:
    alg = _get_algebra(args)
    F = alg.field
    program = load_program(args.program)
    value = k_invariant(alg, program, size_cap=args.size_cap)
    info = normalization_info(alg)
    report = {
        "command": "invariant",
        "algebra": alg.name,
        "program": program.name,
        "value": F.to_json(value),
        "normalization": info,
        "timing": None,
        "ok": True,
    }
    print(f"K[{program.name}] over {alg.name} = {F.to_json(value)}")
    print(f"  algebra fingerprint: {info['fingerprint']}")
    print(f"  {info['integral']}")
    print(f"  circle coupon: right multiplication by scaled basis element "
          f"{info['circle_coupon_index']}")
    print(f"  pivot coefficients: {info['pivot']}")
    _emit(args, report)
    return 0


def _suite_hopf(alg: HopfAlgebra) -> dict:
    axioms = alg.verify_axioms()
    pinned = alg.apply_integral(alg.cointegral) == alg.field.one
    ok = pinned and all(okay for okay, _ in axioms.values())
    return {"section": "hopf", "ok": ok,
            "axioms": {name: okay for name, (okay, _) in sorted(
                axioms.items())},
            "integral_normalized": pinned}


def _suite_mtrace(alg: HopfAlgebra, seed: int, instances: int) -> dict:
    result = property_battery(alg, seed=seed, instances=instances)
    return {"section": "mtrace",
            "ok": all(c["ok"] for c in result["checks"]), **result}


def _suite_chromatic(alg: HopfAlgebra) -> dict:
    G = regular(alg)
    sections = []
    if alg.is_unimodular and alg.is_unibalanced():
        sections.append(("two_sided",
                         verify_chromatic(chromatic_two_sided(alg),
                                          standard_test_modules(alg))))
    tests = [trivial(alg), G, tensor(G, G)]
    sections.append(("left", verify_chromatic(chromatic_left(alg), tests)))
    sections.append(("right", verify_chromatic(chromatic_right(alg), tests)))
    return {"section": "chromatic",
            "ok": all(result["ok"] for _, result in sections),
            "kinds": {kind: result for kind, result in sections}}


def _suite_tqft(alg: HopfAlgebra, size_cap: int) -> dict:
    result = relations_report(alg, size_cap=size_cap)
    return {"section": "tqft", **result}


def cmd_suite(args) -> int:
    alg = _get_algebra(args)
    wanted = (("hopf", "mtrace", "chromatic", "tqft")
              if args.which == "all" else (args.which,))
    sections = []
    for which in wanted:
        start = time.time()
        try:
            if which == "hopf":
                section = _suite_hopf(alg)
            elif which == "mtrace":
                section = _suite_mtrace(alg, args.seed, args.instances)
            elif which == "chromatic":
                section = _suite_chromatic(alg)
            else:
                section = _suite_tqft(alg, args.size_cap)
        except NotUnimodular as exc:
            section = {"section": which, "ok": True, "skipped": str(exc)}
        elapsed = time.time() - start
        sections.append(section)
        status = ("skipped" if "skipped" in section
                  else _flag(section["ok"]))
        print(f"  suite {which}: {status} [{elapsed:.1f}s]")
        if which == "tqft" and "checks" in section:
            for check in section["checks"]:
                print(f"    {check['check']}: {_flag(check['ok'])} "
                      f"({check['detail']})")
    ok = all(section["ok"] for section in sections)
    report = {"command": "suite", "which": args.which, "algebra": alg.name,
              "fingerprint": alg.fingerprint(), "seed": args.seed,
              "sections": sections, "timing": None, "ok": ok}
    print(f"{alg.name} suite[{args.which}]: {_flag(ok)}")
    _emit(args, report)
    return 0 if ok else 1


def cmd_spanning_dim(args) -> int:
    alg = _get_algebra(args)
    dim = skein_spanning_dim(alg, args.genus, size_cap=args.size_cap)
    report = {"command": "spanning-dim", "algebra": alg.name,
              "fingerprint": alg.fingerprint(), "genus": args.genus,
              "dimension": dim, "timing": None, "ok": True}
    print(f"spanning dimension at genus {args.genus} over {alg.name}: {dim}")
    _emit(args, report)
    return 0


# -- argument wiring -------------------------------------------------------------

def _add_common(parser, algebra_required: bool = True) -> None:
    parser.add_argument("--algebra", required=algebra_required,
                        help="built-in algebra name or structure-constant "
                             f"JSON file; built-ins: {', '.join(BUILTIN_NAMES)}")
    parser.add_argument("--out", help="write the structured report as JSON")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized batteries (default 0)")
    parser.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP,
                        help="largest tensor color a cut may produce "
                             f"(default {DEFAULT_SIZE_CAP})")
    parser.add_argument("--field-override", type=_parse_field_override,
                        default=None,
                        help="re-read an algebra file over another field: "
                             "rational, prime:<p> or cyclotomic:<n>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopfmod",
        description="Exact chromatic-category and surgery-invariant engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the axioms of an algebra")
    p.add_argument("algebra_pos", nargs="?", default=None,
                   help="algebra name or file (alternative to --algebra)")
    _add_common(p, algebra_required=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evaluate", help="evaluate a diagram file")
    p.add_argument("diagram", help="diagram JSON file")
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("chromatic", help="build and verify a chromatic map")
    p.add_argument("--kind", choices=("two_sided", "left", "right"),
                   default="two_sided")
    _add_common(p)
    p.set_defaults(func=cmd_chromatic)

    p = sub.add_parser("invariant",
                       help="closed-manifold scalar of a surgery program")
    p.add_argument("program",
                   help="program JSON file, built-in name, or '#'-joined "
                        "connected sum of built-ins")
    _add_common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("suite", help="run a property battery")
    p.add_argument("which",
                   choices=("hopf", "mtrace", "chromatic", "tqft", "all"))
    p.add_argument("--instances", type=int, default=50,
                   help="random instances for the mtrace battery")
    _add_common(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("spanning-dim",
                       help="skein spanning bound for a genus-g surface")
    p.add_argument("genus", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_spanning_dim)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        if args.algebra is None:
            args.algebra = args.algebra_pos
        if args.algebra is None:
            parser.error("verify needs an algebra (positional or --algebra)")
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
