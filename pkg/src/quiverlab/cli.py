"""Command-line front end.

Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or parse
error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import blowup, formats, injectivity, morphisms
from .errors import (
    Budget,
    BudgetExceeded,
    DanglingEndpoint,
    DuplicateId,
    ParseError,
    PrecondViolation,
    QuiverError,
    TotalityViolation,
    ValidationError,
)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_BUDGET = 10_000_000


class _Usage(Exception):
    pass


def _violation_json(v) -> dict | str:
    if isinstance(v, DanglingEndpoint):
        return {"kind": "dangling_endpoint", "edge": v.edge, "vertex": v.vertex}
    if isinstance(v, DuplicateId):
        return {"kind": "duplicate_id", "id": v.id, "of": v.kind}
    return str(v)


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            return pad + ", ".join(_scalar(x) for x in obj)
        lines = []
        for x in obj:
            lines.append(f"{pad}-")
            lines.append(render_text(x, indent + 1))
        return "\n".join(lines)
    return pad + _scalar(obj)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def _budget(args) -> Budget:
    if args.budget is not None:
        return Budget(args.budget)
    env = os.environ.get("QUIVERLAB_BUDGET")
    if env:
        try:
            return Budget(int(env))
        except ValueError:
            raise _Usage(f"QUIVERLAB_BUDGET must be an integer, got {env!r}") from None
    return Budget(DEFAULT_BUDGET)


def _need_n(args, minimum: int = 2) -> int:
    if args.n is None:
        raise _Usage(f"{args.command} requires --n")
    if args.n < minimum:
        raise _Usage(f"--n must be at least {minimum}")
    return args.n


def _valid_morphism(path: str):
    m = formats.load_morphism(path)
    try:
        check = morphisms.check_morphism(m)
    except TotalityViolation as exc:
        raise _Usage(f"{path}: {exc}") from None
    if not check.ok:
        raise _Usage(f"{path}: not a quiver homomorphism (square fails at edge {check.edge!r})")
    return m


# -- commands -----------------------------------------------------------------

def cmd_validate(args):
    try:
        q = formats.load_quiver(args.quiver)
    except ValidationError as exc:
        return {"valid": False, "violations": [_violation_json(v) for v in exc.violations]}, EXIT_NO
    out = {"valid": True, "vertices": len(q.vertices), "edges": len(q.edges)}
    if not q.vertices:
        out["vacuous"] = True
    return out, EXIT_YES


def cmd_hom_check(args):
    m = formats.load_morphism(args.morphism)
    try:
        check = morphisms.check_morphism(m)
    except TotalityViolation as exc:
        return {"is_morphism": False, "totality": str(exc)}, EXIT_NO
    out: dict = {"is_morphism": check.ok}
    if not check.ok:
        out["violation"] = {"edge": check.edge, "square": check.square}
    return out, EXIT_YES if check.ok else EXIT_NO


def cmd_monic_check(args):
    m = _valid_morphism(args.morphism)
    monic = morphisms.is_monic(m)
    return {"is_morphism": True, "monic": monic}, EXIT_YES if monic else EXIT_NO


def cmd_homs_count(args):
    g = formats.load_quiver(args.domain)
    h = formats.load_quiver(args.codomain)
    budget = _budget(args)
    if args.limit is None:
        count = morphisms.count_homs(g, h, budget)
        out = {"count": count}
    else:
        count = sum(1 for _ in morphisms.enumerate_homs(g, h, limit=args.limit, budget=budget))
        out = {"count": count, "limit": args.limit}
    return out, EXIT_YES if count else EXIT_NO


def cmd_inject_brute(args):
    j = formats.load_quiver(args.quiver)
    if args.phi is not None:
        phi = _valid_morphism(args.phi)
        if not morphisms.is_monic(phi):
            raise _Usage(f"{args.phi}: phi must be monic")
        out = {}
    else:
        n = _need_n(args)
        phi = injectivity.phi_n(n)
        out = {"n": n}
    verdict = injectivity.is_phi_injective_brute(j, phi, budget=_budget(args))
    out.update(verdict.to_json())
    if verdict.injective is None:
        return out, EXIT_BUDGET
    return out, EXIT_YES if verdict.injective else EXIT_NO


def cmd_inject_phin(args):
    j = formats.load_quiver(args.quiver)
    n = _need_n(args)
    verdict = injectivity.is_phin_injective(j, n)
    out = {"n": n}
    out.update(verdict.to_json())
    return out, EXIT_YES if verdict.injective else EXIT_NO


def cmd_classify(args):
    j = formats.load_quiver(args.quiver)
    cls = injectivity.classify(j, _need_n(args))
    return cls.to_json(), EXIT_YES if cls.injective else EXIT_NO


def cmd_blowup_make(args):
    spec = formats.load_blowup_spec(args.spec)
    q, witness = blowup.construct_blowup(spec)
    if args.out:
        formats.dump_quiver(q, args.out)
    return {"quiver": formats.quiver_to_json(q), "witness": witness.to_json(include_quivers=False)}, EXIT_YES


def cmd_blowup_recognize(args):
    if args.base is None:
        raise _Usage("blowup-recognize requires --base")
    base = formats.load_quiver(args.base)
    h = formats.load_quiver(args.quiver)
    witness = blowup.recognize_blowup(base, h, budget=_budget(args))
    if witness is None:
        return {"blowup": False}, EXIT_NO
    return {"blowup": True, "witness": witness.to_json(include_quivers=False)}, EXIT_YES


def cmd_retract_find(args):
    j = _valid_morphism(args.morphism)
    found = morphisms.find_retraction(j, budget=_budget(args))
    if found is None:
        return {"section": False}, EXIT_NO
    q, cert = found
    return {
        "section": True,
        "retraction": formats.morphism_to_json(q),
        "certificate": cert.to_json(),
    }, EXIT_YES


def cmd_section_find(args):
    q = _valid_morphism(args.morphism)
    found = morphisms.find_section(q, budget=_budget(args))
    if found is None:
        return {"retraction": False}, EXIT_NO
    j, cert = found
    return {
        "retraction": True,
        "section": formats.morphism_to_json(j),
        "certificate": cert.to_json(),
    }, EXIT_YES


def cmd_export_dot(args):
    q = formats.load_quiver(args.quiver)
    cls = injectivity.classify(q, _need_n(args)) if args.n is not None else None
    return formats.export_dot(q, cls), EXIT_YES


COMMANDS = {
    "validate": (cmd_validate, ["quiver"]),
    "hom-check": (cmd_hom_check, ["morphism"]),
    "monic-check": (cmd_monic_check, ["morphism"]),
    "homs-count": (cmd_homs_count, ["domain", "codomain"]),
    "inject-brute": (cmd_inject_brute, ["quiver"]),
    "inject-phin": (cmd_inject_phin, ["quiver"]),
    "classify": (cmd_classify, ["quiver"]),
    "blowup-make": (cmd_blowup_make, ["spec"]),
    "blowup-recognize": (cmd_blowup_recognize, ["quiver"]),
    "retract-find": (cmd_retract_find, ["morphism"]),
    "section-find": (cmd_section_find, ["morphism"]),
    "export-dot": (cmd_export_dot, ["quiver"]),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="cycle order n for phi_n analyses")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--budget", type=int, help="search node budget (default: $QUIVERLAB_BUDGET)")
    common.add_argument("--base", help="base quiver file for blowup-recognize")
    common.add_argument("--out", help="write output to this file")

    parser = argparse.ArgumentParser(prog="quiverlab", description="Analyse finite quivers.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, positionals) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common])
        for pos in positionals:
            p.add_argument(pos)
        if name == "inject-brute":
            p.add_argument("--phi", help="morphism file for a monic phi (default: phi_n)")
        if name == "homs-count":
            p.add_argument("--limit", type=int)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    handler, _ = COMMANDS[args.command]
    try:
        result, code = handler(args)
    except BudgetExceeded as exc:
        result, code = {"error": "budget_exceeded", "budget": exc.limit}, EXIT_BUDGET
    except (_Usage, ParseError, ValidationError, PrecondViolation, OSError) as exc:
        result, code = {"error": "usage", "message": str(exc)}, EXIT_USAGE
    except QuiverError as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, EXIT_USAGE

    if isinstance(result, str):
        _emit(result, args.out)
        return code
    document = {"command": args.command, **result}
    if args.format == "text":
        text = render_text(document) + "\n"
    else:
        text = json.dumps(document, indent=2) + "\n"
    # blowup-make sends the quiver itself to --out
    _emit(text, None if args.command == "blowup-make" else args.out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
