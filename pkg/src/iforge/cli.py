"""Command-line entry point.

Exit codes: 0 when a witness is found or the suite passes, 1 when no
witness exists or a criterion fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from iforge import _backend
from iforge.coding import CANTOR, SWAPPED, even_subsequence, relevant_pair
from iforge.errors import BudgetExhausted, IforgeError
from iforge.morphisms import MorphKind, MorphismWitness, is_isomorphic, search
from iforge.quotients import FinPartition, check_classwise_iso, sb_bijection
from iforge.structures import (
    Structure,
    StructureClass,
    export_dot,
    load_structure,
    structure_to_doc,
    validate,
)
from iforge.sums import NClasses, WitnessKit, assemble_w, enumerate_g, oplus, oplus_rooted
from iforge.suite import DEFAULT_SEED, SuiteOptions, criterion_names, run_suite
from iforge.trees import (
    TruncSpec,
    build,
    embed_universal_t,
    lift_iso,
    r_spec,
    weak_epi_r,
)

KIND_VERBS = {k.value: k for k in MorphKind}


class UsageError(IforgeError):
    pass


def _emit(obj: Any) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


def _structure(path: str) -> Structure:
    try:
        return load_structure(Path(path).read_bytes())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except IforgeError as e:
        raise UsageError(f"{path}: {e}") from None


def _map_doc(doc: Any, what: str) -> dict:
    """Accept ``{"0": 1}``, ``{"map": {...}}`` or a list of ``[a, b]`` pairs."""
    if isinstance(doc, dict) and "map" in doc:
        doc = doc["map"]
    if isinstance(doc, dict):
        try:
            return {int(k): v for k, v in doc.items()}
        except ValueError:
            raise UsageError(f"{what}: keys must be integer labels") from None
    if isinstance(doc, list) and all(isinstance(p, list) and len(p) == 2 for p in doc):
        return {a: b for a, b in doc}
    raise UsageError(f"{what}: expected a map object or a list of pairs")


def _witness(path: str, kind: MorphKind) -> MorphismWitness:
    return MorphismWitness(_map_doc(_read_json(path), path), kind)


def _witness_doc(w: MorphismWitness) -> dict:
    return {str(k): v for k, v in sorted(w.map.items())}


def _pairing(name: str):
    return SWAPPED if name == SWAPPED.name else CANTOR


# ------------------------------------------------------------------ verbs


def cmd_morphism(args) -> int:
    kind = KIND_VERBS[args.verb]
    w = search(_structure(args.a), _structure(args.b), kind, args.budget)
    if w is None:
        print("none")
        return 1
    _emit(_witness_doc(w))
    return 0


def cmd_validate(args) -> int:
    s = _structure(args.a)
    diags = validate(s, StructureClass(args.cls))
    for d in diags:
        print(d)
    if not diags:
        print("ok")
    return 1 if diags else 0


def cmd_dot(args) -> int:
    sys.stdout.write(export_dot(_structure(args.a)).decode())
    return 0


def cmd_pair(args) -> int:
    print(_pairing(args.pairing).pair(args.n, args.m))
    return 0


def cmd_unpair(args) -> int:
    _emit(list(_pairing(args.pairing).unpair(args.k)))
    return 0


def cmd_rp(args) -> int:
    s = tuple(args.seq)
    pairing = _pairing(args.pairing)
    _emit({"rp": list(relevant_pair(s, pairing)) if s else None,
           "rp_even": list(relevant_pair(even_subsequence(s), pairing)) if s else None})
    return 0


def _spec(args) -> TruncSpec:
    return TruncSpec(args.maxlen, args.alphabet)


def cmd_build(args) -> int:
    kind = "T" if args.verb == "build-t" else "R"
    x = _structure(args.x)
    alphabet = args.alphabet if args.alphabet is not None else (len(x) + (kind == "R"))
    code = build(kind, x, TruncSpec(args.maxlen, max(1, alphabet)), _pairing(args.pairing))
    doc = structure_to_doc(code.structure)
    doc["provenance"] = code.provenance_doc()
    doc["source_kind"] = kind
    doc["spec"] = {"maxlen": code.spec.max_len, "alphabet": code.spec.alphabet}
    _emit(doc)
    return 0


def cmd_lift_iso(args) -> int:
    x, y = _structure(args.x), _structure(args.y)
    sigma = _witness(args.sigma, MorphKind.ISOMORPHISM)
    _emit(_witness_doc(lift_iso(args.kind, x, y, sigma, _spec(args), _pairing(args.pairing))))
    return 0


def cmd_embed_universal(args) -> int:
    x, y = _structure(args.x), _structure(args.y)
    res = embed_universal_t(x, y, _spec(args), _pairing(args.pairing))
    _emit({
        "map": _witness_doc(res.witness),
        "target_spec": {"maxlen": res.target_spec.max_len, "alphabet": res.target_spec.alphabet},
    })
    return 0


def cmd_weak_epi(args) -> int:
    x, y = _structure(args.x), _structure(args.y)
    f = _witness(args.f, MorphKind.EMBEDDING)
    spec = r_spec(x, args.maxlen)
    _emit(_witness_doc(weak_epi_r(x, y, f, spec, _pairing(args.pairing))))
    return 0


def cmd_oplus(args) -> int:
    op = oplus if args.verb == "oplus" else oplus_rooted
    _emit(structure_to_doc(op(_structure(args.x), _structure(args.z))))
    return 0


def cmd_enum_g(args) -> int:
    for g in enumerate_g(args.k):
        _emit(list(g.images))
    return 0


def _kit(doc: Any) -> WitnessKit:
    from iforge.structures import structure_from_doc

    try:
        prime = [structure_from_doc(d) for d in doc["family_prime"]]
        second = [structure_from_doc(d) for d in doc["family_second"]]
        labels = [int(i) for i in doc["classify"]]
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"kit document: {e}") from None
    if len(labels) != len(second):
        raise UsageError("kit document: one classify entry per family_second member")

    def classify(z: Structure) -> int:
        for member, label in zip(second, labels):
            if member == z or is_isomorphic(member, z):
                return label
        raise UsageError("structure outside the kit")

    return WitnessKit(prime, second, classify)


def cmd_assemble_w(args) -> int:
    kit = _kit(_read_json(args.kit))
    variant = None
    if args.n_classes:
        reps = _read_json(args.n_classes)
        variant = NClasses(tuple((int(a), int(b)) for a, b in reps))
    space = assemble_w(kit, args.k, variant)
    _emit({
        "entries": [{"x": e.x_index, "z": e.z_index, "g": list(e.g.images)} for e in space.entries],
        "S": space.S,
        "F": space.F,
        "images": [structure_to_doc(s) for s in space.images],
    })
    return 0


def cmd_sb(args) -> int:
    try:
        e = FinPartition.from_doc(_read_json(args.e))
        f = FinPartition.from_doc(_read_json(args.f))
    except TypeError as err:
        raise UsageError(f"partition document: {err}") from None
    phi = _map_doc(_read_json(args.phi), args.phi)
    psi = _map_doc(_read_json(args.psi), args.psi)
    res = sb_bijection(e, f, phi, psi)
    _emit({
        "bijection": [[sorted(e.blocks[i]), sorted(f.blocks[j])] for i, j in sorted(res.bijection.items())],
        "phi": [[a, b] for a, b in sorted(res.phi.items())],
        "psi": [[a, b] for a, b in sorted(res.psi.items())],
        "classwise_iso": check_classwise_iso(res.phi, res.psi, e, f),
    })
    return 0


def cmd_suite(args) -> int:
    names = criterion_names()
    if args.filter:
        wanted = [n.strip() for n in args.filter.split(",")]
        unknown = [n for n in wanted if n not in names]
        if unknown:
            raise UsageError(f"unknown criterion {unknown[0]!r}; choose from {', '.join(names)}")
        names = [n for n in names if n in wanted]
    opts = SuiteOptions(seed=args.seed)
    if args.maxlen is not None:
        opts.t_maxlen = args.maxlen
    if args.r_maxlen is not None:
        opts.r_maxlen = args.r_maxlen

    def show(res) -> None:
        if not args.json:
            print(res.line(), flush=True)
            for f in res.failures:
                print(f"    {f}", flush=True)

    results = run_suite(names, opts, show)
    ok = all(r.passed for r in results)
    if args.json:
        _emit({"backend": _backend.BACKEND, "passed": ok, "criteria": [r.to_doc() for r in results]})
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed ({_backend.BACKEND} kernel)")
    return 0 if ok else 1


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="iforge", description="Finite structures, tree codings and their witness maps.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def pairing_opt(sp):
        sp.add_argument("--pairing", choices=[CANTOR.name, SWAPPED.name], default=CANTOR.name)

    for verb in KIND_VERBS:
        sp = sub.add_parser(verb, help=f"least {MorphKind(verb).name.lower().replace('_', ' ')} from A to B")
        sp.add_argument("a")
        sp.add_argument("b")
        sp.add_argument("--budget", type=int, default=None, help="node expansion cap (default IFORGE_BUDGET)")
        sp.set_defaults(fn=cmd_morphism)

    sp = sub.add_parser("validate", help="check a structure against a class")
    sp.add_argument("a")
    sp.add_argument("--class", dest="cls", choices=[c.value for c in StructureClass], default="Graph")
    sp.set_defaults(fn=cmd_validate)
    sp = sub.add_parser("dot", help="render a structure as graphviz DOT")
    sp.add_argument("a")
    sp.set_defaults(fn=cmd_dot)

    sp = sub.add_parser("pair")
    sp.add_argument("n", type=int)
    sp.add_argument("m", type=int)
    pairing_opt(sp)
    sp.set_defaults(fn=cmd_pair)
    sp = sub.add_parser("unpair")
    sp.add_argument("k", type=int)
    pairing_opt(sp)
    sp.set_defaults(fn=cmd_unpair)
    sp = sub.add_parser("rp", help="relevant pair of a sequence and of its even subsequence")
    sp.add_argument("seq", type=int, nargs="*")
    pairing_opt(sp)
    sp.set_defaults(fn=cmd_rp)

    for verb in ("build-t", "build-r"):
        sp = sub.add_parser(verb)
        sp.add_argument("x")
        sp.add_argument("--maxlen", type=int, default=4 if verb == "build-t" else 2)
        sp.add_argument("--alphabet", type=int, default=None, help="default: smallest that fits the graph")
        pairing_opt(sp)
        sp.set_defaults(fn=cmd_build)

    def spec_opts(sp, maxlen):
        sp.add_argument("--maxlen", type=int, default=maxlen)
        sp.add_argument("--alphabet", type=int, default=3)
        pairing_opt(sp)

    sp = sub.add_parser("lift-iso")
    sp.add_argument("kind", choices=["T", "R"])
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("sigma")
    spec_opts(sp, 2)
    sp.set_defaults(fn=cmd_lift_iso)
    sp = sub.add_parser("embed-universal")
    sp.add_argument("x")
    sp.add_argument("y")
    spec_opts(sp, 2)
    sp.set_defaults(fn=cmd_embed_universal)
    sp = sub.add_parser("weak-epi", help="R-code weak epimorphism from an embedding f: x -> y")
    sp.add_argument("x")
    sp.add_argument("y")
    sp.add_argument("f")
    sp.add_argument("--maxlen", type=int, default=2)
    pairing_opt(sp)
    sp.set_defaults(fn=cmd_weak_epi)

    for verb in ("oplus", "oplus-rooted"):
        sp = sub.add_parser(verb)
        sp.add_argument("x")
        sp.add_argument("z")
        sp.set_defaults(fn=cmd_oplus)
    sp = sub.add_parser("enum-g")
    sp.add_argument("k", type=int)
    sp.set_defaults(fn=cmd_enum_g)
    sp = sub.add_parser("assemble-w")
    sp.add_argument("kit")
    sp.add_argument("k", type=int)
    sp.add_argument("--n-classes", default=None, metavar="REPS")
    sp.set_defaults(fn=cmd_assemble_w)

    sp = sub.add_parser("sb", help="Schröder–Bernstein bijection of two partitions")
    for name in ("e", "f", "phi", "psi"):
        sp.add_argument(name)
    sp.set_defaults(fn=cmd_sb)

    sp = sub.add_parser("suite", help="run the acceptance criteria")
    sp.add_argument("--filter", default=None, help="comma-separated criterion names")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--maxlen", type=int, default=None, help="T-code depth (default 4)")
    sp.add_argument("--r-maxlen", type=int, default=None, help="R-code depth (default 2)")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        # universal-embedding labels run to tens of thousands of digits
        sys.set_int_max_str_digits(0)
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except BudgetExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (IforgeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
