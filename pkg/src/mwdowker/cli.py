"""Command-line interface: build complexes, compute homology, run the verification suites.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 usage error,
4 cell budget exceeded (see MWD_MAX_CELLS).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import _limits
from .chains import betti
from .persistence import diagrams_equal, filtered_diagrams
from .prodcomplex import ProdComplex, cellular_chain_complex, dowker_product, iterated_quotient
from .relation import FilteredRelation, Relation, RelationError, load_relation
from .simplicial import (
    SimplicialComplex,
    classic_dowker,
    cuboid,
    integer_simplicial_homology,
    multiway_dowker,
    simplexify,
    simplicial_chain_complex,
)
from .ternary import atlas_report, build_atlas, find_transformation, pair_betti, report_ok
from .verify import check_filtered, check_relation, random_relation

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3, 4

CONSTRUCTIONS = ("dowker", "quotient", "cuboid", "multiway-dowker", "classic-dowker", "simp")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _d_max(text: str) -> int:
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("must be an integer") from None
    if d < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return d


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated sizes like 3,3,3") from None
    if not dims or any(n < 1 for n in dims):
        raise argparse.ArgumentTypeError("sizes must be positive")
    return dims


def build_parser() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), help="input format (default: by file extension)")
    common.add_argument("--d-max", type=_d_max, default=3, help="highest homology degree reported (default 3)")
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="also print a readable table on stderr")

    parser = Parser(prog="mwdowker", description="Multiway Dowker complexes of finite relations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    def construction_args(p):
        p.add_argument("input")
        p.add_argument("--construction", "-c", choices=CONSTRUCTIONS, default="dowker")
        p.add_argument(
            "--axis",
            action="append",
            default=[],
            help="axis name (or 0-based index); repeat or comma-separate to quotient several",
        )
        p.add_argument("--side", choices=("first", "second"), default="first", help="for classic-dowker")

    p = sub.add_parser("build", parents=[common], help="dump the maximal faces of a construction")
    construction_args(p)

    p = sub.add_parser("homology", parents=[common], help="Betti numbers of a construction")
    construction_args(p)
    p.add_argument("--field", choices=("F2", "Z"), default="F2")
    p.add_argument("--reduced", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("input", nargs="?")
    p.add_argument("--random", type=int, metavar="N", help="check N random relations instead of a file")
    p.add_argument("--dims", type=_dims, help="axis sizes for --random, e.g. 3,3,3")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --random")
    p.add_argument("--inject-fault", action="store_true", help="corrupt quotient targets (negative test)")

    p = sub.add_parser("persist", parents=[common], help="persistence diagrams of a filtered relation")
    p.add_argument("input")
    p.add_argument("--axis", default="all", help="'all', or axis names separated by commas")
    p.add_argument("--csv", action="store_true", help="emit flat dim,birth,death CSV instead of JSON")

    p = sub.add_parser("ternary", parents=[common], help="the full atlas report of a ternary relation")
    p.add_argument("input")

    p = sub.add_parser("cofiber", parents=[common], help="relative Betti numbers of one natural map")
    p.add_argument("input")
    p.add_argument("--map", required=True, help="e.g. V (top), V>VE (mid) or VF (composite)")
    return parser


# ---------------------------------------------------------------------------


def _load(args):
    try:
        return load_relation(args.input, args.format)
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    except RelationError as exc:
        raise InputError(str(exc)) from None


def _relation(args) -> Relation:
    r = _load(args)
    return r.support() if isinstance(r, FilteredRelation) else r


def _axes(r: Relation, raw: list[str]) -> list[int]:
    keys = [w for item in raw for w in item.split(",") if w]
    out = []
    for key in keys:
        try:
            out.append(r.axis(key))
        except RelationError as exc:
            raise UsageError(str(exc)) from None
    return out


def construct(r: Relation, construction: str, axes: list[int], side: str = "first"):
    if construction == "dowker":
        return dowker_product(r)
    if construction == "cuboid":
        return cuboid(r)
    if construction == "classic-dowker":
        if r.arity != 2:
            raise UsageError("classic-dowker needs a binary relation")
        return classic_dowker(r, side)
    if construction in ("quotient", "multiway-dowker"):
        if not axes:
            raise UsageError(f"{construction} needs --axis")
        if len(set(axes)) >= r.arity:
            raise UsageError("cannot quotient out every axis")
        if construction == "multiway-dowker" and len(axes) == 1:
            return multiway_dowker(r, axes[0])
        q = iterated_quotient(dowker_product(r), axes)
        return q if construction == "quotient" else simplexify(q)
    if construction == "simp":
        p = dowker_product(r)
        if axes:
            if len(set(axes)) >= r.arity:
                raise UsageError("cannot quotient out every axis")
            p = iterated_quotient(p, axes)
        return simplexify(p)
    raise UsageError(f"unknown construction {construction!r}")


def _chains(c, d_max: int):
    if isinstance(c, ProdComplex):
        return cellular_chain_complex(c, d_max)
    return simplicial_chain_complex(c, d_max)


def cmd_build(args) -> tuple[dict, int]:
    r = _relation(args)
    c = construct(r, args.construction, _axes(r, args.axis), args.side)
    doc = c.to_json()
    doc["construction"] = args.construction
    doc["count"] = len(c.maximal)
    return doc, EXIT_OK


def cmd_homology(args) -> tuple[dict, int]:
    r = _relation(args)
    c = construct(r, args.construction, _axes(r, args.axis), args.side)
    doc = {"construction": args.construction, "field": args.field, "d_max": args.d_max}
    if args.field == "Z":
        if not isinstance(c, SimplicialComplex):
            raise UsageError("integer homology is available for simplicial constructions only")
        h = integer_simplicial_homology(c, args.d_max)
        doc.update(h.to_json())
        doc["unknown_from_degree"] = args.d_max + 1
    else:
        doc.update(betti(_chains(c, args.d_max), reduced=args.reduced).to_json())
    return doc, EXIT_OK


def _check_one(job):
    r, d_max, fault = job
    return check_relation(r, d_max, inject_fault=fault)


def cmd_verify(args) -> tuple[dict, int]:
    if args.random is None and args.input is None:
        raise UsageError("give an input file or --random N")
    reports = []
    if args.random is not None:
        if not args.dims:
            raise UsageError("--random needs --dims")
        if not 0 <= args.density <= 1:
            raise UsageError("--density must lie in [0, 1]")
        rng = random.Random(args.seed)
        relations = [random_relation(rng, args.dims, args.density) for _ in range(args.random)]
        jobs = [(r, args.d_max, args.inject_fault) for r in relations]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_check_one, jobs))
        else:
            results = [_check_one(j) for j in jobs]
        for n, (r, checks) in enumerate(zip(relations, results)):
            reports.append({"instance": n, "size": len(r), "checks": checks})
    else:
        loaded = _load(args)
        r = loaded.support() if isinstance(loaded, FilteredRelation) else loaded
        checks = check_relation(r, args.d_max, inject_fault=args.inject_fault)
        if isinstance(loaded, FilteredRelation):
            checks += check_filtered(loaded, args.d_max)
        reports.append({"instance": args.input, "size": len(r), "checks": checks})
    failures = [
        {"instance": rep["instance"], "check": c["check"]} for rep in reports for c in rep["checks"] if not c["ok"]
    ]
    doc = {
        "passed": not failures,
        "instances": len(reports),
        "checks": sum(len(rep["checks"]) for rep in reports),
        "failures": failures,
        "details": reports,
    }
    return doc, EXIT_OK if not failures else EXIT_FAIL


def cmd_persist(args):
    fr = _load(args)
    if not isinstance(fr, FilteredRelation):
        raise InputError("persist needs a relation with a value on every tuple")
    if fr.arity < 2:
        raise UsageError("persist needs arity at least 2")
    if args.axis == "all":
        axes = list(range(fr.arity))
    else:
        axes = _axes(fr.support(), [args.axis])
    diagrams = filtered_diagrams(fr, args.d_max, axes)
    ref = diagrams["cuboid"]
    equal = all(diagrams_equal(ref, d) for d in diagrams.values())
    if args.csv:
        lines = []
        for name, d in diagrams.items():
            body = d.to_csv().splitlines()
            if not lines:
                lines.append("complex," + body[0])
            lines += [f"{name},{row}" for row in body[1:]]
        return "\n".join(lines) + "\n", EXIT_OK
    doc = {
        "d_max": args.d_max,
        "diagrams": {name: d.to_json() for name, d in diagrams.items()},
        "all_equal": equal,
    }
    return doc, EXIT_OK


def cmd_ternary(args):
    r = _relation(args)
    if r.arity != 3:
        raise UsageError("ternary needs a relation of arity 3")
    doc = atlas_report(r, args.d_max)
    doc["passed"] = report_ok(doc)
    return doc, EXIT_OK if doc["passed"] else EXIT_FAIL


def cmd_cofiber(args):
    r = _relation(args)
    if r.arity != 3:
        raise UsageError("cofiber needs a relation of arity 3")
    atlas = build_atlas(r, args.d_max)
    try:
        t = find_transformation(atlas, args.map)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    realizations = [
        {"pair": [big, small], "relative_betti": list(pair_betti(atlas, big, small))} for big, small in t.realizations
    ]
    doc = {
        "map": t.key,
        "kind": t.kind,
        "source": t.source,
        "target": t.target,
        "relative_betti": realizations[0]["relative_betti"],
        "realizations": realizations,
        "d_max": args.d_max,
    }
    return doc, EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "homology": cmd_homology,
    "verify": cmd_verify,
    "persist": cmd_persist,
    "ternary": cmd_ternary,
    "cofiber": cmd_cofiber,
}


def _table(doc, out) -> None:
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, (dict, list)) and len(json.dumps(value)) > 70:
            value = f"<{type(value).__name__} of {len(value)}>"
        print(f"{key:>22}  {value}", file=out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"mwdowker: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, RelationError) as exc:
        print(f"mwdowker: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _limits.CellLimitError as exc:
        print(f"mwdowker: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    text = doc if isinstance(doc, str) else json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.pretty and isinstance(doc, dict):
        _table(doc, sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
