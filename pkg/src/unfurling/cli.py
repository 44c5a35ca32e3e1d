"""Command-line entry point.

Exit codes: 0 all checks passed, 1 a check failed, 2 precondition failure
(incomplete spectra, no stabilization, non-furling input), 3 field error,
4 parse error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io
from .cartan_graph import (
    CartanError,
    GraphError,
    cartan_matrix,
    check_cartan_column,
    furling_hom_check,
    is_furling,
)
from .completion import verify_iso
from .fixtures import FIXTURES, get_fixture
from .klr_rep import verify_relations
from .params import CannotFactor, ParamError, validate_pack
from .report import PreconditionError, Report, emit_report
from .scalars import FieldError
from .unfurl import (
    IncompleteSpectra,
    NoStabilization,
    build_unfurled,
    complete_closure,
    is_complete,
    sigma_automorphism,
    verify_unfurl_furling,
)

EXIT_OK, EXIT_FAIL, EXIT_PRECONDITION, EXIT_FIELD, EXIT_PARSE = 0, 1, 2, 3, 4
WORKERS_ENV = "UNFURLING_WORKERS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _inputs(p, spectra=True):
    p.add_argument("--fixture", choices=sorted(FIXTURES), help="use a shipped example instead of files")
    p.add_argument("--datum", help="Cartan datum JSON")
    p.add_argument("--pack", help="parameter pack JSON")
    if spectra:
        p.add_argument("--spectra", help="spectra JSON")


def _out(p):
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unfurling", description="Unfurled graphs of KLR parameters and checks on them.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate-params", help="check a parameter pack")
    _inputs(p, spectra=False)
    _out(p)

    p = sub.add_parser("cartan", help="Cartan matrix of a valued graph")
    p.add_argument("--graph", required=True)
    _out(p)

    p = sub.add_parser("unfurl", help="build the unfurled graph")
    _inputs(p)
    _out(p)
    p.add_argument("--dot", help="write Graphviz text here ('-' for stdout)")

    p = sub.add_parser("complete-spectra", help="close spectra under the root correspondence")
    _inputs(p)
    _out(p)
    p.add_argument("--max-iter", type=_positive, default=10)

    p = sub.add_parser("furl-check", help="check a graph map is a furling")
    p.add_argument("--fixture", choices=sorted(FIXTURES), help="check the projection of a fixture's unfurling")
    p.add_argument("--domain")
    p.add_argument("--codomain")
    p.add_argument("--map")
    _out(p)

    p = sub.add_parser("verify-klr", help="check the KLR relations on the polynomial representation")
    _inputs(p, spectra=False)
    _out(p)
    p.add_argument("-n", type=_positive, default=2)
    p.add_argument("--deg", type=int, default=4)
    p.add_argument("--labels", nargs="*", help="label tuples such as 1,2,1")
    p.add_argument("--sample", type=_positive, help="draw this many random labels")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify-nu", help="check the completion isomorphism at finite precision")
    _inputs(p)
    _out(p)
    p.add_argument("-n", type=_positive, default=2)
    p.add_argument("--precision", type=_positive, default=2)
    p.add_argument("--extra", type=int, default=0, help="additional working precision")
    p.add_argument("--components", default="all", help="'all' or 'sample:K'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant", choices=["transport", "literal"], default="transport")

    p = sub.add_parser("sigma-check", help="roots-of-unity automorphism and its quotient")
    _inputs(p, spectra=False)
    _out(p)
    p.add_argument("-d", type=_positive, required=True)
    p.add_argument("--dot", help="write the unfurled graph as Graphviz text")

    p = sub.add_parser("fixtures", help="print a shipped example as JSON")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--out-dir", help="write datum/pack/spectra/graph JSON files here")
    return parser


def _load(args, spectra=True):
    if getattr(args, "fixture", None):
        fx = get_fixture(args.fixture)
        return fx.datum, fx.pack, fx.spectra
    if not args.datum or not args.pack:
        raise io.ParseError("either --fixture or both --datum and --pack are required")
    datum = io.load_datum(args.datum)
    pack = io.load_pack(args.pack, datum)
    sp = None
    if spectra:
        if not args.spectra:
            raise io.ParseError("--spectra is required")
        sp = io.load_spectra(args.spectra, datum, pack)
    return datum, pack, sp


def _write(text: str, dest):
    if dest in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(dest).write_text(text if text.endswith("\n") else text + "\n")


def _finish(rep: Report, args) -> int:
    _write(emit_report(rep), getattr(args, "out", None))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_validate_params(args) -> int:
    _datum, pack, _ = _load(args, spectra=False)
    return _finish(validate_pack(pack), args)


def cmd_cartan(args) -> int:
    g = io.load_graph(args.graph)
    try:
        datum = cartan_matrix(g)
    except (CartanError, GraphError) as exc:
        raise PreconditionError(str(exc)) from exc
    rep = Report()
    rep.add("cartan", True)
    rep.meta["datum"] = datum.to_json()
    return _finish(rep, args)


def cmd_unfurl(args) -> int:
    datum, pack, spectra = _load(args)
    unf = build_unfurled(datum, pack, spectra)
    rep = verify_unfurl_furling(unf, datum)
    rep.meta["graph"] = unf.graph.to_json()
    rep.meta["projection"] = unf.projection.to_json()
    rep.meta["provenance"] = unf.provenance
    if args.dot:
        _write(unf.graph.to_dot("unfurled"), args.dot)
        if args.dot == "-" and not args.out:
            return EXIT_OK if rep.passed else EXIT_FAIL
    return _finish(rep, args)


def cmd_complete_spectra(args) -> int:
    datum, pack, spectra = _load(args)
    try:
        closed, rounds = complete_closure(spectra, pack, args.max_iter)
    except NoStabilization as exc:
        rep = Report()
        rep.add("stabilized", False, max_iter=args.max_iter, size=exc.spectra.size())
        _write(emit_report(rep), args.out)
        return EXIT_PRECONDITION
    rep = Report()
    rep.add("stabilized", True, rounds=rounds)
    rep.add("complete", is_complete(closed, pack)[0])
    rep.meta["spectra"] = closed.to_json()
    return _finish(rep, args)


def cmd_furl_check(args) -> int:
    if args.fixture:
        fx = get_fixture(args.fixture)
        f = build_unfurled(fx.datum, fx.pack, fx.spectra).projection
    else:
        if not (args.domain and args.codomain and args.map):
            raise io.ParseError("--domain, --codomain and --map are required without --fixture")
        X, Y = io.load_graph(args.domain), io.load_graph(args.codomain)
        f = io.load_map(args.map, X, Y)
    rep = is_furling(f)
    if not rep.passed:
        rep.add("furling_precondition", False, reason="map is not a furling; column sums and brackets not evaluated")
        return _finish(rep, args)
    rep.extend(check_cartan_column(f))
    rep.extend(furling_hom_check(f))
    return _finish(rep, args)


def _klr_chunk(payload):
    datum, pack, n, deg, labels = payload
    return verify_relations(datum, pack, n, deg, labels=labels)


def cmd_verify_klr(args) -> int:
    datum, pack, _ = _load(args, spectra=False)
    labels = None
    if args.labels:
        names = {str(i): i for i in datum.index}
        try:
            labels = [tuple(names[x] for x in lab.split(",")) for lab in args.labels]
        except KeyError as exc:
            raise io.ParseError(f"unknown index {exc}") from None
        if any(len(lab) != args.n for lab in labels):
            raise io.ParseError(f"labels must have {args.n} entries")
    elif args.sample:
        import itertools

        every = list(itertools.product(datum.index, repeat=args.n))
        labels = random.Random(args.seed).sample(every, min(args.sample, len(every)))
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1:
        import itertools

        todo = labels if labels is not None else list(itertools.product(datum.index, repeat=args.n))
        chunks = [todo[k::workers] for k in range(workers) if todo[k::workers]]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_klr_chunk, [(datum, pack, args.n, args.deg, c) for c in chunks]))
        rep = merge_relation_reports(parts)
    else:
        rep = verify_relations(datum, pack, args.n, args.deg, labels=labels)
    rep.meta["seed"] = args.seed
    rep.meta["degree_bound"] = args.deg
    return _finish(rep, args)


def merge_relation_reports(parts) -> Report:
    """Combine per-chunk relation reports family by family."""
    fam: dict = {}
    for r in parts:
        for c in r.checks:
            acc = fam.setdefault(c.name, {"instances": 0, "discrepancies": [], "discrepancy_count": 0})
            acc["instances"] += c.details.get("instances", 0)
            acc["discrepancies"].extend(c.details.get("discrepancies", []))
            acc["discrepancy_count"] += c.details.get("discrepancy_count", 0)
    out = Report()
    for name in sorted(fam):
        d = fam[name]
        d["discrepancies"] = sorted(d["discrepancies"], key=str)[:10]
        out.add(name, d["discrepancy_count"] == 0, **d)
    out.meta["labels"] = sum(r.meta.get("labels", 0) for r in parts)
    if parts:
        out.meta["monomials_per_label"] = parts[0].meta.get("monomials_per_label")
    return out


def cmd_verify_nu(args) -> int:
    datum, pack, spectra = _load(args)
    comps = None
    if args.components != "all":
        if not args.components.startswith("sample:"):
            raise io.ParseError("--components must be 'all' or 'sample:K'")
        import itertools

        k = int(args.components.split(":", 1)[1])
        verts = build_unfurled(datum, pack, spectra).graph.vertices
        every = list(itertools.product(verts, repeat=args.n))
        comps = random.Random(args.seed).sample(every, min(k, len(every)))
    rep = verify_iso(datum, pack, spectra, args.n, args.precision, extra=args.extra, variant=args.variant, components=comps)
    rep.meta["seed"] = args.seed
    rep.meta.pop("digests", None)
    return _finish(rep, args)


def cmd_sigma_check(args) -> int:
    datum, pack, _ = _load(args, spectra=False)
    _sigma, rep, unf = sigma_automorphism(datum, pack, args.d)
    rep.meta["graph"] = unf.graph.to_json()
    if args.dot:
        _write(unf.graph.to_dot("unfurled"), args.dot)
    return _finish(rep, args)


def cmd_fixtures(args) -> int:
    fx = get_fixture(args.name)
    doc = {
        "datum": {**fx.datum.to_json(), "field": io.field_to_json(fx.field)},
        "pack": fx.pack.to_json(),
        "spectra": fx.spectra.to_json() if fx.spectra else {},
    }
    if fx.spectra is not None and is_complete(fx.spectra, fx.pack)[0]:
        unf = build_unfurled(fx.datum, fx.pack, fx.spectra)
        doc["expected_graph"] = unf.graph.to_json()
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for key, value in doc.items():
            (out / f"{key}.json").write_text(io.dump(value) + "\n")
    else:
        _write(io.dump(doc), None)
    return EXIT_OK


COMMANDS = {
    "validate-params": cmd_validate_params,
    "cartan": cmd_cartan,
    "unfurl": cmd_unfurl,
    "complete-spectra": cmd_complete_spectra,
    "furl-check": cmd_furl_check,
    "verify-klr": cmd_verify_klr,
    "verify-nu": cmd_verify_nu,
    "sigma-check": cmd_sigma_check,
    "fixtures": cmd_fixtures,
}


def run(argv=None) -> int:
    """Parse arguments, run one command, and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except io.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FieldError as exc:
        print(f"field error: {exc}", file=sys.stderr)
        return EXIT_FIELD
    except (PreconditionError, IncompleteSpectra, CannotFactor) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        report = getattr(exc, "report", None)
        if report is not None:
            _write(emit_report(report), getattr(args, "out", None))
        return EXIT_PRECONDITION
    except (ParamError, GraphError, CartanError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main(argv=None):
    sys.exit(run(argv))
