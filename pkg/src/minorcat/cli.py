"""Command-line entry point: ``minorcat <command> ...``.

Exit codes: 0 success (or a nonempty answer), 1 violation / empty answer /
mismatch, 2 unparseable input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .experiments import (ExperimentConfig, cmd_generators, cmd_growth_check, cmd_homology,
                          cmd_torsion_audit, format_table, homology_table, write_jsonl)
from .graphs import GraphError, load_graph, parse_graph_text
from .minors import MinorMorphism, MorphismError, compose, hom_set, od_hom_set, validate
from .quartets import Quartet, admissible_compare, factorization
from .swiatkowski import SwiatkowskiComplex

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load(source: str, directed: bool = False):
    try:
        if directed:
            return parse_graph_text(Path(source).read_text(), directed=True)
        return load_graph(source)
    except (OSError, GraphError) as exc:
        raise InputError(f"{source}: {exc}") from exc


def _morphism(path: str) -> MinorMorphism:
    try:
        return MinorMorphism.from_json(_read_json(path))
    except (KeyError, TypeError, GraphError) as exc:
        raise InputError(f"{path}: not a morphism ({exc})") from exc


def _quartet(path: str) -> Quartet:
    try:
        return Quartet.from_json(_read_json(path))
    except (KeyError, TypeError, GraphError, MorphismError, ValueError) as exc:
        raise InputError(f"{path}: not a quartet ({exc})") from exc


def _n_range(text: str) -> tuple[int, int]:
    sep = ":" if ":" in text else "-"
    try:
        lo, hi = (int(x) for x in text.split(sep, 1)) if sep in text else (int(text),) * 2
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n range {text!r}; use LO:HI") from None
    return lo, hi


def _config(args, command: str) -> ExperimentConfig:
    n_min, n_max = args.n_range if args.n_range else (1, args.nmax)
    try:
        return ExperimentConfig(command=command, graphs=args.graph or [], i_max=args.imax,
                                n_max=n_max, n_min=n_min, max_edges=args.max_edges, out=args.out,
                                jobs=args.jobs, oracle=getattr(args, "oracle", False),
                                timing=getattr(args, "timing", False), max_rank=args.max_rank)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit(rows, out: str | None):
    if out:
        write_jsonl(rows, out)


# commands -------------------------------------------------------------------

def run_homology(args) -> int:
    cfg = _config(args, "homology")
    rows = cmd_homology(cfg, cfg.resolve_graphs())
    print(homology_table(rows))
    _emit(rows, cfg.out)
    return EXIT_FAIL if any(r.status == "mismatch" for r in rows) else EXIT_OK


def run_torsion_audit(args) -> int:
    cfg = _config(args, "torsion-audit")
    report = cmd_torsion_audit(cfg, cfg.resolve_graphs(default_max_edges=5),
                               reproducer_dir=Path(cfg.out).parent if cfg.out else ".")
    print(homology_table(report.rows))
    print()
    print(f"planar: {sum(report.planar.values())} of {len(report.planar)} graphs")
    eps = report.epsilon2_candidate
    print(f"i=2 torsion exponent lcm (epsilon_2 candidate): {eps if eps else 'none observed'}")
    for v in report.violations:
        print(f"VIOLATION {v}")
    if report.reproducer:
        print(f"reproducer written to {report.reproducer}")
    _emit(report.rows, cfg.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def run_generators(args) -> int:
    cfg = _config(args, "generators")
    rows = cmd_generators(cfg, args.i)
    view = [r.to_json() for r in rows]
    print(format_table(view, ["graph", "edges", "rank", "image_rank", "cokernel_rank",
                              "torsion", "minimal_generators"]))
    total = sum(r.minimal_generators for r in rows)
    print(f"\n{len(rows)} classes examined, {total} minimal generators")
    _emit(rows, cfg.out)
    return EXIT_OK


def run_growth(args) -> int:
    cfg = _config(args, "growth-check")
    report = cmd_growth_check(cfg, args.i)
    bad = [r for r in report.counts if not r.ok] + [r for r in report.ranks if not r.ok]
    print(f"alpha_{args.i} = {report.alpha}")
    print(f"morphism counts: {len(report.counts)} pairs, "
          f"{sum(not r.ok for r in report.counts)} violations")
    print(f"rank bounds: {len(report.ranks)} rows, {sum(not r.ok for r in report.ranks)} violations")
    if bad:
        print(format_table([r.to_json() for r in bad], list(bad[0].to_json())))
    _emit(report.counts + report.ranks, cfg.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def run_validate(args) -> int:
    phi = _morphism(args.morphism)
    problems = validate(phi)
    for v in problems:
        print(v)
    print("valid" if not problems else f"{len(problems)} violations")
    return EXIT_FAIL if problems else EXIT_OK


def run_compose(args) -> int:
    phi, psi = _morphism(args.first), _morphism(args.second)
    try:
        out = compose(phi, psi)
    except MorphismError as exc:
        print(f"cannot compose: {exc}")
        return EXIT_FAIL
    print(json.dumps(out.to_json(), indent=2, sort_keys=True))
    return EXIT_OK


def run_homset(args) -> int:
    g, h = _load(args.source, args.directed), _load(args.target, args.directed)
    try:
        homs = od_hom_set(g, h) if args.directed else hom_set(g, h)
    except GraphError as exc:
        raise InputError(str(exc)) from exc
    for k, phi in enumerate(homs):
        print(f"[{k}] " + json.dumps({"vertex_map": phi.vertex_map, "arrow_map": phi.arrow_map},
                                     sort_keys=True))
    print(f"{len(homs)} morphisms")
    if args.out:
        write_jsonl(homs, args.out)
    return EXIT_OK if homs else EXIT_FAIL


def run_quartet(args) -> int:
    mu1, mu2 = _quartet(args.first), _quartet(args.second)
    if mu1.d != mu2.d:
        raise InputError("quartets must share their first object")
    if args.op == "compare":
        result = {-1: "LT", 0: "EQ", 1: "GT"}[admissible_compare(mu1, mu2)]
        print(json.dumps({"compare": result}))
        return EXIT_OK
    found = factorization(mu1, mu2)
    payload = {"leq": found is not None}
    if found is not None:
        psi, n = found
        payload["psi"] = {"vertex_map": psi.vertex_map, "arrow_map": psi.arrow_map}
        payload["n"] = dict(zip(mu2.d_prime.arrows, n))
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK if found is not None else EXIT_FAIL


def run_complex(args) -> int:
    g = _load(args.graph)
    try:
        cx = SwiatkowskiComplex(g, args.imax, args.nmax)
    except (GraphError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    data = cx.to_json(emit_matrices=args.emit_matrices)
    if args.out:
        Path(args.out).write_text(json.dumps(data, sort_keys=True))
    print(format_table(data["bidegrees"], ["i", "n", "rank"]))
    return EXIT_OK


# parser ---------------------------------------------------------------------

def _batch_flags(p, imax=1, nmax=2):
    p.add_argument("--graph", action="append", help="graph file or spec (K5, K3,3, R2, P3, C2, L, *); repeatable")
    p.add_argument("--imax", type=int, default=imax)
    p.add_argument("--nmax", type=int, default=nmax)
    p.add_argument("--n-range", type=_n_range, help="LO:HI, overrides --nmax")
    p.add_argument("--max-edges", type=int, help="enumerate all connected graphs up to this size")
    p.add_argument("--out", help="write JSON lines here")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-rank", type=int, default=ExperimentConfig.max_rank,
                   help="skip bidegrees whose chain groups exceed this rank")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minorcat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="homology table of configuration spaces")
    _batch_flags(p)
    p.add_argument("--oracle", action="store_true", help="cross-check with the cube-complex model")
    p.add_argument("--timing", action="store_true", help="record wall-clock seconds per row")
    p.set_defaults(func=run_homology)

    p = sub.add_parser("torsion-audit", help="check H1 torsion against planarity")
    _batch_flags(p, imax=1, nmax=2)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=run_torsion_audit)

    p = sub.add_parser("generators", help="minimal generators in bidegree (i, i)")
    _batch_flags(p)
    p.add_argument("--i", type=int, default=1)
    p.set_defaults(func=run_generators)

    p = sub.add_parser("growth-check", help="morphism-count and rank growth bounds")
    _batch_flags(p)
    p.add_argument("--i", type=int, default=1)
    p.set_defaults(func=run_growth)

    p = sub.add_parser("validate", help="check a morphism JSON file")
    p.add_argument("morphism")
    p.set_defaults(func=run_validate)

    p = sub.add_parser("compose", help="compose two morphisms (first, then second)")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=run_compose)

    p = sub.add_parser("homset", help="list minor morphisms between two graphs")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--directed", action="store_true", help="read files as ordered directed graphs")
    p.add_argument("--out")
    p.set_defaults(func=run_homset)

    p = sub.add_parser("quartet", help="compare two quartets")
    p.add_argument("op", choices=["compare", "leq"])
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=run_quartet)

    p = sub.add_parser("complex", help="build a reduced complex")
    p.add_argument("op", choices=["build"])
    p.add_argument("--graph", required=True)
    p.add_argument("--imax", type=int, default=2)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--emit-matrices", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=run_complex)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
