"""Command-line interface.

stdout carries JSON (or a plain table with ``--pretty``); diagnostics and
errors go to stderr. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .cayley import (
    CayleyGraph,
    cayley_cyclic,
    export_dot,
    graph_to_json,
    is_connected,
    is_three_connected,
    torus_graph,
)
from .classify import MAX_N, ClassifyOptions, classify, emit
from .distance import SearchOptions, min_distance, min_distance_z
from .equivalence import Triple, canonical_triple, cgp_equivalent
from .gbcode import FAMILIES, GbCode, gb_dimension, parse_literal
from .lattice import lattice_bound

DESK_N_MAX = 50


class DomainError(Exception):
    pass


def _triple(text: str) -> Triple:
    try:
        return Triple.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _vectors(text: str) -> tuple[tuple[int, int], tuple[int, int]]:
    try:
        v1, v2 = text.split(";")
        x1, y1 = (int(x) for x in v1.split(","))
        x2, y2 = (int(x) for x in v2.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x1,y1;x2,y2', got {text!r}") from None
    return (x1, y1), (x2, y2)


def _code_from(args) -> GbCode:
    if getattr(args, "triple", None) is not None:
        return args.triple.code()
    if getattr(args, "literal", None):
        return parse_literal(args.literal)
    raise DomainError("give a code literal or --triple a,b,n")


def _graph_from(args) -> CayleyGraph:
    if args.torus is not None:
        return torus_graph(*args.torus)
    if None in (args.n, args.a, args.b):
        raise DomainError("give --n --a --b or --torus")
    return cayley_cyclic(args.n, args.a, args.b)


def parse_graph_spec(spec: str):
    """``cyclic:n,a,b``, ``torus:x1,y1;x2,y2`` or a code literal ``GB(...)``."""
    spec = spec.strip()
    if spec.startswith("cyclic:"):
        n, a, b = (int(x) for x in spec[7:].split(","))
        return cayley_cyclic(n, a, b)
    if spec.startswith("torus:"):
        return torus_graph(*_vectors(spec[6:]))
    if spec.startswith("GB("):
        return parse_literal(spec)
    raise DomainError(f"unrecognised graph spec {spec!r}")


def _search_opts(args) -> SearchOptions:
    return SearchOptions(
        w_max=args.w_max,
        node_budget=args.budget,
        jobs=args.threads,
        trust_bound=not args.no_bound,
    )


# ---------------------------------------------------------------------------
# commands


def cmd_params(args):
    code = _code_from(args)
    out = {"N": code.N, "k": gb_dimension(code)}
    if args.distance:
        out["d"] = min_distance(code).d
    return out


def cmd_distance(args):
    code = _code_from(args)
    opts = _search_opts(args)
    res = min_distance_z(code, opts) if args.side == "z" else min_distance(code, opts)
    return res.to_json()


def cmd_bound(args):
    code = _code_from(args)
    value = lattice_bound(code)
    if value is None:
        raise DomainError("the lattice bound is not claimed for these parameters")
    return value


def cmd_family(args):
    try:
        code, params = FAMILIES[args.name](args.param)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    out = {
        "family": args.name,
        "param": args.param,
        "literal": code.literal,
        "claimed": [params.N, params.k, params.d],
    }
    if args.verify:
        res = min_distance(code, _search_opts(args))
        out["computed"] = [code.N, res.k, res.d]
        out["pass"] = out["computed"] == out["claimed"]
    return out


def cmd_graph(args):
    g = _graph_from(args)
    if args.format == "dot":
        return export_dot(g)
    return graph_to_json(g)


def cmd_iso(args):
    return cgp_equivalent(parse_graph_spec(args.first), parse_graph_spec(args.second)).to_json()


def cmd_connectivity(args):
    g = _graph_from(args)
    return is_three_connected(g) if args.three else is_connected(g)


def cmd_canon(args):
    return str(canonical_triple(args.triple))


def cmd_classify(args):
    n_max = MAX_N if args.full else args.n_max
    opts = ClassifyOptions(
        cache=args.cache,
        jobs=args.jobs,
        search=_search_opts(args),
        max_new_records=args.max_new_records,
    )
    table = classify(n_max, opts)
    fmt = "md" if args.format == "markdown" else args.format
    text = emit(table, fmt, args.which)
    if not table.complete:
        logging.warning("classification incomplete; rerun to resume from the cache")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return {"rows": len(table.extremal() if args.which == "extremal" else table.groups()),
                "records": len(table.records), "complete": table.complete, "out": args.out}
    return text


def family_rows(m: int, include_kp: bool = False) -> list[tuple[str, int]]:
    rows = [("square", n) for n in range(2, m + 1)]
    rows += [("even", r) for r in range(1, m + 1)]
    rows += [("odd", t) for t in range(1, m)]
    if include_kp:
        rows += [("kp", t) for t in range(1, m)]
    return rows


def cmd_verify_families(args):
    out = []
    for name, p in family_rows(args.max, args.kp):
        code, params = FAMILIES[name](p)
        if code.n > MAX_N and not args.allow_large:
            raise DomainError(f"{name}({p}) has n = {code.n} > {MAX_N}; pass --allow-large")
        res = min_distance(code, _search_opts(args))
        computed = [code.N, res.k, res.d]
        expected = [params.N, params.k, params.d]
        out.append(
            {
                "family": name,
                "param": p,
                "expected": expected,
                "computed": computed,
                "status": res.status,
                "pass": computed == expected,
            }
        )
    return out


# ---------------------------------------------------------------------------
# pretty printing


def _fmt_params(v) -> str:
    return "[[{},{},{}]]".format(*v)


def pretty(command: str, payload) -> str:
    if command == "verify-families":
        lines = [f"{'family':<8}{'param':>6}  {'expected':<14}{'computed':<14}result"]
        for r in payload:
            lines.append(
                f"{r['family']:<8}{r['param']:>6}  {_fmt_params(r['expected']):<14}"
                f"{_fmt_params(r['computed']):<14}{'PASS' if r['pass'] else 'FAIL'}"
            )
        return "\n".join(lines) + "\n"
    if isinstance(payload, str):
        return payload if payload.endswith("\n") else payload + "\n"
    if isinstance(payload, dict):
        width = max(len(k) for k in payload) if payload else 0
        return "".join(f"{k:<{width}}  {json.dumps(v)}\n" for k, v in payload.items())
    return json.dumps(payload) + "\n"


# ---------------------------------------------------------------------------
# parser


def _add_search(p: argparse.ArgumentParser):
    p.add_argument("--w-max", type=int, default=None, help="maximum cycle length searched")
    p.add_argument("--budget", type=int, default=10**8, help="DFS node budget")
    p.add_argument("--threads", type=int, default=1, help="threads for the root fan-out")
    p.add_argument("--no-bound", action="store_true", help="search from length 2, ignoring the lattice bound")


def _add_code(p: argparse.ArgumentParser):
    p.add_argument("literal", nargs="?", help='code literal, e.g. "GB(0,1;0,3;9)"')
    p.add_argument("--triple", type=_triple, help="a,b,n for GB(1+X^a, 1+X^b, n)")


def _add_graph(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--torus", type=_vectors, help="lattice basis 'x1,y1;x2,y2' (use --torus=... if it starts with '-')")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--pretty", action="store_true", help="human-readable output")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="block length and dimension")
    _add_code(p)
    p.add_argument("--distance", action="store_true", help="also compute d")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("distance", help="exact minimum distance")
    _add_code(p)
    p.add_argument("--side", choices=["x", "z"], default="x")
    _add_search(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("bound", help="lattice lower bound on the distance")
    _add_code(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("family", help="construct a member of a named family")
    p.add_argument("name", choices=sorted(FAMILIES))
    p.add_argument("--param", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="compute and compare the distance")
    _add_search(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("graph", help="export a Cayley graph")
    p.add_argument("format", choices=["dot", "json"])
    _add_graph(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("iso", help="equivalence verdict between two graphs or codes")
    p.add_argument("first", help="cyclic:n,a,b | torus:x1,y1;x2,y2 | GB(...)")
    p.add_argument("second")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("connectivity", help="connectivity of a Cayley graph")
    _add_graph(p)
    p.add_argument("--three", action="store_true", help="test 3-connectivity")
    p.set_defaults(func=cmd_connectivity)

    p = sub.add_parser("canon", help="canonical representative of a triple")
    p.add_argument("--triple", type=_triple, required=True)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("classify", help="classify all codes up to a block size")
    p.add_argument("--n-max", type=int, default=DESK_N_MAX)
    p.add_argument("--full", action="store_true", help=f"n_max = {MAX_N}")
    p.add_argument("--cache", default=None, help="JSON-lines cache (default $GB_FORGE_CACHE)")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json", "md", "markdown"], default="csv")
    p.add_argument("--which", choices=["extremal", "full"], default="extremal")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-new-records", type=int, default=None, help=argparse.SUPPRESS)
    _add_search(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-families", help="check the family parameter claims")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--kp", action="store_true", help="include the shifted odd family (kp)")
    p.add_argument("--allow-large", action="store_true", help=argparse.SUPPRESS)
    _add_search(p)
    p.set_defaults(func=cmd_verify_families)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        payload = args.func(args)
    except (DomainError, ValueError, ArithmeticError) as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 1
    if args.pretty:
        sys.stdout.write(pretty(args.command, payload))
    elif isinstance(payload, str) and args.command in ("graph", "classify"):
        sys.stdout.write(payload)
    else:
        sys.stdout.write(json.dumps(payload) + "\n")
    if args.command == "verify-families" and not all(r["pass"] for r in payload):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
