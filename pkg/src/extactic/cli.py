"""Command line front end.

Every subcommand prints one JSON document (``--format json``, the default)
or a short key/value listing (``--format text``) on stdout.  Exit codes: 0
success, 2 bad input, 3 broken invariant, 4 falsified claim; the corpus
subcommand exits 1 when a criterion fails.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import parse_poly
from .errors import ExtacticError, InputError
from .webs import XYM, AffineFoliation, AffineWeb, check_degree, web_degree

SCHEMA = 1
DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# input helpers ----------------------------------------------------------------


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise InputError(f"--{name.replace('_', '-')} is required for {args.command}")


def _foliation(args) -> AffineFoliation:
    v = AffineFoliation.parse(args.field, 0)
    r = args.r if args.r is not None else web_degree(v, args.seed)
    v = AffineFoliation(v.A, v.B, r)
    if args.r is not None:
        check_degree(v, args.seed)
    return v


def _web(args) -> AffineWeb:
    P = parse_poly(args.slope, XYM)
    w = AffineWeb(P, 0)
    r = args.r if args.r is not None else web_degree(w, args.seed)
    w = AffineWeb(P, r)
    if args.r is not None:
        check_degree(w, args.seed)
    return w


def _web_or_foliation(args):
    if args.field is not None:
        return _foliation(args)
    if args.slope is not None:
        return _web(args)
    raise InputError(f"{args.command} needs --field or --slope")


def _surface(args):
    from .surfaces import ProjSurface

    _require(args, "surface")
    return ProjSurface.parse(args.surface)


def _sigma(args):
    from .contact import SymplecticForm

    return SymplecticForm.parse(args.sigma or "standard")


def _lines_json(lines) -> list:
    return [L.to_json() for L in lines]


# subcommands --------------------------------------------------------------------


def cmd_extactic(args) -> dict:
    from .webs import extactic_foliation

    _require(args, "field", "n")
    v = _foliation(args)
    res = extactic_foliation(v, args.n, chart_check=args.chart_check, seed=args.seed)
    return dict(res.to_json(), n=args.n, r=v.declared_degree, d=1)


def cmd_web_extactic(args) -> dict:
    from .webs import extactic_web

    _require(args, "slope", "n")
    w = _web(args)
    res = extactic_web(w, args.n, chart_check=args.chart_check, seed=args.seed)
    return dict(res.to_json(), n=args.n, r=w.declared_degree, d=w.d)


def cmd_discriminant(args) -> dict:
    if args.surface is not None:
        from .surfaces import discriminant_II, parabolic_check

        S = _surface(args)
        D = discriminant_II(S.F)
        ratio = parabolic_check(S.F) if D else None
        return {
            "kind": "second fundamental form",
            "discriminant": str(D),
            "degree": D.total_degree() if D else None,
            "hessian_ratio": None if ratio is None else str(ratio),
        }
    from .webs import web_discriminant

    _require(args, "slope")
    w = _web(args)
    D = web_discriminant(w)
    return {"kind": "web", "discriminant": str(D), "degree": D.total_degree(), "d": w.d, "r": w.declared_degree}


def cmd_invariant_curves(args) -> dict:
    from .webs import extactic_foliation, extactic_web, invariant_curves_from_extactic

    _require(args, "n")
    w = _web_or_foliation(args)
    res = extactic_foliation(w, args.n) if isinstance(w, AffineFoliation) else extactic_web(w, args.n)
    curves = invariant_curves_from_extactic(w, args.n, result=res) if not res.vanishes_identically else []
    return {
        "n": args.n,
        "vanishes_identically": res.vanishes_identically,
        "curves": [{"curve": str(f), "multiplicity": e} for f, e in curves],
        "infinity_multiplicity": res.infinity_multiplicity,
    }


def cmd_degree_formula(args) -> dict:
    from .webs import degree_formula

    _require(args, "n", "d", "r")
    return {"n": args.n, "d": args.d, "r": args.r, "degree": degree_formula(args.n, args.d, args.r)}


def cmd_lines(args) -> dict:
    from .surfaces import InfiniteFamily, lines_on_surface, salmon_bound

    S = _surface(args)
    lines, report = lines_on_surface(S.F, seed=args.seed, with_report=True)
    if isinstance(lines, InfiniteFamily):
        return dict(lines.to_json(), surface=str(S.F), charts=report)
    out = {"surface": str(S.F), "d": S.d, "count": len(lines), "charts": report, "lines": _lines_json(lines)}
    if S.d >= 3:
        out["salmon_bound"] = salmon_bound(S.d)[0]
    return out


def cmd_flecnodal(args) -> dict:
    from .surfaces import flecnodal, salmon_bound

    S = _surface(args)
    G, info = flecnodal(S.F, with_raw=True)
    bound, accounting = salmon_bound(S.d)
    return {
        "surface": str(S.F),
        "flecnodal": str(G),
        "degree": G.total_degree() if G else None,
        "target_degree": 11 * S.d - 24,
        "elimination": info,
        "salmon_bound": bound,
        "accounting": list(accounting),
    }


def cmd_involutive(args) -> dict:
    from .contact import involutive_lines_on_surface
    from .surfaces import InfiniteFamily

    S = _surface(args)
    sigma = _sigma(args)
    lines = involutive_lines_on_surface(S, sigma, seed=args.seed)
    if isinstance(lines, InfiniteFamily):
        return lines.to_json()
    return {
        "surface": str(S.F),
        "sigma": sigma.to_json(),
        "count": len(lines),
        "bound": 3 * S.d ** 2 - 4 * S.d,
        "lines": _lines_json(lines),
    }


def cmd_tangency(args) -> dict:
    from .contact import tangency_divisor

    S = _surface(args)
    sigma = _sigma(args)
    T, info = tangency_divisor(S, sigma, with_raw=True)
    return {
        "surface": str(S.F),
        "sigma": sigma.to_json(),
        "tangency": str(T),
        "degree": T.total_degree() if T else None,
        "target_degree": 3 * S.d - 4,
        "elimination": info,
    }


def cmd_chern(args) -> dict:
    from .contact import contact_zero_length, disjoint_bound, normal_chern_coefficient

    _require(args, "d", "m")
    return {
        "d": args.d,
        "m": args.m,
        "contact_zero_length": str(contact_zero_length(args.d, args.m)),
        "normal_chern_coefficient": str(normal_chern_coefficient(args.d, args.m)),
        "disjoint_bound": disjoint_bound(args.d, args.m),
    }


def cmd_rams(args) -> dict:
    from .contact import disjoint_bound, rams_family

    _require(args, "d")
    R = rams_family(args.d)
    out = R.to_json()
    out["disjoint_bound"] = disjoint_bound(args.d, 1)
    out["lines"] = _lines_json(R.lines)
    return out


def cmd_jet_rank(args) -> dict:
    from .contact import jet_rank, jet_rank_series

    _require(args, "k", "m")
    a, b = jet_rank(args.k, args.m), jet_rank_series(args.k, args.m)
    if a != b:
        from .errors import InvariantViolation

        raise InvariantViolation(f"partition count {a} and series coefficient {b} disagree")
    return {"k": args.k, "m": args.m, "rank": a}


def cmd_corpus(args) -> dict:
    from .corpus import run_corpus

    only = None
    if args.only:
        try:
            only = {int(v) for v in args.only.split(",")}
        except ValueError as exc:
            raise InputError("--only takes a comma separated list of criterion numbers") from exc
    results = run_corpus(only, seed=args.seed, echo=lambda r: print(r.line(), file=sys.stderr, flush=True))
    return {
        "criteria": [r.to_json() for r in results],
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
    }


COMMANDS = {
    "extactic": (cmd_extactic, "n-extactic of a planar foliation given as --field 'A;B'"),
    "web-extactic": (cmd_web_extactic, "n-extactic of a web given by its slope polynomial --slope P(x,y,m)"),
    "discriminant": (cmd_discriminant, "web discriminant (--slope) or discriminant of II (--surface)"),
    "invariant-curves": (cmd_invariant_curves, "invariant curves of degree <= n read off the extactic"),
    "degree-formula": (cmd_degree_formula, "expected degree of the n-extactic of a d-web of degree r"),
    "lines": (cmd_lines, "all lines on a surface in P^3"),
    "flecnodal": (cmd_flecnodal, "flecnodal polynomial of a surface"),
    "involutive": (cmd_involutive, "involutive lines on a surface for a symplectic form"),
    "tangency": (cmd_tangency, "tangency polynomial of the contact distribution"),
    "chern": (cmd_chern, "contact zero-scheme length and disjointness bound"),
    "rams": (cmd_rams, "the sharp family of skew involutive lines"),
    "jet-rank": (cmd_jet_rank, "rank of the weighted degree m jet differentials of order k"),
    "corpus": (cmd_corpus, "run the acceptance corpus"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int, help="degree of the osculating curves")
    common.add_argument("--d", type=int, help="number of web directions, or surface degree")
    common.add_argument("--r", type=int, help="web degree (validated against a tangency count)")
    common.add_argument("--m", type=int, help="plane dimension, or jet weight")
    common.add_argument("--k", type=int, help="jet order")
    common.add_argument("--field", help="vector field 'A;B' in x, y")
    common.add_argument("--slope", help="slope polynomial in x, y, m")
    common.add_argument("--surface", help="homogeneous polynomial in x0..x3")
    common.add_argument("--sigma", help="'standard', 'rams' or a JSON antisymmetric matrix")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for generic random choices")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--chart-check", action="store_true", help="recompute the line at infinity in a second chart")
    common.add_argument("--only", help="corpus: comma separated criterion numbers")

    parser = _Parser(prog="extactic", description="Extactic divisors of webs and lines on surfaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def _emit(body: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(body, indent=2, sort_keys=False, default=str) + "\n")
        return
    for key, value in body.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, default=str)
        stream.write(f"{key}: {value}\n")


def run(argv=None) -> int:
    fmt = "json"
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        fmt = args.format if args.command else fmt
        if not args.command:
            raise InputError("a subcommand is required: " + ", ".join(COMMANDS))
        handler = COMMANDS[args.command][0]
        result = handler(args)
        body = {"schema": SCHEMA, "command": args.command, "seed": args.seed, "ok": True, "result": result}
        _emit(body, fmt)
        if args.command == "corpus" and result["failed"]:
            return 1
        return 0
    except ExtacticError as exc:
        body = {"schema": SCHEMA, "ok": False}
        body.update(exc.to_json())
        _emit(body, fmt)
        print(f"extactic: {exc}", file=sys.stderr)
        return exc.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
