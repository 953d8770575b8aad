"""Command-line driver.

Exit status: 0 on success, 2 for parse errors, 3 for violated
preconditions, 4 for inputs outside the supported scope.
"""

from __future__ import annotations

import argparse
import sys

from .bench import FAMILIES, run_bench
from .errors import FastTriError, ParseError, PreconditionError, UnsupportedError
from .formats import chain_to_json, document, dumps, load_system, poly_to_json
from .modarith import DEFAULT_PRIME
from .mpoly import PolyRing
from .parse import parse_poly
from .regchain import RegularChain
from .regops import Context, regular_gcd, regularize_dim0
from .scube import GridConfig, build_cube
from .solver import solve_two_eqs


def _common(parser: argparse.ArgumentParser, npolys: int | None):
    parser.add_argument("--prime", type=int, default=None, help=f"field characteristic (default {DEFAULT_PRIME})")
    parser.add_argument("--vars", default=None, help="comma-separated variables, smallest first")
    parser.add_argument("--seed", type=int, default=None, help="seed for random coordinate shifts")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--out", default=None, help="write output to this file")
    parser.add_argument("--system", default=None, help="YAML system file with prime, vars and polys")
    if npolys:
        parser.add_argument("polys", nargs="*", metavar="POLY")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    ap = argparse.ArgumentParser(prog="fasttri", description="Regular chains and subresultants over Z/pZ.")
    sub = ap.add_subparsers(dest="command", required=True)
    subs = sub.choices

    p = sub.add_parser("resultant", help="resultant of two polynomials in their main variable")
    _common(p, 2)

    p = sub.add_parser("scube", help="subresultant chain via evaluation/interpolation")
    _common(p, 2)
    p.add_argument("--full", action="store_true", help="also interpolate full subresultants")
    p.add_argument("--dump", default=None, help="binary dump of the value tables")

    p = sub.add_parser("reggcd", help="regular gcd sequence modulo a chain")
    _common(p, 2)
    p.add_argument("--chain", action="append", default=[], help="chain polynomial (repeatable)")
    p.add_argument("--assume-radical", action="store_true")

    p = sub.add_parser("regularize", help="split a chain so a polynomial is null or regular")
    _common(p, 1)
    p.add_argument("--chain", action="append", default=[], help="chain polynomial (repeatable)")

    p = sub.add_parser("solve2", help="triangular decomposition of two equations")
    _common(p, 2)
    p.add_argument("--assume-radical", action="store_true")

    p = sub.add_parser("bench", help="timing runs on random systems, CSV output")
    p.add_argument("--family", action="append", choices=FAMILIES, default=None)
    p.add_argument("--degrees", default="8,16,32", help="comma-separated total degrees (may be empty)")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="append CSV rows to this file")
    return ap, subs


def parse_args(argv):
    """Subcommand first, then flags and polynomials in any order."""
    ap, subs = build_parser()
    if not argv or argv[0] not in subs:
        return ap.parse_args(argv)
    rest = argv[1:]
    tail = []
    if "--" in rest:
        cut = rest.index("--")
        rest, tail = rest[:cut], rest[cut + 1:]
    args = subs[argv[0]].parse_intermixed_args(rest)
    if tail:
        if not hasattr(args, "polys"):
            subs[argv[0]].error(f"unexpected arguments: {' '.join(tail)}")
        args.polys = list(args.polys) + tail
    args.command = argv[0]
    return args


class _Inputs:
    def __init__(self, args, count: int):
        system = load_system(args.system) if args.system else None
        prime = args.prime or (system.prime if system else DEFAULT_PRIME)
        if args.vars:
            names = [v.strip() for v in args.vars.split(",") if v.strip()]
        elif system:
            names = system.vars
        else:
            raise ParseError("no variables given (use --vars or --system)")
        self.ring = PolyRing(prime, names)
        srcs = list(args.polys) if args.polys else (list(system.polys.values()) if system else [])
        if len(srcs) != count:
            raise ParseError(f"expected {count} polynomial(s), got {len(srcs)}")
        self.polys = [parse_poly(s, self.ring) for s in srcs]
        chain_src = list(getattr(args, "chain", []) or []) or (system.chain if system else [])
        self.chain = RegularChain([parse_poly(s, self.ring) for s in chain_src], self.ring)
        seed = args.seed if args.seed is not None else (system.seed if system else 0)
        radical = getattr(args, "assume_radical", False) or bool(system and system.assume_radical)
        self.ctx = Context(assume_radical=radical, seed=seed)
        self.seed = seed


def _pair(inp: _Inputs):
    P, Q = inp.polys
    y = P.mvar
    if y is None or Q.mvar != y:
        raise PreconditionError("both polynomials must share the same main variable")
    return (P, Q, y) if P.degree(y) >= Q.degree(y) else (Q, P, y)


def _run(args) -> tuple[str, str]:
    """Return (text output, json output) for the chosen command."""
    inp = _Inputs(args, {"regularize": 1}.get(args.command, 2))
    ring = inp.ring
    if args.command == "resultant":
        P, Q, y = _pair(inp)
        R = build_cube(P, Q, y, GridConfig(seed=inp.seed)).resultant()
        return str(R), dumps(document(ring, {"kind": "poly", "poly": poly_to_json(R)}))

    if args.command == "scube":
        P, Q, y = _pair(inp)
        cube = build_cube(P, Q, y, GridConfig(seed=inp.seed))
        lcs = [cube.subres_lc(j) for j in range(cube.q_deg + 1)]
        lines = []
        if hasattr(cube, "grid") and cube.grid is not None:
            lines.append(f"grid {' x '.join(str(s) for s in cube.grid.shape)}, shift {list(cube.shift)}")
        else:
            lines.append("grid none (classical chain)")
        lines += [f"s_{j} = {s}" for j, s in enumerate(lcs)]
        result = {"kind": "scube", "principal": [poly_to_json(s) for s in lcs]}
        if args.full:
            full = [cube.subres_full(j) for j in range(cube.q_deg + 1)]
            lines += [f"S_{j} = {S}" for j, S in enumerate(full)]
            result["subresultants"] = [poly_to_json(S) for S in full]
        if args.dump:
            if not hasattr(cube, "dump"):
                raise UnsupportedError("the prime is too small for a grid; nothing to dump")
            cube.dump(args.dump)
        return "\n".join(lines), dumps(document(ring, result))

    if args.command == "reggcd":
        P, Q, _ = _pair(inp)
        seq = regular_gcd(P, Q, inp.chain, inp.ctx)
        text = "\n".join(f"{G} | {T}" for G, T in seq)
        pairs = [{"gcd": poly_to_json(G), "chain": chain_to_json(T)} for G, T in seq]
        return text, dumps(document(ring, {"kind": "regular_gcd_sequence", "pairs": pairs}))

    if args.command == "regularize":
        (P,) = inp.polys
        split = regularize_dim0(P, inp.chain, inp.ctx)
        text = "\n".join(f"{tag}: {T}" for tag, T in split)
        branches = [{"tag": tag, "chain": chain_to_json(T)} for tag, T in split]
        return text, dumps(document(ring, {"kind": "split", "branches": branches}))

    if args.command == "solve2":
        P, Q = inp.polys
        dec = solve_two_eqs(P, Q, inp.ctx)
        text = "\n".join(str(T) for T in dec)
        res = {"kind": "decomposition", "chains": [chain_to_json(T) for T in dec], "notes": dec.notes}
        return text, dumps(document(ring, res))
    raise AssertionError(args.command)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + ("\n" if text else ""))
    elif text:
        print(text)


def main(argv=None) -> int:
    args = parse_args(sys.argv[1:] if argv is None else list(argv))
    try:
        if args.command == "bench":
            degrees = [int(d) for d in args.degrees.split(",") if d.strip()]
            families = args.family or ["dense"]
            if args.out:
                run_bench(families, degrees, args.out, prime=args.prime, seed=args.seed)
            else:
                run_bench(families, degrees, prime=args.prime, seed=args.seed, stream=sys.stdout)
            return 0
        text, js = _run(args)
        _emit(js if args.format == "json" else text, args.out)
        return 0
    except FastTriError as exc:
        print(f"fasttri: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"fasttri: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
