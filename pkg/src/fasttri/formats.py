"""JSON encoding of results and the YAML system-file format.

A polynomial is encoded recursively: a constant is its residue in
``[0, p)``; otherwise ``{"var": name, "coeffs": [c_0, c_1, ...]}`` lists the
coefficients of increasing powers of its main variable, each coefficient
encoded the same way.  Chains are arrays of polynomials.  Every document
carries ``schema``, ``prime`` and ``vars`` next to ``result``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ParseError, PreconditionError
from .mpoly import MultiPoly, PolyRing
from .parse import parse_poly
from .regchain import RegularChain

SCHEMA = "fasttri/1"


def poly_to_json(P: MultiPoly):
    if P.is_constant():
        return P.constant_value()
    v = P.mvar
    return {"var": P.ring.vars[v], "coeffs": [poly_to_json(c) for c in P.coeffs(v)]}


def poly_from_json(obj, ring: PolyRing) -> MultiPoly:
    if isinstance(obj, int):
        return ring.const(obj)
    if not isinstance(obj, dict) or set(obj) != {"var", "coeffs"}:
        raise PreconditionError(f"malformed polynomial object: {obj!r}")
    coeffs = [poly_from_json(c, ring) for c in obj["coeffs"]]
    return MultiPoly.from_coeffs(ring, obj["var"], coeffs)


def chain_to_json(T: RegularChain) -> list:
    return [poly_to_json(t) for t in T.polys]


def chain_from_json(obj, ring: PolyRing) -> RegularChain:
    return RegularChain([poly_from_json(t, ring) for t in obj], ring)


def document(ring: PolyRing, result: dict) -> dict:
    return {"schema": SCHEMA, "prime": ring.p, "vars": list(ring.vars), "result": result}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def read_document(text: str):
    """Parse a JSON document back into ``(ring, result)`` with live objects."""
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise PreconditionError(f"unknown schema {doc.get('schema')!r}")
    ring = PolyRing(doc["prime"], doc["vars"])
    res = doc["result"]
    kind = res["kind"]
    if kind == "poly":
        out = poly_from_json(res["poly"], ring)
    elif kind == "decomposition":
        out = [chain_from_json(c, ring) for c in res["chains"]]
    elif kind == "split":
        out = [(b["tag"], chain_from_json(b["chain"], ring)) for b in res["branches"]]
    elif kind == "regular_gcd_sequence":
        out = [(poly_from_json(b["gcd"], ring), chain_from_json(b["chain"], ring))
               for b in res["pairs"]]
    elif kind == "scube":
        out = {k: [poly_from_json(p, ring) for p in res[k]]
               for k in ("principal", "subresultants") if k in res}
    else:
        raise PreconditionError(f"unknown result kind {kind!r}")
    return ring, out


@dataclass
class SystemFile:
    """Prime, variable order, named polynomials and optional flags."""

    prime: int
    vars: list
    polys: dict
    chain: list = field(default_factory=list)
    assume_radical: bool = False
    seed: int = 0

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.prime, self.vars)

    def polynomials(self) -> list:
        ring = self.ring
        return [parse_poly(src, ring) for src in self.polys.values()]

    def chain_polys(self) -> list:
        ring = self.ring
        return [parse_poly(src, ring) for src in self.chain]


def load_system(path) -> SystemFile:
    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"malformed system file: {exc}",
                         mark.line + 1 if mark else 1, mark.column + 1 if mark else 1) from None
    if not isinstance(data, dict):
        raise ParseError("system file must be a mapping")
    missing = {"prime", "vars", "polys"} - set(data)
    if missing:
        raise ParseError(f"system file lacks {sorted(missing)}")
    polys = data["polys"]
    if isinstance(polys, list):
        polys = {f"P{i + 1}": s for i, s in enumerate(polys)}
    vars_ = data["vars"]
    if isinstance(vars_, str):
        vars_ = [v.strip() for v in vars_.split(",")]
    return SystemFile(
        prime=int(data["prime"]),
        vars=list(vars_),
        polys={str(k): str(v) for k, v in polys.items()},
        chain=[str(c) for c in data.get("chain", [])],
        assume_radical=bool(data.get("assume_radical", False)),
        seed=int(data.get("seed", 0)),
    )
