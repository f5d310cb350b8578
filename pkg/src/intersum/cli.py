"""Command-line entry point.

Exit codes: 0 success, 2 malformed input, 3 a mathematical precondition
failed, 4 a verification found a counterexample (dumped in the report).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .conealg import Cone, ConeError, barvinok_decompose, brion_vergne_decompose, face_subspaces, triangulate
from .exactlin import LinAlgError, RationalSubspace, rat, rat_str
from .genfun import (GenFunError, components, intermediate_germ, one_sided_limit_check, poisson_truncated,
                     residue_check)
from .germ import GermError
from .patchwork import PatchError, approximation_check, close_under_sum, patched_germ, patching_function
from .polysum import Polytope, PolytopeError, oracle_intermediate_sum, weighted_sum
from .serialize import component_to_json, subspace_from_json, subspace_to_json, vector_from_json, vector_to_json
from .stepquasi import QuasiComponent, StepQuasiError

COMMANDS = ("decompose", "genfun", "patched", "sum", "oracle", "verify")
SUITES = ("poisson", "approximation", "residue", "continuity", "valuation")
MATH_ERRORS = (ConeError, GenFunError, PatchError, PolytopeError, LinAlgError, GermError, StepQuasiError)


class SchemaError(ValueError):
    pass


class InvariantFailure(RuntimeError):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


def _field(data: dict, key: str):
    if key not in data:
        raise SchemaError(f"missing field {key!r}")
    return data[key]


def _parse(fn, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, MATH_ERRORS):
            raise
        raise SchemaError(str(exc)) from exc


def _cone(data: dict) -> Cone:
    return _parse(Cone.from_json, _field(data, "cone"))


def _subspace(data: dict, d: int) -> RationalSubspace:
    return _parse(subspace_from_json, data.get("L"), d)


def _apex(data: dict, d: int):
    apex = data.get("apex", "symbolic")
    if apex == "symbolic":
        return None
    s = _parse(vector_from_json, _field(apex, "concrete"))
    if len(s) != d:
        raise SchemaError("apex has the wrong dimension")
    return s


def _orders(data: dict, args) -> tuple[int, int]:
    lo, hi = data.get("orders", [None, None])
    lo = args.m_min if args.m_min is not None else lo
    hi = args.m_max if args.m_max is not None else hi
    if lo is None or hi is None:
        raise SchemaError("orders are required (input 'orders' or --m-min/--m-max)")
    return int(lo), int(hi)


def _comp_json(h) -> dict:
    if isinstance(h, QuasiComponent):
        return QuasiComponent(h.component.reduced()).to_json()
    return component_to_json(h.reduced())


def _random_rational_vector(rng: random.Random, d: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(d))


def cmd_decompose(data: dict, args, rng) -> dict:
    c = _cone(data)
    method = data.get("method", "triangulate")
    if method == "triangulate":
        D = triangulate(c)
    elif method == "barvinok":
        D = barvinok_decompose(c)
    elif method == "brion_vergne":
        D = brion_vergne_decompose(c, _subspace(data, c.dim), int(data.get("orientation", 1)))
    else:
        raise SchemaError(f"unknown method {method!r}")
    return D.to_json()


def cmd_genfun(data: dict, args, rng) -> dict:
    c = _cone(data)
    L = _subspace(data, c.dim)
    apex = _apex(data, c.dim)
    lo, hi = _orders(data, args)
    which = data.get("function", "M")
    comps = components(c, L, apex, lo, hi, which, int(data.get("orientation", 1)))
    return {"function": which, "components": [_comp_json(comps[m]) for m in range(lo, hi + 1)]}


def _family(data: dict, d: int):
    fam = _field(data, "family")
    subs = [_parse(subspace_from_json, s, d) for s in _field(fam, "subspaces")]
    P = close_under_sum(subs)
    if not fam.get("close_under_sum", True) and len(P) != len(set(subs)):
        raise PatchError("family is not closed under sum")
    return P


def cmd_patched(data: dict, args, rng) -> dict:
    c = _cone(data)
    P = _family(data, c.dim)
    apex = _apex(data, c.dim)
    lo, hi = _orders(data, args)
    which = data.get("function", "S")
    rho = patching_function(P)
    g = patched_germ(c, P, apex, hi, which)
    comps = []
    for m in range(lo, hi + 1):
        h = g.component(m)
        comps.append(_comp_json(QuasiComponent(h) if apex is None else h))
    return {"function": which,
            "rho": [{"L": subspace_to_json(L), "rho": rat_str(r)} for L, r in rho.items()],
            "components": comps}


def _weight(data: dict) -> dict:
    w = _field(data, "weight")
    return {tuple(int(x) for x in m["exponents"]): rat(m.get("coeff", "1")) for m in _field(w, "monomials")}


def cmd_sum(data: dict, args, rng) -> dict:
    p = _parse(Polytope.from_json, _field(data, "polytope"))
    return {"value": rat_str(weighted_sum(p, _subspace(data, p.dim), _parse(_weight, data)))}


def cmd_oracle(data: dict, args, rng) -> dict:
    p = _parse(Polytope.from_json, _field(data, "polytope"))
    return {"value": rat_str(oracle_intermediate_sum(p, _subspace(data, p.dim), _parse(_weight, data)))}


def _verify_approximation(data, args, rng):
    c = _cone(data)
    k = int(_field(data, "k"))
    fam = face_subspaces(c, k)
    samples = int(data.get("samples", 3))
    witnesses = []
    ok = True
    for _ in range(samples):
        s = _random_rational_vector(rng, c.dim)
        passed = approximation_check(c, k, fam, s)
        witnesses.append({"s": vector_to_json(s), "pass": passed})
        ok &= passed
    return ok, witnesses


def _regular_xi(rng, c: Cone, L: RationalSubspace, radius: int):
    for _ in range(100):
        xi = _random_rational_vector(rng, c.dim)
        if all(sum(a * b for a, b in zip(xi, g)) != 0 for g in c.generators):
            return xi
    raise GenFunError("could not draw a regular ξ")


def _verify_poisson(data, args, rng):
    c = _cone(data)
    L = _subspace(data, c.dim)
    s = _apex(data, c.dim)
    if s is None:
        raise SchemaError("the Fourier check needs a concrete apex")
    m = int(_field(data, "m"))
    xi = _parse(vector_from_json, data["xi"]) if "xi" in data else _regular_xi(rng, c, L, args.poisson_radius)
    exact = intermediate_germ(c, L, s, m).component(m).evaluate(xi)
    approx = poisson_truncated(c, L, s, m, args.poisson_radius, xi)
    err = abs(complex(float(exact)) - approx)
    return err <= args.float_tol, [{"xi": vector_to_json(xi), "exact": rat_str(exact),
                                    "truncated": [approx.real, approx.imag], "error": err}]


def _verify_residue(data, args, rng):
    c = _cone(data)
    L = _subspace(data, c.dim)
    s = _apex(data, c.dim) or _random_rational_vector(rng, c.dim)
    v = [int(x) for x in _field(data, "v")]
    order = int(data.get("order", 1))
    ok = residue_check(c, L, s, v, order)
    return ok, [{"s": vector_to_json(s), "v": v}]


def _verify_continuity(data, args, rng):
    c = _cone(data)
    L = _subspace(data, c.dim)
    s0 = _parse(vector_from_json, _field(data, "s0"))
    v = _parse(vector_from_json, _field(data, "v"))
    m = int(_field(data, "m"))
    ok = one_sided_limit_check(c, L, m, s0, v)
    return ok, [{"s0": vector_to_json(s0), "v": vector_to_json(v), "m": m}]


def _verify_valuation(data, args, rng):
    c = _cone(data)
    L = _subspace(data, c.dim)
    s = _apex(data, c.dim) or _random_rational_vector(rng, c.dim)
    lo, hi = _orders(data, args)
    whole = intermediate_germ(c, L, s, hi)
    parts = None
    for e, term in triangulate(c):
        g = intermediate_germ(term, L, s, hi).scale(e)
        parts = g if parts is None else parts + g
    bad = [m for m in range(lo, hi + 1) if not whole.component(m).equals(parts.component(m))]
    return not bad, [{"s": vector_to_json(s), "mismatched_degrees": bad}]


VERIFIERS = {"approximation": _verify_approximation, "poisson": _verify_poisson, "residue": _verify_residue,
             "continuity": _verify_continuity, "valuation": _verify_valuation}


def cmd_verify(data: dict, args, rng) -> dict:
    suite = _field(data, "suite")
    if suite not in VERIFIERS:
        raise SchemaError(f"unknown suite {suite!r}")
    ok, witnesses = VERIFIERS[suite](data, args, rng)
    report = {"suite": suite, "pass": ok, "witnesses": witnesses}
    if not ok:
        raise InvariantFailure(report)
    return report


HANDLERS = {"decompose": cmd_decompose, "genfun": cmd_genfun, "patched": cmd_patched,
            "sum": cmd_sum, "oracle": cmd_oracle, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intersum", description="Intermediate generating functions of cones and polytopes.")
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON request file, or - for stdin")
    ap.add_argument("--output", default="-", help="report path (default stdout)")
    ap.add_argument("--m-min", type=int, default=None)
    ap.add_argument("--m-max", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--poisson-radius", type=int, default=50)
    ap.add_argument("--float-tol", type=float, default=1e-2)
    return ap


def _emit(report: dict, path: str) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    header = {"command": args.command, "seed": args.seed}
    rng = random.Random(args.seed)
    try:
        try:
            raw = sys.stdin.read() if args.input == "-" else open(args.input).read()
            data = json.loads(raw)
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read input: {exc}") from exc
        if not isinstance(data, dict):
            raise SchemaError("input must be a JSON object")
        result = HANDLERS[args.command](data, args, rng)
    except SchemaError as exc:
        _emit({**header, "error": "schema", "message": str(exc)}, args.output)
        return 2
    except InvariantFailure as exc:
        _emit({**header, "error": "invariant", "result": exc.report}, args.output)
        return 4
    except MATH_ERRORS as exc:
        _emit({**header, "error": "precondition", "message": str(exc)}, args.output)
        return 3
    _emit({**header, "result": result}, args.output)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
