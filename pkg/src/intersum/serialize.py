"""JSON encodings shared by the library and the command line."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactlin import rat, rat_str, saturate, RationalSubspace
from .germ import HomogeneousComponent, Series


def sym_to_json(sym: tuple):
    if sym[0] == "f":
        return {"frac": list(sym[1])}
    if sym[0] == "s":
        return {"s": sym[1]}
    return sym[0]


def sym_from_json(data) -> tuple:
    if isinstance(data, str):
        return (data,)
    if "frac" in data:
        return ("f", tuple(int(x) for x in data["frac"]))
    return ("s", int(data["s"]))


def series_to_json(p: Series) -> list[dict]:
    out = []
    for (e, sm), c in sorted(p.terms.items(), key=lambda kv: (kv[0][0], repr(kv[0][1]))):
        item = {"exponents": list(e), "coeff": rat_str(c)}
        if sm:
            item["symbols"] = [[sym_to_json(sym), k] for sym, k in sm]
        out.append(item)
    return out


def series_from_json(data: list[dict], nvars: int) -> Series:
    terms = {}
    for item in data:
        sm = tuple(sorted((sym_from_json(s), int(k)) for s, k in item.get("symbols", [])))
        terms[(tuple(int(x) for x in item["exponents"]), sm)] = rat(item["coeff"])
    return Series(nvars, terms)


def component_to_json(h: HomogeneousComponent) -> dict:
    return {"degree": h.degree,
            "denominator": [list(w) for w in h.denoms],
            "numerator": series_to_json(h.numerator)}


def component_from_json(data: dict, dim: int) -> HomogeneousComponent:
    denoms = tuple(tuple(int(x) for x in w) for w in data["denominator"])
    return HomogeneousComponent(dim, int(data["degree"]), denoms, series_from_json(data["numerator"], dim))


def vector_to_json(v: Sequence) -> list[str]:
    return [rat_str(Fraction(x)) for x in v]


def vector_from_json(data: Sequence) -> tuple[Fraction, ...]:
    return tuple(rat(x) for x in data)


def subspace_from_json(data: dict | None, d: int) -> RationalSubspace:
    if not data or not data.get("generators"):
        return RationalSubspace.zero(d)
    return saturate([[rat(x) for x in g] for g in data["generators"]], d)


def subspace_to_json(L: RationalSubspace) -> dict:
    return {"generators": [list(b) for b in L.basis]}
