"""Patching functions on sum-closed subspace families and patched generating functions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .conealg import Cone, close_under_sum as _close, face_subspaces, triangulate
from .exactlin import RationalSubspace, dot, primitive, saturate, solve, sublattice_index
from .genfun import integral_cells, integral_of_cone, intermediate_germ
from .germ import HomogeneousComponent, MeromorphicGerm, Series, germ_with_symbol_T


class PatchError(ValueError):
    pass


@dataclass(frozen=True)
class SubspacePoset:
    """Sum-closed family of subspaces ordered by inclusion."""
    elements: tuple[RationalSubspace, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def below(self, L0: RationalSubspace) -> list[RationalSubspace]:
        return [L for L in self.elements if L.is_subspace_of(L0)]

    def is_sum_closed(self) -> bool:
        return all((A + B) in self.elements for A in self.elements for B in self.elements)

    def to_json(self) -> dict:
        return {"subspaces": [{"generators": [list(b) for b in L.basis]} for L in self.elements]}


def close_under_sum(subspaces: Iterable[RationalSubspace]) -> SubspacePoset:
    return SubspacePoset(_close(subspaces))


def _poset(P: Iterable[RationalSubspace]) -> SubspacePoset:
    return P if isinstance(P, SubspacePoset) else SubspacePoset(tuple(P))


def patching_function(P: Iterable[RationalSubspace]) -> dict[RationalSubspace, Fraction]:
    """ρ(L) = -μ(0̂, L), by the Möbius recursion from the adjoined bottom."""
    P = _poset(P)
    if not P.is_sum_closed():
        raise PatchError("family is not closed under sum")
    rho: dict[RationalSubspace, Fraction] = {}
    for L in sorted(P.elements, key=lambda L: L.dim):
        mu = Fraction(-1) - sum((-rho[M] for M in rho if M != L and M.is_subspace_of(L)), Fraction(0))
        rho[L] = -mu
    return {L: rho[L] for L in P.elements}


def patching_function_linear(P: Iterable[RationalSubspace]) -> dict[RationalSubspace, Fraction]:
    """ρ solving Σ_{L ⊆ L0} ρ(L) = 1 for every L0 in the family."""
    P = _poset(P)
    els = list(P.elements)
    A = [[1 if L.is_subspace_of(L0) else 0 for L in els] for L0 in els]
    x = solve(A, [1] * len(els))
    if x is None:
        raise PatchError("normalization system is inconsistent")
    return dict(zip(els, x))


def simplicial_patching(d: int, k: int, size: int) -> int:
    """Closed form of ρ on the family {L_I : |I| >= d - k} of a simplicial cone."""
    if not d - k <= size <= d:
        raise PatchError("|I| outside the family")
    if size == 0:
        return 1
    if d - k - 1 < 0:
        return 0
    return (-1) ** (size - d + k) * comb(size - 1, d - k - 1)


def patched_germ(c: Cone, family: Iterable[RationalSubspace], apex, order: int, which: str = "S") -> MeromorphicGerm:
    """Σ_L ρ(L) S^L (or M^L) over the family."""
    P = family if isinstance(family, SubspacePoset) else close_under_sum(family)
    rho = patching_function(P)
    total = None
    for L, r in rho.items():
        if r == 0:
            continue
        g = intermediate_germ(c, L, apex, order, which).scale(r)
        total = g if total is None else total + g
    return total if total is not None else MeromorphicGerm(c.dim, order)


def _admissible(c: Cone, k: int, P: SubspacePoset) -> None:
    if not P.is_sum_closed():
        raise PatchError("family is not closed under sum")
    missing = [L for L in face_subspaces(c, k) if L not in P.elements]
    if missing:
        raise PatchError(f"family misses face spans {missing}")


def approximation_difference(c: Cone, family: Iterable[RationalSubspace], s, order: int,
                             which: str = "S") -> MeromorphicGerm:
    P = family if isinstance(family, SubspacePoset) else close_under_sum(family)
    full = intermediate_germ(c, RationalSubspace.zero(c.dim), s, order, which)
    return full - patched_germ(c, P, s, order, which)


def approximation_check(c: Cone, k: int, family: Iterable[RationalSubspace], s, which: str = "S") -> bool:
    """Components of S - S^𝓛 vanish in degrees -d .. -d+k."""
    P = family if isinstance(family, SubspacePoset) else close_under_sum(family)
    _admissible(c, k, P)
    d = c.dim
    diff = approximation_difference(c, P, s, -d + k, which)
    return all(diff.component(m).is_zero() for m in range(-d, -d + k + 1))


def good_gamma_check(c: Cone, k: int, family: Iterable[RationalSubspace], gamma: Sequence[int],
                     order: int | None = None) -> bool:
    """Components of I(c)(ξ + Tγ) of degree <= -d+k vanish in Q[T^±1]."""
    P = family if isinstance(family, SubspacePoset) else close_under_sum(family)
    if any(L.annihilates(gamma) for L in P.elements):
        raise PatchError("γ lies in L^⊥ for some member of the family")
    d = c.dim
    top = -d + k if order is None else max(order, -d + k)
    g = germ_with_symbol_T(integral_cells(c), gamma, top)
    return all(g.component(m).is_zero() for m in range(-d, -d + k + 1))


def _facet_integral_cells(gens: Sequence[Sequence[int]], d: int) -> list[tuple[Fraction, tuple]]:
    """I(q) for a (d-1)-dimensional cone q, measured by the lattice in its span."""
    q = Cone.of(gens, d)
    span = saturate(list(q.generators), d)
    out = []
    for e, cell in triangulate(q):
        vol = sublattice_index(list(cell.generators), span)
        out.append((Fraction(e * (-1) ** (d - 1) * vol), cell.generators))
    return out


def facet_formula_check(c: Cone, v: Sequence, order: int = 0) -> bool:
    """I(c)(ξ) = <ξ,v>^{-1} Σ_q <ν_q, v> I(q)(ξ) with ν_q the primitive outer normals."""
    d = c.dim
    if all(x == 0 for x in v):
        raise PatchError("v must be nonzero")
    lhs = integral_of_cone(c, order)
    pieces = []
    for inner, tight in c.facets():
        nu = tuple(-x for x in inner)
        w = dot(nu, v)
        if w == 0:
            continue
        fgens = [c.generators[i] for i in sorted(tight)]
        if fgens:
            cells = _facet_integral_cells(fgens, d)
        else:
            cells = [(Fraction(1), ())]
        for coeff, gens in cells:
            pieces.append((list(gens) + [tuple(v)], Series.const(d, coeff * w)))
    rhs = MeromorphicGerm.build(d, order, pieces)
    diff = lhs - rhs
    return all(diff.component(m).is_zero() for m in range(-d, order + 1))
