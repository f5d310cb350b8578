"""Intermediate generating functions of shifted rational cones.

The apex is either a rational vector (concrete mode) or ``None`` (symbolic
mode). In symbolic mode fractional parts become the symbols ``("f", lam)``
and coordinates of s become ``("s", i)``.

For a simplicial cone with generators v_I spanning L and the remaining
generators Q = v_{I^c}, the slices are indexed by the projected lattice
Z^k = P Z^d and

    M^L(s, c)(ξ) = M(p(s), cone(P Q))(ζ) · (-1)^l vol(v_I) / ∏_{j∈I} <ξ, v_j>,

where ζ is the pullback <ζ, z> = <ξ, Q (PQ)^{-1} z>.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from itertools import combinations, product
from math import factorial, floor
from typing import Iterable, Sequence

from .conealg import Cone, SignedConeSum, barvinok_decompose, brion_vergne_decompose, in_cone, triangulate
from .exactlin import (RationalSubspace, canonical_line, dot, inverse, mat_mul, mat_vec, primitive, rank, saturate, solve,
                       sublattice_index, transpose)
from .germ import (HomogeneousComponent, MeromorphicGerm, Series, _normalize_denoms, exp_series,
                   germ_with_symbol_T, todd_numerator)
from .stepquasi import QuasiComponent, alcove_probe, frac

Apex = Sequence | None


class GenFunError(ValueError):
    pass


def _s_form(d: int, apex: Apex) -> Series:
    """<ξ, s> as a linear series (symbolic coordinates when apex is None)."""
    if apex is None:
        out = Series(d)
        for i in range(d):
            out = out + Series.xi(d, i).mul(Series.symbol(d, ("s", i)))
        return out
    return Series.linear_form([Fraction(x) for x in apex])


def _exp_fracs(d: int, forms: Sequence[Sequence], lams: Sequence[Sequence[int]], apex: Apex, cap: int) -> Series:
    """exp(Σ_j {<lam_j, s>} <ξ, w_j>) truncated at ``cap``."""
    if apex is not None:
        total = [Fraction(0)] * d
        for w, lam in zip(forms, lams):
            f = frac(lam, apex)
            total = [t + f * x for t, x in zip(total, w)]
        return exp_series(Series.linear_form(total), cap)
    out = Series.const(d, 1)
    for w, lam in zip(forms, lams):
        coeff = Series.symbol(d, ("f", tuple(lam)))
        out = out.mul(exp_series(Series.linear_form(w, coeff), cap), cap)
    return out


def integral_germ(c: Cone, s: Apex, order: int) -> MeromorphicGerm:
    """I(s + c) for a full-dimensional simplicial cone."""
    if not (c.is_full() and c.is_simplicial()):
        raise GenFunError("integral_germ needs a full-dimensional simplicial cone")
    d = c.dim
    cap = order + d
    num = exp_series(_s_form(d, s), cap).scale((-1) ** d * c.index())
    return MeromorphicGerm.build(d, order, [(c.generators, num)])


def integral_of_cone(c: Cone, order: int) -> MeromorphicGerm:
    """I(c) (apex 0) for any full-dimensional pointed cone."""
    d = c.dim
    pieces = []
    for e, cell in triangulate(c):
        pieces.append((cell.generators, Series.const(d, e * (-1) ** d * cell.index())))
    return MeromorphicGerm.build(d, order, pieces)


def integral_cells(c: Cone) -> list[tuple[Fraction, tuple]]:
    """I(c) as a list of (coefficient, generators) with I = Σ coeff / ∏<ξ,v>."""
    d = c.dim
    return [(Fraction(e * (-1) ** d * cell.index()), cell.generators) for e, cell in triangulate(c)]


def discrete_germ_unimodular(u: Cone, apex: Apex, order: int) -> MeromorphicGerm:
    """M(s, u) = exp(Σ_j {-<η_j,s>} <ξ,u_j>) ∏ 1/(1 - e^{<ξ,u_j>})."""
    if not (u.is_full() and u.is_simplicial()) or u.index() != 1:
        raise GenFunError("discrete_germ_unimodular needs a unimodular full-dimensional cone")
    d = u.dim
    cap = order + d
    U = transpose([list(g) for g in u.generators])
    etas = inverse(U)
    lams = [tuple(int(-x) for x in row) for row in etas]
    num = _exp_fracs(d, u.generators, lams, apex, cap)
    for w in u.generators:
        num = num.mul(todd_numerator(w, cap), cap)
    return MeromorphicGerm.build(d, order, [(u.generators, num)])


def _split(gens: Sequence[Sequence[int]], L: RationalSubspace) -> tuple[list, list]:
    inside = [g for g in gens if L.contains(g)]
    outside = [g for g in gens if not L.contains(g)]
    if len(inside) != L.dim or (inside and rank(inside) != L.dim):
        raise GenFunError("cone has no face parallel to L")
    return inside, outside


def _term_pieces(gens: Sequence[Sequence[int]], L: RationalSubspace, apex: Apex, cap: int) -> list:
    """Pieces (denominators, numerator) of M^L(s, cone(gens)) for a simplicial term."""
    d = len(gens[0])
    inside, outside = _split(gens, L)
    const = Fraction((-1) ** len(inside) * (sublattice_index(inside, L) if inside else 1))
    if not outside:
        return [(inside, Series.const(d, const))]
    P = [list(r) for r in L.perp()]
    k = len(P)
    Q = transpose([list(g) for g in outside])
    pull = mat_mul(Q, inverse(mat_mul(P, Q)))
    projected = Cone(k, tuple(primitive(mat_vec(P, g)) for g in outside))
    out = []
    for e, u in barvinok_decompose(projected):
        U = transpose([list(g) for g in u.generators])
        etas = inverse(U)
        forms = [mat_vec(pull, g) for g in u.generators]
        lams = [tuple(int(-x) for x in mat_vec(transpose(P), row)) for row in etas]
        num = _exp_fracs(d, forms, lams, apex, cap)
        for w in forms:
            num = num.mul(todd_numerator(w, cap), cap)
        out.append((list(inside) + forms, num.scale(e * const)))
    return out


def intermediate_germ(c: Cone, L: RationalSubspace, apex: Apex, order: int,
                      which: str = "M", orientation: int = 1,
                      decomposition: SignedConeSum | None = None) -> MeromorphicGerm:
    """M^L(s, c), S^L(s + c) or I(s + c) as a germ exact through degree ``order``."""
    d = c.dim
    if not c.is_full():
        raise GenFunError("intermediate_germ needs a full-dimensional cone")
    if which == "I":
        L = RationalSubspace.full(d)
    if decomposition is None:
        decomposition = brion_vergne_decompose(c, L, orientation)
    cap = order + d
    pieces = []
    for e, term in decomposition:
        if e == 1:
            pieces.extend(_term_pieces(term.generators, L, apex, cap))
        else:
            pieces.extend((den, num.scale(-1)) for den, num in _term_pieces(term.generators, L, apex, cap))
    g = MeromorphicGerm.build(d, order, pieces)
    if which == "M":
        return g
    if which in ("S", "I"):
        return g.times_series(exp_series(_s_form(d, apex), cap))
    raise GenFunError(f"unknown function {which!r}")


def components(c: Cone, L: RationalSubspace, apex: Apex, m_min: int, m_max: int,
               which: str = "M", orientation: int = 1) -> dict[int, HomogeneousComponent | QuasiComponent]:
    g = intermediate_germ(c, L, apex, m_max, which, orientation)
    out = {}
    for m in range(m_min, m_max + 1):
        h = g.component(m).reduced()
        out[m] = QuasiComponent(h) if apex is None else h
    return out


def S_from_M(mcomps: dict[int, HomogeneousComponent], s: Apex, d: int, m_max: int) -> dict[int, HomogeneousComponent]:
    """S^L_[m] = Σ_{r=0}^{m+d} <ξ,s>^r / r! · M^L_[m-r] for -d <= m <= m_max."""
    form = _s_form(d, s)
    powers = [Series.const(d, 1)]
    for r in range(1, m_max + 2 * d + 1):
        powers.append(powers[-1].mul(form))
    out = {}
    for m in range(-d, m_max + 1):
        acc = HomogeneousComponent.zero(d, m)
        for r in range(0, m + d + 1):
            if m - r not in mcomps:
                raise GenFunError(f"component {m - r} of M is missing")
            acc = acc + mcomps[m - r].times(powers[r].scale(Fraction(1, factorial(r))), r)
        out[m] = acc
    return out


# --------------------------------------------------------------------------
# residues
# --------------------------------------------------------------------------

def _restrict(h: HomogeneousComponent, Pv: Sequence[Sequence[int]]) -> HomogeneousComponent:
    """Pull back along ξ = P_v^T ζ (the denominators must stay nonzero)."""
    d = h.dim
    A = transpose(Pv) if Pv else [[] for _ in range(d)]
    num = h.numerator.linear_substitute(A)
    if num.is_zero():
        return HomogeneousComponent.zero(len(Pv), h.degree)
    num, denoms = _normalize_denoms(num, [mat_vec(Pv, w) for w in h.denoms])
    return HomogeneousComponent(len(Pv), h.degree, denoms, num)


def residue_restriction(c: Cone, L: RationalSubspace, s: Sequence, v: Sequence[int], order: int
                        ) -> dict[int, HomogeneousComponent]:
    """Components of (<ξ,v> S^L(s+c))|_{v^⊥}, in coordinates ζ with ξ = P_v^T ζ."""
    d = c.dim
    v = primitive(v)
    Pv = [list(r) for r in saturate([v], d).perp()]
    w, scale = canonical_line(v)
    g = intermediate_germ(c, L, s, order - 1, "S")
    out = {}
    for m in range(-d + 1, order + 1):
        h = g.component(m - 1).clear_to(c.generators)
        if w in h.denoms:
            rest = list(h.denoms)
            rest.remove(w)
            h = HomogeneousComponent(d, m, tuple(rest), h.numerator.scale(scale))
        else:
            h = h.times(Series.linear_form(v), 1)
        out[m] = _restrict(h, Pv)
    return out


def residue_rhs(c: Cone, L: RationalSubspace, s: Sequence, v: Sequence[int], order: int
                ) -> dict[int, HomogeneousComponent]:
    """-S^{p(L)}(p(s) + p(c)) for the projection p along Rv, computed from scratch."""
    d = c.dim
    v = primitive(v)
    Pv = [list(r) for r in saturate([v], d).perp()]
    n = d - 1
    if n == 0:
        return {m: (HomogeneousComponent(0, 0, (), Series.const(0, -1)) if m == 0
                    else HomogeneousComponent.zero(0, m)) for m in range(0, order + 1)}
    gens = [mat_vec(Pv, g) for g in c.generators]
    pc = Cone.of([g for g in gens if any(g)], n)
    pL = saturate([mat_vec(Pv, b) for b in L.basis], n) if L.dim else RationalSubspace.zero(n)
    ps = mat_vec(Pv, s)
    g = intermediate_germ(pc, pL, ps, order, "S")
    return {m: g.component(m).scale(-1) for m in range(-n, order + 1)}


def residue_check(c: Cone, L: RationalSubspace, s: Sequence, v: Sequence[int], order: int) -> bool:
    """Exact check of the restriction identity; off-edge directions must give 0."""
    lhs = residue_restriction(c, L, s, v, order)
    is_edge = primitive(v) in c.generators
    if not is_edge:
        return all(h.is_zero() for h in lhs.values())
    rhs = residue_rhs(c, L, s, v, order)
    for m, h in lhs.items():
        r = rhs.get(m, HomogeneousComponent.zero(h.dim, m))
        if not h.equals(r):
            return False
    return True


# --------------------------------------------------------------------------
# Fourier series
# --------------------------------------------------------------------------

def poisson_truncated(c: Cone, L: RationalSubspace, s: Sequence, m: int, radius: int, xi: Sequence) -> complex:
    """Σ_{γ} e^{2iπ<γ,s>} I(c)(ξ + 2iπγ)_[m] over γ ∈ Λ* ∩ L^⊥ with coefficient sup-norm <= radius.

    γ runs over integer combinations of the basis of Λ* ∩ L^⊥, in order of
    increasing sup-norm of the coefficients, then lexicographically.
    """
    d = c.dim
    cells = integral_cells(c)
    basis = L.perp()
    k = len(basis)
    T = 2j * cmath.pi
    coeffs = sorted(product(range(-radius, radius + 1), repeat=k), key=lambda n: (max((abs(x) for x in n), default=0), n))
    total = 0j
    for n in coeffs:
        gamma = tuple(sum(a * b[i] for a, b in zip(n, basis)) for i in range(d))
        g = germ_with_symbol_T(cells, gamma, m)
        h = g.component(m)
        if h.is_zero():
            continue
        val = h.evaluate(xi, {("T",): T})
        total += cmath.exp(T * float(dot(gamma, s))) * val
    return total


# --------------------------------------------------------------------------
# one-sided continuity
# --------------------------------------------------------------------------

def in_L_minus_c(c: Cone, L: RationalSubspace, v: Sequence) -> bool:
    d = c.dim
    if L.dim == d:
        return True
    P = L.perp()
    return in_cone([-x for x in mat_vec(P, v)], [mat_vec(P, g) for g in c.generators])


def _lagrange_at_zero(ts: Sequence[Fraction]) -> list[Fraction]:
    out = []
    for i, ti in enumerate(ts):
        w = Fraction(1)
        for j, tj in enumerate(ts):
            if j != i:
                w *= (0 - tj) / (ti - tj)
        out.append(w)
    return out


def one_sided_limit_check(c: Cone, L: RationalSubspace, m: int, s0: Sequence, v: Sequence,
                          orientation: int = 1) -> bool:
    """lim_{t→0+} M^L(s0 + t v, c)_[m] = M^L(s0, c)_[m], decided exactly.

    The component is a polynomial in t of degree <= m + d on the alcove
    adjacent to s0 in direction v; it is sampled at m + d + 1 exact points
    and extrapolated to t = 0 by Lagrange interpolation. As a cross-check,
    the fractional parts are also replaced by their affine continuation.
    """
    d = c.dim
    if not in_L_minus_c(c, L, v):
        raise GenFunError("direction is not in L - c")
    g = intermediate_germ(c, L, None, m, "M", orientation)
    qc = QuasiComponent(g.component(m))
    at_s0 = qc.evaluate(s0)
    psi = [eta for eta in qc.psi() if dot(eta, v) != 0]
    t0 = alcove_probe(psi, s0, v)
    npts = m + d + 1
    ts = [t0 * Fraction(j, 2 * npts + 2) for j in range(1, npts + 1)]
    weights = _lagrange_at_zero(ts)
    limit = HomogeneousComponent.zero(d, m)
    for t, w in zip(ts, weights):
        s = [Fraction(a) + t * Fraction(b) for a, b in zip(s0, v)]
        limit = limit + qc.evaluate(s).scale(w)
    mid = [Fraction(a) + t0 / 2 * Fraction(b) for a, b in zip(s0, v)]
    vals = {}
    for sym in qc.component.numerator.symbols():
        lam = sym[1]
        vals[sym] = Fraction(dot(lam, s0)) - floor(Fraction(dot(lam, mid)))
    continued = qc.component.subs(vals)
    return limit.equals(at_s0) and continued.equals(at_s0)
