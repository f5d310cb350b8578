"""Polytopes, Brion summation over vertices, and weighted intermediate sums.

The brute-force oracle at the end shares no code with the germ machinery:
it slices the polytope, triangulates each slice and integrates polynomials
over simplices with the Dirichlet formula.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil, factorial, floor, prod
from typing import Mapping, Sequence

from .conealg import Cone, in_cone
from .exactlin import (RationalSubspace, det, dot, inverse, mat_mul, mat_vec, nullspace, primitive, rank, rat,
                       rat_str, solve, transpose)
from .genfun import intermediate_germ
from .germ import HomogeneousComponent, MeromorphicGerm

Poly = dict  # exponent tuple -> Fraction


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Polytope:
    """{x : <a_j, x> <= b_j}; bounded and full-dimensional."""
    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def dim(self) -> int:
        return len(self.inequalities[0][0])

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> "Polytope":
        d = len(lows)
        ineq = []
        for i in range(d):
            e = tuple(int(j == i) for j in range(d))
            ineq.append((e, Fraction(highs[i])))
            ineq.append((tuple(-x for x in e), -Fraction(lows[i])))
        return cls(tuple(ineq))

    @classmethod
    def simplex(cls, d: int, scale=1) -> "Polytope":
        """{x >= 0, Σ x_i <= scale}."""
        ineq = [(tuple(-int(j == i) for j in range(d)), Fraction(0)) for i in range(d)]
        ineq.append((tuple([1] * d), Fraction(scale)))
        return cls(tuple(ineq))

    def translate(self, t: Sequence) -> "Polytope":
        return Polytope(tuple((a, b + dot(a, t)) for a, b in self.inequalities))

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) <= b for a, b in self.inequalities)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        d = self.dim
        out = []
        for S in combinations(self.inequalities, d):
            A = [list(a) for a, _ in S]
            if rank(A) < d:
                continue
            x = solve(A, [b for _, b in S])
            if self.contains(x) and x not in out:
                out.append(x)
        return sorted(out)

    def is_bounded(self) -> bool:
        d = self.dim
        normals = [a for a, _ in self.inequalities]
        for i in range(d):
            for sgn in (1, -1):
                e = [sgn * int(j == i) for j in range(d)]
                if not in_cone(e, normals):
                    return False
        return True

    def to_json(self) -> dict:
        return {"inequalities": [{"a": list(a), "b": rat_str(b)} for a, b in self.inequalities]}

    @classmethod
    def from_json(cls, data: dict) -> "Polytope":
        return cls(tuple((tuple(int(x) for x in q["a"]), rat(q["b"])) for q in data["inequalities"]))


def vertices_and_cones(p: Polytope) -> list[tuple[tuple[Fraction, ...], Cone]]:
    """Each vertex with its cone of feasible directions."""
    if not p.is_bounded():
        raise PolytopeError("polytope is unbounded")
    verts = p.vertices()
    if not verts:
        raise PolytopeError("polytope is empty")
    d = p.dim
    out = []
    for s in verts:
        active = [a for a, b in p.inequalities if dot(a, s) == b]
        rays = []
        for S in combinations(active, d - 1):
            if rank([list(a) for a in S]) != d - 1:
                continue
            (r,) = nullspace([list(a) for a in S], d)
            vals = [dot(a, r) for a in active]
            if all(v <= 0 for v in vals):
                pass
            elif all(v >= 0 for v in vals):
                r = tuple(-x for x in r)
            else:
                continue
            r = primitive(r)
            if r not in rays:
                rays.append(r)
        out.append((s, Cone.of(rays, d)))
    return out


def brion_SL(p: Polytope, L: RationalSubspace, order: int) -> MeromorphicGerm:
    """S^L(p) as the sum of S^L(s + c_s) over the vertices."""
    total = None
    for s, c in vertices_and_cones(p):
        g = intermediate_germ(c, L, s, order, "S")
        total = g if total is None else total + g
    return total


def monomial_to_linear_powers(alpha: Sequence[int]) -> list[tuple[Fraction, tuple[int, ...], int]]:
    """x^α = Σ coeff · <p, x>^m / m! with m = |α| (finite-difference polarization)."""
    m = sum(alpha)
    out = []
    for p in product(*(range(a + 1) for a in alpha)):
        if m and not any(p):
            continue
        coeff = (-1) ** (m - sum(p)) * prod(_binom(a, q) for a, q in zip(alpha, p))
        out.append((Fraction(coeff), tuple(p), m))
    return out


def _binom(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k))


def _laurent_const(h: HomogeneousComponent, xi0: Sequence, zeta: Sequence) -> Fraction:
    """ε^0 coefficient of h(xi0 + ε ζ) expanded as a Laurent series in ε."""
    num: dict[int, Fraction] = defaultdict(Fraction)
    for (e, _), c in h.numerator.terms.items():
        poly = {0: Fraction(c)}
        for i, k in enumerate(e):
            for _ in range(k):
                nxt: dict[int, Fraction] = defaultdict(Fraction)
                for j, v in poly.items():
                    nxt[j] += v * xi0[i]
                    nxt[j + 1] += v * zeta[i]
                poly = nxt
        for j, v in poly.items():
            num[j] += v
    shift = 0
    inv: dict[int, Fraction] = {0: Fraction(1)}
    zeros = sum(1 for w in h.denoms if dot(xi0, w) == 0)
    prec = zeros + 1
    for w in h.denoms:
        a, b = Fraction(dot(xi0, w)), Fraction(dot(zeta, w))
        if a == 0:
            if b == 0:
                raise PolytopeError("regularizing direction is singular")
            shift += 1
            series = {0: 1 / b}
        else:
            series = {k: (1 / a) * (-b / a) ** k for k in range(prec)}
        nxt = defaultdict(Fraction)
        for i, x in inv.items():
            for j, y in series.items():
                if i + j < prec:
                    nxt[i + j] += x * y
        inv = nxt
    return sum((num.get(shift - j, Fraction(0)) * x for j, x in inv.items()), Fraction(0))


def _regular_direction(forms: Sequence[Sequence], d: int) -> tuple[Fraction, ...]:
    t = 2
    while True:
        z = tuple(Fraction(t) ** i + Fraction(1, 3 + i) for i in range(d))
        if all(dot(z, w) != 0 for w in forms):
            return z
        t += 1


def weighted_sum(p: Polytope, L: RationalSubspace, h: Mapping[tuple[int, ...], object]) -> Fraction:
    """S^L(p, h) for a polynomial weight given as {exponents: coefficient}."""
    if not h:
        return Fraction(0)
    if any(len(a) != p.dim for a in h):
        raise PolytopeError("weight exponents do not match the dimension")
    top = max(sum(a) for a in h)
    pieces = [(s, c) for s, c in vertices_and_cones(p)]
    germs = [intermediate_germ(c, L, s, top, "S") for s, c in pieces]
    total = Fraction(0)
    for m in sorted({sum(a) for a in h}):
        comps = [g.component(m) for g in germs]
        forms = [w for comp in comps for w in comp.denoms]
        zeta = _regular_direction(forms, p.dim)
        for alpha, coeff in h.items():
            if sum(alpha) != m:
                continue
            for c, xi0, _ in monomial_to_linear_powers(alpha):
                val = sum((_laurent_const(comp, xi0, zeta) for comp in comps), Fraction(0))
                total += Fraction(coeff) * c * val
    return total


# --------------------------------------------------------------------------
# brute-force oracle
# --------------------------------------------------------------------------

def _pmul(a: Poly, b: Poly) -> Poly:
    out: dict = defaultdict(Fraction)
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[tuple(x + y for x, y in zip(e1, e2))] += c1 * c2
    return {e: c for e, c in out.items() if c}


def _affine_dim(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def _slice_simplices(verts: list, tight: list[frozenset], idx: tuple, r: int) -> list[tuple]:
    if len(idx) == r + 1:
        return [idx]
    v0 = idx[0]
    seen = set()
    out = []
    for T in tight:
        F = tuple(i for i in idx if i in T)
        if F in seen or v0 in F or len(F) < r:
            continue
        if _affine_dim([verts[i] for i in F]) != r - 1:
            continue
        seen.add(F)
        for simp in _slice_simplices(verts, tight, F, r - 1):
            out.append(simp + (v0,))
    return out


def _simplex_integral(simp: Sequence[Sequence[Fraction]], origin: Sequence[Fraction], B: Sequence[Sequence[int]],
                      h: Mapping[tuple[int, ...], object]) -> Fraction:
    """∫ h(origin + Σ t_i B_i) dt over the simplex with vertices simp (t-coordinates)."""
    l = len(simp) - 1
    v0 = simp[0]
    D = [[a - b for a, b in zip(v, v0)] for v in simp[1:]]
    vol = abs(det(D)) if l else Fraction(1)
    if vol == 0:
        return Fraction(0)
    d = len(origin)
    xs = []
    for j in range(d):
        base = origin[j] + sum((v0[i] * B[i][j] for i in range(l)), Fraction(0))
        lin = {tuple([0] * l): Fraction(base)}
        for k in range(l):
            coef = sum((D[k][i] * B[i][j] for i in range(l)), Fraction(0))
            if coef:
                e = [0] * l
                e[k] = 1
                lin[tuple(e)] = lin.get(tuple(e), 0) + coef
        xs.append({e: c for e, c in lin.items() if c})
    total = Fraction(0)
    for alpha, coeff in h.items():
        poly = {tuple([0] * l): Fraction(coeff)}
        for j, a in enumerate(alpha):
            for _ in range(a):
                poly = _pmul(poly, xs[j])
        for e, c in poly.items():
            total += c * vol * Fraction(prod(factorial(x) for x in e), factorial(sum(e) + l))
    return total


def _eval_poly(h: Mapping[tuple[int, ...], object], x: Sequence) -> Fraction:
    return sum((Fraction(c) * prod(Fraction(xi) ** a for xi, a in zip(x, alpha)) for alpha, c in h.items()),
               Fraction(0))


def oracle_intermediate_sum(p: Polytope, L: RationalSubspace, h: Mapping[tuple[int, ...], object]) -> Fraction:
    """Σ over projected lattice points y of ∫_{p ∩ (y + L)} h, by slicing and simplex integration."""
    d = p.dim
    if any(len(a) != d for a in h):
        raise PolytopeError("weight exponents do not match the dimension")
    B = [list(b) for b in L.basis]
    l = len(B)
    verts = p.vertices()
    if l == d:
        slices = [tuple(Fraction(0) for _ in range(d))]
    else:
        P = [list(r) for r in L.perp()]
        PPt_inv = inverse(mat_mul(P, transpose(P)))
        lift = mat_mul(transpose(P), PPt_inv)
        proj = [mat_vec(P, v) for v in verts]
        k = len(P)
        ranges = [range(floor(min(q[i] for q in proj)), ceil(max(q[i] for q in proj)) + 1) for i in range(k)]
        slices = [mat_vec(lift, z) for z in product(*ranges)]
    total = Fraction(0)
    for xz in slices:
        if l == 0:
            if p.contains(xz):
                total += _eval_poly(h, xz)
            continue
        cons = [([dot(a, b) for b in B], bnd - dot(a, xz)) for a, bnd in p.inequalities]
        sverts = []
        for S in combinations(range(len(cons)), l):
            A = [cons[i][0] for i in S]
            if rank(A) < l:
                continue
            t = solve(A, [cons[i][1] for i in S])
            if all(dot(a, t) <= b for a, b in cons) and t not in sverts:
                sverts.append(t)
        if _affine_dim(sverts) < l:
            continue
        tight = [frozenset(i for i, t in enumerate(sverts) if dot(a, t) == b) for a, b in cons]
        for simp in _slice_simplices(sverts, tight, tuple(range(len(sverts))), l):
            total += _simplex_integral([sverts[i] for i in simp], xz, B, h)
    return total
