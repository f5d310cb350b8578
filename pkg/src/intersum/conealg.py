"""Rational polyhedral cones and signed decompositions modulo cones with lines.

Duality convention: the dual of ``c`` is ``{ξ : <ξ, x> >= 0 for all x in c}``.
Under polarity, lower-dimensional cones and cones containing lines trade
places, so an identity in the dual that holds modulo lower-dimensional cones
becomes an identity in the primal that holds modulo cones with lines. Both
the unimodular and the subspace-adapted decompositions use that route.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exactlin import (LinAlgError, RationalSubspace, clear_denominators, cone_index, det, dot,
                       inverse, is_zero, mat_vec, nullspace, primitive, rank, saturate, solve, transpose)


class ConeError(ValueError):
    pass


def _facets(gens: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], frozenset]]:
    """Facets of cone(gens) inside its own linear span.

    Returns (primitive inner normal lying in the span, indices of the
    generators on the facet). Cones with lines still get their facets.
    """
    r = rank(gens)
    if r == 0:
        return []
    basis = saturate(gens, len(gens[0])).basis
    seen: dict[frozenset, tuple[int, ...]] = {}
    for S in combinations(range(len(gens)), r - 1):
        sub = [gens[i] for i in S]
        if sub and rank(sub) != r - 1:
            continue
        M = [[dot(b, s) for b in basis] for s in sub]
        ns = nullspace(M, r)
        if len(ns) != 1:
            continue
        n = [sum((a * Fraction(b[j]) for a, b in zip(ns[0], basis)), Fraction(0)) for j in range(len(gens[0]))]
        vals = [dot(n, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            n = [-x for x in n]
        else:
            continue
        tight = frozenset(i for i, v in enumerate(vals) if v == 0)
        if tight not in seen:
            seen[tight] = primitive(n)
    return [(n, t) for t, n in seen.items()]


def contains_line(gens: Sequence[Sequence[int]]) -> bool:
    gens = [g for g in gens if not is_zero(g)]
    if not gens:
        return False
    normals = [n for n, _ in _facets(gens)]
    return rank(normals) < rank(gens)


def in_cone(x: Sequence, gens: Sequence[Sequence]) -> bool:
    """x ∈ cone(gens), by trying every linearly independent subset (Carathéodory)."""
    if is_zero(x):
        return True
    gens = [g for g in gens if not is_zero(g)]
    for r in range(1, min(len(x), len(gens)) + 1):
        for sub in combinations(gens, r):
            if rank(sub) != r:
                continue
            sol = solve(transpose([list(g) for g in sub]), x)
            if sol is not None and all(a >= 0 for a in sol):
                return True
    return False


def _extreme(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    r = rank(gens)
    if r == len(gens):
        return gens
    facets = _facets(gens)
    keep = []
    for i, g in enumerate(gens):
        on = [n for n, t in facets if i in t]
        if (rank(on) if on else 0) == r - 1:
            keep.append(g)
    return keep


@dataclass(frozen=True)
class Cone:
    """Pointed rational cone given by its primitive edge generators."""
    dim: int
    generators: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, generators: Iterable[Sequence], dim: int | None = None) -> "Cone":
        gens: list[tuple[int, ...]] = []
        for g in generators:
            p = primitive(g)
            if p not in gens:
                gens.append(p)
        if dim is None:
            if not gens:
                raise ConeError("dimension needed for the zero cone")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ConeError("generators of different lengths")
        if contains_line(gens):
            raise ConeError("cone contains a line")
        return cls(dim, tuple(_extreme(gens)))

    @property
    def rank(self) -> int:
        return rank(self.generators) if self.generators else 0

    def is_full(self) -> bool:
        return self.rank == self.dim

    def is_simplicial(self) -> bool:
        return self.rank == len(self.generators)

    def index(self) -> int:
        if not (self.is_full() and self.is_simplicial()):
            raise ConeError("index is defined for full-dimensional simplicial cones")
        return cone_index(self.generators)

    def is_unimodular(self) -> bool:
        return self.index() == 1

    def facets(self) -> list[tuple[tuple[int, ...], frozenset]]:
        return _facets(self.generators)

    def contains(self, x: Sequence) -> bool:
        if not self.generators:
            return is_zero(x)
        sp = saturate(self.generators, self.dim)
        if not sp.contains(x):
            return False
        return all(dot(n, x) >= 0 for n, _ in self.facets())

    def interior_contains(self, x: Sequence) -> bool:
        """Relative interior membership."""
        if not self.generators:
            return is_zero(x)
        sp = saturate(self.generators, self.dim)
        return sp.contains(x) and all(dot(n, x) > 0 for n, _ in self.facets())

    def to_json(self) -> dict:
        return {"dim": self.dim, "generators": [list(g) for g in self.generators]}

    @classmethod
    def from_json(cls, data: dict) -> "Cone":
        return cls.of(data["generators"], data.get("dim"))


@dataclass(frozen=True)
class SignedConeSum:
    """Formal Z-combination of simplicial cones, read modulo cones with lines."""
    terms: tuple[tuple[int, Cone], ...]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def simplified(self) -> "SignedConeSum":
        acc: dict[tuple, int] = {}
        order: list[tuple] = []
        cones: dict[tuple, Cone] = {}
        for e, c in self.terms:
            key = tuple(sorted(c.generators))
            if key not in acc:
                order.append(key)
                acc[key] = 0
                cones[key] = c
            acc[key] += e
        out = []
        for key in order:
            n = acc[key]
            out.extend([(1 if n > 0 else -1, cones[key])] * abs(n))
        return SignedConeSum(tuple(out))

    def to_json(self) -> dict:
        return {"terms": [{"sign": e, "generators": [list(g) for g in c.generators]} for e, c in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "SignedConeSum":
        terms = []
        for t in data["terms"]:
            gens = [tuple(int(x) for x in g) for g in t["generators"]]
            terms.append((int(t["sign"]), Cone(len(gens[0]), tuple(primitive(g) for g in gens))))
        return cls(tuple(terms))


def _simplicial(gens: Sequence[Sequence[int]]) -> Cone:
    gens = tuple(primitive(g) for g in gens)
    return Cone(len(gens[0]), gens)


# --------------------------------------------------------------------------
# triangulation
# --------------------------------------------------------------------------

def _pulling(gens: list[tuple[int, ...]], idx: tuple[int, ...]) -> list[tuple[int, ...]]:
    sub = [gens[i] for i in idx]
    r = rank(sub)
    if r == len(idx):
        return [idx]
    r0 = idx[0]
    cells = []
    for _, tight in _facets(sub):
        if 0 in tight:
            continue
        face = tuple(idx[j] for j in sorted(tight))
        for cell in _pulling(gens, face):
            cells.append(cell + (r0,))
    return cells


def _generic_interior_point(gens: Sequence[Sequence[int]], walls: list[Sequence]) -> tuple[Fraction, ...]:
    t = 2
    while True:
        y = tuple(sum((Fraction(t) ** i * g[j] for i, g in enumerate(gens)), Fraction(0))
                  for j in range(len(gens[0])))
        if all(dot(n, y) != 0 for n in walls):
            return y
        t += 1


def _span_normal(sub: Sequence[Sequence[int]], basis: Sequence[Sequence[int]]) -> tuple[Fraction, ...] | None:
    M = [[dot(b, s) for b in basis] for s in sub]
    ns = nullspace(M, len(basis))
    if len(ns) != 1:
        return None
    return tuple(sum((a * b[j] for a, b in zip(ns[0], basis)), Fraction(0)) for j in range(len(basis[0])))


def closed_triangulation(c: Cone) -> list[tuple[tuple[int, ...], ...]]:
    """Cells of the pulling triangulation (generator-list order), as generator tuples."""
    gens = list(c.generators)
    if not gens:
        return [()]
    return [tuple(gens[i] for i in sorted(cell)) for cell in _pulling(gens, tuple(range(len(gens))))]


def triangulate(c: Cone) -> SignedConeSum:
    """Signed simplicial decomposition of [c] using only c's edges.

    The closed pulling cells overlap on walls; each cell is made half-open
    with respect to a generic interior direction y, and a half-open cell is
    rewritten, modulo cones with lines, as a signed closed cone with some
    generators negated. The result is exact modulo cones with lines.
    """
    if not c.generators:
        return SignedConeSum(((1, c),))
    if c.is_simplicial():
        return SignedConeSum(((1, c),))
    cells = closed_triangulation(c)
    basis = saturate(c.generators, c.dim).basis
    r = len(basis)
    walls = []
    for cell in cells:
        for sub in combinations(cell, r - 1):
            n = _span_normal(sub, basis)
            if n is not None:
                walls.append(n)
    y = _generic_interior_point(c.generators, walls)
    terms = []
    for cell in cells:
        mu = _coords_in(cell, y)
        gens = [g if m > 0 else tuple(-x for x in g) for g, m in zip(cell, mu)]
        sign = (-1) ** sum(1 for m in mu if m < 0)
        terms.append((sign, Cone(c.dim, tuple(gens))))
    return SignedConeSum(tuple(terms))


def _coords_in(gens: Sequence[Sequence[int]], y: Sequence) -> tuple[Fraction, ...]:
    x = solve(transpose([list(g) for g in gens]), y)
    if x is None:
        raise ConeError("point outside the span of the cell")
    return x


# --------------------------------------------------------------------------
# duality and unimodular decomposition
# --------------------------------------------------------------------------

def dual_cone(c: Cone) -> Cone:
    """Generators of {ξ : <ξ,x> >= 0 on c}; c must be full-dimensional."""
    if not c.is_full():
        raise ConeError("dual of a non-full-dimensional cone has a line")
    if c.is_simplicial():
        Vinv = inverse([list(g) for g in c.generators])
        return Cone(c.dim, tuple(primitive(col) for col in transpose(Vinv)))
    return Cone.of([n for n, _ in c.facets()], c.dim)


def _simplicial_dual(gens: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    Vinv = inverse([list(g) for g in gens])
    return tuple(primitive(col) for col in transpose(Vinv))


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _group_elements(U: Sequence[Sequence[int]]) -> list[tuple[Fraction, ...]]:
    """Representatives in [0,1)^d of {α : U α ∈ Z^d} modulo Z^d (U has columns u_i)."""
    Uinv = inverse(U)
    d = len(U)
    gens = [tuple(_frac(Uinv[i][j]) for i in range(d)) for j in range(d)]
    zero = tuple(Fraction(0) for _ in range(d))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple(_frac(x + y) for x, y in zip(a, g))
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return sorted(seen - {zero})


def _short_vector(gens: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """Lattice vector w = Σ α_i u_i with max |α_i| minimal and some α_i > 0."""
    U = transpose([list(g) for g in gens])
    best = None
    for a in _group_elements(U):
        alpha = tuple(x if x <= Fraction(1, 2) else x - 1 for x in a)
        key = (max(abs(x) for x in alpha), sum(abs(x) for x in alpha), alpha)
        if best is None or key < best[0]:
            best = (key, alpha)
    alpha = best[1]
    if all(x <= 0 for x in alpha):
        alpha = tuple(-x for x in alpha)
    w = mat_vec(U, alpha)
    return tuple(int(x) for x in w), alpha


def _signed_replace(gens: tuple, w: tuple, alpha: Sequence[Fraction], frozen: Iterable[int] = ()) -> list[tuple[int, tuple]]:
    """[cone(gens)] ≡ Σ sign(α_i) [gens with u_i := w] modulo lower-dimensional cones."""
    frozen = set(frozen)
    out = []
    for i, a in enumerate(alpha):
        if a == 0 or i in frozen:
            continue
        new = list(gens)
        new[i] = primitive(w)
        out.append((1 if a > 0 else -1, tuple(new)))
    return out


def _unimodular_dual_pieces(gens: tuple) -> list[tuple[int, tuple]]:
    out = []
    stack = [(1, gens)]
    while stack:
        e, g = stack.pop()
        if abs(det([list(x) for x in g])) == 1:
            out.append((e, g))
            continue
        w, alpha = _short_vector(g)
        for e2, g2 in reversed(_signed_replace(g, w, alpha)):
            stack.append((e * e2, g2))
    return out


def barvinok_decompose(c: Cone) -> SignedConeSum:
    """Signed sum of unimodular cones ≡ [c] modulo cones with lines."""
    if not (c.is_full() and c.is_simplicial()):
        raise ConeError("barvinok_decompose needs a full-dimensional simplicial cone")
    if c.index() == 1:
        return SignedConeSum(((1, c),))
    pieces = _unimodular_dual_pieces(_simplicial_dual(c.generators))
    return SignedConeSum(tuple((e, _simplicial(_simplicial_dual(g))) for e, g in pieces))


def brion_vergne_decompose(c: Cone, L: RationalSubspace, orientation: int = 1) -> SignedConeSum:
    """Signed simplicial cones, each with dim(L) generators spanning L.

    Works on the dual: the dual cone is triangulated, then each basis
    covector of Λ* ∩ L^⊥ (times ``orientation``) is inserted by the signed
    replacement identity, never displacing previously inserted covectors.
    Dualizing back gives cones whose remaining generators lie in L.
    """
    if not c.is_full():
        raise ConeError("brion_vergne_decompose needs a full-dimensional cone")
    d = c.dim
    if L.dim == 0:
        return triangulate(c)
    if L.dim == d:
        return triangulate(c)
    perp = [tuple(orientation * x for x in w) for w in L.perp()]
    dual = dual_cone(c)
    cells = [(1, cell) for cell in closed_triangulation(dual)]
    for omega in perp:
        nxt = []
        for e, g in cells:
            present = [i for i, u in enumerate(g) if L.annihilates(u)]
            alpha = _coords_in(g, omega)
            w = tuple(Fraction(x) for x in omega)
            for i in present:
                w = tuple(x - alpha[i] * Fraction(u) for x, u in zip(w, g[i]))
            if is_zero(w):
                nxt.append((e, g))
                continue
            w = primitive(w)
            alpha = _coords_in(g, w)
            if all(a <= 0 for a in alpha):
                w = tuple(-x for x in w)
                alpha = tuple(-a for a in alpha)
            for e2, g2 in _signed_replace(g, w, alpha, present):
                nxt.append((e * e2, g2))
        cells = nxt
    return SignedConeSum(tuple((e, _simplicial(_simplicial_dual(g))) for e, g in cells)).simplified()


# --------------------------------------------------------------------------
# faces
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceSubspaceFamily:
    """Sum-closed family of rational subspaces."""
    subspaces: tuple[RationalSubspace, ...]

    def __iter__(self):
        return iter(self.subspaces)

    def __len__(self) -> int:
        return len(self.subspaces)

    def __contains__(self, L: RationalSubspace) -> bool:
        return L in self.subspaces


def close_under_sum(subspaces: Iterable[RationalSubspace]) -> tuple[RationalSubspace, ...]:
    items: list[RationalSubspace] = []
    for L in subspaces:
        if L not in items:
            items.append(L)
    changed = True
    while changed:
        changed = False
        for A, B in combinations(list(items), 2):
            S = A + B
            if S not in items:
                items.append(S)
                changed = True
    return tuple(sorted(items, key=lambda L: (L.dim, L.basis)))


def faces(c: Cone) -> list[tuple[tuple[int, ...], ...]]:
    """All faces of a pointed cone, as tuples of generators (the apex is ())."""
    gens = c.generators
    facet_sets = [t for _, t in c.facets()]
    found = {frozenset(range(len(gens)))}
    frontier = list(found)
    while frontier:
        nxt = []
        for f in frontier:
            for t in facet_sets:
                g = f & t
                if g != f and g not in found:
                    found.add(g)
                    nxt.append(g)
        frontier = nxt
    return [tuple(gens[i] for i in sorted(f)) for f in sorted(found, key=lambda s: (len(s), sorted(s)))]


def face_subspaces(c: Cone, k: int) -> FaceSubspaceFamily:
    """Sum-closure of lin(f) over faces f of codimension at most k."""
    d = c.dim
    if not 0 <= k <= d:
        raise ConeError("k must lie between 0 and d")
    spans = []
    for f in faces(c):
        r = rank(f) if f else 0
        if d - r <= k:
            spans.append(saturate(list(f), d) if f else RationalSubspace.zero(d))
    return FaceSubspaceFamily(close_under_sum(spans))
