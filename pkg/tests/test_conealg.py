import math
from fractions import Fraction as F
from itertools import product

import pytest

import oracles
from intersum.conealg import (Cone, ConeError, SignedConeSum, barvinok_decompose, brion_vergne_decompose,
                              closed_triangulation, dual_cone, face_subspaces, faces, in_cone, triangulate)
from intersum.exactlin import RationalSubspace, saturate

CONES = {
    "quadrant": [(1, 0), (0, 1)],
    "index2": [(1, 2), (1, 0)],
    "index5": [(1, 0), (2, 5)],
    "index7": [(1, 0), (1, 7)],
    "pentagon2d": [(1, 0), (1, 1), (0, 1), (-1, 3)],
    "octant": [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    "index6": [(1, 0, 0), (1, 2, 0), (1, 1, 3)],
    "square3d": [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)],
}


def dual_interior_point(c):
    """A ξ with <ξ,v> < 0 for every generator: minus the sum of the inner facet normals."""
    nsum = [0] * c.dim
    for normal, _ in c.facets():
        nsum = [a + b for a, b in zip(nsum, normal)]
    return [-F(x) for x in nsum]


def brute_sum(c, xi, radius):
    normals = [tuple(int(a) for a in n) for n, _ in c.facets()]
    total = 0.0
    for x in product(range(-radius, radius + 1), repeat=c.dim):
        if all(sum(a * b for a, b in zip(n, x)) >= 0 for n in normals):
            total += math.exp(sum(a * b for a, b in zip(xi, x)))
    return total


def closed_form(gens, xi):
    """Σ_box e^{<ξ,x>} / ∏(1 - e^{<ξ,v>}) for the closed simplicial cone."""
    num = sum(math.exp(sum(a * b for a, b in zip(xi, x))) for x in oracles.box_points(gens, [0] * len(gens)))
    den = 1.0
    for v in gens:
        den *= 1 - math.exp(sum(a * b for a, b in zip(xi, v)))
    return num / den


def decomposition_value(D, xi):
    return sum(e * closed_form(list(t.generators), xi) for e, t in D)


def test_cone_normalization():
    c = Cone.of([(2, 0), (1, 1), (0, 3)], 2)
    assert sorted(c.generators) == [(0, 1), (1, 0)]
    with pytest.raises(ConeError):
        Cone.of([(1, 0), (-1, 0), (0, 1)], 2)
    with pytest.raises(ConeError):
        Cone.of([(1, 0, 0)], 2)
    assert Cone.of([(1, 2), (1, 0)], 2).index() == 2
    assert Cone.of([(1, 0), (1, 1)], 2).is_unimodular()
    assert not Cone.of(CONES["square3d"], 3).is_simplicial()


def test_containment():
    c = Cone.of(CONES["pentagon2d"], 2)
    assert c.contains((0, 0)) and c.contains((-1, 5)) and not c.contains((-1, 1))
    assert c.interior_contains((1, 1)) and not c.interior_contains((1, 0))
    assert in_cone((1, 1), [(1, 0), (0, 1)])
    assert not in_cone((1, -1), [(1, 0), (0, 1)])


def test_json_roundtrip():
    c = Cone.of(CONES["index6"], 3)
    assert Cone.from_json(c.to_json()) == c
    D = barvinok_decompose(c)
    assert SignedConeSum.from_json(D.to_json()) == D


def test_dual_cone():
    d = dual_cone(Cone.of([(1, 0), (1, 1)], 2))
    assert sorted(d.generators) == [(0, 1), (1, -1)]


@pytest.mark.parametrize("name", sorted(CONES))
def test_closed_triangulation_covers(name):
    c = Cone.of(CONES[name], len(CONES[name][0]))
    cells = closed_triangulation(c)
    for x in product(range(-3, 4), repeat=c.dim):
        inside = [in_cone(x, cell) for cell in cells]
        assert any(inside) == c.contains(x)


@pytest.mark.parametrize("name", sorted(CONES))
@pytest.mark.parametrize("method", ["triangulate", "barvinok", "bv_first_generator", "bv_zero"])
def test_decompositions_against_lattice_sum(name, method):
    gens = CONES[name]
    c = Cone.of(gens, len(gens[0]))
    if method == "triangulate":
        D = triangulate(c)
    elif method == "barvinok":
        if not c.is_simplicial():
            with pytest.raises(ConeError):
                barvinok_decompose(c)
            return
        D = barvinok_decompose(c)
        assert all(t.is_unimodular() for _, t in D)
    elif method == "bv_first_generator":
        D = brion_vergne_decompose(c, saturate([c.generators[0]], c.dim))
    else:
        D = brion_vergne_decompose(c, RationalSubspace.zero(c.dim))
    # generic point of the dual interior, off every hyperplane <ξ,v> = 0 of the cells
    xi = [float(a) + 0.0123 * math.sqrt(i + 2) for i, a in enumerate(dual_interior_point(c))]
    radius = 40 if c.dim == 2 else 22
    assert decomposition_value(D, xi) == pytest.approx(brute_sum(c, xi, radius), rel=1e-6)


def test_barvinok_index_example():
    c = Cone.of([(1, 0), (2, 5)], 2)
    D = barvinok_decompose(c)
    assert all(t.index() == 1 for _, t in D)
    assert len(D) >= 2


def test_brion_vergne_quadrant_both_orientations():
    quad = Cone.of([(1, 0), (0, 1)], 2)
    L = saturate([(1, 1)], 2)
    plus = {(e, frozenset(t.generators)) for e, t in brion_vergne_decompose(quad, L, 1)}
    assert plus == {(1, frozenset({(1, 0), (1, 1)})), (-1, frozenset({(1, 1), (0, -1)}))}
    minus = {(e, frozenset(t.generators)) for e, t in brion_vergne_decompose(quad, L, -1)}
    assert minus == {(-1, frozenset({(-1, 0), (1, 1)})), (1, frozenset({(1, 1), (0, 1)}))}


@pytest.mark.parametrize("name", ["index6", "square3d", "pentagon2d"])
def test_brion_vergne_cells_have_face_parallel_to_L(name):
    gens = CONES[name]
    c = Cone.of(gens, len(gens[0]))
    L = saturate([(1, 1, 1)], 3) if c.dim == 3 else saturate([(1, 1)], 2)
    for _, t in brion_vergne_decompose(c, L):
        assert t.is_simplicial()
        inside = [g for g in t.generators if L.contains(g)]
        assert saturate(inside, c.dim) == L


def test_trivial_subspaces_fall_back_to_triangulation():
    c = Cone.of(CONES["index6"], 3)
    assert brion_vergne_decompose(c, RationalSubspace.full(3)) == triangulate(c)


def test_face_subspaces_quadrant():
    quad = Cone.of([(1, 0), (0, 1)], 2)
    assert set(face_subspaces(quad, 0)) == {RationalSubspace.full(2)}
    assert set(face_subspaces(quad, 1)) == {RationalSubspace.full(2), saturate([(1, 0)], 2),
                                            saturate([(0, 1)], 2)}
    assert RationalSubspace.zero(2) in face_subspaces(quad, 2)
    assert len(faces(Cone.of(CONES["square3d"], 3))) == 1 + 4 + 4 + 1
