from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from intersum.conealg import Cone
from intersum.exactlin import saturate
from intersum.genfun import components
from intersum.stepquasi import PsiSet, QuasiComponent, StepQuasiError, alcove_probe, degrees, eval_quasi, frac

QUAD = Cone.of([(1, 0), (0, 1)], 2)
DIAG = saturate([(1, 1)], 2)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def test_frac():
    assert frac((1, -1), (F(1, 3), F(2))) == F(1, 3)
    assert frac((2,), (F(-3, 4),)) == F(1, 2)
    assert frac((1,), (F(3),)) == 0


def test_walls_hit():
    psi = PsiSet(((1, 0), (-1, 1)))
    assert psi.walls_hit((F(1), F(5, 2))) == [(1, 0)]
    assert psi.walls_hit((F(1, 2), F(3, 2))) == [(-1, 1)]


def test_alcove_probe():
    assert alcove_probe([(1,)], (F(0),), (F(-1),)) == 1
    assert alcove_probe([(1,)], (F(1, 4),), (F(1),)) == F(3, 4)
    assert alcove_probe([(1,)], (F(1, 4),), (F(-2),)) == F(1, 8)
    assert alcove_probe([(-1, 1), (1, 0)], (F(0), F(0)), (F(-1), F(-2))) == F(1, 1)
    assert alcove_probe([], (F(0),), (F(1),)) == 1
    with pytest.raises(StepQuasiError):
        alcove_probe([(1, 1)], (F(0), F(0)), (F(1), F(-1)))


def test_quadrant_symbolic_component():
    comps = components(QUAD, DIAG, None, 0, 1)
    qc = comps[0]
    assert isinstance(qc, QuasiComponent)
    assert qc.psi().covectors == ((-1, 1),)
    assert degrees(qc) == (0, 2)
    assert degrees(comps[1]) == (0, 3)
    data = qc.to_json()
    assert data["s_poly"] == 0
    assert data["step_factors"]


@settings(max_examples=25, deadline=None)
@given(rationals, rationals)
def test_affine_on_alcoves(a, b):
    # inside one alcove the quasi-polynomial is a polynomial: second differences along a line vanish
    # for the degree-0 component, which is quadratic in the step variable
    qc = components(QUAD, DIAG, None, 0, 0)[0]
    u = frac((-1, 1), (a, b))
    if u == 0:
        return
    h = min(u, 1 - u) / 4
    vals = [eval_quasi(qc, (a, b + k * h)).evaluate((F(1), F(1))) for k in range(-1, 3)]
    third = vals[3] - 3 * vals[2] + 3 * vals[1] - vals[0]
    assert third == 0
