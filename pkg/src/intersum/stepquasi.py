"""Step-polynomials and quasi-polynomials in the apex s.

Symbolic components carry the symbols ``("f", lam)`` for the fractional
part {<lam, s>} and ``("s", i)`` for the coordinate s_i. No attempt is made
to reduce modulo the many relations between fractional-part generators;
quasi-components are compared by evaluation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable, Sequence

from .exactlin import dot
from .germ import HomogeneousComponent


class StepQuasiError(ValueError):
    pass


def frac(eta: Sequence, s: Sequence) -> Fraction:
    """Fractional part of <eta, s>, in [0, 1)."""
    x = Fraction(dot(eta, s))
    return x - floor(x)


@dataclass(frozen=True)
class PsiSet:
    """Integer covectors whose fractional parts appear in a quasi-component."""
    covectors: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.covectors)

    def __len__(self) -> int:
        return len(self.covectors)

    def walls_hit(self, s: Sequence) -> list[tuple[int, ...]]:
        """Covectors eta with <eta, s> integral."""
        return [eta for eta in self.covectors if Fraction(dot(eta, s)).denominator == 1]


@dataclass(frozen=True)
class QuasiComponent:
    """Homogeneous component whose coefficients are quasi-polynomials in s."""
    component: HomogeneousComponent

    @property
    def degree(self) -> int:
        return self.component.degree

    @property
    def dim(self) -> int:
        return self.component.dim

    def psi(self) -> PsiSet:
        lams = sorted({sym[1] for sym in self.component.numerator.symbols() if sym[0] == "f"})
        return PsiSet(tuple(lams))

    def step_factors(self) -> list[tuple[tuple[tuple[int, ...], int], ...]]:
        """Step monomials that occur, each as ((eta, power), ...)."""
        out = set()
        for _, sm in self.component.numerator.terms:
            out.add(tuple((sym[1], k) for sym, k in sm if sym[0] == "f"))
        return sorted(out)

    def values(self, s: Sequence) -> dict:
        vals: dict = {}
        for sym in self.component.numerator.symbols():
            if sym[0] == "f":
                vals[sym] = frac(sym[1], s)
            elif sym[0] == "s":
                vals[sym] = Fraction(s[sym[1]])
            else:
                raise StepQuasiError(f"unexpected symbol {sym}")
        return vals

    def evaluate(self, s: Sequence) -> HomogeneousComponent:
        return self.component.subs(self.values(s))

    def degrees(self) -> tuple[int, int]:
        """(polynomial degree, local degree), maximised over monomials."""
        poly = local = 0
        for _, sm in self.component.numerator.terms:
            p = sum(k for sym, k in sm if sym[0] == "s")
            q = sum(k for sym, k in sm if sym[0] == "f")
            poly = max(poly, p)
            local = max(local, p + q)
        return poly, local

    def to_json(self) -> dict:
        from .serialize import component_to_json
        data = component_to_json(self.component)
        data["step_factors"] = [[{"eta": list(eta), "power": k} for eta, k in mono] for mono in self.step_factors()]
        data["s_poly"] = self.degrees()[0]
        return data


def eval_quasi(qc: QuasiComponent, s: Sequence) -> HomogeneousComponent:
    return qc.evaluate(s)


def degrees(qc: QuasiComponent) -> tuple[int, int]:
    return qc.degrees()


def alcove_probe(psi: Iterable[Sequence[int]], s0: Sequence, v: Sequence) -> Fraction:
    """Largest t0 such that s0 + t v meets no Ψ-wall for 0 < t < t0."""
    best = None
    for eta in psi:
        a = Fraction(dot(eta, s0))
        b = Fraction(dot(eta, v))
        if b == 0:
            raise StepQuasiError(f"direction is parallel to the walls of {tuple(eta)}")
        if b > 0:
            t = (floor(a) + 1 - a) / b
        else:
            t = (a - (-floor(-a) - 1)) / -b
        best = t if best is None else min(best, t)
    if best is None:
        return Fraction(1)
    return best
