"""Truncated power series and meromorphic germs near ξ = 0.

A :class:`Series` is a sparse polynomial in the dual variables ξ_1..ξ_d whose
coefficients may themselves be Laurent monomials in a few auxiliary symbols:

* ``("s", i)``   -- coordinate s_i of a symbolic apex,
* ``("f", eta)`` -- the fractional part {<eta, s>} for an integer covector eta,
* ``("T",)``     -- the formal constant standing for 2iπ.

Keeping everything in one commutative ring means the concrete and the
symbolic computations share the same code path.

A :class:`MeromorphicGerm` is a finite sum of ``numerator / prod <ξ, w_j>``
with canonical primitive integer vectors ``w_j``. Numerators are truncated:
a germ of order ``M`` is exact in every homogeneous degree ``m <= M``.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .exactlin import LinAlgError, canonical_line, is_zero

SymMono = tuple  # sorted tuple of (symbol, exponent)
Key = tuple  # (xi exponent tuple, SymMono)


class GermError(ValueError):
    pass


class PoleError(GermError):
    """A component does not clear to the requested denominator."""


def _sym_mul(a: SymMono, b: SymMono) -> SymMono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        e2 = d.get(k, 0) + e
        if e2:
            d[k] = e2
        else:
            d.pop(k, None)
    return tuple(sorted(d.items()))


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class Series:
    """Sparse polynomial in ξ with coefficients in Q[symbols^±1]."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Key, Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[Key, Fraction] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = Fraction(c)

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c=1) -> "Series":
        return cls(nvars, {((0,) * nvars, ()): Fraction(c)})

    @classmethod
    def zero(cls, nvars: int) -> "Series":
        return cls(nvars)

    @classmethod
    def xi(cls, nvars: int, i: int) -> "Series":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {(tuple(e), ()): Fraction(1)})

    @classmethod
    def symbol(cls, nvars: int, sym: tuple, power: int = 1) -> "Series":
        return cls(nvars, {((0,) * nvars, ((sym, power),)): Fraction(1)})

    @classmethod
    def linear_form(cls, w: Sequence, coeff: "Series | None" = None) -> "Series":
        """<ξ, w>, optionally times a ξ-free coefficient series."""
        n = len(w)
        out: dict[Key, Fraction] = {}
        for i, wi in enumerate(w):
            if wi:
                e = [0] * n
                e[i] = 1
                out[(tuple(e), ())] = Fraction(wi)
        s = cls(n, out)
        return s if coeff is None else s * coeff

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def copy(self) -> "Series":
        s = Series(self.nvars)
        s.terms = dict(self.terms)
        return s

    def xi_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def min_xi_degree(self) -> int | None:
        return min((sum(e) for e, _ in self.terms), default=None)

    def symbols(self) -> set:
        return {k for _, sm in self.terms for k, _ in sm}

    def homogeneous(self, k: int) -> "Series":
        return Series(self.nvars, {key: c for key, c in self.terms.items() if sum(key[0]) == k})

    def truncate(self, cap: int) -> "Series":
        return Series(self.nvars, {key: c for key, c in self.terms.items() if sum(key[0]) <= cap})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Series.const(self.nvars, other)
        if not isinstance(other, Series):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (e, sm), c in sorted(self.terms.items()):
            mono = "*".join([f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k] +
                            [f"{_sym_name(s)}^{k}" if k != 1 else _sym_name(s) for s, k in sm])
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            if other.nvars != self.nvars:
                raise GermError("series live in different dimensions")
            return other
        return Series.const(self.nvars, other)

    def __add__(self, other) -> "Series":
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        s = Series(self.nvars)
        s.terms = out
        return s

    __radd__ = __add__

    def __neg__(self) -> "Series":
        s = Series(self.nvars)
        s.terms = {k: -c for k, c in self.terms.items()}
        return s

    def __sub__(self, other) -> "Series":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Series":
        return self._coerce(other) - self

    def scale(self, r) -> "Series":
        r = Fraction(r)
        if r == 0:
            return Series(self.nvars)
        s = Series(self.nvars)
        s.terms = {k: c * r for k, c in self.terms.items()}
        return s

    def mul(self, other: "Series", cap: int | None = None) -> "Series":
        """Product, dropping every monomial of ξ-degree above ``cap``."""
        other = self._coerce(other)
        out: dict[Key, Fraction] = defaultdict(Fraction)
        if cap is None:
            for (e1, s1), c1 in self.terms.items():
                for (e2, s2), c2 in other.terms.items():
                    out[(_add_exp(e1, e2), _sym_mul(s1, s2))] += c1 * c2
        else:
            right = [(sum(e2), e2, s2, c2) for (e2, s2), c2 in other.terms.items()]
            for (e1, s1), c1 in self.terms.items():
                d1 = sum(e1)
                if d1 > cap:
                    continue
                for d2, e2, s2, c2 in right:
                    if d1 + d2 <= cap:
                        out[(_add_exp(e1, e2), _sym_mul(s1, s2))] += c1 * c2
        s = Series(self.nvars)
        s.terms = {k: c for k, c in out.items() if c}
        return s

    def __mul__(self, other) -> "Series":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__

    def pow(self, n: int, cap: int | None = None) -> "Series":
        out = Series.const(self.nvars, 1)
        for _ in range(n):
            out = out.mul(self, cap)
        return out

    # substitution and evaluation -----------------------------------------
    def subs(self, values: Mapping[tuple, object]) -> "Series":
        """Replace symbols by rationals (or by ξ-free series)."""
        out = Series(self.nvars)
        for (e, sm), c in self.terms.items():
            term = Series(self.nvars, {(e, ()): c})
            rest = []
            for sym, k in sm:
                if sym in values:
                    v = values[sym]
                    if isinstance(v, Series):
                        if k < 0:
                            raise GermError("cannot invert a series during substitution")
                        term = term.mul(v.pow(k))
                    else:
                        term = term.scale(Fraction(v) ** k)
                else:
                    rest.append((sym, k))
            if rest:
                term = term.mul(Series(self.nvars, {((0,) * self.nvars, tuple(rest)): 1}))
            out = out + term
        return out

    def evaluate(self, xi: Sequence, symbols: Mapping[tuple, object] | None = None):
        """Numeric value at ``xi`` (rationals stay exact, complex symbols allowed)."""
        symbols = symbols or {}
        total = 0
        for (e, sm), c in self.terms.items():
            v = c
            for x, k in zip(xi, e):
                if k:
                    v = v * x ** k
            for sym, k in sm:
                if sym not in symbols:
                    raise GermError(f"no value for symbol {_sym_name(sym)}")
                v = v * symbols[sym] ** k
            total = total + v
        return total

    def eval_xi(self, xi: Sequence) -> "Series":
        """Substitute ξ := xi, keeping symbols; result has zero ξ-variables."""
        out: dict[Key, Fraction] = defaultdict(Fraction)
        for (e, sm), c in self.terms.items():
            v = Fraction(c)
            for x, k in zip(xi, e):
                if k:
                    v *= Fraction(x) ** k
            out[((), sm)] += v
        return Series(0, {k: c for k, c in out.items() if c})

    def linear_substitute(self, A: Sequence[Sequence]) -> "Series":
        """Substitute ξ_i := sum_j A[i][j] ζ_j; result is a series in ζ."""
        n = len(A[0]) if A else 0
        forms = [Series(n, {(tuple(int(j == t) for j in range(n)), ()): Fraction(a)
                            for t, a in enumerate(row) if a}) for row in A]
        cache: dict[tuple[int, int], Series] = {}

        def power(i: int, k: int) -> Series:
            if (i, k) not in cache:
                cache[(i, k)] = Series.const(n, 1) if k == 0 else power(i, k - 1).mul(forms[i])
            return cache[(i, k)]

        out = Series(n)
        for (e, sm), c in self.terms.items():
            term = Series(n, {((0,) * n, sm): c})
            for i, k in enumerate(e):
                if k:
                    term = term.mul(power(i, k))
            out = out + term
        return out

    def divide_linear(self, w: Sequence) -> "Series":
        """Exact quotient by <ξ, w>; raises :class:`PoleError` on a remainder."""
        i = next((j for j, x in enumerate(w) if x), None)
        if i is None:
            raise GermError("division by the zero form")
        wi = Fraction(w[i])
        rem: dict[Key, Fraction] = dict(self.terms)
        quot: dict[Key, Fraction] = defaultdict(Fraction)
        nz = [(j, Fraction(x)) for j, x in enumerate(w) if x]
        while True:
            cands = [k for k in rem if k[0][i] > 0]
            if not cands:
                break
            top = max(k[0][i] for k in cands)
            for key in [k for k in cands if k[0][i] == top]:
                c = rem.pop(key, 0)
                if not c:
                    continue
                e, sm = key
                qe = list(e)
                qe[i] -= 1
                qe = tuple(qe)
                coef = c / wi
                quot[(qe, sm)] += coef
                for j, wj in nz:
                    if j == i:
                        continue
                    ne = list(qe)
                    ne[j] += 1
                    k2 = (tuple(ne), sm)
                    v = rem.get(k2, 0) - coef * wj
                    if v:
                        rem[k2] = v
                    else:
                        rem.pop(k2, None)
        if any(rem.values()):
            raise PoleError(f"not divisible by <xi,{tuple(w)}>")
        return Series(self.nvars, {k: c for k, c in quot.items() if c})

    def split_by_symbols(self) -> dict[SymMono, "Series"]:
        """Group monomials by their symbol part: {symbol monomial: ξ-polynomial}."""
        out: dict[SymMono, dict] = defaultdict(dict)
        for (e, sm), c in self.terms.items():
            out[sm][(e, ())] = c
        return {sm: Series(self.nvars, t) for sm, t in out.items()}


def _sym_name(sym: tuple) -> str:
    if sym[0] == "s":
        return f"s{sym[1]}"
    if sym[0] == "f":
        return "{" + ",".join(str(x) for x in sym[1]) + "}"
    return sym[0]


# --------------------------------------------------------------------------
# Bernoulli machinery
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (the convention of z/(e^z - 1))."""
    if n < 0:
        raise ValueError("negative index")
    if n == 0:
        return Fraction(1)
    return -sum((comb(n + 1, k) * bernoulli_number(k) for k in range(n)), Fraction(0)) / (n + 1)


@lru_cache(maxsize=None)
def bernoulli_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of B_n(t), lowest power first."""
    if n < 0:
        raise ValueError("Bernoulli polynomials need n >= 0")
    return tuple(comb(n, k) * bernoulli_number(n - k) for k in range(n + 1))


def bernoulli_value(n: int, t):
    """B_n(t) for a rational ``t`` or any ring element supporting + and *."""
    out = 0
    for c in reversed(bernoulli_poly(n)):
        out = out * t + c
    return out


def exp_series(form: Series, cap: int) -> Series:
    """exp(form) truncated at ξ-degree ``cap``; ``form`` must have ξ-degree one."""
    out = Series.const(form.nvars, 1)
    power = Series.const(form.nvars, 1)
    for k in range(1, cap + 1):
        power = power.mul(form, cap).scale(Fraction(1, k))
        if power.is_zero():
            break
        out = out + power
    return out


def todd_numerator(w: Sequence, cap: int) -> Series:
    """Numerator N with 1/(1 - e^{<ξ,w>}) = N / <ξ,w>, truncated at ``cap``."""
    form = Series.linear_form(w)
    out = Series(len(w))
    power = Series.const(len(w), 1)
    for n in range(cap + 1):
        b = bernoulli_number(n)
        if b:
            out = out + power.scale(-b / factorial(n))
        power = power.mul(form)
    return out


def shifted_inverse(w: Sequence, g, cap: int) -> Series:
    """1/(<ξ,w> + T g) for g != 0, expanded as a series in ξ with T-coefficients."""
    n = len(w)
    form = Series.linear_form(w)
    out = Series(n)
    power = Series.const(n, 1)
    g = Fraction(g)
    for k in range(cap + 1):
        coeff = Series.symbol(n, ("T",), -(k + 1)).scale((-1) ** k / g ** (k + 1))
        out = out + power.mul(coeff)
        power = power.mul(form)
    return out


# --------------------------------------------------------------------------
# Germs and their homogeneous components
# --------------------------------------------------------------------------

Denoms = tuple  # sorted tuple of canonical primitive integer vectors


def _normalize_denoms(numerator: Series, denoms: Iterable[Sequence]) -> tuple[Series, Denoms]:
    scale = Fraction(1)
    canon = []
    for w in denoms:
        if is_zero(w):
            raise GermError("zero linear form in a denominator")
        c, s = canonical_line(w)
        canon.append(c)
        scale *= s
    return numerator.scale(1 / scale), tuple(sorted(canon))


@dataclass(frozen=True)
class MeromorphicGerm:
    """Sum of numerator/∏<ξ,w>, exact through homogeneous degree ``order``."""
    dim: int
    order: int
    terms: tuple = field(default=())  # ((denoms, Series), ...), denoms distinct

    @classmethod
    def build(cls, dim: int, order: int, pieces: Iterable[tuple[Iterable[Sequence], Series]]) -> "MeromorphicGerm":
        acc: dict[Denoms, Series] = {}
        for denoms, num in pieces:
            num, key = _normalize_denoms(num, denoms)
            num = num.truncate(order + len(key))
            acc[key] = acc[key] + num if key in acc else num
        return cls(dim, order, tuple((k, v) for k, v in sorted(acc.items()) if not v.is_zero()))

    @classmethod
    def one(cls, dim: int, order: int) -> "MeromorphicGerm":
        return cls.build(dim, order, [((), Series.const(dim, 1))])

    @classmethod
    def from_series(cls, s: Series, order: int) -> "MeromorphicGerm":
        return cls.build(s.nvars, order, [((), s)])

    @property
    def max_poles(self) -> int:
        return max((len(k) for k, _ in self.terms), default=0)

    def __add__(self, other: "MeromorphicGerm") -> "MeromorphicGerm":
        self._check(other)
        return MeromorphicGerm.build(self.dim, min(self.order, other.order), list(self.terms) + list(other.terms))

    def __sub__(self, other: "MeromorphicGerm") -> "MeromorphicGerm":
        return self + other.scale(-1)

    def scale(self, r) -> "MeromorphicGerm":
        return MeromorphicGerm(self.dim, self.order, tuple((k, v.scale(r)) for k, v in self.terms if r))

    def times_series(self, s: Series) -> "MeromorphicGerm":
        """Multiply by a holomorphic series (e.g. a symbol-valued scalar)."""
        return MeromorphicGerm.build(self.dim, self.order,
                                     [(k, v.mul(s, self.order + len(k))) for k, v in self.terms])

    def __mul__(self, other: "MeromorphicGerm") -> "MeromorphicGerm":
        self._check(other)
        order = min(self.order - other.max_poles, other.order - self.max_poles)
        pieces = []
        for k1, v1 in self.terms:
            for k2, v2 in other.terms:
                key = k1 + k2
                pieces.append((key, v1.mul(v2, order + len(key))))
        return MeromorphicGerm.build(self.dim, order, pieces)

    def with_order(self, order: int) -> "MeromorphicGerm":
        if order > self.order:
            raise GermError("cannot raise the order of a truncated germ")
        return MeromorphicGerm.build(self.dim, order, self.terms)

    def _check(self, other: "MeromorphicGerm") -> None:
        if self.dim != other.dim:
            raise GermError("dimension mismatch")

    def lowest_degree(self) -> int:
        return -self.max_poles

    def component(self, m: int) -> "HomogeneousComponent":
        """Homogeneous component of degree ``m`` over a common denominator."""
        if m > self.order:
            raise GermError(f"degree {m} exceeds the germ order {self.order}")
        parts = [(k, v.homogeneous(m + len(k))) for k, v in self.terms]
        parts = [(k, v) for k, v in parts if not v.is_zero()]
        return HomogeneousComponent.combine(self.dim, m, parts)

    def components(self, lo: int, hi: int) -> dict[int, "HomogeneousComponent"]:
        return {m: self.component(m) for m in range(lo, hi + 1)}


def _multiset_union(keys: Iterable[Denoms]) -> Denoms:
    need: Counter = Counter()
    for k in keys:
        for w, c in Counter(k).items():
            need[w] = max(need[w], c)
    return tuple(sorted(need.elements()))


def _multiset_minus(a: Denoms, b: Denoms) -> list:
    return list((Counter(a) - Counter(b)).elements())


@dataclass(frozen=True)
class HomogeneousComponent:
    """numerator / ∏ <ξ, w> with a numerator homogeneous of degree m + #denoms."""
    dim: int
    degree: int
    denoms: Denoms
    numerator: Series

    @classmethod
    def combine(cls, dim: int, m: int, parts: Sequence[tuple[Denoms, Series]]) -> "HomogeneousComponent":
        common = _multiset_union(k for k, _ in parts)
        total = Series(dim)
        for k, v in parts:
            for w in _multiset_minus(common, k):
                v = v.mul(Series.linear_form(w))
            total = total + v
        if total.is_zero():
            common = ()
        return cls(dim, m, common, total)

    @classmethod
    def zero(cls, dim: int, m: int) -> "HomogeneousComponent":
        return cls(dim, m, (), Series(dim))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __add__(self, other: "HomogeneousComponent") -> "HomogeneousComponent":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise GermError("adding components of different degree or dimension")
        return HomogeneousComponent.combine(self.dim, self.degree,
                                            [(self.denoms, self.numerator), (other.denoms, other.numerator)])

    def __neg__(self) -> "HomogeneousComponent":
        return self.scale(-1)

    def __sub__(self, other: "HomogeneousComponent") -> "HomogeneousComponent":
        return self + (-other)

    def scale(self, r) -> "HomogeneousComponent":
        return HomogeneousComponent(self.dim, self.degree, self.denoms, self.numerator.scale(r))

    def times(self, s: Series, degree_shift: int) -> "HomogeneousComponent":
        """Multiply by a homogeneous polynomial of ξ-degree ``degree_shift``."""
        num = self.numerator.mul(s)
        return HomogeneousComponent(self.dim, self.degree + degree_shift, self.denoms if not num.is_zero() else (), num)

    def equals(self, other: "HomogeneousComponent") -> bool:
        return (self - other).is_zero()

    def subs(self, values: Mapping[tuple, object]) -> "HomogeneousComponent":
        num = self.numerator.subs(values)
        return HomogeneousComponent(self.dim, self.degree, self.denoms if not num.is_zero() else (), num)

    def evaluate(self, xi: Sequence, symbols: Mapping[tuple, object] | None = None):
        den = 1
        for w in self.denoms:
            v = sum(Fraction(a) * b for a, b in zip(xi, w))
            if v == 0:
                raise GermError(f"ξ lies on the singular hyperplane <ξ,{w}> = 0")
            den *= v
        if symbols is None and self.numerator.symbols():
            return self.numerator.eval_xi(xi).scale(Fraction(1) / den)
        return self.numerator.evaluate(xi, symbols) / den

    def clear_to(self, target: Iterable[Sequence]) -> "HomogeneousComponent":
        """Rewrite over the denominator ∏ target; raises PoleError if impossible."""
        tgt = tuple(sorted(canonical_line(w)[0] for w in target))
        num = self.numerator
        for w in _multiset_minus(tgt, self.denoms):
            num = num.mul(Series.linear_form(w))
        for w in _multiset_minus(self.denoms, tgt):
            num = num.divide_linear(w)
        return HomogeneousComponent(self.dim, self.degree, tgt, num)

    def reduced(self) -> "HomogeneousComponent":
        """Cancel every denominator factor that divides the numerator."""
        if self.is_zero():
            return HomogeneousComponent.zero(self.dim, self.degree)
        num = self.numerator
        keep = []
        for w in self.denoms:
            try:
                num = num.divide_linear(w)
            except PoleError:
                keep.append(w)
        return HomogeneousComponent(self.dim, self.degree, tuple(keep), num)

    def local_degree(self) -> int:
        """Largest total degree in the apex symbols (fractional parts and s_i)."""
        return max((sum(k for sym, k in sm if sym[0] in ("f", "s")) for _, sm in self.numerator.terms), default=0)


def clear_to_denominator(h: HomogeneousComponent, target: Iterable[Sequence]) -> HomogeneousComponent:
    return h.clear_to(target)


def eval_component(h: HomogeneousComponent, xi: Sequence):
    return h.evaluate(xi)


def inv_one_minus_exp(w: Sequence, order: int) -> MeromorphicGerm:
    """Germ of 1/(1 - e^{<ξ,w>}) through degree ``order``."""
    if is_zero(w):
        raise GermError("zero linear form")
    return MeromorphicGerm.build(len(w), order, [((tuple(w),), todd_numerator(w, order + 1))])


def germ_with_symbol_T(cells: Iterable[tuple[object, Sequence[Sequence]]], gamma: Sequence[int],
                       order: int) -> MeromorphicGerm:
    """Germ of ξ ↦ Σ coeff / ∏ <ξ + Tγ, v> around ξ = 0.

    ``cells`` lists (coeff, generators). Factors with <γ,v> = 0 stay true
    poles; the others are expanded as series with coefficients in Q[T^±1].
    """
    d = len(gamma)
    pieces = []
    for coeff, gens in cells:
        poles = [v for v in gens if sum(a * b for a, b in zip(gamma, v)) == 0]
        cap = order + len(poles)
        num = Series.const(d, coeff)
        for v in gens:
            g = sum(a * b for a, b in zip(gamma, v))
            if g:
                num = num.mul(shifted_inverse(v, g, cap), cap)
        pieces.append((poles, num))
    return MeromorphicGerm.build(d, order, pieces)


def lowest_nonzero_degree(g: MeromorphicGerm) -> int | None:
    """Smallest m <= order with a nonzero component, or None."""
    for m in range(g.lowest_degree(), g.order + 1):
        if not g.component(m).is_zero():
            return m
    return None
