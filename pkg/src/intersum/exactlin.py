"""Exact rational linear algebra, integer normal forms and lattices.

Matrices are plain lists of rows. Integer matrices hold ``int`` entries,
rational ones hold :class:`fractions.Fraction`. The ambient lattice is always
the standard lattice ``Z^d`` of the chosen coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rat = Fraction
Vector = tuple
Matrix = list


class LinAlgError(ValueError):
    pass


def rat(x) -> Fraction:
    """Parse ``"p/q"``, ``"n"``, int or Fraction into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(rat(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise LinAlgError("dimension mismatch in dot product")
    return sum((x * y for x, y in zip(a, b)), 0)


def mat_vec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in A)


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[dot(row, col) for col in Bt] for row in A]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*A)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def _rref(A: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(x) for x in row] for row in A]
    pivots: list[int] = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    return len(_rref(A)[1])


def det(A: Sequence[Sequence]):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise LinAlgError("determinant of a non-square matrix")
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if p is None:
                return 0
            M[k], M[p] = M[p], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                M[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = _rref(aug)
    if piv[:n] != list(range(n)):
        raise LinAlgError("matrix is singular")
    return [row[n:] for row in R]


def solve(A: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Some exact solution x of A x = b, or None when the system is inconsistent."""
    n = len(A[0]) if A else 0
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    R, piv = _rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv):
        x[c] = R[i][n]
    return tuple(x)


def nullspace(A: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Rational basis of {x : A x = 0}."""
    if not A:
        n = ncols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    n = len(A[0])
    R, piv = _rref(A)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, c in enumerate(piv):
            x[c] = -R[i][f]
        basis.append(tuple(x))
    return basis


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector."""
    l = 1
    for x in v:
        x = Fraction(x)
        l = l * x.denominator // gcd(l, x.denominator)
    return tuple(int(Fraction(x) * l) for x in v)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through ``v``.

    >>> primitive((4, 6))
    (2, 3)
    """
    if is_zero(v):
        raise LinAlgError("zero vector has no primitive direction")
    w = clear_denominators(v)
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w)


def canonical_line(v: Sequence) -> tuple[tuple[int, ...], Fraction]:
    """Split ``v`` as ``scale * w`` with ``w`` primitive and first nonzero entry positive."""
    w = primitive(v)
    lead = next(x for x in w if x != 0)
    if lead < 0:
        w = tuple(-x for x in w)
    i = next(i for i, x in enumerate(w) if x != 0)
    return w, Fraction(v[i]) / w[i]


# --------------------------------------------------------------------------
# Hermite normal form
# --------------------------------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(A: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U A = H``. Nonzero rows of
    ``H`` come first, pivots are positive and strictly increase to the right,
    entries above a pivot lie in ``[0, pivot)``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [[int(x) for x in row] for row in A]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        rows = [i for i in range(r, m) if H[i][c] != 0]
        if not rows:
            continue
        # fold every row below r into row r by extended gcd steps
        for i in rows:
            if i == r:
                continue
            a, b = H[r][c], H[i][c]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [x * u + y * v for u, v in zip(Hr, Hi)]
            H[i] = [-q * u + p * v for u, v in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [x * u + y * v for u, v in zip(Ur, Ui)]
            U[i] = [-q * u + p * v for u, v in zip(Ur, Ui)]
        if H[r][c] == 0:
            # pivot cancelled: move a nonzero row up
            k = next((i for i in range(r + 1, m) if H[i][c] != 0), None)
            if k is None:
                continue
            H[r], H[k] = H[k], H[r]
            U[r], U[k] = U[k], U[r]
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = [u - f * v for u, v in zip(H[i], H[r])]
                U[i] = [u - f * v for u, v in zip(U[i], U[r])]
        r += 1
    return H, U


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis (rows, in HNF) of the saturated lattice {x in Z^n : A x = 0}."""
    if not A or all(is_zero(row) for row in A):
        return [tuple(r) for r in identity(ncols)]
    H, U = hnf(transpose(A))  # U A^T = H
    rk = sum(1 for row in H if not is_zero(row))
    kern = [row for row in U[rk:]]
    if not kern:
        return []
    H2, _ = hnf(kern)
    return [tuple(row) for row in H2 if not is_zero(row)]


# --------------------------------------------------------------------------
# Lattices and rational subspaces
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice; ``basis`` rows are the basis vectors."""
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.basis and det([list(b) for b in self.basis]) == 0:
            raise LinAlgError("lattice basis is singular")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def standard(cls, d: int) -> "Lattice":
        return cls(tuple(tuple(r) for r in identity(d)))

    def contains(self, x: Sequence) -> bool:
        if self.dim == 0:
            return True
        coeffs = solve(transpose(self.basis), x)
        return coeffs is not None and all(c.denominator == 1 for c in coeffs)


@dataclass(frozen=True)
class RationalSubspace:
    """Rational subspace L of Q^d stored by a saturated basis of L ∩ Z^d.

    The basis is in row Hermite normal form, so two subspaces are equal iff
    their ``basis`` tuples are equal.
    """
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def complement_coords(self) -> tuple[int, ...]:
        """Coordinates not used as HNF pivots; they coordinatize V/L."""
        pivots = {next(i for i, x in enumerate(b) if x != 0) for b in self.basis}
        return tuple(i for i in range(self.ambient_dim) if i not in pivots)

    def contains(self, v: Sequence) -> bool:
        if is_zero(v):
            return True
        if not self.basis:
            return False
        return rank([list(b) for b in self.basis] + [list(v)]) == self.dim

    def is_subspace_of(self, other: "RationalSubspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "RationalSubspace") -> "RationalSubspace":
        if self.ambient_dim != other.ambient_dim:
            raise LinAlgError("ambient dimension mismatch")
        return saturate(list(self.basis) + list(other.basis), self.ambient_dim)

    def perp(self) -> list[tuple[int, ...]]:
        """Basis of the dual lattice points vanishing on L (i.e. of Λ* ∩ L^⊥)."""
        return integer_kernel([list(b) for b in self.basis], self.ambient_dim)

    def annihilates(self, gamma: Sequence) -> bool:
        """True iff the covector ``gamma`` lies in L^⊥."""
        return all(dot(gamma, b) == 0 for b in self.basis)

    @classmethod
    def zero(cls, d: int) -> "RationalSubspace":
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> "RationalSubspace":
        return cls(d, tuple(tuple(r) for r in identity(d)))

    def __repr__(self) -> str:
        return f"RationalSubspace(d={self.ambient_dim}, basis={[list(b) for b in self.basis]})"


def saturate(generators: Sequence[Sequence], ambient_dim: int | None = None) -> RationalSubspace:
    """Saturated lattice basis of span(generators) ∩ Z^d."""
    gens = [clear_denominators(g) for g in generators if not is_zero(g)]
    if ambient_dim is None:
        if not generators:
            raise LinAlgError("ambient dimension needed for an empty generator list")
        ambient_dim = len(generators[0])
    if any(len(g) != ambient_dim for g in gens):
        raise LinAlgError("generators live in different dimensions")
    if not gens:
        return RationalSubspace.zero(ambient_dim)
    perp = integer_kernel(gens, ambient_dim)
    basis = integer_kernel(perp, ambient_dim) if perp else [tuple(r) for r in identity(ambient_dim)]
    H, _ = hnf(basis)
    return RationalSubspace(ambient_dim, tuple(tuple(r) for r in H if not is_zero(r)))


def projected_lattice(L: RationalSubspace) -> tuple[list[list[int]], Lattice]:
    """Integer projection ``P`` with kernel L and ``P Z^d = Z^k``.

    The rows of ``P`` are a basis of Λ* ∩ L^⊥, so the image lattice is the
    standard one and its fundamental domain has measure one.
    """
    k = L.ambient_dim - L.dim
    if k == 0:
        raise LinAlgError("quotient is zero-dimensional")
    P = [list(r) for r in L.perp()]
    return P, Lattice.standard(k)


def lattice_coordinates(basis: Sequence[Sequence[int]], v: Sequence) -> tuple[Fraction, ...]:
    """Coefficients of ``v`` in terms of the (row) ``basis``; raises if v is outside the span."""
    c = solve(transpose(basis), v)
    if c is None:
        raise LinAlgError("vector not in the span of the basis")
    return c


def cone_index(generators: Sequence[Sequence[int]]) -> int:
    """|det| of d independent lattice vectors w.r.t. the standard lattice."""
    D = det([list(g) for g in generators])
    if D == 0:
        raise LinAlgError("generators are linearly dependent")
    return abs(int(D))


def sublattice_index(vectors: Sequence[Sequence[int]], L: RationalSubspace) -> int:
    """Volume of the cell spanned by ``vectors`` in the lattice L ∩ Z^d."""
    if len(vectors) != L.dim:
        raise LinAlgError("need dim(L) vectors")
    if L.dim == 0:
        return 1
    coords = [lattice_coordinates(L.basis, v) for v in vectors]
    D = det(coords)
    if D == 0:
        raise LinAlgError("vectors do not span L")
    return abs(int(D))
