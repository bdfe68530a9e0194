"""Exact integer lattice linear algebra.

Matrices are tuples of row tuples of Python ints, so every entry is an
arbitrary-precision integer.  Sublattices of Z^r are kept in a canonical
echelon (Hermite) form, which makes equality a plain comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]

ORDER_CAP = 24


class LatticeError(ValueError):
    pass


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(r: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def zeros(m: int, n: int) -> IntMatrix:
    return tuple((0,) * n for _ in range(m))


def transpose(M: Sequence[Sequence]) -> tuple:
    if not M:
        return ()
    return tuple(zip(*M))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def mat_vec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vec_mat(v: Sequence, A: Sequence[Sequence]) -> tuple:
    return mat_vec(transpose(A), v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_sub(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def columns(M: Sequence[Sequence]) -> list[tuple]:
    return list(transpose(M))


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
    if not cols:
        return tuple(() for _ in range(nrows))
    return as_matrix(transpose(cols))


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rational_inverse(M: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            raise LatticeError("matrix is singular")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return tuple(tuple(row[n:]) for row in A)


def unimodular_inverse(M: Sequence[Sequence[int]]) -> IntMatrix:
    inv = rational_inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise LatticeError("matrix is not unimodular")
    return as_matrix(inv)


def is_unimodular(M: Sequence[Sequence[int]]) -> bool:
    return len(M) > 0 and all(len(row) == len(M) for row in M) and abs(determinant(M)) == 1


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (D, U, V) with U*M*V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [list(row) for row in identity(m)]
    V = [list(row) for row in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
            if not entries:
                break
            _, i0, j0 = min(entries)
            swap_rows(t, i0)
            swap_cols(t, j0)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // piv)
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // piv)
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return as_matrix(A), as_matrix(U), as_matrix(V)


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def row_hermite_basis(rows: Iterable[Sequence[int]], ncols: int) -> tuple[Vector, ...]:
    """Echelon basis of the Z-span of the given rows: positive pivots, entries above pivots reduced."""
    A = [list(map(int, r)) for r in rows if any(r)]
    pr = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(pr, len(A)) if A[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][col]))
            A[pr], A[i0] = A[i0], A[pr]
            done = True
            for i in range(pr + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // A[pr][col]
                    A[i] = [a - q * b for a, b in zip(A[i], A[pr])]
                    done = done and A[i][col] == 0
            if done:
                break
        if pr >= len(A) or A[pr][col] == 0:
            continue
        if A[pr][col] < 0:
            A[pr] = [-a for a in A[pr]]
        for i in range(pr):
            q = A[i][col] // A[pr][col]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[pr])]
        pr += 1
    return tuple(tuple(r) for r in A[:pr])


@dataclass(frozen=True)
class Lattice:
    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise LatticeError("rank must be non-negative")


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^ambient spanned by `basis` (canonical echelon rows)."""

    ambient: int
    basis: tuple[Vector, ...]

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence[int]]) -> "Sublattice":
        vecs = [tuple(int(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise LatticeError(f"vector {v} does not lie in Z^{ambient}")
        return cls(ambient, row_hermite_basis(vecs, ambient))

    @classmethod
    def full(cls, ambient: int) -> "Sublattice":
        return cls(ambient, identity(ambient))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def generators(self) -> IntMatrix:
        """Column matrix of the basis vectors."""
        return from_columns(self.basis, self.ambient)

    def coordinates(self, v: Sequence[int]) -> Vector | None:
        """Integer coordinates of v in the stored basis, or None if v is not in the sublattice."""
        w = [int(x) for x in v]
        coeffs = []
        for b in self.basis:
            c = next(i for i, x in enumerate(b) if x)
            q, r = divmod(w[c], b[c])
            if r:
                return None
            coeffs.append(q)
            w = [a - q * bb for a, bb in zip(w, b)]
        if any(w):
            return None
        return tuple(coeffs)

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Sublattice") -> bool:
        return all(b in self for b in other.basis)

    def scaled(self, k: int) -> "Sublattice":
        return Sublattice.span(self.ambient, [[k * x for x in b] for b in self.basis])

    def index_in(self, other: "Sublattice") -> int:
        """Index [other : self] for a full-rank inclusion self <= other."""
        if not other.contains_lattice(self) or self.rank != other.rank:
            raise LatticeError("not a finite-index sublattice")
        rel = [other.coordinates(b) for b in self.basis]
        return abs(determinant(rel))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    def __post_init__(self):
        fs = self.invariant_factors
        if any(d < 2 for d in fs) or any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise LatticeError(f"bad invariant factors {fs}")

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "trivial"

    def to_json(self) -> dict:
        return {"factors": list(self.invariant_factors), "free_rank": self.free_rank}


def quotient_structure(L: Lattice | Sublattice | int, S: Sublattice) -> FiniteAbelianGroup:
    """Structure of L/S.  L may be Z^r (a Lattice or rank) or a sublattice containing S."""
    if isinstance(L, Sublattice):
        if L.ambient != S.ambient or not L.contains_lattice(S):
            raise LatticeError("sublattice is not contained in the ambient lattice")
        r = L.rank
        gens = [L.coordinates(b) for b in S.basis]
    else:
        r = L.rank if isinstance(L, Lattice) else int(L)
        if S.ambient != r:
            raise LatticeError(f"dimension mismatch: Z^{r} vs sublattice of Z^{S.ambient}")
        gens = list(S.basis)
    if not gens:
        return FiniteAbelianGroup((), r)
    diag = [d for d in smith_diagonal(from_columns(gens, r)) if d]
    return FiniteAbelianGroup(tuple(d for d in diag if d > 1), r - len(diag))


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> Sublattice:
    """Saturated kernel {y in Z^n : M y = 0}."""
    n = len(M[0]) if M else int(ncols or 0)
    if not M:
        return Sublattice.full(n)
    D, _, V = smith_normal_form(M)
    Vc = columns(V)
    nonzero = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return Sublattice.span(n, Vc[nonzero:])


def congruence_kernel(M: Sequence[Sequence[int]], modulus: int, ncols: int | None = None) -> Sublattice:
    """{y in Z^n : M y = 0 mod modulus}."""
    n = len(M[0]) if M else int(ncols or 0)
    if not M:
        return Sublattice.full(n)
    D, _, V = smith_normal_form(M)
    Vc = columns(V)
    gens = []
    for j in range(n):
        d = D[j][j] if j < len(D) else 0
        gens.append(tuple((modulus // gcd(modulus, d)) * x for x in Vc[j]))
    return Sublattice.span(n, gens)


def automorphism_order(g: Sequence[Sequence[int]], cap: int = ORDER_CAP) -> int:
    r = len(g)
    ident = identity(r)
    power = as_matrix(g)
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = mat_mul(power, g)
    raise LatticeError(f"automorphism order exceeds cap {cap}")


def fixed_sublattice(L: Lattice | int, g: Sequence[Sequence[int]]) -> Sublattice:
    """Sublattice of vectors fixed by the finite-order automorphism g."""
    r = L.rank if isinstance(L, Lattice) else int(L)
    g = as_matrix(g)
    if len(g) != r or not is_unimodular(g):
        raise LatticeError("g is not a unimodular automorphism of the lattice")
    automorphism_order(g)
    return integer_kernel(mat_sub(g, identity(r)), r)


def restrict_to(S: Sublattice, g: Sequence[Sequence[int]]) -> IntMatrix:
    """Matrix of g in the basis of S (g must preserve S)."""
    cols = []
    for b in S.basis:
        c = S.coordinates(mat_vec(g, b))
        if c is None:
            raise LatticeError("map does not preserve the sublattice")
        cols.append(c)
    return from_columns(cols, S.rank)
