"""Double covers of compact real tori and discrete series parameter counting.

Points of X (x) Q are tuples of Fractions in the coordinates of X.  A
parameter lattice L between X and (1/2)X is given by a basis of such points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .covers import CoverSpec, QuadraticForm, lattice_YQn
from .lattice import IntMatrix, rational_inverse
from .rootdata import RootDatum, weyl_group

HALF = Fraction(1, 2)

Point = tuple[Fraction, ...]


class RealFormError(ValueError):
    pass


def _frac_mod1(q: Fraction) -> Fraction:
    return q - math.floor(q)


@dataclass(frozen=True)
class RealTorusCover:
    """Sharp double cover of the torus with cocharacters Y = Z^r, sigma acting by -1."""

    Q: QuadraticForm
    eta: tuple[Fraction, ...]

    def __post_init__(self):
        eta = tuple(_frac_mod1(Fraction(e)) for e in self.eta)
        object.__setattr__(self, "eta", eta)
        if len(eta) != self.Q.rank:
            raise RealFormError("eta needs one value per basis vector")
        if any(e not in (0, HALF) for e in eta):
            raise RealFormError("eta takes values in (1/2)Z/Z")
        if any(x % 2 for row in self.Q.gram for x in row):
            raise RealFormError("cover is not sharp: B is not even")

    @property
    def rank(self) -> int:
        return self.Q.rank


def kappa_from_invariants(cover: RealTorusCover) -> tuple[Fraction, ...]:
    """kappa(y_i) = eta(y_i) + Q(y_i)/2 mod Z on the standard basis."""
    r = cover.rank
    out = []
    for i in range(r):
        e = tuple(1 if k == i else 0 for k in range(r))
        out.append(_frac_mod1(cover.eta[i] + Fraction(cover.Q(e), 2)))
    return tuple(out)


def kappa_value(kappa: Sequence[Fraction], y: Sequence[int]) -> Fraction:
    return _frac_mod1(sum(Fraction(k) * a for k, a in zip(kappa, y)))


def cover_from_kappa(kappa: Sequence[Fraction]) -> RealTorusCover:
    """Diagonal form Q(sum a_i y_i) = sum 2 kappa(y_i) a_i^2 with eta = 0."""
    diag = [int(2 * _frac_mod1(Fraction(k))) for k in kappa]
    r = len(diag)
    C = [[diag[i] if i == j else 0 for j in range(r)] for i in range(r)]
    return RealTorusCover(QuadraticForm.from_matrix(C), tuple(Fraction(0) for _ in range(r)))


@dataclass(frozen=True)
class GenuineCoset:
    """The coset kappa + X inside (1/2)X."""

    kappa: Point

    @classmethod
    def of(cls, kappa: Sequence) -> "GenuineCoset":
        k = tuple(_frac_mod1(Fraction(x)) for x in kappa)
        if any(2 * x not in (0, 1) for x in k):
            raise RealFormError("kappa must lie in (1/2)X")
        return cls(k)

    def __contains__(self, xi: Sequence) -> bool:
        xi = tuple(Fraction(x) for x in xi)
        if len(xi) != len(self.kappa):
            return False
        return all((2 * x).denominator == 1 and (x - k).denominator == 1 for x, k in zip(xi, self.kappa))

    def points(self, bound: int) -> list[Point]:
        """Coset points with every coordinate in [-bound, bound]."""
        ranges = [range(math.ceil(-bound - k), math.floor(bound - k) + 1) for k in self.kappa]
        return [tuple(k + a for k, a in zip(self.kappa, shift)) for shift in itertools.product(*ranges)]


def genuine_character_coset(kappa: Sequence) -> GenuineCoset:
    return GenuineCoset.of(kappa)


# ------------------------------------------------------------- discrete series


@dataclass(frozen=True)
class DiscreteSeriesInput:
    weyl: tuple[IntMatrix, ...]  # acting on X coordinates
    coroots: tuple[tuple[int, ...], ...]  # pairings are dot products with X coordinates
    simple_coroots: tuple[tuple[int, ...], ...]
    rho: Point
    kappa: Point
    lattice_basis: tuple[Point, ...]  # basis of X_{Q,n}, containing X
    R: Fraction
    gram: tuple[tuple[Fraction, ...], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if Fraction(self.R) <= 0:
            raise RealFormError("norm bound R must be positive")
        object.__setattr__(self, "R", Fraction(self.R))
        if not is_regular(self, self.rho):
            raise RealFormError("rho is not regular")
        if not self.gram:
            r = len(self.rho)
            G = [[Fraction(0)] * r for _ in range(r)]
            for w in self.weyl:
                for a in range(r):
                    for b in range(r):
                        G[a][b] += sum(w[k][a] * w[k][b] for k in range(r))
            object.__setattr__(self, "gram", tuple(tuple(x / len(self.weyl) for x in row) for row in G))
        inv = rational_inverse(self.lattice_basis)
        for i in range(len(self.rho)):
            e = [1 if k == i else 0 for k in range(len(self.rho))]
            coords = [sum(e[a] * inv[a][b] for a in range(len(e))) for b in range(len(e))]
            if any(c.denominator != 1 for c in coords):
                raise RealFormError("X is not contained in the parameter lattice")

    @property
    def rank(self) -> int:
        return len(self.rho)

    def lattice(self, choice: str) -> tuple[Point, ...]:
        if choice == "X":
            r = self.rank
            return tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r))
        if choice in ("X_Qn", "XQn", "X_{Q,n}"):
            return self.lattice_basis
        raise RealFormError(f"unknown lattice choice {choice!r}")

    def norm_sq(self, xi: Sequence[Fraction]) -> Fraction:
        G = self.gram
        return sum(xi[a] * G[a][b] * xi[b] for a in range(self.rank) for b in range(self.rank))


def is_regular(ds: DiscreteSeriesInput, xi: Sequence[Fraction]) -> bool:
    return all(sum(c * x for c, x in zip(cv, xi)) != 0 for cv in ds.coroots)


def _apply(w: IntMatrix, xi: Sequence[Fraction]) -> Point:
    return tuple(sum(w[a][b] * xi[b] for b in range(len(xi))) for a in range(len(xi)))


def dominant_representative(ds: DiscreteSeriesInput, xi: Sequence[Fraction]) -> Point:
    """The W-conjugate with all pairings against simple coroots positive (xi regular)."""
    best = None
    for w in ds.weyl:
        v = _apply(w, xi)
        if all(sum(c * x for c, x in zip(cv, v)) > 0 for cv in ds.simple_coroots):
            if best is not None and best != v:
                raise RealFormError("two dominant conjugates found")
            best = v
    if best is None:
        raise RealFormError("no dominant conjugate; point is singular")
    return best


def _coset_points(ds: DiscreteSeriesInput, basis: Sequence[Point]) -> list[Point]:
    """Points kappa + rho + L with W-averaged norm at most R."""
    r = ds.rank
    shift = tuple(Fraction(k) + p for k, p in zip(ds.kappa, ds.rho))
    # lattice coordinates: xi = shift + sum k_i b_i; box bounds from the inverse Gram matrix
    M = [[sum(basis[i][a] * ds.gram[a][b] * basis[j][b] for a in range(r) for b in range(r))
          for j in range(r)] for i in range(r)]
    Minv = rational_inverse(M)
    inv_basis = rational_inverse(basis)
    centre = [-sum(shift[a] * inv_basis[a][i] for a in range(r)) for i in range(r)]
    R2 = ds.R * ds.R
    ranges = []
    for i in range(r):
        half_width = math.sqrt(float(R2 * Minv[i][i])) + 1e-9
        ranges.append(range(math.floor(centre[i] - half_width), math.ceil(centre[i] + half_width) + 1))
    out = []
    for ks in itertools.product(*ranges):
        xi = tuple(shift[a] + sum(k * basis[i][a] for i, k in enumerate(ks)) for a in range(r))
        if ds.norm_sq(xi) <= R2:
            out.append(xi)
    return out


def ds_parameter_orbits(ds: DiscreteSeriesInput, choice: str = "X_Qn") -> list[Point]:
    """Dominant representatives of W-orbits of regular points of kappa + rho + L within R."""
    reps = {dominant_representative(ds, xi) for xi in _coset_points(ds, ds.lattice(choice)) if is_regular(ds, xi)}
    return sorted(reps, key=lambda v: (ds.norm_sq(v), v))


@dataclass(frozen=True)
class FiberReport:
    R: Fraction
    base: tuple[Point, ...]
    fibers: tuple[tuple[Point, ...], ...]

    @property
    def cardinalities(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.fibers)

    def to_json(self, ds: DiscreteSeriesInput) -> dict:
        def fmt(v):
            return [str(x) for x in v]

        return {
            "lattice": [fmt(b) for b in ds.lattice_basis],
            "R": str(self.R),
            "orbits": [{"rep": fmt(v), "norm": math.sqrt(float(ds.norm_sq(v)))} for v in self.base],
            "fibers": [{"base_rep": fmt(v), "preimages": [fmt(p) for p in f]}
                       for v, f in zip(self.base, self.fibers)],
        }


def ds_fiber_report(ds: DiscreteSeriesInput) -> FiberReport:
    base = ds_parameter_orbits(ds, "X_Qn")
    upper = ds_parameter_orbits(ds, "X")
    base_set = set(base)
    fibers: dict[Point, list[Point]] = {v: [] for v in base}
    for v in upper:
        if v not in base_set:
            raise RealFormError(f"{v} does not lie over the X_Qn coset")
        fibers[v].append(v)
    return FiberReport(ds.R, tuple(base), tuple(tuple(fibers[v]) for v in base))


def ds_input(rd: RootDatum, kappa: Sequence, R, lattice_basis: Sequence[Sequence] | None = None) -> DiscreteSeriesInput:
    """Input built from a semisimple root datum; X_{Q,n} defaults to X."""
    r = rd.x_rank
    weyl = tuple(tuple(tuple(row) for row in _x_action(w)) for w in weyl_group(rd))
    if lattice_basis is None:
        lattice_basis = [[int(i == j) for j in range(r)] for i in range(r)]
    simple = tuple(rd.coroots[i] for i in rd.simple)
    return DiscreteSeriesInput(weyl, tuple(rd.coroots), simple, tuple(rd.rho()),
                               tuple(Fraction(k) for k in kappa),
                               tuple(tuple(Fraction(x) for x in b) for b in lattice_basis), Fraction(R))


def _x_action(w: IntMatrix) -> IntMatrix:
    """w acts on Y; on X it acts by the inverse transpose so pairings are preserved."""
    from .lattice import transpose, unimodular_inverse

    return transpose(unimodular_inverse(w))


def ds_input_from_cover(cs: CoverSpec, kappa: Sequence, R) -> DiscreteSeriesInput:
    """Parameter lattice X_{Q,n} read off the cover."""
    _, nX = lattice_YQn(cs)
    basis = [[Fraction(x, cs.n) for x in b] for b in nX.basis]
    return ds_input(cs.rd, kappa, R, basis)


def mp2_input(R, trivial: bool = False) -> DiscreteSeriesInput:
    """Rank-one shadow: SL_2 with the degree-2 cover (kappa = 1/2) or the linear group (kappa = 0)."""
    from .covers import make_cover, weyl_invariant_form
    from .rootdata import build_root_datum

    rd = build_root_datum("A", 1)
    if trivial:
        return ds_input(rd, [0], R)
    cs = make_cover(rd, weyl_invariant_form(rd, 1), 2)
    return ds_input_from_cover(cs, [HALF], R)


def synthetic_index_two(R) -> DiscreteSeriesInput:
    """Rank one with X_{Q,n} = (1/2)X and kappa = 0."""
    from .rootdata import build_root_datum

    return ds_input(build_root_datum("A", 1), [0], R, [[HALF]])
