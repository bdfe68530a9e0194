"""Sharp and non-sharp covers of split tori over a tame p-adic field.

A cover is incarnated by an integer matrix C: the cocycle on
T = Y (x) F^x is theta(t1, t2) = sum_ij c_ij Hilb_n(x_i(t1), x_j(t2)),
written additively in Z/n.  Finite computations use the quotient
F^x / (F^x)^n = Z/n x Z/n generated by p and the least primitive root u0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .covers import CoverSpec, QuadraticForm, lattice_YQn
from .lattice import (
    IntMatrix,
    Sublattice,
    as_matrix,
    congruence_kernel,
    fixed_sublattice,
    identity,
    is_unimodular,
    mat_mul,
    mat_vec,
    restrict_to,
    transpose,
    unimodular_inverse,
)
from .localarith import LocalElement, Place, _generator, hilbert2, hilbert_n_tame
from .rootdata import weyl_group

CENTER_CAP = 10**6


class TorusError(ValueError):
    pass


@dataclass(frozen=True)
class TorusCover:
    C: IntMatrix
    n: int
    p: int

    def __post_init__(self):
        C = as_matrix(self.C)
        object.__setattr__(self, "C", C)
        if any(len(row) != len(C) for row in C):
            raise TorusError("incarnation matrix must be square")
        if self.n < 1 or self.p == 2 or (self.p - 1) % self.n:
            raise TorusError(f"need n | p - 1 with p odd, got n = {self.n}, p = {self.p}")
        Place(self.p)

    @property
    def rank(self) -> int:
        return len(self.C)

    @property
    def place(self) -> Place:
        return Place(self.p)

    @property
    def form(self) -> QuadraticForm:
        return QuadraticForm(self.C)

    @property
    def B(self) -> IntMatrix:
        return self.form.gram

    def Q(self, y: Sequence[int]) -> int:
        return self.form(y)

    @property
    def Y_qn(self) -> Sublattice:
        return congruence_kernel(self.B, self.n, self.rank)

    @property
    def sharp(self) -> bool:
        if self.Y_qn != Sublattice.full(self.rank):
            return False
        return self.n % 2 == 0 or self.form.is_even()


@dataclass(frozen=True)
class TorusElement:
    """t in Y (x) F^x, recorded by its coordinates x_i(t)."""

    coords: tuple[LocalElement, ...]

    def __post_init__(self):
        places = {c.place for c in self.coords}
        if len(places) > 1:
            raise TorusError("coordinates live at different places")

    @classmethod
    def power(cls, u: LocalElement, y: Sequence[int]) -> "TorusElement":
        """The element u^y = y (x) u."""
        return cls(tuple(u**k for k in y))

    @classmethod
    def identity(cls, place: Place, r: int) -> "TorusElement":
        one = LocalElement.from_rational(1, place)
        return cls(tuple(one for _ in range(r)))

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        return TorusElement(tuple(a * b for a, b in zip(self.coords, other.coords)))


def _check_element(cover: TorusCover, t: TorusElement) -> None:
    if len(t.coords) != cover.rank:
        raise TorusError("element rank differs from the cover rank")
    if any(c.place != cover.place for c in t.coords):
        raise TorusError(f"element is not at the place {cover.place}")


def cocycle_theta(cover: TorusCover, t1: TorusElement, t2: TorusElement) -> int:
    _check_element(cover, t1)
    _check_element(cover, t2)
    n = cover.n
    total = 0
    for i, row in enumerate(cover.C):
        for j, c in enumerate(row):
            if c % n:
                total += c * hilbert_n_tame(t1.coords[i], t2.coords[j], n)
    return total % n


def commutator(cover: TorusCover, a: tuple[Sequence[int], LocalElement], b: tuple[Sequence[int], LocalElement]) -> int:
    """Commutator index of lifts of u^{y1} and v^{y2}; checked against B(y1, y2) Hilb_n(u, v)."""
    (y1, u), (y2, v) = a, b
    t1, t2 = TorusElement.power(u, y1), TorusElement.power(v, y2)
    value = (cocycle_theta(cover, t1, t2) - cocycle_theta(cover, t2, t1)) % cover.n
    predicted = cover.form.bilinear(y1, y2) * hilbert_n_tame(u, v, cover.n) % cover.n
    if value != predicted:
        raise TorusError(f"commutator {value} differs from B * Hilb = {predicted}")
    return value


# ------------------------------------------------------------- finite model


@dataclass(frozen=True)
class FiniteModel:
    """T / T^n with each coordinate p^a u0^b stored as (a, b) mod n."""

    cover: TorusCover
    u0: int
    gram: tuple[tuple[int, int], tuple[int, int]] = field(repr=False)

    @classmethod
    def of(cls, cover: TorusCover) -> "FiniteModel":
        place, n = cover.place, cover.n
        u0 = _generator(cover.p)
        gens = (LocalElement.from_rational(cover.p, place), LocalElement.from_rational(u0, place))
        gram = tuple(tuple(hilbert_n_tame(s, t, n) for t in gens) for s in gens)
        return cls(cover, u0, gram)

    def element(self, pairs: Sequence[tuple[int, int]]) -> TorusElement:
        place = self.cover.place
        return TorusElement(tuple(LocalElement.from_parts(place, a, pow(self.u0, b, self.cover.p ** 6))
                                  for a, b in pairs))

    def symbol(self, s: tuple[int, int], t: tuple[int, int]) -> int:
        h = self.gram
        return (s[0] * t[0] * h[0][0] + s[0] * t[1] * h[0][1] + s[1] * t[0] * h[1][0] + s[1] * t[1] * h[1][1]) % self.cover.n

    def theta(self, t1: Sequence[tuple[int, int]], t2: Sequence[tuple[int, int]]) -> int:
        total = 0
        for i, row in enumerate(self.cover.C):
            for j, c in enumerate(row):
                total += c * self.symbol(t1[i], t2[j])
        return total % self.cover.n

    def torus_points(self):
        n = self.cover.n
        pair = list(itertools.product(range(n), repeat=2))
        return itertools.product(pair, repeat=self.cover.rank)

    @property
    def order(self) -> int:
        return self.cover.n ** (2 * self.cover.rank + 1)


@dataclass(frozen=True)
class CenterReport:
    order: int
    center_order: int
    predicted_order: int
    matches: bool
    center: tuple = field(repr=False)

    def to_json(self) -> dict:
        return {"group_order": self.order, "center_order": self.center_order,
                "predicted_order": self.predicted_order, "matches": self.matches}


def _predicted_center_points(cover: TorusCover) -> set:
    """Images of Y_{Q,n} (x) F^x in the finite model."""
    n, r = cover.n, cover.rank
    gens = []
    for h in cover.Y_qn.basis:
        gens.append(tuple((k % n, 0) for k in h))
        gens.append(tuple((0, k % n) for k in h))
    points = {tuple((0, 0) for _ in range(r))}
    frontier = list(points)
    while frontier:
        new = []
        for t in frontier:
            for g in gens:
                s = tuple(((a + c) % n, (b + d) % n) for (a, b), (c, d) in zip(t, g))
                if s not in points:
                    points.add(s)
                    new.append(s)
        frontier = new
    return points


def center_of_cover(cover: TorusCover) -> CenterReport:
    """Brute-force center of the finite extension mu_n -> E -> T / T^n, compared with Y_{Q,n}."""
    model = FiniteModel.of(cover)
    if model.order > CENTER_CAP:
        raise TorusError(f"finite model has order {model.order} above {CENTER_CAP}")
    points = list(model.torus_points())
    # (t, z) is central iff theta(t, s) = theta(s, t) for every s; z never matters
    central = tuple(t for t in points if all(model.theta(t, s) == model.theta(s, t) for s in points))
    predicted = _predicted_center_points(cover)
    n = cover.n
    return CenterReport(model.order, len(central) * n, len(predicted) * n, set(central) == predicted, central)


# ------------------------------------------------------------- sharp covers


@dataclass(frozen=True)
class SharpComparison:
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    equal: bool
    basis_invariant: bool


def tau_character(cover: TorusCover, basis: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Q(y_i) mod n for each basis vector; for a sharp cover these lie in {0, n/2}."""
    return tuple(cover.Q(b) % cover.n for b in basis)


def theta_sharp_compare(cover: TorusCover, u: LocalElement, v: LocalElement,
                        g: Sequence[Sequence[int]] | None = None) -> SharpComparison:
    """Compare prod_i Hilb_n(u,v)^{Q(y_i) x_i} with tau_Q(Hilb_2(u,v)), both as mu_n indices per x_i."""
    if not cover.sharp:
        raise TorusError("cover is not sharp")
    n, r = cover.n, cover.rank
    h = hilbert_n_tame(u, v, n)
    std = identity(r)
    lhs = tuple(q * h % n for q in tau_character(cover, std))
    sign = hilbert2(u, v)
    rhs = tuple(q if sign == -1 else 0 for q in tau_character(cover, std))
    invariant = True
    if g is not None:
        g = as_matrix(g)
        if not is_unimodular(g):
            raise TorusError("basis change is not unimodular")
        new_basis = transpose(unimodular_inverse(g))  # rows are the y'_i
        lhs_new = [q * h % n for q in tau_character(cover, new_basis)]
        # sum_i q'_i x'_i = sum_j (sum_i q'_i g_ij) x_j
        pulled = tuple(sum(lhs_new[i] * g[i][j] for i in range(r)) % n for j in range(r))
        invariant = pulled == lhs
    return SharpComparison(lhs, rhs, lhs == rhs, invariant)


# ------------------------------------------------------------- basis change


@dataclass(frozen=True)
class BasisChangeTwist:
    exponents: tuple[int, ...]
    chi: int
    twist: tuple[int, ...]
    involutive: bool

    def to_json(self) -> dict:
        return {"exponents": list(self.exponents), "chi": self.chi, "twist": list(self.twist),
                "involutive": self.involutive}


def changed_incarnation(C: Sequence[Sequence[int]], g: Sequence[Sequence[int]]) -> IntMatrix:
    """C in the basis y'_i, where sum_i g_ij y'_i = y_j: c' = g^{-T} C g^{-1}."""
    ginv = unimodular_inverse(g)
    return mat_mul(mat_mul(transpose(ginv), C), ginv)


def twist_exponents(C: Sequence[Sequence[int]], g: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """e_j = sum_i Delta_ij + sum_{k<l} Gamma_j^{kl} mod 2."""
    C, g = as_matrix(C), as_matrix(g)
    if not is_unimodular(g):
        raise TorusError("basis change is not unimodular")
    c = changed_incarnation(C, g)
    r = len(g)
    out = []
    for j in range(r):
        delta = sum(c[i][i] * g[i][j] * (g[i][j] - 1) // 2 for i in range(r))
        gamma = sum(c[k][l] * g[k][j] * g[l][j] for k in range(r) for l in range(k + 1, r))
        out.append((delta + gamma) % 2)
    return tuple(out)


def basis_change_twist(C: Sequence[Sequence[int]], g: Sequence[Sequence[int]], u: LocalElement, n: int) -> BasisChangeTwist:
    """The twist u -> prod_j chi(u)^{e_j x_j} with chi(u) = Hilb_n(u, u), as mu_n indices."""
    e = twist_exponents(C, g)
    chi = hilbert_n_tame(u, u, n)
    if 2 * chi % n:
        raise TorusError("Hilb_n(u, u) is not in mu_2")
    twist = tuple(k * chi % n for k in e)
    involutive = all(2 * t % n == 0 for t in twist)
    return BasisChangeTwist(e, chi, twist, involutive)


def composition_defect(C: Sequence[Sequence[int]], g: Sequence[Sequence[int]], h: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """e(hg; C) - e(g; C) - g^T e(h; C') mod 2, where C' is C in the g-changed basis."""
    g, h = as_matrix(g), as_matrix(h)
    e_g = twist_exponents(C, g)
    e_h = twist_exponents(changed_incarnation(C, g), h)
    e_hg = twist_exponents(C, mat_mul(h, g))
    carried = mat_vec(transpose(g), e_h)
    return tuple((a - b - c) % 2 for a, b, c in zip(e_hg, e_g, carried))


# ------------------------------------------------------------- unramified transfer


@dataclass(frozen=True)
class OrbitTransferReport:
    source_orbits: int
    target_orbits: int
    injective: bool
    surjective: bool
    inconclusive: int
    level: int
    search_level: int

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective and not self.inconclusive

    def to_json(self) -> dict:
        return {"source_orbits": self.source_orbits, "target_orbits": self.target_orbits,
                "injective": self.injective, "surjective": self.surjective,
                "inconclusive": self.inconclusive, "level": self.level,
                "search_level": self.search_level, "bijective": self.bijective}


def _orbit_labels(points: list[tuple], moves: list) -> dict:
    """Connected components of points under the given maps."""
    label: dict = {}
    for start in points:
        if start in label:
            continue
        label[start] = start
        stack = [start]
        while stack:
            x = stack.pop()
            for move in moves:
                y = move(x)
                if y not in label:
                    label[y] = start
                    stack.append(y)
    return label


def unramified_orbit_transfer(cs: CoverSpec, m: int, search_factor: int = 2) -> OrbitTransferReport:
    """Compare W^Fr-orbits of unramified parameters of the torus with those on Y_{Q,n}^Fr.

    Parameters over Frobenius are characters of Y_{Q,n} with values in (1/m)Z/Z,
    taken modulo (Fr - 1) of characters at level m * search_factor and modulo W^Fr.
    The map restricts a character to Y_{Q,n}^Fr.
    """
    rd = cs.rd
    fr = rd.galois if rd.galois is not None else identity(rd.rank)
    Y_qn, _ = lattice_YQn(cs)
    r = Y_qn.rank
    F = restrict_to(Y_qn, fr)
    Ft = transpose(F)
    weyl = [w for w in weyl_group(rd) if mat_mul(w, fr) == mat_mul(fr, w)]
    W_qn = [restrict_to(Y_qn, w) for w in weyl]
    fixed = fixed_sublattice(r, F)
    W_fixed = [restrict_to(fixed, w) for w in W_qn]

    big = m * search_factor
    shifts = set()
    for d in itertools.product(range(big), repeat=r):
        diff = [a - b for a, b in zip(mat_vec(Ft, d), d)]
        if all(x % search_factor == 0 for x in diff):
            shifts.add(tuple((x // search_factor) % m for x in diff))

    def act(M):
        # characters transform by chi -> chi o M^{-1}; on coefficient vectors that is M^{-T}
        Minv_t = transpose(unimodular_inverse(M))
        return lambda c: tuple(x % m for x in mat_vec(Minv_t, c))

    source = list(itertools.product(range(m), repeat=r))
    moves = [act(w) for w in W_qn] + [lambda c, s=s: tuple((a + b) % m for a, b in zip(c, s)) for s in shifts]
    src_label = _orbit_labels(source, moves)

    target = list(itertools.product(range(m), repeat=fixed.rank))
    tgt_label = _orbit_labels(target, [act(w) for w in W_fixed])

    def restrict(c):
        return tuple(sum(a * b for a, b in zip(c, f)) % m for f in fixed.basis)

    image: dict = {}
    well_defined = True
    for c in source:
        t = tgt_label[restrict(c)]
        prev = image.setdefault(src_label[c], t)
        well_defined &= prev == t
    src_classes = set(src_label.values())
    tgt_classes = set(tgt_label.values())
    hit = set(image.values())
    injective = well_defined and len(hit) == len(src_classes)
    return OrbitTransferReport(len(src_classes), len(tgt_classes), injective, hit == tgt_classes,
                               len(tgt_classes - hit), m, big)


def swap_datum_cover(kind: str, n: int = 2) -> CoverSpec:
    """Covers with a Frobenius used in the transfer checks: 'split-A1', 'A1xA1-swap', 'A2-swap'."""
    from .covers import make_cover, weyl_invariant_form
    from .rootdata import build_root_datum, from_simple

    if kind == "split-A1":
        rd = build_root_datum("A", 1)
        form = weyl_invariant_form(rd, 1)
    elif kind == "A1xA1-swap":
        rd = from_simple(2, [(2, 0), (0, 2)], [(1, 0), (0, 1)], galois=[[0, 1], [1, 0]])
        form = QuadraticForm.from_matrix([[1, 0], [0, 1]])
    elif kind == "A2-swap":
        rd = build_root_datum("A", 2).with_galois([[0, 1], [1, 0]])
        form = weyl_invariant_form(rd, 1)
    else:
        raise TorusError(f"unknown transfer case {kind!r}")
    return make_cover(rd, form, n)

