"""Dual groups of covers from (root datum, quadratic form, degree).

The quadratic form is stored through an integer matrix C with
Q(y) = y^T C y, so B = C + C^T is the polar form and beta = B / n.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .lattice import (
    FiniteAbelianGroup,
    IntMatrix,
    Sublattice,
    Vector,
    as_matrix,
    congruence_kernel,
    dot,
    fixed_sublattice,
    from_columns,
    mat_mul,
    mat_vec,
    quotient_structure,
    rational_inverse,
    restrict_to,
    transpose,
)
from .rootdata import (
    IsogenyName,
    RootDatum,
    _supported_on,
    build_root_datum,
    ensure_valid,
    identify_isogeny,
    label_with_star,
    weyl_group,
)


class CoverError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticForm:
    C: IntMatrix

    @classmethod
    def from_matrix(cls, C: Sequence[Sequence[int]]) -> "QuadraticForm":
        return cls(as_matrix(C))

    @classmethod
    def from_values(cls, diagonal: Sequence[int], polar: Sequence[Sequence[int]] | None = None) -> "QuadraticForm":
        """Upper-triangular incarnation from Q(e_i) and B(e_i, e_j), i < j."""
        r = len(diagonal)
        C = [[0] * r for _ in range(r)]
        for i in range(r):
            C[i][i] = int(diagonal[i])
            for j in range(i + 1, r):
                C[i][j] = int(polar[i][j]) if polar is not None else 0
        return cls(as_matrix(C))

    @property
    def rank(self) -> int:
        return len(self.C)

    def __call__(self, y: Sequence[int]) -> int:
        return dot(y, mat_vec(self.C, y))

    @property
    def gram(self) -> IntMatrix:
        """B = C + C^T."""
        return as_matrix([[self.C[i][j] + self.C[j][i] for j in range(self.rank)] for i in range(self.rank)])

    def bilinear(self, y1: Sequence[int], y2: Sequence[int]) -> int:
        return dot(y1, mat_vec(self.gram, y2))

    def beta(self, y1: Sequence[int], y2: Sequence[int], n: int) -> Fraction:
        return Fraction(self.bilinear(y1, y2), n)

    def scaled(self, k: int) -> "QuadraticForm":
        return QuadraticForm(as_matrix([[k * x for x in row] for row in self.C]))

    def plus(self, other: "QuadraticForm") -> "QuadraticForm":
        return QuadraticForm(as_matrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.C, other.C)]))

    def pullback(self, g: Sequence[Sequence[int]]) -> "QuadraticForm":
        """The form y -> Q(g y)."""
        return QuadraticForm(as_matrix(mat_mul(mat_mul(transpose(g), self.C), g)))

    def is_even(self) -> bool:
        B = self.gram
        return all(self.C[i][i] % 2 == 0 for i in range(self.rank)) and all(
            B[i][j] % 2 == 0 for i in range(self.rank) for j in range(i + 1, self.rank))

    def congruent_mod(self, other: "QuadraticForm", n: int) -> bool:
        B1, B2 = self.gram, other.gram
        r = self.rank
        return all((self.C[i][i] - other.C[i][i]) % n == 0 for i in range(r)) and all(
            (B1[i][j] - B2[i][j]) % n == 0 for i in range(r) for j in range(i + 1, r))

    def invariance_violation(self, g: Sequence[Sequence[int]]) -> tuple[int, int] | None:
        B = self.gram
        gBg = mat_mul(mat_mul(transpose(g), B), g)
        for i in range(self.rank):
            for j in range(self.rank):
                if gBg[i][j] != B[i][j]:
                    return (i, j)
        return None


def check_invariance(rd: RootDatum, form: QuadraticForm) -> str | None:
    """None if Q is Weyl (and Galois) invariant, else a description of the failure."""
    if form.rank != rd.rank:
        return f"form has rank {form.rank}, datum has rank {rd.rank}"
    for i in rd.simple:
        bad = form.invariance_violation(rd.reflection_matrix_y(i))
        if bad is not None:
            return f"not invariant under simple reflection {i} (entry {bad})"
    if rd.galois is not None and form.invariance_violation(rd.galois) is not None:
        return "not invariant under the Galois action"
    return None


def weyl_invariant_form(rd: RootDatum, short_coroot_value: int | None = None, gl: tuple[int, int] | None = None,
                        gsp: tuple[int, int] | None = None, explicit: Sequence[Sequence[int]] | None = None
                        ) -> QuadraticForm:
    """Weyl-invariant quadratic form on Y.

    short_coroot_value=t  -- semisimple data: value t on the short coroots of every simple factor
    gl=(q, c)             -- GL_r: Q(e_1 - e_2) = q, Q(e_1) = 1 + c
    gsp=(kappa, nu)       -- GSp_{2r}: Q(e_0) = kappa, Q(e_i) = nu
    explicit=C            -- any incarnation, checked for invariance
    """
    r = rd.rank
    if explicit is not None:
        form = QuadraticForm.from_matrix(explicit)
    elif gl is not None:
        q, c = gl
        a = 1 + c
        b = 2 * a - q
        form = QuadraticForm.from_values([a] * r, [[b] * r for _ in range(r)])
    elif gsp is not None:
        kappa, nu = gsp
        polar = [[0] * r for _ in range(r)]
        for j in range(1, r):
            polar[0][j] = -nu
        form = QuadraticForm.from_values([kappa] + [nu] * (r - 1), polar)
    elif short_coroot_value is not None:
        form = _form_from_short_value(rd, short_coroot_value)
    else:
        raise CoverError("no form specification given")
    problem = check_invariance(rd, form)
    if problem:
        raise CoverError(f"invariance violation: {problem}")
    return form


def _form_from_short_value(rd: RootDatum, t: int) -> QuadraticForm:
    from .rootdata import classify_cartan

    r = rd.rank
    if rd.semisimple_rank != r:
        raise CoverError("short-coroot normalization needs a semisimple datum; use gl/gsp/explicit")
    gram = [[Fraction(0)] * r for _ in range(r)]
    for comp in classify_cartan(rd.cartan_matrix()):
        positions = set(comp.order)
        ids = [i for i in range(len(rd.roots)) if _supported_on(rd, i, positions)]
        K = [[sum(rd.roots[i][a] * rd.roots[i][b] for i in ids) for b in range(r)] for a in range(r)]
        short = min(dot(rd.coroots[i], mat_vec(K, rd.coroots[i])) for i in ids)
        s = Fraction(t, short)
        for a in range(r):
            for b in range(r):
                gram[a][b] += s * K[a][b]
    C = [[0] * r for _ in range(r)]
    for a in range(r):
        for b in range(a, r):
            val = gram[a][a] if a == b else 2 * gram[a][b]
            if val.denominator != 1:
                raise CoverError("normalized form is not integral on Y")
            C[a][b] = int(val)
    return QuadraticForm.from_matrix(C)


@dataclass(frozen=True)
class CoverSpec:
    rd: RootDatum
    form: QuadraticForm
    n: int
    normalized: bool = False

    @property
    def Q(self) -> QuadraticForm:
        return self.form


def make_cover(rd: RootDatum, form: QuadraticForm, n: int, strict: bool = False) -> CoverSpec:
    """Build a cover; for odd n with Q not even, Q is replaced by (n+1)Q unless strict."""
    if n < 1:
        raise CoverError("degree must be positive")
    problem = check_invariance(rd, form)
    if problem:
        raise CoverError(f"invariance violation: {problem}")
    if n % 2 and not form.is_even():
        if strict:
            raise CoverError("odd degree requires an even-valued form")
        return CoverSpec(rd, form.scaled(n + 1), n, True)
    return CoverSpec(rd, form, n, False)


def modified_constants(cs: CoverSpec, coroot: int | Sequence[int]) -> tuple[int, int]:
    """(n_phi, m_phi) for a coroot given by index or vector."""
    vec = cs.rd.coroots[coroot] if isinstance(coroot, int) else tuple(coroot)
    q = cs.form(vec)
    return constants_from_value(q, cs.n)


def constants_from_value(q: int, n: int) -> tuple[int, int]:
    g = gcd(n, q) if q else n
    return n // g, q // g


def lattice_YQn(cs: CoverSpec) -> tuple[Sublattice, Sublattice]:
    """(Y_{Q,n}, n * X_{Q,n}) as sublattices of Y and X."""
    r = cs.rd.rank
    Y_qn = congruence_kernel(cs.form.gram, cs.n, r)
    if r == 0:
        return Y_qn, Y_qn
    # rows of H^{-1} form the basis of X_{Q,n} dual to the columns of H
    dual = rational_inverse(from_columns(Y_qn.basis, r))
    scaled = []
    for row in dual:
        v = [cs.n * x for x in row]
        if any(x.denominator != 1 for x in v):
            raise CoverError("n X_{Q,n} is not integral")
        scaled.append([int(x) for x in v])
    return Y_qn, Sublattice.span(r, scaled)


def in_YQn(cs: CoverSpec, y: Sequence[int]) -> bool:
    return all(x % cs.n == 0 for x in mat_vec(cs.form.gram, y))


def sc_characterization_check(cs: CoverSpec, radius: int) -> tuple[bool, Vector | None]:
    """Compare beta-integrality with the congruences <alpha_i, y> in n_i Z on a box."""
    rd = cs.rd
    if Sublattice.span(rd.rank, rd.coroots) != Sublattice.full(rd.rank):
        raise CoverError("datum is not simply connected")
    simple = [(rd.roots[i], modified_constants(cs, i)[0]) for i in rd.simple]
    rng = range(-radius, radius + 1)
    for y in itertools.product(rng, repeat=rd.rank):
        by_beta = in_YQn(cs, y)
        by_roots = all(dot(a, y) % ni == 0 for a, ni in simple)
        if by_beta != by_roots:
            return False, tuple(y)
    return True, None


def modified_root_datum(cs: CoverSpec) -> RootDatum:
    """The datum (Y_{Q,n}, n_phi phi^vee, X_{Q,n}, phi / n_phi) in the basis of Y_{Q,n}."""
    rd = cs.rd
    Y_qn, _ = lattice_YQn(cs)
    basis = Y_qn.basis
    roots, coroots = [], []
    for i, (a, c) in enumerate(zip(rd.roots, rd.coroots)):
        n_phi, _ = modified_constants(cs, i)
        coords = Y_qn.coordinates([n_phi * x for x in c])
        if coords is None:
            raise CoverError("modified coroot outside Y_{Q,n}")
        roots.append(coords)
        pair = [Fraction(dot(a, b), n_phi) for b in basis]
        if any(x.denominator != 1 for x in pair):
            raise CoverError("modified root not integral on Y_{Q,n}")
        coroots.append(tuple(int(x) for x in pair))
    galois = None if rd.galois is None else restrict_to(Y_qn, rd.galois)
    out = RootDatum(Y_qn.rank, tuple(roots), tuple(coroots), rd.simple, galois, None)
    return ensure_valid(out)


@dataclass(frozen=True)
class DualGroupReport:
    modified: RootDatum
    name: IsogenyName
    center: FiniteAbelianGroup
    tau_trivial: bool
    tau_values: tuple[Fraction, ...]  # n^{-1} Q(h) mod Z on the basis h of Y_{Q,n}
    lattice: Sublattice = field(compare=False)

    @property
    def label(self) -> str:
        return label_with_star(self.name, self.tau_trivial)

    def tau_element(self, coords: Sequence[int]) -> Fraction:
        return sum((c * t for c, t in zip(coords, self.tau_values)), Fraction(0)) % 1

    def summary(self) -> str:
        tau = "trivial" if self.tau_trivial else "nontrivial"
        center = "Z/1" if self.center.is_trivial else str(self.center)
        return f"{self.name.label}, center {center}, tau: {tau}"

    def to_json(self) -> dict:
        return {
            "label": self.name.label,
            "cell": self.label,
            "center": self.center.to_json(),
            "tau_trivial": self.tau_trivial,
            "tau_values": [str(t) for t in self.tau_values],
            "Y_Qn": [list(b) for b in self.lattice.basis],
            "modified": self.modified.to_json(),
        }


def tau_values(cs: CoverSpec, Y_qn: Sublattice) -> tuple[Fraction, ...]:
    vals = []
    for h in Y_qn.basis:
        q = cs.form(h)
        if (2 * q) % cs.n:
            raise CoverError("2Q(y) not in nZ on Y_{Q,n}")
        vals.append(Fraction(q, cs.n) % 1)
    return tuple(vals)


def center_and_tau(cs: CoverSpec, style: str | None = None) -> DualGroupReport:
    rd = cs.rd
    modified = modified_root_datum(cs)
    Y_qn, _ = lattice_YQn(cs)
    for i, c in enumerate(rd.coroots):
        n_phi, m_phi = modified_constants(cs, i)
        if cs.form([n_phi * x for x in c]) != n_phi * m_phi * cs.n:
            raise CoverError("Q of a modified coroot differs from n_phi m_phi n")
    center = quotient_structure(modified.rank, Sublattice.span(modified.rank, modified.roots))
    taus = tau_values(cs, Y_qn)
    name = identify_isogeny(modified, style)
    return DualGroupReport(modified, name, center, all(t == 0 for t in taus), taus, Y_qn)


def dual_group(rd: RootDatum, form: QuadraticForm, n: int) -> DualGroupReport:
    return center_and_tau(make_cover(rd, form, n))


def check_mod_n_equivalence(rd: RootDatum, Q: QuadraticForm, Q0: QuadraticForm, n: int) -> bool:
    if not Q.congruent_mod(Q0, n):
        return False
    a = modified_root_datum(make_cover(rd, Q, n))
    b = modified_root_datum(make_cover(rd, Q0, n))
    if a != b:
        raise CoverError("congruent forms gave different modified data")
    return True


@dataclass(frozen=True)
class WellAlignedResult:
    ok: bool
    failed: str | None = None
    lattice_map: IntMatrix | None = None  # Y_{1,Q,n} -> Y_{2,Q,n} in the stored bases
    dual_map: IntMatrix | None = None  # X_{2,Q,n} -> X_{1,Q,n}, the transpose


def well_aligned_dual(iota: Sequence[Sequence[int]], cs1: CoverSpec, cs2: CoverSpec) -> WellAlignedResult:
    iota = as_matrix(iota)
    rd1, rd2 = cs1.rd, cs2.rd
    if cs1.n != cs2.n:
        return WellAlignedResult(False, "degrees differ")
    if len(iota) != rd2.rank or any(len(row) != rd1.rank for row in iota):
        return WellAlignedResult(False, "map has the wrong shape")
    simple2 = set(rd2.simple_coroots)
    images = [mat_vec(iota, c) for c in rd1.simple_coroots]
    if any(v not in simple2 for v in images) or len(set(images)) != len(images):
        return WellAlignedResult(False, "condition 1: simple coroots must map injectively to simple coroots")
    pulled = mat_mul(mat_mul(transpose(iota), cs2.form.gram), iota)
    if pulled != cs1.form.gram:
        return WellAlignedResult(False, "condition 3: Q1 differs from Q2 composed with the map")
    Y1, _ = lattice_YQn(cs1)
    Y2, _ = lattice_YQn(cs2)
    cols = []
    for h in Y1.basis:
        c = Y2.coordinates(mat_vec(iota, h))
        if c is None:
            return WellAlignedResult(False, "condition 4: image of Y_{1,Q,n} not inside Y_{2,Q,n}")
        cols.append(c)
    lattice_map = from_columns(cols, Y2.rank)
    t1, t2 = tau_values(cs1, Y1), tau_values(cs2, Y2)
    for k, c in enumerate(cols):
        if sum((x * t for x, t in zip(c, t2)), Fraction(0)) % 1 != t1[k]:
            raise CoverError("tau elements are not compatible")
    return WellAlignedResult(True, None, lattice_map, as_matrix(transpose(lattice_map)) if cols else ())


@dataclass(frozen=True)
class LeviReport:
    subset: tuple[int, ...]
    root_indices: tuple[int, ...]
    report: DualGroupReport
    ambient: DualGroupReport


def levi_datum(rd: RootDatum, subset: Sequence[int]) -> tuple[RootDatum, tuple[int, ...]]:
    positions = {rd.simple.index(i) for i in subset}
    ids = tuple(i for i in range(len(rd.roots)) if rd.semisimple_rank and _supported_on(rd, i, positions))
    simple = tuple(ids.index(i) for i in sorted(subset, key=rd.simple.index))
    levi = RootDatum(rd.rank, tuple(rd.roots[i] for i in ids), tuple(rd.coroots[i] for i in ids), simple, None, None)
    return ensure_valid(levi), ids


def levi_embedding(cs: CoverSpec, subset: Sequence[int]) -> LeviReport:
    """Dual group data of the Levi subgroup spanned by the simple roots in `subset` (root indices)."""
    if any(i not in cs.rd.simple for i in subset):
        raise CoverError("subset must consist of simple root indices")
    levi, ids = levi_datum(cs.rd, subset)
    sub = CoverSpec(levi, cs.form, cs.n, cs.normalized)
    report = center_and_tau(sub)
    ambient = center_and_tau(cs)
    if report.lattice != ambient.lattice or report.tau_values != ambient.tau_values:
        raise CoverError("Levi tau element differs from the ambient one")
    return LeviReport(tuple(subset), ids, report, ambient)


def weyl_splitting_twist(cs: CoverSpec, orbit: Sequence[int]) -> tuple[int, ...]:
    """Exponents mod 2, on the basis of Y_{Q,n}, of the twist attached to an orbit of orthogonal roots."""
    rd = cs.rd
    for i in orbit:
        for j in orbit:
            if i != j and dot(rd.roots[i], rd.coroots[j]) != 0:
                raise CoverError("orbit roots are not pairwise orthogonal")
    values = {cs.form(rd.coroots[i]) for i in orbit}
    if len(values) != 1:
        raise CoverError("orbit coroots have different Q values")
    q_beta = values.pop()
    Y_qn, _ = lattice_YQn(cs)
    if q_beta % 2 == 0:
        return tuple(0 for _ in Y_qn.basis)
    n = cs.n
    out = []
    for h in Y_qn.basis:
        total = Fraction(0)
        for i in orbit:
            n_phi, _ = modified_constants(cs, i)
            total += Fraction(n * dot(rd.roots[i], h), 2 * n_phi)
        if total.denominator != 1:
            raise CoverError("twist exponent is not integral")
        out.append(int(total) % 2)
    return tuple(out)


def frobenius_fixed_support(cs: CoverSpec) -> Sublattice:
    """Frobenius-fixed vectors of Y_{Q,n}, as a sublattice of Y."""
    if cs.rd.galois is None:
        raise CoverError("cover carries no Galois action")
    Y_qn, _ = lattice_YQn(cs)
    g = restrict_to(Y_qn, cs.rd.galois)
    fixed = fixed_sublattice(Y_qn.rank, g)
    return Sublattice.span(cs.rd.rank, [tuple(sum(c * b[k] for c, b in zip(v, Y_qn.basis)) for k in range(cs.rd.rank))
                                        for v in fixed.basis])


def weyl_equivariance_violation(cs: CoverSpec) -> str | None:
    Y_qn, _ = lattice_YQn(cs)
    modified = {tuple(modified_constants(cs, i)[0] * x for x in c) for i, c in enumerate(cs.rd.coroots)}
    for w in weyl_group(cs.rd):
        if any(mat_vec(w, b) not in Y_qn for b in Y_qn.basis):
            return "Weyl element does not preserve Y_{Q,n}"
        if {mat_vec(w, v) for v in modified} != modified:
            return "Weyl element does not permute modified coroots"
    return None


# ----------------------------------------------------------------------- tables

TABLE_FAMILIES = {
    "SL": ("A", 1, lambda ell: f"SL_{ell + 1}"),
    "Spin-odd": ("B", 3, lambda ell: f"Spin_{2 * ell + 1}"),
    "Sp": ("C", 3, lambda ell: f"Sp_{2 * ell}"),
    "Spin-even": ("D", 4, lambda ell: f"Spin_{2 * ell}"),
}
FAMILY_ALIASES = {"A": "SL", "B": "Spin-odd", "C": "Sp", "D": "Spin-even", "SPIN-ODD": "Spin-odd",
                  "SPIN-EVEN": "Spin-even", "SL": "SL", "SP": "Sp", "E": "E", "EXCEPTIONAL": "E"}
EXCEPTIONAL = (("E", 6, "E_6"), ("E", 7, "E_7"), ("E", 8, "E_8"), ("F", 4, "F_4"), ("G", 2, "G_2"))
DEFAULT_MAX_RANK = {"SL": 5, "Spin-odd": 8, "Sp": 5, "Spin-even": 9}


@dataclass(frozen=True)
class TableCell:
    group: str
    n: int
    report: DualGroupReport

    @property
    def text(self) -> str:
        return self.report.label

    def to_json(self, family: str) -> dict:
        return {"family": family, "group": self.group, "n": self.n, "label": self.report.name.label,
                "cell": self.text, "center": self.report.center.to_json(), "tau_trivial": self.report.tau_trivial}


@lru_cache(maxsize=None)
def _table_input(letter: str, ell: int) -> tuple[RootDatum, QuadraticForm]:
    rd = build_root_datum(letter, ell, "simply_connected")
    return rd, weyl_invariant_form(rd, short_coroot_value=1)


def table_columns(family: str, max_rank: int | None = None, min_rank: int | None = None) -> list[tuple[str, str, int]]:
    fam = FAMILY_ALIASES.get(family.upper() if family.upper() in FAMILY_ALIASES else family, family)
    if fam == "E":
        return [(name, letter, ell) for letter, ell, name in EXCEPTIONAL]
    if fam not in TABLE_FAMILIES:
        raise CoverError(f"unknown table family {family!r}")
    letter, lo, namer = TABLE_FAMILIES[fam]
    lo = lo if min_rank is None else min_rank
    hi = DEFAULT_MAX_RANK[fam] if max_rank is None else max_rank
    if hi < lo:
        raise CoverError("empty rank range")
    return [(namer(ell), letter, ell) for ell in range(lo, hi + 1)]


def canonical_family(family: str) -> str:
    key = family.upper()
    if key not in FAMILY_ALIASES:
        raise CoverError(f"unknown table family {family!r}")
    return FAMILY_ALIASES[key]


def generate_table(family: str, max_rank: int | None = None, max_degree: int = 6,
                   min_rank: int | None = None) -> list[list[TableCell]]:
    """Rows indexed by degree 1..max_degree, columns by group."""
    cols = table_columns(canonical_family(family), max_rank, min_rank)
    rows = []
    for n in range(1, max_degree + 1):
        row = []
        for name, letter, ell in cols:
            rd, form = _table_input(letter, ell)
            row.append(TableCell(name, n, center_and_tau(make_cover(rd, form, n))))
        rows.append(row)
    return rows


def table_csv(rows: list[list[TableCell]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n"] + [c.group for c in rows[0]])
    for row in rows:
        writer.writerow([row[0].n] + [c.text for c in row])
    return buf.getvalue()


def sl_tau_pattern(max_m: int, max_n: int) -> dict[tuple[int, int], bool]:
    """tau nontrivial? for SL_m with the form Q(coroot) = 1, over 2 <= m <= max_m, 1 <= n <= max_n."""
    out = {}
    for m in range(2, max_m + 1):
        rd, form = _table_input("A", m - 1)
        for n in range(1, max_n + 1):
            out[(m, n)] = not center_and_tau(make_cover(rd, form, n)).tau_trivial
    return out


def two_adic_valuation(k: int) -> int:
    return (k & -k).bit_length() - 1


def two_adic_prediction(m: int, n: int) -> bool:
    """Suspected rule read literally: nontrivial iff m and n have the same 2-adic valuation."""
    return two_adic_valuation(m) == two_adic_valuation(n)
