"""Based root data: construction, validation, Weyl groups, duality and naming.

A root datum lives on X = Z^r (characters) and Y = Z^r (cocharacters) with
the standard pairing.  Roots are stored explicitly, positive roots first in
order of height, then their negatives in the same order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .lattice import (
    FiniteAbelianGroup,
    IntMatrix,
    LatticeError,
    Sublattice,
    Vector,
    as_matrix,
    automorphism_order,
    dot,
    identity,
    integer_kernel,
    is_unimodular,
    mat_mul,
    mat_vec,
    quotient_structure,
    rational_inverse,
    transpose,
    unimodular_inverse,
)

WEYL_CAP = 10**7


class RootDatumError(ValueError):
    pass


@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: tuple[Vector, ...]
    coroots: tuple[Vector, ...]
    simple: tuple[int, ...]
    galois: IntMatrix | None = None
    family: str | None = field(default=None, compare=False)

    @property
    def x_rank(self) -> int:
        return self.rank

    @property
    def simple_roots(self) -> tuple[Vector, ...]:
        return tuple(self.roots[i] for i in self.simple)

    @property
    def simple_coroots(self) -> tuple[Vector, ...]:
        return tuple(self.coroots[i] for i in self.simple)

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple)

    def cartan_matrix(self) -> IntMatrix:
        """Entries <alpha_i, alpha_j^vee>."""
        return as_matrix([[dot(a, c) for c in self.simple_coroots] for a in self.simple_roots])

    def reflect_y(self, i: int, y: Sequence[int]) -> Vector:
        a, c = self.roots[i], self.coroots[i]
        k = dot(a, y)
        return tuple(v - k * w for v, w in zip(y, c))

    def reflect_x(self, i: int, x: Sequence[int]) -> Vector:
        a, c = self.roots[i], self.coroots[i]
        k = dot(x, c)
        return tuple(v - k * w for v, w in zip(x, a))

    def reflection_matrix_y(self, i: int) -> IntMatrix:
        return as_matrix(transpose([self.reflect_y(i, e) for e in identity(self.rank)]))

    def reflection_matrix_x(self, i: int) -> IntMatrix:
        return as_matrix(transpose([self.reflect_x(i, e) for e in identity(self.rank)]))

    def galois_on_x(self) -> IntMatrix | None:
        if self.galois is None:
            return None
        return transpose(unimodular_inverse(self.galois))

    def root_index(self, root: Sequence[int]) -> int:
        return self.roots.index(tuple(root))

    def coroot_index(self, coroot: Sequence[int]) -> int:
        return self.coroots.index(tuple(coroot))

    def simple_coordinates(self, root_index: int) -> tuple[int, ...]:
        """Coordinates of a root in the basis of simple roots."""
        return _simple_coords(self.simple_roots, self.roots[root_index])

    def positive_indices(self) -> list[int]:
        return [i for i in range(len(self.roots)) if sum(self.simple_coordinates(i)) > 0]

    def rho(self) -> tuple[Fraction, ...]:
        """Half the sum of the positive roots, in X coordinates."""
        pos = self.positive_indices()
        return tuple(Fraction(sum(self.roots[i][k] for i in pos), 2) for k in range(self.rank))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.semisimple_rank,
            "X_rank": self.rank,
            "roots": [list(r) for r in self.roots],
            "coroots": [list(c) for c in self.coroots],
            "simple": list(self.simple),
            "galois": None if self.galois is None else [list(r) for r in self.galois],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "RootDatum":
        if isinstance(data, str):
            data = json.loads(data)
        galois = data.get("galois")
        return cls(
            rank=int(data["X_rank"]),
            roots=tuple(tuple(int(x) for x in r) for r in data["roots"]),
            coroots=tuple(tuple(int(x) for x in c) for c in data["coroots"]),
            simple=tuple(int(i) for i in data["simple"]),
            galois=None if galois is None else as_matrix(galois),
            family=data.get("family"),
        )

    def with_galois(self, g: Sequence[Sequence[int]] | None) -> "RootDatum":
        return RootDatum(self.rank, self.roots, self.coroots, self.simple,
                         None if g is None else as_matrix(g), self.family)


def _solve_rational(cols: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Solve sum_k c_k cols[k] = v over Q for linearly independent cols."""
    k = len(cols)
    if k == 0:
        return () if not any(v) else None
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(len(v))]
    piv_cols = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, len(rows))):
        return None
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = rows[i][k]
    return tuple(sol)


def _simple_coords(simple_roots: Sequence[Sequence[int]], root: Sequence[int]) -> tuple[int, ...]:
    sol = _solve_rational(simple_roots, root)
    if sol is None or any(s.denominator != 1 for s in sol):
        raise RootDatumError(f"{tuple(root)} is not an integral combination of simple roots")
    return tuple(int(s) for s in sol)


def from_simple(rank: int, simple_roots: Sequence[Sequence[int]], simple_coroots: Sequence[Sequence[int]],
                galois=None, family: str | None = None) -> RootDatum:
    """Close a set of simple roots and coroots under the simple reflections."""
    sr = [tuple(int(x) for x in a) for a in simple_roots]
    sc = [tuple(int(x) for x in c) for c in simple_coroots]
    ell = len(sr)
    cartan = [[dot(a, c) for c in sc] for a in sr]
    seen: dict[tuple, tuple] = {}
    queue = deque()
    for i in range(ell):
        key = tuple(int(i == j) for j in range(ell))
        seen[key] = (sr[i], sc[i])
        queue.append(key)
    while queue:
        coords = queue.popleft()
        a, c = seen[coords]
        for i in range(ell):
            k = sum(coords[j] * cartan[j][i] for j in range(ell))
            new = tuple(x - k * int(i == j) for j, x in enumerate(coords))
            if new in seen:
                continue
            if len(seen) > 2000:
                raise RootDatumError("root closure does not terminate (not a finite root system)")
            na = tuple(x - k * y for x, y in zip(a, sr[i]))
            kc = dot(sr[i], c)
            nc = tuple(x - kc * y for x, y in zip(c, sc[i]))
            seen[new] = (na, nc)
            queue.append(new)
    positive = sorted((k for k in seen if sum(k) > 0), key=lambda k: (sum(k), [-x for x in k]))
    order = positive + [tuple(-x for x in k) for k in positive]
    missing = [k for k in order if k not in seen]
    if missing:
        raise RootDatumError("root set is not symmetric under negation")
    roots = tuple(seen[k][0] for k in order)
    coroots = tuple(seen[k][1] for k in order)
    rd = RootDatum(rank, roots, coroots, tuple(range(ell)),
                   None if galois is None else as_matrix(galois), family)
    return rd


# ---------------------------------------------------------------- Cartan types

def cartan_of_type(letter: str, ell: int) -> list[list[int]]:
    """Cartan matrix <alpha_i, alpha_j^vee> in Bourbaki numbering."""
    letter = letter.upper()
    bounds = {"A": 1, "B": 1, "C": 1, "D": 3}
    if letter in bounds:
        if ell < bounds[letter]:
            raise RootDatumError(f"rank {ell} out of range for type {letter}")
    elif (letter, ell) not in {("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)}:
        raise RootDatumError(f"rank {ell} out of range for type {letter}")
    A = [[2 * int(i == j) for j in range(ell)] for i in range(ell)]

    def bond(i, j, a_ij=-1, a_ji=-1):
        A[i][j], A[j][i] = a_ij, a_ji

    if letter in "ABC":
        for i in range(ell - 1):
            bond(i, i + 1)
        if ell >= 2 and letter == "B":
            bond(ell - 2, ell - 1, -2, -1)
        if ell >= 2 and letter == "C":
            bond(ell - 2, ell - 1, -1, -2)
    elif letter == "D":
        for i in range(ell - 2):
            bond(i, i + 1)
        bond(ell - 3, ell - 1)
    elif letter == "E":
        bond(0, 2)
        bond(1, 3)
        for i in range(2, ell - 1):
            bond(i, i + 1)
    elif letter == "F":
        bond(0, 1)
        bond(1, 2, -2, -1)
        bond(2, 3)
    elif letter == "G":
        bond(0, 1, -1, -3)
    return A


def _simply_connected(letter: str, ell: int, family: str | None = None) -> RootDatum:
    A = cartan_of_type(letter, ell)
    # Y has the simple coroots as basis, X the fundamental weights
    simple_roots = [A[j] for j in range(ell)]
    simple_coroots = list(identity(ell))
    return from_simple(ell, simple_roots, simple_coroots, family=family or letter)


def _adjoint(letter: str, ell: int, family: str | None = None) -> RootDatum:
    A = cartan_of_type(letter, ell)
    simple_roots = list(identity(ell))
    simple_coroots = [[A[j][i] for j in range(ell)] for i in range(ell)]
    return from_simple(ell, simple_roots, simple_coroots, family=family or letter)


def _unit(r: int, i: int) -> list[int]:
    return [int(i == j) for j in range(r)]


def _diff(r: int, i: int, j: int) -> list[int]:
    return [int(k == i) - int(k == j) for k in range(r)]


def _special_orthogonal(ell: int, odd: bool) -> RootDatum:
    roots = [_diff(ell, i, i + 1) for i in range(ell - 1)]
    coroots = [_diff(ell, i, i + 1) for i in range(ell - 1)]
    if odd:
        roots.append(_unit(ell, ell - 1))
        coroots.append([2 * x for x in _unit(ell, ell - 1)])
    else:
        v = [int(k >= ell - 2) for k in range(ell)]
        roots.append(v)
        coroots.append(v)
    return from_simple(ell, roots, coroots, family="B" if odd else "D")


def general_linear(r: int) -> RootDatum:
    if r < 1:
        raise RootDatumError("GL_r needs r >= 1")
    simple = [_diff(r, i, i + 1) for i in range(r - 1)]
    return from_simple(r, simple, simple, family="GL")


def general_symplectic(r: int) -> RootDatum:
    """GSp_{2r} on the basis e_0, ..., e_r of Y (dual basis f_0, ..., f_r of X)."""
    if r < 1:
        raise RootDatumError("GSp_{2r} needs r >= 1")
    d = r + 1
    roots = [_diff(d, i, i + 1) for i in range(1, r)]
    coroots = [_diff(d, i, i + 1) for i in range(1, r)]
    last = [0] * d
    last[r], last[0] = 2, -1
    roots.append(last)
    coroots.append(_unit(d, r))
    return from_simple(d, roots, coroots, family="GSp")


NAMED_FORMS = {
    "SL": ("A", "sc"), "PGL": ("A", "ad"),
    "Sp": ("C", "sc"), "PGSp": ("C", "ad"),
}


def build_root_datum(family: str, rank: int, form: str = "simply_connected") -> RootDatum:
    """Construct a root datum.

    `family` is a Cartan letter A..G or one of GL, GSp.  `form` is
    simply_connected, adjoint, or a named form (SL, PGL, Sp, PGSp, Spin,
    SO).  For GL the rank is r in GL_r; for GSp it is r in GSp_{2r};
    otherwise it is the semisimple rank.
    """
    fam = family.strip()
    if fam.upper() == "GL":
        return general_linear(rank)
    if fam.upper() == "GSP":
        return general_symplectic(rank)
    letter = fam.upper()
    if letter not in "ABCDEFG" or len(letter) != 1:
        raise RootDatumError(f"unknown family {family!r}")
    f = form.strip()
    if f in ("simply_connected", "sc", "SC"):
        return _simply_connected(letter, rank)
    if f in ("adjoint", "ad"):
        return _adjoint(letter, rank)
    if f in NAMED_FORMS:
        want, kind = NAMED_FORMS[f]
        if want != letter:
            raise RootDatumError(f"form {f} does not belong to family {letter}")
        return _simply_connected(letter, rank) if kind == "sc" else _adjoint(letter, rank)
    if f == "Spin":
        if letter not in "BD":
            raise RootDatumError("Spin form needs family B or D")
        return _simply_connected(letter, rank)
    if f == "SO":
        if letter not in "BD":
            raise RootDatumError("SO form needs family B or D")
        cartan_of_type(letter, rank)
        return _special_orthogonal(rank, odd=(letter == "B"))
    raise RootDatumError(f"unknown form {form!r}")


# ------------------------------------------------------------------ validation

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def validate(rd: RootDatum) -> ValidationReport:
    r = rd.rank
    if len(rd.roots) != len(rd.coroots):
        return ValidationReport(False, "roots and coroots differ in number", (len(rd.roots), len(rd.coroots)))
    for v in rd.roots + rd.coroots:
        if len(v) != r:
            return ValidationReport(False, "vector of wrong length", v)
    if len(set(rd.roots)) != len(rd.roots) or len(set(rd.coroots)) != len(rd.coroots):
        return ValidationReport(False, "repeated root or coroot", None)
    if len(set(rd.simple)) != len(rd.simple) or any(not 0 <= i < len(rd.roots) for i in rd.simple):
        return ValidationReport(False, "bad simple indices", rd.simple)
    for a, c in zip(rd.roots, rd.coroots):
        if dot(a, c) != 2:
            return ValidationReport(False, "pairing != 2", (a, c))
    pairs = set(zip(rd.roots, rd.coroots))
    for i in rd.simple:
        for a, c in zip(rd.roots, rd.coroots):
            image = (rd.reflect_x(i, a), rd.reflect_y(i, c))
            if image not in pairs:
                return ValidationReport(False, "reflection does not preserve the roots (closure)",
                                        {"simple": i, "root": a, "coroot": c, "image": image})
    A = rd.cartan_matrix()
    for i, row in enumerate(A):
        for j, x in enumerate(row):
            if (i == j and x != 2) or (i != j and x > 0):
                return ValidationReport(False, "Cartan matrix not well formed", (i, j, x))
    if rd.simple:
        if _solve_rational(rd.simple_roots, [0] * r) is None or len(rd.simple) > r:
            return ValidationReport(False, "simple roots not independent", None)
        for a in rd.roots:
            sol = _solve_rational(rd.simple_roots, a)
            if sol is None or any(s.denominator != 1 for s in sol) or not (
                    all(s >= 0 for s in sol) or all(s <= 0 for s in sol)):
                return ValidationReport(False, "root is not a signed integral combination of simple roots", a)
    if rd.galois is not None:
        g = rd.galois
        if len(g) != r or not is_unimodular(g):
            return ValidationReport(False, "galois action is not unimodular", g)
        try:
            automorphism_order(g)
        except LatticeError:
            return ValidationReport(False, "galois action has order above cap", g)
        gx = rd.galois_on_x()
        image = {(mat_vec(gx, a), mat_vec(g, c)) for a, c in zip(rd.roots, rd.coroots)}
        if image != pairs:
            return ValidationReport(False, "galois action does not permute the roots", None)
        simple_pairs = {(rd.roots[i], rd.coroots[i]) for i in rd.simple}
        if {(mat_vec(gx, a), mat_vec(g, c)) for a, c in simple_pairs} != simple_pairs:
            return ValidationReport(False, "galois action does not permute the simple roots", None)
    return ValidationReport(True)


def ensure_valid(rd: RootDatum) -> RootDatum:
    rep = validate(rd)
    if not rep.ok:
        raise RootDatumError(f"invalid root datum: {rep.violation} ({rep.witness})")
    return rd


# ------------------------------------------------------------------ Weyl group

def weyl_group(rd: RootDatum, cap: int = WEYL_CAP) -> list[IntMatrix]:
    """All Weyl group elements as matrices acting on Y (identity first)."""
    gens = [rd.reflection_matrix_y(i) for i in rd.simple]
    start = identity(rd.rank)
    seen = {start}
    out = [start]
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for s in gens:
            ws = mat_mul(w, s)
            if ws not in seen:
                if len(seen) >= cap:
                    raise RootDatumError(f"Weyl group exceeds cap {cap}")
                seen.add(ws)
                out.append(ws)
                queue.append(ws)
    return out


def weyl_order_formula(letter: str, ell: int) -> int:
    letter = letter.upper()
    if letter == "A":
        return factorial(ell + 1)
    if letter in "BC":
        return 2**ell * factorial(ell)
    if letter == "D":
        return 2 ** (ell - 1) * factorial(ell)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(letter, ell)]


def dual_root_datum(rd: RootDatum) -> RootDatum:
    galois = rd.galois_on_x()
    return RootDatum(rd.rank, rd.coroots, rd.roots, rd.simple, galois, None)


# ------------------------------------------------------- Dynkin classification

@dataclass(frozen=True)
class Component:
    letter: str
    rank: int
    order: tuple[int, ...]  # positions into rd.simple, Bourbaki numbering

    @property
    def name(self) -> str:
        return f"{self.letter}_{self.rank}"


def _path_from(start: int, adj: dict[int, set[int]]) -> list[int]:
    path, prev = [start], None
    while True:
        nxt = [v for v in adj[path[-1]] if v != prev]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def classify_cartan(A: Sequence[Sequence[int]], style: str | None = None) -> list[Component]:
    """Split a Cartan matrix into irreducible components with Bourbaki numbering.

    `style` picks the name for low-rank coincidences (A1=B1=C1, B2=C2, A3=D3).
    """
    n = len(A)
    adj = {i: {j for j in range(n) if j != i and A[i][j]} for i in range(n)}
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(_classify_component(sorted(comp), A, adj, style))
    return comps


def _classify_component(nodes, A, adj, style) -> Component:
    style = (style or "").upper()[:1]
    k = len(nodes)
    if k == 1:
        letter = style if style in ("B", "C") else "A"
        return Component(letter, 1, tuple(nodes))
    bonds = {(i, j): A[i][j] * A[j][i] for i in nodes for j in adj[i]}
    degrees = {i: len(adj[i]) for i in nodes}
    if max(bonds.values()) == 3:
        short = next(j for (i, j) in bonds if A[i][j] == -3)
        long_ = next(i for i in nodes if i != short)
        return Component("G", 2, (short, long_))
    if max(bonds.values()) == 2:
        (p, q) = next((i, j) for (i, j) in bonds if A[i][j] == -2)  # p long, q short
        ends = [i for i in nodes if degrees[i] == 1]
        if k == 4 and p not in ends and q not in ends:
            start = next(e for e in ends if _path_from(e, adj).index(p) < _path_from(e, adj).index(q))
            return Component("F", 4, tuple(_path_from(start, adj)))
        if k == 2:
            letter = "B" if style == "B" else "C"
            return Component(letter, 2, (p, q) if letter == "B" else (q, p))
        end = p if p in ends else q
        start = next(e for e in ends if e != end)
        path = _path_from(start, adj)
        return Component("B" if end == q else "C", k, tuple(path))
    branch = [i for i in nodes if degrees[i] == 3]
    if not branch:
        ends = sorted(i for i in nodes if degrees[i] == 1)
        path = tuple(_path_from(ends[0], adj))
        if k == 3 and style == "D":
            return Component("D", 3, (path[1], path[0], path[2]))
        return Component("A", k, path)
    b = branch[0]
    arms = []
    for w in sorted(adj[b]):
        arm, prev = [w], b
        while True:
            nxt = [v for v in adj[arm[-1]] if v != prev]
            if not nxt:
                break
            prev = arm[-1]
            arm.append(nxt[0])
        arms.append(arm)
    arms.sort(key=lambda a: (len(a), a[0]))
    lens = tuple(len(a) for a in arms)
    if lens[:2] == (1, 1):
        if lens[2] == 1:
            return Component("D", 4, (arms[0][0], b, arms[1][0], arms[2][0]))
        long_arm = list(reversed(arms[2]))
        return Component("D", k, tuple(long_arm + [b, arms[0][0], arms[1][0]]))
    if lens[0] == 1 and lens[1] == 2 and lens[2] in (2, 3, 4):
        a2 = arms[0][0]
        a3, a1 = arms[1]
        rest = arms[2]
        order = [a1, a2, a3, b] + rest
        return Component("E", k, tuple(order))
    raise RootDatumError("unrecognized Dynkin diagram")


# ------------------------------------------------------------- isogeny naming

@dataclass(frozen=True)
class IsogenyName:
    label: str
    center: FiniteAbelianGroup

    def __str__(self) -> str:
        return self.label


def center_of(rd: RootDatum) -> FiniteAbelianGroup:
    """Character group of the center: X modulo the root lattice."""
    return quotient_structure(rd.rank, Sublattice.span(rd.rank, rd.roots))


def _restrict_datum(rd: RootDatum, cochar_basis: Sequence[Sequence[int]], root_ids: Iterable[int]) -> RootDatum:
    """Datum of the subgroup whose cocharacter lattice has the given (saturated) basis."""
    B = [tuple(b) for b in cochar_basis]
    ids = list(root_ids)
    roots = tuple(tuple(dot(rd.roots[i], b) for b in B) for i in ids)
    coroots = []
    for i in ids:
        c = _solve_rational(B, rd.coroots[i])
        if c is None or any(x.denominator != 1 for x in c):
            raise RootDatumError("coroot outside the sublattice")
        coroots.append(tuple(int(x) for x in c))
    simple_set = [ids.index(i) for i in rd.simple if i in ids]
    return RootDatum(len(B), roots, tuple(coroots), tuple(simple_set), None, rd.family)


def _saturated_coroot_span(rd: RootDatum, ids: Sequence[int]) -> Sublattice:
    """Y intersected with the rational span of the given coroots."""
    if not ids:
        return Sublattice.span(rd.rank, [])
    annihilator = integer_kernel([rd.coroots[i] for i in ids], rd.rank)
    if annihilator.rank == 0:
        return Sublattice.full(rd.rank)
    return integer_kernel(list(annihilator.basis), rd.rank)


def _fundamental_weight(rd: RootDatum, comp: Component, which: int) -> tuple[Fraction, ...]:
    simple = [rd.simple_roots[p] for p in comp.order]
    coro = [rd.simple_coroots[p] for p in comp.order]
    A = [[dot(a, c) for c in coro] for a in simple]
    inv = rational_inverse(A)
    return tuple(sum(inv[which][k] * simple[k][t] for k in range(len(simple))) for t in range(rd.rank))


def _name_simple(letter: str, ell: int, center: FiniteAbelianGroup, rd: RootDatum, comp: Component) -> str:
    c = center.order
    if letter == "A":
        m = ell + 1
        if c == m:
            return f"SL_{m}"
        if c == 1:
            return f"PGL_{m}"
        return f"SL_{m}/mu_{m // c}"
    if letter == "B":
        return f"Spin_{2 * ell + 1}" if c == 2 else f"SO_{2 * ell + 1}"
    if letter == "C":
        return f"Sp_{2 * ell}" if c == 2 else f"PGSp_{2 * ell}"
    if letter == "D":
        m = 2 * ell
        if c == 4:
            return f"Spin_{m}"
        if c == 1:
            return f"PGO_{m}"
        if ell % 2:
            return f"SO_{m}"
        vector = _fundamental_weight(rd, comp, 0)
        if all(x.denominator == 1 for x in vector):
            return f"SO_{m}"
        return "Spin_8-quotient (unnamed)" if ell == 4 else f"HSpin_{m}"
    if letter == "E":
        full = {6: 3, 7: 2, 8: 1}[ell]
        return f"E_{ell}" if c == full else f"E_{ell}/mu_{full}"
    return f"{letter}_{ell}"


def _name_semisimple(rd: RootDatum, style: str | None) -> str:
    comps = classify_cartan(rd.cartan_matrix(), style)
    if not comps:
        return "1"
    if len(comps) == 1:
        comp = comps[0]
        return _name_simple(comp.letter, comp.rank, center_of(rd), rd, comp)
    # product decomposition: Y splits along the components
    pieces, total = [], []
    for comp in comps:
        simple_ids = [rd.simple[p] for p in comp.order]
        ids = [i for i in range(len(rd.roots)) if _supported_on(rd, i, set(comp.order))]
        sat = _saturated_coroot_span(rd, simple_ids)
        pieces.append((comp, sat, ids))
        total.extend(sat.basis)
    joint = Sublattice.span(rd.rank, total)
    types = " x ".join(c.name for c in comps)
    if joint != Sublattice.full(rd.rank):
        return f"unnamed isogeny of {types}"
    names = []
    for comp, sat, ids in pieces:
        sub = _restrict_datum(rd, sat.basis, ids)
        names.append(_name_semisimple(sub, style))
    return " x ".join(names)


def _supported_on(rd: RootDatum, i: int, positions: set[int]) -> bool:
    coords = rd.simple_coordinates(i)
    return all(x == 0 for p, x in enumerate(coords) if p not in positions)


def derived_datum(rd: RootDatum) -> RootDatum:
    """Root datum of the derived subgroup (cocharacters: Y meet the rational span of the coroots)."""
    der = _saturated_coroot_span(rd, list(rd.simple))
    return _restrict_datum(rd, der.basis, range(len(rd.roots)))


def identify_isogeny(rd: RootDatum, style: str | None = None) -> IsogenyName:
    """Name the group of a root datum (X = characters) and report its center X / Z.Phi."""
    style = style if style is not None else rd.family
    center = center_of(rd)
    r = rd.rank
    ell = rd.semisimple_rank
    free = r - ell
    if ell == 0:
        label = "1" if r == 0 else ("GL_1" if r == 1 else f"GL_1^{r}")
        return IsogenyName(label, center)
    if free == 0:
        return IsogenyName(_name_semisimple(rd, style), center)

    der = _saturated_coroot_span(rd, list(rd.simple))
    derived = derived_datum(rd)
    der_name = _name_semisimple(derived, style)
    central = integer_kernel(list(rd.simple_roots), r)
    index = quotient_structure(r, Sublattice.span(r, list(der.basis) + list(central.basis))).order
    torus = "GL_1" if free == 1 else f"GL_1^{free}"
    if index == 1:
        return IsogenyName(f"{der_name} x {torus}", center)
    comps = classify_cartan(derived.cartan_matrix(), style)
    if free == 1 and len(comps) == 1:
        comp = comps[0]
        der_center = center_of(derived).order
        if comp.letter == "A" and der_center == ell + 1 == index and _gl_graph(rd, comp, der, central):
            return IsogenyName(f"GL_{ell + 1}", center)
        if comp.letter == "C" and der_center == 2 == index:
            return IsogenyName(f"GSp_{2 * ell}", center)
    types = " x ".join(c.name for c in comps)
    return IsogenyName(f"unnamed isogeny of {types} x {torus}", center)


def _gl_graph(rd: RootDatum, comp: Component, der: Sublattice, central: Sublattice) -> bool:
    """Whether Y glues the derived SL_m and the central G_m as in GL_m (up to sign)."""
    m = comp.rank + 1
    z = central.basis[0]
    annihilator = integer_kernel(list(rd.coroots), rd.rank)
    probe = next(x for x in annihilator.basis if dot(x, z))
    signs = {1, -1}
    for v in identity(rd.rank):
        pairings = [dot(rd.simple_roots[p], v) for p in comp.order]
        j = sum((k + 1) * x for k, x in enumerate(pairings)) % m
        t = Fraction(dot(probe, v), dot(probe, z))
        if (m * t).denominator != 1:
            return False
        mt = int(m * t) % m
        signs = {e for e in signs if (e * j - mt) % m == 0}
    return bool(signs)


def label_with_star(name: IsogenyName, tau_trivial: bool) -> str:
    return name.label if tau_trivial else "*" + name.label
