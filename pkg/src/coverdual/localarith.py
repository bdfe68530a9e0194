"""Hilbert symbols over Q_p and R, tame n-th symbols, and the metaGalois cocycle."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from sympy import factorint, isprime
from sympy.ntheory import discrete_log, primitive_root

DEFAULT_PRECISION = 6


class LocalArithmeticError(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    """The real place (p is None) or the p-adic place."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not (self.p >= 2 and isprime(self.p)):
            raise LocalArithmeticError(f"{self.p} is not a prime")

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "R" if self.p is None else f"Q_{self.p}"

    @classmethod
    def parse(cls, text: str | int) -> "Place":
        t = str(text).strip().lower()
        if t in ("r", "real", "inf", "infinity", "oo"):
            return cls(None)
        return cls(int(t))


REAL = Place(None)


def legendre_symbol(a: int, p: int) -> int:
    """Euler's criterion for odd p."""
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _valuation(k: int, p: int) -> int:
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


@dataclass(frozen=True)
class LocalElement:
    place: Place
    valuation: int
    unit: int  # residue mod p^precision, or the sign at the real place
    precision: int = DEFAULT_PRECISION
    exact: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.place.is_real:
            if self.unit not in (1, -1) or self.valuation:
                raise LocalArithmeticError("real elements carry a sign and valuation 0")
        else:
            p = self.place.p
            if self.precision < 3:
                raise LocalArithmeticError("precision must be at least 3")
            if self.unit % p == 0:
                raise LocalArithmeticError("unit part must be prime to p")

    @property
    def modulus(self) -> int:
        return self.place.p ** self.precision

    @classmethod
    def from_rational(cls, q, place: Place, precision: int = DEFAULT_PRECISION) -> "LocalElement":
        q = Fraction(q)
        if q == 0:
            raise LocalArithmeticError("zero has no symbol")
        if place.is_real:
            return cls(place, 0, 1 if q > 0 else -1, precision, q)
        p = place.p
        vn, vd = _valuation(q.numerator, p), _valuation(q.denominator, p)
        num = q.numerator // p**vn
        den = q.denominator // p**vd
        mod = p**precision
        return cls(place, vn - vd, num * pow(den, -1, mod) % mod, precision, q)

    @classmethod
    def from_parts(cls, place: Place, valuation: int, unit: int, precision: int = DEFAULT_PRECISION) -> "LocalElement":
        if place.is_real:
            return cls(place, 0, unit, precision)
        return cls(place, valuation, unit % place.p**precision, precision)

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        _same_place(self, other)
        k = min(self.precision, other.precision)
        exact = self.exact * other.exact if self.exact is not None and other.exact is not None else None
        if self.place.is_real:
            return LocalElement(self.place, 0, self.unit * other.unit, k, exact)
        mod = self.place.p**k
        return LocalElement(self.place, self.valuation + other.valuation, self.unit * other.unit % mod, k, exact)

    def __pow__(self, e: int) -> "LocalElement":
        exact = self.exact**e if self.exact is not None else None
        if self.place.is_real:
            return LocalElement(self.place, 0, self.unit if e % 2 else 1, self.precision, exact)
        mod = self.modulus
        return LocalElement(self.place, self.valuation * e, pow(self.unit, e, mod), self.precision, exact)

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        if self.place.is_real:
            return "+" if self.unit > 0 else "-"
        return f"{self.place.p}^{self.valuation}*{self.unit}"


def _same_place(u: LocalElement, v: LocalElement) -> None:
    if u.place != v.place:
        raise LocalArithmeticError(f"mixed places {u.place} and {v.place}")


def hilbert2(u: LocalElement, v: LocalElement) -> int:
    """Quadratic Hilbert symbol (u, v) in {1, -1}."""
    _same_place(u, v)
    if u.place.is_real:
        return -1 if u.unit < 0 and v.unit < 0 else 1
    p = u.place.p
    a, b = u.valuation, v.valuation
    if p == 2:
        if min(u.precision, v.precision) < 3:
            raise LocalArithmeticError("dyadic symbol needs residues mod 8")
        x, y = u.unit % 8, v.unit % 8
        eps_x, eps_y = (x - 1) // 2 % 2, (y - 1) // 2 % 2
        om_x, om_y = (x * x - 1) // 8 % 2, (y * y - 1) // 8 % 2
        e = eps_x * eps_y + a * om_y + b * om_x
        return -1 if e % 2 else 1
    sign = -1 if (a * b * (p - 1) // 2) % 2 else 1
    ls_u = legendre_symbol(u.unit % p, p) if b % 2 else 1
    ls_v = legendre_symbol(v.unit % p, p) if a % 2 else 1
    return sign * ls_u * ls_v


@lru_cache(maxsize=None)
def _generator(p: int) -> int:
    return primitive_root(p)


@lru_cache(maxsize=4096)
def _dlog(p: int, w: int) -> int:
    return discrete_log(p, w, _generator(p))


def hilbert_n_tame(u: LocalElement, v: LocalElement, n: int) -> int:
    """Tame n-th symbol as an index mod n (the generator of mu_n is g^((p-1)/n), g the least primitive root)."""
    _same_place(u, v)
    if u.place.is_real:
        raise LocalArithmeticError("tame symbol needs a p-adic place")
    p = u.place.p
    if p == 2 or (p - 1) % n:
        raise LocalArithmeticError(f"n = {n} does not divide p - 1 = {p - 1}")
    a, b = u.valuation, v.valuation
    w = pow(u.unit % p, b, p) * pow(v.unit % p, -a, p) % p
    if (a * b) % 2:
        w = (-w) % p
    return _dlog(p, w) % n


def index_to_sign(index: int, n: int) -> int:
    """The element of mu_2 inside mu_n with the given index (index must be 0 or n/2)."""
    if index % n == 0:
        return 1
    if 2 * index % n == 0:
        return -1
    raise LocalArithmeticError("index does not lie in mu_2")


@dataclass(frozen=True)
class ReciprocityReport:
    values: dict[str, int]
    product: int


def relevant_places(*qs) -> list[Place]:
    primes = {2}
    for q in qs:
        q = Fraction(q)
        primes |= set(factorint(abs(q.numerator))) | set(factorint(q.denominator))
    primes.discard(1)
    return [REAL] + [Place(p) for p in sorted(primes)]


def reciprocity_check(u, v) -> ReciprocityReport:
    u, v = Fraction(u), Fraction(v)
    if u == 0 or v == 0:
        raise LocalArithmeticError("arguments must be nonzero")
    values = {}
    prod = 1
    for place in relevant_places(u, v):
        h = hilbert2(LocalElement.from_rational(u, place), LocalElement.from_rational(v, place))
        values[str(place)] = h
        prod *= h
    return ReciprocityReport(values, prod)


# ---------------------------------------------------------------- square classes

def least_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if legendre_symbol(a, p) == -1)


def square_class_reps(place: Place) -> list[LocalElement]:
    if place.is_real:
        vals = [1, -1]
    elif place.p == 2:
        vals = [1, -1, 2, -2, 5, -5, 10, -10]
    else:
        u0 = least_nonresidue(place.p)
        vals = [1, u0, place.p, u0 * place.p]
    return [LocalElement.from_rational(x, place) for x in vals]


def square_class_index(x: LocalElement) -> int:
    """Position of the canonical representative of the square class of x."""
    if x.place.is_real:
        return 0 if x.unit > 0 else 1
    p = x.place.p
    if p == 2:
        return _dyadic_index(x)
    odd = x.valuation % 2
    square = legendre_symbol(x.unit % p, p) == 1
    return (0 if square else 1) + 2 * odd


def _dyadic_index(x: LocalElement) -> int:
    base = {1: 0, 7: 1, 5: 4, 3: 5}[x.unit % 8]
    if x.valuation % 2 == 0:
        return base
    return {0: 2, 1: 3, 4: 6, 5: 7}[base]


def canonical_class(x: LocalElement) -> LocalElement:
    return square_class_reps(x.place)[square_class_index(x)]


def metagalois_cocycle(g1: LocalElement, g2: LocalElement, place: Place | None = None) -> int:
    """h(g1, g2) = Hilb_2 of the representatives; checked to depend only on the square classes."""
    if place is not None and (g1.place != place or g2.place != place):
        raise LocalArithmeticError("representative does not match the place")
    value = hilbert2(g1, g2)
    if value != hilbert2(canonical_class(g1), canonical_class(g2)):
        raise LocalArithmeticError("cocycle is not constant on square classes")
    return value


def cocycle_identity_failures(place: Place) -> list[tuple[int, int, int]]:
    """Triples of class indices where h(a,b)h(ab,c) != h(b,c)h(a,bc), or symmetry fails."""
    reps = square_class_reps(place)
    bad = []
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            if metagalois_cocycle(a, b) != metagalois_cocycle(b, a):
                bad.append((i, j, -1))
            for k, c in enumerate(reps):
                lhs = metagalois_cocycle(a, b) * metagalois_cocycle(canonical_class(a * b), c)
                rhs = metagalois_cocycle(b, c) * metagalois_cocycle(a, canonical_class(b * c))
                if lhs != rhs:
                    bad.append((i, j, k))
    return bad


@dataclass(frozen=True)
class ExtensionElement:
    """(square class, sign) in the extension of F^x/(F^x)^2 by mu_2 defined by h."""

    cls: LocalElement
    sign: int

    def __mul__(self, other: "ExtensionElement") -> "ExtensionElement":
        h = metagalois_cocycle(self.cls, other.cls)
        return ExtensionElement(canonical_class(self.cls * other.cls), self.sign * other.sign * h)

    def order(self, cap: int = 16) -> int:
        one = canonical_class(LocalElement.from_rational(1, self.cls.place))
        power = self
        for k in range(1, cap + 1):
            if power.cls == one and power.sign == 1:
                return k
            power = power * self
        raise LocalArithmeticError("order exceeds cap")


@dataclass(frozen=True)
class SplitCertificate:
    place: Place
    cochain: tuple[int, ...]  # c(Fr^a) for a = 0..len-1
    checked_pairs: int
    units_trivial: bool


@dataclass(frozen=True)
class NonSplitCertificate:
    place: Place
    reason: str
    witness: ExtensionElement | None = None
    witness_order: int | None = None
    parity_consistent: bool | None = None


def frobenius_cochain(q: int, a: int) -> int:
    return -1 if ((q - 1) // 2 * (a * (a - 1) // 2)) % 2 else 1


def metagalois_split_witness(place: Place, span: int = 12):
    if place.is_real:
        sigma = ExtensionElement(canonical_class(LocalElement.from_rational(-1, place)), 1)
        square = sigma * sigma
        if not (square.cls.unit == 1 and square.sign == -1):
            raise LocalArithmeticError("expected (sigma,1)^2 = (Id,-1)")
        return NonSplitCertificate(place, "element of order 4 in the extension of Gal(C/R)", sigma, sigma.order())
    p = place.p
    if p == 2:
        real = metagalois_split_witness(REAL)
        odd = [metagalois_split_witness(Place(q)) for q in (3, 5, 7, 11, 13)]
        # local classes multiply to the trivial class: R nontrivial, odd p trivial => 2 nontrivial
        consistent = isinstance(real, NonSplitCertificate) and all(isinstance(c, SplitCertificate) for c in odd)
        minus_one = ExtensionElement(canonical_class(LocalElement.from_rational(-1, place)), 1)
        return NonSplitCertificate(place, "nontrivial for fields of odd degree over Q_2 (cited); global parity",
                                   minus_one, minus_one.order(), consistent)
    cochain = tuple(frobenius_cochain(p, a) for a in range(span))
    pi = LocalElement.from_rational(p, place)
    checked = 0
    for a in range(span):
        for b in range(span):
            expected = -1 if (a * b * (p - 1) // 2) % 2 else 1
            if a + b < span:
                lhs = cochain[a] * cochain[b] * cochain[a + b]
            else:
                lhs = cochain[a] * cochain[b] * frobenius_cochain(p, a + b)
            if lhs != expected or hilbert2(pi**a, pi**b) != expected:
                raise LocalArithmeticError(f"cochain fails at ({a}, {b})")
            checked += 1
    units = [x for x in square_class_reps(place) if x.valuation == 0]
    units_trivial = all(metagalois_cocycle(x, y) == 1 for x in units for y in units)
    return SplitCertificate(place, cochain, checked, units_trivial)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise LocalArithmeticError(f"cannot parse rational {text!r}") from exc


def symbol_table(place: Place) -> list[list[int]]:
    reps = square_class_reps(place)
    return [[hilbert2(a, b) for b in reps] for a in reps]


def reps_as_text(reps: Sequence[LocalElement]) -> list[str]:
    return [str(r) for r in reps]
