"""Independent reference computations used by the tests.

Nothing here imports the package's algorithms; each oracle recomputes its
answer from definitions by brute force or a different route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy


def det_index(basis):
    """Index of a full-rank sublattice of Z^r spanned by the given rows."""
    return abs(int(sympy.Matrix(basis).det()))


def smith_invariants(M):
    """Invariant factors via sympy, dropping ones."""
    from sympy.matrices.normalforms import smith_normal_form

    D = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    diag = [abs(int(D[i, i])) for i in range(min(D.shape))]
    return sorted(d for d in diag if d not in (0, 1))


def yqn_box(C, n, radius):
    """Points y in a box with (C + C^T) y = 0 mod n, by direct evaluation."""
    r = len(C)
    out = set()
    for y in itertools.product(range(-radius, radius + 1), repeat=r):
        ok = True
        for i in range(r):
            s = sum((C[i][j] + C[j][i]) * y[j] for j in range(r))
            if s % n:
                ok = False
                break
        if ok:
            out.add(y)
    return out


# ----------------------------------------------------------------- symbols


def _solvable_mod(a, b, p, k):
    """a x^2 + b y^2 = z^2 has a primitive solution mod p^k."""
    mod = p**k
    squares = {}
    for x in range(mod):
        squares.setdefault(x * x % mod, []).append(x)
    for x in range(mod):
        ax = a * x * x % mod
        for y in range(mod):
            rhs = (ax + b * y * y) % mod
            for z in squares.get(rhs, ()):
                if x % p or y % p or z % p:
                    return True
    return False


def hilbert_bruteforce(a: int, b: int, p: int) -> int:
    """(a, b)_p from solvability of a x^2 + b y^2 = z^2; a, b squarefree-ish integers with small valuation."""
    k = 6 if p == 2 else 3
    return 1 if _solvable_mod(a, b, p, k) else -1


def tame_bruteforce(a_val, u, b_val, v, p, n):
    """Index k with ((-1)^{ab} u^b v^{-a})^{(p-1)/n} = zeta^k, zeta = g^{(p-1)/n}, g the least primitive root."""
    g = int(sympy.primitive_root(p))
    w = pow(u, b_val, p) * pow(v, -a_val, p) % p
    if (a_val * b_val) % 2:
        w = -w % p
    target = pow(w, (p - 1) // n, p)
    zeta = pow(g, (p - 1) // n, p)
    for k in range(n):
        if pow(zeta, k, p) == target:
            return k
    raise AssertionError("no root of unity matched")


# ----------------------------------------------------------------- torus


def twist_by_expansion(C, g):
    """Expand prod_i (y'_i, 0)^{g_ij} in the group Y x Z with (y1,a)(y2,b) = (y1+y2, a+b+y1^T C' y2).

    C' is C written in the basis y'_i (columns of g^{-1}); coordinates are taken in that basis.
    Returns the Z-parts mod 2 for each j.
    """
    r = len(g)
    G = sympy.Matrix(g)
    Ginv = G.inv()
    Cp = Ginv.T * sympy.Matrix(C) * Ginv

    def mul(p, q):
        (y1, a), (y2, b) = p, q
        cross = sum(int(Cp[i, j]) * y1[i] * y2[j] for i in range(r) for j in range(r))
        return tuple(x + y for x, y in zip(y1, y2)), a + b + cross

    def inverse(p):
        y, a = p
        e = ((0,) * r, 0)
        # (y, a)(-y, c) = (0, a + c - y^T C' y) = identity
        c = sum(int(Cp[i, j]) * y[i] * y[j] for i in range(r) for j in range(r)) - a
        out = (tuple(-x for x in y), c)
        assert mul(p, out) == e
        return out

    def power(p, k):
        acc = ((0,) * r, 0)
        base = p if k >= 0 else inverse(p)
        for _ in range(abs(k)):
            acc = mul(acc, base)
        return acc

    out = []
    for j in range(r):
        acc = ((0,) * r, 0)
        for i in range(r):
            unit = tuple(1 if k == i else 0 for k in range(r))
            acc = mul(acc, power((unit, 0), g[i][j]))
        # the product lands on y_j = sum_i g_ij y'_i, written in y' coordinates
        assert acc[0] == tuple(g[i][j] for i in range(r))
        out.append(acc[1] % 2)
    return tuple(out)


def center_by_multiplication(C, n, p):
    """Center of mu_n x (T / T^n) with the theta cocycle, by multiplying elements pairwise.

    T / T^n coordinates are pairs (a, b) meaning p^a g^b; symbols come from the tame formula.
    """
    g = int(sympy.primitive_root(p))
    r = len(C)

    def symbol(s, t):
        # bilinear extension of the tame symbol on generators p, g
        a1, b1 = s
        a2, b2 = t
        u = pow(g, b1, p)
        v = pow(g, b2, p)
        return tame_bruteforce(a1, u, a2, v, p, n)

    def theta(t1, t2):
        return sum(C[i][j] * symbol(t1[i], t2[j]) for i in range(r) for j in range(r)) % n

    pairs = list(itertools.product(range(n), repeat=2))
    points = list(itertools.product(pairs, repeat=r))

    def mul(x, y):
        (t1, z1), (t2, z2) = x, y
        t = tuple(((a + c) % n, (b + d) % n) for (a, b), (c, d) in zip(t1, t2))
        return t, (z1 + z2 + theta(t1, t2)) % n

    central = 0
    for t in points:
        x = (t, 0)
        if all(mul(x, (s, 0)) == mul((s, 0), x) for s in points):
            central += 1
    return central * n


# ----------------------------------------------------------------- real forms


def rank_one_parameters(kappa: Fraction, rho: Fraction, step: Fraction, R: Fraction):
    """Positive points of kappa + rho + step Z up to R (rank one, W = {1, -1})."""
    out = []
    x = (kappa + rho) % step
    while x <= R:
        if x > 0:
            out.append(x)
        x += step
    return out
