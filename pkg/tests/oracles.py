"""Slow, independent reference computations used as test oracles.

Nothing here calls into the package's arithmetic: groups are handled as
plain coordinate tuples and linear algebra goes through ``Fraction``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction


# -- groups -------------------------------------------------------------------


def element_list(moduli):
    return list(itertools.product(*[range(m) for m in moduli]))


def add(moduli, a, b):
    return tuple((x + y) % m for x, y, m in zip(a, b, moduli))


def closure(moduli, seeds):
    zero = tuple(0 for _ in moduli)
    out = {zero}
    frontier = [zero]
    seeds = [tuple(s) for s in seeds]
    while frontier:
        nxt = []
        for a in frontier:
            for s in seeds:
                b = add(moduli, a, s)
                if b not in out:
                    out.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(out)


def brute_subgroups(moduli, max_gens=None):
    """Every subgroup, as the closure of every element subset of size <= ``max_gens``."""
    els = element_list(moduli)
    k = len(els) if max_gens is None else max_gens
    found = set()
    for r in range(k + 1):
        for subset in itertools.combinations(els, r):
            found.add(closure(moduli, subset))
    return found


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def elementary_subgroup_count(p, n):
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def pairing_value(moduli, chi, a):
    """``chi(a)`` as a complex number, straight from the definition."""
    return cmath.exp(2j * math.pi * sum(c * x / m for c, x, m in zip(chi, a, moduli)))


# -- linear algebra -------------------------------------------------------------


def frac_rank(rows):
    M = [[Fraction(x) for x in r] for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / M[rank][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def frac_det(rows):
    M = [[Fraction(x) for x in r] for r in rows]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    assert det.denominator == 1
    return int(det)


def determinantal_invariants(rows):
    """Invariant factors from gcds of ``k x k`` minors (``d_k / d_(k-1)``)."""
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = math.gcd(g, frac_det([[rows[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def gram_det(rows):
    return frac_det([[sum(a * b for a, b in zip(u, v)) for v in rows] for u in rows])


def quotient_order_by_enumeration(gens, n, limit=200_000):
    """``|Z^n / span(gens)|`` by walking cosets of ``N Z^n`` inside ``(Z/N)^n``.

    ``N`` is the absolute determinant of some nonsingular ``n x n`` choice of
    generators, so ``N Z^n`` lies in the lattice.  Returns ``None`` when the
    lattice has lower rank or the walk would exceed ``limit`` states.
    """
    N = 0
    for rs in itertools.combinations(range(len(gens)), n):
        d = abs(frac_det([gens[i] for i in rs]))
        if d and (N == 0 or d < N):
            N = d
    if N == 0 or N**n > limit:
        return None
    moduli = [N] * n
    sub = closure(moduli, [tuple(x % N for x in g) for g in gens])
    return N**n // len(sub)


def triangular_basis(gens, n):
    """Upper-triangular basis of a full-rank lattice in ``Z^n`` by column-wise Euclid.

    Returns ``None`` when the lattice has rank below ``n``.
    """
    rows = [list(map(int, g)) for g in gens if any(g)]
    basis = []
    for c in range(n):
        live = [r for r in rows if r[c]]
        rest = [r for r in rows if not r[c]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            head = live[0]
            nxt = [head]
            for r in live[1:]:
                q = r[c] // head[c]
                r = [x - q * y for x, y in zip(r, head)]
                (nxt if r[c] else rest).append(r)
            live = nxt
        if not live:
            return None
        piv = live[0] if live[0][c] > 0 else [-x for x in live[0]]
        basis.append(piv)
        rows = [r for r in rest if any(r)]
    return basis


def quotient_order_by_walk(gens, n, limit=20_000):
    """``|Z^n / span(gens)|`` by breadth-first search over cosets.

    Cosets are named by their reduced representative modulo a triangular
    basis; the walk starts at ``0`` and steps along unit vectors.  Returns
    ``None`` for infinite quotients or when more than ``limit`` cosets are met.
    """
    B = triangular_basis(gens, n)
    if B is None:
        return None

    def reduce(v):
        v = list(v)
        for i, b in enumerate(B):
            q = v[i] // b[i]
            if q:
                v = [x - q * y for x, y in zip(v, b)]
        return tuple(v)

    zero = (0,) * n
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for j in range(n):
                w = reduce(v[:j] + (v[j] + 1,) + v[j + 1:])
                if w not in seen:
                    seen.add(w)
                    if len(seen) > limit:
                        return None
                    nxt.append(w)
        frontier = nxt
    return len(seen)


def maximal_minor_gcd(rows, n):
    """gcd of the ``n x n`` minors: the order of ``Z^n / span(rows)`` when finite."""
    g = 0
    for rs in itertools.combinations(range(len(rows)), n):
        g = math.gcd(g, frac_det([rows[i] for i in rs]))
    return g
