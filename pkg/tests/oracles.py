"""Independent reference computations used to cross-check the package.

Each oracle here works from the raw crossing data with a different method
from the one in the library, so agreement is meaningful.
"""

from __future__ import annotations

import sympy

from kirbycalc.laurent import LaurentPolynomial

T = sympy.Symbol("t")


def to_laurent(expr) -> LaurentPolynomial:
    expr = sympy.expand(expr)
    if expr == 0:
        return LaurentPolynomial()
    num, den = sympy.fraction(sympy.together(expr))
    shift = 0
    if den != 1:
        dpoly = sympy.Poly(den, T)
        assert len(dpoly.terms()) == 1
        (k,), c = dpoly.terms()[0]
        assert abs(c) == 1
        shift = -k
        num = num * c
    poly = sympy.Poly(num, T)
    return LaurentPolynomial.from_dict({k + shift: int(c) for (k,), c in poly.terms()})


def wirtinger_arcs(d):
    """Union edges into over-arcs; returns ``edge -> arc index``."""
    parent = {e: e for e in d.edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in d.crossings:
        parent[find(x.slots[x.over_in])] = find(x.slots[x.over_out])
    roots = sorted({find(e) for e in d.edges})
    idx = {r: i for i, r in enumerate(roots)}
    return {e: idx[find(e)] for e in d.edges}, len(roots)


def fox_alexander(d) -> LaurentPolynomial:
    """Alexander polynomial of a knot diagram by Fox calculus on the Wirtinger presentation."""
    if d.num_crossings == 0:
        return LaurentPolynomial.constant(1)
    arc, n = wirtinger_arcs(d)
    rows = []
    for x in d.crossings:
        row = [0] * n
        y, xin, xout = arc[x.slots[x.over_in]], arc[x.slots[0]], arc[x.slots[2]]
        if x.sign == 1:
            row[y] += 1 - T
            row[xin] += T
            row[xout] -= 1
        else:
            row[y] += T - 1
            row[xin] += 1
            row[xout] -= T
        rows.append(row)
    from sympy.polys.matrices import DomainMatrix

    R = sympy.ZZ[T]
    M = DomainMatrix([[R.from_sympy(sympy.sympify(v)) for v in r[1:]] for r in rows[1:]], (n - 1, n - 1), R)
    return to_laurent(R.to_sympy(M.det())).normalized()


def sympy_group_order(gens, relators, limit: int = 2000):
    """Order of a finitely presented group by coset enumeration, or ``None`` if undecided."""
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    if not gens:
        return 1
    F, *syms = free_group(",".join(gens))
    table = dict(zip(gens, syms))

    def word(r):
        w = F.identity
        for g, e in r:
            w = w * table[g] ** e
        return w

    from sympy.combinatorics.coset_table import coset_enumeration_r

    G = FpGroup(F, [word(r) for r in relators])
    try:
        C = coset_enumeration_r(G, [], max_cosets=limit)
    except ValueError:
        return None
    C.compress()
    return len(C.table)


def fox_milnor_search(delta: LaurentPolynomial):
    """A witness ``f`` with ``delta = f(t) f(t^-1)`` found by exhaustive search, or ``None``.

    For such an ``f`` the central coefficient of ``delta`` is the sum of the
    squares of ``f``'s coefficients, which bounds the search.
    """
    import itertools
    import math

    p = delta.normalized()
    if p.span % 2:
        return None
    d = p.span // 2
    c0 = p.terms().get(0, 0)
    if c0 <= 0:
        return None
    b = math.isqrt(c0)
    rng = range(-b, b + 1)
    for f in itertools.product(rng, repeat=d + 1):
        if f[0] == 0 or f[-1] == 0 or sum(x * x for x in f) != c0 or sum(f) != 1:
            continue
        cand = LaurentPolynomial(0, f)
        if cand * cand.conjugate() == p:
            return cand
    return None


def float_signature(V) -> int:
    import numpy as np

    if not len(V):
        return 0
    A = np.array(V, dtype=float)
    ev = np.linalg.eigvalsh(A + A.T)
    return int((ev > 1e-9).sum() - (ev < -1e-9).sum())


def invariant_factors(M) -> tuple:
    """``(rank, nonunit invariant factors)`` from gcds of minors (determinantal divisors)."""
    import itertools
    import math

    A = sympy.Matrix(M)
    m, n = A.shape
    divisors = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, int(A.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        divisors.append(g)
    rank = len(divisors) - 1
    factors = [divisors[k] // divisors[k - 1] for k in range(1, rank + 1)]
    return rank, tuple(f for f in factors if f > 1)
