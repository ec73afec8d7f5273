"""Seifert-surface invariants used as slice obstructions.

The Seifert matrix comes from Seifert's algorithm on a braided diagram:
Vogel moves braid the input, the braid word is read off the nested
Seifert circles, and the pairing is written down on the standard
closed-braid surface (disks joined by half-twisted bands).  Every matrix
is checked to have ``det(V - V^T) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagram import DiagramValidationError, LinkDiagram, expand_twist_boxes
from .homology import Verdict, determinant, smith_normal_form
from .laurent import LaurentPolynomial
from .seifert import braid_word, seifert_circles, vogel_braid


@dataclass(frozen=True)
class SeifertMatrix:
    matrix: tuple
    basis: tuple = ()
    braid: tuple = ()
    vogel_moves: int = 0

    @classmethod
    def from_rows(cls, rows, **kw) -> "SeifertMatrix":
        return cls(tuple(tuple(int(x) for x in r) for r in rows), **kw)

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix):
            raise ValueError("Seifert matrix must be square")
        if n % 2:
            raise ValueError("Seifert matrix must have even size")

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def genus(self) -> int:
        return self.size // 2

    def rows(self) -> list:
        return [list(r) for r in self.matrix]

    def transpose(self) -> list:
        return [list(r) for r in zip(*self.matrix)] if self.matrix else []

    def intersection_determinant(self) -> int:
        V, W = self.rows(), self.transpose()
        return determinant([[a - b for a, b in zip(r, s)] for r, s in zip(V, W)])

    def pairing(self, a, b) -> int:
        return sum(a[i] * self.matrix[i][j] * b[j] for i in range(self.size) for j in range(self.size))


@dataclass(frozen=True)
class CurveSystem:
    vectors: tuple
    curve_data: object = None

    def __post_init__(self):
        vecs = tuple(tuple(int(x) for x in v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if vecs:
            if len({len(v) for v in vecs}) != 1:
                raise ValueError("class vectors have different lengths")
            inv, _ = smith_normal_form([list(v) for v in vecs])
            rank = len(vecs[0]) - inv.free_rank
            if rank != len(vecs):
                raise ValueError("class vectors are linearly dependent")


def diagram_genus(d: LinkDiagram) -> int:
    """``(c - s + 1) / 2`` for the Seifert-algorithm surface of ``d`` itself."""
    return (d.num_crossings - len(seifert_circles(d)) + 1) // 2


def braid_seifert_matrix(word, strands=None) -> tuple:
    """Seifert form of the closed-braid surface; returns ``(rows, basis)``.

    Basis loop ``(i, a, b)`` runs through consecutive ``sigma_i`` bands at
    word positions ``a < b``.
    """
    word = list(word)
    n = strands if strands is not None else (max((abs(x) for x in word), default=0) + 1)
    basis = []
    for i in range(1, n):
        pos = [k for k, x in enumerate(word) if abs(x) == i]
        basis += [(i, a, b) for a, b in zip(pos, pos[1:])]
    m = len(basis)
    eps = [1 if x > 0 else -1 for x in word]
    V = [[0] * m for _ in range(m)]
    for u, (i, a, b) in enumerate(basis):
        V[u][u] = -(eps[a] + eps[b]) // 2
        for v, (j, c, e) in enumerate(basis):
            if i == j and b == c:
                V[u][v] = (eps[b] + 1) // 2
                V[v][u] = (eps[b] - 1) // 2
            elif j == i + 1:
                if a < c < b < e:
                    V[u][v] = 1
                elif c < a < e < b:
                    V[u][v] = -1
    return V, tuple(basis)


def seifert_surface(d: LinkDiagram) -> tuple:
    """``(genus, SeifertMatrix)`` for the algorithmic surface of a knot diagram.

    Non-braided diagrams are first braided by Vogel moves; the surface is
    then Seifert's algorithm applied to the braided diagram.
    """
    if d.num_components != 1:
        raise DiagramValidationError("seifert_surface needs a knot diagram")
    d = expand_twist_boxes(d)
    b, steps = vogel_braid(d)
    n, word = braid_word(b)
    rows, basis = braid_seifert_matrix(word, n)
    V = SeifertMatrix.from_rows(rows, basis=basis, braid=(n, tuple(word)), vogel_moves=len(steps))
    if V.intersection_determinant() != 1:
        raise AssertionError("intersection form of the Seifert surface is not unimodular")
    return V.genus, V


def _as_rows(V) -> list:
    return V.rows() if isinstance(V, SeifertMatrix) else [list(r) for r in V]


def _poly_det(M) -> LaurentPolynomial:
    """Determinant over Z[t, t^-1] by cofactor-free elimination on polynomials."""
    n = len(M)
    if n == 0:
        return LaurentPolynomial.constant(1)
    # Bareiss with exact Laurent division
    A = [list(r) for r in M]
    sign = 1
    prev = LaurentPolynomial.constant(1)
    for k in range(n - 1):
        if A[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not A[i][k].is_zero()), None)
            if swap is None:
                return LaurentPolynomial()
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = _exact_div(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    out = A[n - 1][n - 1]
    return out if sign == 1 else -out


def _exact_div(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    if p.is_zero():
        return p
    num = list(p.coeffs)
    den = q.coeffs
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], den[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = c
        for j, dc in enumerate(den):
            num[i + j] -= c * dc
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return LaurentPolynomial(p.low - q.low, tuple(out))


def alexander_polynomial(V) -> LaurentPolynomial:
    """``det(V - t V^T)`` normalized to be symmetric with value 1 at ``t = 1``."""
    rows = _as_rows(V)
    n = len(rows)
    if n == 0:
        return LaurentPolynomial.constant(1)
    if SeifertMatrix.from_rows(rows).intersection_determinant() != 1:
        raise ValueError("det(V - V^T) must be 1 for a knot Seifert matrix")
    t = LaurentPolynomial.t()
    M = [
        [LaurentPolynomial.constant(rows[i][j]) - t * rows[j][i] for j in range(n)]
        for i in range(n)
    ]
    p = _poly_det(M).normalized()
    if p(1) != 1 or not p.is_symmetric():
        raise AssertionError(f"det(V - tV^T) = {p} is not a knot Alexander polynomial")
    return p


def signature(V, report: bool = False):
    """Signature of ``V + V^T`` by exact rational congruence diagonalization.

    With ``report`` the result is ``(signature, nullity)``.
    """
    rows = _as_rows(V)
    n = len(rows)
    S = [[Fraction(rows[i][j] + rows[j][i]) for j in range(n)] for i in range(n)]
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if S[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if S[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # row/column i += row/column j puts 2*S[i][j] on the diagonal
            for c in range(n):
                S[i][c] += S[j][c]
            for r in range(n):
                S[r][i] += S[r][j]
            piv = i
        if piv != k:
            S[k], S[piv] = S[piv], S[k]
            for r in S:
                r[k], r[piv] = r[piv], r[k]
        p = S[k][k]
        for i in range(k + 1, n):
            f = S[i][k] / p
            if f:
                for c in range(k, n):
                    S[i][c] -= f * S[k][c]
                for r in range(k, n):
                    S[r][i] -= f * S[r][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        k += 1
    sig = pos - neg
    nullity = n - pos - neg
    if nullity == 0 and sig % 2:
        raise AssertionError("signature of a nondegenerate Seifert form must be even")
    return (sig, nullity) if report else sig


# --------------------------------------------------------------------------
# Fox-Milnor
# --------------------------------------------------------------------------


def _to_sympy(p: LaurentPolynomial):
    import sympy

    t = sympy.Symbol("t")
    return sympy.Poly(sum(c * t ** (k - p.low) for k, c in p.terms().items()), t), t


def fox_milnor(delta: LaurentPolynomial):
    """A witness ``f`` with ``delta = f(t) f(t^-1)`` up to units, or ``None``.

    Irreducible factors are paired with their conjugates; a self-conjugate
    factor needs even multiplicity.
    """
    if delta.is_zero() or abs(delta(1)) != 1:
        raise ValueError(f"{delta} is not the Alexander polynomial of a knot")
    poly, t = _to_sympy(delta)
    _, factors = poly.factor_list()
    facs = []
    for fp, mult in factors:
        coeffs = [int(c) for c in reversed(fp.all_coeffs())]
        facs.append([LaurentPolynomial(0, tuple(coeffs)).normalized(), mult])
    f = LaurentPolynomial.constant(1)
    used = [False] * len(facs)
    for i, (p, m) in enumerate(facs):
        if used[i]:
            continue
        used[i] = True
        conj = p.conjugate().normalized()
        if conj == p:
            if m % 2:
                return None
            f = f * p ** (m // 2)
            continue
        j = next((j for j in range(len(facs)) if not used[j] and facs[j][0] == conj), None)
        if j is None or facs[j][1] != m:
            return None
        used[j] = True
        # report the member of the pair with the heavier top coefficient
        if abs(p.trailing) > abs(p.leading):
            p = conj
        f = f * p**m
    f = f.shift(-f.low)
    if f.leading < 0:
        f = -f
    if not (f * f.conjugate()).equal_up_to_unit(delta):
        raise AssertionError("Fox-Milnor witness does not reproduce the polynomial")
    return f


def fibered_necessary(delta: LaurentPolynomial, genus: int) -> bool:
    """Monic Alexander polynomial of span ``2 * genus``."""
    if delta.is_zero():
        return False
    return abs(delta.leading) == 1 and delta.span == 2 * genus


# --------------------------------------------------------------------------
# Derivative links
# --------------------------------------------------------------------------


def derivative_check(V, C: CurveSystem) -> Verdict:
    """Homological certificate that ``C`` could be a derivative link on the surface."""
    if not isinstance(V, SeifertMatrix):
        V = SeifertMatrix.from_rows(V)
    g = V.genus
    vecs = [list(v) for v in C.vectors]
    if len(vecs) != g:
        raise ValueError(f"need exactly {g} classes for a genus-{g} surface, got {len(vecs)}")
    if any(len(v) != V.size for v in vecs):
        raise ValueError(f"classes must have length {V.size}")
    bad = [(i, j, V.pairing(a, b)) for i, a in enumerate(vecs) for j, b in enumerate(vecs)]
    bad = [x for x in bad if x[2]]
    if g:
        inv, _ = smith_normal_form(vecs)
        summand = inv.free_rank == V.size - g and not inv.torsion
    else:
        summand = True
    checks = [
        ("seifert_form_vanishes", "pass" if not bad else "fail"),
        ("primitive_summand", "pass" if summand else "fail"),
    ]
    if bad:
        i, j, x = bad[0]
        checks.append(("first_nonzero", f"a{i}^T V a{j} = {x}"))
    notes = ("homological certificate only: embeddedness and disjointness of the curves are not verified",)
    return Verdict("pass" if not bad and summand else "fail", tuple(checks), notes)


def parse_int_matrix(text: str) -> list:
    """Whitespace-separated integer rows; ``#`` starts a comment."""
    rows = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            rows.append([int(x) for x in ln.replace(",", " ").split()])
    return rows
