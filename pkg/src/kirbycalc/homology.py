"""First homology of surgered 3-manifolds, via Smith normal form.

All arithmetic is over Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import DiagramValidationError, LinkDiagram, linking_matrix


@dataclass(frozen=True)
class PresentationMatrix:
    matrix: tuple
    components: tuple
    dotted_as_zero: tuple = ()

    @property
    def size(self) -> int:
        return len(self.matrix)

    def rows(self) -> list:
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x < 2 for x in t):
            raise ValueError("torsion coefficients must be at least 2")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self):
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SNFCertificate:
    U: tuple
    V: tuple
    D: tuple

    def verify(self, M) -> bool:
        M = [list(r) for r in M]
        U, V, D = ([list(r) for r in X] for X in (self.U, self.V, self.D))
        if abs(determinant(U)) != 1 or abs(determinant(V)) != 1:
            return False
        if mat_mul(mat_mul(U, M), V) != D:
            return False
        diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
        for i, row in enumerate(D):
            for j, x in enumerate(row):
                if i != j and x:
                    return False
        nz = [x for x in diag if x]
        if any(x < 0 for x in diag):
            return False
        if any(b % a for a, b in zip(nz, nz[1:])):
            return False
        return diag[: len(nz)] == nz


@dataclass(frozen=True)
class Verdict:
    status: str
    checks: tuple = ()
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return self.status in ("pass", "homology-consistent")

    def lines(self) -> list:
        out = [f"verdict={self.status}"]
        out += [f"{k}={v}" for k, v in self.checks]
        out += [f"note={n}" for n in self.notes]
        return out


# --------------------------------------------------------------------------
# Integer matrix helpers
# --------------------------------------------------------------------------


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B) -> list:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def determinant(A) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(M) -> tuple:
    """Return ``(AbelianInvariants of coker M, SNFCertificate)`` with ``U M V = D``."""
    if isinstance(M, PresentationMatrix):
        M = M.rows()
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        if c:
            A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        if c:
            for r in A:
                r[dst] += c * r[src]
            for r in V:
                r[dst] += c * r[src]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility of the remaining block by the pivot
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    diag = [A[i][i] for i in range(min(m, n))]
    torsion = tuple(d for d in diag if d > 1)
    zeros = sum(1 for d in diag if d == 0) + (n - min(m, n))
    cert = SNFCertificate(tuple(map(tuple, U)), tuple(map(tuple, V)), tuple(map(tuple, A)))
    return AbelianInvariants(zeros, torsion), cert


# --------------------------------------------------------------------------
# Surgery
# --------------------------------------------------------------------------


def presentation_matrix(d: LinkDiagram, components=None) -> PresentationMatrix:
    """Relation matrix for surgery on the chosen components (default: all).

    Rows are ``p_i * mu_i + q_i * sum_j lk(i, j) * mu_j`` for slope ``p_i/q_i``;
    a dotted circle is read as a 0-framed unknot.
    """
    comps = tuple(range(d.num_components)) if components is None else tuple(components)
    if len(set(comps)) != len(comps):
        raise ValueError("components listed twice")
    lk = linking_matrix(d)
    rows = []
    dotted = []
    for i in comps:
        c = d.components[i]
        if c.dotted:
            p, q = 0, 1
            dotted.append(i)
        elif c.framing.is_none:
            raise DiagramValidationError(f"component {i} has no framing")
        elif c.framing.is_infinite:
            p, q = 1, 0
        else:
            p, q = c.framing.p, c.framing.q
        rows.append(tuple(p if j == i else q * lk[i][j] for j in comps))
    return PresentationMatrix(tuple(rows), comps, tuple(dotted))


def h1_of_surgery(d: LinkDiagram, components=None) -> AbelianInvariants:
    pm = presentation_matrix(d, components)
    if pm.size == 0:
        return AbelianInvariants(0)
    inv, cert = smith_normal_form(pm)
    assert cert.verify(pm.matrix)
    return inv


def check_rbg_homology(d: LinkDiagram, r: int, b: int, g: int) -> Verdict:
    """Homological necessary conditions for ``(R, B, G)`` to be an RBG link."""
    if len({r, b, g}) != 3:
        raise ValueError("r, b, g must be distinct components")
    full = h1_of_surgery(d, (r, b, g))
    rg = h1_of_surgery(d, (r, g))
    rb = h1_of_surgery(d, (r, b))
    ok_full = full.free_rank == 1 and not full.torsion
    checks = (
        ("h1_full", str(full)),
        ("h1_full_is_Z", "pass" if ok_full else "fail"),
        ("h1_RG", str(rg)),
        ("h1_RG_trivial", "pass" if rg.is_trivial else "fail"),
        ("h1_RB", str(rb)),
        ("h1_RB_trivial", "pass" if rb.is_trivial else "fail"),
    )
    ok = ok_full and rg.is_trivial and rb.is_trivial
    notes = ("homological certificate only; homeomorphisms to S^3 need a replayed move script",)
    return Verdict("homology-consistent" if ok else "fail", checks, notes)


def check_rlink_homology(d: LinkDiagram) -> Verdict:
    """Pass iff every framing is 0 and every pairwise linking number is 0."""
    n = d.num_components
    lk = linking_matrix(d)
    zero_framing = all(
        c.framing.is_integer and c.framing.p == 0 for c in d.components if not c.dotted
    )
    zero_lk = all(lk[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    checks = [("components", str(n)), ("framings_zero", "pass" if zero_framing else "fail")]
    checks.append(("linking_zero", "pass" if zero_lk else "fail"))
    if zero_framing:
        checks.append(("h1", str(h1_of_surgery(d))))
    notes = ("dotted circles read as 0-framed unknots",) if any(c.dotted for c in d.components) else ()
    return Verdict("pass" if zero_framing and zero_lk else "fail", tuple(checks), notes)
