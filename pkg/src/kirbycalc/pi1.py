"""Group presentations of link complements and surgeries, Tietze simplification.

Words are tuples of nonzero integers: ``k`` is generator ``k - 1`` and
``-k`` its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import DiagramValidationError, LinkDiagram, expand_twist_boxes, writhe
from .homology import AbelianInvariants, smith_normal_form


def free_reduce(w) -> tuple:
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> tuple:
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def inverse(w) -> tuple:
    return tuple(-x for x in reversed(w))


def cyclic_key(w) -> tuple:
    """Canonical representative of ``w`` up to cyclic permutation and inversion."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    cands = []
    for v in (w, inverse(w)):
        cands += [v[i:] + v[:i] for i in range(len(v))]
    return min(cands)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple = ()
    provenance: tuple = ()

    def __post_init__(self):
        n = len(self.generators)
        rels = tuple(free_reduce(r) for r in self.relators)
        for r in rels:
            if any(x == 0 or abs(x) > n for x in r):
                raise ValueError(f"relator {r} refers to a missing generator")
        object.__setattr__(self, "relators", rels)
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def word_str(self, w) -> str:
        if not w:
            return "1"
        return "*".join(self.generators[abs(x) - 1] + ("" if x > 0 else "^-1") for x in w)

    def __str__(self) -> str:
        rels = ", ".join(self.word_str(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"

    def abelianization(self) -> AbelianInvariants:
        n = self.rank
        if not self.relators:
            return AbelianInvariants(n)
        rows = []
        for r in self.relators:
            row = [0] * n
            for x in r:
                row[abs(x) - 1] += 1 if x > 0 else -1
            rows.append(row)
        inv, _ = smith_normal_form(rows)
        return inv

    def is_free_presentation(self) -> bool:
        return not self.relators


def parse_presentation(text: str) -> GroupPresentation:
    """Inverse of ``str``: ``< a, b | a*b*a^-1*b^-1 >``."""
    body = text.strip()
    if not (body.startswith("<") and body.endswith(">")) or "|" not in body:
        raise ValueError(f"bad presentation {text!r}")
    gens_s, rels_s = body[1:-1].split("|", 1)
    gens = tuple(g.strip() for g in gens_s.split(",") if g.strip())
    index = {g: i + 1 for i, g in enumerate(gens)}
    rels = []
    for r in rels_s.split(","):
        r = r.strip()
        if not r:
            continue
        w = []
        if r != "1":
            for tok in r.split("*"):
                name, _, exp = tok.partition("^")
                k = index[name.strip()]
                e = int(exp) if exp else 1
                w += [k if e > 0 else -k] * abs(e)
        rels.append(tuple(w))
    return GroupPresentation(gens, tuple(rels))


# --------------------------------------------------------------------------
# Presentations from diagrams
# --------------------------------------------------------------------------


def _arcs(d: LinkDiagram) -> tuple:
    parent = {e: e for e in d.edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for x in d.crossings:
        parent[find(x.slots[x.over_in])] = find(x.slots[x.over_out])
    # number arcs in order of their smallest edge
    roots = sorted({find(e) for e in d.edges}, key=lambda r: min(e for e in d.edges if find(e) == r))
    idx = {r: i for i, r in enumerate(roots)}
    return {e: idx[find(e)] for e in d.edges}, len(roots)


def wirtinger(d: LinkDiagram) -> GroupPresentation:
    """One generator per over-arc (free loops included), one relator per crossing."""
    d = expand_twist_boxes(d)
    arc, n = _arcs(d)
    gens = [f"x{i}" for i in range(n)]
    prov = [("arc", min(e for e in arc if arc[e] == i)) for i in range(n)]
    loop_gen = {}
    for lp in d.loops:
        loop_gen[lp] = len(gens)
        gens.append(f"x{len(gens)}")
        prov.append(("loop", lp))
    rels = []
    for ci, x in enumerate(d.crossings):
        y = arc[x.slots[x.over_in]] + 1
        a, b = arc[x.slots[0]] + 1, arc[x.slots[2]] + 1
        # x_out = y^-e x_in y^e
        e = x.sign
        rels.append((-e * y, a, e * y, -b))
        prov.append(("crossing", ci))
    # provenance holds generators first, then relators
    return GroupPresentation(tuple(gens), tuple(rels), tuple(prov))


def longitude_words(d: LinkDiagram) -> list:
    """Blackboard longitude of each component as a word, based at its first edge's arc."""
    d = expand_twist_boxes(d)
    arc, n = _arcs(d)
    loop_base = n
    out = []
    for k, comp in enumerate(d.components):
        if comp.edges and comp.edges[0] in d.loops:
            out.append(((), loop_base + d.loops.index(comp.edges[0]) + 1))
            continue
        w = []
        for e in comp.edges:
            ci, s = d.ends[e][1]
            x = d.crossings[ci]
            if s == 0:
                w.append(x.sign * (arc[x.slots[x.over_in]] + 1))
        out.append((tuple(w), arc[comp.edges[0]] + 1))
    return out


def surgered_presentation(d: LinkDiagram) -> GroupPresentation:
    """Wirtinger presentation plus one framed-longitude relator per component.

    Dotted circles are read as 0-framed unknots.
    """
    d = expand_twist_boxes(d)
    p = wirtinger(d)
    rels = list(p.relators)
    prov = list(p.provenance)
    for k, (w, mu) in enumerate(longitude_words(d)):
        c = d.components[k]
        if c.dotted:
            f = 0
        elif not c.framing.is_integer:
            raise DiagramValidationError(f"component {k} needs an integer framing")
        else:
            f = c.framing.p
        # blackboard longitude has framing = writhe; correct by meridians
        corr = f - writhe(d, k)
        rels.append(w + (mu if corr > 0 else -mu,) * abs(corr))
        prov.append(("longitude", k))
    return GroupPresentation(p.generators, tuple(rels), tuple(prov))


# --------------------------------------------------------------------------
# Tietze moves
# --------------------------------------------------------------------------


@dataclass
class TietzeCertificate:
    moves: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.moves)

    def lines(self) -> list:
        return [" ".join(str(a) for a in m) for m in self.moves]


def _drop_generator(rels, g: int) -> list:
    """Renumber generators above ``g`` (1-based) after it disappears."""
    out = []
    for r in rels:
        out.append(tuple(x - (1 if x > g else 0) if x > 0 else x + (1 if -x > g else 0) for x in r))
    return out


def apply_tietze(p: GroupPresentation, move: tuple) -> GroupPresentation:
    """Apply one logged move; raises ``ValueError`` when it does not apply."""
    kind = move[0]
    gens = list(p.generators)
    rels = list(p.relators)
    if kind == "reduce":
        i = move[1]
        rels[i] = cyclic_reduce(rels[i])
    elif kind == "drop":
        i = move[1]
        if rels[i]:
            raise ValueError("can only drop the empty relator")
        del rels[i]
    elif kind == "duplicate":
        i, j = move[1], move[2]
        if i == j or cyclic_key(rels[i]) != cyclic_key(rels[j]):
            raise ValueError("relators are not duplicates")
        del rels[i]
    elif kind == "eliminate":
        g, i = move[1], move[2]
        r = cyclic_reduce(rels[i])
        pos = [k for k, x in enumerate(r) if abs(x) == g]
        if len(pos) != 1:
            raise ValueError(f"generator {g} does not occur exactly once in relator {i}")
        k = pos[0]
        rot = r[k:] + r[:k]
        rest = rot[1:]
        # rot = g^e * rest = 1, so g = rest^-e
        sub = inverse(rest) if rot[0] > 0 else rest
        subs = {g: sub, -g: inverse(sub)}
        new = []
        for j, s in enumerate(rels):
            if j == i:
                continue
            w = []
            for x in s:
                w.extend(subs.get(x, (x,)))
            new.append(free_reduce(w))
        rels = _drop_generator(new, g)
        del gens[g - 1]
    elif kind == "substitute":
        # replace a long piece of relator i by the shorter complement from relator j
        i, j, inv, rot, start = move[1:]
        r = rels[j] if not inv else inverse(rels[j])
        r = r[rot:] + r[:rot]
        s = rels[i]
        L = len(r)
        m = next((m for m in range(L, L // 2, -1) if s[start : start + m] == r[:m]), None)
        if m is None or 2 * m <= L:
            raise ValueError("substitution does not shorten the relator")
        rels[i] = free_reduce(s[:start] + inverse(r[m:]) + s[start + m :])
    else:
        raise ValueError(f"unknown Tietze move {kind!r}")
    return GroupPresentation(tuple(gens), tuple(rels))


def replay_tietze(p: GroupPresentation, cert: TietzeCertificate) -> GroupPresentation:
    for m in cert.moves:
        p = apply_tietze(p, m)
    return p


def _candidate_moves(p: GroupPresentation):
    rels = p.relators
    for i, r in enumerate(rels):
        if r != cyclic_reduce(r):
            yield ("reduce", i)
            return
    for i, r in enumerate(rels):
        if not r:
            yield ("drop", i)
            return
    keys = [cyclic_key(r) for r in rels]
    for i in range(len(rels)):
        for j in range(i):
            if keys[i] == keys[j]:
                yield ("duplicate", i, j)
                return
    # eliminations that add the least length first
    best = []
    for i, r in enumerate(rels):
        counts = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        for g, c in counts.items():
            if c == 1:
                occ = sum(sum(1 for x in s if abs(x) == g) for j, s in enumerate(rels) if j != i)
                best.append((occ * (len(r) - 1) - len(r), i, g))
    for _, i, g in sorted(best):
        yield ("eliminate", g, i)
    for i, s in enumerate(rels):
        for j, r in enumerate(rels):
            if i == j or not r or len(r) > 2 * len(s) + 1:
                continue
            L = len(r)
            for inv in (0, 1):
                rr = r if not inv else inverse(r)
                for rot in range(L):
                    q = rr[rot:] + rr[:rot]
                    half = L // 2 + 1
                    for start in range(len(s) - half + 1):
                        if s[start : start + half] == q[:half]:
                            yield ("substitute", i, j, inv, rot, start)


def tietze_simplify(p: GroupPresentation, budget: int = 100_000, seed: int = 0) -> tuple:
    """Greedy Tietze simplification; returns ``(presentation, certificate)``.

    Each step takes the first applicable move that does not increase the
    total relator length (eliminations may trade length for a generator
    only while the total stays below the starting length times two).
    Exhausting ``budget`` returns the best presentation reached.
    """
    cert = TietzeCertificate()
    cur = p
    cap = max(2 * p.total_length, 16)
    while len(cert) < budget:
        chosen = None
        for m in _candidate_moves(cur):
            try:
                nxt = apply_tietze(cur, m)
            except ValueError:
                continue
            if m[0] == "eliminate" and nxt.total_length > cap:
                continue
            if m[0] == "substitute" and nxt.total_length >= cur.total_length:
                continue
            chosen = (m, nxt)
            break
        if chosen is None:
            break
        cert.moves.append(chosen[0])
        cur = chosen[1]
    return cur, cert


@dataclass(frozen=True)
class FreeCertificate:
    status: str
    rank: int
    abelianization: AbelianInvariants
    presentation: GroupPresentation | None = None
    certificate: TietzeCertificate | None = None
    reason: str = ""


def certify_free(p: GroupPresentation, n: int, budget: int = 100_000) -> FreeCertificate:
    """``yes`` with a Tietze certificate ending in a free presentation of rank ``n``.

    Never answers ``no``: failures are ``inconclusive``.
    """
    ab = p.abelianization()
    if ab.free_rank != n or ab.torsion:
        return FreeCertificate("inconclusive", n, ab, reason=f"abelianization is {ab}, not Z^{n}")
    q, cert = tietze_simplify(p, budget)
    if q.is_free_presentation() and q.rank == n:
        if replay_tietze(p, cert) != q:
            raise AssertionError("Tietze certificate does not replay")
        assert ab.free_rank == n
        return FreeCertificate("yes", n, ab, q, cert)
    return FreeCertificate("inconclusive", n, ab, q, cert, reason="simplification did not reach a free presentation")
