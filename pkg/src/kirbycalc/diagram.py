"""Decorated framed-link diagrams in extended planar-diagram (PD) form.

A crossing is stored as ``X[a, b, c, d, sign]`` with the four edge labels
listed counterclockwise, starting from the *incoming under* edge.  The under
strand therefore runs ``a -> c``; the over strand runs ``d -> b`` for a
positive crossing and ``b -> d`` for a negative one.  Orientation of every
edge is thus recoverable from the crossings alone, and the rotation system
(counterclockwise slot order) fixes the planar structure.

Crossingless components are stored as free loops ``O[label]`` because a PD
code cannot express them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

SIDES = ("L", "R")


def other_side(side: str) -> str:
    return "R" if side == "L" else "L"


class DiagramError(ValueError):
    """Base class for diagram problems."""


class DiagramSyntaxError(DiagramError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class DiagramValidationError(DiagramError):
    pass


# --------------------------------------------------------------------------
# Decorations
# --------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Framing:
    """Surgery/handle coefficient of a component.

    ``kind`` is one of ``"none"``, ``"integer"``, ``"rational"`` or
    ``"infinity"``; rationals are kept in lowest terms with ``q >= 1``.
    """

    kind: str = "none"
    p: int = 0
    q: int = 1

    def __post_init__(self):
        if self.kind not in ("none", "integer", "rational", "infinity"):
            raise ValueError(f"bad framing kind {self.kind!r}")
        if self.kind == "rational":
            if self.q < 1:
                raise ValueError("rational framing needs q >= 1")
            from math import gcd

            if gcd(self.p, self.q) != 1:
                raise ValueError("rational framing not in lowest terms")
            if self.q == 1:
                object.__setattr__(self, "kind", "integer")

    @classmethod
    def none(cls) -> "Framing":
        return cls("none")

    @classmethod
    def integer(cls, n: int) -> "Framing":
        return cls("integer", int(n), 1)

    @classmethod
    def infinity(cls) -> "Framing":
        return cls("infinity", 1, 0)

    @classmethod
    def from_value(cls, value) -> "Framing":
        """Build from an int, a Fraction, ``None`` or ``float('inf')``."""
        if value is None:
            return cls.none()
        if isinstance(value, Framing):
            return value
        if value == float("inf"):
            return cls.infinity()
        fr = Fraction(value)
        if fr.denominator == 1:
            return cls.integer(fr.numerator)
        return cls("rational", fr.numerator, fr.denominator)

    @property
    def is_none(self) -> bool:
        return self.kind == "none"

    @property
    def is_integer(self) -> bool:
        return self.kind == "integer"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinity"

    @property
    def value(self) -> Fraction:
        if self.kind in ("integer", "rational"):
            return Fraction(self.p, self.q)
        raise ValueError(f"framing {self} has no finite value")

    def __str__(self) -> str:
        if self.kind == "none":
            return "none"
        if self.kind == "infinity":
            return "inf"
        if self.kind == "integer":
            return str(self.p)
        return f"{self.p}/{self.q}"

    @classmethod
    def parse(cls, text: str) -> "Framing":
        text = text.strip()
        if text == "none":
            return cls.none()
        if text == "inf":
            return cls.infinity()
        if "/" in text:
            p, q = text.split("/")
            p, q = int(p), int(q)
            if q <= 0:
                raise ValueError("denominator must be positive")
            return cls.from_value(Fraction(p, q))
        return cls.integer(int(text))


@dataclass(frozen=True)
class Crossing:
    """Edge labels in counterclockwise order starting at the incoming under edge."""

    slots: tuple
    sign: int

    def __post_init__(self):
        if len(self.slots) != 4:
            raise DiagramValidationError("a crossing has four slots")
        if self.sign not in (1, -1):
            raise DiagramValidationError("crossing sign must be +1 or -1")

    @property
    def over_in(self) -> int:
        return 3 if self.sign == 1 else 1

    @property
    def over_out(self) -> int:
        return 1 if self.sign == 1 else 3

    def is_head(self, slot: int) -> bool:
        """True if the edge at ``slot`` ends (arrives) at this crossing."""
        return slot == 0 or slot == self.over_in


@dataclass(frozen=True)
class Component:
    edges: tuple
    framing: Framing = field(default_factory=Framing.none)
    dotted: bool = False
    bracketed: bool = False


@dataclass(frozen=True)
class TwistBox:
    """``amount`` full twists (a multiple of 1/2) across ``len(anchor)`` strands.

    ``anchor`` lists ``(edge, side)`` pairs crossed in order by a short chord;
    ``side`` is the side of that edge the chord arrives from.
    """

    strands: int
    amount: Fraction
    anchor: tuple

    def __post_init__(self):
        object.__setattr__(self, "amount", Fraction(self.amount))
        if self.strands < 1:
            raise DiagramValidationError("twist box needs at least one strand")
        if (2 * self.amount).denominator != 1:
            raise DiagramValidationError("twist amount must be a multiple of 1/2")
        if len(self.anchor) != self.strands:
            raise DiagramValidationError("twist box anchor length must equal strand count")

    @property
    def half_twists(self) -> int:
        return int(2 * self.amount)

    @property
    def crossing_count(self) -> int:
        n = self.strands
        return n * (n - 1) // 2 * abs(self.half_twists)


@dataclass(frozen=True)
class Band:
    """An attaching band.

    ``start``/``end`` are ``(edge, side)``: the band leaves ``start`` into the
    face on that side and arrives at ``end`` from the face on that side.
    ``crossings`` lists ``(edge, from_side, band_over)`` for each edge the band
    core crosses, in order.
    """

    start: tuple
    end: tuple
    crossings: tuple = ()
    half_twists: int = 0

    def __str__(self) -> str:
        parts = [f"start={self.start[0]}:{self.start[1]}", f"end={self.end[0]}:{self.end[1]}"]
        if self.crossings:
            cross = ",".join(f"{e}:{s}:{'o' if o else 'u'}" for e, s, o in self.crossings)
            parts.append(f"cross={cross}")
        parts.append(f"twists={self.half_twists}")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Band":
        fields = dict(tok.split("=", 1) for tok in text.split())
        start_e, start_s = fields["start"].split(":")
        end_e, end_s = fields["end"].split(":")
        crossings = []
        if fields.get("cross"):
            for item in fields["cross"].split(","):
                e, s, o = item.split(":")
                crossings.append((int(e), s, o == "o"))
        return cls(
            (int(start_e), start_s),
            (int(end_e), end_s),
            tuple(crossings),
            int(fields.get("twists", 0)),
        )


# --------------------------------------------------------------------------
# The diagram
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple = ()
    loops: tuple = ()
    components: tuple = ()
    twist_boxes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "loops", tuple(self.loops))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "twist_boxes", tuple(self.twist_boxes))
        self._validate()

    # -- basic structure ---------------------------------------------------

    @cached_property
    def ends(self) -> dict:
        """edge -> ((tail_crossing, tail_slot), (head_crossing, head_slot))."""
        tails, heads = {}, {}
        for ci, x in enumerate(self.crossings):
            for s, e in enumerate(x.slots):
                target = heads if x.is_head(s) else tails
                if e in target:
                    raise DiagramValidationError(
                        f"inconsistent orientation: edge {e} has two "
                        f"{'heads' if target is heads else 'tails'}"
                    )
                target[e] = (ci, s)
        if set(tails) != set(heads):
            bad = sorted(set(tails) ^ set(heads))
            raise DiagramValidationError(f"inconsistent orientation at edges {bad}")
        return {e: (tails[e], heads[e]) for e in tails}

    @property
    def edges(self) -> list:
        return sorted(self.ends)

    @cached_property
    def component_of(self) -> dict:
        out = {}
        for i, comp in enumerate(self.components):
            for e in comp.edges:
                out[e] = i
        return out

    def next_edge(self, e: int) -> int:
        ci, s = self.ends[e][1]
        return self.crossings[ci].slots[(s + 2) % 4]

    def strand_components(self, ci: int) -> tuple:
        """(component of under strand, component of over strand)."""
        x = self.crossings[ci]
        return self.component_of[x.slots[0]], self.component_of[x.slots[1]]

    def _validate(self):
        ends = self.ends
        labels = set(ends)
        for lp in self.loops:
            if lp in labels:
                raise DiagramValidationError(f"loop label {lp} collides with an edge")
        if len(set(self.loops)) != len(self.loops):
            raise DiagramValidationError("duplicate loop label")
        seen = set()
        for i, comp in enumerate(self.components):
            if not comp.edges:
                raise DiagramValidationError(f"component {i} is empty")
            for e in comp.edges:
                if e in seen:
                    raise DiagramValidationError(f"edge {e} in two components")
                seen.add(e)
            if len(comp.edges) == 1 and comp.edges[0] in self.loops:
                pass
            else:
                for a, b in zip(comp.edges, comp.edges[1:] + comp.edges[:1]):
                    if a not in ends:
                        raise DiagramValidationError(f"component {i} lists unknown edge {a}")
                    if self.next_edge(a) != b:
                        raise DiagramValidationError(
                            f"component {i}: edge {b} does not follow edge {a}"
                        )
            if comp.dotted and not (comp.framing.is_none):
                raise DiagramValidationError(f"dotted component {i} carries a framing")
        expected = labels | set(self.loops)
        if seen != expected:
            raise DiagramValidationError(
                f"edges not covered by components: {sorted(expected - seen)}"
            )
        for piece in self.pieces:
            if piece["loop"]:
                continue
            v, e, f = len(piece["crossings"]), len(piece["edges"]), len(piece["faces"])
            if v - e + f != 2:
                raise DiagramValidationError(
                    f"non-planar rotation system: V - E + F = {v} - {e} + {f} = {v - e + f} != 2"
                )
        for tb in self.twist_boxes:
            self._validate_twist_box(tb)

    def _validate_twist_box(self, tb: TwistBox):
        used = [e for e, _ in tb.anchor]
        if len(set(used)) != len(used):
            raise DiagramValidationError("twist box crosses an edge twice")
        for e, s in tb.anchor:
            if s not in SIDES or not self.has_edge(e):
                raise DiagramValidationError(f"bad twist box anchor {e}{s}")
        for (e1, s1), (e2, s2) in zip(tb.anchor, tb.anchor[1:]):
            if self.piece_of(e1) == self.piece_of(e2):
                if self.face_of(e1, other_side(s1)) != self.face_of(e2, s2):
                    raise DiagramValidationError(
                        f"twist box anchor {e1}{s1} -> {e2}{s2} does not pass through a common face"
                    )
        all_used = [e for t in self.twist_boxes for e, _ in t.anchor]
        if len(set(all_used)) != len(all_used):
            raise DiagramValidationError("two twist boxes share an edge")

    def has_edge(self, e: int) -> bool:
        return e in self.ends or e in self.loops

    # -- faces ----------------------------------------------------------------

    @cached_property
    def faces(self) -> list:
        """Faces as tuples of darts ``(edge, +1|-1)``; face on the left of each dart."""
        ends = self.ends
        seen = set()
        faces = []
        darts = [(e, d) for e in sorted(ends) for d in (1, -1)]
        for start in darts:
            if start in seen:
                continue
            face = []
            dart = start
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                e, d = dart
                ci, s = ends[e][1] if d == 1 else ends[e][0]
                s2 = (s - 1) % 4
                e2 = self.crossings[ci].slots[s2]
                tail2 = ends[e2][0]
                dart = (e2, 1) if tail2 == (ci, s2) else (e2, -1)
            faces.append(tuple(face))
        for lp in self.loops:
            faces.append(((lp, 1),))
            faces.append(((lp, -1),))
        return faces

    @cached_property
    def _face_index(self) -> dict:
        out = {}
        for i, f in enumerate(self.faces):
            for dart in f:
                out[dart] = i
        return out

    def face_of(self, edge: int, side: str) -> int:
        """Index of the face on ``side`` of ``edge`` (relative to its orientation)."""
        return self._face_index[(edge, 1 if side == "L" else -1)]

    @cached_property
    def pieces(self) -> list:
        """Connected pieces of the projection (free loops are their own pieces)."""
        parent = list(range(len(self.crossings)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e, ((c1, _), (c2, _)) in self.ends.items():
            r1, r2 = find(c1), find(c2)
            if r1 != r2:
                parent[max(r1, r2)] = min(r1, r2)
        groups: dict = {}
        for ci in range(len(self.crossings)):
            groups.setdefault(find(ci), []).append(ci)
        pieces = []
        face_piece = {}
        for root in sorted(groups):
            cs = set(groups[root])
            es = sorted(e for e, ((c1, _), _) in self.ends.items() if c1 in cs)
            pieces.append({"loop": False, "crossings": sorted(cs), "edges": es, "faces": []})
            for e in es:
                face_piece[e] = len(pieces) - 1
        for lp in self.loops:
            pieces.append({"loop": True, "crossings": [], "edges": [lp], "faces": []})
            face_piece[lp] = len(pieces) - 1
        for fi, f in enumerate(self.faces):
            pieces[face_piece[f[0][0]]]["faces"].append(fi)
        return pieces

    @cached_property
    def _piece_of_edge(self) -> dict:
        out = {}
        for pi, p in enumerate(self.pieces):
            for e in p["edges"]:
                out[e] = pi
        return out

    def piece_of(self, edge: int) -> int:
        return self._piece_of_edge[edge]

    # -- summaries --------------------------------------------------------------

    @property
    def num_components(self) -> int:
        return len(self.components)

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)

    def __str__(self) -> str:
        return serialize_diagram(self)


# --------------------------------------------------------------------------
# Elementary quantities
# --------------------------------------------------------------------------


def _expanded(d: LinkDiagram) -> LinkDiagram:
    return expand_twist_boxes(d) if d.twist_boxes else d


def linking_number(d: LinkDiagram, i: int, j: int) -> int:
    """Half the signed count of crossings between components ``i`` and ``j``."""
    if i == j:
        raise ValueError("linking_number needs two distinct components; use writhe")
    d = _expanded(d)
    total = 0
    for ci, x in enumerate(d.crossings):
        a, b = d.strand_components(ci)
        if {a, b} == {i, j}:
            total += x.sign
    if total % 2:
        raise DiagramValidationError("odd inter-component crossing sum")
    return total // 2


def writhe(d: LinkDiagram, i: int) -> int:
    d = _expanded(d)
    total = 0
    for ci, x in enumerate(d.crossings):
        a, b = d.strand_components(ci)
        if a == i and b == i:
            total += x.sign
    return total


def linking_matrix(d: LinkDiagram) -> list:
    """Pairwise linking numbers, with writhes on the diagonal."""
    d = _expanded(d)
    n = d.num_components
    m = [[0] * n for _ in range(n)]
    for ci, x in enumerate(d.crossings):
        a, b = d.strand_components(ci)
        if a == b:
            m[a][a] += x.sign
        else:
            m[a][b] += x.sign
            m[b][a] += x.sign
    for a in range(n):
        for b in range(n):
            if a != b:
                m[a][b] //= 2
    return m


# --------------------------------------------------------------------------
# Text format
# --------------------------------------------------------------------------

HEADER = "kirbycalc-diagram v1"

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<X>X\[(?P<xbody>[^\]]*)\])
  | (?P<O>O\[(?P<obody>[^\]]*)\])
  | (?P<T>T\[(?P<tbody>[^\]]*)\])
  | (?P<comp>comp\s+(?P<cidx>\d+)\s*:(?P<cbody>[^\n]*))
  | (?P<header>kirbycalc-diagram\s+v1)
    """,
    re.VERBOSE,
)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.split("\n"))


def _position(text: str, pos: int) -> tuple:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _ints(body: str) -> list:
    return [int(tok) for tok in re.split(r"\s*,\s*", body.strip()) if tok]


def parse_diagram(text: str) -> LinkDiagram:
    """Parse the extended-PD text format; raises on syntax or validation errors."""
    text = _strip_comments(text)
    pos = 0
    crossings, loops, comps, boxes = [], [], {}, []
    seen_header = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DiagramSyntaxError(f"unexpected input {text[pos:pos + 12]!r}", *_position(text, pos))
        kind = m.lastgroup if m.lastgroup in ("ws",) else None
        try:
            if m.group("ws"):
                pass
            elif m.group("header"):
                if seen_header:
                    raise ValueError("duplicate header")
                seen_header = True
            elif not seen_header:
                raise ValueError(f"missing header line {HEADER!r}")
            elif m.group("X"):
                body = m.group("xbody")
                toks = [t.strip() for t in body.split(",")]
                if len(toks) != 5:
                    raise ValueError("crossing needs four edges and a sign")
                sign_tok = toks[4]
                if sign_tok not in ("+1", "-1", "1", "+", "-"):
                    raise ValueError(f"bad crossing sign {sign_tok!r}")
                sign = -1 if sign_tok.startswith("-") else 1
                crossings.append(Crossing(tuple(int(t) for t in toks[:4]), sign))
            elif m.group("O"):
                loops.append(int(m.group("obody").strip()))
            elif m.group("T"):
                toks = [t.strip() for t in m.group("tbody").split(",")]
                if len(toks) != 3:
                    raise ValueError("twist box is T[strands,amount,anchor]")
                anchor = []
                for item in toks[2].split("/"):
                    item = item.strip()
                    anchor.append((int(item[:-1]), item[-1]))
                boxes.append(TwistBox(int(toks[0]), Fraction(toks[1]), tuple(anchor)))
            elif m.group("comp"):
                idx = int(m.group("cidx"))
                if idx in comps:
                    raise ValueError(f"duplicate component {idx}")
                comps[idx] = _parse_component_body(m.group("cbody"))
        except DiagramSyntaxError:
            raise
        except (ValueError, KeyError) as exc:
            if isinstance(exc, DiagramValidationError):
                raise
            raise DiagramSyntaxError(str(exc), *_position(text, pos)) from None
        pos = m.end()
    if not seen_header:
        raise DiagramSyntaxError(f"missing header line {HEADER!r}", 1, 1)
    if sorted(comps) != list(range(len(comps))):
        raise DiagramValidationError("component indices must be 0..n-1")
    return LinkDiagram(
        tuple(crossings), tuple(loops), tuple(comps[i] for i in range(len(comps))), tuple(boxes)
    )


def _parse_component_body(body: str) -> Component:
    m = re.fullmatch(
        r"\s*arcs\s*=\s*\[(?P<arcs>[^\]]*)\]\s+framing\s*=\s*(?P<fr>\S+)"
        r"\s+dotted\s*=\s*(?P<dot>[01])\s+bracketed\s*=\s*(?P<br>[01])\s*",
        body,
    )
    if not m:
        raise ValueError(f"bad component line {body.strip()!r}")
    return Component(
        tuple(_ints(m.group("arcs"))),
        Framing.parse(m.group("fr")),
        m.group("dot") == "1",
        m.group("br") == "1",
    )


def _fmt_amount(a: Fraction) -> str:
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def serialize_diagram(d: LinkDiagram, canonical: bool = False) -> str:
    """Deterministic text form; ``canonical=True`` relabels to the canonical form first."""
    if canonical:
        d = canonical_form(d)
    lines = [HEADER]
    for x in d.crossings:
        a, b, c, e = x.slots
        lines.append(f"X[{a},{b},{c},{e},{'+1' if x.sign > 0 else '-1'}]")
    for lp in d.loops:
        lines.append(f"O[{lp}]")
    for tb in d.twist_boxes:
        anchor = "/".join(f"{e}{s}" for e, s in tb.anchor)
        lines.append(f"T[{tb.strands},{_fmt_amount(tb.amount)},{anchor}]")
    for i, comp in enumerate(d.components):
        arcs = ",".join(str(e) for e in comp.edges)
        lines.append(
            f"comp {i}: arcs=[{arcs}] framing={comp.framing} "
            f"dotted={int(comp.dotted)} bracketed={int(comp.bracketed)}"
        )
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Canonical relabelling and isomorphism
# --------------------------------------------------------------------------


def _decor(comp: Component) -> tuple:
    return (str(comp.framing), int(comp.dotted), int(comp.bracketed))


def _piece_code(d: LinkDiagram, piece: dict, start_edge: int):
    """Relabel one connected piece by a traversal anchored at ``start_edge``."""
    ends = d.ends
    edge_label = {}
    cross_order = []
    cross_seen = set()
    queue = [start_edge]
    edge_label[start_edge] = 1
    qi = 0
    while qi < len(queue):
        e = queue[qi]
        qi += 1
        for ci, _ in ends[e]:
            if ci in cross_seen:
                continue
            cross_seen.add(ci)
            cross_order.append(ci)
            for e2 in d.crossings[ci].slots:
                if e2 not in edge_label:
                    edge_label[e2] = len(edge_label) + 1
                    queue.append(e2)
    code = tuple(
        tuple(edge_label[e] for e in d.crossings[ci].slots) + (d.crossings[ci].sign,)
        for ci in cross_order
    )
    comp_tags = tuple(
        _decor(d.components[d.component_of[e]])
        for e, _ in sorted(edge_label.items(), key=lambda kv: kv[1])
    )
    return (code, comp_tags), edge_label, cross_order


def canonical_form(d: LinkDiagram) -> LinkDiagram:
    """Relabel ``d`` to the lexicographically least labelling over all start edges.

    Two diagrams have equal canonical forms iff there is a decoration- and
    orientation-preserving isomorphism of their rotation systems.
    """
    best_pieces = []
    for piece in d.pieces:
        if piece["loop"]:
            lp = piece["edges"][0]
            best_pieces.append((("loop", _decor(d.components[d.component_of[lp]])), {lp: 1}, []))
            continue
        best = None
        for e in piece["edges"]:
            key, labels, order = _piece_code(d, piece, e)
            if best is None or key < best[0]:
                best = (key, labels, order)
        best_pieces.append(best)
    # crossing pieces first (ordered by code), then free loops
    cross_pieces = sorted((p for p in best_pieces if p[0][0] != "loop"), key=lambda p: p[0])
    loop_pieces = sorted((p for p in best_pieces if p[0][0] == "loop"), key=lambda p: p[0])
    relabel = {}
    crossings = []
    offset = 0
    for key, labels, order in cross_pieces:
        for e, lab in labels.items():
            relabel[e] = lab + offset
        for ci in order:
            x = d.crossings[ci]
            crossings.append(Crossing(tuple(relabel[e] for e in x.slots), x.sign))
        offset += len(labels)
    loops = []
    for key, labels, _ in loop_pieces:
        (lp,) = labels
        offset += 1
        relabel[lp] = offset
        loops.append(offset)
    comps = []
    for comp in d.components:
        new = [relabel[e] for e in comp.edges]
        k = new.index(min(new))
        comps.append(replace(comp, edges=tuple(new[k:] + new[:k])))
    comps.sort(key=lambda c: c.edges[0])
    boxes = sorted(
        (
            TwistBox(tb.strands, tb.amount, tuple((relabel[e], s) for e, s in tb.anchor))
            for tb in d.twist_boxes
        ),
        key=lambda tb: (tb.anchor, tb.amount),
    )
    return LinkDiagram(tuple(crossings), tuple(loops), tuple(comps), tuple(boxes))


def diagrams_isomorphic(a: LinkDiagram, b: LinkDiagram) -> bool:
    if (a.num_crossings, len(a.loops), a.num_components) != (
        b.num_crossings,
        len(b.loops),
        b.num_components,
    ):
        return False
    return serialize_diagram(a, canonical=True) == serialize_diagram(b, canonical=True)


# --------------------------------------------------------------------------
# Constructors
# --------------------------------------------------------------------------


def unlink(n: int, framings: Sequence | None = None, bracketed: bool = False) -> LinkDiagram:
    """Crossingless n-component unlink (free loops labelled 1..n)."""
    framings = list(framings) if framings is not None else [None] * n
    comps = tuple(
        Component((i + 1,), Framing.from_value(framings[i]), False, bracketed) for i in range(n)
    )
    return LinkDiagram((), tuple(range(1, n + 1)), comps)


def closed_braid(
    word: Iterable[int],
    strands: int | None = None,
    framings: Sequence | None = None,
    bracketed: bool = False,
) -> LinkDiagram:
    """Closure of a braid word (``+i`` is a positive crossing between strands i, i+1)."""
    word = [int(w) for w in word]
    if any(w == 0 for w in word):
        raise ValueError("braid letters are nonzero")
    n = strands if strands is not None else max([abs(w) + 1 for w in word] + [1])
    # strand positions carry "current edge" ids; edges are created lazily
    next_label = [0]

    def fresh():
        next_label[0] += 1
        return next_label[0]

    start = [fresh() for _ in range(n)]
    current = list(start)
    raw = []  # (slots as (edge_in_under, ...), sign) with provisional labels
    for w in word:
        i = abs(w) - 1
        left_in, right_in = current[i], current[i + 1]
        left_out, right_out = fresh(), fresh()
        if w > 0:
            # left strand over: under = right strand (SE -> NW)
            raw.append(((right_in, left_out, right_out, left_in), 1))
        else:
            raw.append(((left_in, right_in, left_out, right_out), -1))
        # after the crossing the left position holds the strand that came from the right
        current[i], current[i + 1] = right_out, left_out
    # closure: top edge at position k is identified with bottom edge at position k
    ident = {}
    for k in range(n):
        ident[current[k]] = start[k]

    def canon(e):
        while e in ident and ident[e] != e:
            e = ident[e]
        return e

    crossings = [Crossing(tuple(canon(e) for e in slots), s) for slots, s in raw]
    loops = sorted({canon(e) for e in start} - {e for x in crossings for e in x.slots})
    return _assemble(crossings, loops, framings, bracketed)


def _assemble(crossings, loops, framings=None, bracketed=False, relabel=True) -> LinkDiagram:
    """Group edges into components by traversal, then relabel edges 1..E per component."""
    tails, heads = {}, {}
    for ci, x in enumerate(crossings):
        for s, e in enumerate(x.slots):
            (heads if x.is_head(s) else tails)[e] = (ci, s)
    done = set()
    comps_edges = []
    for e0 in sorted(tails, key=lambda e: tails[e]):
        if e0 in done:
            continue
        seq = []
        e = e0
        while e not in done:
            done.add(e)
            seq.append(e)
            ci, s = heads[e]
            e = crossings[ci].slots[(s + 2) % 4]
        comps_edges.append(seq)
    for lp in loops:
        comps_edges.append([lp])
    mapping = {}
    if relabel:
        k = 0
        for seq in comps_edges:
            for e in seq:
                k += 1
                mapping[e] = k
    else:
        mapping = {e: e for seq in comps_edges for e in seq}
    framings = list(framings) if framings is not None else [None] * len(comps_edges)
    if len(framings) != len(comps_edges):
        raise ValueError(f"expected {len(comps_edges)} framings, got {len(framings)}")
    new_cross = tuple(Crossing(tuple(mapping[e] for e in x.slots), x.sign) for x in crossings)
    comps = tuple(
        Component(tuple(mapping[e] for e in seq), Framing.from_value(framings[i]), False, bracketed)
        for i, seq in enumerate(comps_edges)
    )
    new_loops = tuple(mapping[lp] for lp in loops)
    return LinkDiagram(new_cross, new_loops, comps)


def from_pd(code: Sequence[Sequence[int]], framings: Sequence | None = None, bracketed: bool = False) -> LinkDiagram:
    """Build from a KnotAtlas-style PD code ``[[i, j, k, l], ...]``.

    Orientation of over strands follows the usual convention that labels
    increase along each component; the sign is inferred from it.
    """
    code = [tuple(int(v) for v in x) for x in code]
    # under strands fix i -> k; propagate orientation along strands
    occurrences: dict = {}
    for ci, x in enumerate(code):
        for s, e in enumerate(x):
            occurrences.setdefault(e, []).append((ci, s))
    labels = sorted(occurrences)
    # components via strand continuation
    nxt_through = {}
    for ci, x in enumerate(code):
        for s in range(4):
            nxt_through[(ci, s)] = (ci, (s + 2) % 4)
    # decide over direction by label order within its component cycle
    comp_of = {}
    comp_members = []
    for e in labels:
        if e in comp_of:
            continue
        members = []
        stack = [e]
        while stack:
            f = stack.pop()
            if f in comp_of:
                continue
            comp_of[f] = len(comp_members)
            members.append(f)
            for ci, s in occurrences[f]:
                g = code[ci][(s + 2) % 4]
                if g not in comp_of:
                    stack.append(g)
        comp_members.append(sorted(members))

    def follows(a, b):
        members = comp_members[comp_of[a]]
        k = members.index(a)
        return members[(k + 1) % len(members)] == b

    crossings = []
    for x in code:
        i, j, k, l = x
        if follows(j, l) and not follows(l, j):
            sign = -1  # over runs j -> l, i.e. enters at slot 1
        elif follows(l, j) and not follows(j, l):
            sign = 1
        elif len(comp_members[comp_of[j]]) == 2:
            sign = -1 if j < l else 1
        else:
            raise DiagramValidationError(f"cannot orient over strand at {list(x)}")
        crossings.append(Crossing((i, j, k, l), sign))
    return _assemble(crossings, [], framings, bracketed)


def disjoint_union(a: LinkDiagram, b: LinkDiagram) -> LinkDiagram:
    """Split union; ``b``'s labels are shifted past ``a``'s and its components follow."""
    shift = max([0] + a.edges + list(a.loops))
    crossings = a.crossings + tuple(
        Crossing(tuple(e + shift for e in x.slots), x.sign) for x in b.crossings
    )
    loops = a.loops + tuple(lp + shift for lp in b.loops)
    comps = a.components + tuple(
        replace(c, edges=tuple(e + shift for e in c.edges)) for c in b.components
    )
    boxes = a.twist_boxes + tuple(
        TwistBox(t.strands, t.amount, tuple((e + shift, s) for e, s in t.anchor))
        for t in b.twist_boxes
    )
    return LinkDiagram(crossings, loops, comps, boxes)


def with_decorations(d: LinkDiagram, index: int, **changes) -> LinkDiagram:
    """Copy of ``d`` with component ``index`` re-decorated (framing/dotted/bracketed)."""
    comps = list(d.components)
    if "framing" in changes:
        changes["framing"] = Framing.from_value(changes["framing"])
    comps[index] = replace(comps[index], **changes)
    return replace(d, components=tuple(comps))


def expand_twist_boxes(d: LinkDiagram) -> LinkDiagram:
    """Replace every twist box by its crossings (n(n-1)/2 per half twist)."""
    if not d.twist_boxes:
        return d
    from ._builder import expand_boxes

    return expand_boxes(d)
