"""Rebuild engine shared by all diagram moves.

A move loads the current diagram into a :class:`Builder`, cuts or erases the
pieces it changes, wires in new crossings, and calls :meth:`Builder.finish`.
``finish`` traces the resulting curves, orients them, relabels everything
deterministically and returns a validated :class:`LinkDiagram`.

Points are crossing slots ``("x", k, s)`` (degree one) or joints
``("j", k)`` (degree two).  Wires are undirected segments carrying a
component tag and an optional orientation hint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    Component,
    Crossing,
    DiagramValidationError,
    Framing,
    LinkDiagram,
    TwistBox,
)


def rot90(v):
    return (-v[1], v[0])


def neg(v):
    return (-v[0], -v[1])


@dataclass
class BuildInfo:
    wire_edge: dict = field(default_factory=dict)
    crossing_index: dict = field(default_factory=dict)
    curve_tags: list = field(default_factory=list)
    edge_of_old: dict = field(default_factory=dict)


class Builder:
    def __init__(self):
        self.n_cross = 0
        self.n_joint = 0
        self.wires: list = []  # (u, v, tag, hint)
        self.adj: dict = {}
        self.source = None

    # -- primitives -----------------------------------------------------------

    def crossing(self) -> int:
        """New crossing whose under strand occupies slots 0 and 2."""
        k = self.n_cross
        self.n_cross += 1
        return k

    def joint(self):
        self.n_joint += 1
        return ("j", self.n_joint - 1)

    def wire(self, u, v, tag, hint=True) -> int:
        w = len(self.wires)
        self.wires.append((u, v, tag, hint))
        self.adj.setdefault(u, []).append((w, 0))
        self.adj.setdefault(v, []).append((w, 1))
        return w

    def chain(self, points, tag, hint=True) -> list:
        return [self.wire(a, b, tag, hint) for a, b in zip(points, points[1:])]

    def place(self, p_dir, q_dir, p_over: bool):
        """New crossing of strand P (direction ``p_dir``) with strand Q.

        Returns ``(p_in, p_out, q_in, q_out)`` as points.
        """
        k = self.crossing()
        under, over = (q_dir, p_dir) if p_over else (p_dir, q_dir)
        u_in, u_out = ("x", k, 0), ("x", k, 2)
        if neg(over) == rot90(neg(under)):
            o_in, o_out = ("x", k, 1), ("x", k, 3)
        elif neg(over) == neg(rot90(neg(under))):
            o_in, o_out = ("x", k, 3), ("x", k, 1)
        else:
            raise AssertionError("strands must be perpendicular in the local picture")
        if p_over:
            return o_in, o_out, u_in, u_out
        return u_in, u_out, o_in, o_out

    # -- loading ----------------------------------------------------------------

    def load(
        self,
        d: LinkDiagram,
        cuts: dict | None = None,
        erase=(),
        drop=(),
        skip=(),
        overrides: dict | None = None,
        ignore_boxes: bool = False,
    ):
        """Copy ``d`` into the builder.

        ``cuts[e]`` is a list of ``(a, b)`` point pairs in order along edge
        ``e``; the edge is wired ``tail-a``, ``b-a'``, ..., ``b''-head`` and
        the caller connects each ``a`` to its ``b``.  ``erase`` lists crossings
        replaced by straight pass-throughs, ``drop`` components to delete,
        ``skip`` edges the caller wires itself, and ``overrides`` maps old slots
        ``(k, s)`` to replacement points.
        """
        if d.twist_boxes and not ignore_boxes and (cuts or erase or drop or skip or overrides):
            touched = set(cuts or ()) | set(skip)
            for k in erase:
                touched |= set(d.crossings[k].slots)
            for tb in d.twist_boxes:
                if any(e in touched for e, _ in tb.anchor):
                    raise DiagramValidationError("move touches a twist box; expand it first")
        cuts = cuts or {}
        overrides = overrides or {}
        erase, drop, skip = set(erase), set(drop), set(skip)
        self.source = d
        base = self.n_cross
        self.n_cross += len(d.crossings)
        self.old_cross = {ci: base + ci for ci in range(len(d.crossings))}
        self.erased = erase
        pass_joint = {}

        def point(ci, s):
            if (ci, s) in overrides:
                return overrides[(ci, s)]
            if ci in erase:
                key = (ci, s % 2)
                if key not in pass_joint:
                    pass_joint[key] = self.joint()
                return pass_joint[key]
            return ("x", base + ci, s)

        self.old_point = point
        self.first_wire = {}
        for e, ((c1, s1), (c2, s2)) in sorted(d.ends.items()):
            comp = d.component_of[e]
            if comp in drop or e in skip:
                continue
            pts = [point(c1, s1)]
            for a, b in cuts.get(e, ()):
                pts += [a, b]
            pts.append(point(c2, s2))
            ws = [self.wire(pts[i], pts[i + 1], comp) for i in range(0, len(pts), 2)]
            self.first_wire[e] = ws[0]
        for lp in d.loops:
            comp = d.component_of[lp]
            if comp in drop or lp in skip:
                continue
            if cuts.get(lp):
                pts = []
                for a, b in cuts[lp]:
                    pts += [a, b]
                # closing wire runs from the last cut back to the first
                ws = [self.wire(pts[i], pts[i + 1], comp) for i in range(1, len(pts) - 1, 2)]
                last = self.wire(pts[-1], pts[0], comp)
                self.first_wire[lp] = ws[0] if ws else last
            else:
                j1, j2 = self.joint(), self.joint()
                self.first_wire[lp] = self.wire(j1, j2, comp)
                self.wire(j2, j1, comp)
        # crossings that vanished because a strand was dropped
        for ci, x in enumerate(d.crossings):
            if ci in erase:
                continue
            under_c = d.component_of[x.slots[0]]
            over_c = d.component_of[x.slots[1]]
            if under_c in drop or over_c in drop:
                raise DiagramValidationError(
                    "dropping a component requires erasing its crossings"
                )

    def erase_for_drop(self, d: LinkDiagram, drop) -> set:
        return {
            ci
            for ci, x in enumerate(d.crossings)
            if d.component_of[x.slots[0]] in drop or d.component_of[x.slots[1]] in drop
        }

    # -- finishing -------------------------------------------------------------

    def _degree_check(self):
        for p, lst in self.adj.items():
            want = 1 if p[0] == "x" else 2
            if len(lst) != want:
                raise DiagramValidationError(f"builder point {p} has degree {len(lst)}")

    def _step(self, w, end):
        """From wire ``w`` arriving at its end ``end``, return the next (wire, end-entered)."""
        u, v, _, _ = self.wires[w]
        p = v if end == 1 else u
        if p[0] == "x":
            q = ("x", p[1], (p[2] + 2) % 4)
            ((w2, e2),) = self.adj[q]
        else:
            entries = self.adj[p]
            a, b = entries
            (w2, e2) = b if a == (w, end) else a
        # leaving through (w2, e2) means arriving at the opposite end
        return w2, 1 - e2

    def finish(self, decorate=None, boxes=()):
        """Trace, orient, relabel and validate.  Returns ``(diagram, info)``."""
        drop_unused = [p for p, lst in self.adj.items() if p[0] == "j" and not lst]
        for p in drop_unused:
            del self.adj[p]
        self._degree_check()
        used_cross = {p[1] for p in self.adj if p[0] == "x"}
        for k in used_cross:
            for s in range(4):
                if ("x", k, s) not in self.adj:
                    raise DiagramValidationError(f"crossing {k} slot {s} is not wired")
        seen = set()
        curves = []
        for w0 in range(len(self.wires)):
            if w0 in seen:
                continue
            seq = []
            w, end = w0, 1
            while True:
                seq.append((w, end))
                seen.add(w)
                w, end = self._step(w, end)
                if w == w0:
                    if end != 1:
                        raise DiagramValidationError("curve traced inconsistently")
                    break
            # the lowest-tagged component keeps its orientation
            hinted = sorted((self._tag(w), w) for w, _ in seq if self.wires[w][3] is not None)
            if hinted:
                wh = hinted[0][1]
                forward = dict(seq)[wh] == 1
                if forward != bool(self.wires[wh][3]):
                    seq = [(w, 1 - e) for w, e in reversed(seq)]
            curves.append(seq)
        curves.sort(key=lambda c: (min(self._tag(w) for w, _ in c), min(w for w, _ in c)))

        info = BuildInfo()
        slot_edge = {}  # (k, s) -> (label, is_head)
        label = 0
        components = []
        for ci, seq in enumerate(curves):
            tags = sorted({self._tag(w) for w, _ in seq})
            info.curve_tags.append(tags)
            # rotate so the segment containing the minimum wire starts first
            breaks = [i for i, (w, e) in enumerate(seq) if self._exit_point(w, e)[0] == "x"]
            if not breaks:
                label += 1
                for w, _ in seq:
                    info.wire_edge[w] = label
                components.append(((label,), tags, True))
                continue
            # segment boundaries: after index i where the wire ends at a slot
            segs = []
            start = (breaks[-1] + 1) % len(seq)
            cur = []
            for off in range(len(seq)):
                i = (start + off) % len(seq)
                cur.append(seq[i])
                if i in breaks:
                    segs.append(cur)
                    cur = []
            wmin = min(w for w, _ in seq)
            first = next(i for i, sg in enumerate(segs) if any(w == wmin for w, _ in sg))
            segs = segs[first:] + segs[:first]
            edges = []
            for sg in segs:
                label += 1
                edges.append(label)
                for w, _ in sg:
                    info.wire_edge[w] = label
                w, e = sg[0]
                p_in = self._entry_point(w, e)
                w, e = sg[-1]
                p_out = self._exit_point(w, e)
                slot_edge[(p_in[1], p_in[2])] = (label, False)
                slot_edge[(p_out[1], p_out[2])] = (label, True)
            components.append((tuple(edges), tags, False))

        raw = []
        for k in sorted(used_cross):
            slots = [slot_edge[(k, s)] for s in range(4)]
            under_in = 0 if slots[0][1] else 2
            if slots[0][1] == slots[2][1]:
                raise DiagramValidationError("under strand has inconsistent orientation")
            if slots[1][1] == slots[3][1]:
                raise DiagramValidationError("over strand has inconsistent orientation")
            rot = [slots[(i + under_in) % 4] for i in range(4)]
            sign = 1 if rot[3][1] else -1
            raw.append((k, Crossing(tuple(lab for lab, _ in rot), sign)))
        raw.sort(key=lambda kx: kx[1].slots[0])
        crossings = []
        for k, x in raw:
            info.crossing_index[k] = len(crossings)
            crossings.append(x)
        loops = [edges[0] for edges, _, is_loop in components if is_loop]
        comps = []
        for i, (edges, tags, _) in enumerate(components):
            if decorate is None:
                fr, dot, br = self._inherit(tags)
            else:
                fr, dot, br = decorate(tags)
            comps.append(Component(edges, Framing.from_value(fr), bool(dot), bool(br)))
        if self.source is not None:
            for e, w in self.first_wire.items():
                info.edge_of_old[e] = info.wire_edge[w]
        new_boxes = []
        for tb in boxes:
            new_boxes.append(
                TwistBox(tb.strands, tb.amount, tuple((info.edge_of_old[e], s) for e, s in tb.anchor))
            )
        d = LinkDiagram(tuple(crossings), tuple(loops), tuple(comps), tuple(new_boxes))
        return d, info

    def _tag(self, w):
        return self.wires[w][2]

    def _exit_point(self, w, end):
        u, v = self.wires[w][:2]
        return v if end == 1 else u

    def _entry_point(self, w, end):
        u, v = self.wires[w][:2]
        return u if end == 1 else v

    def _inherit(self, tags):
        src = self.source
        if src is None or not all(isinstance(t, int) and t < len(src.components) for t in tags):
            return None, False, False
        if len(tags) == 1:
            c = src.components[tags[0]]
            return c.framing, c.dotted, c.bracketed
        comps = [src.components[t] for t in tags]
        return None, any(c.dotted for c in comps), all(c.bracketed for c in comps)


# --------------------------------------------------------------------------
# Braids inside a disk
# --------------------------------------------------------------------------


def braid_between(b: Builder, bottom: list, top: list, word, tags: list, hints=None):
    """Wire ``bottom[i]`` through the braid ``word`` to the top row.

    Strands travel upward; positive letters put the left strand over.
    ``tags[i]`` is the tag of the strand starting at bottom position ``i``.
    """
    n = len(bottom)
    cur = list(bottom)
    owner = list(range(n))
    for letter in word:
        i = abs(letter) - 1
        p_in, p_out, q_in, q_out = b.place((1, 1), (-1, 1), letter > 0)
        b.wire(cur[i], p_in, tags[owner[i]], None)
        b.wire(cur[i + 1], q_in, tags[owner[i + 1]], None)
        cur[i], cur[i + 1] = q_out, p_out
        owner[i], owner[i + 1] = owner[i + 1], owner[i]
    for i in range(n):
        b.wire(cur[i], top[i], tags[owner[i]], None)
    return owner


def half_twist_word(n: int) -> list:
    word = []
    for k in range(1, n):
        word += list(range(k, 0, -1))
    return word


def twist_word(n: int, half_twists: int) -> list:
    base = half_twist_word(n)
    if half_twists >= 0:
        return base * half_twists
    inv = [-x for x in reversed(base)]
    return inv * (-half_twists)


def expand_boxes(d: LinkDiagram) -> LinkDiagram:
    """Expand every twist box into crossings."""
    for tb in d.twist_boxes:
        rest = tuple(t for t in d.twist_boxes if t is not tb)
        b = Builder()
        cuts = {}
        bottom, top, tags = [], [], []
        for e, s in tb.anchor:
            a, c = b.joint(), b.joint()
            cuts[e] = [(a, c)]
            up = s == "L"
            bottom.append(a if up else c)
            top.append(c if up else a)
            tags.append(d.component_of[e])
        b.load(d, cuts=cuts, ignore_boxes=True)
        braid_between(b, bottom, top, twist_word(tb.strands, tb.half_twists), tags)

        d, _ = b.finish(boxes=rest)
    return d
