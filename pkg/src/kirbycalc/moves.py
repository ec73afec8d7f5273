"""Diagram moves: Reidemeister moves, band surgery, handleslides and handle calculus.

Every move takes a diagram and returns a freshly relabelled one.  Locations
(edge labels, crossing indices) always refer to the diagram passed in.
"""

from __future__ import annotations

from fractions import Fraction

from ._builder import Builder, braid_between, twist_word
from .diagram import (
    Band,
    DiagramValidationError,
    Framing,
    LinkDiagram,
    linking_number,
    other_side,
    writhe,
)


class MoveError(DiagramValidationError):
    """The local pattern does not match the move's left-hand side."""


def _comp_tag_decorate(d: LinkDiagram, surgered=frozenset(), framings=None):
    framings = framings or {}

    def decorate(tags):
        if len(tags) == 1 and tags[0] in framings:
            c = d.components[tags[0]]
            return framings[tags[0]], c.dotted, c.bracketed
        if len(tags) == 1 and isinstance(tags[0], int) and tags[0] < d.num_components:
            c = d.components[tags[0]]
            if tags[0] in surgered:
                return None, c.dotted, c.bracketed
            return c.framing, c.dotted, c.bracketed
        known = [d.components[t] for t in tags if isinstance(t, int) and t < d.num_components]
        return None, any(c.dotted for c in known), bool(known) and all(c.bracketed for c in known)

    return decorate


def _is_over(x, slot: int) -> bool:
    return slot % 2 == 1


# --------------------------------------------------------------------------
# Reidemeister I
# --------------------------------------------------------------------------


def r1_do(d: LinkDiagram, edge: int, side: str, sign: int) -> LinkDiagram:
    """Add a kink of crossing sign ``sign`` on ``edge``, lying in the face on ``side``."""
    if not d.has_edge(edge):
        raise MoveError(f"no edge {edge}")
    if side not in ("L", "R") or sign not in (1, -1):
        raise MoveError("R1 needs side L|R and sign +1|-1")
    b = Builder()
    a, c = b.joint(), b.joint()
    b.load(d, cuts={edge: [(a, c)]})
    k = b.crossing()
    under_first = (sign == 1) == (side == "L")
    p = 0 if under_first else 1
    q = (p + 3) % 4 if side == "L" else (p + 1) % 4
    tag = d.component_of[edge]
    b.wire(a, ("x", k, p), tag)
    b.wire(("x", k, (p + 2) % 4), ("x", k, q), tag)
    b.wire(("x", k, (q + 2) % 4), c, tag)
    return b.finish(boxes=d.twist_boxes)[0]


def kink_edge(d: LinkDiagram, ci: int):
    """The loop edge of crossing ``ci`` if it bounds a monogon, else ``None``."""
    for e in set(d.crossings[ci].slots):
        (c1, _), (c2, _) = d.ends[e]
        if c1 == ci and c2 == ci:
            for dart in ((e, 1), (e, -1)):
                if len(d.faces[d._face_index[dart]]) == 1:
                    return e
    return None


def r1_undo(d: LinkDiagram, crossing: int) -> LinkDiagram:
    if not 0 <= crossing < d.num_crossings:
        raise MoveError(f"no crossing {crossing}")
    if kink_edge(d, crossing) is None:
        raise MoveError(f"crossing {crossing} is not a removable kink")
    b = Builder()
    b.load(d, erase={crossing})
    return b.finish(boxes=d.twist_boxes)[0]


# --------------------------------------------------------------------------
# Reidemeister II
# --------------------------------------------------------------------------


def r2_do(d: LinkDiagram, edge1: int, side1: str, edge2: int, side2: str, over: bool = True) -> LinkDiagram:
    """Push a finger of ``edge1`` across ``edge2`` through their common face.

    ``side1``/``side2`` name the side of each edge facing that face; with
    ``over`` true the finger of ``edge1`` passes over ``edge2``.
    """
    for e in (edge1, edge2):
        if not d.has_edge(e):
            raise MoveError(f"no edge {e}")
    if edge1 == edge2:
        raise MoveError("R2 needs two distinct edges")
    if d.piece_of(edge1) == d.piece_of(edge2) and d.face_of(edge1, side1) != d.face_of(edge2, side2):
        raise MoveError(f"edges {edge1}{side1} and {edge2}{side2} do not share a face")
    b = Builder()
    a1, c1, a2, c2 = b.joint(), b.joint(), b.joint(), b.joint()
    b.load(d, cuts={edge1: [(a1, c1)], edge2: [(a2, c2)]})
    e2dir = (1, 0) if side2 == "R" else (-1, 0)
    t1, t2 = d.component_of[edge1], d.component_of[edge2]
    pl = b.place((0, 1), e2dir, bool(over))
    pr = b.place((0, -1), e2dir, bool(over))
    b.wire(a1, pl[0], t1)
    b.wire(pl[1], pr[0], t1)
    b.wire(pr[1], c1, t1)
    # the rising leg is west of the falling one iff edge1 runs east
    up_west = side1 == "L"
    first, second = (pl, pr) if up_west == (e2dir == (1, 0)) else (pr, pl)
    b.wire(a2, first[2], t2)
    b.wire(first[3], second[2], t2)
    b.wire(second[3], c2, t2)
    return b.finish(boxes=d.twist_boxes)[0]


def bigon_pair(d: LinkDiagram, c1: int, c2: int):
    """The (over_edge, under_edge) of a removable R2 bigon between two crossings."""
    if c1 == c2:
        return None
    for face in d.faces:
        if len(face) != 2:
            continue
        (e1, _), (e2, _) = face
        if e1 == e2:
            continue
        ends1 = {c for c, _ in d.ends[e1]}
        ends2 = {c for c, _ in d.ends[e2]}
        if ends1 != {c1, c2} or ends2 != {c1, c2}:
            continue
        lv1 = [_is_over(None, s) for _, s in d.ends[e1]]
        lv2 = [_is_over(None, s) for _, s in d.ends[e2]]
        if all(lv1) and not any(lv2):
            return e1, e2
        if all(lv2) and not any(lv1):
            return e2, e1
    return None


def r2_undo(d: LinkDiagram, crossings) -> LinkDiagram:
    c1, c2 = crossings
    for c in (c1, c2):
        if not 0 <= c < d.num_crossings:
            raise MoveError(f"no crossing {c}")
    if bigon_pair(d, c1, c2) is None:
        raise MoveError(f"crossings {c1},{c2} do not bound a removable bigon")
    b = Builder()
    b.load(d, erase={c1, c2})
    return b.finish(boxes=d.twist_boxes)[0]


# --------------------------------------------------------------------------
# Reidemeister III
# --------------------------------------------------------------------------


def r3_triangle(d: LinkDiagram, edge: int, side: str):
    """Data for an R3 move on the triangular face on ``side`` of ``edge``, or ``None``."""
    fi = d.face_of(edge, side)
    face = d.faces[fi]
    if len(face) != 3:
        return None
    arrive = []
    for e, dr in face:
        ci, s = d.ends[e][1] if dr == 1 else d.ends[e][0]
        arrive.append((ci, s))
    xs = [c for c, _ in arrive]
    if len(set(xs)) != 3 or len({e for e, _ in face}) != 3:
        return None
    # line k runs between ports; see module notes in r3
    (x1, s1), (x2, s2), (x3, s3) = arrive
    ports = [
        (x1, (s1 + 1) % 4),
        (x1, (s1 + 2) % 4),
        (x2, (s2 + 1) % 4),
        (x2, (s2 + 2) % 4),
        (x3, (s3 + 1) % 4),
        (x3, (s3 + 2) % 4),
    ]
    # lines: 0 = X1X2 (face dart 2), 1 = X3X1 (dart 1), 2 = X2X3 (dart 3)
    line_edges = [face[1][0], face[0][0], face[2][0]]
    # height of each line at its two old crossings
    over = {
        (0, 1): (s1 + 3) % 2 == 1,  # line0 at X1 uses slots s1-1, s1+1
        (1, 0): s1 % 2 == 1,
        (0, 2): s2 % 2 == 1,  # line0 at X2 uses slots s2, s2+2
        (2, 0): (s2 + 3) % 2 == 1,
        (1, 2): (s3 + 3) % 2 == 1,  # line1 at X3 uses slots s3+1, s3-1
        (2, 1): s3 % 2 == 1,
    }
    heights = {}
    for k in range(3):
        others = [j for j in range(3) if j != k]
        heights[k] = sum(over[(k, j)] for j in others)
    if sorted(heights.values()) != [0, 1, 2]:
        return None
    for i in range(3):
        for j in range(3):
            if i != j and over[(i, j)] != (heights[i] > heights[j]):
                return None
    return {"face": face, "ports": ports, "lines": line_edges, "heights": heights, "crossings": xs}


def r3(d: LinkDiagram, edge: int, side: str) -> LinkDiagram:
    """Slide a strand across the crossing opposite it, on the triangular face at ``edge``/``side``."""
    if not d.has_edge(edge):
        raise MoveError(f"no edge {edge}")
    tri = r3_triangle(d, edge, side)
    if tri is None:
        raise MoveError(f"face at {edge}{side} is not an R3 triangle")
    b = Builder()
    pj = [b.joint() for _ in range(6)]
    overrides = {port: pj[k] for k, port in enumerate(tri["ports"])}
    b.load(d, skip={e for e, _ in tri["face"]}, overrides=overrides)
    tags = [d.component_of[e] for e in tri["lines"]]
    h = tri["heights"]
    new = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        k = b.crossing()
        # counterclockwise: i_in, j_in, i_out, j_out
        if h[i] < h[j]:
            new[(i, j)] = {(i, "in"): 0, (j, "in"): 1, (i, "out"): 2, (j, "out"): 3, "k": k}
        else:
            new[(i, j)] = {(j, "in"): 0, (i, "out"): 1, (j, "out"): 2, (i, "in"): 3, "k": k}
    order = {0: [(0, 2), (0, 1)], 1: [(1, 2), (0, 1)], 2: [(1, 2), (0, 2)]}
    for line in range(3):
        pts = [pj[line]]
        for pair in order[line]:
            x = new[pair]
            pts.append(("x", x["k"], x[(line, "in")]))
            pts.append(("x", x["k"], x[(line, "out")]))
        pts.append(pj[line + 3])
        for u, v in zip(pts[::2], pts[1::2]):
            b.wire(u, v, tags[line], None)
    return b.finish(boxes=d.twist_boxes)[0]


# --------------------------------------------------------------------------
# Bands
# --------------------------------------------------------------------------


def _band_positions(d: LinkDiagram, band: Band):
    """Validate a band's face path; return the chords it draws in each face."""
    items = [("start", band.start)] + [("cross", (e, s)) for e, s, _ in band.crossings] + [
        ("end", band.end)
    ]
    for _, (e, s) in items:
        if not d.has_edge(e):
            raise MoveError(f"band references missing edge {e}")
        if s not in ("L", "R"):
            raise MoveError(f"bad band side {s!r}")
    crossed = [e for e, _, _ in band.crossings]
    if len(set(crossed)) != len(crossed):
        raise MoveError("band not embedded: crosses an edge twice")
    if band.start[0] in crossed or band.end[0] in crossed:
        raise MoveError("band not embedded: crosses its own attaching edge")
    # faces entered/left at each step
    steps = []  # (piece, face_in, face_out) as the band passes each item
    entry = d.face_of(*band.start)
    cur_piece = d.piece_of(band.start[0])
    runs = [cur_piece]
    chords = {}
    pending = (entry, (band.start[0], band.start[1], "start"))
    for e, s, _ in band.crossings:
        f_before = d.face_of(e, s)
        f_after = d.face_of(e, other_side(s))
        pce = d.piece_of(e)
        if pce == cur_piece:
            if f_before != pending[0]:
                raise MoveError(f"band path broken before crossing edge {e}")
            chords.setdefault(f_before, []).append((pending[1], (e, s, "cross")))
        else:
            if pce in runs:
                raise MoveError("band not embedded: revisits a split piece")
            runs.append(pce)
            cur_piece = pce
        pending = (f_after, (e, other_side(s), "cross"))
        steps.append((pce, f_before, f_after))
    e, s = band.end
    if d.piece_of(e) == cur_piece:
        if d.face_of(e, s) != pending[0]:
            raise MoveError("band path does not reach its end edge")
        chords.setdefault(pending[0], []).append((pending[1], (e, s, "end")))
    elif d.piece_of(e) in runs:
        raise MoveError("band not embedded: revisits a split piece")
    for f, cs in chords.items():
        _check_chords(d, f, cs)
    return chords


def _check_chords(d: LinkDiagram, fi: int, chords):
    """Chords drawn inside one face must not interleave."""
    face = d.faces[fi]
    if len(chords) < 2:
        return
    index = {}
    for k, (e, dr) in enumerate(face):
        index[e] = (k, dr)

    def pos(pt):
        e, s, kind = pt
        k, dr = index[e]
        # start cut precedes end cut along the edge's orientation
        sub = {"start": 0, "cross": 1, "end": 2}[kind]
        return (k, sub if dr == 1 else -sub)

    spans = []
    for a, b in chords:
        pa, pb = pos(a), pos(b)
        spans.append((min(pa, pb), max(pa, pb)))
    for i in range(len(spans)):
        for j in range(i + 1, len(spans)):
            (a1, b1), (a2, b2) = spans[i], spans[j]
            if (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1):
                raise MoveError("band not embedded: core crosses itself inside a face")


def band_is_coherent(band: Band) -> bool:
    return (band.start[1] == band.end[1]) != (band.half_twists % 2 == 1)


def _wire_band(b: Builder, d: LinkDiagram, band: Band, tag_l, tag_r):
    """Cut the attaching and crossed edges and draw the band; returns the cut table."""
    cuts = {}
    e_s, side_s = band.start
    e_e, side_e = band.end
    sa, sb = b.joint(), b.joint()
    ea, eb = b.joint(), b.joint()
    if e_s == e_e:
        cuts[e_s] = [(sa, sb), (ea, eb)]
    else:
        cuts[e_s] = [(sa, sb)]
        cuts[e_e] = [(ea, eb)]
    # start: L strand joins the tail-side end when the band leaves from the left
    left, right = (sa, sb) if side_s == "L" else (sb, sa)
    cur_l, cur_r = left, right
    tl, tr = tag_l, tag_r
    for _ in range(abs(band.half_twists)):
        p = b.place((1, 1), (-1, 1), band.half_twists > 0)
        b.wire(cur_l, p[0], tl, None)
        b.wire(cur_r, p[2], tr, None)
        cur_l, cur_r = p[3], p[1]
        tl, tr = tr, tl
    for e, s, band_over in band.crossings:
        xa, xb = b.joint(), b.joint()
        cuts[e] = [(xa, xb)]
        xdir = (-1, 0) if s == "L" else (1, 0)
        pl = b.place((0, 1), xdir, bool(band_over))
        pr = b.place((0, 1), xdir, bool(band_over))
        b.wire(cur_l, pl[0], tl, None)
        b.wire(cur_r, pr[0], tr, None)
        cur_l, cur_r = pl[1], pr[1]
        first, second = (pr, pl) if s == "L" else (pl, pr)
        tx = d.component_of[e]
        b.wire(xa, first[2], tx)
        b.wire(first[3], second[2], tx)
        b.wire(second[3], xb, tx)
    # end: arriving from the left, the R strand joins the tail-side end
    if side_e == "R":
        b.wire(cur_l, ea, tl, None)
        b.wire(cur_r, eb, tr, None)
    else:
        b.wire(cur_r, ea, tr, None)
        b.wire(cur_l, eb, tl, None)
    return cuts


def band_surgery(d: LinkDiagram, band: Band, decorate=None, return_info: bool = False):
    """Surger the link along ``band``.

    Framings are dropped on every component the band touches (callers that
    realise a handleslide pass their own ``decorate``).
    """
    _band_positions(d, band)
    b = Builder()
    ts = d.component_of[band.start[0]]
    te = d.component_of[band.end[0]]
    cuts = _wire_band(b, d, band, ts, te)
    b.load(d, cuts=cuts)
    if decorate is None:
        decorate = _comp_tag_decorate(d, surgered={ts, te})
    out, info = b.finish(decorate, boxes=d.twist_boxes)
    return (out, info) if return_info else out


# --------------------------------------------------------------------------
# Parallel push-off (first half of a handleslide)
# --------------------------------------------------------------------------


def _pushoff(d: LinkDiagram, j: int, side: str, twists: int, avoid):
    """Add a parallel copy of component ``j`` on ``side`` with ``twists`` extra full twists.

    Returns ``(diagram, copy_edge, orig_edge)``: maps from the labels of ``j``'s
    edges in ``d`` to the labels of the copy and the original in the output.
    """
    b = Builder()
    copy_tag = d.num_components
    overrides = {}
    copy_port = {}
    for ci, x in enumerate(d.crossings):
        u_on = d.component_of[x.slots[0]] == j
        o_on = d.component_of[x.slots[1]] == j
        if not (u_on or o_on):
            continue
        # vertical = under strand going north from slot 0; horizontal = over strand
        h_east = x.over_in == 3
        vlines = [("orig", 0)]
        if u_on:
            vlines = [("copy", -1), ("orig", 1)] if side == "L" else [("orig", -1), ("copy", 1)]
        hlines = [("orig", 0)]
        if o_on:
            copy_north = h_east == (side == "L")
            hlines = [("orig", -1), ("copy", 1)] if copy_north else [("copy", -1), ("orig", 1)]
        grid = {}
        hdir = (1, 0) if h_east else (-1, 0)
        for vi, _ in enumerate(vlines):
            for hi, _ in enumerate(hlines):
                grid[(vi, hi)] = b.place((0, 1), hdir, False)
        for vi, (who, _) in enumerate(vlines):
            bottom, top = b.joint(), b.joint()
            pts = [bottom]
            for hi in range(len(hlines)):
                pts += [grid[(vi, hi)][0], grid[(vi, hi)][1]]
            pts.append(top)
            tag = copy_tag if who == "copy" else d.component_of[x.slots[0]]
            for u, v in zip(pts[::2], pts[1::2]):
                b.wire(u, v, tag, None)
            if who == "orig":
                overrides[(ci, 0)] = bottom
                overrides[(ci, 2)] = top
            else:
                copy_port[(ci, 0)] = bottom
                copy_port[(ci, 2)] = top
        order = range(len(vlines)) if h_east else range(len(vlines) - 1, -1, -1)
        for hi, (who, _) in enumerate(hlines):
            start, stop = b.joint(), b.joint()
            pts = [start]
            for vi in order:
                pts += [grid[(vi, hi)][2], grid[(vi, hi)][3]]
            pts.append(stop)
            tag = copy_tag if who == "copy" else d.component_of[x.slots[1]]
            for u, v in zip(pts[::2], pts[1::2]):
                b.wire(u, v, tag, None)
            if who == "orig":
                overrides[(ci, x.over_in)] = start
                overrides[(ci, x.over_out)] = stop
            else:
                copy_port[(ci, x.over_in)] = start
                copy_port[(ci, x.over_out)] = stop

    comp_edges = list(d.components[j].edges)
    free_edges = [e for e in comp_edges if e not in avoid]
    twist_edge = None
    if twists:
        if free_edges:
            twist_edge = free_edges[0]
        elif d.components[j].edges[0] in d.loops or len(comp_edges) >= 1:
            twist_edge = comp_edges[0]
    cuts = {}
    twist_pts = None
    if twist_edge is not None:
        a, c = b.joint(), b.joint()
        cuts[twist_edge] = [(a, c)]
        twist_pts = (a, c)
    b.load(d, cuts=cuts, overrides=overrides)
    copy_wires = {}
    is_loop = comp_edges[0] in d.loops
    for e in comp_edges:
        if is_loop:
            ca, cc = b.joint(), b.joint()
            if e == twist_edge:
                copy_wires[e] = (b.wire(cc, ca, copy_tag), None)
                seg = (ca, cc)
            else:
                copy_wires[e] = (b.wire(ca, cc, copy_tag), b.wire(cc, ca, copy_tag))
            continue
        (c1, s1), (c2, s2) = d.ends[e]
        p, q = copy_port[(c1, s1)], copy_port[(c2, s2)]
        if e == twist_edge:
            ca, cc = b.joint(), b.joint()
            w1 = b.wire(p, ca, copy_tag)
            w2 = b.wire(cc, q, copy_tag)
            copy_wires[e] = (w1, w2)
            seg = (ca, cc)
        else:
            copy_wires[e] = (b.wire(p, q, copy_tag), None)
    if twist_edge is not None:
        a, c = twist_pts
        ca, cc = seg
        if side == "L":
            bottom, top, tags = [ca, a], [cc, c], [copy_tag, j]
        else:
            bottom, top, tags = [a, ca], [c, cc], [j, copy_tag]
        braid_between(b, bottom, top, twist_word(2, 2 * twists), tags)

    def decorate(tags):
        if tags == [copy_tag]:
            return None, False, d.components[j].bracketed
        c = d.components[tags[0]]
        return c.framing, c.dotted, c.bracketed

    out, info = b.finish(decorate, boxes=d.twist_boxes)
    copy_edge = {}
    for e, (w1, w2) in copy_wires.items():
        # the band lands on the last copy segment of an edge
        copy_edge[e] = info.wire_edge[w2 if (w2 is not None and e == twist_edge) else w1]
    orig_edge = dict(info.edge_of_old)
    return out, copy_edge, orig_edge, info


def _translate_band(d: LinkDiagram, band: Band, j: int, side: str, copy_edge, orig_edge) -> Band:
    crossings = []
    for e, s, o in band.crossings:
        if d.component_of[e] == j:
            pair = [(copy_edge[e], s, o), (orig_edge[e], s, o)]
            crossings += pair if s == side else pair[::-1]
        else:
            crossings.append((orig_edge[e], s, o))
    return Band(
        (orig_edge[band.start[0]], band.start[1]),
        (copy_edge[band.end[0]], band.end[1]),
        tuple(crossings),
        band.half_twists,
    )


def _slide(d: LinkDiagram, moving: int, over: int, band: Band, over_framing: int, framing_of):
    if d.twist_boxes:
        raise MoveError("expand twist boxes before sliding")
    if moving == over:
        raise MoveError("cannot slide a component over itself")
    if d.component_of[band.start[0]] != moving:
        raise MoveError("band must start on the moving component")
    if d.component_of[band.end[0]] != over:
        raise MoveError("band must end on the component slid over")
    if band.half_twists:
        raise MoveError("handleslide bands must be untwisted")
    _band_positions(d, band)
    side = band.end[1]
    w2 = writhe(d, over)
    avoid = {band.start[0], band.end[0]} | {e for e, _, _ in band.crossings}
    d1, copy_edge, orig_edge, _ = _pushoff(d, over, side, over_framing - w2, avoid)
    band1 = _translate_band(d, band, over, side, copy_edge, orig_edge)
    lk = linking_number(d, moving, over)
    coherent = band_is_coherent(band)
    new_framing = framing_of(lk, coherent)
    copy_tag = d.num_components

    def decorate(tags):
        if set(tags) == {moving, copy_tag}:
            c = d.components[moving]
            return new_framing, c.dotted, c.bracketed
        (t,) = tags
        c = d.components[t]
        return c.framing, c.dotted, c.bracketed

    return band_surgery(d1, band1, decorate=decorate)


def handleslide(d: LinkDiagram, moving: int, over: int, band: Band) -> LinkDiagram:
    """Slide ``moving`` over ``over`` along ``band``.

    The new framing is ``n1 + n2 + 2 lk`` when the band joins the two
    orientations coherently and ``n1 + n2 - 2 lk`` otherwise.
    """
    c1, c2 = d.components[moving], d.components[over]
    if c1.dotted or c2.dotted:
        raise MoveError("use slide_under_one_handle for dotted circles")
    if not (c1.framing.is_integer and c2.framing.is_integer):
        raise MoveError("handleslide needs integer framings on both components")
    n1, n2 = c1.framing.p, c2.framing.p
    return _slide(d, moving, over, band, n2, lambda lk, coh: n1 + n2 + (2 * lk if coh else -2 * lk))


def slide_under_one_handle(d: LinkDiagram, moving: int, dotted: int, band: Band) -> LinkDiagram:
    """Reroute ``moving`` through the 1-handle ``dotted`` (read as a 0-framed circle)."""
    c1, c2 = d.components[moving], d.components[dotted]
    if not c2.dotted:
        raise MoveError(f"component {dotted} is not dotted")
    if c1.dotted:
        raise MoveError("the moving component must be a 2-handle")
    if not c1.framing.is_integer:
        raise MoveError("moving component needs an integer framing")
    n1 = c1.framing.p
    return _slide(d, moving, dotted, band, 0, lambda lk, coh: n1 + (2 * lk if coh else -2 * lk))


# --------------------------------------------------------------------------
# Deleting components, disks, slam-dunks and cancellation
# --------------------------------------------------------------------------


def delete_components(d: LinkDiagram, comps) -> LinkDiagram:
    comps = set(comps)
    b = Builder()
    erase = b.erase_for_drop(d, comps)
    b.load(d, erase=erase, drop=comps)
    if len(comps) == d.num_components:
        return LinkDiagram()
    keep = [i for i in range(d.num_components) if i not in comps]
    out, _ = b.finish(boxes=_surviving_boxes(d, comps))
    assert out.num_components == len(keep)
    return out


def _surviving_boxes(d, comps):
    boxes = []
    for tb in d.twist_boxes:
        if any(d.component_of[e] in comps for e, _ in tb.anchor):
            raise MoveError("cannot delete a component running through a twist box")
        boxes.append(tb)
    return tuple(boxes)


def sublink(d: LinkDiagram, comps) -> LinkDiagram:
    keep = set(comps)
    return delete_components(d, [i for i in range(d.num_components) if i not in keep])


def crossings_between(d: LinkDiagram, i: int, j: int) -> list:
    out = []
    for ci in range(d.num_crossings):
        a, b = d.strand_components(ci)
        if {a, b} == {i, j} if i != j else (a == b == i):
            out.append(ci)
    return out


def disk_intersections(d: LinkDiagram, circle: int, comp: int) -> tuple:
    """``(algebraic, geometric)`` intersections of ``comp`` with a disk bounded by ``circle``.

    ``circle`` must have no self-crossings; its disk is the flat one on
    whichever side of its projection gives fewer level changes of ``comp``.
    """
    if crossings_between(d, circle, circle):
        raise MoveError("spanning disk needs a crossingless projection of the circle")
    if d.twist_boxes:
        raise MoveError("expand twist boxes first")
    alg = linking_number(d, circle, comp) if circle != comp else 0
    events = []
    for e in d.components[comp].edges:
        if e in d.loops:
            break
        ci, s = d.ends[e][1]
        x = d.crossings[ci]
        other = x.slots[(s + 1) % 4]
        if d.component_of[other] != circle:
            continue
        # orientation of the circle through this crossing
        cs = (s + 1) % 4 if d.ends[x.slots[(s + 1) % 4]][1] == (ci, (s + 1) % 4) else (s + 3) % 4
        from_left = (cs + 3) % 4 == s
        events.append((from_left, s % 2 == 1))
    counts = {True: 0, False: 0}
    n = len(events)
    for k in range(n):
        side_after = not events[k][0]  # crossing from the left lands on the right
        lvl_in, lvl_out = events[k][1], events[(k + 1) % n][1]
        if lvl_in != lvl_out:
            counts[side_after] += 1
    geo = min(counts.values()) if n else 0
    return alg, geo


def slam_dunk(d: LinkDiagram, meridian: int, target: int) -> LinkDiagram:
    """Remove a meridian of slope ``r`` around an integer-framed ``target`` of slope ``n``.

    The target's new slope is ``n - 1/r``; slope ``inf`` deletes it.
    """
    m, t = d.components[meridian], d.components[target]
    if not (m.bracketed and t.bracketed):
        raise MoveError("slam-dunk needs bracketed (surgery) coefficients on both components")
    if meridian == target:
        raise MoveError("meridian and target must differ")
    if crossings_between(d, meridian, meridian):
        raise MoveError("meridian must be a crossingless circle")
    mine = [ci for ci in range(d.num_crossings) if meridian in d.strand_components(ci)]
    if len(mine) != 2 or any(set(d.strand_components(ci)) != {meridian, target} for ci in mine):
        raise MoveError("meridian must bound a disk punctured once by the target and nothing else")
    levels = sorted(d.component_of[d.crossings[ci].slots[1]] == meridian for ci in mine)
    if levels != [False, True]:
        raise MoveError("meridian is not linked once with the target")
    if m.framing.is_none or t.framing.is_none:
        raise MoveError("slam-dunk needs surgery slopes on both components")
    if m.framing.is_infinite:
        new = t.framing
    else:
        if not t.framing.is_integer:
            raise MoveError("target slope must be an integer")
        r = m.framing.value
        new = Framing.infinity() if r == 0 else Framing.from_value(t.framing.p - 1 / Fraction(r))
    without = delete_components(d, [meridian])
    idx = target - (1 if meridian < target else 0)
    if new.is_infinite:
        return delete_components(without, [idx])
    comps = list(without.components)
    from dataclasses import replace

    comps[idx] = replace(comps[idx], framing=new)
    return replace(without, components=tuple(comps))


def cancel_hopf_pair(d: LinkDiagram, dotted: int, handle2: int, trust: str = "verified") -> LinkDiagram:
    """Delete a dotted circle and a 2-handle running once through it."""
    if not d.components[dotted].dotted:
        raise MoveError(f"component {dotted} is not dotted")
    if d.components[handle2].dotted:
        raise MoveError("the partner must be a 2-handle")
    if d.twist_boxes:
        raise MoveError("expand twist boxes first")
    alg, geo = disk_intersections(d, dotted, handle2)
    if trust == "verified":
        dot_x = [ci for ci in range(d.num_crossings) if dotted in d.strand_components(ci)]
        if geo != 1 or abs(alg) != 1:
            raise MoveError(f"2-handle meets the dotted disk {geo} times (need exactly 1)")
        if any(set(d.strand_components(ci)) != {dotted, handle2} for ci in dot_x):
            raise MoveError("dotted circle is pierced by another component")
        for ci in range(d.num_crossings):
            comps = set(d.strand_components(ci))
            if handle2 in comps and not comps <= {dotted, handle2}:
                raise MoveError("pair is not split from the rest of the diagram")
    else:
        if abs(alg) != 1:
            raise MoveError("asserted cancellation still needs linking number +-1")
    return delete_components(d, [dotted, handle2])


def ribbon_move(d: LinkDiagram, dotted: int, pattern: dict):
    """Ribbon move on a dotted circle.

    ``pattern`` is ``{"kind": "R2", ...r2 args}`` for the built-in (verified)
    finger move of one strand across the dotted circle, or
    ``{"kind": "replace", "diagram": LinkDiagram}`` for an asserted rewrite.
    Returns ``(diagram, trust)``.
    """
    if not d.components[dotted].dotted:
        raise MoveError(f"component {dotted} is not dotted")
    kind = pattern.get("kind")
    if kind == "R2":
        e1, e2 = pattern["edge1"], pattern["edge2"]
        if dotted not in (d.component_of[e1], d.component_of[e2]):
            raise MoveError("built-in ribbon move must involve the dotted circle")
        if pattern.get("undo"):
            return r2_undo(d, pattern["crossings"]), "verified"
        return r2_do(d, e1, pattern["side1"], e2, pattern["side2"], pattern.get("over", True)), "verified"
    if kind == "R2-undo":
        c1, c2 = pattern["crossings"]
        comps = set(d.strand_components(c1)) | set(d.strand_components(c2))
        if dotted not in comps:
            raise MoveError("built-in ribbon move must involve the dotted circle")
        return r2_undo(d, (c1, c2)), "verified"
    if kind == "replace":
        from .homology import h1_of_surgery

        new = pattern["diagram"]
        if new.num_components != d.num_components:
            raise MoveError("ribbon rewrite changed the component count")
        for a, c in zip(d.components, new.components):
            if (a.dotted, a.bracketed, str(a.framing)) != (c.dotted, c.bracketed, str(c.framing)):
                raise MoveError("ribbon rewrite changed component decorations")
        try:
            same = h1_of_surgery(d) == h1_of_surgery(new)
        except DiagramValidationError:
            same = True
        if not same:
            raise MoveError("ribbon rewrite changed first homology")
        return new, "asserted"
    raise MoveError(f"unknown ribbon pattern {kind!r}")
