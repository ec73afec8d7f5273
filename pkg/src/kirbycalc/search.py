"""Reidemeister simplification, unlink certification and ribbon-band search."""

from __future__ import annotations

import heapq
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import moves as mv
from .concordance import alexander_polynomial, fox_milnor, seifert_surface, signature
from .diagram import Band, DiagramError, LinkDiagram, expand_twist_boxes, linking_matrix, serialize_diagram
from .script import Move, MoveScript, replay


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2000
    inflation: int = 4
    seconds: float | None = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.max_nodes <= 0 or self.inflation < 0 or self.workers <= 0:
            raise ValueError("search limits must be positive")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("time limit must be positive")


def _key(d: LinkDiagram) -> str:
    return serialize_diagram(d, canonical=True)


# --------------------------------------------------------------------------
# Simplification
# --------------------------------------------------------------------------


def _neighbours(d: LinkDiagram, uphill: bool):
    """Yield ``(Move, diagram)`` for every applicable R-move, downhill first."""
    for ci in range(d.num_crossings):
        if mv.kink_edge(d, ci) is not None:
            try:
                yield Move("R1", (("crossing", ci),), "undo"), mv.r1_undo(d, ci)
            except DiagramError:
                pass
    seen = set()
    for face in d.faces:
        if len(face) != 2:
            continue
        ends = {c for e, _ in face for c, _ in d.ends[e]}
        if len(ends) != 2:
            continue
        pair = tuple(sorted(ends))
        if pair in seen or mv.bigon_pair(d, *pair) is None:
            continue
        seen.add(pair)
        yield Move("R2", (("crossings", pair),), "undo"), mv.r2_undo(d, pair)
    for face in d.faces:
        if len(face) != 3:
            continue
        e, dr = face[0]
        side = "L" if dr == 1 else "R"
        if mv.r3_triangle(d, e, side) is not None:
            yield Move("R3", (("edge", e), ("side", side))), mv.r3(d, e, side)
    if not uphill:
        return
    for face in d.faces:
        darts = sorted(set(face))
        for i, (e1, d1) in enumerate(darts):
            for e2, d2 in darts[i + 1 :]:
                if e1 == e2:
                    continue
                s1, s2 = ("L" if d1 == 1 else "R"), ("L" if d2 == 1 else "R")
                for over in (1, 0):
                    params = (("edge1", e1), ("side1", s1), ("edge2", e2), ("side2", s2), ("over", over))
                    try:
                        out = mv.r2_do(d, e1, s1, e2, s2, bool(over))
                    except DiagramError:
                        continue
                    yield Move("R2", params, "do"), out


def simplify(d: LinkDiagram, budget: SearchBudget | None = None, target: int = 0) -> tuple:
    """Best-first Reidemeister search; returns ``(diagram, MoveScript)``.

    Nodes are ordered by crossing number, then depth, then a seeded
    tie-break; canonical forms prevent revisits.  The search stops once a
    diagram with at most ``target`` crossings appears.  The best diagram
    found never has more crossings than the input.
    """
    budget = budget or SearchBudget()
    d = expand_twist_boxes(d)
    rng = random.Random(budget.seed)
    limit = d.num_crossings + budget.inflation
    nodes = [(d, None, None)]
    heap = [(d.num_crossings, 0, 0.0, 0)]
    seen = {_key(d)}
    best = 0
    expanded = 0
    deadline = time.monotonic() + budget.seconds if budget.seconds else None
    while heap and expanded < budget.max_nodes:
        if deadline and time.monotonic() > deadline:
            break
        c, depth, _, idx = heapq.heappop(heap)
        cur = nodes[idx][0]
        if nodes[best][0].num_crossings <= target:
            break
        expanded += 1
        for move, out in _neighbours(cur, cur.num_crossings + 2 <= limit):
            k = _key(out)
            if k in seen:
                continue
            seen.add(k)
            nodes.append((out, idx, move))
            j = len(nodes) - 1
            if out.num_crossings < nodes[best][0].num_crossings:
                best = j
            heapq.heappush(heap, (out.num_crossings, depth + 1, rng.random(), j))
    steps = []
    j = best
    while nodes[j][1] is not None:
        steps.append(nodes[j][2])
        j = nodes[j][1]
    steps.reverse()
    final = nodes[best][0]
    return final, MoveScript(d, tuple(steps), final)


@dataclass
class Certification:
    status: str
    script: MoveScript | None = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "certificate"


def _knot_alexander(d: LinkDiagram):
    _, V = seifert_surface(d)
    return alexander_polynomial(V)


def certify_unknot(d: LinkDiagram, budget: SearchBudget | None = None) -> Certification:
    if d.num_components != 1:
        raise ValueError("certify_unknot needs a knot diagram")
    delta = _knot_alexander(d)
    if delta != 1:
        return Certification("not-unknot", None, f"Alexander polynomial {delta} != 1")
    final, script = simplify(d, budget)
    if final.num_crossings == 0:
        return Certification("certificate", script)
    return Certification("inconclusive", script, f"search stopped at {final.num_crossings} crossings")


def unlink_obstruction(d: LinkDiagram) -> str:
    """A computed invariant showing ``d`` is not an unlink, or ``""``."""
    lk = linking_matrix(d)
    n = d.num_components
    for i in range(n):
        for j in range(i + 1, n):
            if lk[i][j]:
                return f"lk({i},{j}) = {lk[i][j]}"
    for i in range(n):
        delta = _knot_alexander(mv.sublink(d, [i]))
        if delta != 1:
            return f"component {i} has Alexander polynomial {delta}"
    return ""


def certify_unlink(d: LinkDiagram, n: int | None = None, budget: SearchBudget | None = None) -> Certification:
    n = d.num_components if n is None else n
    if d.num_components != n:
        return Certification("not-unlink", None, f"diagram has {d.num_components} components, not {n}")
    why = unlink_obstruction(d)
    if why:
        return Certification("not-unlink", None, why)
    final, script = simplify(d, budget)
    if final.num_crossings == 0 and len(final.loops) == n:
        return Certification("certificate", script)
    return Certification("inconclusive", script, f"search stopped at {final.num_crossings} crossings")


# --------------------------------------------------------------------------
# Band search
# --------------------------------------------------------------------------


@dataclass
class BandCandidate:
    band: Band
    diagram: LinkDiagram
    status: str
    certificate: MoveScript | None = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status == "certified"


@dataclass
class BandSearchReport:
    candidates: list
    stats: dict = field(default_factory=dict)
    obstruction: str = ""
    invariants: dict = field(default_factory=dict)
    seconds: float = 0.0

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def certified(self) -> list:
        return [c for c in self.candidates if c.certified]


def _side(dr: int) -> str:
    return "L" if dr == 1 else "R"


def _other(side: str) -> str:
    return "R" if side == "L" else "L"


def band_order_key(band: Band) -> tuple:
    return (len(band.crossings), band.start, band.end, abs(band.half_twists), band.half_twists, band.crossings)


def enumerate_bands(d: LinkDiagram, max_length: int = 2, max_twists: int = 1) -> list:
    """Coherent bands with at most ``max_length`` edge crossings, in canonical order.

    A band path visits each face at most once and crosses each edge at most once.
    """
    if d.num_components != 1:
        raise ValueError("band enumeration needs a knot diagram")
    darts = []
    if d.num_crossings == 0:
        darts = [(d.loops[0], 1), (d.loops[0], -1)]
    else:
        for face in d.faces:
            darts += list(face)
    out = []
    for e0, dr0 in sorted(set(darts)):
        s0 = _side(dr0)
        f0 = d.face_of(e0, s0)
        # depth-first over face paths
        stack = [(f0, (), frozenset([f0]))]
        while stack:
            f, path, visited = stack.pop()
            crossed = {x for x, _, _ in path}
            for e, dr in sorted(set(d.faces[f])):
                s = _side(dr)
                if e not in crossed and (e, s) >= (e0, s0):
                    for t in range(-max_twists, max_twists + 1):
                        b = Band((e0, s0), (e, s), path, t)
                        if mv.band_is_coherent(b):
                            out.append(b)
                if len(path) < max_length and e != e0 and e not in crossed:
                    g = d.face_of(e, _other(s))
                    if g in visited:
                        continue
                    for over in (True, False):
                        stack.append((g, path + ((e, s, over),), visited | {g}))
    uniq = {str(b): b for b in out}
    return sorted(uniq.values(), key=band_order_key)


def _evaluate(args) -> tuple:
    d, band, budget = args
    try:
        res = mv.band_surgery(d, band)
    except DiagramError as exc:
        return "invalid", None, str(exc), None
    if res.num_components != 2:
        return "components", res, f"{res.num_components} components", None
    lk = linking_matrix(res)[0][1]
    if lk:
        return "linking", res, f"lk = {lk}", None
    for i in range(2):
        delta = _knot_alexander(mv.sublink(res, [i]))
        if delta != 1:
            return "alexander", res, f"component {i} has Alexander polynomial {delta}", None
    cert = certify_unlink(res, 2, budget)
    if cert.certified:
        return "certified", res, "", cert.script
    return "uncertified", res, cert.reason, None


def band_search(
    k: LinkDiagram,
    budget: SearchBudget | None = None,
    max_band_length: int = 1,
    max_twists: int = 1,
) -> BandSearchReport:
    """Search single ribbon bands surgering ``k`` to a 2-component unlink."""
    budget = budget or SearchBudget()
    if k.num_components != 1:
        raise ValueError("band search needs a knot diagram")
    t0 = time.monotonic()
    k = expand_twist_boxes(k)
    _, V = seifert_surface(k)
    delta = alexander_polynomial(V)
    sig = signature(V)
    fm = fox_milnor(delta)
    invariants = {"alexander": str(delta), "signature": sig, "fox_milnor": str(fm) if fm is not None else "fail"}
    if sig != 0 or fm is None:
        why = f"signature {sig}" if sig != 0 else f"Alexander polynomial {delta} is not f(t)f(t^-1)"
        return BandSearchReport([], {"bands": 0}, f"slice obstruction: {why}", invariants, time.monotonic() - t0)
    bands = enumerate_bands(k, max_band_length, max_twists)
    jobs = [(k, b, budget) for b in bands]
    if budget.workers > 1:
        with ProcessPoolExecutor(max_workers=budget.workers) as pool:
            results = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * budget.workers))))
    else:
        results = [_evaluate(j) for j in jobs]
    stats = {"bands": len(bands)}
    certified, survivors = [], []
    for b, (status, res, reason, script) in zip(bands, results):
        stats[status] = stats.get(status, 0) + 1
        if status == "certified":
            certified.append(BandCandidate(b, res, "certified", script))
        elif status == "uncertified":
            survivors.append(BandCandidate(b, res, "uncertified", None, reason))
    return BandSearchReport(certified + survivors, stats, "", invariants, time.monotonic() - t0)


def verify_candidate(k: LinkDiagram, c: BandCandidate) -> bool:
    """Replay the band surgery and its certificate from scratch."""
    res = mv.band_surgery(expand_twist_boxes(k), c.band)
    if c.certificate is None:
        return False
    rep = replay(c.certificate, res)
    return rep.status == "verified" and rep.final.num_crossings == 0 and len(rep.final.loops) == 2
