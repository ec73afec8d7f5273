"""Seifert circles, Vogel's braiding moves and braid-word extraction."""

from __future__ import annotations

from .diagram import DiagramValidationError, LinkDiagram


def smoothing_partner(x, s: int) -> int:
    """Outgoing slot joined to incoming slot ``s`` by the oriented smoothing."""
    if x.sign == 1:
        return {0: 1, 3: 2}[s]
    return {0: 3, 1: 2}[s]


def seifert_circles(d: LinkDiagram) -> list:
    """Seifert circles as lists of edges, in traversal order."""
    circles = []
    seen = set()
    for e0 in d.edges:
        if e0 in seen:
            continue
        circ = []
        e = e0
        while e not in seen:
            seen.add(e)
            circ.append(e)
            ci, s = d.ends[e][1]
            x = d.crossings[ci]
            e = x.slots[smoothing_partner(x, s)]
        circles.append(circ)
    for lp in d.loops:
        circles.append([lp])
    return circles


def _circle_index(d: LinkDiagram, circles) -> dict:
    return {e: i for i, c in enumerate(circles) for e in c}


def vogel_defect(d: LinkDiagram):
    """A face holding equally oriented edges of two distinct Seifert circles, as an R2 location."""
    circles = seifert_circles(d)
    where = _circle_index(d, circles)
    for face in d.faces:
        by_dir = {1: {}, -1: {}}
        for e, dr in face:
            by_dir[dr].setdefault(where[e], e)
        for dr in (1, -1):
            if len(by_dir[dr]) >= 2:
                (c1, e1), (c2, e2) = sorted(by_dir[dr].items())[:2]
                side = "L" if dr == 1 else "R"
                return e1, side, e2, side
    return None


def vogel_braid(d: LinkDiagram, max_moves: int = 1000) -> tuple:
    """Apply Vogel moves until braided; returns ``(diagram, moves)``."""
    from .moves import r2_do

    steps = []
    s0 = len(seifert_circles(d))
    while True:
        loc = vogel_defect(d)
        if loc is None:
            return d, steps
        if len(steps) >= max_moves:
            raise DiagramValidationError("Vogel braiding did not terminate")
        e1, s1, e2, s2 = loc
        d = r2_do(d, e1, s1, e2, s2, True)
        steps.append(loc)
        if len(seifert_circles(d)) != s0:
            raise AssertionError("Vogel move changed the number of Seifert circles")


def braid_word(d: LinkDiagram) -> tuple:
    """Read ``(strands, word)`` from a braided connected diagram."""
    circles = seifert_circles(d)
    n = len(circles)
    if d.num_crossings == 0:
        return n, []
    where = _circle_index(d, circles)
    # crossings met along each circle
    seq = []
    for circ in circles:
        seq.append([d.ends[e][1][0] for e in circ])
    touching = {}
    for i, s in enumerate(seq):
        for c in s:
            touching.setdefault(c, []).append(i)
    adj = {i: set() for i in range(n)}
    for c, cs in touching.items():
        if len(cs) != 2 or cs[0] == cs[1]:
            raise DiagramValidationError("diagram is not braided")
        a, b = cs
        adj[a].add(b)
        adj[b].add(a)
    ends = sorted(i for i in range(n) if len(adj[i]) <= 1)
    if any(len(v) > 2 for v in adj.values()) or (n > 1 and len(ends) != 2):
        raise DiagramValidationError("Seifert circles are not nested in a chain")
    level = {}
    cur, prev = ends[0], None
    for k in range(n):
        level[cur] = k
        nxt = [j for j in adj[cur] if j != prev]
        prev, cur = cur, (nxt[0] if nxt else None)
    order = sorted(range(n), key=level.get)
    gen = {c: min(level[a] for a in cs) + 1 for c, cs in touching.items()}
    # cut each circle so that the cuts line up along one ray
    linear = {}
    first = order[0]
    linear[first] = seq[first]
    for k in range(1, n):
        circ = order[k]
        below = [c for c in linear[order[k - 1]] if gen[c] == k]
        head = below[0]
        s = seq[circ]
        i = s.index(head)
        linear[circ] = s[i:] + s[:i]
    # merge the chains
    succ = {c: set() for c in gen}
    indeg = {c: 0 for c in gen}
    for circ in order:
        s = linear[circ]
        for a, b in zip(s, s[1:]):
            if b not in succ[a]:
                succ[a].add(b)
                indeg[b] += 1
    ready = sorted((gen[c], c) for c in gen if indeg[c] == 0)
    out = []
    import heapq

    heapq.heapify(ready)
    while ready:
        _, c = heapq.heappop(ready)
        out.append(c)
        for b in succ[c]:
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(ready, (gen[b], b))
    if len(out) != len(gen):
        raise DiagramValidationError("inconsistent crossing order around the braid axis")
    word = [gen[c] * d.crossings[c].sign for c in out]
    return n, word
