"""Regenerate the bundled diagram corpus and the cancellation demo script.

Run from the repository root:  python3 demos/make_corpus.py
"""

from pathlib import Path

from kirbycalc.diagram import (
    Band,
    closed_braid,
    disjoint_union,
    from_pd,
    serialize_diagram,
    unlink,
    with_decorations,
)
from kirbycalc.script import Move, MoveScript, apply_move, replay
from kirbycalc.search import SearchBudget, simplify

CORPUS = Path(__file__).resolve().parent.parent / "src" / "kirbycalc" / "corpus"

WHITEHEAD_PD = [(6, 1, 7, 2), (10, 7, 5, 8), (4, 5, 1, 6), (2, 10, 3, 9), (8, 4, 9, 3)]


def diagrams() -> dict:
    return {
        "unknot": unlink(1),
        "unknot-0": unlink(1, framings=[0], bracketed=True),
        "trefoil": closed_braid([1, 1, 1]),
        "trefoil-0": closed_braid([1, 1, 1], framings=[0], bracketed=True),
        "trefoil-1": closed_braid([1, 1, 1], framings=[1], bracketed=True),
        "figure-eight": closed_braid([1, -2, 1, -2], 3),
        "hopf": closed_braid([1, 1]),
        "hopf-0-0": closed_braid([1, 1], framings=[0, 0], bracketed=True),
        "whitehead": from_pd(WHITEHEAD_PD),
        "square-knot": closed_braid([1, 1, 1, -2, -2, -2], 3),
        "unlink-2-0": unlink(2, framings=[0, 0], bracketed=True),
        # R is the middle component; B and G are its meridians
        "rbg-meridional": closed_braid([1, 1, 2, 2], 3, framings=[0, 1, 0], bracketed=True),
    }


def cancellation_start():
    chain = closed_braid([1, 1], framings=[1, 0], bracketed=True)
    pair = with_decorations(closed_braid([1, 1], framings=[None, 0], bracketed=True), 0, dotted=True)
    return disjoint_union(chain, pair)


def cancellation_script():
    """R-move warm-up, a slide, a search-found cleanup, slam-dunk, relabel, cancel."""
    d0 = cancellation_start()
    steps = []
    d = d0

    def do(m):
        nonlocal d
        d, _, _ = apply_move(d, m)
        steps.append(m)

    e = d.edges[0]
    do(Move("R1", (("edge", e), ("side", "L"), ("sign", 1)), "do"))
    do(Move("R1", (("crossing", next(i for i in range(d.num_crossings) if _kink(d, i))),), "undo"))
    a, b = d.components[0].edges[0], d.components[3].edges[0]
    do(Move("R2", (("edge1", a), ("side1", "R"), ("edge2", b), ("side2", "R"), ("over", 1)), "do"))
    pair = _bigon(d)
    do(Move("R2", (("crossings", pair),), "undo"))
    band = _slide_band(d)
    do(Move("Slide", (("moving", 0), ("over", 1), ("band", band))))
    _, cleanup = simplify(d, SearchBudget(max_nodes=4000), target=4)
    for m in cleanup.steps:
        do(m)
    do(Move("SlamDunk", (("meridian", 1), ("target", 0))))
    do(Move("Relabel", ()))
    dot = next(i for i, c in enumerate(d.components) if c.dotted)
    do(Move("CancelHopfPair", (("dotted", dot), ("handle2", 1 - dot))))
    return d0, MoveScript(d0, tuple(steps), None, True)


def _kink(d, ci):
    from kirbycalc.moves import kink_edge

    return kink_edge(d, ci) is not None


def _bigon(d):
    from kirbycalc.moves import bigon_pair

    for i in range(d.num_crossings):
        for j in range(i + 1, d.num_crossings):
            if bigon_pair(d, i, j):
                return (i, j)
    raise RuntimeError("no bigon")


def _slide_band(d):
    for e0 in d.components[0].edges:
        for e1 in d.components[1].edges:
            for s0 in "LR":
                for s1 in "LR":
                    if d.face_of(e0, s0) == d.face_of(e1, s1):
                        return Band((e0, s0), (e1, s1))
    raise RuntimeError("no band")


def main():
    CORPUS.mkdir(parents=True, exist_ok=True)
    for name, d in diagrams().items():
        (CORPUS / f"{name}.kd").write_text(serialize_diagram(d))
    d0, script = cancellation_script()
    (CORPUS / "cancellation-demo.kd").write_text(serialize_diagram(d0))
    text = script.to_text().replace("kirbycalc-script v1\n", "kirbycalc-script v1\ninitial: cancellation-demo.kd\n", 1)
    (CORPUS / "cancellation-demo.ks").write_text(text)
    rep = replay(script)
    print(f"{len(script.steps)} steps, replay {rep.status}, final {rep.final_match}")


if __name__ == "__main__":
    main()
