"""Diagram data structure: parsing, validation, canonical forms, constructors."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from kirbycalc.diagram import (
    Band,
    Crossing,
    DiagramSyntaxError,
    DiagramValidationError,
    Framing,
    LinkDiagram,
    canonical_form,
    closed_braid,
    diagrams_isomorphic,
    disjoint_union,
    expand_twist_boxes,
    from_pd,
    linking_matrix,
    linking_number,
    parse_diagram,
    serialize_diagram,
    unlink,
    with_decorations,
    writhe,
)
from kirbycalc.seifert import seifert_circles

from gen import braid_words
from helpers import BUNDLED, bundled

TREFOIL_TEXT = """kirbycalc-diagram v1
# right-handed trefoil
X[3,1,4,6,+1]
X[5,3,6,2,+1]
X[1,5,2,4,+1]
comp 0: arcs=[1,2,3,4,5,6] framing=none dotted=0 bracketed=0
"""


def relabel(d: LinkDiagram, rng: random.Random) -> LinkDiagram:
    labels = d.edges + list(d.loops)
    perm = dict(zip(labels, rng.sample(range(100, 100 + len(labels)), len(labels))))
    crossings = [Crossing(tuple(perm[e] for e in x.slots), x.sign) for x in d.crossings]
    rng.shuffle(crossings)
    from dataclasses import replace

    comps = [replace(c, edges=tuple(perm[e] for e in c.edges)) for c in d.components]
    return LinkDiagram(tuple(crossings), tuple(perm[e] for e in d.loops), tuple(comps))


def test_parse_trefoil():
    d = parse_diagram(TREFOIL_TEXT)
    assert d.num_crossings == 3 and d.num_components == 1
    assert writhe(d, 0) == 3
    assert len(d.faces) == 5


def test_round_trip_is_bit_exact():
    for path in sorted(BUNDLED.glob("*.kd")):
        text = path.read_text()
        assert serialize_diagram(parse_diagram(text)) == text, path.name


def test_framing_parse_and_print():
    for text in ("0", "-3", "5/2", "-1/3", "inf", "none"):
        assert str(Framing.parse(text)) == text
    assert Framing.parse("4/2") == Framing.integer(2)
    assert Framing.from_value(float("inf")).is_infinite


def test_syntax_error_reports_position():
    bad = TREFOIL_TEXT.replace("X[5,3,6,2,+1]", "X[5,3,6,2,+1")
    with pytest.raises(DiagramSyntaxError) as exc:
        parse_diagram(bad)
    assert exc.value.line == 4
    assert "line 4" in str(exc.value)


def test_inconsistent_orientation_rejected():
    bad = TREFOIL_TEXT.replace("X[1,5,2,4,+1]", "X[1,5,2,4,-1]")
    with pytest.raises(DiagramValidationError):
        parse_diagram(bad)


def test_non_planar_rotation_system_rejected():
    # three crossings with the trefoil's edge pairings but one rotation flipped
    bad = TREFOIL_TEXT.replace("X[5,3,6,2,+1]", "X[5,2,6,3,-1]")
    with pytest.raises(DiagramValidationError, match="non-planar"):
        parse_diagram(bad)


def test_dotted_component_cannot_carry_framing():
    text = "kirbycalc-diagram v1\nO[1]\ncomp 0: arcs=[1] framing=2 dotted=1 bracketed=1\n"
    with pytest.raises(DiagramValidationError, match="dotted"):
        parse_diagram(text)


def test_from_pd_agrees_with_text():
    d = from_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)])
    assert diagrams_isomorphic(d, parse_diagram(TREFOIL_TEXT))


def test_whitehead_link_has_zero_linking():
    d = bundled("whitehead")
    assert d.num_components == 2 and d.num_crossings == 5
    assert linking_number(d, 0, 1) == 0


def test_hopf_linking():
    d = bundled("hopf")
    assert abs(linking_number(d, 0, 1)) == 1
    with pytest.raises(ValueError):
        linking_number(d, 0, 0)


def test_twist_box_expansion():
    text = (
        "kirbycalc-diagram v1\nO[1]\nO[2]\nT[2,1,1R/2L]\n"
        "comp 0: arcs=[1] framing=0 dotted=0 bracketed=1\n"
        "comp 1: arcs=[2] framing=0 dotted=0 bracketed=1\n"
    )
    d = parse_diagram(text)
    assert serialize_diagram(d) == text
    e = expand_twist_boxes(d)
    assert not e.twist_boxes and e.num_crossings == 2
    assert linking_matrix(e) == linking_matrix(d)
    assert abs(linking_number(e, 0, 1)) == 1


def test_with_decorations_and_union():
    d = with_decorations(unlink(1), 0, framing=3, bracketed=True)
    assert d.components[0].framing == Framing.integer(3)
    u = disjoint_union(bundled("trefoil"), d)
    assert u.num_components == 2 and u.num_crossings == 3
    assert linking_number(u, 0, 1) == 0


def test_band_text_round_trip():
    b = Band((3, "L"), (7, "R"), ((5, "L", True), (9, "R", False)), -1)
    assert Band.parse(str(b)) == b


@settings(max_examples=60, deadline=None)
@given(braid_words(max_strands=4, max_len=8), st.randoms(use_true_random=False))
def test_canonical_form_ignores_labels(bw, rng):
    n, w = bw
    d = closed_braid(w, n)
    r = relabel(d, rng)
    assert diagrams_isomorphic(d, r)
    assert serialize_diagram(canonical_form(r)) == serialize_diagram(d, canonical=True)
    assert serialize_diagram(parse_diagram(serialize_diagram(r))) == serialize_diagram(r)


@settings(max_examples=60, deadline=None)
@given(braid_words(max_strands=4, max_len=8))
def test_closed_braid_structure(bw):
    n, w = bw
    d = closed_braid(w, n)
    assert d.num_crossings == len(w)
    assert len(seifert_circles(d)) == n
    lk = linking_matrix(d)
    assert sum(x.sign for x in d.crossings) == sum(lk[i][i] for i in range(d.num_components)) + sum(
        2 * lk[i][j] for i in range(d.num_components) for j in range(i + 1, d.num_components)
    )


def test_mirror_is_not_isomorphic():
    a = closed_braid([1, 1, 1], 2)
    b = closed_braid([-1, -1, -1], 2)
    assert not diagrams_isomorphic(a, b)
