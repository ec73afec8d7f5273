"""Reidemeister moves, band surgery, slides, slam-dunks and cancellations."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
import hypothesis.strategies as st

from kirbycalc import moves as mv
from kirbycalc.diagram import (
    Band,
    DiagramError,
    Framing,
    closed_braid,
    diagrams_isomorphic,
    disjoint_union,
    linking_matrix,
    unlink,
    with_decorations,
    writhe,
)
from kirbycalc.homology import h1_of_surgery

from gen import braid_words, knot_words, random_band
from helpers import bundled
from oracles import fox_alexander


def _darts(d):
    return [(e, s) for e in d.edges + list(d.loops) for s in "LR"]


def _face_pairs(d):
    out = []
    for face in d.faces:
        darts = sorted(set(face))
        for i, (e1, d1) in enumerate(darts):
            for e2, d2 in darts[i + 1 :]:
                if e1 != e2:
                    out.append((e1, "L" if d1 == 1 else "R", e2, "L" if d2 == 1 else "R"))
    return out


@settings(max_examples=80, deadline=None)
@given(braid_words(max_len=7), st.data())
def test_r1_round_trip(bw, data):
    n, w = bw
    d = closed_braid(w, n)
    e, side = data.draw(st.sampled_from(_darts(d)))
    sign = data.draw(st.sampled_from([1, -1]))
    out = mv.r1_do(d, e, side, sign)
    assert out.num_crossings == d.num_crossings + 1
    c = d.component_of[e]
    assert writhe(out, c) == writhe(d, c) + sign
    assert linking_matrix(out)[c][c] == linking_matrix(d)[c][c] + sign
    kinks = [ci for ci in range(out.num_crossings) if mv.kink_edge(out, ci) is not None]
    assert any(diagrams_isomorphic(mv.r1_undo(out, ci), d) for ci in kinks)


@settings(max_examples=80, deadline=None)
@given(braid_words(max_len=6, min_len=1), st.data())
def test_r2_round_trip(bw, data):
    n, w = bw
    d = closed_braid(w, n)
    pairs = _face_pairs(d)
    assume(pairs)
    e1, s1, e2, s2 = data.draw(st.sampled_from(pairs))
    over = data.draw(st.booleans())
    try:
        out = mv.r2_do(d, e1, s1, e2, s2, over)
    except DiagramError:
        assume(False)
    assert out.num_crossings == d.num_crossings + 2
    assert linking_matrix(out) == linking_matrix(d)
    bigons = {
        tuple(sorted({c for e, _ in f for c, _ in out.ends[e]}))
        for f in out.faces
        if len(f) == 2
    }
    back = [mv.r2_undo(out, p) for p in bigons if len(p) == 2 and mv.bigon_pair(out, *p)]
    assert any(diagrams_isomorphic(b, d) for b in back)


@settings(max_examples=40, deadline=None)
@given(knot_words(max_strands=4, max_len=6), st.data())
def test_reidemeister_moves_preserve_alexander_oracle(kw, data):
    n, w = kw
    d = closed_braid(w, n)
    base = fox_alexander(d)
    out = d
    for _ in range(data.draw(st.integers(1, 3))):
        triangles = [(e, "L" if dr == 1 else "R") for f in out.faces if len(f) == 3 for e, dr in f[:1]]
        triangles = [t for t in triangles if mv.r3_triangle(out, *t) is not None]
        pairs = _face_pairs(out)
        choice = data.draw(st.sampled_from(["r1", "r2", "r3"] if triangles else ["r1", "r2"]))
        if choice == "r1":
            e, s = data.draw(st.sampled_from(_darts(out)))
            out = mv.r1_do(out, e, s, data.draw(st.sampled_from([1, -1])))
        elif choice == "r2" and pairs:
            e1, s1, e2, s2 = data.draw(st.sampled_from(pairs))
            try:
                out = mv.r2_do(out, e1, s1, e2, s2, data.draw(st.booleans()))
            except DiagramError:
                pass
        elif choice == "r3":
            before = out.num_crossings
            out = mv.r3(out, *data.draw(st.sampled_from(triangles)))
            assert out.num_crossings == before
    assert out.num_components == 1
    assert fox_alexander(out) == base


def test_r1_undo_needs_a_kink():
    d = closed_braid([1, 1, 1], 2)
    with pytest.raises(DiagramError):
        mv.r1_undo(d, 0)


def test_band_surgery_component_count():
    k = bundled("square-knot")
    rng = random.Random(3)
    two = one = 0
    for band in random_band(rng, k, 0, 0, tries=60):
        try:
            out = mv.band_surgery(k, band)
        except DiagramError:
            continue
        if mv.band_is_coherent(band):
            assert out.num_components == 2
            two += 1
        else:
            assert out.num_components == 1
            one += 1
    assert two and one


def test_band_surgery_on_two_components_merges():
    d = unlink(2)
    band = Band((1, "L"), (2, "L"))
    out = mv.band_surgery(d, band)
    assert out.num_components == 1 and out.num_crossings == 0


def test_handleslide_rejections():
    d = closed_braid([1, 1], 2, framings=[1, 2], bracketed=True)
    band = next(random_band(random.Random(0), d, 0, 1))
    with pytest.raises(mv.MoveError, match="itself"):
        mv.handleslide(d, 0, 0, band)
    twisted = Band(band.start, band.end, band.crossings, 1)
    with pytest.raises(mv.MoveError, match="untwisted"):
        mv.handleslide(d, 0, 1, twisted)
    with pytest.raises(mv.MoveError, match="start"):
        mv.handleslide(d, 1, 0, band)


def test_handleslide_on_unlink():
    d = unlink(2, [2, 3], bracketed=True)
    out = mv.handleslide(d, 0, 1, Band((1, "L"), (2, "L")))
    # lk = 0, so the framing is n1 + n2 either way; the slid circle now links the other n2 times
    assert out.components[0].framing == Framing.integer(5)
    assert abs(linking_matrix(out)[0][1]) == 3
    assert h1_of_surgery(out) == h1_of_surgery(d)


def test_slide_under_one_handle():
    d = unlink(2, [4, None], bracketed=True)
    d = with_decorations(d, 1, dotted=True)
    out = mv.slide_under_one_handle(d, 0, 1, Band((1, "L"), (2, "L")))
    assert out.components[0].framing == Framing.integer(4)
    assert out.components[1].dotted
    alg, geo = mv.disk_intersections(out, 1, 0)
    assert alg == 0 and geo == 0
    with pytest.raises(mv.MoveError, match="not dotted"):
        mv.slide_under_one_handle(unlink(2, [0, 0]), 0, 1, Band((1, "L"), (2, "L")))


def hopf(a, b):
    return closed_braid([1, 1], 2, framings=[a, b], bracketed=True)


def test_slam_dunk_slopes():
    out = mv.slam_dunk(hopf(2, 3), 1, 0)
    assert out.num_components == 1 and out.num_crossings == 0
    assert out.components[0].framing.value == Fraction(5, 3)
    assert h1_of_surgery(out).order == 5 == h1_of_surgery(hopf(2, 3)).order
    assert mv.slam_dunk(hopf(2, 0), 1, 0).num_components == 0
    # the <1,0> chain is S^3
    assert mv.slam_dunk(hopf(1, 0), 1, 0).num_components == 0
    assert mv.slam_dunk(hopf(2, float("inf")), 1, 0).components[0].framing == Framing.integer(2)
    assert mv.slam_dunk(hopf(2, Fraction(1, 2)), 1, 0).components[0].framing == Framing.integer(0)


def test_slam_dunk_rejections():
    with pytest.raises(mv.MoveError, match="bracketed"):
        mv.slam_dunk(closed_braid([1, 1], 2, framings=[1, 1]), 1, 0)
    with pytest.raises(mv.MoveError):
        mv.slam_dunk(closed_braid([1, 1, 1, 1], 2, framings=[1, 1], bracketed=True), 1, 0)
    with pytest.raises(mv.MoveError, match="integer"):
        mv.slam_dunk(hopf(Fraction(1, 2), 1), 1, 0)


def test_cancel_hopf_pair():
    d = with_decorations(hopf(None, 0), 0, dotted=True)
    rest = disjoint_union(d, closed_braid([1, 1, 1], 2, framings=[1], bracketed=True))
    out = mv.cancel_hopf_pair(rest, 0, 1)
    assert out.num_components == 1 and out.num_crossings == 3
    assert mv.cancel_hopf_pair(d, 0, 1).num_components == 0


def test_cancel_requires_geometric_one():
    d = closed_braid([1, 1, 1, 1], 2, framings=[None, 0], bracketed=True)
    d = with_decorations(d, 0, dotted=True)
    with pytest.raises(mv.MoveError):
        mv.cancel_hopf_pair(d, 0, 1)
    with pytest.raises(mv.MoveError, match="not dotted"):
        mv.cancel_hopf_pair(hopf(0, 0), 0, 1)


def test_sublink_and_delete():
    d = bundled("rbg-meridional")
    assert mv.sublink(d, [0]).num_components == 1
    assert mv.delete_components(d, [0, 1, 2]).num_components == 0
    pairs = [(i, j) for i in range(3) for j in range(i, 3)]
    assert sum(len(mv.crossings_between(d, i, j)) for i, j in pairs) == d.num_crossings


def test_ribbon_replace_is_asserted_and_checked():
    d = with_decorations(hopf(None, 0), 0, dotted=True)
    same, trust = mv.ribbon_move(d, 0, {"kind": "replace", "diagram": d})
    assert trust == "asserted" and same is d
    other = with_decorations(hopf(None, 2), 0, dotted=True)
    with pytest.raises(mv.MoveError):
        mv.ribbon_move(d, 0, {"kind": "replace", "diagram": other})


def test_same_dart_band_splits_off_a_circle():
    # both ends cut the same edge at distinct points: an embedded chord
    out = mv.band_surgery(unlink(1), Band((1, "L"), (1, "L")))
    assert out.num_components == 2 and out.num_crossings == 0
