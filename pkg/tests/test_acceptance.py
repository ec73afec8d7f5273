"""End-to-end acceptance checks, one test per criterion.

Each test records a one-line verdict that is printed in the terminal
summary under "acceptance criteria".
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from kirbycalc.concordance import (
    CurveSystem,
    SeifertMatrix,
    alexander_polynomial,
    derivative_check,
    fibered_necessary,
    fox_milnor,
    seifert_surface,
    signature,
)
from kirbycalc.diagram import DiagramError, closed_braid, linking_matrix, parse_diagram, unlink
from kirbycalc.homology import h1_of_surgery, presentation_matrix, smith_normal_form, check_rlink_homology
from kirbycalc.laurent import LaurentPolynomial as LP
from kirbycalc.moves import band_is_coherent, crossings_between, handleslide, slam_dunk
from kirbycalc.pi1 import certify_free, surgered_presentation
from kirbycalc.script import parse_script, replay
from kirbycalc.search import SearchBudget, band_search, verify_candidate

from gen import random_band, random_framed_link
from helpers import BUNDLED, bundled, external

TREFOIL = [1, 1, 1]
FIGURE_EIGHT = [1, -2, 1, -2]


def _run(criterion, n, fn):
    t0 = time.monotonic()
    try:
        detail = fn()
    except BaseException as exc:
        criterion(n, False, f"{type(exc).__name__}: {exc}")
        raise
    criterion(n, True, f"{detail} ({time.monotonic() - t0:.2f}s)")


def random_slides(rng, count):
    """Yield ``(input, moving, over, band, output)`` for ``count`` successful handleslides."""
    done = 0
    while done < count:
        d = random_framed_link(rng)
        a, b = rng.sample(range(d.num_components), 2)
        for band in random_band(rng, d, a, b):
            try:
                out = handleslide(d, a, b, band)
            except DiagramError:
                continue
            done += 1
            yield d, a, b, band, out
            break


def test_criterion_1_handleslide_framing_law(criterion):
    def body():
        rng = random.Random(20261014)
        t0 = time.monotonic()
        n = 0
        for d, a, b, band, out in random_slides(rng, 500):
            eps = 1 if band_is_coherent(band) else -1
            n1, n2 = d.components[a].framing.p, d.components[b].framing.p
            assert out.num_components == d.num_components
            assert all(len(x) == 4 for x in (c.slots for c in out.crossings))
            lk_out = linking_matrix(out)
            # the slid component runs once along a parallel copy of the other,
            # so the output linking number exceeds the original by eps * n2
            lk = lk_out[a][b] - eps * n2
            assert lk == linking_matrix(d)[a][b]
            assert out.components[a].framing.p == n1 + n2 + 2 * eps * lk
            lk_in = linking_matrix(d)
            for j in range(d.num_components):
                if j not in (a, b):
                    assert lk_out[a][j] == lk_in[a][j] + eps * lk_in[b][j]
                if j != a:
                    assert out.components[j].framing == d.components[j].framing
            n += 1
        assert n >= 500
        assert time.monotonic() - t0 < 60
        return f"{n} random slides, framing law exact"

    _run(criterion, 1, body)


def test_criterion_2_surgery_homology(criterion):
    def body():
        t0 = time.monotonic()
        assert str(h1_of_surgery(unlink(1, [0], bracketed=True))) == "Z"
        assert h1_of_surgery(bundled("trefoil-1")).is_trivial
        for p in range(2, 13):
            inv = h1_of_surgery(unlink(1, [p], bracketed=True))
            assert inv.free_rank == 0 and inv.torsion == (p,)
        assert str(h1_of_surgery(bundled("rbg-meridional"))) == "Z"
        for d in (bundled("rbg-meridional"), bundled("hopf-0-0"), bundled("trefoil-1")):
            pm = presentation_matrix(d)
            _, cert = smith_normal_form(pm.matrix)
            assert cert.verify(pm.matrix)
        assert time.monotonic() - t0 < 1
        return "0-unknot Z, <1>-trefoil 0, <p>-unknot Z/p for p=2..12, meridional RBG Z"

    _run(criterion, 2, body)


def _with_meridian(rng):
    """A random framed link plus a meridian of one of its components."""
    m = rng.randint(1, 3)
    word = [rng.choice([1, -1]) * rng.randint(1, m - 1) for _ in range(rng.randint(0, 6))] if m > 1 else []
    word += [m, m] if rng.random() < 0.5 else [-m, -m]
    d = closed_braid(word, m + 1)
    n = d.num_components
    last = set(d.strand_components(d.num_crossings - 1))
    # the added strand only meets the last two crossings
    meridian = next(i for i in sorted(last) if all(
        i not in d.strand_components(c) for c in range(d.num_crossings - 2)))
    fr = [rng.randint(-4, 4) for _ in range(n)]
    fr[meridian] = rng.choice([rng.randint(-4, 4), Fraction(rng.randint(-5, 5), rng.randint(2, 4)), float("inf")])
    d = closed_braid(word, m + 1, framings=fr, bracketed=True)
    target = next(j for j in range(n) if j != meridian and crossings_between(d, meridian, j))
    return d, meridian, target


def test_criterion_3_h1_invariance(criterion):
    def body():
        rng = random.Random(7)
        t0 = time.monotonic()
        slides = 0
        for d, a, b, band, out in random_slides(rng, 120):
            assert h1_of_surgery(out) == h1_of_surgery(d)
            slides += 1
        dunks = 0
        while dunks < 100:
            d, m, t = _with_meridian(rng)
            if d.components[m].framing.is_infinite and rng.random() < 0.5:
                continue
            out = slam_dunk(d, m, t)
            assert h1_of_surgery(out) == h1_of_surgery(d)
            dunks += 1
        assert time.monotonic() - t0 < 60
        return f"{slides} handleslides and {dunks} slam-dunks preserve H1"

    _run(criterion, 3, body)


def random_knot_seifert_matrix(rng, size):
    """Symmetric perturbation of the standard symplectic form: det(V - V^T) = 1."""
    V = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            V[i][j] = V[j][i] = rng.randint(-3, 3)
    for k in range(0, size, 2):
        V[k][k + 1] += 1
    return V


def k_minus_k(V0):
    n = len(V0)
    V = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            V[i][j] = V0[i][j]
            V[n + i][n + j] = -V0[j][i]
    return V


def test_criterion_4_concordance_suite(criterion):
    def body():
        t0 = time.monotonic()
        unknot = closed_braid([], 1)
        assert alexander_polynomial(seifert_surface(unknot)[1]) == 1
        _, Vt = seifert_surface(closed_braid(TREFOIL, 2))
        _, V8 = seifert_surface(closed_braid(FIGURE_EIGHT, 3))
        assert alexander_polynomial(Vt) == LP.parse("t - 1 + t^-1")
        assert signature(Vt) == -2
        assert signature(V8) == 0
        assert fox_milnor(LP.parse("2*t - 5 + 2*t^-1")) == LP.parse("2*t - 1")
        assert fox_milnor(alexander_polynomial(Vt)) is None
        rng = random.Random(4)
        count = 0
        for size in (2, 4, 6):
            for _ in range(40):
                V = k_minus_k(random_knot_seifert_matrix(rng, size))
                assert signature(V) == 0
                delta = alexander_polynomial(V)
                f = fox_milnor(delta)
                assert f is not None
                assert (f * f.conjugate()).equal_up_to_unit(delta)
                count += 1
        assert time.monotonic() - t0 < 60
        return f"values exact; K#-K holds on {count} random Seifert matrices"

    _run(criterion, 4, body)


def test_criterion_5_rlink_certification(criterion):
    def body():
        t0 = time.monotonic()
        for n in range(1, 5):
            d = unlink(n, [0] * n, bracketed=True)
            assert check_rlink_homology(d).passed
            fc = certify_free(surgered_presentation(d), n)
            assert fc.status == "yes" and fc.presentation.rank == n
        assert not check_rlink_homology(bundled("hopf-0-0")).passed
        t0d = bundled("trefoil-0")
        v = check_rlink_homology(t0d)
        assert v.passed and dict(v.checks)["h1"] == "Z"
        assert certify_free(surgered_presentation(t0d), 1).status == "inconclusive"
        assert time.monotonic() - t0 < 10
        return "0-unlinks n<=4 pass+free(n), 0-Hopf fails, 0-trefoil inconclusive with Z"

    _run(criterion, 5, body)


def test_criterion_6_square_knot_band_search(criterion):
    def body():
        k = bundled("square-knot")
        assert k.num_crossings == 6
        t0 = time.monotonic()
        one = band_search(k, SearchBudget(workers=1))
        t1 = time.monotonic() - t0
        four = band_search(k, SearchBudget(workers=4))
        sig = lambda rep: [(str(c.band), c.status, c.reason) for c in rep]
        assert sig(one) == sig(four)
        assert one.stats == four.stats
        assert one.certified
        for c in one.certified:
            assert verify_candidate(k, c)
            rep = replay(c.certificate, c.diagram)
            assert rep.final.num_crossings == 0 and rep.final.num_components == 2
        assert t1 < 300
        return f"{len(one.certified)} certified bands of {one.stats['bands']}; identical for 1 and 4 workers"

    _run(criterion, 6, body)


def test_criterion_7_derivative_certificate(criterion):
    def body():
        t0 = time.monotonic()
        _, V0 = seifert_surface(closed_braid(TREFOIL, 2))
        V = SeifertMatrix.from_rows(k_minus_k(V0.rows()))
        good = derivative_check(V, CurveSystem(((1, 0, 0, 1), (0, 1, 1, 0))))
        assert good.passed
        perturbed = CurveSystem(((1, 0, 0, 0), (0, 1, 1, 0)))
        assert V.pairing(perturbed.vectors[0], perturbed.vectors[0]) != 0
        bad = derivative_check(V, perturbed)
        assert not bad.passed and dict(bad.checks)["seifert_form_vanishes"] == "fail"
        assert time.monotonic() - t0 < 1
        return "K#-K classes pass, perturbed class fails"

    _run(criterion, 7, body)


def test_criterion_8_replay_audit(criterion):
    def body():
        t0 = time.monotonic()
        path = BUNDLED / "cancellation-demo.ks"
        script = parse_script(path.read_text(), base_dir=str(BUNDLED))
        kinds = [m.kind for m in script.steps]
        assert len(kinds) >= 10
        assert {"Slide", "SlamDunk", "CancelHopfPair"} <= set(kinds)
        rep = replay(script)
        assert rep.status == "verified"
        assert rep.final.num_components == 0
        assert time.monotonic() - t0 < 1
        return f"{len(kinds)}-step demonstration replays to the empty diagram"

    _run(criterion, 8, body)


def test_criterion_9_kg_transcription(criterion):
    path = external("kg.kd")
    if path is None:
        criterion(9, None, "unavailable: no kg.kd in KIRBYCALC_CORPUS (does not fail the build)")
        pytest.skip("K_G transcription not provided")

    def body():
        t0 = time.monotonic()
        k = parse_diagram(path.read_text())
        genus, V = seifert_surface(k)
        delta = alexander_polynomial(V)
        assert fibered_necessary(delta, 5)
        assert signature(V) == 0
        assert fox_milnor(delta) is not None
        assert time.monotonic() - t0 < 60
        return f"Delta={delta}, fibered-necessary g=5, signature 0, Fox-Milnor pass"

    _run(criterion, 9, body)
