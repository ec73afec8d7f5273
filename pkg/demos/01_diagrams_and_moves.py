"""
Framed link diagrams and the moves between them
===============================================

A diagram is a list of crossings X[a,b,c,d,sign] read counterclockwise from
the incoming under-strand, plus free loops and one decoration line per
component.  Everything below is exact.
"""

from kirbycalc import closed_braid, linking_matrix, serialize_diagram, unlink
from kirbycalc import moves as mv
from kirbycalc.diagram import Band, diagrams_isomorphic

# the right-handed trefoil as the closure of sigma_1^3
trefoil = closed_braid([1, 1, 1], 2, framings=[1], bracketed=True)
print(serialize_diagram(trefoil))

# a Reidemeister I kink changes the writhe but not the knot
kinked = mv.r1_do(trefoil, 1, "L", -1)
print("crossings after R1:", kinked.num_crossings)
back = mv.r1_undo(kinked, next(c for c in range(kinked.num_crossings) if mv.kink_edge(kinked, c) is not None))
print("undo gives the same diagram:", diagrams_isomorphic(back, trefoil))

# slide one framed unknot over another: n1 + n2 +- 2 lk
pair = unlink(2, [2, -1], bracketed=True)
slid = mv.handleslide(pair, 0, 1, Band((1, "L"), (2, "L")))
print("framings after the slide:", [str(c.framing) for c in slid.components])
print("linking matrix after the slide:", linking_matrix(slid))

# a slam-dunk absorbs a meridian of slope r into an integer-framed target n as n - 1/r
hopf = closed_braid([1, 1], 2, framings=[3, 2], bracketed=True)
print("slam-dunk <3> with a <2> meridian:", mv.slam_dunk(hopf, 1, 0).components[0].framing)
