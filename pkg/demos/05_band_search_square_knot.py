"""
Finding a ribbon band for the square knot
=========================================

The square knot T(2,3) # -T(2,3) has signature 0 and Alexander polynomial
(t - 1 + t^-1)^2, so no classical invariant obstructs it.  A single band
turns it into a 2-component unlink; the search finds such bands and
certifies each with a Reidemeister script.
"""

import time

from kirbycalc import SearchBudget, band_search, closed_braid
from kirbycalc.search import verify_candidate

square = closed_braid([1, 1, 1, -2, -2, -2], 3)
t0 = time.monotonic()
report = band_search(square, SearchBudget(), max_band_length=0)
print("invariants:", report.invariants)
print("band statistics:", report.stats)
print(f"{len(report.certified)} certified bands in {time.monotonic() - t0:.1f}s")
best = report.certified[0]
print("first band:", best.band)
print("certificate:")
for m in best.certificate.steps:
    print("  ", m.to_line())
print("independent replay agrees:", verify_candidate(square, best))

# the trefoil is stopped before any band is tried
print(band_search(closed_braid([1, 1, 1], 2)).obstruction)
