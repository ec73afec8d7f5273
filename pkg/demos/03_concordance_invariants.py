"""
Classical slice obstructions
============================

Seifert matrices are read off a braided diagram (non-braided inputs are
braided by Vogel moves first).  From V we get the Alexander polynomial,
the signature and the Fox-Milnor test.
"""

from kirbycalc import alexander_polynomial, closed_braid, fox_milnor, from_pd, seifert_surface, signature
from kirbycalc.laurent import LaurentPolynomial

knots = {
    "trefoil": closed_braid([1, 1, 1], 2),
    "figure-eight": closed_braid([1, -2, 1, -2], 3),
    "square knot": closed_braid([1, 1, 1, -2, -2, -2], 3),
    "5_2 (from PD)": from_pd([(1, 5, 2, 4), (3, 9, 4, 8), (5, 1, 6, 10), (7, 3, 8, 2), (9, 7, 10, 6)]),
}
for name, k in knots.items():
    genus, V = seifert_surface(k)
    delta = alexander_polynomial(V)
    f = fox_milnor(delta)
    print(f"{name:14s} g={genus} Delta={delta}  sigma={signature(V)}  Fox-Milnor={'f=' + str(f) if f else 'fails'}")

# 6_1 passes Fox-Milnor with witness 2t - 1
print("6_1:", fox_milnor(LaurentPolynomial.parse("2*t - 5 + 2*t^-1")))
