"""
First homology of surgered manifolds
====================================

H1 of the manifold obtained by integral surgery is the cokernel of the
linking matrix with framings on the diagonal.  The Smith normal form comes
with a certificate (U, V) that can be checked by multiplication.
"""

from kirbycalc import closed_braid, h1_of_surgery, unlink
from kirbycalc.homology import check_rbg_homology, presentation_matrix, smith_normal_form

for p in (0, 1, 5):
    print(f"<{p}> on the unknot:", h1_of_surgery(unlink(1, [p], bracketed=True)))

print("<1> on the trefoil:", h1_of_surgery(closed_braid([1, 1, 1], 2, framings=[1], bracketed=True)))

# a three-component link that passes the homological RBG conditions
rbg = closed_braid([1, 1, 2, 2], 3, framings=[0, 1, 0], bracketed=True)
pm = presentation_matrix(rbg)
inv, cert = smith_normal_form(pm.matrix)
print("presentation matrix:", pm.rows())
print("H1:", inv, "certificate verifies:", cert.verify(pm.matrix))
for line in check_rbg_homology(rbg, 1, 0, 2).lines():
    print(" ", line)
