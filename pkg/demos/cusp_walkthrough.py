"""
The cusp, every invariant at once
=================================

Start from z^2 - x^3 and compute the topological zeta function two ways,
the motivic zeta function, the monodromy zeta function and the pole check.
"""

from qozeta.monodromy import check_conjecture, zeta_monodromy_qo
from qozeta.mpoly import QOPair, parse
from qozeta.rings import chi_specialize
from qozeta.zeta import newton_tree, zmot_curve, ztop_nondeg, ztop_qo

h = parse("z^2-x^3", ["x", "z"])
pair = QOPair(h, (1,))

# one Newton edge of slope 3/2, a single face root, then a smooth branch
tree = newton_tree(pair)
print("depth", tree.depth())
edge = tree.path.edges[0]
print("edge n1 =", edge.n1, " face polynomial:", edge.face_poly_w.to_str("w"))

# recursion along the Newton tree vs the Newton polyhedron formula
z_rec = ztop_qo(pair)
z_nd = ztop_nondeg(pair)
print("Z_top recursion   ", z_rec.to_str())
print("Z_top polyhedron  ", z_nd.to_str())
assert z_rec == z_nd

# motivic version, and its Euler characteristic specialization
z_mot = zmot_curve(pair)
print("Z_mot", z_mot.to_str())
print("chi(Z_mot) =", chi_specialize(z_mot).to_str())

# monodromy: Π (1 - t^a)^e
zeta = zeta_monodromy_qo(pair)
print("zeta_monodromy", zeta.to_str())

for v in check_conjecture(pair):
    print("pole", v.pole, v.status.value)
