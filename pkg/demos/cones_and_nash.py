"""
Lattice cones, generating functions and a non-degenerate example
================================================================

Count lattice points of a simplicial cone through its fundamental set, then
use the face fan of x1^3+x2^3+x3^3+x4^3+z^6, whose topological zeta function
is 1/(1+s) even though the motivic facet term is not trivial.
"""

from qozeta.cones import GeneralFaceFan, SimplicialCone, genfun
from qozeta.mpoly import parse
from qozeta.zeta import ztop_nondeg

cone = SimplicialCone([(2, 3), (0, 1)])
print("fundamental set", cone.fundamental_set(), "multiplicity", cone.multiplicity())

# sum over relative interior points of L^{-sigma.k} T^{point.k}
expr = genfun(cone, (1, 1), (3, 0))
print("genfun", expr.to_str())
# coefficients keyed by (L exponent, T exponent); only points (1, k) with k >= 2 give T^3
series = expr.series(6, 8)
for (lexp, texp), c in sorted(series.items(), key=lambda kv: (kv[0][1], -kv[0][0])):
    print(f"   {c} * L^{lexp} T^{texp}")

h = parse("x1^3+x2^3+x3^3+x4^3+z^6", ["x1", "x2", "x3", "x4", "z"])
fan = GeneralFaceFan(h.support())
(facet,) = [f for f in fan.compact_faces() if f.dim == 4]
print("facet normal", fan.normal_cones(facet)[0].gens)
print("S term", fan.s_face(facet, (1,) * 5).to_str())
print("Z_top", ztop_nondeg(h).to_str())
