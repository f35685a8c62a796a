"""
Special faces and cancelled candidate poles
===========================================

z^2 - x1^2*x2 carries the candidate (N, nu) = (2, 3), yet -3/2 is not a pole.
z^2 - x1*x2 keeps it. The polyhedron formula confirms both answers.
"""

from fractions import Fraction

from qozeta.mpoly import QOPair, parse
from qozeta.zeta import candidate_poles, strong_candidate_poles, ztop_nondeg, ztop_qo

names = ["x1", "x2", "z"]
for text in ("z^2-x1^2*x2", "z^2-x1*x2"):
    pair = QOPair(parse(text, names), (1, 1))
    z = ztop_qo(pair)
    assert z == ztop_nondeg(pair)
    print(text)
    print("   Z_top      ", z.to_str())
    print("   CP         ", sorted(candidate_poles(pair).keys()))
    print("   SCP        ", sorted(strong_candidate_poles(pair).keys()))
    print("   -3/2 pole? ", Fraction(-3, 2) in z.pole_values())

# a special face that appears only after a Newton map
pair = QOPair(parse("(z^2-x^3)^2+x^11*y", ["x", "y", "z"]), (1, 1))
z = ztop_qo(pair)
print("(z^2-x^3)^2+x^11*y")
print("   Z_top", z.to_str())
print("   poles", sorted(z.pole_values()))
print("   SCP  ", sorted(strong_candidate_poles(pair).keys()))
