"""
Monodromy zeta functions
========================

Plane curves x^p + z^q, a quasi-homogeneous surface, and a non-reduced
restriction. Each result is a finite product of (1 - t^a)^e.
"""

from qozeta.monodromy import CycloProduct, zeta_monodromy_qo
from qozeta.mpoly import QOPair, parse

for p, q in [(2, 3), (3, 4), (2, 5), (3, 5)]:
    zeta = zeta_monodromy_qo(QOPair(parse(f"x^{p}+z^{q}", ["x", "z"]), (1,)))
    # (1 - t)/zeta is the characteristic polynomial on the first homology
    alexander = CycloProduct.one_minus(1) / zeta
    print(f"x^{p}+z^{q}:  zeta = {zeta.to_str():28s} H1 = {alexander.to_str()}  mu = {-zeta.degree() + 1}")

surface = QOPair(parse("z^3+x1*x2", ["x1", "x2", "z"]), (1, 1))
print("z^3+x1*x2:", zeta_monodromy_qo(surface).to_str())

# x-stratum of this surface is the double cusp (z^2-x^3)^2
f = QOPair(parse("(z^2-x^3)^2+x^11*y", ["x", "y", "z"]), (1, 1))
print("(z^2-x^3)^2+x^11*y:", zeta_monodromy_qo(f).to_str())
