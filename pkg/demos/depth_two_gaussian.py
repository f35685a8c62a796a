"""
A depth-two curve and the Gaussian field
========================================

(z^2 - x^3)^2 + x^7 needs two Newton maps. The second face polynomial is
w^2 + 1/4 with roots +-i/2, so the recursion runs over Q(i). Conjugate roots give equal
contributions, which is what the default shortcut relies on.
"""

from qozeta.mpoly import QOPair, parse
from qozeta.zeta import newton_tree, strong_candidate_poles, ztop_qo

pair = QOPair(parse("(z^2-x^3)^2+x^7", ["x", "z"]), (1,))
tree = newton_tree(pair, explicit_conjugates=True)
print("depth", tree.depth())

first = tree.branches[0][0]
print("first stage pull-back N, nu:", first.child.pair.N, first.child.pair.nu)

second = first.child.branches[0]
for b in second:
    # a1 is a square root of -1/4, so the field is Q(i)
    print("face root", b.beta, "of", b.factor.to_str("w"), "in", b.beta.tower)

# explicit conjugates and the counting shortcut agree
z_explicit = ztop_qo(pair, explicit_conjugates=True)
z_short = ztop_qo(pair)
print("Z_top", z_short.to_str())
assert z_explicit == z_short

scp = strong_candidate_poles(pair)
for key in sorted(scp.keys()):
    print("SCP", key, scp.pairs[key])
print("actual poles", sorted(z_short.pole_values()))
