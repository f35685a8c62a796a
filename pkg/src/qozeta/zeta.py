"""Topological and motivic zeta functions of quasi-ordinary pairs.

The quasi-ordinary engine walks the Newton process once (``newton_tree``)
and every invariant is read off that tree: the topological zeta function,
the motivic one for curves, candidate poles and the depth.  The
non-degenerate engine works from an arbitrary Newton polyhedron.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .cones import (
    EdgeData,
    GeneralFaceFan,
    NewtonPath,
    build_newton_path,
    j_edge,
    j_vertex,
    s_edge,
    s_vertex,
)
from .errors import DegenerateInput, InvalidInput, UnsupportedDegenerateMotivic
from .exactalg import AlgNum, FieldTower, UniPoly, adjoin_root, factor_irreducible
from .mpoly import (
    MPoly,
    QOPair,
    check_quasi_ordinary,
    distinct_root_count,
    good_coordinates,
    newton_map_substitute,
    reduce_to_essential,
    essential_variables,
    weierstrass_degree,
)
from .rings import MotivicExpr, RatFuncS, chi_specialize

__all__ = [
    "RatFuncS",
    "MotivicExpr",
    "PoleSet",
    "NewtonNode",
    "RootBranch",
    "chi_specialize",
    "newton_tree",
    "ztop_base",
    "ztop_qo",
    "ztop_nondeg",
    "zmot_curve",
    "zmot_nondeg_qo",
    "candidate_poles",
    "strong_candidate_poles",
    "depth",
    "edge_multiplicity",
]


# ---------------------------------------------------------------- Newton tree


@dataclass
class RootBranch:
    """One class of conjugate face roots and the pull-back it produces."""

    factor: UniPoly
    multiplicity: int
    count: int  # how many distinct roots the class stands for
    beta: object
    alpha: object
    child: "NewtonNode"


@dataclass
class NewtonNode:
    pair: QOPair  # in good coordinates when ``path`` is set
    weierstrass: int
    shifts: list = field(default_factory=list)
    path: NewtonPath | None = None
    branches: list[list[RootBranch]] = field(default_factory=list)

    @property
    def is_base(self) -> bool:
        return self.path is None

    @property
    def epsilon(self) -> int:
        if self.path is None:
            return min(self.weierstrass, 1)
        return self.pair.epsilon

    def depth(self) -> int:
        if self.path is None:
            return 0
        return 1 + max((b.child.depth() for bs in self.branches for b in bs), default=0)

    def to_dict(self, names: Sequence[str] | None = None) -> dict:
        out = {
            "N": list(self.pair.N),
            "nu": list(self.pair.nu),
            "epsilon": self.epsilon,
            "weierstrass_degree": self.weierstrass,
        }
        if self.shifts:
            out["shifts"] = [{"b": list(b), "beta": _elem_str(beta)} for b, beta in self.shifts]
        if self.path is None:
            return out
        out["vertices"] = [list(v) for v in self.path.vertices]
        edges = []
        for e, bs in zip(self.path.edges, self.branches):
            edges.append(
                {
                    "n1": e.n1,
                    "b": list(e.b),
                    "lambda": [_frac_str(x) for x in e.lam],
                    "M": list(e.M),
                    "c": list(e.c),
                    "v": e.v,
                    "face_poly_w": e.face_poly_w.to_str("w"),
                    "roots": [
                        {
                            "factor": b.factor.to_str("w"),
                            "multiplicity": b.multiplicity,
                            "count": b.count,
                            "alpha": _elem_str(b.alpha),
                            "child": b.child.to_dict(),
                        }
                        for b in bs
                    ],
                }
            )
        out["edges"] = edges
        return out


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _elem_str(x) -> str:
    from .exactalg import format_element

    return format_element(x)


def _root_classes(fw: UniPoly, n1: int, explicit: bool):
    """Yield (factor, mult, count, beta, alpha) per root class of fw."""
    for f, m in factor_irreducible(fw):
        if explicit and f.degree() > 1:
            for beta, tower in _all_roots(f):
                _, alpha = adjoin_root(tower, UniPoly.monomial(n1) - UniPoly([beta]))
                yield f, m, 1, beta, alpha
            continue
        tower, beta = adjoin_root(fw.tower(), f)
        _, alpha = adjoin_root(tower, UniPoly.monomial(n1) - UniPoly([beta]))
        yield f, m, f.degree(), beta, alpha


def _all_roots(f: UniPoly):
    """Every root of an irreducible f, each with a tower containing it."""
    pending = [(f, f.tower())]
    out = []
    while pending:
        g, tower = pending.pop()
        tower, root = adjoin_root(tower, g)
        out.append((root, tower))
        rest = g.exact_div(UniPoly([-root, 1]))
        if rest.degree() > 0:
            for h, _ in factor_irreducible(rest, tower):
                pending.append((h, tower))
    return out


def newton_tree(pair: QOPair, max_shifts: int = 50, explicit_conjugates: bool = False,
                check: bool = True) -> NewtonNode:
    """Run the Newton process: normalize, build the path, pull back per root class."""
    if check:
        check_quasi_ordinary(pair.h)
    n = weierstrass_degree(pair.h)
    if n <= 1:
        return NewtonNode(pair, n)
    good, log = good_coordinates(pair, max_shifts)
    path = build_newton_path(good)
    node = NewtonNode(good, n, log, path)
    for e in path.edges:
        branches = []
        for f, m, count, beta, alpha in _root_classes(e.face_poly_w, e.n1, explicit_conjugates):
            pulled = newton_map_substitute(good, e, alpha)
            child = newton_tree(pulled, max_shifts, explicit_conjugates, check=False)
            branches.append(RootBranch(f, m, count, beta, alpha, child))
        node.branches.append(branches)
    return node


def depth(pair: QOPair, max_shifts: int = 50) -> int:
    return newton_tree(pair, max_shifts).depth()


def edge_multiplicity(e: EdgeData) -> int:
    """n1^(d-1) / prod c_l, the size of the edge cone's fundamental set."""
    den = 1
    for c in e.c:
        den *= c
    return e.n1 ** (e.d - 1) // den


# ---------------------------------------------------------------- topological


def ztop_base(pair: QOPair, epsilon: int | None = None) -> RatFuncS:
    """(1/(s+1))^eps * prod 1/(N_j s + nu_j) for x^N z^eps times a unit."""
    eps = pair.epsilon if epsilon is None else epsilon
    den = {}
    for N, nu in zip(pair.N, pair.nu):
        if N > 0:
            den[(N, nu)] = den.get((N, nu), 0) + 1
    if eps:
        den[(1, 1)] = den.get((1, 1), 0) + 1
    return RatFuncS(1, den)


def _ztop_node(node: NewtonNode) -> RatFuncS:
    pair = node.pair
    if node.path is None:
        return ztop_base(pair, node.epsilon)
    path = node.path
    nu = pair.nu
    out = RatFuncS(0)
    for q in range(path.r + 1):
        out = out + j_vertex(path, q, nu)
    for e, branches in zip(path.edges, node.branches):
        out = out - j_edge(e, nu) * e.v
        mult = edge_multiplicity(e)
        for b in branches:
            out = out + _ztop_node(b.child) * (mult * b.count)
    return out


def ztop_qo(pair: QOPair, max_shifts: int = 50, explicit_conjugates: bool = False) -> RatFuncS:
    """Local topological zeta function by the Newton-map recursion."""
    return _ztop_node(newton_tree(pair, max_shifts, explicit_conjugates))


def _face_is_nondegenerate(fan: GeneralFaceFan, face, h: MPoly) -> bool | None:
    """True/False when decidable exactly, None when it is not."""
    pts = sorted(face.points)
    if face.dim == 0:
        return True
    if face.dim == 1:
        lo, hi = pts[0], pts[-1]
        diff = [b - a for a, b in zip(lo, hi)]
        g = 0
        for x in diff:
            from math import gcd

            g = gcd(g, x)
        step = [x // g for x in diff]
        coeffs = [h.coeff(tuple(a + j * s for a, s in zip(lo, step))) for j in range(g + 1)]
        poly = UniPoly(coeffs)
        return distinct_root_count(poly) == poly.degree()
    coeffs = {p: h.coeff(p) for p in pts}
    if any(isinstance(c, AlgNum) for c in coeffs.values()):
        return None
    n = fan.n
    xs = sympy.symbols(f"u0:{n}")
    t = sympy.Symbol("t_aux")
    f = sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[x**e for x, e in zip(xs, p)])
            for p, c in coeffs.items())
    gens = [sympy.expand(x * sympy.diff(f, x)) for x in xs]
    gens.append(1 - t * sympy.Mul(*xs))
    basis = sympy.groebner(gens, *xs, t, order="grevlex")
    return list(basis.exprs) == [1]


def ztop_nondeg(h: MPoly | QOPair, nu: Sequence[int] | None = None,
                assume_nondegenerate: bool = False, max_dim: int | None = None) -> RatFuncS:
    """Local topological zeta function from the Newton polyhedron alone."""
    if isinstance(h, QOPair):
        nu = h.nu if nu is None else nu
        h = h.h
    nu = tuple(nu) if nu is not None else (1,) * h.nx
    if len(nu) != h.nx:
        raise InvalidInput(f"expected {h.nx} form exponents")
    if max_dim is not None and h.nx + 1 > max_dim:
        from .errors import DimensionGuard

        raise DimensionGuard(f"{h.nx + 1} variables exceed the limit {max_dim}")
    fan = GeneralFaceFan(h.support())
    sigma = tuple(nu) + (1,)
    out = RatFuncS(0)
    weight = RatFuncS(UniPoly([0, 1]), {(1, 1): 1})  # s/(s+1)
    for face in fan.compact_faces():
        if not assume_nondegenerate:
            ok = _face_is_nondegenerate(fan, face, h)
            if ok is False:
                raise DegenerateInput(f"face through {sorted(face.points)} is degenerate")
            if ok is None:
                raise DegenerateInput(
                    f"cannot certify the face through {sorted(face.points)}; "
                    "pass assume_nondegenerate to proceed"
                )
        J = fan.j_face(face, sigma)
        if face.dim == 0:
            out = out + J
        else:
            out = out + J * weight * fan.euler_torus_count(face)
    return out


# ---------------------------------------------------------------- motivic


def _lA(d: int, classes: MotivicExpr | None = None) -> MotivicExpr:
    """L^-(d+1) ((L-1)^(d+1) - [N])."""
    base = MotivicExpr.L_minus_1(d + 1)
    if classes is not None:
        base = base - classes
    return base * MotivicExpr.L(-(d + 1))


def _edge_class(d: int, v: int) -> MotivicExpr:
    return MotivicExpr.L_minus_1(d) * v


def _zmot_node(node: NewtonNode) -> MotivicExpr:
    pair = node.pair
    d = pair.d
    if node.path is None:
        eps = node.epsilon
        point = tuple(pair.N) + (eps,)
        from .cones import _orthant, genfun

        return _lA(d) * genfun(_orthant(d), tuple(pair.nu) + (1,), point)
    path = node.path
    out = MotivicExpr.const(0)
    for q in range(path.r + 1):
        out = out + _lA(d) * s_vertex(path, q, pair.nu)
    for q, (e, branches) in enumerate(zip(path.edges, node.branches), start=1):
        out = out + _lA(d, _edge_class(d, e.v)) * s_edge(path, q, pair.nu)
        for b in branches:
            out = out + _zmot_node(b.child) * b.count
    return out


def zmot_curve(pair: QOPair, max_shifts: int = 50) -> MotivicExpr:
    """Motivic zeta function when at most one x-variable is essential."""
    ess = essential_variables(pair)
    if len(ess) > 1:
        raise UnsupportedDegenerateMotivic(
            f"{len(ess)} essential variables; the motivic recursion is implemented for curves "
            "only, use the topological computation instead"
        )
    d = pair.d
    if d > 1:
        keep = ess or [0]
        drop = [i for i in range(d) if i not in keep]
        h = pair.h.set_zero(drop).drop_vars(drop)
        reduced = QOPair(h, tuple(pair.nu[i] for i in keep))
        return _zmot_node(newton_tree(reduced, max_shifts)) * MotivicExpr.L(-(d - 1))
    return _zmot_node(newton_tree(pair, max_shifts))


def zmot_nondeg_qo(pair: QOPair, max_shifts: int = 50) -> MotivicExpr:
    """Motivic zeta function of a non-degenerate quasi-ordinary pair."""
    check_quasi_ordinary(pair.h)
    n = weierstrass_degree(pair.h)
    d = pair.d
    if n <= 1:
        return _zmot_node(NewtonNode(pair, n))
    good, _ = good_coordinates(pair, max_shifts)
    path = build_newton_path(good)
    lb_tail = MotivicExpr.L_minus_1(1) * MotivicExpr.L(-(d + 1)) * MotivicExpr.monomial(-1, 1) \
        * MotivicExpr.geometric(1, 1)
    out = MotivicExpr.const(0)
    for q in range(path.r + 1):
        out = out + _lA(d) * s_vertex(path, q, good.nu)
    for q, e in enumerate(path.edges, start=1):
        if distinct_root_count(e.face_poly_w) != e.face_poly_w.degree():
            raise DegenerateInput(f"edge {q} has a repeated face root: {e.face_poly_w.to_str('w')}")
        cls = _edge_class(d, e.v)
        out = out + (_lA(d, cls) + lb_tail * cls) * s_edge(path, q, good.nu)
    return out


# ---------------------------------------------------------------- poles


@dataclass
class PoleSet:
    """Pairs (N, nu) with the places they came from."""

    pairs: dict = field(default_factory=dict)

    def add(self, N: int, nu: int, tag: str) -> None:
        tags = self.pairs.setdefault((N, nu), [])
        if tag not in tags:
            tags.append(tag)

    def update(self, other: PoleSet, prefix: str = "") -> None:
        for key, tags in other.pairs.items():
            for t in tags:
                self.add(*key, prefix + t)

    def __contains__(self, key) -> bool:
        return tuple(key) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def keys(self) -> set:
        return set(self.pairs)

    def values(self) -> set[Fraction]:
        return {Fraction(-nu, N) for N, nu in self.pairs}


def special_coordinates(e: EdgeData, top: Sequence[int], nu: Sequence[int]) -> list[int]:
    """Coordinates in which the edge is special (single root class, b_i = 1, x_i absent at the top)."""
    if e.v != 1:
        return []
    return [i for i in range(e.d) if e.b[i] == 1 and top[i] == 0 and nu[i] == 1]


def _edge_pair(e: EdgeData, nu: Sequence[int], i: int) -> tuple[int, int]:
    return (e.M[i] // e.c[i], nu[i] * e.p[i] + e.bbar[i])


def _pole_walk(node: NewtonNode, strong: bool, where: str) -> tuple[PoleSet, PoleSet]:
    """Return (local pairs of the node, recursive pairs below it)."""
    pair = node.pair
    own = PoleSet()
    if node.epsilon:
        own.add(1, 1, f"{where}:z")
    for i, (N, nu) in enumerate(zip(pair.N, pair.nu)):
        if N > 0:
            own.add(N, nu, f"{where}:x{i + 1}")
    below = PoleSet()
    if node.path is None:
        return own, below
    for q, (e, branches) in enumerate(zip(node.path.edges, node.branches), start=1):
        special = special_coordinates(e, e.hi, pair.nu) if strong else []
        for i in range(e.d):
            if e.b[i] == 0:
                continue
            if len(special) == 1 and special[0] == i:
                continue
            tag = f"{where}:edge{q}:x{i + 1}"
            if len(special) > 1 and i in special:
                tag += ":special-multi"
            below.add(*_edge_pair(e, pair.nu, i), tag)
        for j, b in enumerate(branches, start=1):
            sub_where = f"{where}/e{q}r{j}"
            c_own, c_below = _pole_walk(b.child, strong, sub_where)
            if strong:
                if b.child.epsilon:
                    below.add(1, 1, f"{sub_where}:z")
            else:
                below.update(c_own)
            below.update(c_below)
    return own, below


def candidate_poles(pair: QOPair, max_shifts: int = 50) -> PoleSet:
    own, below = _pole_walk(newton_tree(pair, max_shifts), False, "root")
    own.update(below)
    return own


def strong_candidate_poles(pair: QOPair, max_shifts: int = 50) -> PoleSet:
    own, below = _pole_walk(newton_tree(pair, max_shifts), True, "root")
    own.update(below)
    return own
