"""Monodromy zeta functions and the monodromy conjecture check.

Zeta functions of the monodromy are products of factors (1 - t^a)^e.  For
curves they are computed along the same Newton tree as the topological
zeta function; for d >= 2 the quasi-ordinary case reduces to a curve or
to the quasi-homogeneous value 1 - t^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

import sympy

from .errors import InvalidInput, UnsupportedMonodromy
from .exactalg import AlgNum
from .mpoly import (
    MPoly,
    QOPair,
    discriminant_z,
    z_part,
    check_quasi_ordinary,
    good_coordinates,
    reduce_to_essential,
    weierstrass_degree,
)
from .cones import build_newton_path
from .zeta import NewtonNode, PoleSet, newton_tree, strong_candidate_poles


class CycloProduct:
    """prod (1 - t^a)^e over a finite set of positive a."""

    __slots__ = ("factors",)

    def __init__(self, factors: Mapping[int, int] | None = None):
        clean = {}
        for a, e in (factors or {}).items():
            if a <= 0:
                raise InvalidInput("cyclotomic factor exponent base must be positive")
            if e:
                clean[int(a)] = clean.get(int(a), 0) + int(e)
        object.__setattr__(self, "factors", {a: e for a, e in sorted(clean.items()) if e})

    def __setattr__(self, key, value):
        raise AttributeError("CycloProduct is immutable")

    @classmethod
    def one_minus(cls, a: int, e: int = 1) -> CycloProduct:
        return cls({a: e}) if a > 0 else cls()

    def __mul__(self, other: CycloProduct) -> CycloProduct:
        out = dict(self.factors)
        for a, e in other.factors.items():
            out[a] = out.get(a, 0) + e
        return CycloProduct(out)

    def __truediv__(self, other: CycloProduct) -> CycloProduct:
        return self * other.inverse()

    def __pow__(self, k: int) -> CycloProduct:
        return CycloProduct({a: e * k for a, e in self.factors.items()})

    def inverse(self) -> CycloProduct:
        return self ** -1

    def __eq__(self, other):
        return isinstance(other, CycloProduct) and self.factors == other.factors

    def __hash__(self):
        return hash(tuple(self.factors.items()))

    def at_power(self, k: int) -> CycloProduct:
        """The product with t replaced by t^k."""
        return CycloProduct({a * k: e for a, e in self.factors.items()})

    def is_one(self) -> bool:
        return not self.factors

    def root_multiplicity(self, order: int) -> int:
        """Order of vanishing at a primitive root of unity of the given order."""
        return sum(e for a, e in self.factors.items() if a % order == 0)

    def degree(self) -> int:
        return sum(a * e for a, e in self.factors.items())

    def to_str(self) -> str:
        def fac(a):
            return "(1-t)" if a == 1 else f"(1-t^{a})"

        def part(items):
            return "*".join(fac(a) if e == 1 else f"{fac(a)}^{e}" for a, e in items)

        num = [(a, e) for a, e in self.factors.items() if e > 0]
        den = [(a, -e) for a, e in self.factors.items() if e < 0]
        if not num and not den:
            return "1"
        top = part(num) if num else "1"
        if not den:
            return top
        bottom = part(den)
        if len(den) > 1 or den[0][1] > 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def to_json(self) -> list[list[int]]:
        return [[a, e] for a, e in self.factors.items()]

    def __repr__(self):
        return f"CycloProduct({self.to_str()})"


def eigenvalue_check(pole: tuple[int, int], zeta: CycloProduct) -> bool:
    """Whether exp(-2 pi i nu/N) is a zero or a pole of zeta."""
    N, nu = pole
    if N <= 0:
        raise InvalidInput("pole pairs need N > 0")
    order = Fraction(nu, N).denominator
    return zeta.root_multiplicity(order) != 0


# ---------------------------------------------------------------- curves


def _base_zeta(N: int, eps: int) -> CycloProduct:
    if N > 0 and eps:
        return CycloProduct()
    if N > 0:
        return CycloProduct.one_minus(N)
    if eps:
        return CycloProduct.one_minus(1)
    return CycloProduct()


def _curve_node(node: NewtonNode) -> CycloProduct:
    pair = node.pair
    N = pair.N[0]
    if node.path is None:
        return _base_zeta(N, node.epsilon)
    path = node.path
    x_free = N == 0
    z_free = pair.epsilon == 0
    first, last = path.edges[0], path.edges[-1]
    alpha = 0 if (last.b[0] == 1 and x_free) else 1
    beta = 0 if (first.n1 == 1 and z_free) else 1
    a = alpha if x_free else 0
    b = beta if z_free else 0
    top_height = path.vertices[-1][-1]
    low_x = path.vertices[0][0]
    out = CycloProduct.one_minus(top_height, a) * CycloProduct.one_minus(last.M[0], 1 - alpha)
    out = out * CycloProduct.one_minus(low_x, b) * CycloProduct.one_minus(first.M[0], 1 - beta)
    for e, branches in zip(path.edges, node.branches):
        out = out * CycloProduct.one_minus(e.M[0], -e.v)
        for br in branches:
            out = out * _curve_node(br.child) ** br.count
    return out


def zeta_monodromy_curve(pair: QOPair, max_shifts: int = 50) -> CycloProduct:
    """Monodromy zeta function at the origin of a plane curve germ."""
    if pair.d != 1:
        raise InvalidInput(f"the curve routine needs d = 1, got d = {pair.d}")
    return _curve_node(newton_tree(pair, max_shifts))


# ---------------------------------------------------------------- quasi-ordinary


def zeta_monodromy_qo(pair: QOPair, max_shifts: int = 50) -> CycloProduct:
    """Monodromy zeta function at the origin of a quasi-ordinary germ."""
    check_quasi_ordinary(pair.h)
    reduced, _ = reduce_to_essential(pair)
    d = reduced.d
    if d == 0:
        return _base_zeta(0, min(weierstrass_degree(reduced.h), 1))
    if d == 1:
        return zeta_monodromy_curve(reduced, max_shifts)
    n = weierstrass_degree(reduced.h)
    nonzero_N = [i for i in range(d) if reduced.N[i] > 0]
    if n <= 1:
        if len(nonzero_N) + n >= 2:
            return CycloProduct()
        if nonzero_N:
            return CycloProduct.one_minus(reduced.N[nonzero_N[0]])
        return _base_zeta(0, n)
    if nonzero_N:
        raise UnsupportedMonodromy(
            "monomial factor in several essential variables: the restriction to a curve is not available"
        )
    good, _ = good_coordinates(reduced, max_shifts)
    path = build_newton_path(good)
    top_slope = path.edges[-1].lam
    nonzero = [i for i, v in enumerate(top_slope) if v != 0]
    if len(nonzero) >= 2:
        return CycloProduct.one_minus(n)
    keep = nonzero[0]
    drop = [i for i in range(d) if i != keep]
    h = good.h.set_zero(drop).drop_vars(drop)
    return _restricted_curve_zeta(h, max_shifts)


def _restricted_curve_zeta(h: MPoly, max_shifts: int) -> CycloProduct:
    """Zeta of a plane curve germ that may be a power g^k of a reduced one."""
    if h.deg_z() == 0 or not discriminant_z(z_part(h)).is_zero():
        return zeta_monodromy_curve(QOPair(h, (1,)), max_shifts)
    if any(isinstance(c, AlgNum) for c in h.terms.values()):
        raise UnsupportedMonodromy("non-reduced restriction with algebraic coefficients")
    x, z = sympy.symbols("x z")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**e[0] * z**e[1] for e, c in h.terms.items())
    _, parts = sympy.sqf_list(expr, x, z)
    ks = {k for _, k in parts}
    if len(ks) != 1:
        raise UnsupportedMonodromy(
            f"the restricted curve has components of different multiplicities {sorted(ks)}"
        )
    k = ks.pop()
    reduced = sympy.Poly(sympy.Mul(*[g for g, _ in parts]), x, z)
    g = MPoly(1, {tuple(e): Fraction(int(c.p), int(c.q)) for e, c in reduced.terms()})
    return zeta_monodromy_curve(QOPair(g, (1,)), max_shifts).at_power(k)


# ---------------------------------------------------------------- conjecture


class Status(str, Enum):
    VERIFIED_AT_ORIGIN = "VERIFIED_AT_ORIGIN"
    VERIFIED_ON_COORDINATE_STRATUM = "VERIFIED_ON_COORDINATE_STRATUM"
    DEFERRED_TO_TRANSVERSAL_SECTION = "DEFERRED_TO_TRANSVERSAL_SECTION"
    FAILED = "FAILED"


@dataclass(frozen=True)
class PoleVerdict:
    pole: tuple[int, int]
    status: Status
    witness: object

    def to_json(self) -> dict:
        N, nu = self.pole
        w = self.witness.to_json() if isinstance(self.witness, CycloProduct) else self.witness
        return {"N": N, "nu": nu, "status": self.status.value, "witness": w}


def check_conjecture(pair: QOPair, max_shifts: int = 50,
                     scp: PoleSet | None = None) -> list[PoleVerdict]:
    """Verdict for every strong candidate pole of the pair."""
    if scp is None:
        scp = strong_candidate_poles(pair, max_shifts)
    try:
        zeta0 = zeta_monodromy_qo(pair, max_shifts)
    except UnsupportedMonodromy:
        zeta0 = None
    out = []
    for N, nu in scp:
        if zeta0 is not None and eigenvalue_check((N, nu), zeta0):
            out.append(PoleVerdict((N, nu), Status.VERIFIED_AT_ORIGIN, zeta0))
            continue
        stratum = next(
            (i for i in range(pair.d) if pair.N[i] > 0 and eigenvalue_check((N, nu), CycloProduct.one_minus(pair.N[i]))),
            None,
        )
        if stratum is not None:
            out.append(PoleVerdict((N, nu), Status.VERIFIED_ON_COORDINATE_STRATUM, f"x{stratum + 1}=0"))
        elif nu % N == 0:
            out.append(PoleVerdict((N, nu), Status.VERIFIED_ON_COORDINATE_STRATUM, "smooth points of h=0"))
        elif pair.d >= 2:
            out.append(PoleVerdict((N, nu), Status.DEFERRED_TO_TRANSVERSAL_SECTION, None))
        else:
            out.append(PoleVerdict((N, nu), Status.FAILED, zeta0))
    return out
