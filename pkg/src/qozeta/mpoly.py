"""Multivariate polynomials in x1..xd and a distinguished last variable z.

Exponent vectors have length d+1 with the z-exponent last.  Coefficients
are field elements from :mod:`qozeta.exactalg`.  Besides ring arithmetic
this module parses the text grammar, computes z-discriminants, tests the
quasi-ordinary condition, reads off the monotone Newton path, moves to
good coordinates and applies Newton maps.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

import sympy

from .errors import (
    InvalidInput,
    InvalidRoot,
    InvariantViolation,
    NonTerminatingNormalization,
    NotMonotonePath,
    NotQuasiOrdinary,
    NotSquarefree,
    ParseError,
)
from .exactalg import QQ, AlgNum, FieldTower, UniPoly, common_tower, format_element, to_field, tower_of

Exp = tuple


class MPoly:
    """Sparse polynomial: ``terms`` maps exponent tuples (a1..ad, az) to coefficients."""

    __slots__ = ("nx", "terms", "_hash")

    def __init__(self, nx: int, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for e, c in items:
            e = tuple(int(v) for v in e)
            if len(e) != nx + 1:
                raise InvalidInput(f"exponent {e} does not have length {nx + 1}")
            if any(v < 0 for v in e):
                raise InvalidInput(f"negative exponent in {e}")
            c = to_field(c)
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
                if clean[e] == 0:
                    del clean[e]
        object.__setattr__(self, "nx", nx)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("MPoly is immutable")

    # construction helpers
    @classmethod
    def constant(cls, nx: int, c) -> MPoly:
        return cls(nx, {(0,) * (nx + 1): c})

    @classmethod
    def var(cls, nx: int, i: int) -> MPoly:
        e = [0] * (nx + 1)
        e[i] = 1
        return cls(nx, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> MPoly:
        return cls(len(exp) - 1, {tuple(exp): c})

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Exp]:
        return sorted(self.terms)

    def deg_z(self) -> int:
        return max((e[-1] for e in self.terms), default=-1)

    def tower(self) -> FieldTower:
        t = QQ
        for c in self.terms.values():
            t = common_tower(t, tower_of(c))
        return t

    def x_min(self) -> tuple[int, ...]:
        """Componentwise minimum of the x-exponents (the monomial factor N)."""
        if not self.terms:
            raise InvalidInput("zero polynomial")
        return tuple(min(e[i] for e in self.terms) for i in range(self.nx))

    def z_divides(self) -> bool:
        return all(e[-1] >= 1 for e in self.terms)

    def coeff(self, exp: Exp):
        return self.terms.get(tuple(exp), Fraction(0))

    # arithmetic
    def _check(self, other: MPoly):
        if other.nx != self.nx:
            raise InvalidInput("polynomials in different numbers of variables")

    def _coerce(self, other) -> MPoly:
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.constant(self.nx, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, Fraction(0)) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return MPoly._raw(self.nx, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.nx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, Fraction(0)) + c1 * c2
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return MPoly._raw(self.nx, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidInput("negative power of a polynomial")
        result, base = MPoly.constant(self.nx, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @classmethod
    def _raw(cls, nx: int, terms: dict) -> MPoly:
        obj = cls.__new__(cls)
        object.__setattr__(obj, "nx", nx)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def scale(self, c) -> MPoly:
        if c == 0:
            return MPoly(self.nx)
        return MPoly._raw(self.nx, {e: v * c for e, v in self.terms.items()})

    def shift_exp(self, exp: Sequence[int]) -> MPoly:
        """Multiply by the monomial with exponent ``exp`` (entries may be negative if exact)."""
        out = {}
        for e, c in self.terms.items():
            ne = tuple(a + b for a, b in zip(e, exp))
            if any(v < 0 for v in ne):
                raise InvalidInput("monomial division is not exact")
            out[ne] = c
        return MPoly._raw(self.nx, out)

    def leading(self) -> tuple[Exp, object]:
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: MPoly) -> MPoly:
        """Exact division in lex order; raises ArithmeticError when not exact."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading()
        inv = 1 / lc if not isinstance(lc, AlgNum) else lc.inverse()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, le))
            if any(v < 0 for v in qe):
                raise ArithmeticError("polynomial division is not exact")
            qc = c * inv
            quot[qe] = qc
            for oe, oc in other.terms.items():
                te = tuple(a + b for a, b in zip(qe, oe))
                v = rem.get(te, Fraction(0)) - qc * oc
                if v == 0:
                    rem.pop(te, None)
                else:
                    rem[te] = v
        return MPoly._raw(self.nx, quot)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nx == other.nx and self.terms == other.terms
        if isinstance(other, (int, Fraction, AlgNum)):
            return self == MPoly.constant(self.nx, other)
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.nx, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # z-structure
    def coeffs_z(self) -> list[MPoly]:
        """Coefficients of z^k as polynomials in x (with z-exponent 0)."""
        out = [dict() for _ in range(self.deg_z() + 1)]
        for e, c in self.terms.items():
            out[e[-1]][e[:-1] + (0,)] = c
        return [MPoly._raw(self.nx, t) for t in out]

    @classmethod
    def from_coeffs_z(cls, nx: int, coeffs: Sequence[MPoly]) -> MPoly:
        terms = {}
        for k, cpoly in enumerate(coeffs):
            for e, c in cpoly.terms.items():
                terms[e[:-1] + (k,)] = c
        return cls(nx, terms)

    def diff_z(self) -> MPoly:
        out = {}
        for e, c in self.terms.items():
            if e[-1] > 0:
                out[e[:-1] + (e[-1] - 1,)] = c * e[-1]
        return MPoly._raw(self.nx, out)

    def substitute_z(self, replacement: MPoly) -> MPoly:
        """h(x, replacement) by Horner in z."""
        cs = self.coeffs_z()
        acc = MPoly(self.nx)
        for cpoly in reversed(cs):
            acc = acc * replacement + cpoly
        return acc

    def set_zero(self, indices: Iterable[int]) -> MPoly:
        idx = set(indices)
        return MPoly._raw(self.nx, {e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)})

    def drop_vars(self, indices: Iterable[int]) -> MPoly:
        """Delete x-variables whose exponents are zero in every term."""
        idx = sorted(set(indices))
        keep = [i for i in range(self.nx + 1) if i not in idx]
        out = {}
        for e, c in self.terms.items():
            if any(e[i] != 0 for i in idx):
                raise InvalidInput("cannot drop a variable that occurs")
            out[tuple(e[i] for i in keep)] = c
        return MPoly._raw(self.nx - len(idx), out)

    def permute_x(self, order: Sequence[int]) -> MPoly:
        """Reorder x-variables: new variable i is old variable order[i]."""
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[j] for j in order) + (e[-1],)] = c
        return MPoly._raw(self.nx, out)

    def as_unipoly_z(self) -> UniPoly:
        """For a polynomial in z alone."""
        if any(any(e[:-1]) for e in self.terms):
            raise InvalidInput("polynomial depends on x")
        cs = [Fraction(0)] * (self.deg_z() + 1)
        for e, c in self.terms.items():
            cs[e[-1]] = c
        return UniPoly(cs)

    # printing
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.nx)
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (e[-1],) + e[:-1], reverse=True)
        out = ""
        for k, e in enumerate(keys):
            c = self.terms[e]
            mon = "*".join(
                names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a
            )
            neg = False
            if isinstance(c, AlgNum):
                cs = f"({format_element(c)})"
            else:
                neg = c < 0
                cs = format_element(abs(c))
            if mon and cs == "1":
                body = mon
            elif mon:
                body = f"{cs}*{mon}"
            else:
                body = cs
            if k == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"MPoly({self.to_str()})"


def default_names(nx: int) -> list[str]:
    if nx == 1:
        return ["x", "z"]
    return [f"x{i + 1}" for i in range(nx)] + ["z"]


# ---------------------------------------------------------------- parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    text = text.replace("−", "-")
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1):
            toks.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2):
            toks.append(("id", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.i = 0
        self.names = list(names)
        self.nx = len(names) - 1

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, ch):
        tok = self.take()
        if tok[0] != "op" or tok[1] != ch:
            raise ParseError(f"expected {ch!r}", tok[2])

    def parse(self) -> MPoly:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r} (use '*' for products)", tok[2])
        return out

    def expr(self) -> MPoly:
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> MPoly:
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if rhs.is_zero() or any(any(e) for e in rhs.terms):
                    raise ParseError("division only by a nonzero constant", pos)
                acc = acc.scale(1 / next(iter(rhs.terms.values())))
        return acc

    def unary(self) -> MPoly:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "-":
                raise ParseError("negative exponent", tok[2])
            tok = self.take()
            if tok[0] != "int":
                raise ParseError("exponent must be a nonnegative integer", tok[2])
            return base ** tok[1]
        return base

    def atom(self) -> MPoly:
        tok = self.take()
        if tok[0] == "int":
            return MPoly.constant(self.nx, tok[1])
        if tok[0] == "id":
            if tok[1] not in self.names:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2])
            return MPoly.var(self.nx, self.names.index(tok[1]))
        if tok[0] == "op" and tok[1] == "(":
            val = self.expr()
            self.expect_op(")")
            return val
        raise ParseError("unexpected end of input" if tok[0] == "end" else f"unexpected {tok[1]!r}", tok[2])


def parse(text: str, var_names: Sequence[str]) -> MPoly:
    """Parse polynomial text; the last listed variable plays the role of z."""
    if len(var_names) < 1 or len(set(var_names)) != len(var_names):
        raise InvalidInput("variable names must be distinct and nonempty")
    return _Parser(text, var_names).parse()


# ---------------------------------------------------------------- discriminants


def _bareiss_det(mat: list[list[MPoly]], nx: int) -> MPoly:
    m = [list(r) for r in mat]
    n = len(m)
    if n == 0:
        return MPoly.constant(nx, 1)
    sign = 1
    prev = MPoly.constant(nx, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((r for r in range(k + 1, n) if not m[r][k].is_zero()), None)
            if swap is None:
                return MPoly(nx)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign > 0 else -det


def _is_rational(f: MPoly) -> bool:
    return all(not isinstance(c, AlgNum) for c in f.terms.values())


def _to_sympy(f: MPoly, gens) -> "sympy.Poly":
    rep = {e: sympy.Rational(c.numerator, c.denominator) for e, c in f.terms.items()}
    return sympy.Poly.from_dict(rep, *gens, domain="QQ")


def _from_sympy(poly, nx: int) -> MPoly:
    terms = {tuple(e) + (0,): Fraction(int(c.p), int(c.q)) for e, c in poly.terms()}
    return MPoly(nx, terms)


def resultant_z(f: MPoly, g: MPoly) -> MPoly:
    """Sylvester resultant with respect to z (a polynomial in x).

    Rational inputs use sympy's subresultant algorithm; algebraic
    coefficients fall back to the Bareiss determinant below.
    """
    if _is_rational(f) and _is_rational(g) and f.deg_z() > 0 and g.deg_z() > 0:
        gens = sympy.symbols(f"q0:{f.nx + 1}")
        res = sympy.resultant(_to_sympy(f, gens), _to_sympy(g, gens), gens[-1])
        if f.nx == 0:
            val = sympy.Rational(res)
            return MPoly.constant(0, Fraction(int(val.p), int(val.q)))
        return _from_sympy(sympy.Poly(res, *gens[:-1]), f.nx)
    return sylvester_resultant_z(f, g)


def sylvester_resultant_z(f: MPoly, g: MPoly) -> MPoly:
    """Sylvester determinant by fraction-free elimination."""
    fc, gc = f.coeffs_z(), g.coeffs_z()
    m, n = len(fc) - 1, len(gc) - 1
    if m < 0 or n < 0:
        return MPoly(f.nx)
    if m == 0:
        return fc[0] ** n
    if n == 0:
        return gc[0] ** m
    size = m + n
    zero = MPoly(f.nx)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + k] = fc[m - k]
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = gc[n - k]
        rows.append(row)
    return _bareiss_det(rows, f.nx)


def discriminant_z(f: MPoly) -> MPoly:
    """Res_z(f, df/dz) divided by the leading z-coefficient, without sign adjustment."""
    if f.deg_z() < 1:
        raise InvalidInput("discriminant needs positive degree in z")
    res = resultant_z(f, f.diff_z())
    return res.exact_div(f.coeffs_z()[-1])


def _monomial_exponent(g: MPoly) -> tuple[int, ...] | None:
    """alpha when g (free of z) is x^alpha times a unit, else None."""
    pts = [e[:-1] for e in g.terms]
    alpha = tuple(min(p[i] for p in pts) for i in range(g.nx))
    return alpha if alpha in pts else None


def _factored_discriminant_exponent(f: MPoly):
    """Factor f over Q and use D(fg) = D(f) D(g) Res(f,g)^2 piece by piece.

    Returns (ok, alpha), or None when f has a single z-dependent factor.
    """
    gens = sympy.symbols(f"q0:{f.nx + 1}")
    _, parts = sympy.factor_list(_to_sympy(f, gens))
    zfacs, xfacs = [], []
    for p, k in parts:
        m = MPoly(f.nx, {tuple(e): Fraction(int(c.p), int(c.q)) for e, c in p.terms()})
        (zfacs if m.deg_z() > 0 else xfacs).append((m, k))
    if any(k > 1 for _, k in zfacs):
        raise NotSquarefree("repeated factor depending on z")
    if len(zfacs) < 2:
        return None
    pieces = [(discriminant_z(m), 1) for m, _ in zfacs if m.deg_z() > 1]
    for i in range(len(zfacs)):
        for j in range(i + 1, len(zfacs)):
            pieces.append((resultant_z(zfacs[i][0], zfacs[j][0]), 2))
    pieces.extend((m, k * (2 * f.deg_z() - 2)) for m, k in xfacs)
    alpha = [0] * f.nx
    for g, k in pieces:
        a = _monomial_exponent(g)
        if a is None:
            return False, None
        alpha = [s + k * v for s, v in zip(alpha, a)]
    return True, tuple(alpha)


def is_quasi_ordinary(f: MPoly) -> tuple[bool, tuple[int, ...] | None]:
    """Whether D_z(f) is a monomial times a unit; returns the monomial exponent."""
    if f.deg_z() < 1:
        return True, (0,) * f.nx
    if f.nx and f.deg_z() > 1 and _is_rational(f):
        fast = _factored_discriminant_exponent(f)
        if fast is not None:
            return fast
    disc = discriminant_z(f)
    if disc.is_zero():
        raise NotSquarefree("the z-discriminant vanishes identically (repeated factor)")
    alpha = _monomial_exponent(disc)
    return (True, alpha) if alpha is not None else (False, None)


# ---------------------------------------------------------------- Newton path


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Lower convex hull of (height, value) points sorted by height."""
    hull: list[tuple[int, int]] = []
    for p in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _hull_value(hull: list[tuple[int, int]], h: int) -> Fraction:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= h <= x2:
            return Fraction(y1) + Fraction(y2 - y1, x2 - x1) * (h - x1)
    if len(hull) == 1 and hull[0][0] == h:
        return Fraction(hull[0][1])
    raise ValueError("height outside hull range")


def monotone_path(support: Iterable[Exp]) -> list[Exp]:
    """Vertices of the compact faces when they form a monotone path in z.

    Raises NotMonotonePath otherwise.  The vertices are returned by
    increasing z-height.
    """
    pts = set(tuple(e) for e in support)
    if not pts:
        raise InvalidInput("empty support")
    d = len(next(iter(pts))) - 1
    by_h: dict[int, list] = {}
    for e in pts:
        by_h.setdefault(e[-1], []).append(e[:-1])
    mins = {h: tuple(min(p[i] for p in ps) for i in range(d)) for h, ps in by_h.items()}
    glob = tuple(min(m[i] for m in mins.values()) for i in range(d))
    heights = sorted(by_h)
    k0 = heights[0]
    top = next((h for h in heights if mins[h] == glob), None)
    if top is None or glob + (top,) not in pts:
        raise NotMonotonePath("no single z-highest vertex: compact faces do not form a path")
    if mins[k0] + (k0,) not in pts:
        raise NotMonotonePath("no single lowest vertex: compact faces do not form a path")
    span = [h for h in heights if h <= top]
    hulls = [_lower_hull([(h, mins[h][i]) for h in span]) for i in range(d)]
    breaks = {k0, top}
    for hull in hulls:
        breaks.update(h for h, _ in hull)
    verts = []
    for h in sorted(breaks):
        vals = tuple(_hull_value(hull, h) for hull in hulls)
        if h not in mins or vals != mins[h] or mins[h] + (h,) not in pts:
            raise NotMonotonePath(f"compact faces meeting z-height {h} are not a path")
        verts.append(mins[h] + (h,))
    return verts


def edge_lattice(lo: Exp, hi: Exp) -> tuple[int, tuple[int, ...], int]:
    """(n1, b, length) for the segment from the lower vertex lo to hi."""
    dz = hi[-1] - lo[-1]
    dx = tuple(lo[i] - hi[i] for i in range(len(lo) - 1))
    g = dz
    for v in dx:
        g = gcd(g, v)
    return dz // g, tuple(v // g for v in dx), g


def face_poly_w(h: MPoly, lo: Exp, hi: Exp) -> UniPoly:
    """Face polynomial of the edge in w = z^n1 / x^b, lowest point first."""
    n1, b, length = edge_lattice(lo, hi)
    cs = []
    for j in range(length + 1):
        e = tuple(lo[i] - j * b[i] for i in range(len(b))) + (lo[-1] + j * n1,)
        cs.append(h.coeff(e))
    return UniPoly(cs)


def distinct_root_count(p: UniPoly) -> int:
    return p.degree() - p.gcd(p.derivative()).degree()


# ---------------------------------------------------------------- pairs


@dataclass(frozen=True)
class FormExponents:
    nu: tuple[int, ...]

    def __post_init__(self):
        if any(int(v) < 1 for v in self.nu):
            raise InvalidInput("form exponents must be positive")


@dataclass(frozen=True)
class QOPair:
    """A polynomial h with form exponents nu; N and epsilon are derived from h."""

    h: MPoly
    nu: tuple[int, ...]
    N: tuple[int, ...] = field(init=False)
    epsilon: int = field(init=False)

    def __post_init__(self):
        if self.h.is_zero():
            raise InvalidInput("the zero polynomial has no zeta function")
        nu = tuple(int(v) for v in self.nu)
        if len(nu) != self.h.nx:
            raise InvalidInput(f"expected {self.h.nx} form exponents, got {len(nu)}")
        FormExponents(nu)
        object.__setattr__(self, "nu", nu)
        N = self.h.x_min()
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "epsilon", 1 if self.h.z_divides() else 0)
        for j, (n, v) in enumerate(zip(N, nu)):
            if n == 0 and v != 1:
                raise InvalidInput(
                    f"support condition fails: x{j + 1} does not divide h but its form exponent is {v}"
                )

    @property
    def d(self) -> int:
        return self.h.nx

    def with_h(self, h: MPoly) -> QOPair:
        return QOPair(h, self.nu)


def make_pair(h: MPoly, nu: Sequence[int] | None = None) -> QOPair:
    if nu is None:
        nu = (1,) * h.nx
    return QOPair(h, tuple(nu))


def z_part(h: MPoly) -> MPoly:
    """h with the monomial factor x^N removed."""
    N = h.x_min()
    return h.shift_exp(tuple(-v for v in N) + (0,))


def weierstrass_degree(h: MPoly) -> int:
    """Order in z of the residual at x = 0 (height of the z-highest vertex)."""
    res = z_part(h)
    at0 = [e[-1] for e in res.terms if not any(e[:-1])]
    if not at0:
        raise InvalidInput("residual vanishes on x = 0; h is not of the form x^N * f * unit")
    return min(at0)


def check_quasi_ordinary(h: MPoly) -> tuple[int, ...]:
    """Raise NotQuasiOrdinary unless h is quasi-ordinary; return the discriminant exponent."""
    if h.deg_z() < 1:
        return (0,) * h.nx
    ok, alpha = is_quasi_ordinary(z_part(h))
    if not ok:
        raise NotQuasiOrdinary("the z-discriminant is not a monomial times a unit")
    return alpha


def _bad_lowest_face(h: MPoly):
    """Return (b, beta) when the z=0 adjacent face is a power of z - beta*x^b."""
    if h.z_divides():
        return None
    verts = monotone_path(h.support())
    if len(verts) < 2:
        return None
    lo, hi = verts[0], verts[1]
    n1, b, _ = edge_lattice(lo, hi)
    if n1 != 1:
        return None
    fw = face_poly_w(h, lo, hi)
    if distinct_root_count(fw) != 1:
        return None
    sqf = fw.exact_div(fw.gcd(fw.derivative())).monic()
    return b, -sqf.coeffs[0]


def good_coordinates(p: QOPair, max_shifts: int = 50) -> tuple[QOPair, list]:
    """Shift z by monomials until the Newton path is in good coordinates."""
    h = p.h
    log = []
    while True:
        bad = _bad_lowest_face(h)
        if bad is None:
            break
        if len(log) >= max_shifts:
            b, beta = bad
            raise NonTerminatingNormalization(
                f"after {max_shifts} shifts the z=0 adjacent face is still "
                f"(z - ({format_element(beta)})*x^{list(b)})^m; the smooth branch "
                "is an infinite power series"
            )
        b, beta = bad
        shift = MPoly.monomial(tuple(b) + (0,), beta)
        h = h.substitute_z(MPoly.var(h.nx, h.nx) + shift)
        log.append((b, beta))
    return p.with_h(h), log


def newton_map_substitute(p: QOPair, edge, alpha) -> QOPair:
    """Pull back along x_l = y_l^p_l, z = (z1 + alpha) * prod y_l^bbar_l."""
    beta = alpha ** edge.n1 if isinstance(alpha, AlgNum) else to_field(alpha) ** edge.n1
    if alpha == 0 or edge.face_poly_w(beta) != 0:
        raise InvalidRoot("alpha^n1 is not a root of the face polynomial")
    d = p.d
    powers = [Fraction(1)]
    terms: dict = {}
    binom_rows: dict[int, list[int]] = {}
    for e, c in p.h.terms.items():
        k = e[-1]
        while len(powers) <= k:
            powers.append(powers[-1] * alpha)
        if k not in binom_rows:
            row = [1]
            for i in range(k):
                row.append(row[-1] * (k - i) // (i + 1))
            binom_rows[k] = row
        ye = tuple(edge.p[l] * e[l] + edge.bbar[l] * k for l in range(d))
        for j in range(k + 1):
            coef = c * binom_rows[k][j] * powers[k - j]
            key = ye + (j,)
            v = terms.get(key, Fraction(0)) + coef
            if v == 0:
                terms.pop(key, None)
            else:
                terms[key] = v
    pulled = MPoly._raw(d, terms)
    Nn = pulled.x_min()
    expect = tuple(edge.M[l] // edge.c[l] if edge.b[l] > 0 else p.N[l] for l in range(d))
    if Nn != expect:
        raise InvariantViolation(f"pull-back monomial part {Nn} differs from expected {expect}")
    nu = tuple(edge.p[l] * p.nu[l] + edge.bbar[l] for l in range(d))
    return QOPair(pulled, nu)


def essential_variables(p: QOPair) -> list[int]:
    """Indices (0-based) of x-variables dividing the discriminant or h."""
    alpha = check_quasi_ordinary(p.h)
    return [i for i in range(p.d) if alpha[i] > 0 or p.N[i] > 0]


def reduce_to_essential(p: QOPair) -> tuple[QOPair, list[int]]:
    """Set non-essential variables to zero and delete them."""
    ess = essential_variables(p)
    drop = [i for i in range(p.d) if i not in ess]
    h = p.h.set_zero(drop).drop_vars(drop)
    nu = tuple(p.nu[i] for i in ess)
    return QOPair(h, nu), ess
