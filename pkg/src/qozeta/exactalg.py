"""Exact arithmetic in towers of number fields.

Field elements are plain ``Fraction`` objects at level 0 and ``AlgNum``
objects above it.  Every ``AlgNum`` is stored in the smallest level of its
tower that contains it, so equality and hashing are structural.

Univariate polynomials (``UniPoly``) work over any level.  Factorization
over the rationals is delegated to sympy (Zassenhaus); over an extension
it uses Trager's norm method, which reduces to the level below.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import sympy

from .errors import InvalidInput

Rat = Fraction


def to_field(x):
    """Coerce ints to Fraction; leave Fraction and AlgNum untouched."""
    if isinstance(x, (Fraction, AlgNum)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a field element: {x!r}")


def field_inv(x):
    if isinstance(x, AlgNum):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("inverse of zero")
    return 1 / Fraction(x)


def element_key(x):
    """Total order on field elements used for deterministic choices."""
    if isinstance(x, AlgNum):
        return (x.tower.depth, tuple(element_key(c) for c in x.coords))
    return (0, Fraction(x))


# ---------------------------------------------------------------- towers


class FieldTower:
    """A chain Q = K0 < K1 < ... < Kn, each Ki = K(i-1)[t]/(m_i)."""

    __slots__ = ("levels", "_hash")

    def __init__(self, levels: Sequence[tuple[str, tuple]] = (), _verified: bool = False):
        levels = tuple((name, tuple(to_field(c) for c in mp)) for name, mp in levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "_hash", hash(levels))
        if not _verified:
            for k, (name, mp) in enumerate(levels):
                below = FieldTower(levels[:k], _verified=True)
                poly = UniPoly(mp)
                if poly.degree() < 2 or poly.lc() != 1:
                    raise InvalidInput(f"minimal polynomial of {name} must be monic of degree >= 2")
                facs = factor_irreducible(poly, below)
                if len(facs) != 1 or facs[0][1] != 1:
                    raise InvalidInput(f"minimal polynomial of {name} is reducible")

    def __setattr__(self, key, value):
        raise AttributeError("FieldTower is immutable")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def degree(self) -> int:
        return reduce(lambda a, lv: a * (len(lv[1]) - 1), self.levels, 1)

    def base(self) -> FieldTower:
        return FieldTower(self.levels[:-1], _verified=True)

    def top_degree(self) -> int:
        return len(self.levels[-1][1]) - 1

    def minpoly(self) -> UniPoly:
        return UniPoly(self.levels[-1][1])

    def generator(self) -> AlgNum:
        if not self.levels:
            raise InvalidInput("the rationals have no generator")
        k = self.top_degree()
        return AlgNum(self, (Fraction(0), Fraction(1)) + (Fraction(0),) * (k - 2))

    def is_prefix_of(self, other: FieldTower) -> bool:
        return other.levels[: self.depth] == self.levels

    def extend(self, name: str, minpoly: UniPoly) -> FieldTower:
        levels = self.levels + ((name, tuple(minpoly.coeffs)),)
        tower = FieldTower(levels, _verified=True)
        facs = factor_irreducible(minpoly, self)
        if minpoly.degree() < 2 or len(facs) != 1 or facs[0][1] != 1:
            raise InvalidInput(f"{minpoly} is not irreducible of degree >= 2")
        return tower

    def names(self) -> list[str]:
        return [name for name, _ in self.levels]

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.levels == other.levels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.levels:
            return "QQ"
        parts = [f"{name}: {UniPoly(mp).to_str('t')}" for name, mp in self.levels]
        return "QQ(" + ", ".join(parts) + ")"


QQ = FieldTower()


def common_tower(a: FieldTower, b: FieldTower) -> FieldTower:
    if a.is_prefix_of(b):
        return b
    if b.is_prefix_of(a):
        return a
    raise InvalidInput(f"incompatible field towers {a} and {b}")


def tower_of(x) -> FieldTower:
    return x.tower if isinstance(x, AlgNum) else QQ


def embed(x, tower: FieldTower) -> tuple:
    """Coordinates of ``x`` over the base of ``tower`` (x must lie in tower)."""
    k = tower.top_degree()
    if isinstance(x, AlgNum) and x.tower == tower:
        return x.coords
    return (x,) + (Fraction(0),) * (k - 1)


def _make(tower: FieldTower, coords: Sequence):
    """Build an element from coordinates, demoting to the base when possible."""
    if all(c == 0 for c in coords[1:]):
        return coords[0]
    return AlgNum(tower, tuple(coords))


def _reduce_mod(prod: list, mp: tuple) -> list:
    k = len(mp) - 1
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c == 0:
            continue
        for j in range(k):
            if mp[j] != 0:
                prod[i - k + j] = prod[i - k + j] - c * mp[j]
        prod[i] = Fraction(0)
    return prod[:k] + [Fraction(0)] * (k - len(prod[:k]))


class AlgNum:
    """Element of the top level of a FieldTower, as coordinates in 1, t, t^2, ..."""

    __slots__ = ("tower", "coords", "_hash")

    def __init__(self, tower: FieldTower, coords: Sequence):
        if not tower.levels:
            raise InvalidInput("AlgNum needs a nontrivial tower; use Fraction at level 0")
        k = tower.top_degree()
        coords = list(coords)
        if len(coords) > k:
            coords = _reduce_mod(coords, tower.levels[-1][1])
        coords = tuple(coords) + (Fraction(0),) * (k - len(coords))
        object.__setattr__(self, "tower", tower)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("AlgNum is immutable")

    def _lift(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if not isinstance(other, (Fraction, AlgNum)):
            return None, None
        tower = common_tower(self.tower, tower_of(other))
        if tower != self.tower:
            return embed(self, tower), embed(other, tower)
        return self.coords, embed(other, tower)

    def _tower_with(self, other):
        return common_tower(self.tower, tower_of(other if not isinstance(other, int) else Fraction(other)))

    def __add__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        return _make(self._tower_with(other), [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(self.tower, tuple(-c for c in self.coords))

    def __sub__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        return _make(self._tower_with(other), [x - y for x, y in zip(a, b)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._lift(other)
        if a is None:
            return NotImplemented
        tower = self._tower_with(other)
        if all(c == 0 for c in b[1:]):
            return _make(tower, [x * b[0] for x in a])
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y != 0:
                    prod[i + j] = prod[i + j] + x * y
        return _make(tower, _reduce_mod(prod, tower.levels[-1][1]))

    __rmul__ = __mul__

    def inverse(self):
        mp = UniPoly(self.tower.levels[-1][1])
        a = UniPoly(self.coords)
        g, s, _ = a.xgcd(mp)
        if g.degree() != 0:
            raise ZeroDivisionError("non-invertible element")
        inv0 = field_inv(g.coeffs[0])
        return _make(self.tower, [c * inv0 for c in s.coeffs] or [Fraction(0)])

    def __truediv__(self, other):
        other = to_field(other)
        return self * field_inv(other)

    def __rtruediv__(self, other):
        return to_field(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = Fraction(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return self.tower == other.tower and self.coords == other.coords
        return False

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.tower, self.coords))
            object.__setattr__(self, "_hash", h)
        return h

    def norm(self):
        """Norm from the top level down to the level below."""
        return _norm_down(self, self.tower)

    def __repr__(self):
        return format_element(self)


def format_element(x, names: Sequence[str] | None = None) -> str:
    if not isinstance(x, AlgNum):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    gen = x.tower.levels[-1][0]
    parts = []
    for i, c in enumerate(x.coords):
        if c == 0:
            continue
        cs = format_element(c)
        if isinstance(c, AlgNum) or (" " in cs) or ("/" in cs and i > 0):
            cs = f"({cs})"
        mon = "" if i == 0 else (gen if i == 1 else f"{gen}^{i}")
        if not mon:
            parts.append(cs)
        elif cs == "1":
            parts.append(mon)
        elif cs == "-1":
            parts.append("-" + mon)
        else:
            parts.append(f"{cs}*{mon}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


def _det(rows: list[list]):
    """Determinant by Gaussian elimination over a field."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        pinv = field_inv(p)
        for r in range(col + 1, n):
            f = m[r][col]
            if f == 0:
                continue
            f = f * pinv
            for c in range(col, n):
                m[r][c] = m[r][c] - f * m[col][c]
    return det


def _norm_down(x, tower: FieldTower):
    """Norm of x (an element of tower) to tower.base()."""
    k = tower.top_degree()
    if not (isinstance(x, AlgNum) and x.tower == tower):
        return to_field(x) ** k
    gen = tower.generator()
    rows = []
    cur = x
    for _ in range(k):
        rows.append(list(embed(cur, tower)))
        cur = cur * gen
    return _det(rows)


# ---------------------------------------------------------------- polynomials


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of t^i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_field(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, key, value):
        raise AttributeError("UniPoly is immutable")

    @staticmethod
    def monomial(deg: int, c=1) -> UniPoly:
        return UniPoly([0] * deg + [c])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def tower(self) -> FieldTower:
        t = QQ
        for c in self.coeffs:
            t = common_tower(t, tower_of(c))
        return t

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = UniPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> UniPoly:
        return UniPoly([a * c for a in self.coeffs])

    def monic(self) -> UniPoly:
        if not self.coeffs:
            return self
        return self.scale(field_inv(self.lc()))

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        if len(rem) - 1 < dq:
            return UniPoly(), self
        inv_lc = field_inv(other.lc())
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = c * inv_lc
            quot[i - dq] = c
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    rem[i - dq + j] = rem[i - dq + j] - c * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def exact_div(self, other: UniPoly) -> UniPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def derivative(self) -> UniPoly:
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_linear(self, a, b) -> UniPoly:
        """Return p(a*t + b)."""
        acc = UniPoly()
        lin = UniPoly([b, a])
        for c in reversed(self.coeffs):
            acc = acc * lin + UniPoly([c])
        return acc

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, _as_poly(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
        """(g, s, t) with s*self + t*other = g (g not normalized)."""
        r0, r1 = self, other
        s0, s1 = UniPoly([1]), UniPoly()
        t0, t1 = UniPoly(), UniPoly([1])
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        return r0, s0, t0

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, AlgNum)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def key(self):
        return (self.degree(), tuple(element_key(c) for c in reversed(self.coeffs)))

    def to_str(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = format_element(c)
            if isinstance(c, AlgNum) and (" " in cs):
                cs = f"({cs})"
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mon:
                parts.append(cs)
            elif cs == "1":
                parts.append(mon)
            elif cs == "-1":
                parts.append("-" + mon)
            else:
                parts.append(f"{cs}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"UniPoly({self.to_str()})"


def _as_poly(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly([x])


# ---------------------------------------------------------------- factoring


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: monic pairwise coprime squarefree q_i with p = lc * prod q_i^i."""
    if p.is_zero():
        raise InvalidInput("squarefree decomposition of the zero polynomial")
    if p.degree() == 0:
        return []
    f = p.monic()
    out = []
    df = f.derivative()
    a = f.gcd(df)
    b = f.exact_div(a)
    c = df.exact_div(a) if not df.is_zero() else UniPoly()
    d = c - b.derivative()
    i = 1
    while b.degree() > 0:
        g = b.gcd(d)
        if g.degree() > 0:
            out.append((g, i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    return out


def _factor_over_q(p: UniPoly) -> list[tuple[UniPoly, int]]:
    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**i for i, c in enumerate(p.coeffs))
    _, facs = sympy.factor_list(sympy.Poly(expr, t, domain="QQ"))
    out = []
    for f, m in facs:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        out.append((UniPoly(cs).monic(), m))
    return out


def _interpolate(xs: list, ys: list) -> UniPoly:
    """Newton interpolation over a field."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) * field_inv(Fraction(xs[i] - xs[i - j]))
    poly = UniPoly([coef[-1]])
    for i in range(n - 2, -1, -1):
        poly = poly * UniPoly([-xs[i], 1]) + UniPoly([coef[i]])
    return poly


def poly_norm(g: UniPoly, tower: FieldTower) -> UniPoly:
    """Norm of g in K[x] down to B[x], K = top level of tower, B its base."""
    deg = g.degree() * tower.top_degree()
    xs = list(range(deg + 1))
    ys = [_norm_down(g(Fraction(x)), tower) for x in xs]
    return _interpolate(xs, ys)


def _trager_squarefree(q: UniPoly, tower: FieldTower) -> list[UniPoly]:
    base = tower.base()
    theta = tower.generator()
    shift = 0
    for attempt in range(200):
        s = (attempt + 1) // 2 * (1 if attempt % 2 else -1)
        g = q.compose_linear(Fraction(1), -s * theta) if s else q
        nrm = poly_norm(g, tower)
        if nrm.gcd(nrm.derivative()).degree() == 0:
            shift = s
            break
    else:  # pragma: no cover - a valid shift always exists
        raise ArithmeticError("no squarefree norm found")
    facs = factor_irreducible(nrm, base)
    if len(facs) == 1:
        return [q.monic()]
    out = []
    for nf, _ in facs:
        h = g.gcd(nf)
        if h.degree() > 0:
            out.append(h.compose_linear(Fraction(1), shift * theta) if shift else h)
    return [f.monic() for f in out]


def factor_irreducible(p: UniPoly, tower: FieldTower | None = None) -> list[tuple[UniPoly, int]]:
    """Monic irreducible factors with multiplicities; p = lc(p) * prod f^m."""
    if p.is_zero():
        raise InvalidInput("factorization of the zero polynomial")
    if tower is None:
        tower = p.tower()
    else:
        tower = common_tower(tower, p.tower())
    if p.degree() == 0:
        return []
    if tower.depth == 0:
        out = _factor_over_q(p)
    else:
        out = []
        for q, m in squarefree_decomposition(p):
            if q.degree() == 1:
                out.append((q, m))
                continue
            out.extend((f, m) for f in _trager_squarefree(q, tower))
    return sorted(out, key=lambda fm: (fm[0].key(), fm[1]))


def adjoin_root(tower: FieldTower, p: UniPoly, name: str | None = None):
    """Return (tower', root) with p(root) = 0, adding a level only if needed."""
    if p.degree() < 1:
        raise InvalidInput("adjoin_root needs a nonconstant polynomial")
    facs = factor_irreducible(p, tower)
    first = facs[0][0]
    tower = common_tower(tower, p.tower())
    if first.degree() == 1:
        return tower, -first.coeffs[0]
    if name is None:
        name = f"a{tower.depth + 1}"
    new = FieldTower(tower.levels + ((name, first.coeffs),), _verified=True)
    return new, new.generator()

