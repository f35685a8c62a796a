"""Algebra of the zeta-function values.

``RatFuncS`` is a rational function of s whose denominator is a product of
linear factors N*s + nu.  ``MotivicExpr`` is a fraction whose numerator is
a Laurent polynomial in L and a polynomial in T, and whose denominator is
a product of binomials 1 - L^-a T^b.  ``chi_specialize`` maps the second
kind to the first by T = L^-s and the Euler characteristic.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

from .errors import InvalidInput, SpecializationPole
from .exactalg import UniPoly

_ONE = UniPoly([1])


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _linear(N: int, nu: int) -> UniPoly:
    return UniPoly([nu, N])


def _normalize_factor(N: int, nu: int) -> tuple[tuple[int, int], Fraction]:
    """Primitive representative of N*s + nu and the constant pulled out."""
    if N == 0:
        raise InvalidInput("constant factor")
    g = gcd(N, nu)
    if N < 0:
        g = -g
    return (N // g, nu // g), Fraction(g)


class RatFuncS:
    """num(s) / prod (N*s + nu)^m with primitive factors and no common roots."""

    __slots__ = ("num", "den")

    def __init__(self, num=1, den: Mapping | Iterable = ()):
        if not isinstance(num, UniPoly):
            num = UniPoly([num])
        items = den.items() if isinstance(den, Mapping) else [(f, 1) for f in den]
        cden: Counter = Counter()
        const = Fraction(1)
        for (N, nu), m in items:
            if m == 0:
                continue
            if N == 0:
                const *= Fraction(nu) ** m
                continue
            key, c = _normalize_factor(N, nu)
            cden[key] += m
            const *= c**m
        num = num.scale(1 / const)
        for key in list(cden):
            lin = _linear(*key)
            while cden[key] > 0 and not num.is_zero():
                q, r = num.divmod(lin)
                if not r.is_zero():
                    break
                num = q
                cden[key] -= 1
            if cden[key] <= 0 or num.is_zero():
                del cden[key]
        if num.is_zero():
            cden = Counter()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", dict(sorted(cden.items())))

    def __setattr__(self, key, value):
        raise AttributeError("RatFuncS is immutable")

    @classmethod
    def inv_linear(cls, N: int, nu: int, power: int = 1) -> RatFuncS:
        return cls(1, {(N, nu): power})

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _den_poly(self, exclude: Mapping | None = None) -> UniPoly:
        out = _ONE
        for key, m in self.den.items():
            e = m - (exclude or {}).get(key, 0)
            if e > 0:
                out = out * _linear(*key) ** e
        return out

    def __add__(self, other):
        other = _as_rat(other)
        common = Counter(self.den)
        for k, m in other.den.items():
            common[k] = max(common[k], m)
        a = self.num * _factor_prod(common, self.den)
        b = other.num * _factor_prod(common, other.den)
        return RatFuncS(a + b, common)

    __radd__ = __add__

    def __neg__(self):
        return RatFuncS(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rat(other))

    def __rsub__(self, other):
        return _as_rat(other) - self

    def __mul__(self, other):
        other = _as_rat(other)
        den = Counter(self.den)
        den.update(other.den)
        return RatFuncS(self.num * other.num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFuncS(self.num.scale(1 / Fraction(other)), self.den)
        raise InvalidInput("RatFuncS division only by constants")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFuncS(other)
        if not isinstance(other, RatFuncS):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, tuple(self.den.items())))

    def __call__(self, s):
        s = Fraction(s)
        val = self.num(s)
        for (N, nu), m in self.den.items():
            val /= (N * s + nu) ** m
        return val

    def poles(self) -> list[tuple[int, int, int]]:
        """(N, nu, order) for each pole s = -nu/N."""
        return [(N, nu, m) for (N, nu), m in self.den.items()]

    def pole_values(self) -> set[Fraction]:
        return {Fraction(-nu, N) for (N, nu) in self.den}

    # printing
    def _num_int(self) -> tuple[UniPoly, int]:
        den_l = 1
        for c in self.num.coeffs:
            den_l = lcm(den_l, c.denominator)
        return self.num.scale(den_l), den_l

    def to_str(self) -> str:
        num, scale = self._num_int()
        nstr = _poly_str(num)
        facs = [_factor_str(k, m) for k, m in self.den.items()]
        if scale != 1:
            facs.insert(0, str(scale))
        if not facs:
            return nstr
        if len(num.coeffs) > 1 and sum(1 for c in num.coeffs if c != 0) > 1:
            nstr = f"({nstr})"
        dstr = facs[0] if len(facs) == 1 else "(" + "*".join(facs) + ")"
        return f"{nstr}/{dstr}"

    def to_latex(self) -> str:
        num, scale = self._num_int()
        nstr = _poly_str(num, mul="", paren=False)
        parts = [] if scale == 1 else [str(scale)]
        for (N, nu), m in self.den.items():
            lin = _poly_str(_linear(N, nu), mul="")
            parts.append(f"({lin})" + (f"^{{{m}}}" if m > 1 else ""))
        if not parts:
            return nstr
        return r"\frac{" + nstr + "}{" + "".join(parts) + "}"

    def to_json(self) -> dict:
        return {
            "num": [_fmt_frac(c) for c in self.num.coeffs],
            "den": [[N, nu, m] for (N, nu), m in self.den.items()],
        }

    def __repr__(self):
        return f"RatFuncS({self.to_str()})"


def _factor_prod(common: Mapping, have: Mapping) -> UniPoly:
    out = _ONE
    for k, m in common.items():
        e = m - have.get(k, 0)
        if e > 0:
            out = out * _linear(*k) ** e
    return out


def _as_rat(x) -> RatFuncS:
    if isinstance(x, RatFuncS):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFuncS(x)
    raise TypeError(f"cannot use {x!r} as a rational function")


def _poly_str(p: UniPoly, mul: str = "*", paren: bool = False) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree(), -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mon = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
        a = abs(c)
        if mon and a == 1:
            body = mon
        elif mon:
            body = f"{_fmt_frac(a)}{mul}{mon}"
        else:
            body = _fmt_frac(a)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def _factor_str(key: tuple[int, int], m: int) -> str:
    s = f"({_poly_str(_linear(*key))})"
    return s if m == 1 else f"{s}^{m}"


# ---------------------------------------------------------------- motivic


LT = tuple  # (L exponent, T exponent)


class MotivicExpr:
    """P(L, T) / prod (1 - L^-a T^b)^m as a single exact fraction."""

    __slots__ = ("num", "den")

    def __init__(self, num: Mapping | None = None, den: Mapping | Iterable = ()):
        clean = {}
        for k, c in (num or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[(int(k[0]), int(k[1]))] = c
        items = den.items() if isinstance(den, Mapping) else [(f, 1) for f in den]
        cden = Counter()
        for (a, b), m in items:
            if a < 0 or b < 0 or (a == 0 and b == 0):
                raise InvalidInput(f"invalid denominator factor 1 - L^-{a} T^{b}")
            if m:
                cden[(a, b)] += m
        if not clean:
            cden = Counter()
        object.__setattr__(self, "num", clean)
        object.__setattr__(self, "den", dict(sorted((k, m) for k, m in cden.items() if m > 0)))

    def __setattr__(self, key, value):
        raise AttributeError("MotivicExpr is immutable")

    # constructors
    @classmethod
    def const(cls, c) -> MotivicExpr:
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, lexp: int, texp: int, c=1) -> MotivicExpr:
        return cls({(lexp, texp): c})

    @classmethod
    def L(cls, k: int = 1) -> MotivicExpr:
        return cls.monomial(k, 0)

    @classmethod
    def T(cls, k: int = 1) -> MotivicExpr:
        return cls.monomial(0, k)

    @classmethod
    def geometric(cls, a: int, b: int) -> MotivicExpr:
        """1 / (1 - L^-a T^b)."""
        return cls({(0, 0): 1}, {(a, b): 1})

    @classmethod
    def L_minus_1(cls, power: int = 1) -> MotivicExpr:
        return cls({(1, 0): 1, (0, 0): -1}) ** power

    def is_zero(self) -> bool:
        return not self.num

    # arithmetic
    def __add__(self, other):
        other = _as_mot(other)
        common = Counter(self.den)
        for k, m in other.den.items():
            common[k] = max(common[k], m)
        a = _pmul(self.num, _binom_prod(common, self.den))
        b = _pmul(other.num, _binom_prod(common, other.den))
        return MotivicExpr(_padd(a, b), common)

    __radd__ = __add__

    def __neg__(self):
        return MotivicExpr({k: -c for k, c in self.num.items()}, self.den)

    def __sub__(self, other):
        return self + (-_as_mot(other))

    def __rsub__(self, other):
        return _as_mot(other) - self

    def __mul__(self, other):
        other = _as_mot(other)
        den = Counter(self.den)
        den.update(other.den)
        return MotivicExpr(_pmul(self.num, other.num), den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MotivicExpr.const(1)
        for _ in range(n):
            result = result * self
        return result

    def cleared_against(self, other: MotivicExpr) -> tuple[dict, dict]:
        common = Counter(self.den)
        for k, m in other.den.items():
            common[k] = max(common[k], m)
        a = _pmul(self.num, _binom_prod(common, self.den))
        b = _pmul(other.num, _binom_prod(common, other.den))
        return a, b

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MotivicExpr.const(other)
        if not isinstance(other, MotivicExpr):
            return NotImplemented
        a, b = self.cleared_against(other)
        return a == b

    def __hash__(self):  # equality is by value after clearing; hash a coarse invariant
        return hash(len(self.den))

    def simplify(self) -> MotivicExpr:
        """Cancel denominator binomials that divide the numerator exactly."""
        num = dict(self.num)
        den = Counter(self.den)
        for key in list(den):
            while den[key] > 0:
                q = _div_binomial(num, *key)
                if q is None:
                    break
                num = q
                den[key] -= 1
        return MotivicExpr(num, den)

    def denominator_factors(self) -> list[tuple[int, int, int]]:
        return [(a, b, m) for (a, b), m in self.den.items()]

    def series(self, tdeg: int, ldeg: int) -> dict:
        """Truncated expansion: coefficients of L^-i T^j, j <= tdeg, i <= ldeg.

        Requires every numerator L-exponent to be nonpositive.
        """
        cur = {k: c for k, c in self.num.items() if k[1] <= tdeg and -k[0] <= ldeg}
        if any(k[0] > 0 for k in self.num):
            raise InvalidInput("series expansion needs nonpositive L exponents")
        for (a, b), m in self.den.items():
            for _ in range(m):
                geo = {}
                k = 0
                while k * b <= tdeg and k * a <= ldeg:
                    geo[(-a * k, b * k)] = Fraction(1)
                    k += 1
                    if a == 0 and b == 0:
                        break
                cur = {
                    key: c
                    for key, c in _pmul(cur, geo).items()
                    if key[1] <= tdeg and -key[0] <= ldeg
                }
        return {k: c for k, c in cur.items() if c != 0}

    def to_str(self) -> str:
        nstr = _lt_str(self.num)
        if not self.den:
            return nstr
        facs = []
        for (a, b), m in self.den.items():
            f = "(1-" + _mono_str(-a, b, 1) + ")"
            facs.append(f if m == 1 else f"{f}^{m}")
        if len(self.num) > 1:
            nstr = f"({nstr})"
        dstr = facs[0] if len(facs) == 1 else "(" + "*".join(facs) + ")"
        return f"{nstr}/{dstr}"

    def __repr__(self):
        return f"MotivicExpr({self.to_str()})"


def _as_mot(x) -> MotivicExpr:
    if isinstance(x, MotivicExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return MotivicExpr.const(x)
    raise TypeError(f"cannot use {x!r} as a motivic expression")


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if v == 0:
            out.pop(k, None)
        else:
            out[k] = v
    return out


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (l1, t1), c1 in a.items():
        for (l2, t2), c2 in b.items():
            k = (l1 + l2, t1 + t2)
            v = out.get(k, 0) + c1 * c2
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
    return out


def _binom_prod(common: Mapping, have: Mapping) -> dict:
    out = {(0, 0): Fraction(1)}
    for (a, b), m in common.items():
        for _ in range(m - have.get((a, b), 0)):
            out = _pmul(out, {(0, 0): Fraction(1), (-a, b): Fraction(-1)})
    return out


def _div_binomial(num: dict, a: int, b: int) -> dict | None:
    """num / (1 - L^-a T^b) if exact, else None."""
    rem = dict(num)
    quot: dict = {}
    # divide by the monomial of lowest (T, -L) order: repeatedly kill the minimal term
    while rem:
        key = min(rem, key=lambda k: (k[1], -k[0]))
        c = rem.pop(key)
        quot[key] = quot.get(key, 0) + c
        nk = (key[0] - a, key[1] + b)
        v = rem.get(nk, 0) + c
        if v == 0:
            rem.pop(nk, None)
        else:
            rem[nk] = v
        if len(quot) > 10 * (len(num) + 1) + 200:
            return None
        if rem and b == 0 and a > 0 and min(k[0] for k in rem) < min(k[0] for k in num) - 64 * a:
            return None
        if rem and b > 0 and max(k[1] for k in rem) > max(k[1] for k in num) + b:
            return None
    return {k: c for k, c in quot.items() if c != 0}


def _mono_str(lexp: int, texp: int, c) -> str:
    parts = []
    if lexp:
        parts.append("L" if lexp == 1 else f"L^{lexp}")
    if texp:
        parts.append("T" if texp == 1 else f"T^{texp}")
    body = "*".join(parts)
    c = Fraction(c)
    if not body:
        return _fmt_frac(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{_fmt_frac(c)}*{body}"


def _lt_str(num: dict) -> str:
    if not num:
        return "0"
    keys = sorted(num, key=lambda k: (k[1], k[0]))
    out = ""
    for i, k in enumerate(keys):
        s = _mono_str(k[0], k[1], num[k])
        if i and not s.startswith("-"):
            out += "+"
        out += s
    return out


# ---------------------------------------------------------------- specialization


def _binom_series_coeff(c0: Fraction, c1: Fraction, k: int) -> UniPoly:
    """binom(c0 + c1*s, k) as a polynomial in s."""
    out = UniPoly([1])
    for i in range(k):
        out = out * UniPoly([c0 - i, c1])
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return out.scale(Fraction(1, fact))


def _series_mul(a: list, b: list, order: int) -> list:
    out = [UniPoly() for _ in range(order + 1)]
    for i, x in enumerate(a[: order + 1]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: order + 1 - i]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _inverse_series(a: list, order: int) -> list:
    """Inverse of a power series with constant term 1."""
    inv = [UniPoly([1])] + [UniPoly() for _ in range(order)]
    for k in range(1, order + 1):
        acc = UniPoly()
        for j in range(1, k + 1):
            if j < len(a):
                acc = acc + a[j] * inv[k - j]
        inv[k] = -acc
    return inv


def _geometric_unit(a: int, b: int, order: int) -> list:
    """D(eps) with 1 - (1+eps)^-(a+b*s) = (a+b*s) * eps * D(eps)."""
    u = UniPoly([a, b])
    out = []
    rising = UniPoly([1])
    fact = 1
    for k in range(order + 1):
        fact *= k + 1
        coeff = rising.scale(Fraction((-1) ** k, fact))
        out.append(coeff)
        rising = rising * (u + UniPoly([k + 1]))
    return out


def chi_specialize(expr: MotivicExpr) -> RatFuncS:
    """Substitute T = L^-s, expand at L = 1, return the constant term in L-1."""
    if expr.is_zero():
        return RatFuncS(0)
    order = sum(expr.den.values())
    series = [UniPoly() for _ in range(order + 1)]
    for (lexp, texp), c in expr.num.items():
        for k in range(order + 1):
            series[k] = series[k] + _binom_series_coeff(Fraction(lexp), Fraction(-texp), k).scale(c)
    den: Counter = Counter()
    for (a, b), m in expr.den.items():
        inv = _inverse_series(_geometric_unit(a, b, order), order)
        for _ in range(m):
            series = _series_mul(series, inv, order)
        den[(b, a)] += m
    for k in range(order):
        if not series[k].is_zero():
            raise SpecializationPole(
                f"coefficient of (L-1)^{k - order} does not vanish after T = L^-s"
            )
    return RatFuncS(series[order], den)
