"""Polynomials and rational functions in the symbolic parameters (n, w, wp).

Polynomials are elements of the sparse ring ``QQ[n, w, wp]`` from
:mod:`sympy.polys.rings`. :class:`RatFunc` adds denominators that are
products of linear factors, kept as a sorted multiset so that equality can
be decided by cross-multiplication without multivariate gcds.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from numbers import Rational

from sympy import QQ
from sympy.polys.rings import PolyElement, ring

from .errors import PoleError

R, n, w, wp = ring("n,w,wp", QQ)

SYMBOLS = {"n": n, "w": w, "wp": wp}


def is_poly(x) -> bool:
    return isinstance(x, PolyElement)


def is_symbolic(x) -> bool:
    return isinstance(x, (PolyElement, RatFunc))


def to_fraction(x) -> Fraction:
    """Convert an integer, rational, mpq, or constant polynomial to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, PolyElement):
        if not x.is_ground:
            raise TypeError(f"polynomial {x} is not constant")
        x = x.LC if x else 0
    if isinstance(x, RatFunc):
        if x.den:
            raise TypeError(f"rational function {x} is not constant")
        return to_fraction(x.num)
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot convert {x!r} to Fraction")


def _factor_key(f: PolyElement):
    return tuple(sorted((e, Fraction(int(c.numerator), int(c.denominator))) for e, c in f.terms()))


class RatFunc:
    """``num / prod(den)`` with ``den`` a multiset of monic linear polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=()):
        num = R(num) if not isinstance(num, PolyElement) else num
        factors = []
        for f in den:
            f = R(f) if not isinstance(f, PolyElement) else f
            if not f:
                raise PoleError("zero denominator factor")
            if f.is_ground:
                num = num * (1 / f.LC)
                continue
            if any(sum(e) > 1 for e in f.monoms()):
                raise ValueError(f"denominator factor {f} is not linear")
            lc = f.LC
            if lc != 1:
                num = num * (1 / lc)
                f = f * (1 / lc)
            factors.append(f)
        # cancel factors that divide the numerator exactly
        kept = []
        for f in factors:
            if num:
                q, r = num.div(f)
                if not r:
                    num = q
                    continue
            kept.append(f)
        if not num:
            kept = []
        self.num = num
        self.den = tuple(sorted(kept, key=_factor_key))

    @classmethod
    def coerce(cls, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, PolyElement):
            return cls(x)
        if isinstance(x, (int, Rational)):
            return cls(R(Fraction(x)))
        return cls(R(to_fraction(x)))

    def _den_product(self):
        out = R(1)
        for f in self.den:
            out = out * f
        return out

    @staticmethod
    def _common(a: tuple, b: tuple):
        ca = Counter(a)
        cb = Counter(b)
        union = ca | cb
        return union, ca, cb

    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.den and not self.den:
            return RatFunc(self.num + other.num)
        union, ca, cb = self._common(self.den, other.den)
        na, nb = self.num, other.num
        for f, m in union.items():
            for _ in range(m - ca[f]):
                na = na * f
            for _ in range(m - cb[f]):
                nb = nb * f
        den = [f for f, m in union.items() for _ in range(m)]
        return RatFunc(na + nb, den)

    __radd__ = __add__

    def __neg__(self):
        out = RatFunc.__new__(RatFunc)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division is supported by constants, linear polynomials, and
        rational functions whose numerator is constant or linear."""
        other = RatFunc.coerce(other)
        top = other.num
        if not top:
            raise PoleError("division by zero rational function")
        if any(sum(e) > 1 for e in top.monoms()):
            raise ValueError(f"cannot divide by non-linear numerator {top}")
        num = self.num
        for f in other.den:
            num = num * f
        return RatFunc(num, self.den + (top,))

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __eq__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num * other._den_product() == other.num * self._den_product()

    def __hash__(self):
        raise TypeError("RatFunc is unhashable")

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return not self.is_zero()

    def is_polynomial(self) -> bool:
        return not self.den

    def evaluate(self, **values) -> Fraction | RatFunc:
        """Substitute numbers for some of n, w, wp.

        Returns a Fraction once no symbols remain.
        """
        num = self.num
        den = list(self.den)
        for name, val in values.items():
            g = SYMBOLS[name]
            v = R(val) if not isinstance(val, PolyElement) else val
            num = num.compose(g, v)
            den = [f.compose(g, v) for f in den]
        for f in den:
            if not f:
                raise PoleError(f"denominator vanishes at {values}")
        out = RatFunc(num, den)
        if not out.den and out.num.is_ground:
            return to_fraction(out.num)
        return out

    def __repr__(self):
        if not self.den:
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num}) / {' * '.join(f'({f})' for f in self.den)})"

    def __str__(self):
        if not self.den:
            return str(self.num)
        return f"({self.num})/({')*('.join(str(f) for f in self.den)})"


def substitute(x, **values):
    """Substitute values into a Fraction, polynomial, or RatFunc."""
    if isinstance(x, RatFunc):
        return x.evaluate(**values)
    if isinstance(x, PolyElement):
        for name, val in values.items():
            x = x.compose(SYMBOLS[name], R(val) if not isinstance(val, PolyElement) else val)
        return to_fraction(x) if x.is_ground else x
    return x


def is_zero(x) -> bool:
    if isinstance(x, RatFunc):
        return x.is_zero()
    return not x


def render(x) -> str:
    """Exact text rendering: ``p/q`` for rationals, sympy syntax otherwise."""
    if isinstance(x, (PolyElement, RatFunc)):
        if isinstance(x, PolyElement) and x.is_ground:
            return render(to_fraction(x))
        return str(x)
    f = to_fraction(x)
    return str(f)
