"""Polynomial identities for the factorised Poincare-space operators.

Here lambda stands for the Laplacian of the Poincare metric.  Operators
``P o f o P'`` are bilinear in the multiplier and never require commuting
the Laplacian past it, so they are modelled by two commuting variables:
``lamL`` (Laplacian applied after multiplying) and ``lamR`` (before).
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import factorial
from typing import Optional

from .coefficients import ParamSpec, Perturb, _offset, _q, expand_coefficient, gamma_ratio, tangential_coefficient
from .ratfunc import RatFunc, is_zero, n as n_sym, render, w as w_sym
from .report import Report


def _zero(c) -> bool:
    if isinstance(c, RatFunc):
        return c.is_zero()
    return is_zero(c)


class UniPoly:
    """Polynomial in lambda; ``coeffs[i]`` multiplies lambda**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and _zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: UniPoly) -> UniPoly:
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)])

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (self - other).is_zero()

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({render(c)})*lam^{i}" for i, c in enumerate(self.coeffs) if not _zero(c))


class BiPoly:
    """Polynomial in (lamL, lamR) stored as {(i, j): coefficient}."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {key: c for key, c in (coeffs or {}).items() if not _zero(c)}

    @classmethod
    def outer(cls, left: UniPoly, right: UniPoly, scale=1) -> BiPoly:
        return cls({(i, j): scale * a * b for i, a in enumerate(left.coeffs) for j, b in enumerate(right.coeffs)})

    def __add__(self, other: BiPoly) -> BiPoly:
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out[key] + c if key in out else c
        return BiPoly(out)

    def __sub__(self, other: BiPoly) -> BiPoly:
        return self + BiPoly({key: -c for key, c in other.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (self - other).is_zero()

    def degrees(self) -> tuple:
        if not self.coeffs:
            return (-1, -1)
        return max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({render(c)})*lamL^{i}*lamR^{j}" for (i, j), c in sorted(self.coeffs.items()))


def quadratic_root(i: int, w, n=n_sym):
    """(w - 2i)(n + w - 2i): the i-th root of P_{2j,w}."""
    return (_q(w) - 2 * i) * (_q(n) + _q(w) - 2 * i)


def build_P(j: int, w, n=n_sym, perturb: Perturb = None) -> UniPoly:
    """Monic prod_{i<j} (lambda - (w-2i)(n+w-2i))."""
    out = UniPoly([1])
    for i in range(j):
        root = quadratic_root(i, w, n) + _offset(perturb, f"root:{i}")
        out = out * UniPoly([-root, 1])
    return out


def verify_reindex(k: int, j: int, w=w_sym, n=n_sym, perturb: Perturb = None, rep: Optional[Report] = None) -> Report:
    """P_{2k-2j, 2k-2j-n-w} = P_{2k-2j, w-2}."""
    rep = rep or Report("reindex", {"k": k, "j": j, "n": render(n), "w": render(w)})
    lhs = build_P(k - j, 2 * k - 2 * j - _q(n) - _q(w), n, perturb)
    rhs = build_P(k - j, _q(w) - 2, n)
    rep.check(lhs == rhs, {"identity": "reindex", "k": k, "j": j}, str(rhs), str(lhs))
    return rep


def shift_expansion(j: int, w=w_sym, n=n_sym, perturb: Perturb = None) -> UniPoly:
    """sum_i 4^i j!/(j-i)! (n/2+w-j)_i P_{2j-2i,w}."""
    out = UniPoly([])
    base = _q(n) / 2 + _q(w) - j
    for i in range(j + 1):
        coeff = 4 ** i * Fraction(factorial(j), factorial(j - i)) * gamma_ratio(base, i)
        coeff = coeff + _offset(perturb, f"shift:{i}")
        out = out + build_P(j - i, w, n) * coeff
    return out


def verify_shift_expansion(j: int, w=w_sym, n=n_sym, perturb: Perturb = None, rep: Optional[Report] = None) -> Report:
    rep = rep or Report("shift", {"j": j, "n": render(n), "w": render(w)})
    lhs = build_P(j, _q(w) - 2, n)
    rhs = shift_expansion(j, w, n, perturb)
    rep.check(lhs == rhs, {"identity": "shift", "j": j}, str(lhs), str(rhs))
    return rep


def verify_composition(i: int, j: int, w=w_sym, n=n_sym, perturb: Perturb = None,
                       rep: Optional[Report] = None) -> Report:
    """P_{2i, w-2j} P_{2j, w} = P_{2(i+j), w}."""
    rep = rep or Report("composition", {"i": i, "j": j, "n": render(n), "w": render(w)})
    lhs = build_P(i, _q(w) - 2 * j, n, perturb) * build_P(j, w, n)
    rhs = build_P(i + j, w, n)
    rep.check(lhs == rhs, {"identity": "composition", "i": i, "j": j}, str(rhs), str(lhs))
    return rep


def expand_Df_sides(k: int, n=n_sym, w=w_sym, perturb: Perturb = None) -> tuple:
    """Both sides of the Poincare expansion of D_{2k,w,f}, wp = 2k - n - 2w."""
    nn, ww = _q(n), _q(w)
    wp = 2 * k - nn - 2 * ww
    p = ParamSpec(n=nn, k=k, w=ww, wp=wp)
    left = BiPoly()
    for j in range(k + 1):
        outer = build_P(k - j, ww + wp - 2 * j, nn)
        left = left + BiPoly.outer(outer, build_P(j, ww, nn), tangential_coefficient(p, j, perturb))
    right = BiPoly()
    for i in range(k + 1):
        for j in range(k - i + 1):
            c = expand_coefficient(p, i, j, perturb)
            right = right + BiPoly.outer(build_P(i, ww, nn), build_P(j, ww, nn), c)
    return left, right


def verify_expand_Df(k: int, n=n_sym, w=w_sym, perturb: Perturb = None, rep: Optional[Report] = None) -> Report:
    rep = rep or Report("expand-df", {"k": k, "n": render(n), "w": render(w)})
    left, right = expand_Df_sides(k, n, w, perturb)
    rep.check(left == right, {"identity": "expand-df", "k": k, "n": render(n), "w": render(w)},
              str(left), str(right))
    return rep


def random_rational(rng: random.Random, span: int = 40, den: int = 12) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def sample_points(samples: int, seed: int) -> list:
    """Seeded rational (n, w) sample points."""
    rng = random.Random(seed)
    return [(random_rational(rng), random_rational(rng)) for _ in range(samples)]
