"""Coefficient families of the ambient operators, in Pochhammer form.

Gamma-function ratios are never evaluated directly.  Every ratio appearing
in the coefficient formulas is a shifted ratio ``Gamma(x+m)/Gamma(x)``,
which is computed as a rising product (``m >= 0``) or the reciprocal of one
(``m < 0``).  Arguments may be Fractions (numeric evaluation) or polynomials
in the ring ``QQ[n, w, wp]`` (symbolic evaluation).

Perturbations
-------------
Verification routines accept ``perturb``, a mapping from coefficient names
to rational offsets added after evaluation.  It exists to exercise failure
paths; names are

``a:J``          tangential coefficient a_J
``or:R,S,T``     trilinear coefficient a_{R,S,T}
``b:R,S``        linear-family coefficient b_{R,S}
``c:I,J``        Poincare expansion coefficient c_{I,J}
``pref:S``       prefactor of the trilinear decomposition
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Mapping, Optional, Union

from sympy.polys.rings import PolyElement

from .errors import ParityError, PoleError
from .ratfunc import R, RatFunc, is_symbolic, is_zero, n as n_sym, render, to_fraction, w as w_sym, wp as wp_sym
from .report import Report

Scalar = Union[int, Fraction, PolyElement, RatFunc]
Perturb = Optional[Mapping[str, Fraction]]


def _is_integer(x) -> bool:
    return not is_symbolic(x) and Fraction(x).denominator == 1


def _q(x):
    """Normalise numeric scalars to Fraction; leave symbolic ones alone."""
    if is_symbolic(x):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class ParamSpec:
    """Parameters (n, k, ell, w, wp) of one operator family.

    ``n``, ``w`` and ``wp`` may be numbers or polynomials in ``QQ[n, w, wp]``.
    Unset weights are filled in by the family that uses them.
    """

    n: Scalar
    k: int
    ell: Optional[int] = None
    w: Optional[Scalar] = None
    wp: Optional[Scalar] = None

    @classmethod
    def symbolic(cls, k: int, ell: Optional[int] = None) -> ParamSpec:
        return cls(n=n_sym, k=k, ell=ell, w=w_sym, wp=wp_sym)

    @property
    def n_even(self) -> bool:
        return _is_integer(self.n) and Fraction(self.n) % 2 == 0

    def poincare_weight(self, wp=None):
        """The weight w = -(n + wp - 2k)/2 for which w + wp/2 = k - n/2."""
        wp = self.wp if wp is None else wp
        return -(_q(self.n) + _q(wp) - 2 * self.k) / 2

    def check_or(self) -> None:
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.n_even and 2 * self.k > Fraction(self.n):
            raise ParityError(f"n={self.n} is even and k={self.k} > n/2")

    def check_linear(self) -> None:
        if self.k < 0 or self.ell is None or self.ell < 0:
            raise ValueError("linear family needs k >= 0 and ell >= 0")
        if not self.n_even:
            return
        half = Fraction(self.n) / 2
        if self.ell == 0 and self.k > half:
            raise ParityError(f"n={self.n} is even, ell=0 and k={self.k} > n/2")
        if self.ell >= 1 and self.k + self.ell > half + 1:
            raise ParityError(f"n={self.n} is even and k+ell={self.k + self.ell} > n/2+1")

    def describe(self) -> dict:
        out = {"n": render(self.n), "k": self.k}
        if self.ell is not None:
            out["ell"] = self.ell
        if self.w is not None:
            out["w"] = render(self.w)
        if self.wp is not None:
            out["wp"] = render(self.wp)
        return out


def _offset(perturb: Perturb, name: str):
    if not perturb:
        return 0
    return perturb.get(name, 0)


def pochhammer(x, m: int):
    """Rising product x (x+1) ... (x+m-1)."""
    if m < 0:
        raise ValueError("pochhammer order must be nonnegative")
    out = 1 if not is_symbolic(x) else R(1)
    if not is_symbolic(x):
        x = Fraction(x)
        out = Fraction(1)
    for i in range(m):
        out = out * (x + i)
    return out


def gamma_ratio(x, m: int):
    """Gamma(x+m)/Gamma(x) for integer m, without evaluating Gamma."""
    if m >= 0:
        return pochhammer(x, m)
    if is_symbolic(x):
        if isinstance(x, RatFunc):
            if x.den:
                raise TypeError("gamma_ratio needs a polynomial argument")
            x = x.num
        factors = [x + m + i for i in range(-m)]
        if any(not f for f in factors):
            raise PoleError(f"Gamma pole: Gamma({render(x + m)}) in denominator")
        return RatFunc(R(1), factors)
    d = pochhammer(Fraction(x) + m, -m)
    if d == 0:
        raise PoleError(f"Gamma pole at x={x}, shift {m}")
    return 1 / d


def or_coefficient(p: ParamSpec, r: int, s: int, t: int, perturb: Perturb = None):
    """The trilinear coefficient a_{r,s,t}, r + s + t = k.

    With x = (n+4k)/6 the value is
    k!/(r!s!t!) * Gamma(x-a)/Gamma(x-k) * Gamma(x-b)/Gamma(x) * Gamma(x-c)/Gamma(x)
    where (a, b, c) is (r, s, t) sorted so that a is the largest index.  The
    largest index is paired with Gamma(x-k) so that at n = 2k the zero of
    the first ratio is never multiplied against a pole of the others.
    """
    k = p.k
    if min(r, s, t) < 0 or r + s + t != k:
        raise ValueError(f"indices {(r, s, t)} must be nonnegative with sum k={k}")
    p.check_or()
    symbolic = is_symbolic(p.n)
    x = (_q(p.n) + 4 * k) / 6
    a, b, c = sorted((r, s, t), reverse=True)
    mult = Fraction(factorial(k), factorial(r) * factorial(s) * factorial(t))
    value = gamma_ratio(x - k, k - a)
    value = value * gamma_ratio(x, -b)
    value = value * gamma_ratio(x, -c)
    value = value * mult
    value = value + _offset(perturb, f"or:{r},{s},{t}")
    if symbolic:
        return RatFunc.coerce(value)
    return to_fraction(value)


def or_coefficients(p: ParamSpec, perturb: Perturb = None) -> dict:
    k = p.k
    return {
        (r, s, k - r - s): or_coefficient(p, r, s, k - r - s, perturb)
        for r in range(k, -1, -1)
        for s in range(k - r, -1, -1)
    }


def tangential_coefficient(p: ParamSpec, j: int, perturb: Perturb = None):
    """a_j of the tangential combination sum_j a_j Delta^{k-j} f Delta^j.

    Gamma form binom(k,j) G(j+k-w-wp-n/2) G(n/2+w-j) / (G(k-w-wp-n/2) G(n/2+w-k)),
    evaluated as binom(k,j) (k-w-wp-n/2)_j (n/2+w-k)_{k-j}.  No denominators
    occur, so symbolic (n, w, wp) give polynomials.
    """
    k = p.k
    if not 0 <= j <= k:
        raise ValueError(f"index j={j} outside 0..{k}")
    w = p.w if p.w is not None else p.poincare_weight()
    if p.wp is None:
        raise ValueError("tangential_coefficient needs the multiplier weight wp")
    nn, ww, wwp = _q(p.n), _q(w), _q(p.wp)
    value = comb(k, j) * pochhammer(k - ww - wwp - nn / 2, j) * pochhammer(nn / 2 + ww - k, k - j)
    return value + _offset(perturb, f"a:{j}")


def tangential_coefficients(p: ParamSpec, perturb: Perturb = None) -> list:
    return [tangential_coefficient(p, j, perturb) for j in range(p.k + 1)]


def renormalized_coefficients(n, k: int, wp, perturb: Perturb = None) -> list:
    """Tangential coefficients at the weight w = -(n+wp-2k)/2, numeric n, wp.

    When every coefficient vanishes (wp in {0, 2, ..., 2k-2}) the family is
    replaced by its leading term along wp -> wp - 2*delta, i.e. the lowest
    nonvanishing delta-order of the coefficient list, rescaled to sum to 1
    when that sum is nonzero.  At wp = 0 the leading term is a_0 = a_k = (k-1)!,
    so the rescaled list is a_0 = a_k = 1/2 and f = 1 gives Delta^k exactly.
    """
    wp = Fraction(wp)
    direct = [
        tangential_coefficient(ParamSpec(n=n, k=k, w=ParamSpec(n=n, k=k).poincare_weight(wp), wp=wp), j)
        for j in range(k + 1)
    ]
    if any(direct):
        coeffs = direct
    else:
        moving = wp - 2 * wp_sym
        spec = ParamSpec(n=Fraction(n), k=k, wp=moving)
        polys = [tangential_coefficient(ParamSpec(n=Fraction(n), k=k, w=spec.poincare_weight(), wp=moving), j)
                 for j in range(k + 1)]
        order = min(e[2] for poly in polys for e in poly.monoms() if poly)
        coeffs = [to_fraction(sum((c for e, c in poly.terms() if e[2] == order), R(0))) for poly in polys]
        total = sum(coeffs)
        if total:
            coeffs = [c / total for c in coeffs]
    return [c + _offset(perturb, f"a:{j}") for j, c in enumerate(coeffs)]


def linear_coefficient(p: ParamSpec, r: int, s: int, perturb: Perturb = None):
    """b_{r,s} = k!/(r!s!) (ell)_s (ell)_r; renormalized limit for ell = 0."""
    k = p.k
    if min(r, s) < 0 or r + s != k:
        raise ValueError(f"indices {(r, s)} must be nonnegative with sum k={k}")
    p.check_linear()
    ell = p.ell
    if ell >= 1:
        value = comb(k, r) * pochhammer(ell, s) * pochhammer(ell, r)
    elif k == 0:
        value = 1
    else:
        # lim ell^{-1} (ell)_s (ell)_r: one factor ell cancels; nonzero only if r or s is 0
        value = factorial(k - 1) if r == 0 or s == 0 else 0
    return Fraction(value) + _offset(perturb, f"b:{r},{s}")


def linear_coefficients(p: ParamSpec, perturb: Perturb = None) -> dict:
    return {(k_r, p.k - k_r): linear_coefficient(p, k_r, p.k - k_r, perturb) for k_r in range(p.k, -1, -1)}


def expand_coefficient(p: ParamSpec, i: int, j: int, perturb: Perturb = None):
    """c_{i,j} = 4^{k-i-j} k!/(i!j!) (n/2+w-k)_{k-i} (n/2+w-k)_{k-j}."""
    k = p.k
    if min(i, j) < 0 or i + j > k:
        raise ValueError(f"indices {(i, j)} need i + j <= k={k}")
    w = p.w if p.w is not None else p.poincare_weight()
    base = _q(p.n) / 2 + _q(w) - k
    mult = Fraction(4 ** (k - i - j) * factorial(k), factorial(i) * factorial(j))
    value = mult * pochhammer(base, k - i) * pochhammer(base, k - j)
    return value + _offset(perturb, f"c:{i},{j}")


def or_decomposition_prefactor(n, k: int, s: int, perturb: Perturb = None):
    """binom(k,s) G(x-s) G(y+s)^2 / (G(y) G(x)^2) with x=(n+4k)/6, y=(n-2k)/6."""
    x = (_q(n) + 4 * k) / 6
    y = (_q(n) - 2 * k) / 6
    value = comb(k, s) * gamma_ratio(x, -s)
    value = value * gamma_ratio(y, s)
    value = value * gamma_ratio(x, s - k)
    return value + _offset(perturb, f"pref:{s}")


def verify_tangential_recursion(k: int, perturb: Perturb = None, p: Optional[ParamSpec] = None) -> Report:
    """Check b_j = 2(j+1)(n+2w-2j-2) a_{j+1} - 2(k-j)(2j+2k-2w-2wp-n) a_j = 0."""
    if k < 1:
        raise ValueError("recursion needs k >= 1")
    p = p or ParamSpec.symbolic(k)
    rep = Report("recursion", {"k": k, **p.describe()})
    nn, ww, wwp = _q(p.n), _q(p.w), _q(p.wp)
    a = tangential_coefficients(p, perturb)
    for j in range(k):
        b = 2 * (j + 1) * (nn + 2 * ww - 2 * j - 2) * a[j + 1] - 2 * (k - j) * (2 * j + 2 * k - 2 * ww - 2 * wwp - nn) * a[j]
        rep.check(is_zero(b), {"k": k, "j": j, "quantity": "b_j"}, 0, b)
    return rep


def verify_decompositions(k: int, ell: Optional[int] = None, n=None, perturb: Perturb = None) -> Report:
    """Check the linear and trilinear families against the tangential family.

    (a) b_{r,s} equals a_s of the tangential family at w = -n/2+k+ell, wp = -2 ell;
    (b) a_{r,s,t} equals pref_s times a_t of the order 2k-2s family at
        w = -(n-2k)/3 and multiplier weight -(n-2k)/3 - 2s.
    ``n`` defaults to the symbol n.
    """
    n = n_sym if n is None else n
    rep = Report("decompose", {"k": k, "ell": ell, "n": render(n)})
    nn = _q(n)
    if ell is not None and ell >= 1:
        p = ParamSpec(n=nn, k=k, ell=ell, w=-nn / 2 + k + ell, wp=-2 * ell)
        for s in range(k + 1):
            r = k - s
            b = linear_coefficient(ParamSpec(n=nn, k=k, ell=ell), r, s, perturb)
            a = tangential_coefficient(p, s)
            rep.check(RatFunc.coerce(a - b).is_zero(), {"identity": "linear", "k": k, "ell": ell, "r": r, "s": s}, a, b)
    base_w = -(nn - 2 * k) / 3
    for s in range(k + 1):
        pref = or_decomposition_prefactor(nn, k, s, perturb)
        sub = ParamSpec(n=nn, k=k - s, w=base_w, wp=base_w - 2 * s)
        for t in range(k - s + 1):
            r = k - s - t
            lhs = or_coefficient(ParamSpec(n=nn, k=k), r, s, t, perturb)
            rhs = pref * tangential_coefficient(sub, t)
            rep.check(RatFunc.coerce(lhs) == RatFunc.coerce(rhs),
                      {"identity": "trilinear", "k": k, "r": r, "s": s, "t": t}, lhs, rhs)
    return rep


def or_permutation_orbit(r: int, s: int, t: int):
    return sorted(set(permutations((r, s, t))))
