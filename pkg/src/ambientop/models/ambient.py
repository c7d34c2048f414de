"""Homogeneous ambient functions t^w u(x, rho) and the ambient operators on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from ..coefficients import (
    ParamSpec,
    linear_coefficient,
    or_coefficients,
    renormalized_coefficients,
    tangential_coefficient,
)
from ..errors import TruncationError, WeightMismatchError
from ..opalgebra import OpPoly
from ..ratfunc import substitute, to_fraction
from .metric import MetricJet
from .trigjet import TrigJet


@dataclass(frozen=True)
class AmbientFn:
    """t^weight * jet(x, rho, eps)."""

    weight: Fraction
    jet: TrigJet

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))

    def __add__(self, other: AmbientFn) -> AmbientFn:
        if other.weight != self.weight:
            raise WeightMismatchError(f"cannot add weights {self.weight} and {other.weight}")
        return AmbientFn(self.weight, self.jet + other.jet)

    def __sub__(self, other: AmbientFn) -> AmbientFn:
        if other.weight != self.weight:
            raise WeightMismatchError(f"cannot subtract weights {self.weight} and {other.weight}")
        return AmbientFn(self.weight, self.jet - other.jet)

    def __mul__(self, other):
        if isinstance(other, AmbientFn):
            return AmbientFn(self.weight + other.weight, self.jet * other.jet)
        return AmbientFn(self.weight, self.jet.scale(other))

    __rmul__ = __mul__

    def restrict(self) -> TrigJet:
        """Value on the cone rho = 0 at t = 1."""
        return self.jet.restrict()


def ambient_laplacian(f: AmbientFn, g: MetricJet) -> AmbientFn:
    """Laplace-Beltrami operator of 2 rho dt^2 + 2 t dt drho + t^2 g_rho.

    On t^w u it equals t^{w-2} times

        -2 rho u'' + (2w + n - 2) u' + Lap_{g_rho} u + L (w u - 2 rho u')

    where ' is d/drho and L = d/drho log sqrt(det g_rho).  The result is known
    to one rho-order less than the input.
    """
    u = f.jet
    if u.P < 1:
        raise TruncationError(f"ambient Laplacian needs rho-order >= 1, got {u.P}")
    if u.n != g.n:
        raise ValueError("torus dimensions differ")
    w = f.weight
    n = u.n
    du = u.d_rho()
    out = du.d_rho().times_rho().scale(-2) + du.scale(2 * w + n - 2) + g.laplacian_x(u)
    if not g.flat:
        out = out + g.log_rho * (u.scale(w) - du.times_rho().scale(2))
    out = out.truncate(P=u.P - 1)
    return AmbientFn(w - 2, out)


def q_multiply(f: AmbientFn) -> AmbientFn:
    """Multiplication by Q = |T|^2 = 2 rho t^2."""
    return AmbientFn(f.weight + 2, f.jet.times_rho().scale(2))


def laplacian_power(f: AmbientFn, g: MetricJet, power: int) -> AmbientFn:
    for _ in range(power):
        f = ambient_laplacian(f, g)
    return f


def constant_function(n: int, rho_order: int, eps_order: int = 0, weight=0) -> AmbientFn:
    return AmbientFn(weight, TrigJet.constant(n, 1, rho_order, eps_order))


@dataclass(frozen=True)
class ORFamily:
    """Bilinear operator sum a_{r,s,t} Delta^r((Delta^s u)(Delta^t v))."""

    n: int
    k: int
    perturb: Optional[Mapping] = None

    arity = 2

    @property
    def params(self) -> ParamSpec:
        return ParamSpec(n=self.n, k=self.k)

    @property
    def arg_weight(self) -> Fraction:
        return Fraction(-(self.n - 2 * self.k), 3)

    @property
    def output_weight(self) -> Fraction:
        return Fraction(-(2 * self.n + 2 * self.k), 3)

    def coefficients(self) -> dict:
        return or_coefficients(self.params, self.perturb)

    def validate(self) -> None:
        self.params.check_or()

    def apply(self, args: Sequence[AmbientFn], g: MetricJet) -> AmbientFn:
        u, v = args
        k = self.k
        coeffs = self.coefficients()
        lap_u = [u]
        lap_v = [v]
        for _ in range(k):
            lap_u.append(ambient_laplacian(lap_u[-1], g))
            lap_v.append(ambient_laplacian(lap_v[-1], g))
        total = None
        # Horner in the outer Laplacian power: total <- Delta(total) + inner_r
        for r in range(k, -1, -1):
            inner = None
            for s in range(k - r + 1):
                t = k - r - s
                a = coeffs[(r, s, t)]
                if not a:
                    continue
                term = (lap_u[s] * lap_v[t]) * a
                inner = term if inner is None else inner + term
            if total is not None:
                total = ambient_laplacian(total, g)
            if inner is not None:
                total = inner if total is None else total + inner
        if total is None:
            return AmbientFn(self.output_weight, TrigJet.zero(u.jet.n, 0, u.jet.E))
        return total


def or_direct(family: ORFamily, args, g: MetricJet) -> AmbientFn:
    """Direct term-by-term evaluation, a cross-check for ``ORFamily.apply``."""
    u, v = args
    total = None
    for (r, s, t), a in family.coefficients().items():
        if not a:
            continue
        term = laplacian_power(
            laplacian_power(u, g, s) * laplacian_power(v, g, t), g, r) * a
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class GeneralizedFamily:
    """Linear operator sum_j a_j Delta^{k-j}(f Delta^j u), f of weight wp.

    ``w`` defaults to -(n + wp - 2k)/2.  ``multiplier=None`` means f = 1.
    """

    n: int
    k: int
    wp: Fraction
    multiplier: Optional[AmbientFn] = None
    w: Optional[Fraction] = None
    coefficient_override: Optional[tuple] = None
    perturb: Optional[Mapping] = None
    ell: Optional[int] = field(default=None, compare=False)

    arity = 1

    @property
    def params(self) -> ParamSpec:
        return ParamSpec(n=self.n, k=self.k, ell=self.ell, w=self.arg_weight, wp=Fraction(self.wp))

    @property
    def arg_weight(self) -> Fraction:
        if self.w is not None:
            return Fraction(self.w)
        return Fraction(-(self.n + Fraction(self.wp) - 2 * self.k), 2)

    @property
    def output_weight(self) -> Fraction:
        return self.arg_weight + Fraction(self.wp) - 2 * self.k

    def coefficients(self) -> list:
        if self.coefficient_override is not None:
            return list(self.coefficient_override)
        if self.w is None:
            return renormalized_coefficients(self.n, self.k, self.wp, self.perturb)
        return [tangential_coefficient(self.params, j, self.perturb) for j in range(self.k + 1)]

    def validate(self) -> None:
        if self.ell is not None:
            self.params.check_linear()
        if self.multiplier is not None and self.multiplier.weight != Fraction(self.wp):
            raise WeightMismatchError(
                f"multiplier has weight {self.multiplier.weight}, expected {self.wp}")

    def _multiplier(self, like: AmbientFn) -> AmbientFn:
        if self.multiplier is not None:
            return self.multiplier
        return AmbientFn(self.wp, TrigJet.constant(like.jet.n, 1, like.jet.P, like.jet.E))

    def apply(self, args: Sequence[AmbientFn], g: MetricJet) -> AmbientFn:
        (u,) = args
        k = self.k
        a = self.coefficients()
        f = self._multiplier(u)
        powers = [u]
        for _ in range(k):
            powers.append(ambient_laplacian(powers[-1], g))
        # a_k f D^k u + D(a_{k-1} f D^{k-1} u + D(... + D(a_0 f u)))
        total = (f * powers[0]) * a[0]
        for j in range(1, k + 1):
            total = ambient_laplacian(total, g) + (f * powers[j]) * a[j]
        return total


def linear_family(n: int, k: int, ell: int, multiplier: Optional[AmbientFn] = None,
                  perturb: Optional[Mapping] = None) -> GeneralizedFamily:
    """sum_{r+s=k} b_{r,s} Delta^r(I Delta^s u) with I of weight -2 ell."""
    spec = ParamSpec(n=n, k=k, ell=ell)
    spec.check_linear()
    coeffs = tuple(linear_coefficient(spec, k - j, j, perturb) for j in range(k + 1))
    return GeneralizedFamily(n=n, k=k, wp=Fraction(-2 * ell), multiplier=multiplier,
                             coefficient_override=coeffs, ell=ell)


def _check_orders(family, args: Sequence[AmbientFn], g: MetricJet) -> None:
    k = family.k
    jets = [a.jet for a in args]
    if isinstance(family, GeneralizedFamily) and family.multiplier is not None:
        jets.append(family.multiplier.jet)
    for jet in jets:
        if jet.P < k:
            raise TruncationError(f"operator of order {2 * k} needs rho-order >= {k}, got {jet.P}")
    if not g.flat and g.P < k:
        raise TruncationError(f"metric jet carries rho-order {g.P} < {k}")


def evaluate_operator(family, args: Sequence[AmbientFn], g: MetricJet) -> TrigJet:
    """Apply an ambient operator and restrict to t = 1, rho = 0."""
    family.validate()
    if len(args) != family.arity:
        raise ValueError(f"operator takes {family.arity} arguments, got {len(args)}")
    for a in args:
        if a.weight != family.arg_weight:
            raise WeightMismatchError(f"argument weight {a.weight}, operator expects {family.arg_weight}")
    _check_orders(family, args, g)
    out = family.apply(args, g)
    if out.weight != family.output_weight:
        raise WeightMismatchError(f"output weight {out.weight} != {family.output_weight}")
    return out.restrict()


def dirichlet_pairing(phi: TrigJet, psi: TrigJet, volume: Optional[TrigJet] = None) -> list:
    """Torus average of phi * psi * volume per eps-order (int of 1 is 1)."""
    if phi.n != psi.n:
        raise ValueError("torus dimensions differ")
    prod = phi.restrict() * psi.restrict()
    if volume is not None:
        prod = prod * volume.restrict()
    return prod.zero_mode()


def interpret(op: OpPoly, u: AmbientFn, g: MetricJet, multiplier: Optional[AmbientFn] = None,
              values: Optional[Mapping] = None) -> AmbientFn:
    """Evaluate an operator word combination: D -> Laplacian, Q -> 2 rho t^2, F -> multiplier.

    ``values`` substitutes numbers for the symbols n, w, wp in the coefficients.
    """
    values = dict(values or {})
    weight = to_fraction(substitute(op.input_weight, **values))
    if weight != u.weight:
        raise WeightMismatchError(f"operator input weight {weight} != function weight {u.weight}")
    total = None
    for word, c in op.terms.items():
        coeff = to_fraction(substitute(c, **values))
        f = u
        for letter in reversed(word):
            if letter == "D":
                f = ambient_laplacian(f, g)
            elif letter == "Q":
                f = q_multiply(f)
            elif letter == "F":
                if multiplier is None:
                    raise ValueError("word contains F but no multiplier was given")
                f = multiplier * f
        term = f * coeff
        total = term if total is None else total + term
    return total
