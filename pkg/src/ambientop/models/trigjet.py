"""Exact trigonometric jets: Fourier modes on the n-torus, graded by rho and eps.

A :class:`TrigJet` stores complex-rational coefficients of

    sum  c[m, p, q]  exp(i m.x)  rho**p  eps**q

known modulo rho**(P+1) and eps**(E+1).  Coefficients beyond those orders
are unknown, not zero; every operation propagates the truncation orders.
``P = -1`` denotes a jet about which nothing is known.

Complex rationals are plain ``(re, im)`` tuples of Fractions; the helpers
below keep the inner convolution loop free of method dispatch.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import TruncationError

ZERO = Fraction(0)
ONE = Fraction(1)


def cq(re=0, im=0) -> tuple:
    return (Fraction(re), Fraction(im))


def cq_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def cq_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def cq_scale(a, s):
    return (a[0] * s, a[1] * s)


def cq_conj(a):
    return (a[0], -a[1])


def cq_render(a) -> str:
    re, im = a
    if not im:
        return str(re)
    if not re:
        return f"{im}i"
    return f"{re}{'+' if im > 0 else '-'}{abs(im)}i"


def _nonzero(a) -> bool:
    return bool(a[0]) or bool(a[1])


class TrigJet:
    """Sparse exact jet; ``data[(p, q)][mode] = (re, im)``."""

    __slots__ = ("n", "P", "E", "data")

    def __init__(self, n: int, P: int, E: int = 0, data: Mapping | None = None):
        self.n = n
        self.P = P
        self.E = E
        self.data: dict = {}
        if data:
            for (p, q), modes in data.items():
                if p > P or q > E:
                    continue
                kept = {m: v for m, v in modes.items() if _nonzero(v)}
                if kept:
                    self.data[(p, q)] = kept

    # construction ------------------------------------------------------

    @classmethod
    def zero(cls, n: int, P: int, E: int = 0) -> TrigJet:
        return cls(n, P, E)

    @classmethod
    def constant(cls, n: int, value, P: int, E: int = 0) -> TrigJet:
        v = value if isinstance(value, tuple) else cq(value)
        return cls(n, P, E, {(0, 0): {(0,) * n: v}})

    @classmethod
    def from_entries(cls, n: int, entries: Iterable, P: int, E: int = 0) -> TrigJet:
        """Entries are ``(mode, p, q, value)`` with value a number or (re, im)."""
        data: dict = {}
        for mode, p, q, value in entries:
            mode = tuple(int(x) for x in mode)
            if len(mode) != n:
                raise ValueError(f"mode {mode} has wrong dimension for n={n}")
            v = value if isinstance(value, tuple) else cq(value)
            v = (Fraction(v[0]), Fraction(v[1]))
            bucket = data.setdefault((p, q), {})
            bucket[mode] = cq_add(bucket[mode], v) if mode in bucket else v
        return cls(n, P, E, data)

    def entries(self) -> list:
        out = []
        for (p, q) in sorted(self.data):
            for mode in sorted(self.data[(p, q)]):
                out.append((mode, p, q, self.data[(p, q)][mode]))
        return out

    def copy(self) -> TrigJet:
        return TrigJet(self.n, self.P, self.E, {key: dict(modes) for key, modes in self.data.items()})

    # inspection --------------------------------------------------------

    def coefficient(self, mode, p: int = 0, q: int = 0) -> tuple:
        if p > self.P or q > self.E:
            raise TruncationError(f"order (rho^{p}, eps^{q}) not known (P={self.P}, E={self.E})")
        return self.data.get((p, q), {}).get(tuple(mode), (ZERO, ZERO))

    def is_zero(self) -> bool:
        return not self.data

    def __len__(self):
        return sum(len(modes) for modes in self.data.values())

    def modes(self) -> set:
        return {m for modes in self.data.values() for m in modes}

    def is_hermitian(self) -> bool:
        for key, modes in self.data.items():
            for m, v in modes.items():
                other = modes.get(tuple(-x for x in m), (ZERO, ZERO))
                if other != cq_conj(v):
                    return False
        return True

    def max_degree(self) -> int:
        return max((max(abs(x) for x in m) if m else 0 for m in self.modes()), default=0)

    # linear structure --------------------------------------------------

    def truncate(self, P: int | None = None, E: int | None = None) -> TrigJet:
        P = self.P if P is None else min(P, self.P)
        E = self.E if E is None else min(E, self.E)
        return TrigJet(self.n, P, E, self.data)

    def __add__(self, other: TrigJet) -> TrigJet:
        P, E = min(self.P, other.P), min(self.E, other.E)
        out: dict = {}
        for src in (self.data, other.data):
            for key, modes in src.items():
                if key[0] > P or key[1] > E:
                    continue
                bucket = out.setdefault(key, {})
                for m, v in modes.items():
                    bucket[m] = cq_add(bucket[m], v) if m in bucket else v
        return TrigJet(self.n, P, E, out)

    def __neg__(self) -> TrigJet:
        return TrigJet(self.n, self.P, self.E,
                       {key: {m: (-v[0], -v[1]) for m, v in modes.items()} for key, modes in self.data.items()})

    def __sub__(self, other: TrigJet) -> TrigJet:
        return self + (-other)

    def scale(self, s) -> TrigJet:
        """Multiply by a rational or complex-rational constant."""
        if isinstance(s, tuple):
            return TrigJet(self.n, self.P, self.E,
                           {key: {m: cq_mul(v, s) for m, v in modes.items()} for key, modes in self.data.items()})
        s = Fraction(s)
        if not s:
            return TrigJet(self.n, self.P, self.E)
        return TrigJet(self.n, self.P, self.E,
                       {key: {m: (v[0] * s, v[1] * s) for m, v in modes.items()} for key, modes in self.data.items()})

    def __mul__(self, other):
        if not isinstance(other, TrigJet):
            return self.scale(other)
        if other.n != self.n:
            raise ValueError("torus dimensions differ")
        P, E = min(self.P, other.P), min(self.E, other.E)
        out: dict = {}
        for (p1, q1), m1s in self.data.items():
            for (p2, q2), m2s in other.data.items():
                p, q = p1 + p2, q1 + q2
                if p > P or q > E:
                    continue
                bucket = out.setdefault((p, q), {})
                for m1, a in m1s.items():
                    a0, a1 = a
                    for m2, b in m2s.items():
                        m = tuple(x + y for x, y in zip(m1, m2))
                        b0, b1 = b
                        re = a0 * b0 - a1 * b1
                        im = a0 * b1 + a1 * b0
                        if m in bucket:
                            c = bucket[m]
                            bucket[m] = (c[0] + re, c[1] + im)
                        else:
                            bucket[m] = (re, im)
        return TrigJet(self.n, P, E, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        """Equality on the orders known for both operands."""
        if not isinstance(other, TrigJet):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("TrigJet is unhashable")

    # calculus ----------------------------------------------------------

    def d_rho(self) -> TrigJet:
        out = {}
        for (p, q), modes in self.data.items():
            if p == 0:
                continue
            out[(p - 1, q)] = {m: (v[0] * p, v[1] * p) for m, v in modes.items()}
        return TrigJet(self.n, self.P - 1, self.E, out)

    def times_rho(self) -> TrigJet:
        return TrigJet(self.n, self.P + 1, self.E, {(p + 1, q): dict(modes) for (p, q), modes in self.data.items()})

    def d_x(self, axis: int) -> TrigJet:
        """Partial derivative in x_axis: multiplies mode m by i*m[axis]."""
        out = {}
        for key, modes in self.data.items():
            out[key] = {m: (-v[1] * m[axis], v[0] * m[axis]) for m, v in modes.items() if m[axis]}
        return TrigJet(self.n, self.P, self.E, out)

    def flat_laplacian_x(self) -> TrigJet:
        """Euclidean Laplacian in x: mode m picks up -|m|^2."""
        out = {}
        for key, modes in self.data.items():
            out[key] = {}
            for m, v in modes.items():
                s = -sum(x * x for x in m)
                if s:
                    out[key][m] = (v[0] * s, v[1] * s)
        return TrigJet(self.n, self.P, self.E, out)

    def restrict(self) -> TrigJet:
        """Value at rho = 0."""
        if self.P < 0:
            raise TruncationError("no rho-order data available to restrict")
        return TrigJet(self.n, 0, self.E, {key: modes for key, modes in self.data.items() if key[0] == 0})

    def rho_part(self, p: int) -> TrigJet:
        return TrigJet(self.n, self.P, self.E, {key: modes for key, modes in self.data.items() if key[0] == p})

    def eps_shift(self, by: int = 1) -> TrigJet:
        return TrigJet(self.n, self.P, self.E,
                       {(p, q + by): dict(modes) for (p, q), modes in self.data.items() if q + by <= self.E})

    def with_orders(self, P: int, E: int) -> TrigJet:
        """Re-declare truncation orders; only valid for exact polynomial data."""
        return TrigJet(self.n, P, E, self.data)

    def zero_mode(self) -> list:
        """Mean over the torus, per eps-order (rho = 0 part)."""
        zero = (0,) * self.n
        return [self.data.get((0, q), {}).get(zero, (ZERO, ZERO)) for q in range(self.E + 1)]

    def conj(self) -> TrigJet:
        return TrigJet(self.n, self.P, self.E,
                       {key: {tuple(-x for x in m): cq_conj(v) for m, v in modes.items()}
                        for key, modes in self.data.items()})

    def __repr__(self):
        return f"TrigJet(n={self.n}, P={self.P}, E={self.E}, terms={len(self)})"

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for mode, p, q, v in self.entries():
            parts.append(f"({cq_render(v)})e{list(mode)}rho^{p}eps^{q}")
        return " + ".join(parts)


def exp_series(x: TrigJet, scale=1) -> TrigJet:
    """exp(scale * x) for a jet with no rho^0 eps^0 part (so the series ends)."""
    if (0, 0) in x.data:
        raise ValueError("exp_series needs a jet vanishing at rho = eps = 0")
    arg = x.scale(scale)
    out = TrigJet.constant(x.n, 1, x.P, x.E)
    term = out
    k = 0
    while True:
        k += 1
        term = (term * arg).scale(Fraction(1, k))
        if term.is_zero():
            return out
        out = out + term


def jet_to_json(jet: TrigJet) -> list:
    """Entries in the case-file format: mode, rho, eps, exact re/im strings."""
    return [
        {"mode": list(mode), "rho": p, "eps": q, "re": str(v[0]), "im": str(v[1])}
        for mode, p, q, v in jet.entries()
    ]


def jet_from_json(n: int, items: Iterable[Mapping], P: int, E: int = 0) -> TrigJet:
    entries = []
    for item in items:
        re = Fraction(str(item.get("re", "0")))
        im = Fraction(str(item.get("im", "0")))
        entries.append((item["mode"], int(item.get("rho", 0)), int(item.get("eps", 0)), (re, im)))
    return TrigJet.from_entries(n, entries, P, E)
