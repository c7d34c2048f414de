"""Metric jets g_rho on the n-torus for straight-and-normal ambient metrics

    2 rho dt^2 + 2 t dt drho + t^2 g_rho .

A :class:`MetricJet` holds the symmetric matrix g_rho together with the data
the ambient Laplacian needs: the inverse g_rho^{-1}, the derivatives of
log sqrt(det g_rho) in rho and x, the first-order coefficient
b^j = d_i g^{ij} + g^{ij} d_i log sqrt(det g), and the volume density.
All of these are computed by nilpotent series around the identity, so the
metric must reduce to the identity at rho = eps = 0.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import TruncationError
from .trigjet import TrigJet, exp_series

MAX_RHO_ORDER = 3
MAX_EPS_ORDER = 3


def _matmul(a, b):
    size = len(a)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = a[i][0] * b[0][j]
            for k in range(1, size):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _is_zero_matrix(a) -> bool:
    return all(entry.is_zero() for row in a for entry in row)


class MetricJet:
    """g_rho as an n x n matrix of jets, with cached derived quantities."""

    def __init__(self, entries, flat: bool = False):
        self.entries = [list(row) for row in entries]
        self.dim = len(self.entries)
        self.flat = flat
        first = self.entries[0][0]
        self.n = first.n
        self.P = min(e.P for row in self.entries for e in row)
        self.E = min(e.E for row in self.entries for e in row)
        for i in range(self.dim):
            for j in range(i):
                if not self.entries[i][j] == self.entries[j][i]:
                    raise ValueError("metric jet is not symmetric")
        self._derive()

    @classmethod
    def flat_torus(cls, n: int, eps_order: int = 0) -> MetricJet:
        """The flat representative; exact at every rho-order."""
        big = 10 ** 6
        entries = [[TrigJet.constant(n, 1 if i == j else 0, big, eps_order) for j in range(n)] for i in range(n)]
        return cls(entries, flat=True)

    def _identity(self):
        return [[TrigJet.constant(self.n, 1 if i == j else 0, self.P, self.E) for j in range(self.dim)]
                for i in range(self.dim)]

    def _derive(self) -> None:
        ident = self._identity()
        if self.flat:
            self.inverse = ident
            zero = TrigJet.zero(self.n, self.P, self.E)
            self.log_rho = zero
            self.log_x = [zero] * self.dim
            self.first_order = [zero] * self.dim
            self.volume = TrigJet.constant(self.n, 1, self.P, self.E)
            return
        nil = [[self.entries[i][j] - ident[i][j] for j in range(self.dim)] for i in range(self.dim)]
        if any(nil[i][j].rho_part(0).truncate(E=0).data for i in range(self.dim) for j in range(self.dim)):
            raise ValueError("metric jet must reduce to the identity at rho = eps = 0")
        # inverse = sum (-N)^m ; log det = sum (-1)^(m+1) tr(N^m)/m
        inverse = [row[:] for row in ident]
        logdet = TrigJet.zero(self.n, self.P, self.E)
        power = ident
        m = 0
        while True:
            m += 1
            power = _matmul(power, nil)
            if _is_zero_matrix(power):
                break
            sign = -1 if m % 2 else 1
            for i in range(self.dim):
                for j in range(self.dim):
                    inverse[i][j] = inverse[i][j] + power[i][j].scale(sign)
            trace = power[0][0]
            for i in range(1, self.dim):
                trace = trace + power[i][i]
            logdet = logdet + trace.scale(Fraction(-sign, m))
        self.inverse = inverse
        self.volume = exp_series(logdet, Fraction(1, 2))
        half_logdet = logdet.scale(Fraction(1, 2))
        self.log_rho = half_logdet.d_rho()
        self.log_x = [half_logdet.d_x(i) for i in range(self.dim)]
        first = []
        for j in range(self.dim):
            acc = TrigJet.zero(self.n, self.P, self.E)
            for i in range(self.dim):
                acc = acc + inverse[i][j].d_x(i) + inverse[i][j] * self.log_x[i]
            first.append(acc)
        self.first_order = first

    def volume_at_boundary(self) -> TrigJet:
        return self.volume.restrict()

    def laplacian_x(self, u: TrigJet) -> TrigJet:
        """Laplace-Beltrami operator of g_rho in x, applied rho-wise."""
        if self.flat:
            return u.flat_laplacian_x()
        grads = [u.d_x(i) for i in range(self.dim)]
        acc = TrigJet.zero(u.n, min(u.P, self.P), min(u.E, self.E))
        for i in range(self.dim):
            for j in range(i, self.dim):
                hess = grads[i].d_x(j)
                term = self.inverse[i][j] * hess
                acc = acc + (term if i == j else term.scale(2))
            acc = acc + self.first_order[i] * grads[i]
        return acc


def schouten_conformally_flat(s: TrigJet) -> list:
    """Schouten tensor of e^{2s} delta: -d_i d_j s + d_i s d_j s - |ds|^2 delta_ij / 2."""
    n = s.n
    grads = [s.d_x(i) for i in range(n)]
    sq = grads[0] * grads[0]
    for i in range(1, n):
        sq = sq + grads[i] * grads[i]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = grads[i] * grads[j] - grads[i].d_x(j)
            if i == j:
                entry = entry - sq.scale(Fraction(1, 2))
            row.append(entry)
        out.append(row)
    return out


def conformal_model(phi: TrigJet, rho_order: int, eps_order: int) -> MetricJet:
    """g_rho for the representative e^{2 eps phi} delta of the flat structure.

    ``phi`` is the eps^1 coefficient of the conformal factor (a jet whose only
    nonzero part sits at rho^0 eps^1); a jet carrying only eps^0 data is read
    as phi itself.  The ambient metric uses

        g_rho = g + 2 rho P + rho^2 P g^{-1} P ,

    P the Schouten tensor of g, which is Ricci flat for conformally flat g.
    """
    if eps_order > MAX_EPS_ORDER or rho_order > MAX_RHO_ORDER or rho_order < 0 or eps_order < 0:
        raise TruncationError(
            f"conformal model supports rho-order <= {MAX_RHO_ORDER}, eps-order <= {MAX_EPS_ORDER}")
    n = phi.n
    keys = set(phi.data)
    if keys and keys == {(0, 0)}:
        phi = phi.with_orders(0, eps_order + 1).eps_shift(1)
    elif keys - {(0, 1)}:
        raise ValueError("phi must sit at rho-order 0 and eps-order exactly 1")
    s = phi.with_orders(rho_order, eps_order)
    # the conformal factor is exact in rho: declare the working order
    grow = exp_series(s, 2)
    shrink = exp_series(s, -2)
    schouten = schouten_conformally_flat(s)
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            sq = schouten[i][0] * schouten[0][j]
            for k in range(1, n):
                sq = sq + schouten[i][k] * schouten[k][j]
            entry = schouten[i][j].scale(2).times_rho() + (shrink * sq).times_rho().times_rho()
            if i == j:
                entry = entry + grow
            row.append(entry.with_orders(rho_order, eps_order))
        entries.append(row)
    return MetricJet(entries)
