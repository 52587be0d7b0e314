"""Truncated formal power series in the quantum parameter q.

A QSeries stores coefficients c_0..c_D together with an explicit truncation
order D; ``order=None`` marks an exact polynomial (all higher coefficients
known to vanish).  Arithmetic tracks the minimum truncation order of the
operands, so a coefficient is only ever reported when it is actually known.
"""

from fractions import Fraction

from .errors import NonInvertible

EXACT = None


def _min_order(a, b):
    if a is EXACT:
        return b
    if b is EXACT:
        return a
    return min(a, b)


class QSeries:
    __slots__ = ("ctx", "coeffs", "order")

    def __init__(self, ctx, coeffs, order=EXACT):
        ctx.require_exact()
        self.ctx = ctx
        cs = list(coeffs)
        if order is not EXACT:
            cs = cs[:order + 1]
            while len(cs) < order + 1:
                cs.append(ctx.zero)
        else:
            while len(cs) > 1 and cs[-1] == 0:
                cs.pop()
            if not cs:
                cs = [ctx.zero]
        self.coeffs = tuple(cs)
        self.order = order

    # -- constructors ----------------------------------------------------------

    @classmethod
    def const(cls, ctx, value, order=EXACT):
        return cls(ctx, [value], order)

    @classmethod
    def gen(cls, ctx, order=EXACT):
        """The series q itself."""
        return cls(ctx, [ctx.zero, ctx.one], order)

    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return QSeries.const(self.ctx, self.ctx.from_fraction(Fraction(other)))
        # bare field scalar
        return QSeries.const(self.ctx, other)

    # -- inspection -------------------------------------------------------------

    def coeff(self, i):
        if self.order is not EXACT and i > self.order:
            raise IndexError("coefficient %d beyond truncation order %d"
                             % (i, self.order))
        if i < len(self.coeffs):
            return self.coeffs[i]
        return self.ctx.zero

    @property
    def constant(self):
        return self.coeff(0)

    def known_len(self):
        return len(self.coeffs) if self.order is EXACT else self.order + 1

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_constant(self):
        return all(c == 0 for c in self.coeffs[1:])

    def truncate(self, order):
        if self.order is not EXACT and order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.ctx, self.coeffs, order)

    def as_exact(self):
        """Reinterpret the known window as an exact polynomial."""
        return QSeries(self.ctx, self.coeffs, EXACT)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        order = _min_order(self.order, other.order)
        m = max(len(self.coeffs), len(other.coeffs))
        if order is not EXACT:
            m = min(m, order + 1)
        cs = [self.coeff_raw(i) + other.coeff_raw(i) for i in range(m)]
        return QSeries(self.ctx, cs, order)

    def coeff_raw(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else self.ctx.zero

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.ctx, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        order = _min_order(self.order, other.order)
        la, lb = len(self.coeffs), len(other.coeffs)
        m = la + lb - 2
        if order is not EXACT:
            m = min(m, order)
        zero = self.ctx.zero
        cs = [zero] * (m + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0 or i > m:
                continue
            top = min(lb - 1, m - i)
            for j in range(top + 1):
                b = other.coeffs[j]
                if b != 0:
                    cs[i + j] = cs[i + j] + a * b
        return QSeries(self.ctx, cs, order)

    __rmul__ = __mul__

    def inverse(self, order=None):
        """Multiplicative inverse to the requested (or tracked) order."""
        c0 = self.constant
        if c0 == 0:
            raise NonInvertible("series has zero constant term")
        try:
            i0 = 1 / c0
        except ZeroDivisionError:
            raise NonInvertible("constant term not invertible") from None
        if self.order is EXACT and self.is_constant():
            return QSeries(self.ctx, [i0], EXACT)
        if order is None:
            order = self.order
        if order is EXACT:
            raise NonInvertible("inverse of a non-constant polynomial "
                                "needs an explicit truncation order")
        if self.order is not EXACT:
            order = min(order, self.order)
        inv = [i0]
        for m in range(1, order + 1):
            s = self.ctx.zero
            for j in range(1, m + 1):
                s = s + self.coeff_raw(j) * inv[m - j]
            inv.append(-i0 * s)
        return QSeries(self.ctx, inv, order)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_constant() and other.order is EXACT:
            c = other.constant
            if c == 0:
                raise NonInvertible("division by zero")
            return QSeries(self.ctx, [a / c for a in self.coeffs], self.order)
        order = _min_order(self.order, other.order)
        if order is EXACT:
            raise NonInvertible("division of exact polynomials needs a "
                                "truncation order; use .truncate first")
        return (self.truncate(order)) * other.inverse(order)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        acc = QSeries.const(self.ctx, self.ctx.one)
        if self.order is not EXACT:
            acc = acc.truncate(self.order)
        for _ in range(e):
            acc = acc * self
        return acc

    def qshift(self, d):
        """Multiply by q^d; extends knowledge accordingly."""
        order = self.order if self.order is EXACT else self.order + d
        return QSeries(self.ctx, [self.ctx.zero] * d + list(self.coeffs), order)

    # -- comparison ----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            other = self._coerce(other)
        m = max(len(self.coeffs), len(other.coeffs))
        if self.order is not EXACT or other.order is not EXACT:
            o = _min_order(self.order, other.order)
            m = min(m - 1, o) + 1
        return all(self.coeff_raw(i) == other.coeff_raw(i) for i in range(m))

    def __hash__(self):
        raise TypeError("QSeries is unhashable; use its string form")

    def eq_upto(self, other, order):
        other = self._coerce(other)
        return all(self.coeff(i) == other.coeff(i) for i in range(order + 1))

    def __repr__(self):
        from .exprio import qseries_to_str
        tail = "" if self.order is EXACT else " + O(q^%d)" % (self.order + 1)
        return "<QSeries %s%s>" % (qseries_to_str(self), tail)
