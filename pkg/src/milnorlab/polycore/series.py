"""Truncated Laurent series in one variable ``t``.

Coefficients are either exact (:class:`~fractions.Fraction`) or complex
floats.  Each series carries its reliable truncation ``N``: coefficients of
``t^i`` are known for ``order <= i < N``.  ``N = math.inf`` marks an exact
polynomial.

Float coefficients also carry a magnitude bound, roughly the sum of the
absolute values of everything that was added up to produce them.  A float
coefficient is treated as zero when it is below ``ZERO_REL`` times that bound.
That is how cancellation noise is distinguished from a genuine term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import TruncationError
from .poly import Polynomial

ZERO_REL = 1e-9

Number = Fraction | complex


def _mag(c) -> float:
    try:
        return float(abs(c))
    except OverflowError:
        return math.inf


def is_exact(c) -> bool:
    return isinstance(c, (Fraction, int))


def coeff_is_zero(c, bound: float) -> bool:
    if is_exact(c):
        return c == 0
    return abs(c) <= ZERO_REL * bound


@dataclass(frozen=True)
class ComplexSeries:
    order: int
    coeffs: tuple
    truncation: int | float
    bounds: tuple = ()

    def __post_init__(self):
        if len(self.bounds) != len(self.coeffs):
            object.__setattr__(self, "bounds", tuple(_mag(c) for c in self.coeffs))

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, order: int, coeffs: Sequence, truncation, bounds: Sequence[float] | None = None):
        """Normalize: drop (numerically) zero leading terms and clip at ``truncation``."""
        coeffs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        bounds = list(bounds) if bounds is not None else [_mag(c) for c in coeffs]
        if truncation != math.inf:
            keep = max(0, int(truncation) - order)
            coeffs, bounds = coeffs[:keep], bounds[:keep]
        start = 0
        while start < len(coeffs) and coeff_is_zero(coeffs[start], bounds[start]):
            start += 1
        coeffs, bounds = coeffs[start:], bounds[start:]
        order += start
        if truncation == math.inf:
            while coeffs and coeff_is_zero(coeffs[-1], bounds[-1]):
                coeffs.pop()
                bounds.pop()
        if not coeffs:
            order = int(truncation) if truncation != math.inf else 0
        return cls(order, tuple(coeffs), truncation, tuple(bounds))

    @classmethod
    def from_terms(cls, terms: dict[int, Number], truncation=math.inf) -> "ComplexSeries":
        if not terms:
            return cls.build(0, [], truncation)
        lo = min(terms)
        hi = max(terms)
        return cls.build(lo, [terms.get(i, Fraction(0)) for i in range(lo, hi + 1)], truncation)

    @classmethod
    def constant(cls, c, truncation=math.inf) -> "ComplexSeries":
        return cls.build(0, [c], truncation)

    @classmethod
    def monomial(cls, k: int, c=Fraction(1), truncation=math.inf) -> "ComplexSeries":
        return cls.build(k, [c], truncation)

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known (identically zero up to truncation)."""
        return not self.coeffs

    @property
    def leading(self):
        if not self.coeffs:
            raise TruncationError("series is zero up to its truncation; no leading term")
        return self.coeffs[0]

    def coefficient(self, i: int):
        if i >= self.truncation:
            raise TruncationError(f"coefficient of t^{i} is beyond truncation {self.truncation}")
        j = i - self.order
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return Fraction(0)

    def bound(self, i: int) -> float:
        j = i - self.order
        if 0 <= j < len(self.bounds):
            return self.bounds[j]
        return 0.0

    def coefficient_is_zero(self, i: int) -> bool:
        return coeff_is_zero(self.coefficient(i), self.bound(i))

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def terms(self) -> dict[int, Number]:
        return {self.order + j: c for j, c in enumerate(self.coeffs)}

    def truncate(self, n) -> "ComplexSeries":
        return ComplexSeries.build(self.order, self.coeffs, min(self.truncation, n), self.bounds)

    def with_truncation(self, n) -> "ComplexSeries":
        """Treat an exact polynomial as a series known below ``n``."""
        if self.truncation != math.inf:
            raise TruncationError("only exact polynomials can be re-truncated upward")
        return self.truncate(n)

    def evaluate(self, t: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * t + complex(c)
        return acc * t**self.order if self.coeffs else 0j

    # -- arithmetic -------------------------------------------------------

    def _dense(self, lo: int, hi: int):
        """Coefficients and bounds for exponents lo..hi-1."""
        cs, bs = [], []
        for i in range(lo, hi):
            j = i - self.order
            if 0 <= j < len(self.coeffs):
                cs.append(self.coeffs[j])
                bs.append(self.bounds[j])
            else:
                cs.append(Fraction(0))
                bs.append(0.0)
        return cs, bs

    def _hi(self):
        return self.order + len(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, ComplexSeries):
            other = ComplexSeries.constant(other)
        trunc = min(self.truncation, other.truncation)
        if self.is_zero() and other.is_zero():
            return ComplexSeries.build(0, [], trunc)
        lo = min(s.order for s in (self, other) if not s.is_zero())
        hi = max(self._hi(), other._hi())
        if trunc != math.inf:
            hi = min(hi, int(trunc))
        a, ab = self._dense(lo, hi)
        b, bb = other._dense(lo, hi)
        return ComplexSeries.build(
            lo, [x + y for x, y in zip(a, b)], trunc, [x + y for x, y in zip(ab, bb)]
        )

    __radd__ = __add__

    def __neg__(self):
        return ComplexSeries(self.order, tuple(-c for c in self.coeffs), self.truncation, self.bounds)

    def __sub__(self, other):
        if not isinstance(other, ComplexSeries):
            other = ComplexSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "ComplexSeries":
        m = _mag(c)
        return ComplexSeries.build(
            self.order, [c * x for x in self.coeffs], self.truncation, [m * b for b in self.bounds]
        )

    def __mul__(self, other):
        if not isinstance(other, ComplexSeries):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return _mul_zero(self, other)
        order = self.order + other.order
        trunc = min(self.truncation + other.order, other.truncation + self.order)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if trunc != math.inf:
            n = min(n, int(trunc) - order)
        cs = [Fraction(0)] * max(n, 0)
        bs = [0.0] * max(n, 0)
        for i, (a, ab) in enumerate(zip(self.coeffs, self.bounds)):
            if i >= n:
                break
            if is_exact(a) and a == 0:
                continue
            for j, (b, bb) in enumerate(zip(other.coeffs, other.bounds)):
                k = i + j
                if k >= n:
                    break
                cs[k] = cs[k] + a * b
                bs[k] += ab * bb
        return ComplexSeries.build(order, cs, trunc, bs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = ComplexSeries.constant(Fraction(1))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __str__(self) -> str:
        if self.is_zero():
            return f"O(t^{self.truncation})"
        parts = [f"({_fmt(c)})*t^{self.order + j}" for j, c in enumerate(self.coeffs)]
        tail = "" if self.truncation == math.inf else f" + O(t^{self.truncation})"
        return " + ".join(parts) + tail


def _mul_zero(a: ComplexSeries, b: ComplexSeries) -> ComplexSeries:
    # zero times anything: exact zero stays exact, otherwise reliability is
    # limited by how far the zero factor is known.
    z, other = (a, b) if a.is_zero() else (b, a)
    if z.truncation == math.inf:
        return ComplexSeries.build(0, [], math.inf)
    shift = other.order if not other.is_zero() else other.truncation
    if shift == math.inf:
        return ComplexSeries.build(0, [], math.inf)
    return ComplexSeries.build(0, [], z.truncation + shift)


def _fmt(c) -> str:
    if is_exact(c):
        return str(c)
    return f"{c.real:.12g}{c.imag:+.12g}j"


def series_ratio(num: ComplexSeries, den: ComplexSeries, N=math.inf) -> ComplexSeries:
    """Laurent quotient ``num/den`` known up to the common reliable truncation (capped at N)."""
    if den.is_zero():
        raise TruncationError("denominator is identically zero up to its truncation")
    order = num.order - den.order if not num.is_zero() else None
    if num.is_zero():
        trunc = num.truncation - den.order
        return ComplexSeries.build(0, [], min(trunc, N))
    rel = min(num.truncation - num.order, den.truncation - den.order)
    trunc = min(order + rel, N)
    if trunc == math.inf:
        raise TruncationError("exact quotient of polynomials needs a finite truncation N")
    n = int(trunc) - order
    if n <= 0:
        return ComplexSeries.build(order, [], trunc)
    a, ab = num._dense(num.order, num.order + n)
    b, bb = den._dense(den.order, den.order + n)
    b0 = b[0]
    b0m = _mag(b0)
    q, qb = [], []
    for i in range(n):
        acc = a[i]
        accb = ab[i]
        for m in range(max(0, i - len(den.coeffs) + 1), i):
            acc = acc - q[m] * b[i - m]
            accb += qb[m] * bb[i - m]
        q.append(acc / b0)
        qb.append(accb / b0m)
    return ComplexSeries.build(order, q, trunc, qb)


def compose_series(
    p: Polynomial,
    branch: Sequence[ComplexSeries],
    N,
    require_leading: bool = True,
) -> ComplexSeries:
    """Series of ``p(branch(t))`` known below ``N``.

    Every input series must be known at least up to ``N`` and have
    non-negative order.  With ``require_leading`` a result that is zero up to
    the truncation raises :class:`TruncationError` instead of being returned.
    """
    if len(branch) != p.nvars:
        raise ValueError(f"branch has {len(branch)} components, polynomial has {p.nvars} variables")
    for s in branch:
        if s.truncation < N:
            raise TruncationError(f"input series known only below t^{s.truncation}, need {N}")
        if not s.is_zero() and s.order < 0:
            raise ValueError("compose_series needs power series (order >= 0)")
    branch = [s.truncate(N) for s in branch]
    maxdeg = [max((e[i] for e in p.terms), default=0) for i in range(p.nvars)]
    powers = []
    for s, m in zip(branch, maxdeg):
        pw = [ComplexSeries.constant(Fraction(1), N)]
        for _ in range(m):
            pw.append((pw[-1] * s).truncate(N))
        powers.append(pw)
    total = ComplexSeries.build(0, [], N)
    for e, c in p.terms.items():
        term = ComplexSeries.constant(c, N)
        for i, k in enumerate(e):
            if k:
                term = (term * powers[i][k]).truncate(N)
        total = total + term
    total = total.truncate(N)
    if require_leading and total.is_zero():
        raise TruncationError(
            f"p vanishes along the branch up to t^{total.truncation}; leading term undetermined"
        )
    return total
