"""Univariate polynomials: exact squarefree decomposition and complex roots.

Polynomials are plain coefficient lists in ascending degree order,
``[a0, a1, ..., an]`` meaning ``a0 + a1*s + ... + an*s^n``.  Rational inputs
(``int``/``Fraction``) get exact multiplicities from Yun's algorithm; the
numeric solver only ever sees squarefree factors.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import RootFindingError

DEFAULT_TOL = 1e-12
MAX_ITER = 200
SNAP_DENOMINATOR = 10**6


def _is_rational(c) -> bool:
    return isinstance(c, (int, Fraction))


def trim(p: Sequence) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def deriv(p: Sequence) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def evaluate(p: Sequence, s):
    acc = 0
    for c in reversed(p):
        acc = acc * s + c
    return acc


def monic(p: Sequence) -> list:
    p = trim(p)
    lead = p[-1]
    return [Fraction(c) / lead for c in p]


def divmod_poly(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Exact long division over Q."""
    a = [Fraction(c) for c in trim(a)]
    b = [Fraction(c) for c in trim(b)]
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, bc in enumerate(b):
                r[k + j] -= c * bc
    return trim(q), trim(r[: len(b) - 1])


def gcd_poly(a: Sequence, b: Sequence) -> list:
    """Monic gcd over Q (the gcd of 0 and 0 is 0)."""
    a, b = trim([Fraction(c) for c in a]), trim([Fraction(c) for c in b])
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a) if a else []


def squarefree_part(p: Sequence) -> tuple[list, int]:
    """Return ``(p / gcd(p, p'), number of distinct complex roots)``."""
    p = trim([Fraction(c) for c in p])
    if not p:
        raise ValueError("squarefree part of the zero polynomial")
    if len(p) == 1:
        return p, 0
    g = gcd_poly(p, deriv(p))
    q, r = divmod_poly(p, g)
    assert not r
    return q, len(q) - 1


def squarefree_decomposition(p: Sequence) -> list[tuple[list, int]]:
    """Yun's algorithm: ``p = c * prod(f_i^i)`` with squarefree, coprime ``f_i``."""
    p = trim([Fraction(c) for c in p])
    if len(p) <= 1:
        return []
    out = []
    a = gcd_poly(p, deriv(p))
    b = divmod_poly(p, a)[0]
    c = divmod_poly(deriv(p), a)[0]
    d = [x - y for x, y in _pad(c, deriv(b))]
    i = 1
    while len(trim(b)) > 1:
        a = gcd_poly(b, d)
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        if len(a) > 1:
            out.append((a, i))
        d = [x - y for x, y in _pad(c, deriv(b))]
        i += 1
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


# ---------------------------------------------------------------------------
# numeric roots


def _residual_scale(p: Sequence[complex], z: complex) -> float:
    r = abs(z)
    return sum(abs(c) * r**i for i, c in enumerate(p))


def _polish(p: Sequence[complex], z: complex, tol: float) -> tuple[complex, bool]:
    dp = deriv(p)
    for _ in range(MAX_ITER):
        v = evaluate(p, z)
        if abs(v) <= tol * _residual_scale(p, z):
            return z, True
        dv = evaluate(dp, z)
        if dv == 0:
            return z, False
        step = v / dv
        z = z - step
        if abs(step) <= 1e-17 * max(1.0, abs(z)):
            break
    v = evaluate(p, z)
    return z, abs(v) <= tol * _residual_scale(p, z)


def _aberth(p: Sequence[complex], guesses: Sequence[complex], tol: float) -> list[complex]:
    z = list(guesses)
    dp = deriv(p)
    n = len(z)
    for _ in range(MAX_ITER):
        done = True
        for i in range(n):
            v = evaluate(p, z[i])
            if abs(v) <= tol * _residual_scale(p, z[i]):
                continue
            done = False
            ratio = v / evaluate(dp, z[i])
            s = sum(1 / (z[i] - z[j]) for j in range(n) if j != i)
            z[i] = z[i] - ratio / (1 - ratio * s)
        if done:
            return z
    raise RootFindingError(f"simultaneous iteration did not converge in {MAX_ITER} steps")


def _simple_roots(p: Sequence[complex], tol: float) -> list[complex]:
    """All roots of a squarefree polynomial: companion eigenvalues, then Newton polish."""
    n = len(p) - 1
    if n == 1:
        return [-p[0] / p[1]]
    guesses = np.roots(np.array(list(reversed(p)), dtype=complex))
    roots = []
    ok = True
    for g in guesses:
        z, good = _polish(p, complex(g), tol)
        ok &= good
        roots.append(z)
    if not ok or _has_collision(roots):
        roots = _aberth(p, [complex(g) for g in guesses], tol)
        if _has_collision(roots):
            raise RootFindingError("roots of a squarefree factor collided numerically")
    return roots


def _has_collision(roots: Sequence[complex]) -> bool:
    for i in range(len(roots)):
        for j in range(i):
            if abs(roots[i] - roots[j]) <= 1e-10 * max(1.0, abs(roots[i])):
                return True
    return False


def _snap_rational(p_exact: Sequence[Fraction], z: complex):
    if abs(z.imag) > 1e-9 * max(1.0, abs(z)):
        return None
    cand = Fraction(z.real).limit_denominator(SNAP_DENOMINATOR)
    return cand if evaluate(p_exact, cand) == 0 else None


def _clean(z: complex) -> complex:
    # drop rounding noise in a component that is negligible against |z|
    m = abs(z)
    re, im = z.real, z.imag
    if abs(re) <= 1e-14 * m:
        re = 0.0
    if abs(im) <= 1e-14 * m:
        im = 0.0
    return complex(re, im)


def root_sort_key(z) -> tuple[float, float]:
    z = complex(z)
    re = round(z.real, 9) + 0.0
    im = round(z.imag, 9) + 0.0
    return (re, im)


def complex_roots(coeffs: Sequence, tol: float = DEFAULT_TOL) -> list[tuple[Fraction | complex, int]]:
    """All complex roots with multiplicities, in deterministic (re, im) order.

    Rational inputs give exact multiplicities; roots that are rational are
    returned as :class:`Fraction`.  Complex-coefficient inputs fall back to
    clustering of numerically computed roots.
    """
    coeffs = trim(coeffs)
    if len(coeffs) < 2:
        raise ValueError("complex_roots needs a polynomial of degree >= 1")
    if all(_is_rational(c) for c in coeffs):
        out = []
        for factor, mult in squarefree_decomposition(coeffs):
            numeric = [complex(c) for c in factor]
            for z in _simple_roots(numeric, tol):
                exact = _snap_rational(factor, z)
                out.append((exact if exact is not None else _clean(z), mult))
    else:
        out = _clustered_roots([complex(c) for c in coeffs], tol)
    out.sort(key=lambda rm: root_sort_key(rm[0]))
    return out


def _clustered_roots(p: list[complex], tol: float) -> list[tuple[complex, int]]:
    raw = [complex(z) for z in np.roots(np.array(list(reversed(p)), dtype=complex))]
    scale = max(abs(c) for c in p)
    clusters: list[list[complex]] = []
    for z in raw:
        for cl in clusters:
            centre = sum(cl) / len(cl)
            if abs(z - centre) <= 1e-4 * max(1.0, abs(centre)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    out = []
    for cl in clusters:
        m = len(cl)
        centre = sum(cl) / m
        q = p
        for _ in range(m - 1):
            q = deriv(q)
        z, _ = _polish(q, centre, tol)
        if abs(evaluate(p, z)) > 1e-6 * _residual_scale(p, z) and abs(evaluate(p, z)) > 1e-6 * scale:
            raise RootFindingError(f"cluster of {m} roots near {centre} did not refine to a root")
        out.append((_clean(z), m))
    return out


def principal_root(beta, p: int):
    """A ``p``-th root of ``beta``: exact when ``beta`` is a rational perfect power."""
    if p == 1:
        return beta
    if isinstance(beta, (int, Fraction)):
        beta = Fraction(beta)
        if beta == 0:
            return Fraction(0)
        if beta > 0 or p % 2 == 1:
            sign = 1 if beta > 0 else -1
            num = _int_root(abs(beta.numerator), p)
            den = _int_root(beta.denominator, p)
            if num is not None and den is not None:
                return sign * Fraction(num, den)
            if beta > 0:
                return complex(float(beta) ** (1.0 / p))
    z = complex(beta)
    return cmath.exp(cmath.log(z) / p)


def _int_root(n: int, p: int) -> int | None:
    r = round(n ** (1.0 / p))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**p == n:
            return c
    return None
