"""Newton-Puiseux expansion of plane curve germs.

``branches(k)`` returns every local branch of ``k = 0`` at the origin as a
parametrization ``x = t^e, y = sum c_i t^i``.  Coordinate-axis components are
split off exactly first.  The remaining germ is convenient, and its branches
are found by the classical iteration: pick an edge ``(p, q)`` and a root
``beta`` of the edge polynomial, substitute ``x = x1^p, y = x1^q (alpha + y1)``
with ``alpha^p = beta``, and repeat until the root is simple.  The last stage
is solved term by term (implicit function theorem).

Each substitution is an exact polynomial transform, so separating branches
never depends on the requested truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, RootFindingError, TruncationError
from .newton import _lower_chain_2d, primitive
from .polycore.poly import Polynomial
from .polycore.roots import complex_roots, principal_root
from .polycore.series import ZERO_REL, ComplexSeries, compose_series, is_exact

DEFAULT_ORDER = 12
MAX_DEPTH = 16
SNAP_TOL = 1e-10
SNAP_DENOMINATOR = 10**6


@dataclass(frozen=True)
class PuiseuxBranch:
    normal: tuple[int, int] | None
    alpha: Fraction | complex | None
    beta: Fraction | complex | None
    e: int
    r: int
    x_series: ComplexSeries
    y_series: ComplexSeries
    truncation: int | float
    rooted_at: str
    axis: str | None = None
    exact_finite: bool = False
    multiplicity: int = 1
    depth: int = 0

    @property
    def series(self) -> list[ComplexSeries]:
        return [self.x_series, self.y_series]

    def is_exact(self) -> bool:
        return self.y_series.is_exact() and self.x_series.is_exact()

    def to_json(self) -> dict:
        x = "0" if self.x_series.is_zero() else ("t" if self.e == 1 else f"t^{self.e}")
        out = {
            "x": x,
            "y": [_coeff_json(i, c) for i, c in sorted(self.y_series.terms().items())],
            "P": list(self.normal) if self.normal else None,
            "alpha": _number_json(self.alpha),
            "rooted_at": self.rooted_at,
            "ramification": self.e,
            "r": self.r,
            "multiplicity": self.multiplicity,
            "verified_to": _trunc_json(self.truncation),
        }
        if self.axis:
            out["axis"] = self.axis
        if self.exact_finite:
            out["exact_finite"] = True
        return out


def _trunc_json(t):
    return "exact" if t == math.inf else int(t)


def _round(v: float) -> float:
    r = round(v, 12)
    return 0.0 if r == 0 else r


def _number_json(c):
    if c is None:
        return None
    if is_exact(c):
        return str(Fraction(c))
    return {"re": _round(c.real), "im": _round(c.imag)}


def _coeff_json(i: int, c) -> dict:
    out = {"ord": i}
    if is_exact(c):
        out.update({"re": _round(float(c)), "im": 0.0, "exact": str(Fraction(c))})
    else:
        out.update({"re": _round(c.real), "im": _round(c.imag)})
    return out


def _fmt_number(c) -> str:
    if is_exact(c):
        return str(Fraction(c))
    c = complex(c)
    return f"({c.real:.9g}{c.imag:+.9g}j)"


def _root_label(p: int, q: int, beta, mu: int) -> str:
    y = "y" if p == 1 else f"y^{p}"
    x = "x" if q == 1 else f"x^{q}"
    if is_exact(beta):
        c = abs(Fraction(beta))
        coef = "" if c == 1 else f"{c}*"
        body = f"{y} {'+' if beta < 0 else '-'} {coef}{x}"
    else:
        body = f"{y} - {_fmt_number(beta)}*{x}"
    return f"({body})^{mu}"


# ---------------------------------------------------------------------------
# bivariate polynomials with float-aware zero tests

Biv = dict  # (i, j) -> (coefficient, magnitude bound)


def _biv_from_poly(p: Polynomial) -> Biv:
    return {e: (c, float(abs(c))) for e, c in p.terms.items()}


def _is_zero(c, bound: float) -> bool:
    if is_exact(c):
        return c == 0
    return abs(c) <= ZERO_REL * bound


def _clean(G: Biv) -> Biv:
    return {e: cb for e, cb in G.items() if not _is_zero(*cb)}


def _transform(G: Biv, p: int, q: int, alpha) -> Biv:
    """``x1^-d * G(x1^p, x1^q (alpha + y1))`` with d the weighted degree."""
    d = min(p * i + q * j for i, j in G)
    am = abs(complex(alpha))
    out: dict = {}
    for (i, j), (c, b) in G.items():
        xi = p * i + q * j - d
        binom = 1
        for k in range(j + 1):
            # coefficient of y1^k in (alpha + y1)^j
            term = c * binom * alpha ** (j - k)
            tb = b * binom * am ** (j - k)
            key = (xi, k)
            if key in out:
                oc, ob = out[key]
                out[key] = (oc + term, ob + tb)
            else:
                out[key] = (term, tb)
            binom = binom * (j - k) // (k + 1)
    return _clean(out)


def _edge_polynomial(G: Biv, p: int, q: int) -> list:
    d = min(p * i + q * j for i, j in G)
    on = [e for e in G if p * e[0] + q * e[1] == d]
    i0, j0 = max(on)
    i_min = min(e[0] for e in on)
    length = (i0 - i_min) // q
    zero = Fraction(0)
    return [G.get((i0 - k * q, j0 + k * p), (zero, 0.0))[0] for k in range(length + 1)]


def _edges(G: Biv) -> list[tuple[int, int]]:
    chain = _lower_chain_2d(list(G))
    return [primitive((v[1] - u[1], u[0] - v[0])) for u, v in zip(chain, chain[1:])]


def _biv_compose(G: Biv, xs: ComplexSeries, ys: ComplexSeries, N) -> ComplexSeries:
    maxi = max(i for i, _ in G)
    maxj = max(j for _, j in G)
    one = ComplexSeries.constant(Fraction(1), N)
    xp = [one]
    for _ in range(maxi):
        xp.append((xp[-1] * xs).truncate(N))
    yp = [one]
    for _ in range(maxj):
        yp.append((yp[-1] * ys).truncate(N))
    total = ComplexSeries.build(0, [], N)
    for (i, j), (c, b) in sorted(G.items()):
        total = total + (xp[i] * yp[j]).truncate(N).scale(c)
    return total.truncate(N)


# ---------------------------------------------------------------------------
# the iteration


@dataclass
class _State:
    e: int  # x = x_cur^e
    prefix: dict  # y = prefix(x_cur) + x_cur^s * y_cur, stored as {exp: (coeff, bound)}
    s: int
    depth: int


def _advance(state: _State, p: int, q: int, alpha) -> _State:
    prefix = {k * p: v for k, v in state.prefix.items()}
    s = p * state.s + q
    prefix[s] = (alpha, abs(complex(alpha)))
    return _State(state.e * p, prefix, s, state.depth + 1)


def _implicit_solve(G: Biv, n_terms: int) -> list[tuple]:
    """Coefficients c_1..c_{n_terms} of the unique root y1 = sum c_n x1^n of G (simple at 0)."""
    A, Ab = G.get((0, 1), (Fraction(0), 0.0))
    if _is_zero(A, Ab):
        raise RootFindingError("implicit-function stage reached with a vanishing y-derivative")
    coeffs: list = []
    for n in range(1, n_terms + 1):
        N = n + 1
        xs = ComplexSeries.monomial(1, Fraction(1), N)
        terms = {i + 1: c for i, (c, _) in enumerate(coeffs)}
        ys = ComplexSeries.from_terms(terms, N) if terms else ComplexSeries.build(0, [], N)
        val = _biv_compose(G, xs, ys, N)
        c = val.coefficient(n)
        b = val.bound(n)
        cn = -c / A
        if is_exact(cn):
            coeffs.append((cn, float(abs(cn))))
        else:
            bound = b / abs(A)
            coeffs.append((0 * cn if abs(cn) <= ZERO_REL * bound else cn, max(bound, abs(cn))))
    return coeffs


def _y_series(state: _State, tail: list[tuple], T: int) -> ComplexSeries:
    terms = dict(state.prefix)
    for n, cb in enumerate(tail, start=1):
        terms[state.s + n] = cb
    lo = min(terms)
    hi = max(max(terms), lo)
    cs, bs = [], []
    for i in range(lo, hi + 1):
        c, b = terms.get(i, (Fraction(0), 0.0))
        cs.append(c)
        bs.append(b)
    return ComplexSeries.build(lo, cs, T, bs)


def _snap(c):
    if is_exact(c):
        return c
    c = complex(c)
    if abs(c.imag) > SNAP_TOL * max(1.0, abs(c)):
        return None
    cand = Fraction(c.real).limit_denominator(SNAP_DENOMINATOR)
    if abs(float(cand) - c.real) > SNAP_TOL * max(1.0, abs(c)):
        return None
    return cand


def branches(k: Polynomial, order: int = DEFAULT_ORDER) -> list[PuiseuxBranch]:
    """All branches of k = 0 at the origin, each verified by substitution.

    ``order`` is the number of series terms computed beyond the leading one.
    """
    if k.nvars != 2:
        raise PreconditionError("Puiseux expansion needs a two-variable polynomial")
    if k.is_zero():
        raise PreconditionError("the zero polynomial has no branches")
    if k.constant_term() != 0:
        return []
    if order < 4:
        raise PreconditionError("order must be at least 4")
    a, b = k.monomial_content()
    out: list[PuiseuxBranch] = []
    if a:
        out.append(_axis_branch("x", a))
    if b:
        out.append(_axis_branch("y", b))
    core = k.divide_monomial((a, b))
    if core.constant_term() != 0:
        return out
    G = _biv_from_poly(core)
    for P in _edges(G):
        p, q = P
        E = _edge_polynomial(G, p, q)
        for beta, mu in complex_roots(E):
            alpha = principal_root(beta, p)
            root_label = _root_label(p, q, beta, mu)
            found = []
            state = _advance(_State(1, {}, 0, 0), p, q, alpha)
            _descend(_transform(G, p, q, alpha), state, mu, order, found)
            total = 0
            for st, tail, mult, exact_finite in found:
                T = _truncation(st, order)
                ys = _y_series(st, tail, math.inf if exact_finite else T)
                if not exact_finite:
                    ys = ys.truncate(T)
                branch = PuiseuxBranch(
                    normal=(p, q),
                    alpha=alpha,
                    beta=beta,
                    e=st.e,
                    r=st.e // p,
                    x_series=ComplexSeries.monomial(st.e, Fraction(1)),
                    y_series=ys,
                    truncation=math.inf if exact_finite else T,
                    rooted_at=root_label,
                    exact_finite=exact_finite,
                    multiplicity=mult,
                    depth=st.depth,
                )
                branch = _maybe_exact(k, branch)
                res = verify_branch(k, branch)
                if res < branch.truncation:
                    raise TruncationError(
                        f"branch rooted at {root_label} has residual order {res} below its truncation "
                        f"{branch.truncation}"
                    )
                total += branch.r * mult
                out.append(branch)
            if total != mu:
                raise RootFindingError(
                    f"branches rooted at {root_label} account for {total} factors, expected {mu}"
                )
    return out


def _truncation(state: _State, order: int) -> int:
    return min(state.prefix) + order + 1


def _descend(G: Biv, state: _State, mu: int, order: int, found: list) -> None:
    if state.depth > MAX_DEPTH:
        raise TruncationError(
            f"branches did not separate within recursion depth {MAX_DEPTH}; required depth exceeds the cap"
        )
    m = min(j for _, j in G)
    if m:
        found.append((state, [], m, True))
        G = {(i, j - m): cb for (i, j), cb in G.items()}
    if mu - m == 0:
        return
    if mu - m == 1:
        # y is needed below T = lead + order + 1; the tail starts at exponent s + 1
        n_terms = max(0, _truncation(state, order) - state.s - 1)
        tail = _implicit_solve(G, n_terms) if n_terms else []
        found.append((state, tail, 1, False))
        return
    for P in _edges(G):
        p, q = P
        E = _edge_polynomial(G, p, q)
        for beta, nu in complex_roots(E):
            alpha = principal_root(beta, p)
            _descend(_transform(G, p, q, alpha), _advance(state, p, q, alpha), nu, order, found)


def _maybe_exact(k: Polynomial, b: PuiseuxBranch) -> PuiseuxBranch:
    """Replace float coefficients by rationals when all of them snap and the result verifies exactly."""
    if b.y_series.is_exact():
        return b
    snapped = {}
    for i, c in b.y_series.terms().items():
        s = _snap(c)
        if s is None:
            return b
        snapped[i] = s
    ys = ComplexSeries.from_terms(snapped, b.truncation)
    cand = PuiseuxBranch(**{**b.__dict__, "y_series": ys, "alpha": _snap(b.alpha), "beta": _snap(b.beta)})
    if verify_branch(k, cand) >= cand.truncation:
        return cand
    return b


def _axis_branch(axis: str, mult: int) -> PuiseuxBranch:
    t = ComplexSeries.monomial(1, Fraction(1))
    zero = ComplexSeries.build(0, [], math.inf)
    if axis == "x":  # the component x = 0
        xs, ys, label = zero, t, "x"
    else:
        xs, ys, label = t, zero, "y"
    return PuiseuxBranch(
        normal=None,
        alpha=None,
        beta=None,
        e=0 if axis == "x" else 1,
        r=1,
        x_series=xs,
        y_series=ys,
        truncation=math.inf,
        rooted_at=f"{label}^{mult}",
        axis=axis,
        exact_finite=True,
        multiplicity=mult,
    )


def verify_branch(k: Polynomial, b: PuiseuxBranch) -> int | float:
    """Order in t of k along the literally truncated parametrization (inf if it vanishes exactly)."""
    xs = ComplexSeries.build(b.x_series.order, b.x_series.coeffs, math.inf, b.x_series.bounds)
    ys = ComplexSeries.build(b.y_series.order, b.y_series.coeffs, math.inf, b.y_series.bounds)
    res = compose_series(k, [xs, ys], math.inf, require_leading=False)
    return math.inf if res.is_zero() else res.order
