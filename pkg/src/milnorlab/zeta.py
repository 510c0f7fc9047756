"""Monodromy zeta functions in factored form.

A zeta function is stored as a multiset of factors ``(1 - t^d)^e``.  The plane
curve formulas are A'Campo's; corner factors carry exponent +1 and edge
factors exponent ``-l_j``, which is what makes ``mu = 1 - deg(zeta)`` hold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import ZETA_CONVENTION
from .errors import (
    DegenerateFaceError,
    MultiplicityConditionViolated,
    NotConvenientError,
    NotHomogeneousError,
    PreconditionError,
    VariableMismatchError,
)
from .newton import (
    face_function,
    multiplicity_condition,
    newton_boundary,
    nondegeneracy_2d,
    pair_nondegeneracy_2d,
    weighted_degree,
)
from .polycore.poly import Polynomial
from .polycore.roots import gcd_poly, squarefree_part


@dataclass(frozen=True)
class ZetaFactored:
    factors: tuple[tuple[int, int], ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_factors(cls, factors: Iterable[tuple[int, int]], warnings=()) -> "ZetaFactored":
        merged: dict[int, int] = {}
        for d, e in factors:
            if d < 1:
                raise ValueError(f"factor (1 - t^{d}) needs d >= 1")
            merged[d] = merged.get(d, 0) + e
        return cls(tuple(sorted((d, e) for d, e in merged.items() if e != 0)), tuple(warnings))

    @property
    def degree(self) -> int:
        return sum(d * e for d, e in self.factors)

    @property
    def milnor(self) -> int:
        return 1 - self.degree

    def to_json(self) -> dict:
        out = {
            "factors": [{"d": d, "e": e} for d, e in self.factors],
            "degree": self.degree,
            "milnor": self.milnor,
            "convention": ZETA_CONVENTION,
        }
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for d, e in self.factors:
            base = "(1-t)" if d == 1 else f"(1-t^{d})"
            parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts)


def milnor_from_zeta(z: ZetaFactored) -> int:
    return z.milnor


def _checked_plane(f: Polynomial, name: str = "f"):
    if f.nvars != 2:
        raise PreconditionError("plane zeta formulas need two variables")
    data = newton_boundary(f)
    if not data.convenient:
        raise NotConvenientError(f"{name} is not convenient (intercepts {data.intercepts})")
    ok, bad = nondegeneracy_2d(f)
    if not ok:
        raise DegenerateFaceError(f"{name} is degenerate on the face with normal P={bad}", bad)
    return data


def _edge_roots(p: Polynomial, P, edge_normals) -> int:
    """Distinct face-factor count at P (0 when the face of p at P is a vertex)."""
    if P not in edge_normals:
        return 0
    return face_function(p, P).distinct_roots


def zeta_plane(f: Polynomial) -> ZetaFactored:
    data = _checked_plane(f)
    factors = [(data.a_x, 1), (data.a_y, 1)]
    for e in data.edges():
        factors.append((e.d, -face_function(f, e.normal).distinct_roots))
    return ZetaFactored.from_factors(factors)


def _subdivision(f: Polynomial, g: Polynomial):
    if f.variables != g.variables:
        raise VariableMismatchError("f and g must live in the same polynomial ring")
    df, dg = _checked_plane(f, "f"), _checked_plane(g, "g")
    ok, bad = pair_nondegeneracy_2d(f, g)
    if not ok:
        raise DegenerateFaceError(f"f and g share a face factor on the face with normal P={bad}", bad)
    nf = {e.normal for e in df.edges()}
    ng = {e.normal for e in dg.edges()}
    normals = sorted(nf | ng, key=lambda v: Fraction(v[0], v[1]))
    rows = []
    for R in normals:
        rows.append(
            (R, weighted_degree(R, f), weighted_degree(R, g), _edge_roots(f, R, nf), _edge_roots(g, R, ng))
        )
    return df, dg, rows


def zeta_plane_product(f: Polynomial, g: Polynomial) -> ZetaFactored:
    """Zeta function of h = f*g from the subdivided Newton data of f and g."""
    df, dg, rows = _subdivision(f, g)
    factors = [(df.a_x + dg.a_x, 1), (df.a_y + dg.a_y, 1)]
    for _, d_f, d_g, l, m in rows:
        factors.append((d_f + d_g, -(l + m)))
    return ZetaFactored.from_factors(factors)


def zeta_mixed_plane(f: Polynomial, g: Polynomial) -> ZetaFactored:
    """Zeta function of H = f*conj(g) under the Newton multiplicity condition."""
    verdict = multiplicity_condition(f, g)
    if not verdict.satisfied:
        raise MultiplicityConditionViolated(verdict.witness)
    df, dg, rows = _subdivision(f, g)
    sign = 1 if verdict.direction == "f_above_g" else -1
    factors = [(sign * (df.a_x - dg.a_x), 1), (sign * (df.a_y - dg.a_y), 1)]
    for _, d_f, d_g, l, m in rows:
        factors.append((sign * (d_f - d_g), -(l + m)))
    if any(d <= 0 for d, _ in factors):
        raise PreconditionError(
            "exponent differences are not one-signed although the multiplicity condition holds"
        )
    return ZetaFactored.from_factors(factors)


# ---------------------------------------------------------------------------
# homogeneous three-variable case


def _homogeneous_degree(p: Polynomial, name: str) -> int:
    degs = {sum(e) for e in p.terms}
    if len(degs) != 1:
        raise NotHomogeneousError(f"{name} is not homogeneous (total degrees {sorted(degs)})")
    return degs.pop()


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def restrict_to_line(p: Polynomial, a, b) -> list[Fraction]:
    """Coefficients (low to high) of ``s -> p(a + s*b)``."""
    total = [Fraction(0)]
    for e, c in p.terms.items():
        term = [c]
        for k, ai, bi in zip(e, a, b):
            for _ in range(k):
                term = _poly_mul(term, [Fraction(ai), Fraction(bi)])
        if len(term) > len(total):
            total += [Fraction(0)] * (len(term) - len(total))
        for i, c2 in enumerate(term):
            total[i] += c2
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


def _line_section_warnings(f: Polynomial, g: Polynomial, df: int, dg: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    a = [Fraction(rng.randint(-97, 97), rng.randint(1, 31)) for _ in range(3)]
    b = [Fraction(rng.randint(-97, 97), rng.randint(1, 31)) for _ in range(3)]
    lf, lg = restrict_to_line(f, a, b), restrict_to_line(g, a, b)
    out = []
    if len(lf) - 1 != df or squarefree_part(lf)[1] != df:
        out.append(f"random line meets C_f in fewer than {df} distinct points; smoothness not corroborated")
    if len(lg) - 1 != dg or squarefree_part(lg)[1] != dg:
        out.append(f"random line meets C_g in fewer than {dg} distinct points; smoothness not corroborated")
    if len(gcd_poly(lf, lg)) > 1:
        out.append("C_f and C_g meet on a random line; not in general position")
    return out


def euler_characteristic_plane_curve(d: int) -> int:
    """Euler characteristic of a smooth projective plane curve of degree d."""
    return 2 - (d - 1) * (d - 2)


def zeta_mixed_homog3(f: Polynomial, g: Polynomial, seed: int = 20240101) -> ZetaFactored:
    """Zeta function of f*conj(g) for homogeneous f, g in three variables.

    Smoothness of C_f, C_g and transversality of their intersection are
    assumed; a random rational line section is checked and any failure is
    attached as a warning, never as a proof.
    """
    if f.variables != g.variables:
        raise VariableMismatchError("f and g must live in the same polynomial ring")
    if f.nvars != 3:
        raise PreconditionError("zeta_mixed_homog3 needs exactly three variables")
    if f.is_zero() or g.is_zero():
        raise PreconditionError("f and g must be nonzero")
    df, dg = _homogeneous_degree(f, "f"), _homogeneous_degree(g, "g")
    if df == dg:
        raise PreconditionError(f"equal degrees d_f = d_g = {df}: polar degree 0, multiplicity condition fails")
    chi = 3 - (euler_characteristic_plane_curve(df) + euler_characteristic_plane_curve(dg) - df * dg)
    warnings = _line_section_warnings(f, g, df, dg, seed)
    return ZetaFactored.from_factors([(abs(df - dg), -chi)], warnings)
