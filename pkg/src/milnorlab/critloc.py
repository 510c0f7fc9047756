"""Critical curves of H = f*conj(g) along the Jacobian curve.

Every critical point of H off V(H) lies on J(f, g) = f_x g_y - f_y g_x = 0.
Along a branch of J the ratio

    sigma(t) = f_j(z(t)) g(z(t)) / (g_j(z(t)) f(z(t)))

decides everything: a critical point of H on the branch is a point where
|sigma| = 1.  If sigma tends to 0 or infinity, or to a value off the unit
circle, the branch carries no critical curve near the origin.  If |sigma(0)| = 1
and sigma - sigma(0) has order k, a small circle meets the critical set in
2k points.  If sigma is a unit constant, the whole branch is critical.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CommonFactorError,
    InternalConsistencyError,
    PreconditionError,
    TruncationError,
    VariableMismatchError,
)
from .newton import face_function, multiplicity_condition, newton_boundary, primitive, weighted_degree
from .polycore.poly import Polynomial, evaluate_complex, format_polynomial
from .polycore.series import ZERO_REL, ComplexSeries, compose_series, is_exact, series_ratio
from .puiseux import DEFAULT_ORDER, PuiseuxBranch, branches

DEFAULT_TOL = 1e-9
DEFAULT_RADIUS = 1e-3
DEFAULT_SAMPLES = 4096
DOMINANCE = 4

CRITICAL_CONSTANT = "critical_curve_constant_modulus"
CRITICAL_RAYS = "critical_curve_2k_rays"
NO_CRITICAL = "no_critical_curve"
UNDECIDED = "undecided"
INSIDE_VH = "inside_VH"


def _r(v: float, nd: int = 12) -> float:
    out = round(float(v), nd)
    return 0.0 if out == 0 else out


def _cjson(c) -> dict:
    c = complex(c)
    return {"re": _r(c.real), "im": _r(c.imag)}


# ---------------------------------------------------------------------------
# Jacobian and faces


def jacobian(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.variables != g.variables:
        raise VariableMismatchError("f and g must live in the same polynomial ring")
    if f.nvars != 2:
        raise PreconditionError("the Jacobian curve is only handled for two variables")
    x, y = f.variables
    return f.diff(x) * g.diff(y) - f.diff(y) * g.diff(x)


@dataclass(frozen=True)
class FaceClass:
    normal: tuple[int, int]
    dim: int
    kind: str  # "first_type" | "hidden"
    d_J: int
    d_f: int
    d_g: int
    expected: int  # d(P;f) + d(P;g) - (p + q)
    J_P: Polynomial
    J_of_faces: Polynomial

    def to_json(self) -> dict:
        return {
            "P": list(self.normal),
            "dim": self.dim,
            "kind": self.kind,
            "d_J": self.d_J,
            "d_f": self.d_f,
            "d_g": self.d_g,
            "d_f+d_g-(p+q)": self.expected,
            "J_P": format_polynomial(self.J_P),
            "J(f_P,g_P)": format_polynomial(self.J_of_faces),
        }


def _face_normals_2d(J: Polynomial) -> list[tuple[tuple[int, int], int]]:
    """Edge normals of Gamma(J) plus a representative normal for every vertex."""
    data = newton_boundary(J)
    edges = [e.normal for e in data.edges()]
    out = []
    for i, v in enumerate(data.vertices):
        before = edges[i - 1] if i > 0 else (0, 1)
        after = edges[i] if i < len(edges) else (1, 0)
        out.append((primitive((before[0] + after[0], before[1] + after[1])), 0))
        if i < len(edges):
            out.append((edges[i], 1))
    return out


def classify_faces(J: Polynomial, f: Polynomial, g: Polynomial) -> list[FaceClass]:
    """Label each face of Gamma(J) first type or hidden, by two independent tests."""
    if J.is_zero():
        raise PreconditionError("the Jacobian vanishes identically")
    out = []
    for P, dim in _face_normals_2d(J):
        fp = face_function(f, P).polynomial
        gp = face_function(g, P).polynomial
        jp = face_function(J, P).polynomial
        jfg = jacobian(fp, gp)
        dJ, df, dg = weighted_degree(P, J), weighted_degree(P, f), weighted_degree(P, g)
        expected = df + dg - (P[0] + P[1])
        by_identity = jp == jfg
        by_degree = dJ == expected
        if by_identity != by_degree or (not by_identity and not (jfg.is_zero() and dJ > expected)):
            raise InternalConsistencyError(
                f"face P={P}: polynomial identity ({by_identity}) and degree test ({by_degree}) disagree"
            )
        kind = "first_type" if by_identity else "hidden"
        out.append(FaceClass(P, dim, kind, dJ, df, dg, expected, jp, jfg))
    return out


# ---------------------------------------------------------------------------
# sigma along a branch


@dataclass(frozen=True)
class SigmaData:
    j: str
    series: ComplexSeries
    order: int
    leading: object
    exact_constant: bool


def _along(p: Polynomial, b: PuiseuxBranch, N) -> ComplexSeries:
    return compose_series(p, [b.x_series, b.y_series], N, require_leading=False)


def _sigma_for(f, g, fj, gj, b: PuiseuxBranch, N, order: int, j: str) -> SigmaData | None:
    F, G, FJ, GJ = (_along(p, b, N) for p in (f, g, fj, gj))
    if GJ.is_zero():
        return None
    num = FJ * G
    den = GJ * F
    if den.is_zero():
        raise TruncationError("f vanishes along the branch to the available truncation")
    exact = num.truncation == math.inf and den.truncation == math.inf
    if exact:
        cap = (num.order - den.order) + order + 1
        sigma = series_ratio(num, den, cap)
        constant = num.is_zero() or (num - den.scale(sigma.leading)).is_zero()
    else:
        sigma = series_ratio(num, den)
        constant = False
    if sigma.is_zero():
        if num.is_zero():
            raise TruncationError(f"f_{j} vanishes along the branch to the available truncation")
        raise TruncationError("truncation too small to determine the order of sigma")
    return SigmaData(j, sigma, sigma.order, sigma.leading, constant)


def sigma_series(f: Polynomial, g: Polynomial, b: PuiseuxBranch, order: int = DEFAULT_ORDER):
    """sigma for j = x and j = y (None where g_j vanishes along the branch)."""
    x, y = f.variables
    N = b.truncation
    return (
        _sigma_for(f, g, f.diff(x), g.diff(x), b, N, order, "x"),
        _sigma_for(f, g, f.diff(y), g.diff(y), b, N, order, "y"),
    )


def _unit_margin(c) -> tuple[bool, float, bool]:
    """(is unit modulus, margin ||c| - 1|, decided exactly)."""
    if is_exact(c):
        return abs(c) == 1, abs(abs(float(c)) - 1.0), True
    m = abs(complex(c))
    return None, abs(m - 1.0), False


def _contact_order(s: ComplexSeries) -> int | None:
    """ord(s - s(0)) if a nonzero coefficient beyond the constant term is known."""
    for i in range(1, int(s.truncation) - s.order if s.truncation != math.inf else len(s.coeffs)):
        if not s.coefficient_is_zero(s.order + i):
            return i
    return None


# ---------------------------------------------------------------------------
# branch reports


@dataclass
class BranchReport:
    branch: PuiseuxBranch
    in_VH: bool
    non_tangential: bool | None
    face_kind: str | None
    df: int | None
    dg: int | None
    j: str | None = None
    sigma_order: int | None = None
    sigma_leading: object = None
    sigma_leading_modulus: float | None = None
    unit_margin: float | None = None
    k: int | None = None
    verdict: str = UNDECIDED
    reason: str = ""
    decided_by: str = ""
    theorem_check: str = "not-applicable"
    j_invariance: dict | None = None
    sampling: dict | None = None

    @property
    def is_critical(self) -> bool:
        return self.verdict in (CRITICAL_CONSTANT, CRITICAL_RAYS)

    @property
    def rays(self) -> int | None:
        return 2 * self.k if self.verdict == CRITICAL_RAYS else None

    def to_json(self) -> dict:
        out = {
            "branch": self.branch.to_json(),
            "in_VH": self.in_VH,
            "non_tangential": self.non_tangential,
            "face_kind": self.face_kind,
            "df": self.df,
            "dg": self.dg,
            "j": self.j,
            "sigma_order": self.sigma_order,
            "sigma_leading": None if self.sigma_leading is None else _sigma_leading_json(self.sigma_leading),
            "sigma_leading_modulus": None if self.sigma_leading_modulus is None else _r(self.sigma_leading_modulus),
            "unit_margin": None if self.unit_margin is None else _r(self.unit_margin),
            "k": self.k,
            "verdict": self.verdict,
            "decided_by": self.decided_by,
            "theorem_check": self.theorem_check,
        }
        if self.verdict == CRITICAL_RAYS:
            out["rays"] = 2 * self.k
        if self.reason:
            out["reason"] = self.reason
        if self.j_invariance is not None:
            out["j_invariance"] = self.j_invariance
        if self.sampling is not None:
            out["sampling"] = self.sampling
        return out


def _sigma_leading_json(c):
    if is_exact(c):
        return {"exact": str(Fraction(c)), "re": _r(float(c)), "im": 0.0}
    return _cjson(c)


def _value_nonzero(c, scale: float) -> bool:
    if is_exact(c):
        return c != 0
    return abs(c) > ZERO_REL * max(scale, 1.0)


def _eval_face(p: Polynomial, alpha) -> tuple[object, float]:
    """p(1, alpha) and a magnitude scale for the zero test."""
    if is_exact(alpha):
        return sum(c * Fraction(alpha) ** e[1] for e, c in p.terms.items()), 0.0
    a = complex(alpha)
    val = sum(complex(c) * a ** e[1] for e, c in p.terms.items())
    scale = sum(abs(complex(c)) * abs(a) ** e[1] for e, c in p.terms.items())
    return val, scale


def branch_report(
    f: Polynomial,
    g: Polynomial,
    b: PuiseuxBranch,
    tol: float = DEFAULT_TOL,
    order: int = DEFAULT_ORDER,
    faces: list[FaceClass] | None = None,
) -> BranchReport:
    """Critical-curve verdict for one branch of the Jacobian curve."""
    N = b.truncation
    F, G = _along(f, b, N), _along(g, b, N)
    non_tangential = None
    face_kind = df = dg = None
    if b.normal is not None:
        P = b.normal
        fp, gp = face_function(f, P).polynomial, face_function(g, P).polynomial
        fv, fs = _eval_face(fp, b.alpha)
        gv, gs = _eval_face(gp, b.alpha)
        non_tangential = _value_nonzero(fv, fs) and _value_nonzero(gv, gs)
        df, dg = weighted_degree(P, f), weighted_degree(P, g)
        if faces is None:
            faces = classify_faces(jacobian(f, g), f, g)
        match = [fc for fc in faces if fc.normal == P]
        face_kind = match[0].kind if match else None
    rep = BranchReport(b, False, non_tangential, face_kind, df, dg)
    if F.is_zero() or G.is_zero():
        rep.in_VH = True
        rep.verdict = INSIDE_VH
        rep.decided_by = "exact-substitution" if N == math.inf else "substitution-to-truncation"
        rep.reason = "branch lies in V(f)" if F.is_zero() else "branch lies in V(g)"
        return rep

    sx, sy = sigma_series(f, g, b, order)
    chosen = _chosen_sigma(f, g, b, order)
    if sx is not None and sy is not None:
        rep.j_invariance = {
            "order_x": sx.order,
            "order_y": sy.order,
            "modulus_gap": _r(abs(abs(complex(sx.leading)) - abs(complex(sy.leading)))),
        }
    rep.j = chosen.j
    rep.sigma_order = chosen.order
    rep.sigma_leading = chosen.leading
    rep.sigma_leading_modulus = abs(complex(chosen.leading))
    rep.decided_by = "sigma-limit (exact substitution)" if N == math.inf else "sigma-limit"

    if chosen.order != 0:
        rep.verdict = NO_CRITICAL
        rep.reason = "sigma tends to 0" if chosen.order > 0 else "sigma tends to infinity"
    else:
        unit, margin, exact = _unit_margin(chosen.leading)
        rep.unit_margin = margin
        if unit is None:
            unit = margin <= tol
        if not unit:
            rep.verdict = NO_CRITICAL
            rep.reason = f"|sigma(0)| = {rep.sigma_leading_modulus:.12g} is off the unit circle"
        elif chosen.exact_constant:
            rep.verdict = CRITICAL_CONSTANT
            rep.reason = "sigma is exactly a unit constant"
        else:
            k = _contact_order(chosen.series)
            if k is None:
                if N == math.inf:
                    rep.verdict = CRITICAL_CONSTANT
                    rep.reason = "sigma is a unit constant"
                else:
                    rep.verdict = CRITICAL_CONSTANT
                    rep.reason = f"sigma is a unit constant up to t^{chosen.series.truncation}"
            else:
                rep.verdict = CRITICAL_RAYS
                rep.k = k
                rep.reason = f"sigma - sigma(0) has order {k}"

    if non_tangential and face_kind == "first_type":
        theorem_says = df == dg
        if theorem_says != rep.is_critical:
            raise InternalConsistencyError(
                f"branch {b.rooted_at}: sigma verdict {rep.verdict} contradicts d(P;f)=d(P;g) test"
            )
        rep.theorem_check = "agree"
    return rep


# ---------------------------------------------------------------------------
# crossing counts and numeric corroboration


def count_unit_circle_crossings(rho: ComplexSeries, r: float, tol: float = DEFAULT_TOL) -> int:
    """2k crossings of |rho| = 1 on |t| = r, with k = ord(rho - rho(0))."""
    if rho.is_zero() or rho.order != 0:
        raise PreconditionError("rho must have a nonzero constant term")
    if abs(abs(complex(rho.leading)) - 1.0) > tol:
        raise PreconditionError("|rho(0)| is not 1")
    k = _contact_order(rho)
    if k is None:
        raise PreconditionError("rho is constant to its truncation; crossings are not isolated")
    lead = abs(complex(rho.coefficient(k))) * r**k
    hi = rho.order + len(rho.coeffs)
    tail = sum(abs(complex(rho.coefficient(i))) * r**i for i in range(k + 1, hi))
    if lead < DOMINANCE * tail:
        raise PreconditionError(f"radius {r} too large: the t^{k} term does not dominate the tail by {DOMINANCE}")
    return 2 * k


def _branch_point(b: PuiseuxBranch, t: complex) -> tuple[complex, complex]:
    return b.x_series.evaluate(t), b.y_series.evaluate(t)


def prop1_residual(f: Polynomial, g: Polynomial, z: tuple[complex, complex]) -> float:
    """min over unit alpha of |conj(dH) - alpha * dbarH| / |dH| for H = f*conj(g)."""
    x, y = f.variables
    fz, gz = evaluate_complex(f, z), evaluate_complex(g, z)
    fj = [evaluate_complex(f.diff(v), z) for v in (x, y)]
    gj = [evaluate_complex(g.diff(v), z) for v in (x, y)]
    dH = [a * gz.conjugate() for a in fj]
    u = [c.conjugate() for c in dH]
    v = [fz * c.conjugate() for c in gj]
    inner = sum(vj.conjugate() * uj for uj, vj in zip(u, v))
    alpha = inner / abs(inner) if inner != 0 else 1.0
    num = math.sqrt(sum(abs(uj - alpha * vj) ** 2 for uj, vj in zip(u, v)))
    den = math.sqrt(sum(abs(c) ** 2 for c in dH))
    return num / den if den else math.inf


def sample_circle(
    f: Polynomial,
    g: Polynomial,
    b: PuiseuxBranch,
    r: float = DEFAULT_RADIUS,
    samples: int = DEFAULT_SAMPLES,
    tol: float = DEFAULT_TOL,
) -> dict:
    """Count sign changes of |sigma| - 1 on t = r e^{i theta}, refine each by bisection."""
    if samples < 256:
        raise PreconditionError("sample_circle needs at least 256 samples")
    j = _chosen_sigma(f, g, b).j
    g_j, f_j = g.diff(j), f.diff(j)

    def excess(theta: float) -> float:
        t = r * cmath.exp(1j * theta)
        z = _branch_point(b, t)
        num = evaluate_complex(f_j, z) * evaluate_complex(g, z)
        den = evaluate_complex(g_j, z) * evaluate_complex(f, z)
        return abs(num / den) - 1.0

    thetas = [2 * math.pi * i / samples for i in range(samples)]
    vals = [excess(th) for th in thetas]
    if max(abs(v) for v in vals) <= tol:
        return {"radius": r, "samples": samples, "j": j, "crossings": None, "constant_modulus": True, "points": []}
    points = []
    for i in range(samples):
        a, fa = thetas[i], vals[i]
        bth = thetas[i] + 2 * math.pi / samples
        fb = vals[(i + 1) % samples]
        if fa == 0 or fa * fb < 0:
            lo, hi, flo = a, bth, fa
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = excess(mid)
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            theta = 0.5 * (lo + hi)
            z = _branch_point(b, r * cmath.exp(1j * theta))
            points.append(
                {
                    "theta": _r(theta, 9),
                    "x": _cjson(z[0]),
                    "y": _cjson(z[1]),
                    "prop1_residual": float(f"{prop1_residual(f, g, z):.3e}"),
                }
            )
    return {
        "radius": r,
        "samples": samples,
        "j": j,
        "crossings": len(points),
        "constant_modulus": False,
        "points": points,
        "max_prop1_residual": max((p["prop1_residual"] for p in points), default=None),
    }


# ---------------------------------------------------------------------------
# the overall verdict


@dataclass
class FibrationReport:
    multiplicity: object
    jacobian: Polynomial | None = None
    faces: list[FaceClass] = field(default_factory=list)
    branch_reports: list[BranchReport] = field(default_factory=list)
    verdict: str = "inconclusive"
    instrument: str = ""
    conclusion: str = ""

    def to_json(self) -> dict:
        out = {"multiplicity_condition": self.multiplicity.to_json()}
        if self.jacobian is not None:
            out["jacobian"] = format_polynomial(self.jacobian)
            out["faces"] = [fc.to_json() for fc in self.faces]
        out["branches"] = [br.to_json() for br in self.branch_reports]
        out["verdict"] = self.verdict
        out["instrument"] = self.instrument
        out["conclusion"] = self.conclusion
        return out


def _common_factor(f: Polynomial, g: Polynomial) -> bool:
    import sympy

    gens = sympy.symbols(list(f.variables))

    def conv(p: Polynomial):
        return sympy.Poly.from_dict(
            {e: sympy.Rational(c.numerator, c.denominator) for e, c in p.terms.items()}, *gens, domain="QQ"
        )

    return conv(f).gcd(conv(g)).total_degree() > 0


def fibration_verdict(
    f: Polynomial,
    g: Polynomial,
    order: int = DEFAULT_ORDER,
    tol: float = DEFAULT_TOL,
    samples: int = DEFAULT_SAMPLES,
    radius: float = DEFAULT_RADIUS,
) -> FibrationReport:
    if f.variables != g.variables:
        raise VariableMismatchError("f and g must live in the same polynomial ring")
    if f.nvars != 2:
        raise PreconditionError("fibration verdicts are implemented for two variables")
    if _common_factor(f, g):
        raise CommonFactorError("f and g have a common non-constant factor")
    mc = multiplicity_condition(f, g)
    report = FibrationReport(mc)
    if mc.satisfied:
        report.verdict = "guaranteed"
        report.instrument = "newton-multiplicity-condition"
        report.conclusion = "Milnor fibration guaranteed (Main Theorem route)"
        return report
    J = jacobian(f, g)
    if J.is_zero():
        raise PreconditionError("the Jacobian of (f, g) vanishes identically")
    report.jacobian = J
    report.faces = classify_faces(J, f, g)
    for b in branches(J, order):
        try:
            rep = branch_report(f, g, b, tol, order, report.faces)
        except TruncationError as exc:
            rep = BranchReport(b, False, None, None, None, None, verdict=UNDECIDED, reason=str(exc))
        if rep.verdict == CRITICAL_RAYS:
            try:
                rep.sampling = sample_circle(f, g, b, radius, samples, tol)
                rep.sampling["predicted"] = count_unit_circle_crossings(_chosen_sigma(f, g, b, order).series, radius, tol)
            except PreconditionError as exc:
                rep.sampling = {"radius": radius, "error": str(exc)}
        report.branch_reports.append(rep)
    critical = [i for i, br in enumerate(report.branch_reports) if br.is_critical]
    undecided = [i for i, br in enumerate(report.branch_reports) if br.verdict == UNDECIDED]
    if critical:
        first = report.branch_reports[critical[0]]
        report.verdict = "obstructed"
        report.instrument = first.decided_by
        report.conclusion = (
            f"non-constant critical curve found on branch {first.branch.rooted_at} ({first.verdict}); "
            "H has no tubular Milnor fibration"
        )
    elif undecided:
        report.verdict = "inconclusive"
        report.instrument = "sigma-limit"
        report.conclusion = f"{len(undecided)} Jacobian branch(es) could not be decided"
    else:
        report.verdict = "no-obstruction-found"
        report.instrument = "sigma-limit"
        report.conclusion = (
            "no obstruction found among Jacobian branches; per the critical-locus-in-Jacobian methodology "
            "H has a tubular Milnor fibration (not a full converse)"
        )
    return report


def _chosen_sigma(f: Polynomial, g: Polynomial, b: PuiseuxBranch, order: int = DEFAULT_ORDER) -> SigmaData:
    sx, sy = sigma_series(f, g, b, order)
    chosen = sx if sx is not None else sy
    if chosen is None:
        raise TruncationError("both g_x and g_y vanish along the branch; j cannot be chosen")
    return chosen
