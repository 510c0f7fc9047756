"""Newton boundaries, face functions and the Newton multiplicity condition.

The Newton polyhedron is ``conv(supp f) + R^n_+``; its compact faces form the
Newton boundary.  All geometry here is exact integer/rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Sequence

from .errors import (
    InternalConsistencyError,
    NotConvenientError,
    PreconditionError,
    VariableMismatchError,
)
from .polycore.poly import Exponent, Polynomial
from .polycore.roots import gcd_poly, squarefree_part

MAX_HULL_POINTS = 64
MAX_CANDIDATE_SUBSETS = 2_000_000


@dataclass(frozen=True)
class Face:
    normal: tuple[int, ...]
    d: int
    lattice_points: tuple[Exponent, ...]
    dim: int


@dataclass(frozen=True)
class NewtonData:
    nvars: int
    support: tuple[Exponent, ...]
    vertices: tuple[Exponent, ...]
    faces: tuple[Face, ...]
    intercepts: tuple[int | float, ...]
    convenient: bool

    def edges(self) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if f.dim == 1)

    @property
    def a_x(self):
        return self.intercepts[0]

    @property
    def a_y(self):
        return self.intercepts[1]


@dataclass(frozen=True)
class FaceFunction:
    normal: tuple[int, ...]
    d: int
    polynomial: Polynomial
    edge_polynomial: list | None = None
    offsets: tuple[int, int] | None = None
    length: int = 0

    @property
    def distinct_roots(self) -> int:
        if not self.edge_polynomial or len(self.edge_polynomial) < 2:
            return 0
        return squarefree_part(self.edge_polynomial)[1]


@dataclass(frozen=True)
class MultiplicityVerdict:
    satisfied: bool
    witness: tuple[int, ...] | None = None
    direction: str | None = None  # "f_above_g" | "g_above_f"
    checked_by: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        out: dict = {"satisfied": self.satisfied}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.direction is not None:
            out["direction"] = self.direction
        return out


# ---------------------------------------------------------------------------
# small exact helpers


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(math.gcd, (abs(int(c)) for c in v), 0)
    if g == 0:
        return tuple(int(c) for c in v)
    return tuple(int(c) // g for c in v)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _nullvector(rows: Sequence[Sequence[int]], n: int) -> tuple[int, ...] | None:
    """Primitive integer generator of the kernel of ``rows`` if it is one-dimensional."""
    m = [[Fraction(c) for c in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [Fraction(0)] * n
    vec[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        vec[pc] = -m[i][fc]
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in vec), 1)
    return primitive([int(x * den) for x in vec])


def _affine_dim(points: Sequence[Exponent]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[Fraction(a - b) for a, b in zip(p, base)] for p in points[1:]]
    rank = 0
    n = len(base)
    for c in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def minimal_points(support: Sequence[Exponent]) -> list[Exponent]:
    """Support points not dominated coordinatewise by another support point."""
    pts = sorted(set(support))
    out = []
    for p in pts:
        if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# boundary construction


def _intercepts(support: Sequence[Exponent], n: int) -> tuple[int | float, ...]:
    out = []
    for i in range(n):
        on_axis = [e[i] for e in support if all(e[j] == 0 for j in range(n) if j != i)]
        out.append(min(on_axis) if on_axis else math.inf)
    return tuple(out)


def _lower_chain_2d(points: Sequence[Exponent]) -> list[Exponent]:
    """Vertices of the Newton boundary, from the x-axis end towards the y-axis end."""
    pts = sorted(set(points))
    hull: list[Exponent] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    chain = [hull[0]]
    for p in hull[1:]:
        if p[1] < chain[-1][1]:
            chain.append(p)
        else:
            break
    return list(reversed(chain))


def _boundary_2d(support: tuple[Exponent, ...]) -> tuple[tuple[Exponent, ...], tuple[Face, ...]]:
    chain = _lower_chain_2d(support)
    faces = []
    for u, v in zip(chain, chain[1:]):
        normal = primitive((v[1] - u[1], u[0] - v[0]))
        d = dot(normal, u)
        pts = tuple(sorted((e for e in support if dot(normal, e) == d), reverse=True))
        faces.append(Face(normal, d, pts, 1))
    return tuple(chain), tuple(faces)


def _facets(points: Sequence[Exponent], n: int) -> list[tuple[tuple[int, ...], int]]:
    """All facets ``(N, d)`` of ``conv(points) + R^n_+`` with ``N >= 0``."""
    units = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    budget = sum(math.comb(len(points), k) * math.comb(n, n - k) for k in range(1, n + 1))
    if budget > MAX_CANDIDATE_SUBSETS:
        raise PreconditionError(
            f"Newton polyhedron too large for exact hull ({len(points)} points in {n} variables)"
        )
    found: dict[tuple[int, ...], int] = {}
    for k in range(1, n + 1):
        for pts in combinations(points, k):
            diffs = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]
            for dirs in combinations(units, n - k):
                N = _nullvector(diffs + list(dirs), n)
                if N is None:
                    continue
                if all(c <= 0 for c in N):
                    N = tuple(-c for c in N)
                if any(c < 0 for c in N):
                    continue
                d = dot(N, pts[0])
                if N in found or any(dot(N, p) < d for p in points):
                    continue
                found[N] = d
    return sorted(found.items())


def _boundary_nd(support: tuple[Exponent, ...], n: int):
    pts = minimal_points(support)
    if len(pts) > MAX_HULL_POINTS:
        raise PreconditionError(
            f"support has {len(pts)} minimal points; exact hull is limited to {MAX_HULL_POINTS}"
        )
    facets = _facets(pts, n)
    on = {N: frozenset(p for p in pts if dot(N, p) == d) for N, d in facets}
    # close facet point sets under intersection: those are the faces
    faces_pts: set[frozenset] = {s for s in on.values() if s}
    frontier = list(faces_pts)
    while frontier:
        nxt = []
        for a in frontier:
            for b in on.values():
                c = a & b
                if c and c not in faces_pts:
                    faces_pts.add(c)
                    nxt.append(c)
        frontier = nxt
    for p in pts:
        faces_pts.add(frozenset([p]))
    faces = []
    for s in faces_pts:
        containing = [N for N in on if s <= on[N]]
        total = [sum(N[i] for N in containing) for i in range(n)]
        if not containing or any(c <= 0 for c in total):
            continue
        # the face is exactly the common point set of its containing facets
        common = reduce(lambda a, b: a & b, (on[N] for N in containing))
        if common != s:
            continue
        P = primitive(total)
        d = dot(P, next(iter(s)))
        lattice = tuple(sorted((e for e in support if dot(P, e) == d), reverse=True))
        faces.append(Face(P, d, lattice, _affine_dim(sorted(s))))
    faces.sort(key=lambda f: (-f.dim, f.normal))
    vertices = tuple(sorted((f.lattice_points[0] for f in faces if f.dim == 0), reverse=True))
    return vertices, tuple(faces)


def newton_boundary(p: Polynomial) -> NewtonData:
    """Newton boundary of a germ with ``p(0) = 0``."""
    if p.is_zero():
        raise PreconditionError("the zero polynomial has no Newton boundary")
    if p.constant_term() != 0:
        raise PreconditionError("polynomial has a nonzero constant term; not a germ vanishing at 0")
    n = p.nvars
    support = tuple(sorted(p.support()))
    if n == 1:
        v = min(support)
        return NewtonData(1, support, (v,), (), (v[0],), True)
    if n == 2:
        vertices, faces = _boundary_2d(support)
    else:
        vertices, faces = _boundary_nd(support, n)
    intercepts = _intercepts(support, n)
    convenient = all(c != math.inf for c in intercepts)
    return NewtonData(n, support, vertices, faces, intercepts, convenient)


def weighted_degree(P: Sequence[int], p: Polynomial) -> int:
    if p.is_zero():
        raise PreconditionError("weighted degree of the zero polynomial is undefined")
    if len(P) != p.nvars:
        raise VariableMismatchError(f"weight vector has length {len(P)}, polynomial has {p.nvars} variables")
    return min(dot(P, e) for e in p.terms)


def face_function(p: Polynomial, P: Sequence[int]) -> FaceFunction:
    P = tuple(int(c) for c in P)
    d = weighted_degree(P, p)
    on_face = [e for e in p.terms if dot(P, e) == d]
    fp = p.restrict(on_face)
    if p.nvars != 2:
        return FaceFunction(P, d, fp)
    pw, qw = P
    top = max(on_face)  # largest x-exponent
    i0, j0 = top
    i_min = min(e[0] for e in on_face)
    length = (i0 - i_min) // qw
    edge = [p.coefficient((i0 - k * qw, j0 + k * pw)) for k in range(length + 1)]
    return FaceFunction(P, d, fp, edge, (i_min, j0), length)


# ---------------------------------------------------------------------------
# Newton number and non-degeneracy (two variables)


def _require(data: NewtonData, what: str) -> None:
    if data.nvars != 2:
        raise PreconditionError(f"{what} is only defined for two variables")
    if not data.convenient:
        raise NotConvenientError(f"{what} needs a convenient polynomial (intercepts {data.intercepts})")


def twice_area_2d(data: NewtonData) -> int:
    """``2 * Area(Gamma_-(f))`` for a convenient two-variable boundary."""
    _require(data, "area of Gamma_-")
    poly = [(0, 0), (data.a_x, 0)] + list(data.vertices[1:-1]) + [(0, data.a_y)]
    if data.vertices[0] != (data.a_x, 0) or data.vertices[-1] != (0, data.a_y):
        raise InternalConsistencyError("boundary chain does not end on the axes")
    s = 0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        s += x1 * y2 - x2 * y1
    return abs(s)


def newton_number_2d(p: Polynomial) -> int:
    """Kouchnirenko's Newton number ``2V - a_x - a_y + 1``."""
    data = newton_boundary(p)
    return twice_area_2d(data) - data.a_x - data.a_y + 1


def nondegeneracy_2d(p: Polynomial) -> tuple[bool, tuple[int, ...] | None]:
    """Every edge polynomial squarefree; returns the first failing normal otherwise."""
    data = newton_boundary(p)
    if data.nvars != 2:
        raise PreconditionError("nondegeneracy_2d needs two variables")
    for face in data.edges():
        E = face_function(p, face.normal).edge_polynomial
        sqf, count = squarefree_part(E)
        if count != len(E) - 1:
            return False, face.normal
    return True, None


def pair_nondegeneracy_2d(f: Polynomial, g: Polynomial) -> tuple[bool, tuple[int, ...] | None]:
    """Edge polynomials on shared edge normals are coprime."""
    nf = {e.normal for e in newton_boundary(f).edges()}
    ng = {e.normal for e in newton_boundary(g).edges()}
    for P in sorted(nf & ng, key=lambda v: Fraction(v[0], v[1])):
        Ef = face_function(f, P).edge_polynomial
        Eg = face_function(g, P).edge_polynomial
        if len(gcd_poly(Ef, Eg)) > 1:
            return False, P
    return True, None


# ---------------------------------------------------------------------------
# Newton multiplicity condition


def _compact_facet_normals(data: NewtonData) -> list[tuple[int, ...]]:
    return [f.normal for f in data.faces if f.dim == data.nvars - 1]


def _strictly_above(upper: NewtonData, lower: NewtonData, fu: Polynomial, fl: Polynomial) -> bool:
    """Every vertex of ``upper`` lies strictly inside the region over Gamma(lower)."""
    for N in _compact_facet_normals(lower):
        d = weighted_degree(N, fl)
        if any(dot(N, v) <= d for v in upper.vertices):
            return False
    return True


def _witness_scan_2d(f: Polynomial, g: Polynomial, df: NewtonData, dg: NewtonData):
    normals = sorted(
        {e.normal for e in df.edges()} | {e.normal for e in dg.edges()},
        key=lambda v: Fraction(v[0], v[1]),
    )
    delta = [weighted_degree(P, f) - weighted_degree(P, g) for P in normals]
    for i, (P, dl) in enumerate(zip(normals, delta)):
        if dl == 0:
            return P
        if i + 1 < len(normals) and dl * delta[i + 1] < 0:
            Q, dq = normals[i + 1], delta[i + 1]
            # Delta is linear on the cone spanned by two consecutive breakpoints
            return primitive([abs(dq) * a + abs(dl) * b for a, b in zip(P, Q)])
    return None


def _vertex_cone_rays(u: Exponent, verts: Sequence[Exponent], w: Exponent, wverts: Sequence[Exponent], n: int):
    """Extreme rays of N_u(f) cap N_w(g) inside the closed positive orthant."""
    ineq = [tuple(a - b for a, b in zip(v, u)) for v in verts if v != u]
    ineq += [tuple(a - b for a, b in zip(v, w)) for v in wverts if v != w]
    ineq += [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    ineq = sorted(set(ineq))
    rays = set()
    for tight in combinations(ineq, n - 1):
        r = _nullvector(list(tight), n)
        if r is None:
            continue
        for cand in (r, tuple(-c for c in r)):
            if all(dot(cand, h) >= 0 for h in ineq):
                rays.add(cand)
    return sorted(rays)


def _witness_cones(f: Polynomial, g: Polynomial, df: NewtonData, dg: NewtonData):
    """Witness search on pairs of vertex normal cones, where d_f - d_g is linear."""
    n = df.nvars
    found = []
    for u in df.vertices:
        for w in dg.vertices:
            rays = _vertex_cone_rays(u, df.vertices, w, dg.vertices, n)
            if not rays:
                continue
            h = tuple(a - b for a, b in zip(u, w))
            pos = [r for r in rays if dot(r, h) > 0]
            neg = [r for r in rays if dot(r, h) < 0]
            zero = [r for r in rays if dot(r, h) == 0]
            s0 = [sum(r[i] for r in zero) for i in range(n)]
            if pos and neg:
                sp = [sum(r[i] for r in pos) for i in range(n)]
                sn = [sum(r[i] for r in neg) for i in range(n)]
                A, B = dot(sp, h), -dot(sn, h)
                cand = [B * a + A * b + c for a, b, c in zip(sp, sn, s0)]
            elif zero and all(c > 0 for c in s0):
                cand = s0
            else:
                continue
            if all(c > 0 for c in cand):
                found.append(primitive(cand))
    if not found:
        return None
    return min(found, key=lambda v: (sum(v), v))


def multiplicity_condition(f: Polynomial, g: Polynomial) -> MultiplicityVerdict:
    """Decide Gamma(f) cap Gamma(g) = empty; on failure return a witness P with d(P;f) = d(P;g)."""
    if f.variables != g.variables:
        raise VariableMismatchError("f and g must live in the same polynomial ring")
    df, dg = newton_boundary(f), newton_boundary(g)
    for name, data in (("f", df), ("g", dg)):
        if not data.convenient:
            raise NotConvenientError(f"{name} is not convenient (intercepts {data.intercepts})")
    if _strictly_above(df, dg, f, g):
        satisfied, direction = True, "f_above_g"
    elif _strictly_above(dg, df, g, f):
        satisfied, direction = True, "g_above_f"
    else:
        satisfied, direction = False, None

    cone_witness = _witness_cones(f, g, df, dg)
    if df.nvars == 2:
        witness = _witness_scan_2d(f, g, df, dg)
        if (witness is None) != (cone_witness is None):
            raise InternalConsistencyError("edge-normal scan and normal-cone search disagree on a witness")
        routes = ("vertex-above-test", "edge-normal-scan", "normal-cone-search")
    else:
        witness = cone_witness
        routes = ("vertex-above-test", "normal-cone-search")
    if satisfied == (witness is not None):
        raise InternalConsistencyError("vertex test and witness search disagree on the multiplicity condition")
    if witness is not None and weighted_degree(witness, f) != weighted_degree(witness, g):
        raise InternalConsistencyError(f"witness {witness} does not balance the weighted degrees")
    return MultiplicityVerdict(satisfied, witness, direction, routes)
