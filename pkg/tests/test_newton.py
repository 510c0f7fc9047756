import math
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from milnorlab.errors import NotConvenientError
from milnorlab.newton import (
    face_function,
    multiplicity_condition,
    newton_boundary,
    newton_number_2d,
    nondegeneracy_2d,
    pair_nondegeneracy_2d,
    twice_area_2d,
    weighted_degree,
)
from milnorlab.polycore import Polynomial, parse_polynomial

XY = ("x", "y")


def P(text, variables=XY):
    return parse_polynomial(text, variables)


@st.composite
def convenient(draw, max_deg=10):
    a = draw(st.integers(1, max_deg))
    b = draw(st.integers(1, max_deg))
    inner = draw(st.lists(st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)), max_size=5))
    terms = {(a, 0): 1, (0, b): draw(st.sampled_from([-3, -1, 1, 2]))}
    for e in inner:
        if sum(e) >= 1:
            terms[e] = draw(st.sampled_from([-2, -1, 1, 3]))
    return Polynomial(XY, terms)


class TestBoundary:
    def test_two_edge_polygon(self):
        data = newton_boundary(P("x^5+x^2*y^2+y^6"))
        assert [(e.normal, e.d) for e in data.edges()] == [((2, 3), 10), ((2, 1), 6)]
        assert data.vertices[0] == (5, 0) and data.vertices[-1] == (0, 6)
        assert data.intercepts == (5, 6) and data.convenient
        assert newton_number_2d(P("x^5+x^2*y^2+y^6")) == 12

    def test_not_convenient(self):
        data = newton_boundary(P("x^2*y+y^3"))
        assert data.intercepts[0] == math.inf and not data.convenient
        with pytest.raises(NotConvenientError):
            newton_number_2d(P("x^2*y+y^3"))

    def test_edge_polynomial_orientation(self):
        ff = face_function(P("x*y^3*(y-x)^2+x^9"), (1, 1))
        assert ff.offsets == (1, 3)
        assert ff.edge_polynomial[0] != 0
        assert ff.distinct_roots == 1 and ff.length == 2

    def test_three_variables(self):
        data = newton_boundary(P("x^2+y^3+z^4", ("x", "y", "z")))
        top = [f for f in data.faces if f.dim == 2]
        assert [(f.normal, f.d) for f in top] == [((6, 4, 3), 12)]
        assert len([f for f in data.faces if f.dim == 1]) == 3
        assert data.intercepts == (2, 3, 4)

    def test_brieskorn_milnor(self):
        for a, b in product(range(2, 7), repeat=2):
            assert newton_number_2d(P(f"x^{a}+y^{b}")) == (a - 1) * (b - 1)

    @given(convenient())
    def test_face_invariants(self, p):
        data = newton_boundary(p)
        for face in data.faces:
            assert all(c > 0 for c in face.normal) and math.gcd(*face.normal) == 1
            values = {e: sum(a * b for a, b in zip(face.normal, e)) for e in p.support()}
            assert min(values.values()) == face.d == weighted_degree(face.normal, p)
            assert sorted(e for e, v in values.items() if v == face.d) == sorted(face.lattice_points)

    @given(convenient())
    def test_euler_identity(self, p):
        x, y = XY
        for face in newton_boundary(p).faces:
            fp = face_function(p, face.normal).polynomial
            a, b = face.normal
            lhs = fp.diff(x) * P("x") * a + fp.diff(y) * P("y") * b
            assert lhs == fp * face.d

    @settings(deadline=None)
    @given(convenient())
    def test_area_oracle(self, p):
        assert twice_area_2d(newton_boundary(p)) == oracles.twice_area_below_boundary(p.support())


class TestNondegeneracy:
    def test_degenerate_face(self):
        assert nondegeneracy_2d(P("(y-x)^2+x^3+y^3")) == (False, (1, 1))
        assert nondegeneracy_2d(P("x^2+y^3"))[0]

    def test_pair(self):
        ok, bad = pair_nondegeneracy_2d(P("x^2-y^2"), P("x^2+x*y-2*y^2"))
        assert not ok and bad == (1, 1)
        assert pair_nondegeneracy_2d(P("x^2+y^2"), P("x^2-y^2"))[0]


def brute_force_equal_degree(f, g, limit=24):
    for p, q in product(range(1, limit), repeat=2):
        if math.gcd(p, q) == 1 and weighted_degree((p, q), f) == weighted_degree((p, q), g):
            return (p, q)
    return None


class TestMultiplicityCondition:
    @pytest.mark.parametrize(
        "f, g, witness",
        [
            ("x^3+y^2", "x^2+y^2", (1, 1)),
            ("x^3-y^2", "x^2-y^3", (1, 1)),
            ("x*y^2+x^4+y^4", "x^2*y+y^4+x^4", (1, 2)),
        ],
    )
    def test_known_pairs_violate(self, f, g, witness):
        v = multiplicity_condition(P(f), P(g))
        assert not v.satisfied and v.witness == witness

    def test_quintic_pair_violates(self):
        f, g = P("x^5+x^2*y^2+y^6"), P("x^6+x^2*y^2+y^5")
        v = multiplicity_condition(f, g)
        assert not v.satisfied
        assert weighted_degree(v.witness, f) == weighted_degree(v.witness, g)

    def test_satisfied_direction(self):
        v = multiplicity_condition(P("x^2+y^2"), P("x^5+y^5"))
        assert v.satisfied and v.witness is None and v.direction == "g_above_f"
        w = multiplicity_condition(P("x^5+y^5"), P("x^2+y^2"))
        assert w.satisfied and w.direction == "f_above_g"

    @settings(max_examples=150, deadline=None)
    @given(convenient(8), convenient(8))
    def test_against_weight_scan(self, f, g):
        v = multiplicity_condition(f, g)
        u = multiplicity_condition(g, f)
        assert v.satisfied == u.satisfied
        found = brute_force_equal_degree(f, g)
        if v.satisfied:
            assert found is None
            assert {v.direction, u.direction} == {"f_above_g", "g_above_f"}
        else:
            assert weighted_degree(v.witness, f) == weighted_degree(v.witness, g)
            assert all(c > 0 for c in v.witness) and math.gcd(*v.witness) == 1

    def test_three_variables(self):
        V = ("x", "y", "z")
        v = multiplicity_condition(P("x^2+y^2+z^2", V), P("x^3+y^3+z^3", V))
        assert v.satisfied
        f, g = P("x^2+y^4+z^4", V), P("x^4+y^2+z^4", V)
        w = multiplicity_condition(f, g)
        assert not w.satisfied
        assert weighted_degree(w.witness, f) == weighted_degree(w.witness, g)
