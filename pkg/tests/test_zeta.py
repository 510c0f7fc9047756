import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnorlab.errors import (
    DegenerateFaceError,
    MultiplicityConditionViolated,
    NotConvenientError,
    NotHomogeneousError,
    PreconditionError,
)
from milnorlab.newton import face_function, newton_boundary, newton_number_2d, nondegeneracy_2d, weighted_degree
from milnorlab.polycore import Polynomial, parse_polynomial
from milnorlab.zeta import (
    ZetaFactored,
    euler_characteristic_plane_curve,
    milnor_from_zeta,
    zeta_mixed_homog3,
    zeta_mixed_plane,
    zeta_plane,
    zeta_plane_product,
)

XY = ("x", "y")
XYZ = ("z1", "z2", "z3")


def P(text, variables=XY):
    return parse_polynomial(text, variables)


class TestFactored:
    def test_normalization(self):
        z = ZetaFactored.from_factors([(3, 1), (2, 1), (3, -1), (6, -1), (2, 0)])
        assert z.factors == ((2, 1), (6, -1))
        assert z.degree == 2 - 6 and milnor_from_zeta(z) == 5

    def test_json_shape(self):
        doc = zeta_plane(P("x^2+y^3")).to_json()
        assert doc == {
            "factors": [{"d": 2, "e": 1}, {"d": 3, "e": 1}, {"d": 6, "e": -1}],
            "degree": -1,
            "milnor": 2,
            "convention": "corner-positive-edge-negative",
        }

    def test_rejects_bad_degree(self):
        with pytest.raises(ValueError):
            ZetaFactored.from_factors([(0, 1)])


class TestPlane:
    @pytest.mark.parametrize(
        "f, text, mu",
        [
            ("x^2+y^3", "(1-t^2)*(1-t^3)*(1-t^6)^-1", 2),
            ("x^3+y^3", "(1-t^3)^-1", 4),
            ("x^2+y^2", "1", 1),
            ("x^5+x^2*y^2+y^6", "(1-t^5)*(1-t^6)^-1*(1-t^10)^-1", 12),
        ],
    )
    def test_known(self, f, text, mu):
        z = zeta_plane(P(f))
        assert str(z) == text
        assert z.milnor == mu == newton_number_2d(P(f))

    def test_preconditions(self):
        with pytest.raises(NotConvenientError):
            zeta_plane(P("x^2*y+y^3"))
        with pytest.raises(DegenerateFaceError):
            zeta_plane(P("(y-x)^2+x^3+y^3"))

    def test_product(self):
        z = zeta_plane_product(P("x^2+y^2"), P("x^3+y^3"))
        assert z.factors == ((5, -3),) and z.milnor == 16
        w = zeta_plane_product(P("x^2+y^3"), P("x^3+y^2"))
        assert w.milnor == 11 == newton_number_2d(P("(x^2+y^3)*(x^3+y^2)"))

    def test_product_degenerate_pair(self):
        with pytest.raises(DegenerateFaceError):
            zeta_plane_product(P("x^2-y^2"), P("x^2+x*y-2*y^2"))


@st.composite
def brieskorn_like(draw):
    a, b = draw(st.integers(2, 7)), draw(st.integers(2, 7))
    c = draw(st.sampled_from([1, 2, -3]))
    return P(f"x^{a}+({c})*y^{b}")


@settings(max_examples=40, deadline=None)
@given(brieskorn_like(), brieskorn_like())
def test_product_matches_newton_number(f, g):
    h = f * g
    if not nondegeneracy_2d(h)[0]:
        return
    try:
        z = zeta_plane_product(f, g)
    except DegenerateFaceError:
        return
    assert z.milnor == newton_number_2d(h)


@settings(max_examples=40, deadline=None)
@given(brieskorn_like())
def test_empty_germ_reduces_to_plane(f):
    # formally b_x = b_y = 0 and every m_j = 0 in the product/mixed displays
    data = newton_boundary(f)
    factors = [(data.a_x - 0, 1), (data.a_y - 0, 1)]
    factors += [(e.d - 0, -(face_function(f, e.normal).distinct_roots + 0)) for e in data.edges()]
    assert ZetaFactored.from_factors(factors) == zeta_plane(f)


class TestMixed:
    def test_condition_enforced(self):
        with pytest.raises(MultiplicityConditionViolated) as err:
            zeta_mixed_plane(P("x^3+y^2"), P("x^2+y^2"))
        assert str(err.value) == "Newton multiplicity condition violated; witness P=(1,1)"

    def test_quadric_under_quintic(self):
        z = zeta_mixed_plane(P("x^2+y^2"), P("x^5+y^5"))
        assert z.factors == ((3, -5),)

    def test_mirrored(self):
        z = zeta_mixed_plane(P("x^5+x^2*y^2+y^6"), P("x^2+y^2"))
        assert str(z) == "(1-t^2)^-2*(1-t^3)*(1-t^4)^-1*(1-t^6)^-1"

    def test_containment_sign(self):
        a = zeta_mixed_plane(P("x^2+y^2"), P("x^5+y^5"))
        b = zeta_mixed_plane(P("x^5+y^5"), P("x^2+y^2"))
        assert a == b


class TestHomogeneous3:
    def test_quadric_and_line(self):
        z = zeta_mixed_homog3(P("z1^2+z2^2+z3^2", XYZ), P("z1+z2+z3", XYZ))
        assert str(z) == "(1-t)^-1" and not z.warnings

    def test_cubic_and_line(self):
        z = zeta_mixed_homog3(P("z1^3+z2^3+z3^3", XYZ), P("z1+2*z2-z3", XYZ))
        assert z.factors == ((2, -4),)

    def test_exponent_matches_weighted_degrees(self):
        f, g = P("z1^4+z2^4+z3^4", XYZ), P("z1^2-z2*z3", XYZ)
        z = zeta_mixed_homog3(f, g)
        (d, _), = z.factors
        assert d == abs(weighted_degree((1, 1, 1), f) - weighted_degree((1, 1, 1), g))

    def test_euler_characteristics(self):
        assert [euler_characteristic_plane_curve(d) for d in (1, 2, 3, 4)] == [2, 2, 0, -4]

    def test_double_line_warns(self):
        z = zeta_mixed_homog3(P("(z1+z2)^2", XYZ), P("z3", XYZ))
        assert any("C_f" in w for w in z.warnings)

    def test_preconditions(self):
        with pytest.raises(NotHomogeneousError):
            zeta_mixed_homog3(P("z1^2+z2^3", XYZ), P("z1", XYZ))
        with pytest.raises(PreconditionError):
            zeta_mixed_homog3(P("z1^2+z2^2", XYZ), P("z1*z3", XYZ))
        with pytest.raises(PreconditionError):
            zeta_mixed_homog3(Polynomial(XY, {(1, 0): 1}), Polynomial(XY, {(0, 1): 1}))
