import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnorlab.critloc import (
    CRITICAL_CONSTANT,
    CRITICAL_RAYS,
    INSIDE_VH,
    NO_CRITICAL,
    branch_report,
    classify_faces,
    count_unit_circle_crossings,
    fibration_verdict,
    jacobian,
    prop1_residual,
    sample_circle,
    sigma_series,
)
from milnorlab.errors import CommonFactorError, PreconditionError
from milnorlab.newton import weighted_degree
from milnorlab.polycore import ComplexSeries, Polynomial, parse_polynomial
from milnorlab.puiseux import branches

XY = ("x", "y")


def P(text):
    return parse_polynomial(text, XY)


small = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), st.integers(-4, 4).filter(bool), max_size=5
).map(lambda d: Polynomial(XY, d))


@given(small, small)
def test_jacobian_antisymmetric(f, g):
    assert jacobian(f, g) == -jacobian(g, f)
    assert jacobian(f, f).is_zero()


class TestFaces:
    def test_quintic_hidden(self):
        f, g = P("x^5+x^2*y^2+y^6"), P("x^6+x^2*y^2+y^5")
        kinds = {(fc.normal, fc.dim): fc.kind for fc in classify_faces(jacobian(f, g), f, g)}
        assert kinds == {((1, 2), 0): "first_type", ((1, 1), 1): "hidden", ((2, 1), 0): "first_type"}

    def test_hidden_has_strict_degree(self):
        f, g = P("x^2+x*y+y^2"), P("x^2-x*y+y^2")
        for fc in classify_faces(jacobian(f, g), f, g):
            if fc.kind == "hidden":
                assert fc.J_of_faces.is_zero() and fc.d_J > fc.expected
            else:
                assert fc.J_P == fc.J_of_faces and fc.d_J == fc.expected

    @settings(max_examples=60, deadline=None)
    @given(small, small)
    def test_double_characterization(self, f, g):
        J = jacobian(f, g)
        if J.is_zero() or J.constant_term() != 0 or f.is_zero() or g.is_zero():
            return
        for fc in classify_faces(J, f, g):
            assert (fc.J_P == fc.J_of_faces) == (fc.d_J == fc.expected) == (fc.kind == "first_type")


class TestSigma:
    def test_axis_sigma_is_exactly_one(self):
        f, g = P("x^3+y^2"), P("x^2+y^2")
        (b,) = [b for b in branches(jacobian(f, g)) if b.axis == "x"]
        br = branch_report(f, g, b)
        assert br.j == "y" and br.sigma_leading == 1
        assert br.verdict == CRITICAL_CONSTANT

    def test_off_circle_values(self):
        f, g = P("x^3-y^2"), P("x^2-y^3")
        leads = sorted(branch_report(f, g, b).sigma_leading for b in branches(jacobian(f, g)))
        assert leads == [Fraction(2, 3), Fraction(3, 2)]

    def test_quintic_c1_sigma(self):
        f, g = P("x^5+x^2*y^2+y^6"), P("x^6+x^2*y^2+y^5")
        b = next(b for b in branches(jacobian(f, g)) if b.alpha == -1)
        sx, sy = sigma_series(f, g, b)
        for s in (sx, sy):
            assert s.series.coefficient(0) == 1
            assert s.series.coefficient(1) == Fraction(1, 2)
        br = branch_report(f, g, b)
        assert br.verdict == CRITICAL_RAYS and br.k == 1 and br.rays == 2
        assert br.face_kind == "hidden" and br.theorem_check == "not-applicable"

    def test_inside_vh(self):
        f, g = P("y-x^2"), P("x^2+y^2")
        b = next(b for b in branches(jacobian(f, g) * f) if b.alpha == 1 and b.normal == (1, 2))
        assert branch_report(f, g, b).verdict == INSIDE_VH

    def test_theorem_agreement_homogeneous(self):
        f, g = P("x^2+x*y+y^2"), P("x^2-x*y+y^2")
        for b in branches(jacobian(f, g)):
            br = branch_report(f, g, b)
            assert br.non_tangential and br.face_kind == "first_type"
            assert br.theorem_check == "agree"
            assert (weighted_degree(b.normal, f) == weighted_degree(b.normal, g)) == br.is_critical


class TestCrossings:
    def test_symbolic_count(self):
        rho = ComplexSeries.from_terms({0: 1, 3: 0.5j, 4: 1})
        assert count_unit_circle_crossings(rho, 1e-2) == 6

    def test_needs_unit_modulus(self):
        with pytest.raises(PreconditionError):
            count_unit_circle_crossings(ComplexSeries.from_terms({0: 2, 1: 1}), 1e-2)

    def test_dominance(self):
        with pytest.raises(PreconditionError):
            count_unit_circle_crossings(ComplexSeries.from_terms({0: 1, 1: 1e-6, 2: 1}), 0.5)

    def test_sampled_matches_symbolic(self):
        f, g = P("x^5+x^2*y^2+y^6"), P("x^6+x^2*y^2+y^5")
        for b in branches(jacobian(f, g)):
            if b.normal != (1, 1):
                continue
            res = sample_circle(f, g, b, r=1e-3, samples=512)
            sigma = next(s for s in sigma_series(f, g, b) if s is not None)
            assert res["crossings"] == count_unit_circle_crossings(sigma.series, 1e-3) == 2
            assert res["max_prop1_residual"] < 1e-6

    def test_prop1_residual_off_critical(self):
        f, g = P("x^3+y^2"), P("x^2+y^2")
        assert prop1_residual(f, g, (0.01 + 0.002j, 0.0)) > 1e-3
        assert prop1_residual(f, g, (0.0, 0.01 * cmath.exp(0.3j))) < 1e-12

    def test_sample_count_guard(self):
        f, g = P("x^3+y^2"), P("x^2+y^2")
        b = branches(jacobian(f, g))[0]
        with pytest.raises(PreconditionError):
            sample_circle(f, g, b, samples=100)


class TestVerdict:
    def test_guaranteed(self):
        rep = fibration_verdict(P("x^2+y^2"), P("x^5+y^5"))
        assert rep.verdict == "guaranteed" and rep.jacobian is None

    def test_common_factor(self):
        with pytest.raises(CommonFactorError):
            fibration_verdict(P("x*(x+y^2)"), P("x*(y+x^3)"))

    def test_report_json_keys(self):
        rep = fibration_verdict(P("x^3-y^2"), P("x^2-y^3")).to_json()
        assert list(rep) == [
            "multiplicity_condition",
            "jacobian",
            "faces",
            "branches",
            "verdict",
            "instrument",
            "conclusion",
        ]
        assert rep["multiplicity_condition"] == {"satisfied": False, "witness": [1, 1]}
        assert rep["conclusion"].startswith("no obstruction found among Jacobian branches")
        assert rep["conclusion"].endswith("(not a full converse)")

    def test_branches_clear_when_off_circle(self):
        rep = fibration_verdict(P("x^3-y^2"), P("x^2-y^3"))
        assert [br.verdict for br in rep.branch_reports] == [NO_CRITICAL, NO_CRITICAL]
        assert all(math.isclose(br.unit_margin, abs(br.sigma_leading_modulus - 1)) for br in rep.branch_reports)
