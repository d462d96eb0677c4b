import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowerable.errors import GermValidationError
from lowerable.germ import FieldAlongGerm, SourceField, TargetField, tf_apply, validate, wf_apply
from lowerable.poly import Poly, compose, parse_poly


def P(text, n=1):
    return parse_poly(text, n)


def X(text, p=2):
    return parse_poly(text, p, "X")


class TestValidate:
    def test_cusp(self, cusp):
        assert (cusp.n, cusp.p, cusp.r) == (1, 2, 1)
        assert cusp.to_strings() == [["x1^2", "x1^3"]]

    def test_nonzero_constant(self):
        with pytest.raises(GermValidationError) as exc:
            validate({"n": 1, "p": 1, "branches": [["x1+1"]]})
        assert exc.value.violations == ["nonzero constant term in branch 1 component 1"]

    def test_arity(self):
        with pytest.raises(GermValidationError) as exc:
            validate({"n": 2, "p": 2, "branches": [["x1", "x2"], ["x1"]]})
        assert exc.value.violations == ["branch 2 has 1 components, expected 2"]

    def test_collects_all_violations(self):
        with pytest.raises(GermValidationError) as exc:
            validate({"n": 1, "p": 2, "branches": [["1 + x1", "x2"], ["x1"]]})
        assert len(exc.value.violations) == 3

    def test_rejects_empty(self):
        with pytest.raises(GermValidationError):
            validate({"n": 1, "p": 1, "branches": []})


def source(f, *slots):
    return SourceField([tuple(P(s, f.n) for s in slot) for slot in slots])


class TestTf:
    def test_euler_field_on_cusp(self, cusp):
        assert tf_apply(cusp, source(cusp, ["x1"])) == FieldAlongGerm([(P("2 x1^2"), P("3 x1^3"))])

    def test_zero(self, cusp):
        assert tf_apply(cusp, source(cusp, ["0"])).is_zero()

    def test_identity(self, identity):
        g = "x1^2 - 3 x1"
        assert tf_apply(identity, source(identity, [g])) == FieldAlongGerm([(P(g),)])

    def test_arity(self, cusp):
        with pytest.raises(ValueError):
            tf_apply(cusp, source(cusp, ["x1"], ["x1"]))


class TestWf:
    def test_matches_euler_field(self, cusp):
        eta = TargetField([X("2 X1"), X("3 X2")])
        assert wf_apply(cusp, eta) == tf_apply(cusp, source(cusp, ["x1"]))

    def test_constant_field_in_every_branch(self, double_line):
        eta = TargetField([Poly.one(2), Poly.zero(2)])
        out = wf_apply(double_line, eta)
        assert out.slots == ((P("1"), P("0")), (P("1"), P("0")))

    def test_double_line_substitution(self, double_line):
        eta = TargetField([X("X2"), Poly.zero(2)])
        assert wf_apply(double_line, eta).slots == ((P("0"), P("0")), (P("x1"), P("0")))

    def test_branch_coupling(self, double_line):
        eta = TargetField([X("X1 + X2^2"), X("X1 X2 - X2")])
        before = wf_apply(double_line, eta)
        g = validate({"n": 1, "p": 2, "branches": [["x1", "0"], ["x1^2", "x1^3"]]})
        after = wf_apply(g, eta)
        assert after.slots[0] == before.slots[0]
        assert after.slots[1] != before.slots[1]


small = st.dictionaries(st.tuples(st.integers(0, 3)), st.integers(-3, 3), max_size=3)
small2 = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3), max_size=3)


@settings(max_examples=40)
@given(small2, small)
def test_tf_linear_over_pullback(psi_terms, xi_terms):
    f = validate({"n": 1, "p": 2, "branches": [["x1^2 + x1^3", "x1^3"]]})
    psi = Poly(2, psi_terms)
    xi = SourceField([(Poly(1, xi_terms),)])
    g = compose(psi, f.branches[0].components)
    lhs = tf_apply(f, xi.mul_slotwise([g]))
    assert lhs == tf_apply(f, xi).mul_slotwise([g])
