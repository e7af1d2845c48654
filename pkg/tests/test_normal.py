from fractions import Fraction as F

import pytest

from aimriccati.errors import ExprDivisionByZero, UnsupportedFormError
from aimriccati.symcore import (
    Constraint,
    NormalForm,
    eliminate,
    is_zero,
    is_zero_mod,
    normalize,
    parse_expr,
    zero_constraints,
)
from aimriccati.symcore.poly import Polynomial


class TestNormalize:
    def test_common_factor_cancels(self, nf):
        got = nf("(x^2 - 1)/(x - 1)")
        assert str(got) == "x + 1"
        assert got.den.is_constant()

    def test_exp_arguments_add(self, nf):
        assert str(nf("exp(x^2)*exp(-x^2)")) == "1"

    def test_log_derivative_of_exp(self, pe):
        from aimriccati.symcore import Quot, differentiate

        q = pe("exp((3/4)*x^4 + x)")
        lam0 = normalize(Quot(differentiate(q), q) - pe("1"))
        assert str(lam0) == "3*x^3"

    def test_non_polynomial_exp_rejected(self, pe):
        with pytest.raises(UnsupportedFormError):
            normalize(pe("exp(1/x)"))

    def test_division_by_zero_detected(self, pe):
        with pytest.raises(ExprDivisionByZero):
            normalize(pe("1/(x^2 - x*x)"))

    def test_mixed_exponentials_unrepresentable(self, pe):
        with pytest.raises(UnsupportedFormError):
            normalize(pe("exp(x) + 1"))

    def test_denominator_sign_canonical(self, nf):
        # leading coefficient of the denominator is positive
        got = nf("1/(1 - x)")
        assert str(got.den) == "x - 1"
        assert got.num.as_constant() == F(-1)

    def test_zero_has_unique_form(self, nf):
        z = nf("exp(x^2) - exp(x^2)")
        assert z == NormalForm.from_const(0)


class TestIsZero:
    def test_difference_of_factored_forms(self, nf):
        assert is_zero(nf("(x + 1)*(x - 1) - x^2 + 1"))

    def test_nonzero(self, nf):
        assert not is_zero(nf("(x + 1)*(x - 1) - x^2"))

    def test_zero_times_exp(self, nf):
        assert is_zero(nf("(x - x)*exp(x^2)"))


class TestZeroConstraints:
    def test_no_xfree_factor(self, nf):
        assert zero_constraints(nf("x^2 + a")) == []

    def test_single_factor(self, nf):
        got = zero_constraints(nf("(a*c - b - n)/x^4"))
        assert [str(c) for c in got] == ["a*c - b - n"]

    def test_monomial_content_excluded(self, nf):
        # a*c annihilates the seed outright; only the genuine branch is kept
        got = zero_constraints(nf("a*c*(a*c - b - n)"))
        assert [str(c) for c in got] == ["a*c - b - n"]

    def test_product_splits(self, nf):
        got = zero_constraints(nf("(a*c - b - n)*(a*c - 2*b - 2*n + 2)"))
        assert {str(c) for c in got} == {"a*c - b - n", "a*c - 2*b - 2*n + 2"}

    def test_x_dependent_cofactor_ignored(self, nf):
        got = zero_constraints(nf("(a + 6)*(x^2 + a)"))
        assert [str(c) for c in got] == ["a + 6"]

    def test_rejects_zero_input(self, nf):
        with pytest.raises(ValueError):
            zero_constraints(nf("0"))


class TestConstraintReduction:
    def test_is_zero_mod_linear(self, nf):
        c = Constraint.make(nf("a*c - b - n").num)
        residual = nf("a*c*(a*c - b - n)/x^4")
        assert is_zero_mod(residual, [c])
        assert not is_zero_mod(nf("a*c/x^4"), [c])

    def test_eliminate_substitutes(self, nf):
        c = Constraint.make(nf("a*c - b - n").num)
        y = nf("a*c/(x*(n + b))")
        reduced = eliminate(y, c)
        assert str(reduced) == "(1)/(x)"

    def test_eliminate_with_pivot(self, nf):
        c = Constraint.make(nf("a*c - b - n").num)
        y = nf("c/((n + b)*x^3)")
        reduced = eliminate(y, c, pivot="c")
        assert reduced == nf("1/(a*x^3)")


class TestArithmetic:
    def test_add_reduces(self, nf):
        got = nf("1/(x - 1)") + nf("1/(x + 1)")
        assert got == nf("2*x/(x^2 - 1)")

    def test_pow_negative(self, nf):
        got = nf("(x + 1)/x") ** -2
        assert got == nf("x^2/(x + 1)^2")

    def test_diff_with_exp(self, nf):
        f = nf("x*exp(x^2)")
        assert f.diff() == nf("(2*x^2 + 1)*exp(x^2)")

    def test_bind(self, nf):
        f = nf("(a*x + b)/(a - b)")
        assert f.bind({"a": F(2), "b": F(1)}) == nf("2*x + 1")

    def test_to_expr_round_trip(self, nf):
        f = nf("(9*x^8 - 30*x^4 + 5)/(x^9 - 6*x^5 + 5*x)*exp(-3/4*x^4 - x)")
        assert normalize(f.to_expr()) == f

    def test_str_reparses(self, nf):
        f = nf("(2*x*m - 1)/(x^3*a + x^2*b + x*c)*exp(x^2 + 2*x)")
        assert normalize(parse_expr(str(f), ["a", "b", "c", "m"])) == f
