import math
from fractions import Fraction as F

import pytest

from aimriccati.errors import (
    ExprSyntaxError,
    PoleError,
    UnboundParameterError,
    UnknownSymbolError,
)
from aimriccati.symcore import (
    Add,
    ExpFn,
    Mul,
    Pow,
    Quot,
    Rat,
    Sym,
    differentiate,
    equal,
    evaluate_numeric,
    expr_str,
    normalize,
    parse_expr,
)

X = Sym("x")


class TestParser:
    def test_literal_product(self):
        e = parse_expr("3*x^3", [])
        assert equal(e, Mul((Rat(F(3)), Pow(X, 3))))

    def test_rational_number_division(self):
        assert normalize(parse_expr("3/4", [])).num.as_constant() == F(3, 4)

    def test_quotient_tree(self):
        e = parse_expr("-(-2*m*x + 1)/(a*x^3 + b*x^2 + c*x)", ["a", "b", "c", "m"])
        nf = normalize(e)
        assert str(nf) == "(2*x*m - 1)/(x^3*a + x^2*b + x*c)"

    def test_exp_polynomial_argument(self):
        e = parse_expr("exp((3/4)*x^4 + x)", [])
        assert isinstance(e, ExpFn)
        nf = normalize(e)
        assert str(nf.exp_arg) == "3/4*x^4 + x"

    def test_unary_minus_binds_power(self):
        # -x^2 reads -(x^2)
        assert equal(parse_expr("-x^2", []), -(X ** 2))

    def test_negative_exponent(self):
        assert equal(parse_expr("x^-2", []), Quot(Rat(F(1)), Pow(X, 2)))

    def test_whitespace_insignificant(self):
        assert equal(parse_expr(" 2 * x + 1 ", []), parse_expr("2*x+1", []))

    def test_syntax_error_carries_position(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("2*x +", [])
        assert info.value.position == 5

    def test_unknown_symbol_named(self):
        with pytest.raises(UnknownSymbolError) as info:
            parse_expr("2*q", [])
        assert info.value.name == "q"

    def test_x_reserved(self):
        with pytest.raises(ValueError):
            parse_expr("x", ["x"])

    def test_unbalanced_parens(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("(x + 1", [])

    def test_caret_requires_integer(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x^(2)", [])


class TestPrintRoundTrip:
    CASES = [
        "x^2 - 1",
        "(x + 1)/(x - 1)",
        "exp(x^2)*exp(-x^2)",
        "-(2*m*x - 1)/(a*x^3 + b*x^2 + c*x)",
        "3/4*x^4 + x",
        "1/x + 2*x",
    ]

    @pytest.mark.parametrize("text", CASES)
    def test_roundtrip(self, text):
        params = ["a", "b", "c", "m"]
        e = parse_expr(text, params)
        again = parse_expr(expr_str(e), params)
        assert normalize(again) == normalize(e)


class TestDifferentiate:
    def test_power_rule(self):
        assert equal(differentiate(X ** 2), 2 * X)

    def test_chain_rule_through_exp(self):
        e = parse_expr("exp((3/4)*x^4 + x)", [])
        expected = parse_expr("(3*x^3 + 1)*exp((3/4)*x^4 + x)", [])
        assert equal(differentiate(e), expected)

    def test_constant_slope(self):
        assert equal(differentiate(parse_expr("2*x", [])), Rat(F(2)))

    def test_quotient_rule(self):
        e = parse_expr("x/(x + 1)", [])
        assert equal(differentiate(e), parse_expr("1/(x+1)^2", []))


class TestEvaluateNumeric:
    def test_simple_pole_free(self):
        e = parse_expr("-4*x/(1 - 2*x^2)", [])
        assert evaluate_numeric(e, 0.0) == 0.0

    def test_parameter_arithmetic(self):
        e = parse_expr("2*(m + a)*x + 4*c*m + 2*b - 1", ["a", "b", "c", "m"])
        v = evaluate_numeric(e, 1.0, {"a": 1.0, "b": 0.0, "c": 0.0, "m": 1.0})
        assert v == 3.0

    def test_pole_error(self):
        with pytest.raises(PoleError):
            evaluate_numeric(parse_expr("1/x", []), 0.0)

    def test_unbound_parameter(self):
        with pytest.raises(UnboundParameterError):
            evaluate_numeric(parse_expr("a*x", ["a"]), 1.0)

    def test_high_precision_crosscheck(self):
        # closed form with its exponential factor, against a 50-digit recomputation
        import mpmath

        e = parse_expr(
            "(9*x^8 - 30*x^4 + 5)/(x*exp((3/4)*x^4 + x)*(x^8 - 6*x^4 + 5))", []
        )
        got = evaluate_numeric(e, 2.0)
        with mpmath.workdps(50):
            x = mpmath.mpf(2)
            expected = (9 * x ** 8 - 30 * x ** 4 + 5) / (
                x * mpmath.e ** (mpmath.mpf(3) / 4 * x ** 4 + x) * (x ** 8 - 6 * x ** 4 + 5)
            )
            rel = abs(got - float(expected)) / abs(float(expected))
        assert rel < 1e-13

    def test_exp_evaluation(self):
        e = parse_expr("exp(x^2)", [])
        assert math.isclose(evaluate_numeric(e, 1.5), math.exp(2.25))
