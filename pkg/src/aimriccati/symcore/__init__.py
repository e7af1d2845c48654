"""Exact symbolic core: expression trees, sparse polynomials, normal forms."""

from .expr import (
    Add,
    ExpFn,
    Expr,
    Mul,
    Pow,
    Quot,
    Rat,
    Sym,
    X,
    as_expr,
    differentiate,
    evaluate_numeric,
    expr_str,
    free_symbols,
    lit,
    substitute,
    sym,
)
from .normal import (
    Constraint,
    NormalForm,
    eliminate,
    equal,
    is_zero,
    is_zero_mod,
    normalize,
    poly_to_expr,
    reduce_poly_mod,
    zero_constraints,
)
from .parser import parse_expr
from .poly import Polynomial, exact_div, gcd, poly_str, prem

__all__ = [
    "Add",
    "Constraint",
    "ExpFn",
    "Expr",
    "Mul",
    "NormalForm",
    "Polynomial",
    "Pow",
    "Quot",
    "Rat",
    "Sym",
    "X",
    "as_expr",
    "differentiate",
    "eliminate",
    "equal",
    "evaluate_numeric",
    "exact_div",
    "expr_str",
    "free_symbols",
    "gcd",
    "is_zero",
    "is_zero_mod",
    "lit",
    "normalize",
    "parse_expr",
    "poly_str",
    "poly_to_expr",
    "prem",
    "reduce_poly_mod",
    "substitute",
    "sym",
    "zero_constraints",
]
