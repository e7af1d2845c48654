"""Closed-form Riccati solver built on the asymptotic iteration method."""

from . import aim, cli, hyper, riccati, symcore, tables, verify
from .symcore import (
    Constraint,
    Expr,
    NormalForm,
    Polynomial,
    differentiate,
    evaluate_numeric,
    is_zero,
    normalize,
    parse_expr,
    zero_constraints,
)

__all__ = [
    "Constraint",
    "Expr",
    "NormalForm",
    "Polynomial",
    "aim",
    "cli",
    "differentiate",
    "evaluate_numeric",
    "hyper",
    "is_zero",
    "normalize",
    "parse_expr",
    "riccati",
    "symcore",
    "tables",
    "verify",
    "zero_constraints",
]

__version__ = "0.1.0"
