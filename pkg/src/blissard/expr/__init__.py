"""Expression language for series terms and closed forms."""

from .evaluate import evaluate, evaluate_series
from .nodes import (
    Add,
    Binary,
    Branch,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Num,
    Piecewise,
    Pow,
    Sub,
    Sum,
    Var,
    free_vars,
)
from .parser import FUNCTIONS, RESERVED, SeriesForm, parse, parse_series, tokenize
from .printer import unparse

__all__ = [
    "Add",
    "Binary",
    "Branch",
    "Call",
    "Const",
    "Div",
    "Expr",
    "FUNCTIONS",
    "Mul",
    "Neg",
    "Num",
    "Piecewise",
    "Pow",
    "RESERVED",
    "SeriesForm",
    "Sub",
    "Sum",
    "Var",
    "evaluate",
    "evaluate_series",
    "free_vars",
    "parse",
    "parse_series",
    "tokenize",
    "unparse",
]
