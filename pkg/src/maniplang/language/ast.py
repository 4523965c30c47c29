"""Expression AST and its source printer.

The parser emits a single BinOp node for every infix `+`/`-`/`*`; the type
checker later tells cost sums, point arithmetic, and vec scaling apart by the
sorts it assigns. A TypedExpr wraps each node with its derived sort.
"""

from __future__ import annotations

from dataclasses import dataclass

SORTS = ("point", "vec", "cost", "scalar", "string", "void")


class Expr:
    """Base class for expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Literal(Expr):
    """A quoted string or a number."""

    value: str | float


@dataclass(frozen=True)
class Triple(Expr):
    """Bracketed list; must hold exactly three scalar expressions to type."""

    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Call(Expr):
    """Vocabulary word application with positional and named arguments."""

    word: str
    args: tuple[Expr, ...] = ()
    kwargs: tuple[tuple[str, Expr], ...] = ()


@dataclass(frozen=True)
class BinOp(Expr):
    """Infix `+`, `-`, or `*`; the sort decides which grammar rule applies."""

    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class TypedExpr:
    """A sort-annotated expression tree.

    `children` follow source order. For calls, `word` is the resolved
    (alias-canonical) vocabulary word name and `bound` maps declared
    parameter names to their typed arguments.
    """

    expr: Expr
    sort: str
    children: tuple["TypedExpr", ...] = ()
    word: str | None = None
    bound: tuple[tuple[str, "TypedExpr"], ...] = ()

    def binding(self, name: str) -> "TypedExpr | None":
        for key, value in self.bound:
            if key == name:
                return value
        return None


_PRECEDENCE = {"+": 1, "-": 1, "*": 2}


def to_source(expr: Expr) -> str:
    """Render an AST back to concrete syntax that reparses to an equal tree."""
    return _emit(expr, 0, False)


def _emit(expr: Expr, parent_prec: int, right_operand: bool) -> str:
    if isinstance(expr, Literal):
        if isinstance(expr.value, str):
            return '"' + expr.value + '"'
        return repr(expr.value)
    if isinstance(expr, Triple):
        return "[" + ", ".join(_emit(item, 0, False) for item in expr.items) + "]"
    if isinstance(expr, Call):
        parts = [_emit(arg, 0, False) for arg in expr.args]
        parts += [f"{name}={_emit(value, 0, False)}" for name, value in expr.kwargs]
        return f"{expr.word}({', '.join(parts)})"
    if isinstance(expr, Neg):
        inner = _emit(expr.operand, 3, False)
        return f"-{inner}"
    if isinstance(expr, BinOp):
        prec = _PRECEDENCE[expr.op]
        text = (
            f"{_emit(expr.left, prec, False)} {expr.op} {_emit(expr.right, prec, True)}"
        )
        # The grammar is left-associative, so a right operand at equal
        # precedence needs parentheses to keep the tree shape.
        if prec < parent_prec or (prec == parent_prec and right_operand):
            return f"({text})"
        return text
    raise TypeError(f"unknown expression node: {expr!r}")
