"""Sort inference and program validation.

Inference is bottom-up with one twist: literals are sort-ambiguous (a quoted
part name can stand for the part's centroid, a bracket triple can be a point
or a displacement, a non-negative number can be a constant cost term), and
the expected sort from the enclosing context picks the reading. All
composition and coercion possibilities come from the grammar rule set, so
the checker accepts exactly what the serialized grammar says.
"""

from __future__ import annotations

from ..errors import ManiplangError
from .ast import BinOp, Call, Expr, Literal, Neg, Triple, TypedExpr, to_source
from .lexer import ParseError
from .parser import parse
from .vocabulary import GrammarRule, Vocabulary, default_grammar, default_vocabulary


class TypeCheckError(ManiplangError):
    """Sort mismatch; names the offending node and the expected/actual sorts."""

    def __init__(self, node: Expr, expected: str, actual: str):
        self.node = node
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected {expected}, got {actual} in `{to_source(node)}`")


class UnknownWordError(ManiplangError):
    def __init__(self, name: str):
        self.word = name
        super().__init__(f"unknown vocabulary word {name!r}")


class ArgumentError(ManiplangError):
    """Wrong arity or an argument name the word does not declare."""


def _rule_set(rules) -> frozenset[tuple[str, tuple[str, ...]]]:
    return frozenset((r.lhs, r.rhs) for r in rules)


def _literal_sorts(node: Expr, rules) -> tuple[str, ...]:
    """Possible sorts for an ambiguous leaf, base sort first."""
    lookup = _rule_set(rules)
    if isinstance(node, Literal) and isinstance(node.value, str):
        extra = ("point",) if ("point", ("string",)) in lookup else ()
        return ("string",) + extra
    if isinstance(node, Literal):
        extra = ("cost",) if node.value >= 0 and ("cost", ("number",)) in lookup else ()
        return ("scalar",) + extra
    if isinstance(node, Triple):
        return tuple(
            sort for sort in ("vec", "point") if (sort, ("triple",)) in lookup
        )
    raise TypeError(f"not a literal node: {node!r}")


def type_check(
    expr: Expr,
    vocab: Vocabulary | None = None,
    rules: tuple[GrammarRule, ...] | None = None,
    expected_sort: str | None = "cost",
) -> TypedExpr:
    """Annotate `expr` with sorts; a program must come out at sort `cost`.

    Pass expected_sort=None to type a bare subexpression, or "void" via
    validate_program for gripper stage actions.
    """
    vocab = vocab if vocab is not None else default_vocabulary()
    rules = rules if rules is not None else default_grammar()
    typed = _infer(expr, vocab, rules, expected_sort)
    if expected_sort is not None and typed.sort != expected_sort:
        raise TypeCheckError(expr, expected_sort, typed.sort)
    return typed


def _infer(node: Expr, vocab, rules, expected: str | None) -> TypedExpr:
    if isinstance(node, (Literal, Triple)):
        return _infer_leaf(node, vocab, rules, expected)
    if isinstance(node, Neg):
        operand = _infer(node.operand, vocab, rules, "scalar")
        if operand.sort != "scalar" or ("scalar", ("-", "scalar")) not in _rule_set(rules):
            raise TypeCheckError(node, "scalar", operand.sort)
        return TypedExpr(node, "scalar", (operand,))
    if isinstance(node, BinOp):
        return _infer_binop(node, vocab, rules, expected)
    if isinstance(node, Call):
        return _infer_call(node, vocab, rules)
    raise TypeError(f"unknown expression node: {node!r}")


def _infer_leaf(node: Expr, vocab, rules, expected: str | None) -> TypedExpr:
    candidates = _literal_sorts(node, rules)
    if not candidates:
        raise TypeCheckError(node, expected or "any", "untypable literal")
    sort = expected if expected in candidates else candidates[0]
    if isinstance(node, Triple):
        if len(node.items) != 3:
            raise TypeCheckError(node, "a 3-element list", f"{len(node.items)}-element list")
        children = tuple(_infer(item, vocab, rules, "scalar") for item in node.items)
        for item in children:
            if item.sort != "scalar":
                raise TypeCheckError(item.expr, "scalar", item.sort)
        return TypedExpr(node, sort, children)
    return TypedExpr(node, sort)


def _infer_binop(node: BinOp, vocab, rules, expected: str | None) -> TypedExpr:
    left_opts = _operand_options(node.left, vocab, rules, expected)
    right_opts = _operand_options(node.right, vocab, rules, expected)
    matches = [
        rule
        for rule in rules
        if len(rule.rhs) == 3
        and rule.rhs[1] == node.op
        and rule.rhs[0] in left_opts
        and rule.rhs[2] in right_opts
    ]
    if not matches:
        actual = f"{next(iter(left_opts))} {node.op} {next(iter(right_opts))}"
        raise TypeCheckError(node, expected or "a composable pair", actual)
    rule = next((r for r in matches if r.lhs == expected), matches[0])
    left = _infer(node.left, vocab, rules, rule.rhs[0])
    right = _infer(node.right, vocab, rules, rule.rhs[2])
    return TypedExpr(node, rule.lhs, (left, right))


def _operand_options(node: Expr, vocab, rules, expected: str | None) -> tuple[str, ...]:
    if isinstance(node, (Literal, Triple)):
        opts = _literal_sorts(node, rules)
        if expected in opts:
            # Prefer the contextual reading so `0 + 0` sums as cost at the top.
            return (expected,) + tuple(o for o in opts if o != expected)
        return opts
    return (_infer(node, vocab, rules, None).sort,)


def _infer_call(node: Call, vocab, rules) -> TypedExpr:
    word = vocab.lookup(node.word)
    if word is None:
        raise UnknownWordError(node.word)
    params = word.params
    if len(node.args) > len(params):
        raise ArgumentError(
            f"{node.word} takes at most {len(params)} arguments, got {len(node.args)}"
        )
    assigned: dict[str, Expr] = {}
    for param, arg in zip(params, node.args):
        assigned[param.name] = arg
    declared = {p.name for p in params}
    for name, value in node.kwargs:
        if name not in declared:
            raise ArgumentError(f"{node.word} has no argument named {name!r}")
        if name in assigned:
            raise ArgumentError(f"{node.word}: argument {name!r} given twice")
        assigned[name] = value
    bound: list[tuple[str, TypedExpr]] = []
    order: dict[int, TypedExpr] = {}
    for param in params:
        if param.name not in assigned:
            if param.required:
                raise ArgumentError(f"{node.word}: missing argument {param.name!r}")
            continue
        arg = assigned[param.name]
        typed_arg = _infer(arg, vocab, rules, param.sort)
        if typed_arg.sort != param.sort:
            raise TypeCheckError(arg, param.sort, typed_arg.sort)
        bound.append((param.name, typed_arg))
        order[id(arg)] = typed_arg
    children = tuple(
        order[id(arg)] for arg in list(node.args) + [v for _, v in node.kwargs]
    )
    return TypedExpr(node, word.result_sort, children, word=word.name, bound=tuple(bound))


class Accepted:
    """Successful validation; carries the typed program."""

    __slots__ = ("typed",)

    def __init__(self, typed: TypedExpr):
        self.typed = typed

    def __bool__(self) -> bool:
        return True


class Rejected:
    """Failed validation; carries the reason, never an exception escape."""

    __slots__ = ("reason", "error")

    def __init__(self, error: ManiplangError):
        self.error = error
        self.reason = f"{type(error).__name__}: {error}"

    def __bool__(self) -> bool:
        return False


def validate_program(
    source: str,
    vocab: Vocabulary | None = None,
    rules: tuple[GrammarRule, ...] | None = None,
) -> Accepted | Rejected:
    """Parse + type check as a total function; errors come back as values.

    A program is a cost expression, or a bare void gripper action that
    stands alone as a stage.
    """
    vocab = vocab if vocab is not None else default_vocabulary()
    rules = rules if rules is not None else default_grammar()
    try:
        expr = parse(source)
    except ParseError as exc:
        return Rejected(exc)
    try:
        # Hint cost so literal terms coerce, but let void actions through.
        typed = _infer(expr, vocab, rules, "cost")
    except ManiplangError as exc:
        return Rejected(exc)
    if typed.sort not in ("cost", "void"):
        return Rejected(TypeCheckError(expr, "cost", typed.sort))
    return Accepted(typed)
