"""Recursive-descent parser for call expressions.

Grammar (left-associative, `*` binds tighter than `+`/`-`, unary `-`
tightest):

    program  := expr EOF
    expr     := term (('+' | '-') term)*
    term     := unary ('*' unary)*
    unary    := '-' unary | primary
    primary  := NUMBER | STRING | list | call | '(' expr ')'
    list     := '[' expr (',' expr)* ']'
    call     := IDENT '(' [arg (',' arg)*] ')'
              | 'np' '.' 'array' '(' list ')'        # alternate list spelling
    arg      := [IDENT '='] expr
"""

from __future__ import annotations

from .ast import BinOp, Call, Expr, Literal, Neg, Triple
from .lexer import ParseError, Token, tokenize


def parse(source: str) -> Expr:
    """Parse source text to an AST; raises ParseError on malformed input."""
    return _Parser(tokenize(source)).parse_program()


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    def parse_program(self) -> Expr:
        if self._peek().kind == "EOF":
            raise ParseError("empty program", 0, ("expression",))
        expr = self._expr()
        self._expect("EOF")
        return expr

    def _peek(self) -> Token:
        return self._tokens[self._pos]

    def _advance(self) -> Token:
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def _expect(self, kind: str) -> Token:
        token = self._peek()
        if token.kind != kind:
            raise ParseError(f"unexpected {token.kind or 'end of input'}", token.offset, (kind,))
        return self._advance()

    def _expr(self) -> Expr:
        node = self._term()
        while self._peek().kind in ("+", "-"):
            op = self._advance().kind
            node = BinOp(op, node, self._term())
        return node

    def _term(self) -> Expr:
        node = self._unary()
        while self._peek().kind == "*":
            self._advance()
            node = BinOp("*", node, self._unary())
        return node

    def _unary(self) -> Expr:
        if self._peek().kind == "-":
            self._advance()
            return Neg(self._unary())
        return self._primary()

    def _primary(self) -> Expr:
        token = self._peek()
        if token.kind == "NUMBER":
            self._advance()
            return Literal(float(token.value))
        if token.kind == "STRING":
            self._advance()
            return Literal(str(token.value))
        if token.kind == "[":
            return self._list()
        if token.kind == "(":
            self._advance()
            node = self._expr()
            self._expect(")")
            return node
        if token.kind == "IDENT":
            return self._call()
        raise ParseError(
            f"unexpected {token.kind or 'end of input'}",
            token.offset,
            ("NUMBER", "STRING", "IDENT", "[", "("),
        )

    def _list(self) -> Expr:
        self._expect("[")
        items = [self._expr()]
        while self._peek().kind == ",":
            self._advance()
            items.append(self._expr())
        self._expect("]")
        return Triple(tuple(items))

    def _call(self) -> Expr:
        name_token = self._expect("IDENT")
        name = str(name_token.value)
        if self._peek().kind == ".":
            # Only np.array(<list>) is admitted; it denotes the list itself.
            self._advance()
            attr = self._expect("IDENT")
            if name != "np" or attr.value != "array":
                raise ParseError(
                    f"unknown dotted name {name}.{attr.value}", name_token.offset, ("np.array",)
                )
            self._expect("(")
            inner = self._list()
            self._expect(")")
            return inner
        self._expect("(")
        args: list[Expr] = []
        kwargs: list[tuple[str, Expr]] = []
        if self._peek().kind != ")":
            self._argument(args, kwargs)
            while self._peek().kind == ",":
                self._advance()
                self._argument(args, kwargs)
        self._expect(")")
        return Call(name, tuple(args), tuple(kwargs))

    def _argument(self, args: list[Expr], kwargs: list[tuple[str, Expr]]) -> None:
        token = self._peek()
        if token.kind == "IDENT" and self._tokens[self._pos + 1].kind == "=":
            self._advance()
            self._advance()
            kwargs.append((str(token.value), self._expr()))
            return
        if kwargs:
            raise ParseError("positional argument after named argument", token.offset, ("IDENT =",))
        args.append(self._expr())
