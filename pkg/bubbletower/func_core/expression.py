"""Parser for rational expressions in ambient coordinates x1..x{n+1}."""
import re
import typing
from dataclasses import dataclass

from .const import ExpressionError

TOKEN_PATTERN = re.compile(
    r"""
    (?P<space>\s+)
    |(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    |(?P<coordinate>x(?P<coordinate_index>\d+))
    |(?P<operator>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Expression:
    """Base class for parse tree nodes."""


@dataclass(frozen=True)
class Number(Expression):
    """Real literal."""

    value: float


@dataclass(frozen=True)
class Coordinate(Expression):
    """Ambient coordinate, zero-based (x1 has index 0)."""

    index: int


@dataclass(frozen=True)
class Negate(Expression):
    operand: Expression


@dataclass(frozen=True)
class BinaryOperation(Expression):
    """One of +, -, *, /"""

    operator: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Power(Expression):
    """Integer power of a sub-expression."""

    base: Expression
    exponent: int


@dataclass
class ParseMetadata:
    """Debug metadata for more helpful parsing errors."""

    file_name: str
    line_number: int


@dataclass
class Token:
    kind: str
    text: str
    column: int


# -----------------------------------------------------------------------------


def walk_expression(
    expression: Expression, visit: typing.Callable[[Expression], None]
) -> None:
    """Call visit on every node, parents before children."""
    visit(expression)

    if isinstance(expression, Negate):
        walk_expression(expression.operand, visit)
    elif isinstance(expression, BinaryOperation):
        walk_expression(expression.left, visit)
        walk_expression(expression.right, visit)
    elif isinstance(expression, Power):
        walk_expression(expression.base, visit)


def max_coordinate(expression: Expression) -> int:
    """Largest zero-based coordinate index used, or -1"""
    found = [-1]

    def visit(node: Expression):
        if isinstance(node, Coordinate):
            found[0] = max(found[0], node.index)

    walk_expression(expression, visit)
    return found[0]


def evaluate(expression: Expression, variables: typing.Sequence[typing.Any]) -> typing.Any:
    """Evaluate a parse tree over arrays or jets supporting +, -, *, /, **"""
    if isinstance(expression, Number):
        return expression.value

    if isinstance(expression, Coordinate):
        return variables[expression.index]

    if isinstance(expression, Negate):
        return -evaluate(expression.operand, variables)

    if isinstance(expression, Power):
        return evaluate(expression.base, variables) ** expression.exponent

    if isinstance(expression, BinaryOperation):
        left = evaluate(expression.left, variables)
        right = evaluate(expression.right, variables)
        if expression.operator == "+":
            return left + right

        if expression.operator == "-":
            return left - right

        if expression.operator == "*":
            return left * right

        return left / right

    raise ValueError(f"Unexpected expression {expression}")


def to_text(expression: Expression) -> str:
    """Fully parenthesized text that parses back to the same tree"""
    if isinstance(expression, Number):
        return repr(expression.value)

    if isinstance(expression, Coordinate):
        return f"x{expression.index + 1}"

    if isinstance(expression, Negate):
        return f"(-{to_text(expression.operand)})"

    if isinstance(expression, Power):
        return f"({to_text(expression.base)})^{expression.exponent}"

    assert isinstance(expression, BinaryOperation)
    return f"({to_text(expression.left)} {expression.operator} {to_text(expression.right)})"


# -----------------------------------------------------------------------------


def tokenize(
    text: str, metadata: typing.Optional[ParseMetadata] = None
) -> typing.List[Token]:
    tokens: typing.List[Token] = []
    column = 0
    while column < len(text):
        match = TOKEN_PATTERN.match(text, column)
        if match is None:
            raise ExpressionError(
                parse_error(
                    f"Unexpected character '{text[column]}'",
                    text,
                    column,
                    metadata=metadata,
                ),
                column=column,
            )

        kind = typing.cast(str, match.lastgroup)
        if kind == "coordinate_index":
            kind = "coordinate"

        if kind != "space":
            tokens.append(Token(kind=kind, text=match.group(0), column=column))

        column = match.end()

    return tokens


class _Parser:
    """Recursive descent over the token list.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') ['+' | '-'] integer)?
    atom   := number | coordinate | '(' expr ')'
    """

    def __init__(
        self,
        text: str,
        num_coordinates: int,
        metadata: typing.Optional[ParseMetadata] = None,
    ):
        self.text = text
        self.num_coordinates = num_coordinates
        self.metadata = metadata
        self.tokens = tokenize(text, metadata=metadata)
        self.position = 0

    def error(self, message: str, column: typing.Optional[int] = None) -> ExpressionError:
        if column is None:
            column = self.current.column if self.current else len(self.text)

        return ExpressionError(
            parse_error(message, self.text, column, metadata=self.metadata),
            column=column,
        )

    @property
    def current(self) -> typing.Optional[Token]:
        if self.position < len(self.tokens):
            return self.tokens[self.position]

        return None

    def accept(self, *texts: str) -> typing.Optional[Token]:
        token = self.current
        if (token is not None) and (token.kind == "operator") and (token.text in texts):
            self.position += 1
            return token

        return None

    def parse(self) -> Expression:
        if not self.tokens:
            raise self.error("Empty expression", column=0)

        root = self.expr()
        if self.current is not None:
            raise self.error(f"Unexpected '{self.current.text}'")

        return root

    def expr(self) -> Expression:
        node = self.term()
        while True:
            token = self.accept("+", "-")
            if token is None:
                return node

            node = BinaryOperation(operator=token.text, left=node, right=self.term())

    def term(self) -> Expression:
        node = self.unary()
        while True:
            token = self.accept("*", "/")
            if token is None:
                return node

            node = BinaryOperation(operator=token.text, left=node, right=self.unary())

    def unary(self) -> Expression:
        if self.accept("-"):
            return Negate(operand=self.unary())

        if self.accept("+"):
            return self.unary()

        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.accept("^", "**") is None:
            return base

        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")

        token = self.current
        if (token is None) or (token.kind != "number") or (not token.text.isdigit()):
            raise self.error("Expected integer exponent")

        self.position += 1
        return Power(base=base, exponent=sign * int(token.text))

    def atom(self) -> Expression:
        token = self.current
        if token is None:
            raise self.error("Unexpected end of expression")

        if token.kind == "number":
            self.position += 1
            return Number(value=float(token.text))

        if token.kind == "coordinate":
            self.position += 1
            index = int(token.text[1:]) - 1
            if (index < 0) or (index >= self.num_coordinates):
                raise self.error(
                    f"Coordinate {token.text} out of range x1..x{self.num_coordinates}",
                    column=token.column,
                )

            return Coordinate(index=index)

        if self.accept("("):
            node = self.expr()
            if self.accept(")") is None:
                raise self.error("Missing end parenthesis")

            return node

        raise self.error(f"Unexpected '{token.text}'")


def parse_expression(
    text: str,
    num_coordinates: int,
    metadata: typing.Optional[ParseMetadata] = None,
) -> Expression:
    """Parse text into an expression tree over x1..x{num_coordinates}"""
    return _Parser(text, num_coordinates, metadata=metadata).parse()


def parse_error(
    error: str, text: str, column: int, metadata: typing.Optional[ParseMetadata] = None
) -> str:
    """Generate helpful parsing error if metadata is available."""
    if metadata:
        return f"{error} (text='{text}', file={metadata.file_name}, column={column}, line={metadata.line_number})"

    return f"{error} (text='{text}', column={column})"
