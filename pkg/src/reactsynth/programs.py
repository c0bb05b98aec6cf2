"""Structured reactive programs over Boolean variables.

Abstract syntax, a recursive-descent parser for the concrete syntax, a
canonical pretty printer, and the Boolean semantics of expressions.

Valuations are plain ints: bit ``i`` holds the value of ``vars.names[i]``.
The initial valuation (everything false) is therefore ``0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError, UnknownVariable

KEYWORDS = frozenset(
    ["input", "output", "if", "then", "else", "while", "do", "true", "false"]
)


@dataclass(frozen=True)
class VariableSet:
    """The ordered finite set of program variables."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("variable set must be nonempty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _IDENT.fullmatch(name) or name in KEYWORDS:
                raise ValueError(f"invalid variable name {name!r}")

    @classmethod
    def parse(cls, text: str) -> "VariableSet":
        """Build from a comma separated list such as ``"b1,b2"``."""
        return cls(tuple(n.strip() for n in text.split(",") if n.strip()))

    def __len__(self):
        return len(self.names)

    def __contains__(self, name):
        return name in self.names

    def index(self, name: str) -> int:
        return self.names.index(name)

    @property
    def universe_size(self) -> int:
        return 1 << len(self.names)

    def valuations(self) -> range:
        return range(self.universe_size)

    def get(self, sigma: int, name: str) -> int:
        return (sigma >> self.index(name)) & 1

    def assign(self, sigma: int, name: str, value: int) -> int:
        bit = 1 << self.index(name)
        return sigma | bit if value else sigma & ~bit

    def format_valuation(self, sigma: int) -> str:
        """Bit string in declaration order, e.g. ``"10"`` for b1=1, b2=0."""
        return "".join(str((sigma >> i) & 1) for i in range(len(self.names)))


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    inner: "Expr"


Expr = Union[Const, Var, And, Or, Not]

TRUE = Const(True)
FALSE = Const(False)


# -- programs ----------------------------------------------------------------


@dataclass(frozen=True)
class Assign:
    target: str
    rhs: Expr


@dataclass(frozen=True)
class Input:
    target: str


@dataclass(frozen=True)
class Output:
    source: str


@dataclass(frozen=True)
class Seq:
    first: "Prog"
    second: "Prog"


@dataclass(frozen=True)
class If:
    cond: Expr
    then_branch: "Prog"
    else_branch: "Prog"


@dataclass(frozen=True)
class While:
    cond: Expr
    body: "Prog"


Prog = Union[Assign, Input, Output, Seq, If, While]
ATOMS = (Assign, Input, Output)


def children(p: Prog) -> tuple:
    """Statement children of a program node (expressions excluded)."""
    if isinstance(p, Seq):
        return (p.first, p.second)
    if isinstance(p, If):
        return (p.then_branch, p.else_branch)
    if isinstance(p, While):
        return (p.body,)
    return ()


def height(p: Prog) -> int:
    """Height of the statement tree; atoms have height 1."""
    return 1 + max((height(c) for c in children(p)), default=0)


def size(p: Prog) -> int:
    """Number of statement nodes."""
    return 1 + sum(size(c) for c in children(p))


def expr_variables(e: Expr) -> Iterator[str]:
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, (And, Or)):
        yield from expr_variables(e.left)
        yield from expr_variables(e.right)
    elif isinstance(e, Not):
        yield from expr_variables(e.inner)


def program_variables(p: Prog) -> Iterator[str]:
    if isinstance(p, Assign):
        yield p.target
        yield from expr_variables(p.rhs)
    elif isinstance(p, Input):
        yield p.target
    elif isinstance(p, Output):
        yield p.source
    else:
        if isinstance(p, (If, While)):
            yield from expr_variables(p.cond)
        for c in children(p):
            yield from program_variables(c)


def check_program(p: Prog, vars: VariableSet) -> None:
    """Raise UnknownVariable if ``p`` mentions a name outside ``vars``."""
    for name in program_variables(p):
        if name not in vars:
            raise UnknownVariable(name)


# -- expression semantics ----------------------------------------------------


def eval_expr(e: Expr, sigma: int, vars: VariableSet) -> int:
    if isinstance(e, Const):
        return int(e.value)
    if isinstance(e, Var):
        return (sigma >> vars.index(e.name)) & 1
    if isinstance(e, And):
        return eval_expr(e.left, sigma, vars) & eval_expr(e.right, sigma, vars)
    if isinstance(e, Or):
        return eval_expr(e.left, sigma, vars) | eval_expr(e.right, sigma, vars)
    if isinstance(e, Not):
        return 1 - eval_expr(e.inner, sigma, vars)
    raise TypeError(f"not an expression: {e!r}")


def sem_expr(e: Expr, vars: VariableSet) -> frozenset[int]:
    """The set of valuations satisfying ``e`` (its Boolean function)."""
    return frozenset(s for s in vars.valuations() if eval_expr(e, s, vars))


def _chain(op, items):
    result = items[0]
    for item in items[1:]:
        result = op(result, item)
    return result


def canonical_expr(f, vars: VariableSet) -> Expr:
    """Minterm DNF of a Boolean function given as a set of valuations.

    Minterms appear in increasing valuation order and literals in variable
    order; both chains associate to the left, matching the parser.
    """
    f = frozenset(f)
    if not f <= frozenset(vars.valuations()):
        raise ValueError("function mentions valuations outside the universe")
    if not f:
        return FALSE
    if len(f) == vars.universe_size:
        return TRUE
    minterms = []
    for sigma in sorted(f):
        literals = [
            Var(name) if (sigma >> i) & 1 else Not(Var(name))
            for i, name in enumerate(vars.names)
        ]
        minterms.append(_chain(And, literals))
    return _chain(Or, minterms)


def all_functions(vars: VariableSet) -> list[frozenset[int]]:
    """All 2^(2^n) Boolean functions, ordered by their truth-table integer."""
    universe = list(vars.valuations())
    return [
        frozenset(s for s in universe if (table >> s) & 1)
        for table in range(1 << len(universe))
    ]


# -- concrete syntax ---------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<op>:=|&&|\|\||[;{}()!])|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "word", "op" or "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind in ("op", "word"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "<end of input>", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, vars):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = vars

    @property
    def tok(self):
        return self.tokens[self.pos]

    def fail(self, *expected):
        t = self.tok
        raise ParseError(f"unexpected {t.text!r}", t.line, t.column, expected)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind != "eof":
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.fail(repr(text))

    def ident(self):
        t = self.tok
        if t.kind != "word" or t.text in KEYWORDS:
            self.fail("identifier")
        if t.text not in self.vars:
            raise UnknownVariable(t.text, t.line, t.column)
        self.pos += 1
        return t.text

    def program(self, *terminators):
        stmts = [self.statement()]
        while self.accept(";"):
            stmts.append(self.statement())
        if self.tok.text not in terminators or self.tok.kind == "word":
            self.fail("';'", *(repr(t) for t in terminators))
        result = stmts[-1]
        for stmt in reversed(stmts[:-1]):
            result = Seq(stmt, result)
        return result

    def statement(self):
        t = self.tok
        if self.accept("input"):
            return Input(self.ident())
        if self.accept("output"):
            return Output(self.ident())
        if self.accept("if"):
            cond = self.expr()
            self.expect("then")
            then_branch = self.block()
            self.expect("else")
            return If(cond, then_branch, self.block())
        if self.accept("while"):
            cond = self.expr()
            self.expect("do")
            return While(cond, self.block())
        if t.text == "{":
            return self.block()
        if t.kind == "word" and t.text not in KEYWORDS:
            target = self.ident()
            self.expect(":=")
            return Assign(target, self.expr())
        self.fail("'input'", "'output'", "'if'", "'while'", "'{'", "identifier")

    def block(self):
        self.expect("{")
        body = self.program("}")
        self.expect("}")
        return body

    def expr(self):
        e = self.term()
        while self.accept("||"):
            e = Or(e, self.term())
        return e

    def term(self):
        e = self.factor()
        while self.accept("&&"):
            e = And(e, self.factor())
        return e

    def factor(self):
        if self.accept("!"):
            return Not(self.factor())
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.tok.kind == "word" and self.tok.text not in KEYWORDS:
            return Var(self.ident())
        self.fail("'!'", "'true'", "'false'", "'('", "identifier")


def parse_program(text: str, vars: VariableSet) -> Prog:
    """Parse program text over the given variables.

    ``s1 ; s2 ; s3`` nests to the right. A braced block ``{ ... }`` may stand
    as a statement, which is how a left-nested sequence is written.
    """
    parser = _Parser(text, vars)
    return parser.program("<end of input>")


def parse_expr(text: str, vars: VariableSet) -> Expr:
    parser = _Parser(text, vars)
    e = parser.expr()
    if parser.tok.kind != "eof":
        parser.fail("'&&'", "'||'", "<end of input>")
    return e


_PREC = {Or: 1, And: 2, Not: 3, Var: 4, Const: 4}


def render_expr(e: Expr, min_prec: int = 0) -> str:
    if isinstance(e, Const):
        text = "true" if e.value else "false"
    elif isinstance(e, Var):
        text = e.name
    elif isinstance(e, Not):
        text = "!" + render_expr(e.inner, 3)
    else:
        prec = _PREC[type(e)]
        op = " || " if isinstance(e, Or) else " && "
        # both operators associate left, so the right child binds tighter
        text = render_expr(e.left, prec) + op + render_expr(e.right, prec + 1)
    if _PREC[type(e)] < min_prec:
        return f"({text})"
    return text


def _indent(text):
    return "\n".join("  " + line for line in text.split("\n"))


def _render_stmt(p):
    if isinstance(p, Input):
        return f"input {p.target}"
    if isinstance(p, Output):
        return f"output {p.source}"
    if isinstance(p, Assign):
        return f"{p.target} := {render_expr(p.rhs)}"
    if isinstance(p, If):
        return (
            f"if {render_expr(p.cond)} then {{\n{_indent(render_program(p.then_branch))}"
            f"\n}} else {{\n{_indent(render_program(p.else_branch))}\n}}"
        )
    if isinstance(p, While):
        return f"while {render_expr(p.cond)} do {{\n{_indent(render_program(p.body))}\n}}"
    if isinstance(p, Seq):
        return f"{{\n{_indent(render_program(p))}\n}}"
    raise TypeError(f"not a program: {p!r}")


def render_program(p: Prog) -> str:
    """Canonical text: one statement per line, two-space indent, braces always."""
    lines = []
    while isinstance(p, Seq):
        lines.append(_render_stmt(p.first) + " ;")
        p = p.second
    lines.append(_render_stmt(p))
    return "\n".join(lines)
