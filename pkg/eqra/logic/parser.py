"""Tokenizer and recursive-descent parsers for formulas and RA terms.

Formula grammar::

    formula := quant | disj
    quant   := ("exists" | "forall") IDENT "." formula
    disj    := conj ("|" conj)*
    conj    := lit ("&" lit)*
    lit     := "!" lit | "(" formula ")" | IDENT "(" IDENT "," IDENT ")" | IDENT "=" IDENT

RA-term grammar (``~`` and ``^`` bind tighter than ``;``, which binds
tighter than ``+``)::

    term    := comp ("+" comp)*
    comp    := unary (";" unary)*
    unary   := "~" unary | postfix
    postfix := primary "^"*
    primary := "id" | IDENT | "(" term ")"
"""

from __future__ import annotations

import re
from typing import Callable, List, NamedTuple, Optional

from eqra.exceptions import FormulaParseException
from eqra.logic.formulas import And, Atom, Equals, Exists, ForAll, Formula, Not, Or
from eqra.logic.ra_terms import Complement, Compose, Converse, Identity, Name, RATerm, Union

TOKEN_SPEC = [
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("DOT", r"\."),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("NOT", r"!"),
    ("EQ", r"="),
    ("SEMI", r";"),
    ("PLUS", r"\+"),
    ("TILDE", r"~"),
    ("CARET", r"\^"),
    ("SKIP", r"\s+"),
    ("MISMATCH", r"."),
]
TOKEN_REGEX = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in TOKEN_SPEC))
QUANTIFIERS = ("exists", "forall")


class Token(NamedTuple):
    kind: str
    value: str
    position: int


def tokenize(text: str) -> List[Token]:
    """Split text into tokens, ending with an ``END`` token.

    Raises:
        FormulaParseException: On a character outside the grammar.
    """
    tokens = []
    for match in TOKEN_REGEX.finditer(text):
        kind = match.lastgroup
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise FormulaParseException(f"Unexpected character {match.group()!r}", match.start())
        tokens.append(Token(kind, match.group(), match.start()))
    tokens.append(Token("END", "", len(text)))
    return tokens


class _Parser:
    """Shared token cursor."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, kind: str) -> Optional[Token]:
        if self.peek().kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, *also: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            raise FormulaParseException(
                f"Unexpected {token.value or 'end of input'!r}", token.position, (kind,) + also
            )
        return self.advance()

    def identifier(self) -> str:
        token = self.expect("IDENT")
        if token.value in QUANTIFIERS or token.value == "id":
            raise FormulaParseException(f"Reserved word {token.value!r}", token.position, ("IDENT",))
        return token.value

    def finish(self, result):
        self.expect("END")
        return result

    def left_fold(self, operand: Callable, kind: str, node) -> object:
        result = operand()
        while self.accept(kind):
            result = node(result, operand())
        return result


class FormulaParser(_Parser):
    """Parser for first-order formulas."""

    def parse(self) -> Formula:
        return self.finish(self.formula())

    def formula(self) -> Formula:
        token = self.peek()
        if token.kind == "IDENT" and token.value in QUANTIFIERS:
            self.advance()
            var = self.identifier()
            self.expect("DOT")
            body = self.formula()
            return Exists(var, body) if token.value == "exists" else ForAll(var, body)
        return self.left_fold(self.conjunction, "OR", Or)

    def conjunction(self) -> Formula:
        return self.left_fold(self.literal, "AND", And)

    def literal(self) -> Formula:
        if self.accept("NOT"):
            return Not(self.literal())
        if self.accept("LPAREN"):
            inner = self.formula()
            self.expect("RPAREN")
            return inner
        token = self.peek()
        if token.kind != "IDENT":
            raise FormulaParseException(
                f"Unexpected {token.value or 'end of input'!r}",
                token.position,
                ("!", "(", "IDENT"),
            )
        name = self.identifier()
        if self.accept("LPAREN"):
            left = self.identifier()
            self.expect("COMMA")
            right = self.identifier()
            self.expect("RPAREN")
            return Atom(name, left, right)
        self.expect("EQ", "LPAREN")
        return Equals(name, self.identifier())


class TermParser(_Parser):
    """Parser for relation-algebra terms."""

    def parse(self) -> RATerm:
        return self.finish(self.term())

    def term(self) -> RATerm:
        return self.left_fold(self.composition, "PLUS", Union)

    def composition(self) -> RATerm:
        return self.left_fold(self.unary, "SEMI", Compose)

    def unary(self) -> RATerm:
        if self.accept("TILDE"):
            return Complement(self.unary())
        result = self.primary()
        while self.accept("CARET"):
            result = Converse(result)
        return result

    def primary(self) -> RATerm:
        if self.accept("LPAREN"):
            inner = self.term()
            self.expect("RPAREN")
            return inner
        token = self.expect("IDENT", "~", "(")
        if token.value == "id":
            return Identity()
        if token.value in QUANTIFIERS:
            raise FormulaParseException(f"Reserved word {token.value!r}", token.position, ("IDENT",))
        return Name(token.value)


def parse_formula(text: str) -> Formula:
    """Parse a formula.

    Raises:
        FormulaParseException: With position and expected tokens.
    """
    return FormulaParser(text).parse()


def parse_ra_term(text: str) -> RATerm:
    """Parse an RA term.

    Raises:
        FormulaParseException: With position and expected tokens.
    """
    return TermParser(text).parse()
