"""Lexer and s-expression reader for the SMT-LIB subset we accept.

Offsets are byte offsets into the UTF-8 encoded source.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import IllegalCharacter, UnbalancedParens, UnexpectedEOF, UnterminatedString

Span = Tuple[int, int]


class Tok(enum.Enum):
    LPAREN = "("
    RPAREN = ")"
    SYMBOL = "symbol"
    KEYWORD = "keyword"
    NUMERAL = "numeral"
    STRING = "string"


@dataclass(frozen=True)
class Token:
    kind: Tok
    text: str
    start: int
    end: int


_SYMBOL_CHARS = frozenset(
    b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789~!@$%^&*_-+=<>.?/"
)
_WHITESPACE = frozenset(b" \t\r\n\f\v")


def lex(source: Union[str, bytes]) -> List[Token]:
    data = source.encode("utf-8") if isinstance(source, str) else source
    tokens: List[Token] = []
    i, n = 0, len(data)
    while i < n:
        c = data[i]
        if c in _WHITESPACE:
            i += 1
        elif c == ord(";"):
            nl = data.find(b"\n", i)
            i = n if nl < 0 else nl + 1
        elif c == ord("("):
            tokens.append(Token(Tok.LPAREN, "(", i, i + 1))
            i += 1
        elif c == ord(")"):
            tokens.append(Token(Tok.RPAREN, ")", i, i + 1))
            i += 1
        elif c == ord('"'):
            j = i + 1
            while True:
                if j >= n:
                    raise UnterminatedString("unterminated string literal", (i, n))
                if data[j] == ord('"'):
                    if j + 1 < n and data[j + 1] == ord('"'):  # "" escape
                        j += 2
                        continue
                    break
                j += 1
            tokens.append(Token(Tok.STRING, data[i : j + 1].decode("utf-8"), i, j + 1))
            i = j + 1
        elif c == ord("|"):
            j = data.find(b"|", i + 1)
            if j < 0:
                raise UnterminatedString("unterminated quoted symbol", (i, n))
            body = data[i + 1 : j]
            if b"\\" in body:
                raise IllegalCharacter("backslash inside quoted symbol", (i + 1 + body.index(b"\\"), j))
            tokens.append(Token(Tok.SYMBOL, data[i : j + 1].decode("utf-8"), i, j + 1))
            i = j + 1
        elif c == ord(":") or c in _SYMBOL_CHARS:
            j = i + 1
            while j < n and data[j] in _SYMBOL_CHARS:
                j += 1
            text = data[i:j].decode("ascii")
            if c == ord(":"):
                kind = Tok.KEYWORD
            elif text.isdigit():
                kind = Tok.NUMERAL
            else:
                kind = Tok.SYMBOL
            tokens.append(Token(kind, text, i, j))
            i = j
        else:
            raise IllegalCharacter(f"illegal character {chr(c)!r}" if c < 128 else "illegal non-ASCII byte", (i, i + 1))
    return tokens


@dataclass(frozen=True)
class Atom:
    text: str
    span: Span = field(default=(0, 0), compare=False)
    kind: Tok = field(default=Tok.SYMBOL, compare=False)

    def __post_init__(self):
        if not self.text:
            raise ValueError("atom text must be non-empty")

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class SList:
    children: Tuple["SExpr", ...]
    span: Span = field(default=(0, 0), compare=False)

    def __len__(self) -> int:
        return len(self.children)

    def __getitem__(self, i):
        return self.children[i]

    def __iter__(self):
        return iter(self.children)

    def __str__(self) -> str:
        return "(" + " ".join(str(c) for c in self.children) + ")"


SExpr = Union[Atom, SList]


def parse_sexprs(tokens: Sequence[Token]) -> List[SExpr]:
    stack: List[Tuple[int, List[SExpr]]] = []
    top: List[SExpr] = []
    for tok in tokens:
        if tok.kind is Tok.LPAREN:
            stack.append((tok.start, []))
        elif tok.kind is Tok.RPAREN:
            if not stack:
                raise UnbalancedParens("unmatched ')'", (tok.start, tok.end))
            start, kids = stack.pop()
            node = SList(tuple(kids), (start, tok.end))
            (stack[-1][1] if stack else top).append(node)
        else:
            node = Atom(tok.text, (tok.start, tok.end), tok.kind)
            (stack[-1][1] if stack else top).append(node)
    if stack:
        start = stack[-1][0]
        raise UnbalancedParens("unclosed '('", (start, start + 1))
    return top


def read(source: Union[str, bytes]) -> List[SExpr]:
    return parse_sexprs(lex(source))


def read_one(source: Union[str, bytes]) -> SExpr:
    forest = read(source)
    if not forest:
        raise UnexpectedEOF("expected an s-expression")
    return forest[0]


def to_text(forest: Iterable[SExpr]) -> str:
    return "\n".join(str(e) for e in forest)


def is_atom(e: SExpr, text: str = None) -> bool:
    return isinstance(e, Atom) and (text is None or e.text == text)
