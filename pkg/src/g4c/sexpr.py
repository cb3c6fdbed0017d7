"""Reader and writer for the S-expression surface syntax of the knowledge base.

Comment lines (`;; ...`) are first-class: they attach to the next form at any
nesting depth and survive a read/write round trip, so the natural-language
explanations embedded in grant files stay with the clauses they describe.
Trailing comments at the end of a list attach to the enclosing list; comments
after the last top-level form are dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class SExprError(ValueError):
    """Syntax error in an S-expression document, with 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


@dataclass(eq=False)
class Symbol:
    """Unquoted atom; `pkg:name` style package qualification, case-insensitive."""

    text: str
    leading_comments: list[str] = field(default_factory=list)
    line: int = 0
    column: int = 0

    @property
    def package(self) -> str | None:
        i = self.text.find(":")
        return self.text[:i] if i > 0 else None

    @property
    def name(self) -> str:
        i = self.text.find(":")
        return self.text[i + 1 :] if i > 0 else self.text

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Symbol)
            and self.text.casefold() == other.text.casefold()
            and self.leading_comments == other.leading_comments
        )

    def __hash__(self) -> int:
        return hash(self.text.casefold())

    def __repr__(self) -> str:
        return f"Symbol({self.text!r})"


@dataclass(eq=False)
class Keyword:
    """`:name` atom; compares case-insensitively like symbols."""

    name: str
    leading_comments: list[str] = field(default_factory=list)
    line: int = 0
    column: int = 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Keyword)
            and self.name.casefold() == other.name.casefold()
            and self.leading_comments == other.leading_comments
        )

    def __hash__(self) -> int:
        return hash((":", self.name.casefold()))

    def __repr__(self) -> str:
        return f"Keyword(:{self.name})"


@dataclass(eq=False)
class StringLit:
    text: str
    leading_comments: list[str] = field(default_factory=list)
    line: int = 0
    column: int = 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, StringLit)
            and self.text == other.text
            and self.leading_comments == other.leading_comments
        )

    def __hash__(self) -> int:
        return hash(self.text)

    def __repr__(self) -> str:
        return f"StringLit({self.text!r})"


@dataclass(eq=False)
class Integer:
    value: int
    leading_comments: list[str] = field(default_factory=list)
    line: int = 0
    column: int = 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Integer)
            and self.value == other.value
            and self.leading_comments == other.leading_comments
        )

    def __hash__(self) -> int:
        return hash(self.value)

    def __repr__(self) -> str:
        return f"Integer({self.value})"


@dataclass(eq=False)
class SList:
    items: list["SExpr"] = field(default_factory=list)
    leading_comments: list[str] = field(default_factory=list)
    line: int = 0
    column: int = 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SList)
            and self.items == other.items
            and self.leading_comments == other.leading_comments
        )

    def __hash__(self) -> int:
        return hash(tuple(self.items))

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __repr__(self) -> str:
        return f"SList({self.items!r})"


SExpr = Symbol | Keyword | StringLit | Integer | SList

_INTEGER_RE = re.compile(r"[+-]?\d+")
_ATOM_END = set(' \t\r\n();"')


def _tokenize(text: str):
    """Yield (kind, value, line, column); kind in {'(', ')', 'string', 'comment', 'atom'}."""
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
        elif ch in " \t\r":
            i, col = i + 1, col + 1
        elif ch == "(":
            yield "(", "(", line, col
            i, col = i + 1, col + 1
        elif ch == ")":
            yield ")", ")", line, col
            i, col = i + 1, col + 1
        elif ch == ";":
            j = text.find("\n", i)
            if j == -1:
                j = n
            raw = text[i:j]
            stripped = raw.lstrip(";")
            if stripped.startswith(" "):
                stripped = stripped[1:]
            yield "comment", stripped, line, col
            i, col = j, col + (j - i)
        elif ch == '"':
            start_line, start_col = line, col
            j = i + 1
            parts: list[str] = []
            while True:
                if j >= n:
                    raise SExprError("unterminated string literal", start_line, start_col)
                c = text[j]
                if c == '"':
                    break
                if c == "\\" and j + 1 < n:
                    nxt = text[j + 1]
                    if nxt in ('"', "\\"):
                        parts.append(nxt)
                        j += 2
                        continue
                parts.append(c)
                j += 1
            consumed = text[i : j + 1]
            yield "string", "".join(parts), start_line, start_col
            newlines = consumed.count("\n")
            if newlines:
                line += newlines
                col = len(consumed) - consumed.rfind("\n")
            else:
                col += len(consumed)
            i = j + 1
        else:
            start_col = col
            j = i
            while j < n and text[j] not in _ATOM_END:
                j += 1
            yield "atom", text[i:j], line, start_col
            col += j - i
            i = j


def _atom_node(tok: str, comments: list[str], line: int, col: int) -> SExpr:
    if _INTEGER_RE.fullmatch(tok) and str(int(tok)) == tok:
        return Integer(int(tok), comments, line, col)
    if tok.startswith(":") and len(tok) > 1:
        return Keyword(tok[1:], comments, line, col)
    return Symbol(tok, comments, line, col)


class _Reader:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0

    def _next(self):
        if self.pos >= len(self.tokens):
            return None
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def top_level(self) -> list[SExpr]:
        forms: list[SExpr] = []
        pending: list[str] = []
        while (tok := self._next()) is not None:
            kind, value, line, col = tok
            if kind == "comment":
                pending.append(value)
            elif kind == ")":
                raise SExprError("stray closing parenthesis", line, col)
            else:
                forms.append(self._form(tok, pending))
                pending = []
        return forms

    def _form(self, tok, comments: list[str]) -> SExpr:
        kind, value, line, col = tok
        if kind == "atom":
            return _atom_node(value, comments, line, col)
        if kind == "string":
            return StringLit(value, comments, line, col)
        # kind == "("
        items: list[SExpr] = []
        pending: list[str] = []
        while True:
            inner = self._next()
            if inner is None:
                raise SExprError("unbalanced parentheses: list is never closed", line, col)
            ikind, ivalue, iline, icol = inner
            if ikind == "comment":
                pending.append(ivalue)
            elif ikind == ")":
                return SList(items, list(comments) + pending, line, col)
            else:
                items.append(self._form(inner, pending))
                pending = []


def read_all(text: str) -> list[SExpr]:
    """Parse every top-level form of a document, in order."""
    return _Reader(text).top_level()


def read(text: str) -> SExpr:
    """Parse a document expected to hold exactly one top-level form."""
    forms = read_all(text)
    if len(forms) != 1:
        raise SExprError(f"expected exactly one form, got {len(forms)}", 1, 1)
    return forms[0]


class _Writer:
    def __init__(self):
        self.parts: list[str] = []

    def _at_line_start(self) -> bool:
        return not self.parts or self.parts[-1].endswith("\n")

    def _comments(self, lines: list[str]) -> None:
        if not self._at_line_start():
            self.parts.append("\n")
        for entry in lines:
            for ln in entry.split("\n"):
                self.parts.append(f";; {ln}\n" if ln else ";;\n")

    def emit(self, expr: SExpr) -> None:
        if expr.leading_comments:
            self._comments(expr.leading_comments)
        if isinstance(expr, Symbol):
            self.parts.append(expr.text)
        elif isinstance(expr, Keyword):
            self.parts.append(":" + expr.name)
        elif isinstance(expr, Integer):
            self.parts.append(str(expr.value))
        elif isinstance(expr, StringLit):
            escaped = expr.text.replace("\\", "\\\\").replace('"', '\\"')
            self.parts.append(f'"{escaped}"')
        elif isinstance(expr, SList):
            self.parts.append("(")
            for i, item in enumerate(expr.items):
                if i > 0 and not self._at_line_start():
                    self.parts.append(" ")
                self.emit(item)
            self.parts.append(")")
        else:
            raise TypeError(f"not an SExpr: {expr!r}")

    def result(self) -> str:
        return "".join(self.parts)


def write(expr: SExpr) -> str:
    """Serialize one form; comments re-emitted as `;;` lines before their node."""
    w = _Writer()
    w.emit(expr)
    return w.result()


def write_all(exprs: list[SExpr]) -> str:
    return "\n\n".join(write(e) for e in exprs) + "\n"
