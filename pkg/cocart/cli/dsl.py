"""Parser and serializer for the workspace language.

    category C { objects: a, b; arrows: u: a -> b; relations: g.f = h; }
    marking W in C { u }
    functor F : C -> D { obj a -> x; arr u -> p; }
    family P over B { fiber b = C marked W; map u = F; right u = G; }

Words are dot-separated arrow names composed right to left. ``#`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import TypeVar

from cocart.core.exceptions import DSLSyntaxError

Word = tuple[str, ...]
T = TypeVar("T")

_TOKEN = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)|(?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)|(?P<punct>[{}:;,=.])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class CategoryDecl:
    """``category`` statement."""

    name: str
    objects: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...] = ()
    relations: tuple[tuple[Word, Word], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MarkingDecl:
    """``marking`` statement."""

    name: str
    category: str
    members: tuple[Word, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FunctorDecl:
    """``functor`` statement."""

    name: str
    source: str
    target: str
    objects: tuple[tuple[str, str], ...] = ()
    arrows: tuple[tuple[str, Word], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FamilyDecl:
    """``family`` statement: fibers with markings, maps and optional right adjoints."""

    name: str
    base: str
    fibers: tuple[tuple[str, str, str], ...] = ()
    maps: tuple[tuple[str, str], ...] = ()
    rights: tuple[tuple[str, str], ...] = ()
    line: int = field(default=0, compare=False)


Statement = CategoryDecl | MarkingDecl | FunctorDecl | FamilyDecl


def tokenize(text: str) -> Iterator[Token]:
    """Split source text into tokens, dropping blanks and comments.

    Raises:
        DSLSyntaxError: On a character no token can start with
    """
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise DSLSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = match.lastgroup
        assert kind is not None
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind not in ("space", "comment"):
            yield Token(kind, match.group(), line, pos - line_start + 1)
        pos = match.end()
    yield Token("eof", "", line, pos - line_start + 1)


class WorkspaceParser:
    """Recursive-descent parser producing workspace statements."""

    def __init__(self, text: str) -> None:
        self.tokens = list(tokenize(text))
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _error(self, expected: str) -> DSLSyntaxError:
        token = self.current
        found = "end of input" if token.kind == "eof" else repr(token.text)
        return DSLSyntaxError(f"expected {expected}, found {found}", token.line, token.column)

    def _at(self, text: str) -> bool:
        token = self.current
        return token.kind != "eof" and token.kind != "name" and token.text == text

    def _at_keyword(self, keyword: str) -> bool:
        return self.current.kind == "name" and self.current.text == keyword

    def _expect(self, text: str) -> Token:
        if not (self._at(text) or self._at_keyword(text)):
            raise self._error(repr(text))
        token = self.current
        self.pos += 1
        return token

    def _name(self) -> str:
        token = self.current
        if token.kind != "name":
            raise self._error("a name")
        self.pos += 1
        return token.text

    def _word(self) -> Word:
        parts = [self._name()]
        while self._at("."):
            self.pos += 1
            parts.append(self._name())
        return tuple(parts)

    def _separated(self, item: Callable[[], T], stop: str) -> list[T]:
        items: list[T] = []
        if self._at(stop):
            return items
        items.append(item())
        while self._at(","):
            self.pos += 1
            items.append(item())
        return items

    def parse(self) -> list[Statement]:
        """Parse the whole source.

        Raises:
            DSLSyntaxError: With the line and column of the offending token
        """
        statements: list[Statement] = []
        while self.current.kind != "eof":
            if self._at_keyword("category"):
                statements.append(self._category())
            elif self._at_keyword("marking"):
                statements.append(self._marking())
            elif self._at_keyword("functor"):
                statements.append(self._functor())
            elif self._at_keyword("family"):
                statements.append(self._family())
            else:
                raise self._error("'category', 'marking', 'functor' or 'family'")
        return statements

    def _category(self) -> CategoryDecl:
        line = self._expect("category").line
        name = self._name()
        self._expect("{")
        objects: list[str] = []
        arrows: list[tuple[str, str, str]] = []
        relations: list[tuple[Word, Word]] = []
        while not self._at("}"):
            if self._at_keyword("objects"):
                self.pos += 1
                self._expect(":")
                objects.extend(self._separated(self._name, ";"))
            elif self._at_keyword("arrows"):
                self.pos += 1
                self._expect(":")
                arrows.extend(self._separated(self._arrow, ";"))
            elif self._at_keyword("relations"):
                self.pos += 1
                self._expect(":")
                relations.extend(self._separated(self._equation, ";"))
            else:
                raise self._error("'objects', 'arrows', 'relations' or '}'")
            self._expect(";")
        self._expect("}")
        return CategoryDecl(name, tuple(objects), tuple(arrows), tuple(relations), line)

    def _arrow(self) -> tuple[str, str, str]:
        name = self._name()
        self._expect(":")
        src = self._name()
        self._expect("->")
        return name, src, self._name()

    def _equation(self) -> tuple[Word, Word]:
        lhs = self._word()
        self._expect("=")
        return lhs, self._word()

    def _marking(self) -> MarkingDecl:
        line = self._expect("marking").line
        name = self._name()
        self._expect("in")
        category = self._name()
        self._expect("{")
        members = self._separated(self._word, "}")
        self._expect("}")
        return MarkingDecl(name, category, tuple(members), line)

    def _functor(self) -> FunctorDecl:
        line = self._expect("functor").line
        name = self._name()
        self._expect(":")
        source = self._name()
        self._expect("->")
        target = self._name()
        self._expect("{")
        objects: list[tuple[str, str]] = []
        arrows: list[tuple[str, Word]] = []
        while not self._at("}"):
            if self._at_keyword("obj"):
                self.pos += 1
                a = self._name()
                self._expect("->")
                objects.append((a, self._name()))
            elif self._at_keyword("arr"):
                self.pos += 1
                u = self._name()
                self._expect("->")
                arrows.append((u, self._word()))
            else:
                raise self._error("'obj', 'arr' or '}'")
            self._expect(";")
        self._expect("}")
        return FunctorDecl(name, source, target, tuple(objects), tuple(arrows), line)

    def _family(self) -> FamilyDecl:
        line = self._expect("family").line
        name = self._name()
        self._expect("over")
        base = self._name()
        self._expect("{")
        fibers: list[tuple[str, str, str]] = []
        maps: list[tuple[str, str]] = []
        rights: list[tuple[str, str]] = []
        while not self._at("}"):
            if self._at_keyword("fiber"):
                self.pos += 1
                b = self._name()
                self._expect("=")
                category = self._name()
                self._expect("marked")
                fibers.append((b, category, self._name()))
            elif self._at_keyword("map") or self._at_keyword("right"):
                target = maps if self.current.text == "map" else rights
                self.pos += 1
                u = self._name()
                self._expect("=")
                target.append((u, self._name()))
            else:
                raise self._error("'fiber', 'map', 'right' or '}'")
            self._expect(";")
        self._expect("}")
        return FamilyDecl(name, base, tuple(fibers), tuple(maps), tuple(rights), line)


def parse_source(text: str) -> list[Statement]:
    """Parse workspace source text.

    Raises:
        DSLSyntaxError: On malformed input
    """
    return WorkspaceParser(text).parse()


def _join(word: Word) -> str:
    return ".".join(word)


def serialize_statement(statement: Statement) -> str:
    """Canonical source text of one statement."""
    if isinstance(statement, CategoryDecl):
        lines = [f"category {statement.name} {{", f"  objects: {', '.join(statement.objects)};"]
        if statement.arrows:
            arrows = ", ".join(f"{u}: {a} -> {b}" for u, a, b in statement.arrows)
            lines.append(f"  arrows: {arrows};")
        if statement.relations:
            equations = ", ".join(f"{_join(lhs)} = {_join(rhs)}" for lhs, rhs in statement.relations)
            lines.append(f"  relations: {equations};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(statement, MarkingDecl):
        members = "".join(f" {_join(w)}," for w in statement.members).rstrip(",")
        return f"marking {statement.name} in {statement.category} {{{members} }}"
    if isinstance(statement, FunctorDecl):
        lines = [f"functor {statement.name} : {statement.source} -> {statement.target} {{"]
        lines += [f"  obj {a} -> {x};" for a, x in statement.objects]
        lines += [f"  arr {u} -> {_join(w)};" for u, w in statement.arrows]
        lines.append("}")
        return "\n".join(lines)
    lines = [f"family {statement.name} over {statement.base} {{"]
    lines += [f"  fiber {b} = {c} marked {w};" for b, c, w in statement.fibers]
    lines += [f"  map {u} = {F};" for u, F in statement.maps]
    lines += [f"  right {u} = {G};" for u, G in statement.rights]
    lines.append("}")
    return "\n".join(lines)


def serialize(statements: list[Statement]) -> str:
    """Canonical source text of a list of statements."""
    return "\n\n".join(serialize_statement(s) for s in statements) + "\n"
