"""Free-group words, a text parser for finite presentations and the group catalog.

Words are stored as tuples of signed generator indices: ``k`` stands for the
k-th generator (1-based) and ``-k`` for its inverse.  So with generators
``a, b`` the word ``a b^-1 a`` is ``(1, -2, 1)``.

Presentation grammar::

    presentation := '<' names '|' relators '>'
    names        := ident (',' ident)*
    relators     := chain (',' chain)*
    chain        := product ('=' product)*
    product      := factor ('*' factor)* | '1'
    factor       := (ident | '(' product ')') ('^' int)?

A chain ``r = s = t`` folds into the relators ``r s^-1`` and ``s t^-1``; when
the last member is ``1`` this becomes ``r s^-1, s`` as in ``a^2=b^4=1``.
Juxtaposition of single-letter generators (``abab``) is also accepted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a generator index")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the free group."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def of(cls, *letters: int) -> "Word":
        return cls(tuple(letters))

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def format(self, names: Sequence[str]) -> str:
        """Render with ``*``-joined powers, e.g. ``a^2*b^-1``; identity is ``1``."""
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            x = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == x:
                j += 1
            n = j - i
            name = names[abs(x) - 1]
            power = n if x > 0 else -n
            parts.append(name if power == 1 else f"{name}^{power}")
            i = j
        return "*".join(parts)

    def short_label(self, names: Sequence[str]) -> str:
        """Compact label in the style ``e``, ``a``, ``ab``, ``ab^-1``."""
        if not self.letters:
            return "e"
        return self.format(names).replace("*", "")


def word_multiply(u: Word, v: Word) -> Word:
    return u * v


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        if not names:
            raise ValueError("a presentation needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        rels = tuple(r if isinstance(r, Word) else Word(tuple(r)) for r in self.relators)
        for r in rels:
            if any(abs(x) > len(names) for x in r):
                raise ValueError(f"relator {r.letters} uses an undeclared generator")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", rels)

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def generators(self) -> list[Word]:
        return [Word.of(i + 1) for i in range(self.generator_count)]

    def word(self, text: str) -> Word:
        """Parse a single word over this presentation's generators."""
        parser = _Parser(text)
        parser.names = {n: i + 1 for i, n in enumerate(self.generator_names)}
        w = parser.product()
        parser.expect_end()
        return w

    def serialize(self) -> str:
        rels = ", ".join(r.format(self.generator_names) for r in self.relators)
        return f"< {', '.join(self.generator_names)} | {rels} >"

    def __str__(self):
        return self.serialize()


@dataclass(frozen=True)
class SubgroupSpec:
    generators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self,
            "generators",
            tuple(g if isinstance(g, Word) else Word(tuple(g)) for g in self.generators),
        )


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[<>|,=*^()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if not m:
                rest = text[pos:]
                if rest.strip():
                    raise PresentationSyntaxError(
                        f"unexpected character {rest.strip()[0]!r}", text, pos + len(rest) - len(rest.lstrip())
                    )
                break
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0
        self.names: dict[str, int] = {}

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message: str) -> PresentationSyntaxError:
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        return PresentationSyntaxError(message, self.text, pos)

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {value or kind}, found end of input")
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            raise self.error(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    def expect_end(self):
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()[1]!r}")

    def presentation(self) -> Presentation:
        self.take("<")
        names: list[str] = []
        if self.at("|"):
            raise self.error("empty generator list")
        while True:
            tok = self.take(kind="ident")
            if tok[1] in self.names:
                raise PresentationSyntaxError(f"duplicate generator {tok[1]!r}", self.text, tok[2])
            names.append(tok[1])
            self.names[tok[1]] = len(names)
            if self.at(","):
                self.take(",")
                continue
            break
        self.take("|")
        relators: list[Word] = []
        if not self.at(">"):
            while True:
                relators.extend(self.chain())
                if self.at(","):
                    self.take(",")
                    continue
                break
        self.take(">")
        self.expect_end()
        relators = [r for r in relators if not r.is_identity()]
        return Presentation(tuple(names), tuple(relators))

    def chain(self) -> list[Word]:
        members = [self.product()]
        while self.at("="):
            self.take("=")
            members.append(self.product())
        if len(members) == 1:
            return members
        return [members[i] * members[i + 1].inverse() for i in range(len(members) - 1)]

    def product(self) -> Word:
        tok = self.peek()
        if tok is not None and tok[0] == "int" and tok[1] == "1":
            self.take(kind="int")
            return Word()
        w = self.factor()
        while True:
            if self.at("*"):
                self.take("*")
                w = w * self.factor()
                continue
            tok = self.peek()
            # juxtaposition: ``ab`` or ``a(ab)^2``
            if tok is not None and (tok[0] == "ident" or (tok[0] == "op" and tok[1] == "(")):
                w = w * self.factor()
                continue
            return w

    def factor(self) -> Word:
        tok = self.peek()
        if tok is None:
            raise self.error("expected a generator, found end of input")
        if tok[0] == "op" and tok[1] == "(":
            self.take("(")
            base = self.product()
            self.take(")")
        elif tok[0] == "ident":
            self.take(kind="ident")
            base = self._ident_word(tok)
        else:
            raise self.error(f"expected a generator, found {tok[1]!r}")
        head = Word()
        if tok[0] == "ident" and len(base.letters) > 1 and tok[1] not in self.names:
            # in ``abab^-1`` the exponent binds to the final letter only
            head, base = Word(base.letters[:-1]), Word(base.letters[-1:])
        if self.at("^"):
            self.take("^")
            power = int(self.take(kind="int")[1])
            base = base**power
        return head * base

    def _ident_word(self, tok: tuple[str, str, int]) -> Word:
        name = tok[1]
        if name in self.names:
            return Word.of(self.names[name])
        # allow juxtaposed single-letter names such as ``abAB``
        if all(ch in self.names for ch in name):
            return Word(tuple(self.names[ch] for ch in name))
        raise PresentationSyntaxError(f"undeclared generator {name!r}", self.text, tok[2])


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).presentation()


def parse_word(text: str, pres: Presentation) -> Word:
    return pres.word(text)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    presentation: Presentation
    eta_oracle: tuple[int, ...] | None = None
    description: str = ""
    meridian: Word | None = field(default=None, compare=False)


# The knot groups use two-bridge presentations <a, b | a w = w b>; the surgery
# groups add the preferred longitude that commutes with the meridian a.
_CATALOG_SOURCES = {
    "trefoil": (
        "< a, b | a*b*a = b*a*b >",
        None,
        "trefoil knot complement group",
    ),
    "fig8": (
        "< a, b | a*b*a^-1*b^-1*a = b*a^-1*b^-1*a*b >",
        None,
        "figure-eight knot complement group",
    ),
    "trefoil-0surgery": (
        "< a, b | a*b*a = b*a*b, b*a^2*b*a^-4 >",
        (1, 1, 2, 2, 1, 5, 3, 2, 4, 1, 1, 12, 3, 3, 4, 3, 1, 17, 3, 2, 8, 1, 1, 27, 2),
        "0-surgery on the trefoil",
    ),
    "fig8-0surgery": (
        "< a, b | a*b*a^-1*b^-1*a = b*a^-1*b^-1*a*b, a*b^-1*a^-1*b^2*a^-1*b^-1*a >",
        (1, 1, 1, 2, 2, 5, 1, 2, 2, 4, 3, 17, 1, 1, 2, 3, 1, 6, 3, 6, 1, 3, 1, 43),
        "0-surgery on the figure-eight knot",
    ),
    "a6-demo": (
        "< a, b | a^2 = b^4 = (a*b)^5 = (a*b^2)^5 = 1 >",
        None,
        "two-generator presentation of A6",
    ),
}


def catalog_names() -> list[str]:
    return sorted(_CATALOG_SOURCES)


def catalog_lookup(name: str) -> CatalogEntry:
    try:
        text, eta, description = _CATALOG_SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown group {name!r}; known: {', '.join(catalog_names())}") from None
    return CatalogEntry(name, parse_presentation(text), eta, description)
