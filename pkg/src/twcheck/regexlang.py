"""Regular expression ASTs, the concrete syntax, and the nested language family.

Grammar (whitespace ignored):

    expr   := alt
    alt    := cat ('|' cat)+ | cat
    rep    := atom ('*' | '+')?
    cat    := rep+
    atom   := LETTER | '(' expr ')'
    LETTER := [a-z] | [a-z][0-9]+
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, UnknownLetterError

_LETTER_RE = re.compile(r"[a-z][0-9]*")


class Alphabet:
    """Ordered set of letters; the order fixes every tie-break downstream.

    A letter is a lowercase name, optionally with a numeric suffix (a, b, x3).
    Words are strings; the letter rule is a prefix code over [a-z0-9], so any
    word string has a unique letter decomposition.
    """

    def __init__(self, letters):
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in alphabet: {letters}")
        for a in letters:
            if not _LETTER_RE.fullmatch(a):
                raise ValueError(f"bad letter name: {a!r}")
        self.letters = letters
        self.index = {a: i for i, a in enumerate(letters)}

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter):
        return letter in self.index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({list(self.letters)!r})"

    def lex_word(self, word: str) -> tuple[str, ...]:
        """Split a word string into letters; rejects anything outside the alphabet."""
        out = []
        pos = 0
        while pos < len(word):
            m = _LETTER_RE.match(word, pos)
            if not m:
                raise UnknownLetterError(f"cannot read a letter at {word[pos:]!r} in {word!r}")
            letter = m.group()
            if letter not in self.index:
                raise UnknownLetterError(f"letter {letter!r} not in alphabet {list(self.letters)}")
            out.append(letter)
            pos = m.end()
        return tuple(out)


class RegexAst:
    """Base class for regex AST nodes; all nodes are immutable and comparable."""

    __slots__ = ()


@dataclass(frozen=True)
class Lit(RegexAst):
    letter: str


@dataclass(frozen=True)
class Epsilon(RegexAst):
    pass


@dataclass(frozen=True)
class Concat(RegexAst):
    parts: tuple[RegexAst, ...]


@dataclass(frozen=True)
class Union(RegexAst):
    parts: tuple[RegexAst, ...]


@dataclass(frozen=True)
class Star(RegexAst):
    inner: RegexAst


@dataclass(frozen=True)
class Plus(RegexAst):
    inner: RegexAst


EPSILON = Epsilon()


def concat(parts) -> RegexAst:
    """Concatenation node; a single part collapses to itself."""
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty concatenation")
    return parts[0] if len(parts) == 1 else Concat(parts)


def union(parts) -> RegexAst:
    """Union node; a single branch collapses to itself."""
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty union")
    return parts[0] if len(parts) == 1 else Union(parts)


def letters_of(ast: RegexAst) -> frozenset[str]:
    """Set of letters occurring in the AST."""
    if isinstance(ast, Lit):
        return frozenset((ast.letter,))
    if isinstance(ast, Epsilon):
        return frozenset()
    if isinstance(ast, (Concat, Union)):
        out = frozenset()
        for p in ast.parts:
            out |= letters_of(p)
        return out
    return letters_of(ast.inner)


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str | None:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> RegexAst:
        ast = self.expr()
        if self._peek() is not None:
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return ast

    def expr(self) -> RegexAst:
        branches = [self.cat()]
        while self._peek() == "|":
            self.pos += 1
            branches.append(self.cat())
        return union(branches)

    def cat(self) -> RegexAst:
        parts = [self.rep()]
        while self._peek() not in (None, "|", ")"):
            parts.append(self.rep())
        return concat(parts)

    def rep(self) -> RegexAst:
        ast = self.atom()
        c = self._peek()
        if c == "*":
            self.pos += 1
            return Star(ast)
        if c == "+":
            self.pos += 1
            return Plus(ast)
        return ast

    def atom(self) -> RegexAst:
        c = self._peek()
        if c is None:
            raise ParseError("unexpected end of input", self.pos)
        if c == "(":
            self.pos += 1
            ast = self.expr()
            if self._peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return ast
        m = _LETTER_RE.match(self.text, self.pos)
        if not m:
            raise ParseError(f"unexpected {c!r}", self.pos)
        letter = m.group()
        if letter not in self.alphabet:
            raise ParseError(
                f"letter {letter!r} not in alphabet {list(self.alphabet.letters)}", self.pos
            )
        self.pos = m.end()
        return Lit(letter)


def parse_regex(text: str, alphabet: Alphabet) -> RegexAst:
    """Parse the concrete syntax into an AST; raises ParseError with a position."""
    return _Parser(text, alphabet).parse()


def print_regex(ast: RegexAst) -> str:
    """Canonical text form; parse_regex(print_regex(t)) == t.

    Epsilon has no concrete syntax and is rejected.
    """
    if isinstance(ast, Lit):
        return ast.letter
    if isinstance(ast, Epsilon):
        raise ValueError("epsilon has no concrete syntax")
    if isinstance(ast, (Star, Plus)):
        suffix = "*" if isinstance(ast, Star) else "+"
        inner = ast.inner
        if isinstance(inner, Lit):
            return print_regex(inner) + suffix
        return "(" + print_regex(inner) + ")" + suffix
    if isinstance(ast, Concat):
        out = []
        for p in ast.parts:
            s = print_regex(p)
            if isinstance(p, (Concat, Union)):
                s = "(" + s + ")"
            out.append(s)
        return " ".join(out)
    if isinstance(ast, Union):
        out = []
        for p in ast.parts:
            s = print_regex(p)
            if isinstance(p, Union):
                s = "(" + s + ")"
            out.append(s)
        return " | ".join(out)
    raise TypeError(f"not a regex AST node: {ast!r}")


def family_alphabet(m: int) -> Alphabet:
    """Alphabet of level m: a, b, c, d, then marker pairs x3, y3, ..., xm, ym."""
    if m < 2:
        raise ValueError(f"level must be >= 2, got {m}")
    letters = ["a", "b", "c", "d"]
    for k in range(3, m + 1):
        letters += [f"x{k}", f"y{k}"]
    return Alphabet(letters)


def build_ell(m: int) -> tuple[Alphabet, RegexAst]:
    """Level-m member of the nested language family.

    Level 2 is the classical four-letter language
    (a b+ | a c+)* a b+ d (b+ d | c+ d)*; level m wraps level m-1 between
    fresh markers xm, ym, with free prefix and suffix noise:
    (A_{m-1} | xm)* xm ell_{m-1} ym (A_{m-1} | ym)*.
    """
    alphabet = family_alphabet(m)
    a, b, c, d = Lit("a"), Lit("b"), Lit("c"), Lit("d")
    ast: RegexAst = Concat(
        (
            Star(Union((Concat((a, Plus(b))), Concat((a, Plus(c)))))),
            a,
            Plus(b),
            d,
            Star(Union((Concat((Plus(b), d)), Concat((Plus(c), d))))),
        )
    )
    for k in range(3, m + 1):
        prev_letters = family_alphabet(k - 1).letters
        xk, yk = Lit(f"x{k}"), Lit(f"y{k}")
        left = Star(Union(tuple(Lit(p) for p in prev_letters) + (xk,)))
        right = Star(Union(tuple(Lit(p) for p in prev_letters) + (yk,)))
        ast = Concat((left, xk, ast, yk, right))
    return alphabet, ast
