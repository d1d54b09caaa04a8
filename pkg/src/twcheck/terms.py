"""Omega-terms: DAG nodes, a concrete syntax, and the two identity ladders.

Grammar (whitespace ignored):

    term   := factor+
    factor := atom ('^w' | '^(w-1)')?
    atom   := IDENT | '(' term ')'

Nodes compare by object identity; builders share subterms, so the ladder
terms stay polynomial-sized as DAGs even though their expansions grow
exponentially. Use `term_equal` for structural comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")


class OmegaTerm:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class Var(OmegaTerm):
    name: str


@dataclass(frozen=True, eq=False)
class Concat(OmegaTerm):
    parts: tuple[OmegaTerm, ...]


@dataclass(frozen=True, eq=False)
class Omega(OmegaTerm):
    inner: OmegaTerm


@dataclass(frozen=True, eq=False)
class OmegaMinusOne(OmegaTerm):
    inner: OmegaTerm


def tconcat(parts) -> OmegaTerm:
    parts = tuple(parts)
    if not parts:
        raise ValueError("empty concatenation")
    return parts[0] if len(parts) == 1 else Concat(parts)


def variables_of(*terms: OmegaTerm) -> frozenset[str]:
    out: set[str] = set()
    seen: set[int] = set()

    def walk(t: OmegaTerm):
        if id(t) in seen:
            return
        seen.add(id(t))
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, Concat):
            for p in t.parts:
                walk(p)
        else:
            walk(t.inner)

    for t in terms:
        walk(t)
    return frozenset(out)


def omega_only_variables(*terms: OmegaTerm) -> frozenset[str]:
    """Variables whose every occurrence is an immediate child of an omega
    power; over such a variable, the term value depends only on x^omega, so
    searches may restrict it to idempotents."""
    occurring: set[str] = set()
    bad: set[str] = set()
    seen: set[tuple[int, bool]] = set()

    def walk(t: OmegaTerm, immediate: bool):
        key = (id(t), immediate)
        if key in seen:
            return
        seen.add(key)
        if isinstance(t, Var):
            occurring.add(t.name)
            if not immediate:
                bad.add(t.name)
        elif isinstance(t, Omega):
            walk(t.inner, isinstance(t.inner, Var))
        elif isinstance(t, OmegaMinusOne):
            walk(t.inner, False)
        else:
            for p in t.parts:
                walk(p, False)

    for t in terms:
        walk(t, False)
    return frozenset(occurring - bad)


def _term_key(t: OmegaTerm, memo: dict[int, tuple]) -> tuple:
    """Structural key computed bottom-up; linear in DAG size."""
    k = memo.get(id(t))
    if k is not None:
        return k
    if isinstance(t, Var):
        k = ("v", t.name)
    elif isinstance(t, Concat):
        k = ("c",) + tuple(_term_key(p, memo) for p in t.parts)
    elif isinstance(t, Omega):
        k = ("w", _term_key(t.inner, memo))
    else:
        k = ("w1", _term_key(t.inner, memo))
    memo[id(t)] = k
    return k


def term_equal(a: OmegaTerm, b: OmegaTerm) -> bool:
    """Structural equality of expansions (shared subterms handled once)."""
    memo: dict[int, tuple] = {}
    return _term_key(a, memo) == _term_key(b, memo)


class _TermParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def parse(self) -> OmegaTerm:
        t = self.term()
        if self._peek() is not None:
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return t

    def term(self) -> OmegaTerm:
        parts = [self.factor()]
        while self._peek() not in (None, ")"):
            parts.append(self.factor())
        return tconcat(parts)

    def factor(self) -> OmegaTerm:
        atom = self.atom()
        if self._peek() != "^":
            return atom
        self.pos += 1
        c = self._peek()
        if c == "w":
            self.pos += 1
            return Omega(atom)
        if c == "(":
            mark = self.pos
            if self.text[self.pos : self.pos + 5] == "(w-1)":
                self.pos += 5
                return OmegaMinusOne(atom)
            raise ParseError("expected 'w' or '(w-1)' after '^'", mark)
        raise ParseError("expected 'w' or '(w-1)' after '^'", self.pos)

    def atom(self) -> OmegaTerm:
        c = self._peek()
        if c is None:
            raise ParseError("unexpected end of input", self.pos)
        if c == "(":
            self.pos += 1
            t = self.term()
            if self._peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return t
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError(f"unexpected {c!r}", self.pos)
        self.pos = m.end()
        return Var(m.group())


def parse_term(text: str) -> OmegaTerm:
    return _TermParser(text).parse()


def print_term(t: OmegaTerm) -> str:
    """Canonical text; parse_term(print_term(t)) is structurally equal to t."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, (Omega, OmegaMinusOne)):
        suffix = "^w" if isinstance(t, Omega) else "^(w-1)"
        inner = t.inner
        if isinstance(inner, Var):
            return print_term(inner) + suffix
        return "(" + print_term(inner) + ")" + suffix
    if isinstance(t, Concat):
        out = []
        for p in t.parts:
            s = print_term(p)
            if isinstance(p, Concat):
                s = "(" + s + ")"
            out.append(s)
        return " ".join(out)
    raise TypeError(f"not an omega-term node: {t!r}")


def parse_identity(text: str) -> tuple[OmegaTerm, OmegaTerm]:
    """One 'lhs = rhs' line."""
    if text.count("=") != 1:
        raise ParseError("an identity needs exactly one '='", text.find("=") + 1)
    lhs_text, rhs_text = text.split("=")
    eq = text.index("=")
    lhs = parse_term(lhs_text)
    try:
        rhs = parse_term(rhs_text)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" (at", 1)[0], eq + 1 + exc.position) from None
    return lhs, rhs


def build_uv(m: int) -> tuple[OmegaTerm, OmegaTerm]:
    """The U/V ladder over s, t, x1..xm, y1..ym, as a shared DAG.

    Level 1: U = (s x1)^w s (y1 t)^w and V = (s x1)^w t (y1 t)^w.
    Level k wraps level k-1:
    U_k = (U x_k)^w U (y_k U)^w, V_k = (U x_k)^w V (y_k U)^w with U = U_{k-1}.
    """
    if m < 1:
        raise ValueError(f"ladder level must be >= 1, got {m}")
    s, t = Var("s"), Var("t")
    x1, y1 = Var("x1"), Var("y1")
    left = Omega(Concat((s, x1)))
    right = Omega(Concat((y1, t)))
    u: OmegaTerm = Concat((left, s, right))
    v: OmegaTerm = Concat((left, t, right))
    for k in range(2, m + 1):
        xk, yk = Var(f"x{k}"), Var(f"y{k}")
        left = Omega(Concat((u, xk)))
        right = Omega(Concat((yk, u)))
        u, v = Concat((left, u, right)), Concat((left, v, right))
    return u, v


def build_pq(m: int) -> tuple[OmegaTerm, OmegaTerm]:
    """The P/Q ladder over e, f, s, t, x1..xm, y1..ym, as a shared DAG.

    Level 1 brackets the U/V shape with idempotent padding:
    P = (e^w s f^w x1)^w e^w s f^w (y1 e^w t f^w)^w and Q swaps the middle s
    for t. Level k wraps level k-1 exactly like the U/V ladder, with P in
    both flanks.
    """
    if m < 1:
        raise ValueError(f"ladder level must be >= 1, got {m}")
    e, f, s, t = Var("e"), Var("f"), Var("s"), Var("t")
    x1, y1 = Var("x1"), Var("y1")
    ew, fw = Omega(e), Omega(f)
    left = Omega(Concat((ew, s, fw, x1)))
    right = Omega(Concat((y1, ew, t, fw)))
    p: OmegaTerm = Concat((left, ew, s, fw, right))
    q: OmegaTerm = Concat((left, ew, t, fw, right))
    for k in range(2, m + 1):
        xk, yk = Var(f"x{k}"), Var(f"y{k}")
        left = Omega(Concat((p, xk)))
        right = Omega(Concat((yk, p)))
        p, q = Concat((left, p, right)), Concat((left, q, right))
    return p, q


_BUILTIN_RE = re.compile(r"([UVPQ])([0-9]+)")


def build_named(name: str) -> OmegaTerm | None:
    """Expand a ladder name (U1, V2, P3, Q1, ...); None when not a name."""
    m = _BUILTIN_RE.fullmatch(name.strip())
    if not m:
        return None
    kind, level = m.group(1), int(m.group(2))
    if level < 1:
        return None
    if kind in ("U", "V"):
        pair = build_uv(level)
        return pair[0] if kind == "U" else pair[1]
    pair = build_pq(level)
    return pair[0] if kind == "P" else pair[1]
