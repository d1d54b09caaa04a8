"""Independent reference implementations used only by the tests.

Nothing here imports from the package's matching or algebra internals beyond
plain data access (ASTs, tables, DFA fields), so agreement between the two
sides is meaningful evidence rather than a tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from twcheck import regexlang as rl

# -- Brzozowski derivative matcher -------------------------------------------
#
# Own canonical regex representation: unions are flattened, sorted, deduped;
# concatenations associate to the right; the constructors normalize so the
# set of derivatives of a fixed expression stays finite.


class ORe:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class OEmpty(ORe):
    pass


@dataclass(frozen=True, slots=True)
class OEps(ORe):
    pass


@dataclass(frozen=True, slots=True)
class OLit(ORe):
    letter: str


@dataclass(frozen=True, slots=True)
class OCat(ORe):
    head: ORe
    tail: ORe


@dataclass(frozen=True, slots=True)
class OUnion(ORe):
    parts: tuple[ORe, ...]  # sorted by repr, deduped, len >= 2


@dataclass(frozen=True, slots=True)
class OStar(ORe):
    inner: ORe


_EMPTY = OEmpty()
_EPS = OEps()


def ocat(a: ORe, b: ORe) -> ORe:
    if isinstance(a, OEmpty) or isinstance(b, OEmpty):
        return _EMPTY
    if isinstance(a, OEps):
        return b
    if isinstance(b, OEps):
        return a
    if isinstance(a, OCat):
        return ocat(a.head, ocat(a.tail, b))
    return OCat(a, b)


def ounion(a: ORe, b: ORe) -> ORe:
    parts: set[ORe] = set()
    for r in (a, b):
        if isinstance(r, OUnion):
            parts.update(r.parts)
        elif not isinstance(r, OEmpty):
            parts.add(r)
    if not parts:
        return _EMPTY
    if len(parts) == 1:
        return parts.pop()
    return OUnion(tuple(sorted(parts, key=repr)))


def ostar(r: ORe) -> ORe:
    if isinstance(r, (OEmpty, OEps)):
        return _EPS
    if isinstance(r, OStar):
        return r
    return OStar(r)


def from_ast(ast: rl.RegexAst) -> ORe:
    """Translate the package AST into the oracle representation."""
    if isinstance(ast, rl.Lit):
        return OLit(ast.letter)
    if isinstance(ast, rl.Epsilon):
        return _EPS
    if isinstance(ast, rl.Concat):
        out: ORe = _EPS
        for p in reversed(ast.parts):
            out = ocat(from_ast(p), out)
        return out
    if isinstance(ast, rl.Union):
        out = _EMPTY
        for p in ast.parts:
            out = ounion(out, from_ast(p))
        return out
    if isinstance(ast, rl.Star):
        return ostar(from_ast(ast.inner))
    if isinstance(ast, rl.Plus):
        inner = from_ast(ast.inner)
        return ocat(inner, ostar(inner))
    raise TypeError(f"unknown node {ast!r}")


@lru_cache(maxsize=None)
def nullable(r: ORe) -> bool:
    if isinstance(r, (OEps, OStar)):
        return True
    if isinstance(r, (OEmpty, OLit)):
        return False
    if isinstance(r, OCat):
        return nullable(r.head) and nullable(r.tail)
    return any(nullable(p) for p in r.parts)


@lru_cache(maxsize=None)
def derivative(r: ORe, a: str) -> ORe:
    if isinstance(r, (OEmpty, OEps)):
        return _EMPTY
    if isinstance(r, OLit):
        return _EPS if r.letter == a else _EMPTY
    if isinstance(r, OCat):
        d = ocat(derivative(r.head, a), r.tail)
        if nullable(r.head):
            d = ounion(d, derivative(r.tail, a))
        return d
    if isinstance(r, OUnion):
        out: ORe = _EMPTY
        for p in r.parts:
            out = ounion(out, derivative(p, a))
        return out
    return ocat(derivative(r.inner, a), r)


def matches(r: ORe, word: list[str] | tuple[str, ...]) -> bool:
    for a in word:
        r = derivative(r, a)
        if isinstance(r, OEmpty):
            return False
    return nullable(r)


def derivative_automaton(
    r: ORe, letters: tuple[str, ...]
) -> tuple[int, int, set[int], list[list[int]]]:
    """Explore all derivatives; complete by construction (OEmpty is the sink)."""
    index: dict[ORe, int] = {r: 0}
    order = [r]
    delta: list[list[int]] = []
    qi = 0
    while qi < len(order):
        cur = order[qi]
        qi += 1
        row = []
        for a in letters:
            d = derivative(cur, a)
            if d not in index:
                index[d] = len(order)
                order.append(d)
            row.append(index[d])
        delta.append(row)
    accepting = {i for i, q in enumerate(order) if nullable(q)}
    return len(order), 0, accepting, delta


def moore_minimize_count(
    n: int, initial: int, accepting: set[int], delta: list[list[int]]
) -> int:
    """Number of states of the minimal complete DFA, by partition refinement
    over reachable states only."""
    reach = {initial}
    stack = [initial]
    while stack:
        q = stack.pop()
        for r in delta[q]:
            if r not in reach:
                reach.add(r)
                stack.append(r)
    color = {q: (q in accepting) for q in reach}
    while True:
        sig = {
            q: (color[q], tuple(color[delta[q][a]] for a in range(len(delta[0]))))
            for q in reach
        }
        palette = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
        new_color = {q: palette[sig[q]] for q in reach}
        if len(set(new_color.values())) == len(set(color.values())):
            return len(set(new_color.values()))
        color = new_color


def derivative_dfa_state_count(ast: rl.RegexAst, alphabet: rl.Alphabet) -> int:
    r = from_ast(ast)
    n, init, acc, delta = derivative_automaton(r, alphabet.letters)
    return moore_minimize_count(n, init, acc, delta)


# -- word-BFS transition semigroup -------------------------------------------


def word_bfs_semigroup(dfa) -> dict[tuple[int, ...], str]:
    """All state transformations induced by nonempty words, with the first
    witness found in shortest-lex BFS order, by direct word extension."""
    letters = dfa.alphabet.letters
    letter_maps = {
        a: tuple(dfa.delta[s][ai] for s in range(dfa.states))
        for ai, a in enumerate(letters)
    }
    seen: dict[tuple[int, ...], str] = {}
    queue: list[tuple[int, ...]] = []
    for a in letters:
        t = letter_maps[a]
        if t not in seen:
            seen[t] = a
            queue.append(t)
    qi = 0
    while qi < len(queue):
        t = queue[qi]
        qi += 1
        for a in letters:
            la = letter_maps[a]
            u = tuple(la[t[s]] for s in range(dfa.states))
            if u not in seen:
                seen[u] = seen[t] + a
                queue.append(u)
    return seen


def contexts_separate_all(dfa, transformations) -> bool:
    """Each pair of distinct transformations must be told apart by some
    context (u, v): u t v sends the initial state to an accepting state for
    exactly one of the two. Contexts range over all induced transformations
    plus the identity, which is enough once the set is closed."""
    n = dfa.states
    ident = tuple(range(n))
    ts = [tuple(int(v) for v in row) for row in transformations]
    contexts = ts + [ident]
    q0 = dfa.initial
    acc = dfa.accepting

    def accepts(tu, t, tv) -> bool:
        return tv[t[tu[q0]]] in acc

    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if not any(
                accepts(tu, ts[i], tv) != accepts(tu, ts[j], tv)
                for tu in contexts
                for tv in contexts
            ):
                return False
    return True


# -- factorial-power omega oracle --------------------------------------------


def _power(s, x: int, k: int) -> int:
    """x^k by binary exponentiation over the semigroup product, k >= 1."""
    acc = None
    base = x
    while k:
        if k & 1:
            acc = base if acc is None else s.product(acc, base)
        base = s.product(base, base)
        k >>= 1
    return acc


def factorial_omega(s, x: int) -> int:
    """x to the (n+1)! power, n the order: always the idempotent power."""
    return _power(s, x, math.factorial(s.order + 1))


def factorial_omega_minus_one(s, x: int) -> int:
    return _power(s, x, math.factorial(s.order + 1) - 1)
