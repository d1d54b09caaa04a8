"""Complete DFAs: compilation from regex ASTs, minimization, and JSON forms."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ResourceLimitError, UnknownLetterError
from .regexlang import Alphabet, Concat, Epsilon, Lit, Plus, RegexAst, Star, Union


@dataclass(frozen=True)
class Dfa:
    """Deterministic, complete automaton over an ordered alphabet.

    `delta` is row-major: delta[state][letter_index]. Completeness (every
    state has a successor for every letter) is checked at construction.
    """

    alphabet: Alphabet
    states: int
    initial: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.delta) != self.states:
            raise ValueError("delta must have one row per state")
        for row in self.delta:
            if len(row) != len(self.alphabet):
                raise ValueError("delta rows must cover the whole alphabet")
            for t in row:
                if not 0 <= t < self.states:
                    raise ValueError(f"transition target {t} out of range")
        if not 0 <= self.initial < self.states:
            raise ValueError("initial state out of range")
        if not all(0 <= q < self.states for q in self.accepting):
            raise ValueError("accepting state out of range")

    def step(self, state: int, letter: str) -> int:
        try:
            return self.delta[state][self.alphabet.index[letter]]
        except KeyError:
            raise UnknownLetterError(
                f"letter {letter!r} not in alphabet {list(self.alphabet.letters)}"
            ) from None

    def accepts(self, word: str) -> bool:
        state = self.initial
        for letter in self.alphabet.lex_word(word):
            state = self.delta[state][self.alphabet.index[letter]]
        return state in self.accepting

    def to_json_dict(self) -> dict:
        return {
            "alphabet": list(self.alphabet.letters),
            "states": self.states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "delta": [list(row) for row in self.delta],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, d: dict) -> "Dfa":
        return cls(
            alphabet=Alphabet(d["alphabet"]),
            states=int(d["states"]),
            initial=int(d["initial"]),
            accepting=frozenset(int(q) for q in d["accepting"]),
            delta=tuple(tuple(int(t) for t in row) for row in d["delta"]),
        )


class _Nfa:
    """Thompson-style NFA under construction: epsilon edges plus letter edges."""

    def __init__(self):
        self.eps: list[set[int]] = []
        self.edges: list[dict[str, set[int]]] = []

    def new_state(self) -> int:
        self.eps.append(set())
        self.edges.append({})
        return len(self.eps) - 1

    def add_eps(self, src: int, dst: int):
        self.eps[src].add(dst)

    def add_edge(self, src: int, letter: str, dst: int):
        self.edges[src].setdefault(letter, set()).add(dst)


def _thompson(ast: RegexAst, nfa: _Nfa) -> tuple[int, int]:
    if isinstance(ast, Lit):
        s, f = nfa.new_state(), nfa.new_state()
        nfa.add_edge(s, ast.letter, f)
        return s, f
    if isinstance(ast, Epsilon):
        s, f = nfa.new_state(), nfa.new_state()
        nfa.add_eps(s, f)
        return s, f
    if isinstance(ast, Concat):
        s, f = _thompson(ast.parts[0], nfa)
        for part in ast.parts[1:]:
            s2, f2 = _thompson(part, nfa)
            nfa.add_eps(f, s2)
            f = f2
        return s, f
    if isinstance(ast, Union):
        s, f = nfa.new_state(), nfa.new_state()
        for part in ast.parts:
            s2, f2 = _thompson(part, nfa)
            nfa.add_eps(s, s2)
            nfa.add_eps(f2, f)
        return s, f
    if isinstance(ast, Star):
        s2, f2 = _thompson(ast.inner, nfa)
        s, f = nfa.new_state(), nfa.new_state()
        nfa.add_eps(s, s2)
        nfa.add_eps(s, f)
        nfa.add_eps(f2, s2)
        nfa.add_eps(f2, f)
        return s, f
    if isinstance(ast, Plus):
        s2, f2 = _thompson(ast.inner, nfa)
        f = nfa.new_state()
        nfa.add_eps(f2, s2)
        nfa.add_eps(f2, f)
        return s2, f
    raise TypeError(f"not a regex AST node: {ast!r}")


def _eps_closure(nfa: _Nfa, states: frozenset[int]) -> frozenset[int]:
    out = set(states)
    stack = list(states)
    while stack:
        q = stack.pop()
        for r in nfa.eps[q]:
            if r not in out:
                out.add(r)
                stack.append(r)
    return frozenset(out)


def _subset_construction(
    nfa: _Nfa, start: int, final: int, alphabet: Alphabet, state_cap: int
) -> tuple[int, int, set[int], list[list[int]]]:
    init = _eps_closure(nfa, frozenset((start,)))
    index = {init: 0}
    order = [init]
    delta: list[list[int]] = []
    qi = 0
    while qi < len(order):
        cur = order[qi]
        qi += 1
        row = []
        for letter in alphabet.letters:
            nxt = set()
            for q in cur:
                nxt.update(nfa.edges[q].get(letter, ()))
            # the empty successor set is the sink; kept as a real state so the
            # automaton stays complete
            closed = _eps_closure(nfa, frozenset(nxt))
            if closed not in index:
                if len(order) >= state_cap:
                    raise ResourceLimitError(
                        f"subset construction exceeded the state cap ({state_cap})"
                    )
                index[closed] = len(order)
                order.append(closed)
            row.append(index[closed])
        delta.append(row)
    accepting = {i for i, subset in enumerate(order) if final in subset}
    return len(order), 0, accepting, delta


def _hopcroft(n: int, n_letters: int, delta: list[list[int]], accepting: set[int]) -> list[int]:
    """Return the block index of each state in the coarsest congruence."""
    inv = [[[] for _ in range(n)] for _ in range(n_letters)]
    for s in range(n):
        for a in range(n_letters):
            inv[a][delta[s][a]].append(s)
    blocks: list[set[int]] = []
    acc = set(accepting)
    rest = set(range(n)) - acc
    for grp in (acc, rest):
        if grp:
            blocks.append(grp)
    block_of = [0] * n
    for bi, grp in enumerate(blocks):
        for s in grp:
            block_of[s] = bi
    work: set[int] = set(range(len(blocks)))
    while work:
        ai = work.pop()
        splitter = list(blocks[ai])
        for a in range(n_letters):
            x = set()
            for t in splitter:
                x.update(inv[a][t])
            touched: dict[int, set[int]] = {}
            for s in x:
                touched.setdefault(block_of[s], set()).add(s)
            for bi, inter in touched.items():
                blk = blocks[bi]
                if len(inter) == len(blk):
                    continue
                rest_part = blk - inter
                blocks[bi] = inter
                new_bi = len(blocks)
                blocks.append(rest_part)
                for s in rest_part:
                    block_of[s] = new_bi
                if bi in work:
                    work.add(new_bi)
                else:
                    work.add(bi if len(inter) <= len(rest_part) else new_bi)
    return block_of


def _canonical_renumber(
    n: int, n_letters: int, delta: list[list[int]], initial: int, accepting: set[int]
) -> tuple[int, int, set[int], list[list[int]]]:
    """Breadth-first renumbering from the initial state in letter order."""
    order = [initial]
    seen = {initial: 0}
    qi = 0
    while qi < len(order):
        s = order[qi]
        qi += 1
        for a in range(n_letters):
            t = delta[s][a]
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
    new_delta = [[seen[delta[s][a]] for a in range(n_letters)] for s in order]
    new_acc = {seen[q] for q in accepting if q in seen}
    return len(order), 0, new_acc, new_delta


def compile_min_dfa(ast: RegexAst, alphabet: Alphabet, state_cap: int = 100_000) -> Dfa:
    """Minimal complete DFA of the AST's language, in canonical state order.

    The canonical order is breadth-first from the initial state following
    letters in alphabet order, so equal languages compile to identical values.
    """
    nfa = _Nfa()
    start, final = _thompson(ast, nfa)
    n, init, accepting, delta = _subset_construction(nfa, start, final, alphabet, state_cap)
    block_of = _hopcroft(n, len(alphabet), delta, accepting)
    n_blocks = max(block_of) + 1
    b_delta = [[0] * len(alphabet) for _ in range(n_blocks)]
    for s in range(n):
        for a in range(len(alphabet)):
            b_delta[block_of[s]][a] = block_of[delta[s][a]]
    b_acc = {block_of[q] for q in accepting}
    n2, init2, acc2, delta2 = _canonical_renumber(
        n_blocks, len(alphabet), b_delta, block_of[init], b_acc
    )
    return Dfa(
        alphabet=alphabet,
        states=n2,
        initial=init2,
        accepting=frozenset(acc2),
        delta=tuple(tuple(row) for row in delta2),
    )
