"""Finite semigroups: transition semigroups of complete DFAs, omega powers,
local monoids, content functions, and embeddings."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import DEFAULT_ORDER_CAP, DEFAULT_TABLE_CAP
from .dfa import Dfa
from .errors import NotAMonoidError, ResourceLimitError
from .regexlang import Alphabet


class FiniteSemigroup:
    """Finite semigroup on carrier {0, ..., n-1}.

    Backed by a full multiplication table, by state transformations (for
    transition semigroups), or both. `generators` maps letters to elements;
    when present, every element is a product of generator images and carries
    a witness word (shortest, ties broken lexicographically in alphabet
    order). `identity` is the index of the two-sided identity if one exists.
    """

    def __init__(
        self,
        *,
        order: int,
        table: np.ndarray | None = None,
        transformations: np.ndarray | None = None,
        generators: dict[str, int] | None = None,
        identity: int | None = None,
        witnesses: tuple[str, ...] | None = None,
        alphabet: Alphabet | None = None,
    ):
        if table is None and transformations is None:
            raise ValueError("need a table or transformations")
        self.order = order
        self.table = None if table is None else np.ascontiguousarray(table, dtype=np.int32)
        self.transformations = (
            None
            if transformations is None
            else np.ascontiguousarray(transformations, dtype=np.int32)
        )
        self.generators = dict(generators) if generators else None
        self.identity = identity
        self.witnesses = tuple(witnesses) if witnesses is not None else None
        self.alphabet = alphabet
        if self.table is not None and self.table.shape != (order, order):
            raise ValueError("table shape must be (order, order)")
        if self.table is not None and (
            self.table.min(initial=0) < 0 or self.table.max(initial=-1) >= order
        ):
            raise ValueError("table entries out of range")
        if self.generators is not None:
            for a, x in self.generators.items():
                if not 0 <= x < order:
                    raise ValueError(f"generator {a!r} -> {x} out of range")
        if self.witnesses is not None and len(self.witnesses) != order:
            raise ValueError("need one witness word per element")
        self._trans_index: dict[bytes, int] | None = None
        self._omega_tables: tuple[np.ndarray, np.ndarray] | None = None
        self._idempotents: tuple[int, ...] | None = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_table(
        cls,
        table,
        generators: dict[str, int] | None = None,
        identity: int | None | str = "auto",
        alphabet: Alphabet | None = None,
    ) -> "FiniteSemigroup":
        """Build from an explicit table; closure under the table is implied.

        With `identity="auto"` the two-sided identity is detected by scanning.
        When `generators` is given, every element must be reachable from the
        generator images; witness words are computed by BFS.
        """
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if identity == "auto":
            identity = None
            for e in range(n):
                if all(table[e, x] == x and table[x, e] == x for x in range(n)):
                    identity = e
                    break
        witnesses = None
        if alphabet is None and generators:
            alphabet = Alphabet(generators.keys())
        if generators:
            witnesses = _bfs_witnesses(table, generators, alphabet, identity)
        s = cls(
            order=n,
            table=table,
            generators=generators,
            identity=identity,
            witnesses=witnesses,
            alphabet=alphabet,
        )
        return s

    # -- basic structure --------------------------------------------------

    def product(self, x: int, y: int) -> int:
        if self.table is not None:
            return int(self.table[x, y])
        t = self.transformations
        u = t[y][t[x]]  # x then y
        return self._index_of_transformation(u.tobytes())

    def _index_of_transformation(self, key: bytes) -> int:
        if self._trans_index is None:
            self._trans_index = {
                self.transformations[i].tobytes(): i for i in range(self.order)
            }
        return self._trans_index[key]

    def eval_word(self, word) -> int:
        """Image of a word (string or letter sequence) under the generator map."""
        if self.generators is None:
            raise ValueError("semigroup has no generator map")
        letters = self.alphabet.lex_word(word) if isinstance(word, str) else tuple(word)
        if not letters:
            if self.identity is None:
                raise ValueError("empty word needs an identity element")
            return self.identity
        x = self.generators[letters[0]]
        for a in letters[1:]:
            x = self.product(x, self.generators[a])
        return x

    def require_table(self, table_cap: int = DEFAULT_TABLE_CAP) -> np.ndarray:
        if self.table is not None:
            return self.table
        if self.order > table_cap:
            raise ResourceLimitError(
                f"order {self.order} exceeds the table cap ({table_cap})"
            )
        t = self.transformations
        n = self.order
        table = np.empty((n, n), dtype=np.int32)
        for x in range(n):
            for y in range(n):
                table[x, y] = self._index_of_transformation(t[y][t[x]].tobytes())
        self.table = table
        return table

    def idempotents(self) -> tuple[int, ...]:
        if self._idempotents is None:
            self._idempotents = tuple(
                x for x in range(self.order) if self.product(x, x) == x
            )
        return self._idempotents

    def index_period(self, x: int) -> tuple[int, int]:
        """Index i and period p of x: the powers x^1, ..., x^{i+p-1} are
        distinct and x^{i+p} = x^i."""
        seen: dict[int, int] = {}
        cur = x
        k = 1
        while cur not in seen:
            seen[cur] = k
            cur = self.product(cur, x)
            k += 1
        i = seen[cur]
        return i, k - i

    def power(self, x: int, k: int) -> int:
        if k < 1:
            raise ValueError("powers start at 1")
        cur = x
        for _ in range(k - 1):
            cur = self.product(cur, x)
        return cur

    def omega_power(self, x: int) -> int:
        """The unique idempotent power of x."""
        i, p = self.index_period(x)
        k = ((i + p - 1) // p) * p  # least multiple of p that is >= i
        return self.power(x, k)

    def omega_minus_one(self, x: int) -> int:
        """The element z of the cyclic part of x with z * x = omega(x)."""
        i, p = self.index_period(x)
        lo = max(i + 1, 2)
        k = ((lo + p - 1) // p) * p
        return self.power(x, k - 1)

    def omega_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-element omega and omega-minus-one lookup tables."""
        if self._omega_tables is None:
            om = np.empty(self.order, dtype=np.int32)
            om1 = np.empty(self.order, dtype=np.int32)
            for x in range(self.order):
                om[x] = self.omega_power(x)
                om1[x] = self.omega_minus_one(x)
            self._omega_tables = (om, om1)
        return self._omega_tables

    def is_monoid(self) -> bool:
        return self.identity is not None

    def adjoin_identity(self) -> "FiniteSemigroup":
        """The monoid S^1: a fresh identity at index 0, old elements shifted."""
        n = self.order
        table = self.require_table()
        new = np.empty((n + 1, n + 1), dtype=np.int32)
        new[0, :] = np.arange(n + 1)
        new[:, 0] = np.arange(n + 1)
        new[1:, 1:] = table + 1
        gens = (
            {a: x + 1 for a, x in self.generators.items()} if self.generators else None
        )
        wits = ("",) + self.witnesses if self.witnesses is not None else None
        return FiniteSemigroup(
            order=n + 1,
            table=new,
            generators=gens,
            identity=0,
            witnesses=wits,
            alphabet=self.alphabet,
        )

    def verify_associativity(self, sample: int | None = None, seed: int = 0) -> bool:
        """Full O(n^3) check, or `sample` random triples when given."""
        table = self.require_table()
        n = self.order
        if sample is None:
            for x in range(n):
                if not np.array_equal(table[table[x]], table[x][table]):
                    return False
            return True
        rng = np.random.default_rng(seed)
        xs, ys, zs = rng.integers(0, n, size=(3, sample))
        return bool(np.all(table[table[xs, ys], zs] == table[xs, table[ys, zs]]))

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        table = self.require_table()
        return {
            "order": self.order,
            "identity": self.identity,
            "generators": dict(self.generators) if self.generators else {},
            "table": [int(v) for v in table.reshape(-1)],
            "witness": list(self.witnesses) if self.witnesses is not None else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, d: dict) -> "FiniteSemigroup":
        n = int(d["order"])
        table = np.array(d["table"], dtype=np.int32).reshape(n, n)
        gens = {str(a): int(x) for a, x in (d.get("generators") or {}).items()} or None
        wit = d.get("witness")
        return cls(
            order=n,
            table=table,
            generators=gens,
            identity=d.get("identity"),
            witnesses=tuple(wit) if wit is not None else None,
            alphabet=Alphabet(gens.keys()) if gens else None,
        )


def _bfs_witnesses(
    table: np.ndarray,
    generators: dict[str, int],
    alphabet: Alphabet,
    identity: int | None,
) -> tuple[str, ...]:
    """Shortest-lex witness words over the generator images.

    The identity element, if any, gets the empty word. All other elements
    must be reachable; otherwise the generator map does not generate.
    """
    n = table.shape[0]
    wit: dict[int, str] = {}
    queue: list[int] = []
    if identity is not None:
        wit[identity] = ""
        queue.append(identity)
    for a in alphabet.letters:
        x = generators[a]
        if x not in wit:
            wit[x] = a
            queue.append(x)
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for a in alphabet.letters:
            y = int(table[x, generators[a]])
            if y not in wit:
                wit[y] = wit[x] + a
                queue.append(y)
    if len(wit) != n:
        missing = n - len(wit)
        raise ValueError(f"{missing} element(s) not generated by the generator map")
    return tuple(wit[x] for x in range(n))


def transition_semigroup(
    d: Dfa,
    order_cap: int = DEFAULT_ORDER_CAP,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> FiniteSemigroup:
    """Transformations of the state set induced by all nonempty words.

    This is the syntactic semigroup when `d` is the minimal complete DFA of
    the language. The multiplication table is materialized only when the
    order fits under `table_cap`; the transformation backing always works.
    """
    ns = d.states
    n_letters = len(d.alphabet)
    gens = np.empty((n_letters, ns), dtype=np.int32)
    for ai in range(n_letters):
        for s in range(ns):
            gens[ai, s] = d.delta[s][ai]
    elems, parent, via, rmul, gen_index, overflow = _kernels.closure(gens, order_cap)
    if overflow:
        raise ResourceLimitError(
            f"transition semigroup exceeds the order cap ({order_cap})"
        )
    n = elems.shape[0]
    letters = d.alphabet.letters
    wits: list[str] = [""] * n
    for i in range(n):
        if parent[i] < 0:
            wits[i] = letters[via[i]]
        else:
            wits[i] = wits[parent[i]] + letters[via[i]]
    table = _kernels.mul_table(parent, via, rmul) if n <= table_cap else None
    ident = None
    id_row = np.arange(ns, dtype=np.int32)
    hits = np.nonzero((elems == id_row).all(axis=1))[0]
    if hits.size:
        ident = int(hits[0])
    return FiniteSemigroup(
        order=n,
        table=table,
        transformations=elems,
        generators={letters[ai]: int(gen_index[ai]) for ai in range(n_letters)},
        identity=ident,
        witnesses=tuple(wits),
        alphabet=d.alphabet,
    )


def syntactic_monoid(
    d: Dfa,
    order_cap: int = DEFAULT_ORDER_CAP,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> FiniteSemigroup:
    """Like transition_semigroup but including the empty word.

    If the identity transformation is already induced by a nonempty word the
    carrier is unchanged (its witness becomes the empty word); otherwise the
    identity is adjoined at index 0.
    """
    s = transition_semigroup(d, order_cap=order_cap, table_cap=table_cap)
    if s.identity is not None:
        wits = list(s.witnesses)
        wits[s.identity] = ""
        return FiniteSemigroup(
            order=s.order,
            table=s.table,
            transformations=s.transformations,
            generators=s.generators,
            identity=s.identity,
            witnesses=tuple(wits),
            alphabet=s.alphabet,
        )
    m = s.adjoin_identity()
    return m


@dataclass(frozen=True)
class LocalMonoid:
    """The monoid e*S*e for an idempotent e, re-indexed to 0..k-1.

    `carrier` holds the parent element indices in increasing order; `monoid`
    is the induced multiplication with e as its identity.
    """

    idempotent: int
    carrier: tuple[int, ...]
    monoid: FiniteSemigroup


def local_monoid(s: FiniteSemigroup, e: int) -> LocalMonoid:
    if s.product(e, e) != e:
        raise ValueError(f"element {e} is not idempotent")
    carrier = sorted({s.product(s.product(e, x), e) for x in range(s.order)})
    pos = {x: i for i, x in enumerate(carrier)}
    k = len(carrier)
    table = np.empty((k, k), dtype=np.int32)
    for i, x in enumerate(carrier):
        for j, y in enumerate(carrier):
            table[i, j] = pos[s.product(x, y)]
    ident = pos[e]
    # e must act as identity inside e*S*e
    if not all(table[ident, i] == i and table[i, ident] == i for i in range(k)):
        raise AssertionError("idempotent does not act as identity on its local monoid")
    wits = (
        tuple(s.witnesses[x] for x in carrier) if s.witnesses is not None else None
    )
    monoid = FiniteSemigroup(
        order=k,
        table=table,
        identity=ident,
        witnesses=wits,
        alphabet=s.alphabet,
    )
    return LocalMonoid(idempotent=e, carrier=tuple(carrier), monoid=monoid)


@dataclass(frozen=True)
class ContentMap:
    """Letter-content function: element -> set of letters of any word mapping
    to it; exists only when that set is independent of the word choice."""

    contents: tuple[frozenset[str], ...]

    def __getitem__(self, x: int) -> frozenset[str]:
        return self.contents[x]


@dataclass(frozen=True)
class NoContentFunction:
    """Witness that no content function exists: two words with different
    letter sets evaluate to the same element."""

    element: int
    word_a: str
    word_b: str
    content_a: frozenset[str]
    content_b: frozenset[str]


def content_map(
    s: FiniteSemigroup, pair_cap: int = 1_000_000
) -> ContentMap | NoContentFunction:
    """BFS over (element, letter set) pairs reachable through the generator map."""
    if s.generators is None or s.alphabet is None:
        raise ValueError("content map needs a generator map")
    letters = s.alphabet.letters
    gen = [s.generators[a] for a in letters]
    seen: dict[tuple[int, frozenset[str]], str] = {}
    by_elem: dict[int, tuple[frozenset[str], str]] = {}
    queue: list[tuple[int, frozenset[str]]] = []
    for ai, a in enumerate(letters):
        pair = (gen[ai], frozenset((a,)))
        if pair not in seen:
            seen[pair] = a
            queue.append(pair)
    qi = 0
    while qi < len(queue):
        x, content = queue[qi]
        word = seen[(x, content)]
        qi += 1
        if x in by_elem:
            other_content, other_word = by_elem[x]
            if other_content != content:
                return NoContentFunction(
                    element=x,
                    word_a=other_word,
                    word_b=word,
                    content_a=other_content,
                    content_b=content,
                )
        else:
            by_elem[x] = (content, word)
        for ai, a in enumerate(letters):
            pair = (s.product(x, gen[ai]), content | {a})
            if pair not in seen:
                if len(seen) >= pair_cap:
                    raise ResourceLimitError(
                        f"content search exceeded the pair cap ({pair_cap})"
                    )
                seen[pair] = word + a
                queue.append(pair)
    if len(by_elem) != s.order:
        raise ValueError("generator map does not generate the whole semigroup")
    return ContentMap(contents=tuple(by_elem[x][0] for x in range(s.order)))


@dataclass(frozen=True)
class EmbeddingFailure:
    """Why a letter-map did not extend to an injective homomorphism.

    kind is "letter" (a generator image disagrees), "homomorphism" (some
    product is not preserved), or "injectivity" (two elements collide).
    """

    kind: str
    detail: str


def find_embedding(
    small: FiniteSemigroup,
    big: FiniteSemigroup,
    letter_map: dict[str, str] | None = None,
) -> tuple[int, ...] | EmbeddingFailure:
    """Extend a letter renaming to a homomorphism via witness words.

    Each element of `small` is sent to the image of its (renamed) witness
    word in `big`; the candidate map is then checked to be a homomorphism on
    all pairs and injective.
    """
    if small.witnesses is None or small.generators is None:
        raise ValueError("small semigroup needs generators and witness words")
    if big.generators is None:
        raise ValueError("big semigroup needs a generator map")
    if letter_map is None:
        letter_map = {a: a for a in small.alphabet.letters}
    lam = []
    for x in range(small.order):
        if small.witnesses[x] == "" and small.identity == x:
            if big.identity is None:
                return EmbeddingFailure(
                    kind="letter", detail="small has an identity but big does not"
                )
            lam.append(big.identity)
            continue
        letters = small.alphabet.lex_word(small.witnesses[x])
        mapped = [letter_map[a] for a in letters]
        lam.append(big.eval_word(mapped))
    for a in small.alphabet.letters:
        if lam[small.generators[a]] != big.generators[letter_map[a]]:
            return EmbeddingFailure(
                kind="letter",
                detail=f"generator {a!r} maps to {lam[small.generators[a]]}, "
                f"expected {big.generators[letter_map[a]]}",
            )
    for x in range(small.order):
        for y in range(small.order):
            if lam[small.product(x, y)] != big.product(lam[x], lam[y]):
                return EmbeddingFailure(
                    kind="homomorphism",
                    detail=f"pair ({x}, {y}): image of product is "
                    f"{lam[small.product(x, y)]}, product of images is "
                    f"{big.product(lam[x], lam[y])}",
                )
    if len(set(lam)) != small.order:
        return EmbeddingFailure(kind="injectivity", detail="two elements collide")
    return tuple(lam)
