"""Regex grammar, canonical printing, and the nested language family."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twcheck.errors import ParseError, UnknownLetterError
from twcheck.regexlang import (
    EPSILON,
    Alphabet,
    Concat,
    Lit,
    Plus,
    Star,
    Union,
    build_ell,
    concat,
    family_alphabet,
    letters_of,
    parse_regex,
    print_regex,
    union,
)

AB = Alphabet(["a", "b"])


class TestAlphabet:
    def test_order_is_preserved(self):
        assert Alphabet(["b", "a"]).letters == ("b", "a")

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            Alphabet(["a", "a"])

    def test_lex_word_greedy_multichar(self):
        al = Alphabet(["a", "x3", "y31"])
        assert al.lex_word("ax3y31a") == ("a", "x3", "y31", "a")

    def test_lex_word_unknown_letter(self):
        with pytest.raises(UnknownLetterError):
            AB.lex_word("ac")

    def test_family_alphabet(self):
        assert family_alphabet(2).letters == ("a", "b", "c", "d")
        assert family_alphabet(4).letters == ("a", "b", "c", "d", "x3", "y3", "x4", "y4")
        with pytest.raises(ValueError):
            family_alphabet(1)


class TestParse:
    def test_single_letter(self):
        assert parse_regex("a", AB) == Lit("a")

    def test_concat_and_union_shape(self):
        ast = parse_regex("a b | b a", AB)
        assert ast == Union((Concat((Lit("a"), Lit("b"))), Concat((Lit("b"), Lit("a")))))

    def test_star_plus_bind_tighter_than_concat(self):
        ast = parse_regex("a b* c+", Alphabet(["a", "b", "c"]))
        assert ast == Concat((Lit("a"), Star(Lit("b")), Plus(Lit("c"))))

    def test_parens(self):
        ast = parse_regex("(a b)+", AB)
        assert ast == Plus(Concat((Lit("a"), Lit("b"))))

    def test_numbered_letters(self):
        al = Alphabet(["a", "x3"])
        assert parse_regex("x3 a", al) == Concat((Lit("x3"), Lit("a")))

    def test_unknown_letter_is_parse_error(self):
        with pytest.raises((ParseError, UnknownLetterError)):
            parse_regex("a z", AB)

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as exc:
            parse_regex("a |", AB)
        assert exc.value.position == 3

    def test_unbalanced_paren(self):
        with pytest.raises(ParseError):
            parse_regex("(a b", AB)

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_regex("", AB)


class TestPrint:
    def test_union_spacing(self):
        assert print_regex(parse_regex("a|b", AB)) == "a | b"

    def test_round_trip_is_identity_on_text(self):
        text = "(a b+ | a c+)* a"
        al = Alphabet(["a", "b", "c"])
        assert print_regex(parse_regex(text, al)) == text

    def test_epsilon_not_printable(self):
        with pytest.raises(ValueError):
            print_regex(EPSILON)


def _canonical_asts(letters):
    """Canonical-form ASTs: what the smart constructors produce."""
    lit = st.sampled_from([Lit(a) for a in letters])
    return st.recursive(
        lit,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: concat(tuple(ps))),
            st.lists(inner, min_size=2, max_size=3, unique_by=id).map(
                lambda ps: union(tuple(ps))
            ),
            inner.map(Star),
            inner.map(Plus),
        ),
        max_leaves=12,
    )


@given(_canonical_asts(("a", "b")))
def test_print_parse_round_trip(ast):
    reparsed = parse_regex(print_regex(ast), AB)
    assert reparsed == ast


class TestFamily:
    def test_ell2_canonical_text(self, ell2):
        assert ell2.regex_text == "(a b+ | a c+)* a b+ d (b+ d | c+ d)*"

    def test_ell2_equals_parse_of_its_text(self, ell2):
        assert ell2.ast == parse_regex(ell2.regex_text, ell2.alphabet)

    def test_ell3_markers_occur_once_outside_stars(self, ell3):
        # x3 and y3 appear exactly once in the printed text outside any
        # starred group: strip (...)* and (...)+ groups, then count
        text = ell3.regex_text
        assert text.count("x3") >= 1 and text.count("y3") >= 1
        def strip_starred(t):
            out, depth, i = [], 0, 0
            while i < len(t):
                c = t[i]
                if c == "(":
                    j, d = i + 1, 1
                    while d:
                        d += {"(": 1, ")": -1}.get(t[j], 0)
                        j += 1
                    if j < len(t) and t[j] in "*+":
                        i = j + 1
                        continue
                    out.append(c)
                    i += 1
                    continue
                out.append(c)
                i += 1
            return "".join(out)
        outside = strip_starred(text)
        assert outside.count("x3") == 1
        assert outside.count("y3") == 1

    def test_ell3_letters(self, ell3):
        assert letters_of(ell3.ast) == frozenset("abcd") | {"x3", "y3"}

    def test_level_below_two_rejected(self):
        with pytest.raises(ValueError):
            build_ell(1)

    def test_nesting_reuses_lower_level(self, ell2, ell3):
        # the level-2 body appears as a sub-tree of level 3
        def subtrees(t):
            yield t
            for name in ("parts", "inner"):
                child = getattr(t, name, None)
                if child is None:
                    continue
                if isinstance(child, tuple):
                    for p in child:
                        yield from subtrees(p)
                else:
                    yield from subtrees(child)
        assert any(t == ell2.ast for t in subtrees(ell3.ast))
