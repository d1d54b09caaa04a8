"""Omega-term DAGs: parsing, canonical printing, ladder builders."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twcheck.errors import ParseError
from twcheck.terms import (
    Concat,
    Omega,
    OmegaMinusOne,
    Var,
    build_named,
    build_pq,
    build_uv,
    omega_only_variables,
    parse_identity,
    parse_term,
    print_term,
    tconcat,
    term_equal,
    variables_of,
)


class TestParsePrint:
    def test_variable(self):
        assert term_equal(parse_term("x"), Var("x"))

    def test_concat_is_flat(self):
        t = parse_term("x y z")
        assert isinstance(t, Concat) and len(t.parts) == 3

    def test_omega_suffix(self):
        assert term_equal(parse_term("x^w"), Omega(Var("x")))
        assert term_equal(parse_term("x^(w-1)"), OmegaMinusOne(Var("x")))

    def test_grouping(self):
        t = parse_term("(x y)^w x")
        assert term_equal(t, Concat((Omega(Concat((Var("x"), Var("y")))), Var("x"))))

    def test_multichar_names(self):
        assert term_equal(parse_term("x1 y12"), Concat((Var("x1"), Var("y12"))))

    def test_print_forms(self):
        assert print_term(parse_term("x^w")) == "x^w"
        assert print_term(parse_term("x^(w-1)")) == "x^(w-1)"
        assert print_term(parse_term("(x y)^w x")) == "(x y)^w x"

    def test_parse_errors(self):
        for bad in ("", "x^", "(x", "x^(w-2)", "x ^w)"):
            with pytest.raises(ParseError):
                parse_term(bad)

    def test_identity_splits_on_equals(self):
        lhs, rhs = parse_identity("x^w x = x^w")
        assert term_equal(lhs, Concat((Omega(Var("x")), Var("x"))))
        assert term_equal(rhs, Omega(Var("x")))

    def test_identity_needs_one_equals(self):
        for bad in ("x", "x = y = z"):
            with pytest.raises(ParseError):
                parse_identity(bad)


def _terms(names=("x", "y")):
    var = st.sampled_from([Var(n) for n in names])
    return st.recursive(
        var,
        lambda inner: st.one_of(
            st.lists(inner, min_size=2, max_size=3).map(lambda ps: tconcat(tuple(ps))),
            inner.map(Omega),
            inner.map(OmegaMinusOne),
        ),
        max_leaves=10,
    )


@given(_terms())
def test_print_parse_round_trip(t):
    assert term_equal(parse_term(print_term(t)), t)


class TestStructuralEquality:
    def test_identity_vs_structure(self):
        a = Concat((Var("x"), Var("y")))
        b = Concat((Var("x"), Var("y")))
        assert a is not b and a != b  # node equality is identity
        assert term_equal(a, b)  # structural equality sees through it

    def test_distinguishes(self):
        assert not term_equal(parse_term("x y"), parse_term("y x"))
        assert not term_equal(parse_term("x^w"), parse_term("x^(w-1)"))

    def test_linear_on_shared_dags(self):
        # a deeply shared ladder would be exponential to compare naively
        u5a, v5a = build_uv(5)
        u5b, v5b = build_uv(5)
        assert term_equal(u5a, u5b)
        assert term_equal(v5a, v5b)
        assert not term_equal(u5a, v5b)


class TestLadders:
    def test_u1_v1_text(self):
        u1, v1 = build_uv(1)
        assert print_term(u1) == "(s x1)^w s (y1 t)^w"
        assert print_term(v1) == "(s x1)^w t (y1 t)^w"

    def test_p1_q1_text(self):
        p1, q1 = build_pq(1)
        assert print_term(p1) == "(e^w s f^w x1)^w e^w s f^w (y1 e^w t f^w)^w"
        assert print_term(q1) == "(e^w s f^w x1)^w e^w t f^w (y1 e^w t f^w)^w"

    def test_u2_recursion_shape(self):
        u2, v2 = build_uv(2)
        u1 = "(s x1)^w s (y1 t)^w"
        assert print_term(u2) == f"(({u1}) x2)^w ({u1}) (y2 ({u1}))^w"
        assert sorted(variables_of(u2)) == ["s", "t", "x1", "x2", "y1", "y2"]

    def test_ladders_share_subterms(self):
        u3, v3 = build_uv(3)
        # U3 and V3 share the U2 flank by object identity, not just value
        def nodes(t, acc):
            if id(t) in acc:
                return
            acc[id(t)] = t
            for name in ("parts",):
                for p in getattr(t, name, ()):
                    nodes(p, acc)
            inner = getattr(t, "inner", None)
            if inner is not None:
                nodes(inner, acc)
        nu, nv = {}, {}
        nodes(u3, nu)
        nodes(v3, nv)
        assert set(nu) & set(nv)  # shared object ids

    def test_dag_stays_small_while_text_explodes(self):
        u6, _ = build_uv(6)
        acc = {}
        def count(t):
            if id(t) in acc:
                return
            acc[id(t)] = True
            for p in getattr(t, "parts", ()):
                count(p)
            if getattr(t, "inner", None) is not None:
                count(t.inner)
        count(u6)
        assert len(acc) < 120
        assert len(print_term(u6)) > 5_000

    def test_build_named(self):
        assert term_equal(build_named("U1"), build_uv(1)[0])
        assert term_equal(build_named("V2"), build_uv(2)[1])
        assert term_equal(build_named("P1"), build_pq(1)[0])
        assert term_equal(build_named("Q3"), build_pq(3)[1])
        for bad in ("W1", "U", "u1", "U0", "xy"):
            assert build_named(bad) is None


class TestOmegaOnly:
    def test_pq_flanks_are_omega_only(self):
        p1, q1 = build_pq(1)
        assert omega_only_variables(p1, q1) == frozenset({"e", "f"})

    def test_bare_occurrence_disqualifies(self):
        lhs, rhs = parse_identity("x^w x = x^w")
        assert omega_only_variables(lhs, rhs) == frozenset()

    def test_definite_identity(self):
        lhs, rhs = parse_identity("y x^w = x^w")
        assert omega_only_variables(lhs, rhs) == frozenset({"x"})

    def test_omega_minus_one_not_counted(self):
        lhs, rhs = parse_identity("x^(w-1) y = y")
        assert omega_only_variables(lhs, rhs) == frozenset()

    def test_uv_has_none(self):
        u1, v1 = build_uv(1)
        assert omega_only_variables(u1, v1) == frozenset()
