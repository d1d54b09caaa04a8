"""Identity compilation and the three check modes."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twcheck.checks import (
    FAILS,
    HOLDS,
    SAMPLED_NO_VIOLATION,
    Pseudoidentity,
    check_identity,
    check_local,
    check_witness,
    compile_identity,
    eval_term,
    parse_identity_file,
)
from twcheck.errors import BudgetExceededError, UnboundVariableError
from twcheck.semigroups import FiniteSemigroup
from twcheck.terms import build_pq, build_uv

RZ = FiniteSemigroup.from_table([[0, 1], [0, 1]])  # right-zero pair
COMM = Pseudoidentity.parse("(x y)^w = (y x)^w")


def identities_agree(a, b) -> bool:
    return a.verdict == b.verdict and a.counterexample == b.counterexample


class TestCompile:
    def test_dedups_shared_subterms(self):
        ident = Pseudoidentity(*build_uv(1))
        compiled = compile_identity(ident)
        # both sides share (s x1)^w and (y1 t)^w; well under naive size
        assert len(compiled.prog) <= 13
        assert compiled.var_names == ("s", "t", "x1", "y1")
        assert compiled.lhs_reg != compiled.rhs_reg

    def test_equal_sides_share_register(self):
        ident = Pseudoidentity.parse("x y = x y")
        compiled = compile_identity(ident)
        assert compiled.lhs_reg == compiled.rhs_reg

    def test_text_round_trip(self):
        ident = Pseudoidentity.parse("x^w y = x^w")
        assert Pseudoidentity.parse(ident.text).text == ident.text


class TestEvalTerm:
    def test_matches_direct_products(self, ell2):
        s = ell2.semigroup
        u1, _ = build_uv(1)
        asg = {"s": 0, "t": 3, "x1": 0, "y1": 3}
        sx = s.product(asg["s"], asg["x1"])
        left = s.omega_power(sx)
        y1t = s.product(asg["y1"], asg["t"])
        right = s.omega_power(y1t)
        expected = s.product(s.product(left, asg["s"]), right)
        assert eval_term(u1, s, asg) == expected

    def test_unbound_variable(self, ell2):
        u1, _ = build_uv(1)
        with pytest.raises(UnboundVariableError):
            eval_term(u1, ell2.semigroup, {"s": 0})


class TestExhaustive:
    def test_commutation_fails_on_right_zero(self):
        r = check_identity(COMM, RZ, "exhaustive")
        assert r.verdict == FAILS
        assert r.counterexample == {"x": 0, "y": 1}
        assert r.assignments_checked == 2  # (0,0) holds, (0,1) violates

    def test_trivial_semigroup_holds_everything(self):
        one = FiniteSemigroup.from_table([[0]])
        for text in ("(x y)^w = (y x)^w", "x^w y = x^w", "x^(w-1) = x^w"):
            assert check_identity(Pseudoidentity.parse(text), one).verdict == HOLDS

    def test_omega_minus_one_times_x_is_omega(self, corpus):
        ident = Pseudoidentity.parse("x^(w-1) x = x^w")
        for s in corpus[:50]:
            assert check_identity(ident, s).verdict == HOLDS

    def test_global_uv_fails_on_ell2(self, ell2):
        # the whole point of the construction: U1 = V1 holds locally but
        # not globally on this semigroup
        r = check_identity(Pseudoidentity(*build_uv(1)), ell2.semigroup)
        assert r.verdict == FAILS

    def test_budget_guard(self, ell2):
        with pytest.raises(BudgetExceededError):
            check_identity(Pseudoidentity(*build_uv(1)), ell2.semigroup, budget=1000)

    def test_threads_report_same_counterexample(self, ell2):
        ident = Pseudoidentity(*build_pq(1))
        a = check_identity(ident, ell2.semigroup, "optimized", threads=1)
        b = check_identity(ident, ell2.semigroup, "optimized", threads=4)
        assert identities_agree(a, b)
        assert a.counterexample == {"e": 1, "f": 2, "s": 0, "t": 3, "x1": 0, "y1": 3}


class TestModes:
    def test_optimized_matches_exhaustive_with_omega_only_vars(self, corpus):
        idents = [
            Pseudoidentity.parse("x^w y = x^w"),
            Pseudoidentity.parse("y x^w = x^w"),
            Pseudoidentity.parse("x^w y x^w = x^w"),
        ]
        for s in corpus[:60]:
            for ident in idents:
                a = check_identity(ident, s, "exhaustive")
                b = check_identity(ident, s, "optimized")
                assert identities_agree(a, b), (ident.text, s.order)
                assert b.assignments_checked <= a.assignments_checked

    def test_pq_modes_agree_on_ell2(self, ell2):
        ident = Pseudoidentity(*build_pq(1))
        a = check_identity(ident, ell2.semigroup, "exhaustive")
        b = check_identity(ident, ell2.semigroup, "optimized")
        assert identities_agree(a, b)
        assert a.verdict == FAILS


class TestSampled:
    def test_same_seed_identical_reports(self, ell2):
        ident = Pseudoidentity(*build_uv(1))
        a = check_identity(ident, ell2.semigroup, "sampled", samples=20_000, seed=5)
        b = check_identity(ident, ell2.semigroup, "sampled", samples=20_000, seed=5)
        assert a == b  # wall_time excluded from comparison

    def test_threads_find_same_counterexample(self, ell2):
        ident = Pseudoidentity(*build_uv(1))
        a = check_identity(ident, ell2.semigroup, "sampled", samples=20_000, seed=5)
        b = check_identity(
            ident, ell2.semigroup, "sampled", samples=20_000, seed=5, threads=3
        )
        assert identities_agree(a, b)

    def test_clean_pass_has_full_count(self, ell2):
        ident = Pseudoidentity.parse("x^(w-1) x = x^w")
        r = check_identity(ident, ell2.semigroup, "sampled", samples=5_000, seed=0)
        assert r.verdict == SAMPLED_NO_VIOLATION
        assert r.assignments_checked == 5_000
        assert r.counterexample is None

    def test_different_seed_may_differ_but_is_deterministic(self, ell2):
        ident = Pseudoidentity(*build_uv(1))
        r6a = check_identity(ident, ell2.semigroup, "sampled", samples=1_000, seed=6)
        r6b = check_identity(ident, ell2.semigroup, "sampled", samples=1_000, seed=6)
        assert r6a == r6b


class TestWitness:
    def test_word_valued_witness_fails_pq(self, ell2):
        phi = {"e": "b", "f": "c", "s": "a", "t": "d", "x1": "a", "y1": "d"}
        r = check_witness(Pseudoidentity(*build_pq(1)), ell2.semigroup, phi)
        assert r.verdict == FAILS
        assert r.counterexample == phi
        assert r.assignments_checked == 1
        assert r.mode == "witness"

    def test_word_valued_witness_holding(self, ell2):
        asg = {"s": "a", "t": "d", "x1": "a", "y1": "d"}
        r = check_witness(Pseudoidentity(*build_uv(1)), ell2.semigroup, asg)
        assert r.verdict == HOLDS

    def test_element_valued_witness(self):
        r = check_witness(COMM, RZ, {"x": 0, "y": 1})
        assert r.verdict == FAILS

    def test_missing_variable(self, ell2):
        with pytest.raises(UnboundVariableError):
            check_witness(Pseudoidentity(*build_uv(1)), ell2.semigroup, {"s": "a"})


class TestLocal:
    def test_holds_on_every_local_monoid(self, ell2):
        s = ell2.semigroup
        ident = Pseudoidentity(*build_uv(1))
        for e in s.idempotents():
            assert check_local(ident, s, e).verdict == HOLDS

    def test_counterexample_uses_parent_indices(self):
        rz1 = RZ.adjoin_identity()
        r = check_local(COMM, rz1, 0)
        assert r.verdict == FAILS
        assert r.counterexample == {"x": 1, "y": 2}
        assert r.assignments_checked == 6

    def test_trivial_local_monoid(self, ell2):
        s = ell2.semigroup
        e = 4  # the absorbing element; its local monoid is trivial
        r = check_local(Pseudoidentity(*build_uv(1)), s, e)
        assert r.verdict == HOLDS
        assert r.assignments_checked == 1


class TestReportShape:
    def test_json_omits_wall_time(self, ell2):
        r = check_identity(COMM, RZ)
        d = r.to_json_dict()
        assert set(d) == {"verdict", "counterexample", "assignments_checked", "mode"}
        assert r.wall_time >= 0.0

    def test_parse_identity_file(self):
        text = """
        # classical pair
        (x y)^w x = (x y)^w
        y (x y)^w = (x y)^w   # trailing note

        """
        idents = parse_identity_file(text)
        assert [i.text for i in idents] == [
            "(x y)^w x = (x y)^w",
            "y (x y)^w = (x y)^w",
        ]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_sampling_is_reproducible_per_seed(seed):
    r1 = check_identity(COMM, RZ, "sampled", samples=64, seed=seed)
    r2 = check_identity(COMM, RZ, "sampled", samples=64, seed=seed)
    assert r1 == r2
