"""Pseudovariety membership, the two-sided hierarchy ladders, and the
nonlocality certification pipeline."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

from .checks import (
    FAILS,
    HOLDS,
    SAMPLED_NO_VIOLATION,
    CheckReport,
    Pseudoidentity,
    check_identity,
    check_local,
    check_witness,
)
from .config import (
    DEFAULT_ORDER_CAP,
    DEFAULT_SAMPLES,
    DEFAULT_STATE_CAP,
    DEFAULT_TABLE_CAP,
)
from .dfa import Dfa, compile_min_dfa
from .errors import NotAMonoidError, ResourceLimitError
from .regexlang import Alphabet, RegexAst, build_ell, print_regex
from .semigroups import (
    EmbeddingFailure,
    FiniteSemigroup,
    find_embedding,
    local_monoid,
    transition_semigroup,
)
from .terms import Concat, Omega, Var, build_pq, build_uv


@dataclass(frozen=True)
class VarietySpec:
    """A pseudovariety given by a finite list of defining identities.

    kind "monoid" means membership is asked of monoids (an identity element
    must be present); kind "semigroup" applies to plain semigroups. surface
    records how the variety is used by the pipeline: identities quantified
    over the whole carrier ("global") or the bracketed product form checked
    globally against local structure ("global-PQ").
    """

    name: str
    kind: str
    surface: str
    identities: tuple[Pseudoidentity, ...]


def _ident(text: str) -> Pseudoidentity:
    return Pseudoidentity.parse(text)


def builtin_varieties() -> dict[str, VarietySpec]:
    """The fixed-name varieties; ladder levels come from lookup_variety."""
    return {
        "R": VarietySpec("R", "monoid", "global", (_ident("(x y)^w x = (x y)^w"),)),
        "L": VarietySpec("L", "monoid", "global", (_ident("y (x y)^w = (x y)^w"),)),
        "J": VarietySpec(
            "J",
            "monoid",
            "global",
            (_ident("(x y)^w = (y x)^w"), _ident("x^w x = x^w")),
        ),
        "DA": VarietySpec(
            "DA", "monoid", "global", (_ident("(x y)^w x (x y)^w = (x y)^w"),)
        ),
        "K": VarietySpec("K", "semigroup", "global", (_ident("x^w y = x^w"),)),
        "D": VarietySpec("D", "semigroup", "global", (_ident("y x^w = x^w"),)),
    }


_LADDER_RE = re.compile(r"(RmLm_star_D|RmLm|Rm|Lm)\((\d+)\)")


def lookup_variety(name: str) -> VarietySpec:
    """Resolve a variety name, including ladder levels Rm(m), Lm(m),
    RmLm(m), RmLm_star_D(m); level 1 of the first three is J."""
    fixed = builtin_varieties()
    if name in fixed:
        return fixed[name]
    m = _LADDER_RE.fullmatch(name.strip())
    if not m:
        raise KeyError(f"unknown variety {name!r}")
    kind, level = m.group(1), int(m.group(2))
    if level < 1 or (kind == "RmLm_star_D" and level < 2):
        raise KeyError(f"variety {name!r} has no level {level}")
    if level == 1:
        return fixed["J"]
    u, v = build_uv(level - 1)
    if kind == "Rm":
        left = Omega(Concat((u, Var(f"x{level}"))))
        ident = Pseudoidentity(Concat((left, u)), Concat((left, v)))
        return VarietySpec(name, "monoid", "global", (ident,))
    if kind == "Lm":
        right = Omega(Concat((Var(f"y{level}"), u)))
        ident = Pseudoidentity(Concat((u, right)), Concat((v, right)))
        return VarietySpec(name, "monoid", "global", (ident,))
    if kind == "RmLm":
        return VarietySpec(name, "monoid", "global", (Pseudoidentity(u, v),))
    p, q = build_pq(level - 1)
    return VarietySpec(name, "semigroup", "global-PQ", (Pseudoidentity(p, q),))


@dataclass
class MemberReport:
    variety: str
    verdict: str
    identity_reports: list[tuple[str, CheckReport]]

    def to_json_dict(self) -> dict:
        return {
            "variety": self.variety,
            "verdict": self.verdict,
            "identities": [
                {"identity": text, **report.to_json_dict()}
                for text, report in self.identity_reports
            ],
        }


def member(
    s: FiniteSemigroup,
    v: VarietySpec,
    mode: str = "optimized",
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> MemberReport:
    """Check all defining identities over the whole carrier."""
    if v.kind == "monoid" and not s.is_monoid():
        raise NotAMonoidError(
            f"{v.name} is a monoid variety; the semigroup has no identity element"
        )
    reports: list[tuple[str, CheckReport]] = []
    verdict = HOLDS if mode != "sampled" else SAMPLED_NO_VIOLATION
    for ident in v.identities:
        rep = check_identity(ident, s, mode, samples=samples, seed=seed, threads=threads)
        reports.append((ident.text, rep))
        if rep.verdict == FAILS:
            verdict = FAILS
            break
    return MemberReport(variety=v.name, verdict=verdict, identity_reports=reports)


@dataclass
class LocalMemberReport:
    variety: str
    mode: str
    verdict: str
    per_idempotent: list[dict]
    failing: dict | None

    def to_json_dict(self) -> dict:
        return {
            "variety": self.variety,
            "mode": self.mode,
            "verdict": self.verdict,
            "per_idempotent": self.per_idempotent,
            "failing": self.failing,
        }


def member_local(
    s: FiniteSemigroup,
    v: VarietySpec,
    mode: str = "exhaustive",
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> LocalMemberReport:
    """Check the defining identities on every local monoid eSe.

    Idempotents are scanned in element order; the first failing one is
    reported and the scan stops there.
    """
    per_idem: list[dict] = []
    failing = None
    verdict = HOLDS if mode != "sampled" else SAMPLED_NO_VIOLATION
    for e in s.idempotents():
        local = local_monoid(s, e)
        entry = {
            "idempotent": int(e),
            "carrier_size": len(local.carrier),
            "assignments_checked": 0,
            "verdict": HOLDS if mode != "sampled" else SAMPLED_NO_VIOLATION,
        }
        for ident in v.identities:
            rep = check_local(
                ident,
                s,
                e,
                mode,
                samples=samples,
                seed=seed,
                threads=threads,
                precomputed=local,
            )
            entry["assignments_checked"] += rep.assignments_checked
            if rep.verdict == FAILS:
                entry["verdict"] = FAILS
                verdict = FAILS
                failing = {
                    "idempotent": int(e),
                    "identity": ident.text,
                    "counterexample": rep.counterexample,
                }
                break
        per_idem.append(entry)
        if verdict == FAILS:
            break
    return LocalMemberReport(
        variety=v.name,
        mode=mode,
        verdict=verdict,
        per_idempotent=per_idem,
        failing=failing,
    )


@dataclass
class HierarchyReport:
    implications: list[dict]
    monoids_checked: int
    violations: int

    def to_json_dict(self) -> dict:
        return {
            "monoids_checked": self.monoids_checked,
            "violations": self.violations,
            "implications": self.implications,
        }


def hierarchy_containment_suite(
    monoids: list[FiniteSemigroup], mode: str = "optimized", threads: int = 1
) -> HierarchyReport:
    """Cross-check the ladder against the classical varieties on a corpus.

    Verified implications: J inside R and L; R and L coincide with ladder
    level 2; levels 2 sit inside DA and inside the next intersection level;
    the level-2 intersection is J again.
    """
    names = ["J", "R", "L", "DA", "Rm(2)", "Lm(2)", "RmLm(2)", "RmLm(3)"]
    specs = {name: lookup_variety(name) for name in names}
    implications = [
        ("J implies R", lambda d: (not d["J"]) or d["R"]),
        ("J implies L", lambda d: (not d["J"]) or d["L"]),
        ("R iff Rm(2)", lambda d: d["R"] == d["Rm(2)"]),
        ("L iff Lm(2)", lambda d: d["L"] == d["Lm(2)"]),
        ("Rm(2) implies DA", lambda d: (not d["Rm(2)"]) or d["DA"]),
        ("Lm(2) implies DA", lambda d: (not d["Lm(2)"]) or d["DA"]),
        ("Rm(2) implies RmLm(3)", lambda d: (not d["Rm(2)"]) or d["RmLm(3)"]),
        ("Lm(2) implies RmLm(3)", lambda d: (not d["Lm(2)"]) or d["RmLm(3)"]),
        ("J iff RmLm(2)", lambda d: d["J"] == d["RmLm(2)"]),
    ]
    counts = {name: 0 for name, _ in implications}
    bad: dict[str, list[int]] = {name: [] for name, _ in implications}
    for i, s in enumerate(monoids):
        verdicts = {
            name: member(s, spec, mode, threads=threads).verdict == HOLDS
            for name, spec in specs.items()
        }
        for name, holds in implications:
            counts[name] += 1
            if not holds(verdicts):
                bad[name].append(i)
    out = [
        {"implication": name, "checked": counts[name], "violations": bad[name]}
        for name, _ in implications
    ]
    return HierarchyReport(
        implications=out,
        monoids_checked=len(monoids),
        violations=sum(len(v) for v in bad.values()),
    )


def phi_witness(m: int) -> dict[str, str]:
    """The word-valued assignment certifying that the bracketed identity of
    level m fails on the level-m syntactic semigroup.

    Level 2 pins the ladder variables to single letters; level 3 routes the
    new markers through the level-2 letters; higher levels just name the
    fresh markers.
    """
    if m < 2:
        raise ValueError(f"level must be >= 2, got {m}")
    phi = {"e": "b", "f": "c", "s": "a", "t": "d", "x1": "a", "y1": "d"}
    if m >= 3:
        phi["x2"] = "x3a"
        phi["y2"] = "dy3"
    for k in range(4, m + 1):
        phi[f"x{k - 1}"] = f"x{k}"
        phi[f"y{k - 1}"] = f"y{k}"
    return phi


@dataclass
class LevelData:
    """Everything the pipeline derives from one level of the family."""

    m: int
    alphabet: Alphabet
    ast: RegexAst
    regex_text: str
    dfa: Dfa
    semigroup: FiniteSemigroup


def build_level(
    m: int,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    order_cap: int = DEFAULT_ORDER_CAP,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> LevelData:
    alphabet, ast = build_ell(m)
    d = compile_min_dfa(ast, alphabet, state_cap=state_cap)
    s = transition_semigroup(d, order_cap=order_cap, table_cap=table_cap)
    return LevelData(
        m=m,
        alphabet=alphabet,
        ast=ast,
        regex_text=print_regex(ast),
        dfa=d,
        semigroup=s,
    )


@dataclass
class NonlocalityReport:
    """Both halves of a nonlocality certificate for one level.

    Half A: the bracketed identity P=Q of the previous ladder level fails
    globally on the syntactic semigroup. Half B: the plain ladder identity
    U=V holds (or survives sampling) on every local monoid. Together these
    witness that membership in the corresponding variety is not a local
    property. JSON omits timings unless asked, so identical runs serialize
    to identical bytes.
    """

    m: int
    config: dict
    language: dict
    semigroup: dict
    half_a: dict | None
    half_b: dict | None
    verdict: str
    error: dict | None = None
    timings: dict = field(default_factory=dict)

    def to_json_dict(self, include_timings: bool = False) -> dict:
        out = {
            "m": self.m,
            "config": self.config,
            "language": self.language,
            "semigroup": self.semigroup,
            "half_a": self.half_a,
            "half_b": self.half_b,
            "verdict": self.verdict,
            "error": self.error,
        }
        if include_timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out


WITNESSED = "nonlocality witnessed"
NOT_WITNESSED = "nonlocality not witnessed"


def verify_nonlocality(
    m: int,
    *,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    half_b_mode: str | None = None,
    threads: int = 1,
    state_cap: int = DEFAULT_STATE_CAP,
    order_cap: int = DEFAULT_ORDER_CAP,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> NonlocalityReport:
    """Run the full pipeline for one level of the family.

    Half B defaults to exhaustive local checks at level 2 and seeded
    sampling above it. Resource-cap errors produce a partial report with an
    error record instead of raising.
    """
    if m < 2:
        raise ValueError(f"level must be >= 2, got {m}")
    if half_b_mode is None:
        half_b_mode = "exhaustive" if m == 2 else "sampled"
    config = {
        "samples": samples,
        "seed": seed,
        "half_b_mode": half_b_mode,
        "threads": threads,
        "state_cap": state_cap,
        "order_cap": order_cap,
    }
    report = NonlocalityReport(
        m=m,
        config=config,
        language={},
        semigroup={},
        half_a=None,
        half_b=None,
        verdict=NOT_WITNESSED,
    )
    timings = report.timings
    try:
        t0 = time.perf_counter()
        alphabet, ast = build_ell(m)
        regex_text = print_regex(ast)
        d = compile_min_dfa(ast, alphabet, state_cap=state_cap)
        timings["build"] = time.perf_counter() - t0
        report.language = {
            "regex": regex_text,
            "alphabet": list(alphabet.letters),
            "dfa_states": d.states,
        }
        t0 = time.perf_counter()
        s = transition_semigroup(d, order_cap=order_cap, table_cap=table_cap)
        timings["closure"] = time.perf_counter() - t0
        report.semigroup = {
            "order": s.order,
            "idempotents": len(s.idempotents()),
        }
        p, q = build_pq(m - 1)
        pq = Pseudoidentity(p, q)
        phi = phi_witness(m)
        t0 = time.perf_counter()
        wit_report = check_witness(pq, s, phi)
        timings["half_a_witness"] = time.perf_counter() - t0
        half_a = {
            "identity": f"P{m - 1} = Q{m - 1}",
            "method": "witness",
            "witness": phi,
            "report": wit_report.to_json_dict(),
            "verdict": wit_report.verdict,
        }
        if wit_report.verdict != FAILS:
            # witness did not separate; fall back to a full optimized search
            t0 = time.perf_counter()
            search_report = check_identity(pq, s, "optimized", threads=threads)
            timings["half_a_search"] = time.perf_counter() - t0
            half_a["method"] = "search"
            half_a["report"] = search_report.to_json_dict()
            half_a["verdict"] = search_report.verdict
        report.half_a = half_a
        uv = Pseudoidentity(*build_uv(m - 1))
        t0 = time.perf_counter()
        local_report = member_local(
            s,
            VarietySpec(f"RmLm({m})", "monoid", "global", (uv,)),
            half_b_mode,
            samples=samples,
            seed=seed,
            threads=threads,
        )
        timings["half_b"] = time.perf_counter() - t0
        report.half_b = {
            "identity": f"U{m - 1} = V{m - 1}",
            "mode": half_b_mode,
            "verdict": local_report.verdict,
            "per_idempotent": local_report.per_idempotent,
            "failing": local_report.failing,
        }
        if report.half_a["verdict"] == FAILS and report.half_b["verdict"] in (
            HOLDS,
            SAMPLED_NO_VIOLATION,
        ):
            report.verdict = WITNESSED
    except ResourceLimitError as exc:
        report.error = {"kind": "resource-limit", "message": str(exc)}
        report.verdict = "error"
    return report


@dataclass
class EmbeddingReport:
    m: int
    small_order: int
    big_order: int
    found: bool
    mapping: tuple[int, ...] | None
    failure: EmbeddingFailure | None

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "small_order": self.small_order,
            "big_order": self.big_order,
            "found": self.found,
            "mapping": list(self.mapping) if self.mapping is not None else None,
            "failure": (
                {"kind": self.failure.kind, "detail": self.failure.detail}
                if self.failure is not None
                else None
            ),
        }


def embedding_check(
    m: int,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    order_cap: int = DEFAULT_ORDER_CAP,
    letter_map: dict[str, str] | None = None,
) -> EmbeddingReport:
    """Embed the level m-1 syntactic semigroup into the level m one by
    letter inclusion (levels share their lower alphabet)."""
    if m < 3:
        raise ValueError(f"embedding needs level >= 3, got {m}")
    small = build_level(m - 1, state_cap=state_cap, order_cap=order_cap).semigroup
    big = build_level(m, state_cap=state_cap, order_cap=order_cap).semigroup
    result = find_embedding(small, big, letter_map)
    if isinstance(result, EmbeddingFailure):
        return EmbeddingReport(
            m=m,
            small_order=small.order,
            big_order=big.order,
            found=False,
            mapping=None,
            failure=result,
        )
    return EmbeddingReport(
        m=m,
        small_order=small.order,
        big_order=big.order,
        found=True,
        mapping=result,
        failure=None,
    )
