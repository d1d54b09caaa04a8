"""twcheck: omega-term identity checking on syntactic semigroups.

Compiles regular expressions of the nested marker family to minimal DFAs,
derives their syntactic semigroups, evaluates omega-term identities over
them (exhaustively, idempotent-optimized, or by seeded sampling), and
certifies nonlocality of the intersection levels of the two-sided hierarchy.
A compiled kernel backs the hot loops when available; a pure NumPy fallback
is selected otherwise (or when TWCHECK_PURE is set).
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as kernel_backend  # noqa: E402
from .checks import (
    FAILS,
    HOLDS,
    SAMPLED_NO_VIOLATION,
    CheckReport,
    Pseudoidentity,
    check_identity,
    check_local,
    check_witness,
    parse_identity_file,
)
from .config import Config
from .dfa import Dfa, compile_min_dfa
from .errors import (
    BudgetExceededError,
    NotAMonoidError,
    ParseError,
    ResourceLimitError,
    TwcheckError,
    UnboundVariableError,
    UnknownLetterError,
)
from .regexlang import (
    Alphabet,
    build_ell,
    family_alphabet,
    parse_regex,
    print_regex,
)
from .semigroups import (
    ContentMap,
    EmbeddingFailure,
    FiniteSemigroup,
    LocalMonoid,
    NoContentFunction,
    content_map,
    find_embedding,
    local_monoid,
    syntactic_monoid,
    transition_semigroup,
)
from .terms import (
    Concat,
    Omega,
    OmegaMinusOne,
    Var,
    build_named,
    build_pq,
    build_uv,
    parse_identity,
    parse_term,
    print_term,
    term_equal,
)
from .varieties import (
    EmbeddingReport,
    HierarchyReport,
    LevelData,
    LocalMemberReport,
    MemberReport,
    NonlocalityReport,
    VarietySpec,
    build_level,
    builtin_varieties,
    embedding_check,
    hierarchy_containment_suite,
    lookup_variety,
    member,
    member_local,
    phi_witness,
    verify_nonlocality,
)

__all__ = [
    "__version__",
    "kernel_backend",
    "Config",
    "TwcheckError",
    "ParseError",
    "UnknownLetterError",
    "ResourceLimitError",
    "BudgetExceededError",
    "NotAMonoidError",
    "UnboundVariableError",
    "Alphabet",
    "parse_regex",
    "print_regex",
    "build_ell",
    "family_alphabet",
    "Dfa",
    "compile_min_dfa",
    "FiniteSemigroup",
    "transition_semigroup",
    "syntactic_monoid",
    "LocalMonoid",
    "local_monoid",
    "ContentMap",
    "NoContentFunction",
    "content_map",
    "EmbeddingFailure",
    "find_embedding",
    "Var",
    "Concat",
    "Omega",
    "OmegaMinusOne",
    "parse_term",
    "print_term",
    "parse_identity",
    "term_equal",
    "build_uv",
    "build_pq",
    "build_named",
    "Pseudoidentity",
    "parse_identity_file",
    "CheckReport",
    "check_identity",
    "check_local",
    "check_witness",
    "HOLDS",
    "FAILS",
    "SAMPLED_NO_VIOLATION",
    "VarietySpec",
    "builtin_varieties",
    "lookup_variety",
    "member",
    "member_local",
    "MemberReport",
    "LocalMemberReport",
    "HierarchyReport",
    "hierarchy_containment_suite",
    "phi_witness",
    "LevelData",
    "build_level",
    "NonlocalityReport",
    "verify_nonlocality",
    "EmbeddingReport",
    "embedding_check",
]
