"""Command-line interface: ell, syntactic, check, verify-nonlocality, embed."""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
import time
from pathlib import Path

from . import __version__
from .checks import (
    FAILS,
    HOLDS,
    SAMPLED_NO_VIOLATION,
    Pseudoidentity,
    check_identity,
    check_local,
    check_witness,
)
from .config import Config
from .dfa import compile_min_dfa
from .errors import TwcheckError
from .regexlang import Alphabet, build_ell, parse_regex, print_regex
from .semigroups import FiniteSemigroup, syntactic_monoid, transition_semigroup
from .terms import build_named, parse_term
from .varieties import (
    WITNESSED,
    VarietySpec,
    embedding_check,
    member_local,
    verify_nonlocality,
)

# flags usable both before and after the subcommand; merged after parsing so
# a subparser never clobbers a value given at the root
_COMMON = {
    "format": (str, "output format: json or table"),
    "cache_dir": (str, "cache directory for syntactic results"),
    "threads": (int, "worker threads for identity checks"),
    "budget": (int, "max assignments an exhaustive check may scan"),
    "seed": (int, "seed for sampled checks"),
    "samples": (int, "sample count for sampled checks"),
    "order_cap": (int, "max semigroup order"),
    "state_cap": (int, "max DFA states during compilation"),
    "table_cap": (int, "max order for materialized tables"),
}


def _add_common(p: argparse.ArgumentParser) -> None:
    for name, (typ, help_text) in _COMMON.items():
        flag = "--" + name.replace("_", "-")
        if name == "format":
            p.add_argument(
                flag, choices=("json", "table"), default=argparse.SUPPRESS, help=help_text
            )
        else:
            p.add_argument(flag, type=typ, default=argparse.SUPPRESS, help=help_text)


def _merged(args: argparse.Namespace) -> dict:
    # environment overrides are read here so each invocation sees them fresh
    cfg = Config.from_env()
    return {name: getattr(args, name, getattr(cfg, name)) for name in _COMMON}


def _level(text: str) -> int:
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"level must be an integer, got {text!r}")
    if m < 2:
        raise argparse.ArgumentTypeError(f"level must be >= 2, got {m}")
    return m


def _emit(doc: dict, table_lines: list[str], fmt: str, out: str | None) -> None:
    if fmt == "table":
        text = "\n".join(table_lines) + "\n"
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_identity_arg(text: str) -> Pseudoidentity:
    """Parse 'lhs = rhs' where either side may be a builtin term name."""
    if text.count("=") != 1:
        raise TwcheckError(f"identity needs exactly one '=': {text!r}")
    sides = []
    for side in text.split("="):
        side = side.strip()
        built = build_named(side)
        sides.append(built if built is not None else parse_term(side))
    return Pseudoidentity(sides[0], sides[1])


def _infer_alphabet(regex_text: str) -> Alphabet:
    letters = sorted(set(re.findall(r"[a-z][0-9]*", regex_text)))
    if not letters:
        raise TwcheckError("regex contains no letters; pass --alphabet")
    return Alphabet(letters)


# -- subcommand implementations -----------------------------------------------


def _cmd_ell(args, common) -> int:
    alphabet, ast = build_ell(args.m)
    text = print_regex(ast)
    doc = {"m": args.m, "alphabet": list(alphabet.letters), "regex": text}
    _emit(
        doc,
        [f"m: {args.m}", "alphabet: " + " ".join(alphabet.letters), f"regex: {text}"],
        common["format"],
        args.out,
    )
    return 0


def _syntactic_document(regex_text: str, alphabet: Alphabet, common) -> dict:
    ast = parse_regex(regex_text, alphabet)
    d = compile_min_dfa(ast, alphabet, state_cap=common["state_cap"])
    dfa_json = d.to_json()
    key = hashlib.sha256(dfa_json.encode()).hexdigest()
    cache_dir = Path(common["cache_dir"])
    cache_file = cache_dir / f"syntactic-{key}.json"
    if cache_file.is_file():
        doc = json.loads(cache_file.read_text())
        doc["cache"] = "hit"
        return doc
    s = transition_semigroup(
        d, order_cap=common["order_cap"], table_cap=common["table_cap"]
    )
    mon = syntactic_monoid(d, order_cap=common["order_cap"], table_cap=common["table_cap"])
    doc = {
        "tool": "twcheck",
        "version": __version__,
        "regex": regex_text,
        "regex_sha256": hashlib.sha256(regex_text.encode()).hexdigest(),
        "dfa_sha256": key,
        "dfa": d.to_json_dict(),
        "semigroup": s.to_json_dict(),
        "monoid": mon.to_json_dict(),
    }
    cache_dir.mkdir(parents=True, exist_ok=True)
    cache_file.write_text(json.dumps(doc, indent=2) + "\n")
    doc["cache"] = "miss"
    return doc


def _cmd_syntactic(args, common) -> int:
    if args.ell is not None:
        alphabet, ast = build_ell(args.ell)
        regex_text = print_regex(ast)
    else:
        if args.regex is None:
            raise TwcheckError("pass a regex or --ell M")
        regex_text = args.regex
        alphabet = (
            Alphabet(args.alphabet.split(","))
            if args.alphabet
            else _infer_alphabet(regex_text)
        )
    doc = _syntactic_document(regex_text, alphabet, common)
    part = doc["monoid"] if args.monoid else doc["semigroup"]
    label = "monoid" if args.monoid else "semigroup"
    lines = [
        f"regex: {doc['regex']}",
        f"dfa states: {doc['dfa']['states']}",
        f"{label} order: {part['order']}",
        f"identity: {part['identity']}",
        "generators: "
        + " ".join(f"{a}={x}" for a, x in sorted(part["generators"].items())),
    ]
    print(f"cache: {doc.get('cache', 'unknown')}", file=sys.stderr)
    _emit(part, lines, common["format"], args.out)
    return 0


def _load_semigroup(path: str, want_monoid: bool) -> FiniteSemigroup:
    doc = json.loads(Path(path).read_text())
    if "semigroup" in doc:
        doc = doc["monoid" if want_monoid else "semigroup"]
    return FiniteSemigroup.from_json_dict(doc)


def _cmd_check(args, common) -> int:
    s = _load_semigroup(args.semigroup, args.monoid)
    ident = _parse_identity_arg(args.identity)
    if args.witness_file:
        assignment = json.loads(Path(args.witness_file).read_text())
        report = check_witness(ident, s, assignment)
        doc = report.to_json_dict()
    elif args.local:
        if args.idempotent is not None:
            report = check_local(
                ident,
                s,
                args.idempotent,
                args.mode,
                samples=common["samples"],
                seed=common["seed"],
                budget=common["budget"],
                threads=common["threads"],
            )
            doc = report.to_json_dict()
        else:
            local = member_local(
                s,
                VarietySpec("(identity)", "semigroup", "global", (ident,)),
                args.mode,
                samples=common["samples"],
                seed=common["seed"],
                threads=common["threads"],
            )
            doc = local.to_json_dict()
            report = local
    else:
        report = check_identity(
            ident,
            s,
            args.mode,
            samples=common["samples"],
            seed=common["seed"],
            budget=common["budget"],
            threads=common["threads"],
            table_cap=common["table_cap"],
        )
        doc = report.to_json_dict()
    doc = {"identity": ident.text, **doc}
    lines = [f"identity: {ident.text}", f"verdict: {report.verdict}"]
    cex = doc.get("counterexample") or doc.get("failing")
    if cex:
        lines.append(f"counterexample: {json.dumps(cex)}")
    _emit(doc, lines, common["format"], args.out)
    return 0 if report.verdict in (HOLDS, SAMPLED_NO_VIOLATION) else 1


def _cmd_verify_nonlocality(args, common) -> int:
    report = verify_nonlocality(
        args.m,
        samples=common["samples"],
        seed=common["seed"],
        half_b_mode=args.mode,
        threads=common["threads"],
        state_cap=common["state_cap"],
        order_cap=common["order_cap"],
        table_cap=common["table_cap"],
    )
    doc = report.to_json_dict(include_timings=args.timings)
    for stage, secs in report.timings.items():
        print(f"[time] {stage}: {secs:.3f}s", file=sys.stderr)
    lines = [
        f"m: {report.m}",
        f"language: {report.language.get('regex', '?')}",
        f"semigroup order: {report.semigroup.get('order', '?')}",
        f"half A: {report.half_a['verdict'] if report.half_a else 'not run'}",
        f"half B: {report.half_b['verdict'] if report.half_b else 'not run'}",
        f"verdict: {report.verdict}",
    ]
    if report.error:
        lines.append(f"error: {report.error['message']}")
    _emit(doc, lines, common["format"], args.out)
    if report.error is not None:
        return 2
    return 0 if report.verdict == WITNESSED else 1


def _cmd_embed(args, common) -> int:
    report = embedding_check(
        args.m, state_cap=common["state_cap"], order_cap=common["order_cap"]
    )
    doc = report.to_json_dict()
    lines = [
        f"m: {report.m}",
        f"orders: {report.small_order} -> {report.big_order}",
        f"found: {report.found}",
    ]
    if report.failure is not None:
        lines.append(f"failure: {report.failure.kind}: {report.failure.detail}")
    _emit(doc, lines, common["format"], args.out)
    return 0 if report.found else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twcheck",
        description="Check omega-term identities on syntactic semigroups of the "
        "nested marker languages, and certify nonlocality levels.",
    )
    parser.add_argument("--version", action="version", version=f"twcheck {__version__}")
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ell", help="print the level-m regex and alphabet")
    p.add_argument("m", type=_level)
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_common(p)
    p.set_defaults(func=_cmd_ell)

    p = sub.add_parser("syntactic", help="compute and cache a syntactic semigroup")
    p.add_argument("regex", nargs="?", help="regex text (or use --ell)")
    p.add_argument("--ell", type=_level, help="use the level-m family language")
    p.add_argument("--alphabet", help="comma-separated letters (default: inferred)")
    p.add_argument("--monoid", action="store_true", help="print the monoid instead")
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_common(p)
    p.set_defaults(func=_cmd_syntactic)

    p = sub.add_parser("check", help="check one identity on a stored semigroup")
    p.add_argument("semigroup", help="semigroup JSON file (raw or syntactic output)")
    p.add_argument("identity", help="'lhs = rhs'; sides may be builtin names like P1")
    p.add_argument(
        "--mode",
        choices=("exhaustive", "optimized", "sampled"),
        default="exhaustive",
    )
    p.add_argument("--local", action="store_true", help="check on every local monoid")
    p.add_argument(
        "--idempotent", type=int, help="with --local: only this idempotent's monoid"
    )
    p.add_argument("--witness-file", help="JSON assignment to test instead of a scan")
    p.add_argument("--monoid", action="store_true", help="use the monoid part of the file")
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser(
        "verify-nonlocality", help="run both halves of the certificate for level m"
    )
    p.add_argument("--m", type=_level, required=True)
    p.add_argument(
        "--mode",
        choices=("exhaustive", "sampled"),
        default=None,
        help="half-B mode (default: exhaustive at m=2, sampled above)",
    )
    p.add_argument("--timings", action="store_true", help="include timings in the JSON")
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_common(p)
    p.set_defaults(func=_cmd_verify_nonlocality)

    p = sub.add_parser(
        "embed", help="embed the level m-1 syntactic semigroup into level m"
    )
    p.add_argument("--m", type=_level, required=True)
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_common(p)
    p.set_defaults(func=_cmd_embed)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    common = _merged(args)
    start = time.perf_counter()
    try:
        code = args.func(args, common)
    except (TwcheckError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        elapsed = time.perf_counter() - start
        print(f"[time] total: {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
