"""Timing comparison between the compiled kernel and the numpy fallback.

Three workloads: closure plus multiplication table on random transformation
generators, a guaranteed full exhaustive scan (an associativity instance,
which never finds a violation), and a sampled run of the level-2 ladder
identity on a local monoid. Outcomes are asserted identical across backends
before any timing is reported; only speed may differ.

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 5 --samples 4000000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from twcheck._kernels import _fallback
from twcheck.checks import Pseudoidentity, _domains, _flatten_domains, compile_identity
from twcheck.semigroups import local_monoid
from twcheck.terms import build_uv
from twcheck.varieties import build_level

try:
    from twcheck._kernels import _native
except ImportError:
    _native = None


def _best_of(repeat: int, fn) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _closure_instances(count: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [rng.integers(0, 5, size=(2, 5), dtype=np.int32) for _ in range(count)]


def bench_closure(backend, instances, cap: int):
    results = []

    def run():
        results.clear()
        for gens in instances:
            elems, parent, via, rmul, gen_index, overflow = backend.closure(gens, cap)
            if overflow:
                results.append(None)
            else:
                results.append((elems, backend.mul_table(parent, via, rmul)))

    elapsed = _best_of(ARGS.repeat, run)
    return elapsed, list(results)


def _search_args(ident: Pseudoidentity, s, mode: str):
    compiled = compile_identity(ident)
    dom_flat, dom_off = _flatten_domains(_domains(ident, compiled, s, mode))
    om, om1 = s.omega_tables()
    return (
        compiled.prog,
        s.require_table(),
        om,
        om1,
        dom_flat,
        dom_off,
        compiled.lhs_reg,
        compiled.rhs_reg,
    ), dom_flat, dom_off


def bench_exhaustive(backend, args, total: int):
    out = []

    def run():
        out.clear()
        out.append(backend.exhaustive_search(*args, 0, total))

    return _best_of(ARGS.repeat, run), out[0]


def bench_sampled(backend, args, samples: int):
    out = []

    def run():
        out.clear()
        out.append(backend.sampled_search(*args, ARGS.seed, 0, samples))

    return _best_of(ARGS.repeat, run), out[0]


def main() -> int:
    print(f"compiled backend available: {'yes' if _native is not None else 'no'}")
    backends = [("fallback", _fallback)]
    if _native is not None:
        backends.insert(0, ("native", _native))

    level = build_level(3)
    s1 = level.semigroup.adjoin_identity()
    assoc = Pseudoidentity.parse("((x y) z) w = x (y (z w))")
    assoc_args, dom_flat, _ = _search_args(assoc, s1, "exhaustive")
    total = s1.order ** 4

    e = level.semigroup.idempotents()[0]
    loc = local_monoid(level.semigroup, e).monoid
    uv = Pseudoidentity(*build_uv(2))
    uv_args, _, _ = _search_args(uv, loc, "exhaustive")

    instances = _closure_instances(ARGS.instances, ARGS.seed)

    rows = []
    outcomes = {}
    for label, fn, detail in [
        (
            f"closure+table ({ARGS.instances} instances)",
            lambda b: bench_closure(b, instances, 4000),
            "random transformations on 5 points",
        ),
        (
            f"exhaustive ({total} positions)",
            lambda b: bench_exhaustive(b, assoc_args, total),
            f"associativity on Synt(ell_3)^1, order {s1.order}",
        ),
        (
            f"sampled ({ARGS.samples} samples)",
            lambda b: bench_sampled(b, uv_args, ARGS.samples),
            f"U2=V2 on the local monoid at e={e}, order {loc.order}",
        ),
    ]:
        times = {}
        for name, backend in backends:
            elapsed, result = fn(backend)
            times[name] = elapsed
            outcomes.setdefault(label, {})[name] = result
        rows.append((label, detail, times))

    mismatches = 0
    for label, per_backend in outcomes.items():
        if len(per_backend) < 2:
            continue
        a, b = per_backend["native"], per_backend["fallback"]
        if label.startswith("closure"):
            for x, y in zip(a, b):
                if (x is None) != (y is None):
                    mismatches += 1
                elif x is not None and not (
                    np.array_equal(x[0], y[0]) and np.array_equal(x[1], y[1])
                ):
                    mismatches += 1
        elif tuple(a) != tuple(b):
            mismatches += 1

    width = max(len(r[0]) for r in rows) + 2
    header = f"{'benchmark':<{width}}" + "".join(f"{n:>12}" for n, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, detail, times in rows:
        line = f"{label:<{width}}" + "".join(
            f"{times[n]:>11.4f}s" for n, _ in backends
        )
        if len(backends) == 2:
            line += f"{times['fallback'] / times['native']:>9.1f}x"
        print(line + f"   {detail}")

    if len(backends) == 2:
        print(f"outcome agreement: {'OK' if mismatches == 0 else 'MISMATCH'}")
        return 1 if mismatches else 0
    print("outcome agreement: skipped (single backend)")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    parser.add_argument("--instances", type=int, default=60, help="closure instances")
    parser.add_argument("--samples", type=int, default=2_000_000, help="sampled draws")
    parser.add_argument("--seed", type=int, default=20260823, help="RNG seed")
    ARGS = parser.parse_args()
    raise SystemExit(main())
