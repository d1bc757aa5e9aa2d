"""Command-line interface.

    roquette decompose --spec "SD(3,3,1,10)"        # [ [ 1, 1 ], [ 3, 4 ], [ 9, 4 ] ]
    roquette verify [--spec ...] [--criterion] [--bisets]
    roquette bench [--spec ...]

Exit codes: 0 success, 1 usage/parse/IO error, 2 domain rejection (even
order or not a p-group), 3 internal invariant violation, including any
failed verify check.
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
import logging
import random
import sys
import time

from . import corpus
from .class_functions import (
    ClassFunction,
    UnitAction,
    cf_apply,
    compose_bisets,
    deflation_biset,
    identity_biset,
    injectivity_configurations,
    lemma_sums,
    mobius_lattice,
    random_elementary_chain,
    res_def_injectivity,
    restriction_biset,
    vanishing_sum,
    zeta_apply,
)
from .constructions import Product, build, parse_spec
from .decomposition import (
    decompose,
    decompose_naive,
    l_sequence,
    l_values_direct,
    render_gap,
    render_json,
)
from .errors import DomainRejection, GroupError, InvariantViolation, OddPrimeRequired
from .groups import DEFAULT_CAP, Subgroup, center, exponent, ilog, omega1_center
from .oracles import abelian_oracle, product_check, rank_consistency

log = logging.getLogger("roquette")

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_INTERNAL = 0, 1, 2, 3

# byte-identical to the messages of the reference GAP function
MSG_ODD = "Error : the order must be odd"
MSG_PGROUP = "Error : the group must be a p-group"

# exact-rational biset and criterion checks are limited to small groups
CRITERION_MAX_ORDER = 81


@dataclass
class CliConfig:
    command: str
    spec: str | None = None
    fmt: str = "gap"
    criterion: bool = False
    bisets: bool = False
    cap: int = DEFAULT_CAP
    verbosity: int = 0
    seed: int = 0


def _spec_text(args) -> str | None:
    given = [(k, v) for k, v in (("spec", args.spec), ("perm", args.perm), ("table", args.table)) if v]
    if len(given) > 1:
        raise SystemExit("at most one of --spec, --perm, --table")
    if not given:
        return None
    kind, value = given[0]
    return value if kind == "spec" else f"{kind}:{value}"


def _rejection_message(exc: DomainRejection) -> str:
    return MSG_ODD if isinstance(exc, OddPrimeRequired) else MSG_PGROUP


def run_decompose(cfg: CliConfig, out=sys.stdout) -> int:
    G = build(parse_spec(cfg.spec), cfg.cap)
    d = decompose(G)
    out.write((render_json(d) if cfg.fmt == "json" else render_gap(d)) + "\n")
    return EXIT_OK


# -- verify ----------------------------------------------------------------------


def _check(results, name, fn):
    try:
        ok, detail = fn()
    except DomainRejection:
        raise
    except (GroupError, AssertionError) as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    results.append((name, bool(ok), detail))


def biset_suite(G, rng, chains=10):
    """Composition law on random chains, identity neutrality and the unit action."""
    basis = ClassFunction.basis(G)
    f = ClassFunction(G, [rng.randint(-9, 9) for _ in basis])
    if identity_biset(G).matrix != [[int(i == j) for j in range(len(basis))] for i in range(len(basis))]:
        return False, "identity biset is not the identity"
    for _ in range(chains):
        chain = random_elementary_chain(G, rng, rng.randint(2, 4))
        stepwise = f
        composed = chain[0]
        for U in chain:
            stepwise = cf_apply(U, stepwise)
        for U in chain[1:]:
            composed = compose_bisets(U, composed)
        if cf_apply(composed, f) != stepwise:
            return False, "composition law fails"
    mod = exponent(G)
    if G.order > 1:
        units = [z for z in range(1, mod + 1) if z % G.p]
        z1, z2 = UnitAction(rng.choice(units), mod), UnitAction(rng.choice(units), mod)
        if zeta_apply(UnitAction(1, mod), f) != f:
            return False, "zeta = 1 is not neutral"
        if zeta_apply(z1, zeta_apply(z2, f)) != zeta_apply(z1 * z2, f):
            return False, "unit action is not multiplicative"
        N = Subgroup.generated_by(G, [rng.choice(center(G).member_indices)])
        for U in (deflation_biset(G, N), restriction_biset(G, Subgroup.generated_by(G, [rng.randrange(G.order)]))):
            if cf_apply(U, zeta_apply(z1, f)) != zeta_apply(z1, cf_apply(U, f)):
                return False, "unit action does not commute with a biset"
    return True, f"{chains} chains"


def verify_group(text: str, cfg: CliConfig, rng) -> list[tuple[str, bool, str]]:
    ast = parse_spec(text)
    G = build(ast, cfg.cap)
    results = []
    if G.order == 1:
        d = decompose(G)
        results.append(("trivial", render_gap(d) == "[ [ 1, 1 ] ]", render_gap(d)))
        return results
    r = ilog(exponent(G), G.p)
    k = len(G.classes)
    box = {}

    def two_formulas():
        box["d"] = decompose(G)
        return True, render_gap(box["d"])

    _check(results, "two-formula agreement", two_formulas)
    if "d" not in box:
        return results
    d = box["d"]
    _check(results, "class-count identity", lambda: (d.class_count() == k, f"k(G) = {k}"))

    def monotone():
        fast = l_sequence(G).values
        direct = l_values_direct(G)
        ok = fast == direct and all(a <= b for a, b in zip(fast, fast[1:]))
        return ok, f"l = {fast}"

    _check(results, "monotonicity", monotone)
    _check(results, "stabilization", lambda: (set(l_values_direct(G, r + 2)[r:]) == {k}, f"l_n = {k} for n >= {r}"))
    if G.is_abelian:
        _check(results, "abelian oracle", lambda: (abelian_oracle(G) == d, render_gap(abelian_oracle(G))))
    if isinstance(ast, Product):
        def prod():
            rep = product_check(build(ast.left, cfg.cap), build(ast.right, cfg.cap), G)
            return rep.ok and rep.product_values == l_sequence(G).values, f"l = {rep.product_values}"

        _check(results, "product multiplicativity", prod)

    def rank():
        rep = rank_consistency(G, d)
        return rep.ok, f"L = {rep.observed}, predicted {rep.predicted}"

    _check(results, "rank consistency", rank)

    if cfg.bisets:
        if G.order <= CRITERION_MAX_ORDER:
            _check(results, "biset composition / unit action", lambda: biset_suite(G, rng))
        else:
            results.append(("biset composition / unit action", True, "skipped: order > 81"))
    if cfg.criterion:
        if G.order > CRITERION_MAX_ORDER:
            results.append(("rationality criterion", True, f"skipped: order > {CRITERION_MAX_ORDER}"))
            return results
        E = omega1_center(G)
        if E.order > G.p:
            def lemma():
                sums = lemma_sums(mobius_lattice(E))
                return all(v == 0 for v in sums.values()), f"{len(sums)} elements of E"

            def vanishing():
                worst = vanishing_sum(G)
                return worst == 0, f"max |S| = {worst}"

            _check(results, "Möbius lemma", lemma)
            _check(results, "vanishing sum", vanishing)
        else:
            results.append(("vanishing sum", True, "skipped: cyclic center"))

        def injective():
            configs = injectivity_configurations(G, limit=4)
            reports = [res_def_injectivity(G, E2, Z) for E2, Z in configs]
            return all(rp.injective for rp in reports), f"{len(reports)} configurations"

        _check(results, "Res + Def injectivity", injective)
    return results


def run_verify(cfg: CliConfig, out=sys.stdout) -> int:
    rng = random.Random(cfg.seed)
    specs = [cfg.spec] if cfg.spec else corpus.FULL
    failures = 0
    for text in specs:
        try:
            results = verify_group(text, cfg, rng)
        except DomainRejection as exc:
            out.write(f"{text}: {_rejection_message(exc)}\n")
            return EXIT_DOMAIN
        for name, ok, detail in results:
            failures += not ok
            out.write(f"{'PASS' if ok else 'FAIL'}  {text}  {name}  {detail}\n")
        out.flush()
    out.write(f"{'all checks passed' if not failures else f'{failures} checks failed'}\n")
    return EXIT_OK if not failures else EXIT_INTERNAL


# -- bench -----------------------------------------------------------------------

BENCH_LADDER = [f"EA(3,{r})" for r in range(4, 9)]


def _timed(fn):
    t = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t


def bench_one(text: str, cap: int = DEFAULT_CAP, naive: bool = True) -> dict:
    G, t_build = _timed(lambda: build(parse_spec(text), cap))
    # classes, the p-th power map and element orders are shared by both sides
    _, t_setup = _timed(lambda: (G.classes, G.element_orders))
    fast, t_fast = _timed(lambda: decompose(G))
    row = {"spec": text, "order": G.order, "build": t_build, "setup": t_setup, "fast": t_fast}
    if naive:
        slow, t_naive = _timed(lambda: decompose_naive(G))
        if slow != fast:
            raise InvariantViolation(f"naive and fast decompositions differ for {text}")
        row["naive"] = t_naive
        row["speedup"] = t_naive / t_fast if t_fast > 0 else float("inf")
    return row


def run_bench(cfg: CliConfig, out=sys.stdout) -> int:
    specs = [cfg.spec] if cfg.spec else BENCH_LADDER
    out.write(f"{'spec':<16}{'order':>8}{'build s':>10}{'setup s':>11}{'fast s':>10}{'naive s':>10}{'speedup':>9}\n")
    for text in specs:
        row = bench_one(text, cfg.cap)
        out.write(
            f"{text:<16}{row['order']:>8}{row['build']:>10.4f}{row['setup']:>11.4f}"
            f"{row['fast']:>10.4f}{row['naive']:>10.4f}{row['speedup']:>8.1f}x\n"
        )
    return EXIT_OK


# -- entry point -----------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="roquette", description="Roquette-category decomposition of odd p-groups")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("decompose", "print the decomposition of one group"),
        ("verify", "run the consistency checks on one group or the built-in corpus"),
        ("bench", "time the fast algorithm against a naive scan"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--spec", help='group spec, e.g. "SD(3,3,1,10)" or "EA(3,2) x C(9)"')
        p.add_argument("--perm", help="file of permutation generators in cycle notation")
        p.add_argument("--table", help="multiplication-table file")
        p.add_argument("--format", dest="fmt", choices=["gap", "json"], default="gap")
        p.add_argument("--criterion", action="store_true", help="verify: Möbius lemma, vanishing sum, injectivity")
        p.add_argument("--bisets", action="store_true", help="verify: biset composition and unit-action suite")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="element cap for group enumeration")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-v", "--verbose", action="count", default=0)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(message)s")
    try:
        spec = _spec_text(args)
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.cap < 1:
        print("--cap must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    cfg = CliConfig(args.command, spec, args.fmt, args.criterion, args.bisets, args.cap, args.verbose, args.seed)
    if cfg.command == "decompose" and cfg.spec is None:
        print("decompose needs --spec, --perm or --table", file=sys.stderr)
        return EXIT_USAGE
    runner = {"decompose": run_decompose, "verify": run_verify, "bench": run_bench}[cfg.command]
    try:
        return runner(cfg, out)
    except DomainRejection as exc:
        out.write(_rejection_message(exc) + "\n")
        return EXIT_DOMAIN
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GroupError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
