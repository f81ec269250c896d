"""Command line front end: build, apartment, verify, search and selftest.

Exit codes: 0 success or ACCEPT, 1 REJECT (or a failed selftest), 2 usage
errors, 3 budget exhaustion or truncated searches.
"""
import argparse
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import catalogue

from . import registry, serialize
from .apartments import generated_set, is_embedding
from .errors import BudgetExceeded, PolarisError
from .grassmann import DEFAULT_CLOSURE_ITERATIONS, GrassmannGraph, span_closure
from .johnson import DEFAULT_ISO_BUDGET, GRAPH_KINDS, build_named_graph, halfcube_split_and_g
from .linalg import check_prime
from .polar import KIND_ALIASES, KINDS, PolarSpace, build_polar_space
from .search import DEFAULT_NODE_CAP, DEFAULT_TRIALS, SEARCH_METHODS, Pattern, open_problem_search, search_embeddings
from .theorems import THEOREMS, verify_theorem
from .util import dumps_json, read_json, write_json, write_text_atomic

logger = logging.getLogger("polaris.cli")

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

EXPORT_FORMATS = ("json", "dot")
GENERATORS = ("apartment", "parabolic", "lframe")


@dataclass(frozen=True)
class RunConfig:
    kind: str = "symplectic"
    n: int = 3
    p: int = 2
    k: Optional[int] = None
    m: Optional[int] = None
    l: Optional[int] = None
    seed: int = 0
    budget: Optional[int] = None
    trials: int = DEFAULT_TRIALS
    output: Path = Path("polaris-out")
    export: str = "json"

    def replace(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)

    @property
    def is_polar(self) -> bool:
        return KIND_ALIASES.get(self.kind, self.kind) in KINDS

    def validate(self) -> "RunConfig":
        """Check parameters before any work; raises ValueError (or a PolarisError) with the reason."""
        if not self.is_polar and self.kind not in GRAPH_KINDS:
            raise ValueError(f"Unknown kind {self.kind!r}; expected one of {KINDS + GRAPH_KINDS}")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.is_polar:
            check_prime(self.p)
        if self.k is not None and not 0 <= self.k <= self.n - 1:
            raise ValueError(f"k must lie in [0, {self.n - 1}], got {self.k}")
        if self.m is not None and self.m < 0:
            raise ValueError(f"m must be non-negative, got {self.m}")
        if self.l is not None and self.l < 1:
            raise ValueError(f"l must be positive, got {self.l}")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.budget is not None and self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")
        if self.trials < 0:
            raise ValueError(f"trials must be non-negative, got {self.trials}")
        if self.export not in EXPORT_FORMATS:
            raise ValueError(f"export must be one of {EXPORT_FORMATS}, got {self.export!r}")
        return self

    def polar(self) -> PolarSpace:
        return build_polar_space(self.kind, self.n, self.p)


DEFAULT_RUN_CONFIG = RunConfig()


def _config(args: argparse.Namespace) -> RunConfig:
    values = {
        name: getattr(args, name)
        for name in ("kind", "n", "p", "k", "m", "l", "seed", "budget", "trials", "export")
        if getattr(args, name, None) is not None
    }
    if getattr(args, "output", None) is not None:
        values["output"] = Path(args.output)
    return DEFAULT_RUN_CONFIG.replace(**values).validate()


def _emit(path: Path) -> None:
    print(f"wrote {path}")


# commands


def cmd_build(args: argparse.Namespace) -> int:
    config = _config(args)
    out = config.output
    if config.is_polar:
        if config.k is None:
            raise ValueError("build needs --grassmann/-k for a polar space")
        polar = config.polar()
        gg = GrassmannGraph(polar, config.k)
        exported = serialize.grassmann_export(gg, config.export)
        subspaces = serialize.header("build", config.seed) | {
            "kind": polar.kind,
            "n": polar.rank,
            "p": polar.p,
            "k": config.k,
            "subspaces": [serialize.subspace_to_json(x) for x in gg.vertices],
        }
        _emit(write_json(out / "subspaces.json", subspaces))
        logger.info("Γ_%d of %r: %d vertices, %d edges", config.k, polar, len(gg), gg.graph.number_of_edges())
    else:
        graph = build_named_graph(config.kind, config.n, config.k)
        exported = serialize.abstract_export(graph, config.export)
    if config.export == "dot":
        head = dumps_json(serialize.header("build", config.seed)).replace("\n", " ")
        _emit(write_text_atomic(out / "graph.dot", f"// {head.strip()}\n{exported}"))
    else:
        _emit(write_json(out / "graph.json", serialize.header("build", config.seed) | exported))
    return EXIT_OK


def cmd_apartment(args: argparse.Namespace) -> int:
    config = _config(args)
    if not config.is_polar:
        raise ValueError("apartment needs a polar space kind")
    polar = config.polar()
    k = config.k if config.k is not None else polar.rank - 1
    m = config.m if config.m is not None else k
    l = config.l if config.l is not None else polar.rank
    a = generated_set(polar, k, m, l)
    if not is_embedding(a.embedding()):
        raise PolarisError(f"The built set is not a copy of PJ({a.l},{a.m})")
    data = serialize.header("apartment", config.seed) | serialize.apartment_to_json(a)
    if args.span_check:
        rounds = config.budget or DEFAULT_CLOSURE_ITERATIONS
        span = span_closure(polar, a.members, max_iterations=rounds)
        total = len(polar.enumerate_singular(k))
        data["span"] = {"size": len(span), "total": total}
        logger.info("Span of the set: %d of %d subspaces", len(span), total)
    _emit(write_json(config.output / "apartment.json", data))
    print(f"{len(a)} labeled members")
    if args.span_check:
        print(f"span: {data['span']['size']} of {data['span']['total']}")
    return EXIT_OK


def _verify_inputs(args: argparse.Namespace, config: RunConfig) -> Tuple[PolarSpace, Dict[str, Any]]:
    if args.input:
        polar, params, members, embedding = serialize.verify_input_from_json(read_json(args.input))
        l = config.l if config.l is not None else params["l"]
        m = config.m if config.m is not None else params["m"]
        return polar, {"xs": members, "embedding": embedding, "l": l, "m": m}
    polar = config.polar()
    k = config.k if config.k is not None else polar.rank - 1
    m = config.m if config.m is not None else k
    l = config.l if config.l is not None else polar.rank
    try:
        generator = registry.generators.get(args.generated)
    except catalogue.RegistryError:
        raise ValueError(f"Unknown generator {args.generated!r}; expected one of {GENERATORS}") from None
    f = generator(polar, k, m, l)
    return polar, {"xs": None, "embedding": f, "l": l, "m": m}


def cmd_verify(args: argparse.Namespace) -> int:
    config = _config(args)
    if bool(args.input) == bool(args.generated):
        raise ValueError("verify needs exactly one of --input and --generated")
    polar, inputs = _verify_inputs(args, config)
    verdict = verify_theorem(args.theorem, polar, budget=config.budget or DEFAULT_ISO_BUDGET, **inputs)
    path = write_json(config.output / "verdict.json", serialize.header("verify", config.seed) | serialize.verdict_to_json(verdict))
    if verdict.accepted:
        print(f"ACCEPT {args.theorem}: dim N = {verdict.certificate.N.proj_dim}; certificate {path}")
        return EXIT_OK
    print(f"REJECT {args.theorem}: [{verdict.clause}] {verdict.message}")
    return EXIT_REJECT


def cmd_search(args: argparse.Namespace) -> int:
    config = _config(args)
    if args.pattern == "open-problem":
        if config.l is None or config.m is None:
            raise ValueError("The open-problem harness needs -l and -m")
        report = open_problem_search(
            config.kind, config.p, config.l, config.m,
            trials=config.trials, seed=config.seed, budget=config.budget, method=args.method, node_cap=args.node_cap,
        )
    else:
        if config.l is None or config.k is None:
            raise ValueError("search needs -l and -k")
        pattern = Pattern(args.pattern, config.l, config.m if config.m is not None else 0)
        report = search_embeddings(
            config.polar(), pattern, config.k,
            trials=config.trials, seed=config.seed, budget=config.budget, method=args.method, node_cap=args.node_cap,
        )
    _emit(write_json(config.output / "findings.json", serialize.header("search", config.seed) | serialize.search_report_to_json(report)))
    print(f"{len(report.findings)} distinct {report.pattern.name} images in {report.attempted} trials")
    if report.truncated:
        print(f"truncated: {report.trials} trials requested, budget {config.budget}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


# selftest


def _check_counts() -> bool:
    w3 = build_polar_space("symplectic", 3, 2)
    q3 = build_polar_space("hyperbolic", 3, 2)
    return (
        len(build_polar_space("symplectic", 2, 2)) == 15
        and len(w3) == 63
        and len(w3.enumerate_singular(2)) == 135
        and len(q3) == 35
        and len(q3.enumerate_singular(2)) == 30
    )


def _check_axioms() -> bool:
    reports = [build_polar_space(kind, 3, 2).check_axioms() for kind in ("symplectic", "hyperbolic")]
    return all(r["thick_lines"] and r["one_or_all"] and r["no_radical_point"] and r["maximal_rank"] for r in reports)


def _check_apartments() -> bool:
    polar = build_polar_space("symplectic", 3, 2)
    return all(is_embedding(generated_set(polar, k, k, 3).embedding()) for k in range(3))


def _check_automorphism() -> bool:
    return all(len(halfcube_split_and_g(delta).g) == 24 for delta in ("+", "-"))


def _check_dual_apartment() -> bool:
    polar = build_polar_space("symplectic", 3, 2)
    f = generated_set(polar, 2, 2, 3).embedding()
    verdict = verify_theorem("thm4.1", polar, embedding=f, l=3)
    return verdict.accepted and verdict.certificate.N.is_empty


def _check_round_trip() -> bool:
    polar = build_polar_space("symplectic", 4, 2)
    f = generated_set(polar, 1, 1, 4).embedding()
    verdict = verify_theorem("thm4.4", polar, embedding=f, l=4, m=1)
    return verdict.accepted and set(verdict.certificate.members(polar)) == set(f.image)


SELFTESTS: List[Tuple[str, Callable[[], bool]]] = [
    ("point, line and plane counts", _check_counts),
    ("polar space axioms", _check_axioms),
    ("apartments are copies of PJ(3,k)", _check_apartments),
    ("PJ(4,1) top-to-star automorphism", _check_automorphism),
    ("dual apartment accepted", _check_dual_apartment),
    ("certificate regenerates an apartment", _check_round_trip),
]


def cmd_selftest(args: argparse.Namespace) -> int:
    failed = 0
    for name, check in SELFTESTS:
        try:
            ok = check()
        except PolarisError as e:
            logger.error("%s raised %s", name, e)
            ok = False
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        failed += not ok
    return EXIT_OK if failed == 0 else EXIT_REJECT


# parser


def _add_space_options(parser: argparse.ArgumentParser, *, kinds: Sequence[str]) -> None:
    parser.add_argument("--kind", choices=sorted(set(kinds) | set(KIND_ALIASES)), help="Polar space or graph kind")
    parser.add_argument("-n", "--n", dest="n", type=int, help="Rank, or the n of PJ(n,k) and the cubes")
    parser.add_argument("-p", type=int, help="Prime field size")
    parser.add_argument("-k", type=int, help="Grassmann level (projective dimension)")
    parser.add_argument("-m", type=int, help="m of PJ(l,m)")
    parser.add_argument("-l", type=int, help="l of PJ(l,m), or the size of an l-frame")
    parser.add_argument("--seed", type=int, help="64-bit unsigned seed echoed into every output header")
    parser.add_argument("--budget", type=int, help="Cap on isomorphism search nodes or search trials")
    parser.add_argument("--output", help="Output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser("polaris", description="Finite polar spaces, Grassmann graphs and apartment verifiers.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="Export a Grassmann graph or an abstract graph")
    _add_space_options(build, kinds=KINDS + GRAPH_KINDS)
    build.add_argument("--grassmann", dest="k", type=int, help="Grassmann level; same as -k")
    build.add_argument("--export", choices=EXPORT_FORMATS, help="Graph file format")
    build.set_defaults(handler=cmd_build)

    apartment = sub.add_parser("apartment", help="Build an apartment or an l-frame-generated set")
    _add_space_options(apartment, kinds=KINDS)
    apartment.add_argument("--span-check", action="store_true", help="Also report the size of the span closure in the Grassmann space")
    apartment.set_defaults(handler=cmd_apartment)

    verify = sub.add_parser("verify", help="Run an apartment verifier")
    verify.add_argument("theorem", choices=THEOREMS)
    _add_space_options(verify, kinds=KINDS)
    verify.add_argument("--input", help="Verifier input JSON")
    verify.add_argument("--generated", choices=GENERATORS, help="Verify a generated input instead")
    verify.set_defaults(handler=cmd_verify)

    search = sub.add_parser("search", help="Seeded search for PJ(l,m) or H_l images")
    _add_space_options(search, kinds=KINDS)
    search.add_argument("--pattern", choices=("pj", "hypercube", "open-problem"), default="pj")
    search.add_argument("--trials", type=int, help="Number of seeded trials")
    search.add_argument("--method", choices=SEARCH_METHODS, default="auto")
    search.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP, help="Placements per trial")
    search.set_defaults(handler=cmd_search)

    selftest = sub.add_parser("selftest", help="Run the fast acceptance checks")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, PolarisError) as e:
        print(f"polaris {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
