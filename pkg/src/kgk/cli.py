"""Command-line front end.

Every subcommand prints one JSON report (or a plain-text view with --text)
and exits 0 when every check passed, 1 when one failed and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, is_dataclass
from importlib import resources
from pathlib import Path as FilePath
from typing import Any

from . import catalog, dynamics, skew
from .degree import Degree, RankMismatch
from .graphio import SchemaError, load_kgraph, parse_kgraph, serialize_kgraph
from .randgraphs import random_corpus
from .skeleton import (
    GraphError,
    KGraph,
    Path,
    PathError,
    check_hexagon,
    check_row_finite_no_source,
    compose,
    enumerate_paths,
    factor,
    has_no_source,
)
from .skewpaths import skew_condition_a

DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


def jsonable(x: Any) -> Any:
    """Reports as plain JSON values with a stable order."""
    if isinstance(x, Degree):
        return list(x.coords)
    if isinstance(x, Path):
        return {"range": x.rng, "source": x.src, "degree": list(x.degree.coords), "edges": list(x.edges)}
    if isinstance(x, skew.QmodZ):
        return str(x)
    if isinstance(x, dynamics.LazyPath):
        return {"lazy": x.label, "range": x.start}
    if isinstance(x, dynamics.InfPath):
        return {"prefix": jsonable(x.prefix), "cycle": jsonable(x.cycle)}
    if is_dataclass(x) and not isinstance(x, type):
        return {k: jsonable(getattr(x, k)) for k in x.__dataclass_fields__ if not k.startswith("_")}
    if isinstance(x, dict):
        return {_key(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: _key(kv[0]))}
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(jsonable(p)) for p in k)
    return str(jsonable(k))


def report(check: str, ok: bool, status: str = "exact", witness: Any = None, bounds: dict | None = None, **extra) -> dict:
    out = {"check": check, "ok": bool(ok), "status": status, "witness": witness, "bounds": bounds or {}}
    out.update(extra)
    return jsonable(out)


def any_failed(x: Any) -> bool:
    if isinstance(x, dict):
        return x.get("ok") is False or any(any_failed(v) for v in x.values())
    if isinstance(x, list):
        return any(any_failed(v) for v in x)
    return False


def parse_degree(text: str, k: int | None = None) -> Degree:
    try:
        coords = tuple(int(c) for c in str(text).replace("(", "").replace(")", "").split(",") if c.strip())
        d = Degree(coords)
    except ValueError as exc:
        raise UsageError(f"bad degree {text!r}: {exc}") from exc
    if k is not None:
        if len(coords) == 1 and k > 1:
            return Degree(coords * k)
        if len(coords) != k:
            raise UsageError(f"degree {text!r} has {len(coords)} coordinates, graph has rank {k}")
    return d


def _read_graph(path: str | None) -> tuple[KGraph, skew.Weights | None]:
    if path in (None, "-"):
        return parse_kgraph(sys.stdin.read())
    try:
        return load_kgraph(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _need_weights(w: skew.Weights | None) -> skew.Weights:
    if w is None:
        raise UsageError("graph file has no weights")
    return w


def _positive(name: str, value: int) -> int:
    if value < 1:
        raise UsageError(f"{name} must be positive")
    return value


# checks ---------------------------------------------------------------------


def run_validate(g: KGraph) -> dict:
    hexa = check_hexagon(g)
    witness = None if hexa.ok else {"triple": hexa.witness, "left": hexa.left, "right": hexa.right}
    return report(
        "validate",
        hexa.ok,
        witness=witness,
        rank=g.rank,
        vertices=len(g.vertices),
        edges={str(i): len(g.edges_of(i)) for i in range(1, g.rank + 1)},
        triples_checked=hexa.triples_checked,
    )


def run_paths(g: KGraph, v: str, m: Degree) -> dict:
    paths = enumerate_paths(g, v, m)
    return report("paths", True, bounds={"degree": m}, vertex=v, count=len(paths), paths=[list(p.edges) for p in paths])


def run_rowfinite(g: KGraph, m: Degree) -> dict:
    res = check_row_finite_no_source(g, m)
    bad = sorted(v for v, rec in res["per_vertex"].items() if not rec["no_source"])
    return report(
        "rowfinite",
        res["no_source"] and res["closure_holds"],
        witness={"sources": bad} if bad else None,
        bounds={"degree": m},
        per_vertex=res["per_vertex"],
        generators_pass=res["generators_pass"],
        closure_holds=res["closure_holds"],
    )


def run_aperiodic(g: KGraph, bound: Degree, depth: Degree) -> dict:
    res = dynamics.check_condition_a(g, bound, depth)
    witness = {v: {"p": p, "q": q} for v, (p, q) in res.periodic.items()} or None
    return report(
        "aperiodic",
        res.ok,
        status="bounded",
        witness=witness,
        bounds={"shift_bound": bound, "depth": depth},
        per_vertex={v: (a.label if a else None) for v, a in res.per_vertex.items()},
    )


def run_minimal(g: KGraph) -> dict:
    if len(g.vertices) > dynamics.MAX_MINIMAL_VERTICES:
        res = dynamics.minimal_by_sampling(g)
    else:
        res = dynamics.check_minimal(g)
    return report("minimal", res.minimal, status=res.status, witness=res.witness)


def run_contracting(g: KGraph, v0: str, max_m: int, max_deg: Degree) -> dict:
    if v0 not in g.vertices:
        raise UsageError(f"unknown vertex {v0!r}")
    cert = dynamics.check_contracting(g, v0, max_m, max_deg)
    bounds = {"max_m": max_m, "max_deg": max_deg}
    if cert is None:
        return report("contracting", False, status="bounded", bounds=bounds, result="not found within bounds")
    return report(
        "contracting", True, bounds=bounds, certificate=cert.to_dict(), revalidated=dynamics.check_certificate(g, cert)
    )


def run_weights(g: KGraph, w: skew.Weights) -> dict:
    res = skew.validate_weights(g, w)
    return report("weights-check", res.ok, witness=res.violations or None)


def run_skew_solve(g: KGraph, w: skew.Weights, oracle: bool) -> dict:
    res = skew.validate_weights(g, w)
    if not res.ok:
        return report("skew-solve", False, witness=res.violations[0])
    tables, mismatches = [], []
    for pair, perm in sorted(skew.all_fiber_perms(g, w).items()):
        if perm.colors[0] > perm.colors[1]:
            continue
        tables.append(perm.to_dict())
        if oracle:
            ref = skew.brute_force_fiber_congruence(g, w, pair)
            if ref.table != perm.table:
                mismatches.append(list(pair))
    return report(
        "skew-solve",
        not mismatches,
        witness={"pairs": mismatches} if mismatches else None,
        oracle=oracle,
        tables=tables,
    )


def run_skew_verify(g: KGraph, w: skew.Weights, den: int | None) -> dict:
    res = skew.validate_weights(g, w)
    if not res.ok:
        return report("skew-verify", False, witness=res.violations[0])
    perms = skew.all_fiber_perms(g, w)
    laws, first_bad, checks = True, None, 0
    for pair, perm in sorted(perms.items()):
        sample = den or skew.working_modulus(w, pair + perm.target)
        lr = skew.verify_fiber_laws(g, w, perm, sample)
        checks += lr.checks
        if not lr.ok and first_bad is None:
            laws, first_bad = False, {"pair": list(pair), "violation": lr.violations[0]}
    out = {"fiber_checks": checks}
    ok = laws
    if g.rank >= 3:
        hexa = skew.verify_skew_hexagon(g, w, perms)
        out["hexagon_checks"] = hexa.checks
        if not hexa.ok:
            ok = False
            first_bad = first_bad or {"hexagon": hexa.witness}
    return report("skew-verify", ok, witness=first_bad, bounds={"den": den or "working modulus"}, **out)


def run_skew_build(g: KGraph, w: skew.Weights, N: int, output: str | None) -> dict:
    sk = skew.build_skew_graph(g, w, N)
    hexa = check_hexagon(sk)
    counts = skew.skew_preimage_counts(g, w, N, sk)
    if output:
        FilePath(output).write_text(serialize_kgraph(sk), encoding="utf-8")
    return report(
        "skew-build",
        hexa.ok,
        witness=None if hexa.ok else {"triple": hexa.witness},
        bounds={"resolution": N},
        vertices=len(sk.vertices),
        edges={str(i): len(sk.edges_of(i)) for i in range(1, sk.rank + 1)},
        no_source=has_no_source(sk),
        incoming={f"{v}|{i}": c["range"] for (v, i), c in sorted(counts.items())},
        output=output,
    )


# report-all -----------------------------------------------------------------


def fixture_dir() -> FilePath:
    return FilePath(str(resources.files("kgk") / "fixtures"))


def _safe(fn, *args) -> dict:
    try:
        return fn(*args)
    except (GraphError, PathError, skew.SkewError, dynamics.DynamicsError) as exc:
        return {"check": getattr(fn, "__name__", "check").replace("run_", ""), "ok": None, "status": "skipped", "reason": str(exc)}


def graph_report(g: KGraph, w: skew.Weights | None) -> dict:
    k = g.rank
    out = {
        "validate": run_validate(g),
        "rowfinite": run_rowfinite(g, Degree.ones(k) * 2),
        "minimal": run_minimal(g),
    }
    if has_no_source(g):
        out["aperiodic"] = _safe(run_aperiodic, g, Degree.ones(k) * 3, Degree.ones(k) * 4)
    out["contracting"] = _safe(run_contracting, g, g.vertices[0], 2, Degree.ones(k) * (2 if k == 1 else 1))
    if w is not None:
        out["weights-check"] = run_weights(g, w)
        if out["weights-check"]["ok"]:
            out["skew-solve"] = run_skew_solve(g, w, True)
            out["skew-verify"] = run_skew_verify(g, w, None)
    return out


def factorization_suite(seed: int, count: int = 20) -> dict:
    """Unique factorization on a seeded random corpus, paths up to degree 2 per colour."""
    failures = []
    for t, g in enumerate(random_corpus(seed, count)):
        top = Degree.ones(g.rank) * 2
        for v in g.vertices:
            for d in top.below():
                for lam in enumerate_paths(g, v, d):
                    for m in d.below():
                        head, tail = factor(g, lam, m)
                        splits = [
                            (mu, nu)
                            for mu in enumerate_paths(g, v, m)
                            for nu in enumerate_paths(g, mu.src, d - m)
                            if compose(g, mu, nu) == lam
                        ]
                        if splits != [(head, tail)]:
                            failures.append({"graph": t, "path": list(lam.edges), "m": list(m.coords)})
    return report("factorization", not failures, witness=failures[:1] or None, bounds={"seed": seed, "graphs": count})


def run_report_all(directory: str | None, seed: int) -> dict:
    root = FilePath(directory) if directory else fixture_dir()
    files = sorted(root.glob("*.json"))
    if not files:
        raise UsageError(f"no .json graph files in {root}")
    graphs = {}
    for f in files:
        g, w = load_kgraph(str(f))
        graphs[f.name] = graph_report(g, w)
    suite_seed = random.Random(seed).randrange(2**31)
    suites = {"factorization": factorization_suite(suite_seed)}
    return {
        "check": "report-all",
        "seed": seed,
        "graphs": graphs,
        "suites": suites,
        "ok": not any_failed(graphs) and not any_failed(suites),
    }


# text view ------------------------------------------------------------------


def to_text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + json.dumps(obj)
        return "\n".join(f"{pad}-\n{to_text(v, indent + 1)}" for v in obj)
    return pad + json.dumps(obj)


# argument parsing -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized suites (KGK_SEED overrides)")

    p = _Parser(prog="kgk", description="Checks for finite k-graphs and their circle skew products.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def graph_cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.add_argument("graph", nargs="?", default="-", help="graph JSON file ('-' or omitted: stdin)")
        return sp

    graph_cmd("validate", "validate a presentation and its hexagon condition")
    sp = graph_cmd("paths", "enumerate paths of a degree with a given range")
    sp.add_argument("vertex")
    sp.add_argument("degree", help="comma-separated, e.g. 2,1")
    sp = graph_cmd("rowfinite", "row-finite / no-source report at a degree")
    sp.add_argument("degree")
    sp = graph_cmd("aperiodic", "bounded search for aperiodic paths at every vertex")
    sp.add_argument("--depth", default="8")
    sp.add_argument("--shift-bound", default="4")
    graph_cmd("minimal", "exhaustive minimality check")
    sp = graph_cmd("contracting", "search for a contracting certificate")
    sp.add_argument("v0")
    sp.add_argument("--max-m", type=int, default=3)
    sp.add_argument("--max-deg", default="3")
    graph_cmd("weights-check", "coprimality and flip conditions on the weights")
    sp = graph_cmd("skew-solve", "solve the fibre congruences")
    sp.add_argument("--oracle", action="store_true", help="compare with exhaustive search")
    sp = graph_cmd("skew-verify", "verify fibre laws (and the lifted hexagon for rank >= 3)")
    sp.add_argument("--den", type=int, default=None)
    sp = graph_cmd("skew-build", "finite grid model of the skew product")
    sp.add_argument("--resolution", type=int, required=True)
    sp.add_argument("--output", "-o", default=None, help="write the built graph here")
    sp = graph_cmd("skew-aperiodic", "bounded Condition (A) sampling on the continuous skew product")
    sp.add_argument("--shift-bound", default="3")
    sp.add_argument("--grid", type=int, default=6)
    sp = sub.add_parser("example", help="print a built-in example as a graph file", parents=[common])
    sp.add_argument("name", choices=catalog.EXAMPLES)
    sp.add_argument("params", nargs="*")
    sp.add_argument("--classify", action="store_true", help="report the stated sufficient conditions instead")
    sp = sub.add_parser("report-all", help="run every check on a directory of graph files", parents=[common])
    sp.add_argument("directory", nargs="?", default=None, help="defaults to the bundled fixtures")
    return p


def resolve_seed(arg: int | None) -> int:
    env = os.environ.get("KGK_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"KGK_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED if arg is None else arg


def dispatch(args: argparse.Namespace) -> dict | str:
    cmd = args.command
    seed = resolve_seed(args.seed)
    if cmd == "example":
        if args.classify:
            res = catalog.classify_example(args.name, args.params)
            return report("classify", True, name=args.name, params=args.params, **res)
        g, w = catalog.generate_example(args.name, args.params)
        return serialize_kgraph(g, w)
    if cmd == "report-all":
        return run_report_all(args.directory, seed)
    if cmd == "validate":
        try:
            g, _ = _read_graph(args.graph)
        except GraphError as exc:
            return report("validate", False, witness={"error": str(exc), "pair": exc.pair})
        return run_validate(g)
    g, w = _read_graph(args.graph)
    k = g.rank
    if cmd == "paths":
        if args.vertex not in g.vertices:
            raise UsageError(f"unknown vertex {args.vertex!r}")
        return run_paths(g, args.vertex, parse_degree(args.degree, k))
    if cmd == "rowfinite":
        return run_rowfinite(g, parse_degree(args.degree, k))
    if cmd == "aperiodic":
        if not has_no_source(g):
            raise UsageError("graph has a source; infinite paths need not exist")
        return run_aperiodic(g, parse_degree(args.shift_bound, k), parse_degree(args.depth, k))
    if cmd == "minimal":
        return run_minimal(g)
    if cmd == "contracting":
        return run_contracting(g, args.v0, _positive("max-m", args.max_m), parse_degree(args.max_deg, k))
    w = _need_weights(w)
    if cmd == "weights-check":
        return run_weights(g, w)
    if cmd == "skew-solve":
        return run_skew_solve(g, w, args.oracle)
    if cmd == "skew-verify":
        return run_skew_verify(g, w, None if args.den is None else _positive("den", args.den))
    if cmd == "skew-build":
        return run_skew_build(g, w, _positive("resolution", args.resolution), args.output)
    if cmd == "skew-aperiodic":
        res = skew_condition_a(g, w, parse_degree(args.shift_bound, k), _positive("grid", args.grid))
        failed = [s for s in res.samples if s["witness"] is None]
        return report(
            "skew-aperiodic",
            res.ok,
            status="bounded",
            witness=failed[:1] or None,
            bounds={"shift_bound": res.bound, "grid": args.grid, "denominator": res.denominator},
            samples=res.samples,
        )
    raise UsageError(f"unknown subcommand {cmd!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help(sys.stderr)
            return 2
        out = dispatch(args)
    except UsageError as exc:
        print(f"kgk: error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, GraphError, PathError, RankMismatch, skew.SkewError, dynamics.DynamicsError) as exc:
        print(f"kgk: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(out, str):
        sys.stdout.write(out)
        return 0
    if args.text:
        print(to_text(out))
    else:
        print(json.dumps(out, indent=2, sort_keys=True))
    return 1 if any_failed(out) else 0


if __name__ == "__main__":
    sys.exit(main())
