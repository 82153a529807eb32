"""Command line front end: single-graph queries and conjecture sweeps.

Subcommands: spectrum, bounds, exact, diagnose, transfer, conjecture.  Every
command prints one UTF-8 JSON document tagged with a schema version.  Exit
codes: 0 success, 1 input error, 2 timeout.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .bounds import WeightedCompatibleMatrix, bound_report, hoffman_bilu
from .colouring import Colouring, Mode, check_improper
from .graphs import (
    Graph,
    complete_graph,
    emit_graph6,
    named_graph,
    parse_edgelist,
    parse_graph6,
    strong_product,
)
from .hoffman import diagnose_hoffman
from .smallgraphs import GENERATION_CAP, connected_graphs
from .solvers import (
    SolveResult,
    alpha_d,
    chromatic_bfold,
    chromatic_clustered,
    chromatic_improper,
    clique_number,
    fractional_chromatic,
)
from .spectra import MatrixKind, spectrum
from .transfer import descend

__all__ = ["ConjectureRecord", "SweepSpec", "main", "run_sweep"]

SCHEMA = 1
TIGHT_TOL = 1e-6


class CliInputError(ValueError):
    """Bad flags or malformed graph input; maps to exit code 1."""


_SHORTHAND = re.compile(r"^([ckp])(\d+)$", re.IGNORECASE)
_BIPARTITE = re.compile(r"^k(\d+),(\d+)$", re.IGNORECASE)


def resolve_named(text: str) -> Graph:
    """Family names with parameters, plus c<N>/k<N>/p<N>/k<A>,<B> shorthands."""
    token = text.strip()
    m = _BIPARTITE.match(token)
    if m:
        return named_graph("complete_bipartite", (int(m.group(1)), int(m.group(2))))
    m = _SHORTHAND.match(token)
    if m:
        family = {"c": "cycle", "k": "complete", "p": "path"}[m.group(1).lower()]
        return named_graph(family, (int(m.group(2)),))
    parts = token.split(",")
    try:
        return named_graph(parts[0], tuple(int(x) for x in parts[1:]))
    except ValueError as e:
        raise CliInputError(str(e)) from e


def load_graph(args: argparse.Namespace) -> Graph:
    sources = [s for s in ("graph6", "edgelist", "named") if getattr(args, s, None)]
    if len(sources) != 1:
        raise CliInputError("give exactly one of --graph6, --edgelist, --named")
    if args.graph6:
        try:
            return parse_graph6(args.graph6)
        except ValueError as e:
            raise CliInputError(f"bad graph6: {e}") from e
    if args.edgelist:
        try:
            with open(args.edgelist, encoding="utf-8") as fh:
                return parse_edgelist(fh.read())
        except (OSError, ValueError) as e:
            raise CliInputError(f"bad edge list: {e}") from e
    return resolve_named(args.named)


def parse_colours(text: str, expected: int) -> Colouring:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError as e:
        raise CliInputError(f"bad colour list: {e}") from e
    if len(values) != expected:
        raise CliInputError(f"colour list has {len(values)} entries, expected {expected}")
    try:
        return Colouring.from_list(values)
    except ValueError as e:
        raise CliInputError(str(e)) from e


def _solve_exit(result: SolveResult) -> int:
    return 2 if result.status == "timeout" else 0


# -- subcommands -----------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> tuple[dict, int]:
    g = load_graph(args)
    kind = {
        "adjacency": MatrixKind.ADJACENCY,
        "laplacian": MatrixKind.LAPLACIAN,
        "signless": MatrixKind.SIGNLESS_LAPLACIAN,
    }[args.kind]
    s = spectrum(g, kind)
    payload = {
        "n": g.n,
        "kind": args.kind,
        "values": [float(v) for v in s.values],
        "groups": [[value, count] for value, count in s.groups()],
    }
    return payload, 0


def cmd_bounds(args: argparse.Namespace) -> tuple[dict, int]:
    g = load_graph(args)
    weights = None
    if args.weights:
        try:
            with open(args.weights, encoding="utf-8") as fh:
                weights = WeightedCompatibleMatrix.from_text(g, fh.read())
        except (OSError, ValueError) as e:
            raise CliInputError(f"bad weights file: {e}") from e
    report = bound_report(g, args.d, m_max=args.m, weights=weights)
    return report.to_json(), 0


def cmd_exact(args: argparse.Namespace) -> tuple[dict, int]:
    g = load_graph(args)
    b = args.b
    try:
        if args.mode == "proper":
            result = (
                chromatic_bfold(g, b, Mode.proper(), timeout=args.timeout)
                if b > 1
                else chromatic_improper(g, 0, timeout=args.timeout)
            )
        elif args.mode == "improper":
            if args.d is None:
                raise CliInputError("--mode improper needs -d")
            result = (
                chromatic_bfold(g, b, Mode.improper(args.d), timeout=args.timeout)
                if b > 1
                else chromatic_improper(g, args.d, timeout=args.timeout)
            )
        elif args.mode == "clustered":
            if args.t is None:
                raise CliInputError("--mode clustered needs -t")
            result = (
                chromatic_bfold(g, b, Mode.clustered(args.t), timeout=args.timeout)
                if b > 1
                else chromatic_clustered(g, args.t, timeout=args.timeout)
            )
        elif args.mode == "fractional":
            if args.d is not None:
                mode = Mode.improper(args.d)
            elif args.t is not None:
                mode = Mode.clustered(args.t)
            else:
                mode = Mode.proper()
            result = fractional_chromatic(g, mode)
        elif args.mode == "alpha":
            result = alpha_d(g, args.d if args.d is not None else 0, timeout=args.timeout)
        else:
            result = clique_number(g, timeout=args.timeout)
    except ValueError as e:
        raise CliInputError(str(e)) from e
    payload = {"mode": args.mode, "d": args.d, "t": args.t, "b": b, "n": g.n}
    payload.update(result.to_json())
    return payload, _solve_exit(result)


def cmd_diagnose(args: argparse.Namespace) -> tuple[dict, int]:
    g = load_graph(args)
    if args.colours:
        colouring = parse_colours(args.colours, g.n)
        solved = None
    else:
        solved = chromatic_improper(g, args.d, timeout=args.timeout)
        if solved.status == "timeout":
            return {"status": "timeout", "d": args.d, "n": g.n}, 2
        colouring = solved.witness
    try:
        diag = diagnose_hoffman(g, args.d, colouring, check_uniqueness=args.uniqueness)
    except ValueError as e:
        raise CliInputError(str(e)) from e
    payload = diag.to_json()
    payload["colouring"] = colouring.to_json()
    if solved is not None:
        payload["exact_value"] = solved.value
    return payload, 0


def cmd_transfer(args: argparse.Namespace) -> tuple[dict, int]:
    g = load_graph(args)
    t, ell = args.t, args.l
    if t is None:
        raise CliInputError("transfer needs -t")
    product = strong_product(g, complete_graph(t))
    if args.colours:
        product_colouring = parse_colours(args.colours, product.n)
        product_value = None
    else:
        solved = chromatic_clustered(product, ell * t, timeout=args.timeout)
        if solved.status == "timeout":
            return {"status": "timeout", "t": t, "l": ell, "n": g.n}, 2
        product_colouring = solved.witness
        product_value = solved.value
    try:
        res = descend(g, product_colouring, t, ell)
    except ValueError as e:
        raise CliInputError(str(e)) from e
    payload = {
        "n": g.n,
        "t": t,
        "l": ell,
        "product_value": product_value,
        "base_colouring": res.colouring.to_json(),
        "num_colours": res.colouring.num_colours,
        "trace": res.trace.to_json(),
    }
    return payload, 0


# -- conjecture sweep ------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    """One conjecture sweep: a family of graphs crossed with improperness values."""

    family: str
    graphs: tuple[Graph, ...]
    ds: tuple[int, ...]
    timeout: float
    jobs: int

    def __post_init__(self):
        if not self.ds or any(d < 1 for d in self.ds):
            raise ValueError("d values must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    @property
    def ts(self) -> tuple[int, ...]:
        """Clustering parameters paired with each d: always d+1."""
        return tuple(d + 1 for d in self.ds)


@dataclass(frozen=True)
class ConjectureRecord:
    """Outcome of one (graph, d) instance; witnesses re-validate on emission."""

    graph6: str
    n: int
    d: int
    chi: int | None
    chi_improper_product: int | None
    chi_clustered_product: int | None
    best_lower: int | None
    best_lower_name: str | None
    status: str
    annotations: tuple[str, ...]
    witness: dict | None
    millis: float

    def to_json(self) -> dict:
        return {
            "graph6": self.graph6,
            "n": self.n,
            "d": self.d,
            "chi": self.chi,
            "chi_improper_product": self.chi_improper_product,
            "chi_clustered_product": self.chi_clustered_product,
            "best_lower": self.best_lower,
            "best_lower_name": self.best_lower_name,
            "status": self.status,
            "annotations": list(self.annotations),
            "witness": self.witness,
            "millis": round(self.millis, 3),
        }


def _sweep_instance(task: tuple[Graph, int, float]) -> ConjectureRecord:
    g, d, timeout = task
    product = strong_product(g, complete_graph(d + 1))
    base = chromatic_improper(g, 0, timeout=timeout)
    improper = chromatic_improper(product, d, timeout=timeout)
    clustered = chromatic_clustered(product, d + 1, timeout=timeout)
    report = bound_report(product, d)
    millis = base.millis + improper.millis + clustered.millis

    if "timeout" in (base.status, improper.status, clustered.status):
        return ConjectureRecord(
            emit_graph6(g), g.n, d, base.value, improper.value, clustered.value,
            report.best_lower, report.best_lower_name, "timeout", (), None, millis,
        )

    # the clustered equality is a proven theorem: a mismatch is a solver bug
    assert clustered.value == base.value, (emit_graph6(g), d, clustered.value, base.value)
    assert improper.value <= base.value, (emit_graph6(g), d, improper.value, base.value)

    annotations = []
    if d <= 1:
        annotations.append("proven:d=1")
    if base.value <= 4:
        annotations.append("proven:chi<=4")
    omega = clique_number(g).value
    if omega == base.value:
        annotations.append("proven:perfect-case")
    if g.edge_count:
        if abs(hoffman_bilu(g, 0) - base.value) <= TIGHT_TOL:
            annotations.append("proven:hoffman-tight")

    witness = None
    if improper.value < base.value:
        status = "counterexample"
        assert not check_improper(product, improper.witness, d)
        witness = improper.witness.to_json()
    else:
        status = "verified"
    return ConjectureRecord(
        emit_graph6(g), g.n, d, base.value, improper.value, clustered.value,
        report.best_lower, report.best_lower_name, status, tuple(annotations),
        witness, millis,
    )


def run_sweep(spec: SweepSpec) -> dict:
    """Execute a sweep; records keep input order regardless of worker timing."""
    tasks = [(g, d, spec.timeout) for g in spec.graphs for d in spec.ds]
    if spec.jobs == 1:
        records = [_sweep_instance(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            records = list(pool.map(_sweep_instance, tasks))
    return {
        "schema": SCHEMA,
        "command": "conjecture",
        "family": spec.family,
        "d_values": list(spec.ds),
        "t_values": list(spec.ts),
        "timeout": spec.timeout,
        "instances": len(records),
        "counterexamples": sum(r.status == "counterexample" for r in records),
        "timeouts": sum(r.status == "timeout" for r in records),
        "records": [r.to_json() for r in records],
    }


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise CliInputError(f"bad integer list {text!r}") from e


def cmd_conjecture(args: argparse.Namespace) -> tuple[dict, int]:
    ds = _parse_int_list(args.d or "1")
    if args.all_connected is not None:
        if not 1 <= args.all_connected <= GENERATION_CAP:
            raise CliInputError(f"--all-connected supports 1..{GENERATION_CAP}")
        graphs = tuple(
            g for n in range(1, args.all_connected + 1) for g in connected_graphs(n)
        )
        family = f"all-connected<= {args.all_connected}"
    elif args.graph6_file:
        try:
            with open(args.graph6_file, encoding="utf-8") as fh:
                lines = [ln.strip() for ln in fh if ln.strip()]
            graphs = tuple(parse_graph6(ln) for ln in lines)
        except (OSError, ValueError) as e:
            raise CliInputError(f"bad graph6 file: {e}") from e
        family = f"graph6-file:{args.graph6_file}"
    elif args.named:
        graphs = tuple(resolve_named(token) for token in args.named)
        family = "named:" + ",".join(args.named)
    else:
        raise CliInputError("give --all-connected N, --graph6-file PATH, or --named NAME")
    try:
        spec = SweepSpec(family, graphs, ds, args.timeout, args.jobs)
    except ValueError as e:
        raise CliInputError(str(e)) from e
    return run_sweep(spec), 0


# -- wiring ----------------------------------------------------------------


def _add_graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph6", help="graph6 string")
    p.add_argument("--edgelist", help="path to an edge list file ('n m' header)")
    p.add_argument("--named", help="family name, e.g. petersen, c5, k6, k3,3, complete,6")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxchrom",
        description="improper and clustered colouring toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues with multiplicity groups")
    _add_graph_flags(p)
    p.add_argument("--kind", choices=["adjacency", "laplacian", "signless"],
                   default="adjacency")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bounds", help="lower bound report")
    _add_graph_flags(p)
    p.add_argument("-d", type=int, default=0, help="improperness")
    p.add_argument("-m", type=int, default=3, help="max top-eigenvalue count")
    p.add_argument("--weights", help="weighted compatible matrix file")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("exact", help="exact chromatic solvers")
    _add_graph_flags(p)
    p.add_argument("--mode", default="improper",
                   choices=["proper", "improper", "clustered", "fractional",
                            "alpha", "clique"])
    p.add_argument("-d", type=int, default=None)
    p.add_argument("-t", type=int, default=None)
    p.add_argument("-b", type=int, default=1, help="fold size")
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("diagnose", help="spectral equality diagnostics")
    _add_graph_flags(p)
    p.add_argument("-d", type=int, default=0)
    p.add_argument("--colours", help="comma-separated colours; solved if omitted")
    p.add_argument("--uniqueness", action="store_true")
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("transfer", help="clustered product descent")
    _add_graph_flags(p)
    p.add_argument("-t", type=int, required=True)
    p.add_argument("-l", type=int, default=1)
    p.add_argument("--colours", help="product colouring; solved if omitted")
    p.add_argument("--timeout", type=float, default=None)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("conjecture", help="sweep chi(G) vs improper product chi")
    p.add_argument("--all-connected", type=int, default=None, metavar="N")
    p.add_argument("--graph6-file")
    p.add_argument("--named", action="append")
    p.add_argument("-d", default="1", help="comma-separated improperness values")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_conjecture)

    for sp in sub.choices.values():
        sp.add_argument("--out", help="write JSON here instead of stdout")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.func(args)
    except CliInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if "schema" not in payload:
        payload = {"schema": SCHEMA, "command": args.command, **payload}
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
