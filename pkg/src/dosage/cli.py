"""Command-line surface: extract, oracle, spectral, classify, verify, rerun.

Exit codes: 0 success, 1 input error, 2 enumeration-cap refusal (retry with
--force), 3 internal invariant violation. Every run writes a machine-readable
run manifest sufficient to reproduce it via the rerun subcommand; data outputs
are byte-identical across identical invocations (the manifest's timings field
is the one exception).
"""

from __future__ import annotations

import argparse
import csv
import io as stdio
import json
import math
import platform
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .driver import DosageConfig, dosage, select_delta, verify_solution
from .errors import CapExceeded
from .graph import Graph, density, diameter
from .hgnn import evaluate, train_classifier
from .hypergraph import cut, ensure_coverage, from_subgraphs
from .io import (
    dumps_canonical,
    hypergraph_from_json,
    hypergraph_to_json,
    incidence_to_csv,
    model_to_json,
    parse_edge_list,
    sha256_text,
    write_text_atomic,
)
from .peeling import DEFAULT_ENUMERATION_CAP, densest_subgraph_exact, densest_subgraph_peel
from .scoring import SubgraphCollection
from .synthetic import planted_partition, stratified_masks

MANIFEST_NAME = "run_manifest.json"


class _UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are input errors (exit 1), not the cap-refusal code 2.
    def error(self, message):
        raise _UsageError(message)


def _add_extraction_flags(sp) -> None:
    sp.add_argument("--k", type=int, required=True, help="number of subgraphs to extract")
    sp.add_argument("--lambda", dest="lam", type=Fraction, default=Fraction(1),
                    help="density/diversity trade-off (decimal or p/q)")
    sp.add_argument("--alpha", type=int, required=True, help="minimum subgraph size")
    sp.add_argument("--beta", type=int, required=True, help="maximum subgraph size")
    sp.add_argument("--delta", type=float, default=None,
                    help="diameter bound override (default: derived from the graph)")
    sp.add_argument("--ensure-coverage", action="store_true",
                    help="patch vertices left outside every hyperedge")
    sp.add_argument("--weights", choices=("unit", "density"), default="unit",
                    help="hyperedge weights: 1.0 or the source subgraph density")
    _add_cap_flags(sp)


def _add_cap_flags(sp) -> None:
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP,
                    help="max vertex count for exhaustive enumeration")
    sp.add_argument("--force", action="store_true", help="enumerate past the cap")


def _add_common_flags(sp) -> None:
    sp.add_argument("--seed", type=int, default=0, help="seed for anything randomized")
    sp.add_argument("--out-dir", type=Path, default=Path("."), help="output directory")
    sp.add_argument("--format", choices=("json", "csv"), default="json",
                    help="report file format")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dosage", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    extract = sub.add_parser("extract", help="run the extraction and emit the hypergraph")
    extract.add_argument("edgelist", type=Path)
    _add_extraction_flags(extract)
    _add_common_flags(extract)
    extract.set_defaults(handler=cmd_extract)

    oracle = sub.add_parser("oracle", help="compare greedy peeling against the exhaustive search")
    oracle.add_argument("edgelist", type=Path)
    oracle.add_argument("--alpha", type=int, required=True)
    oracle.add_argument("--beta", type=int, required=True)
    oracle.add_argument("--delta", type=float, default=None)
    _add_cap_flags(oracle)
    _add_common_flags(oracle)
    oracle.set_defaults(handler=cmd_oracle)

    spectral = sub.add_parser("spectral", help="adjacency and cut reports for a hypergraph")
    spectral.add_argument("hypergraph", type=Path, help="hypergraph JSON file")
    spectral.add_argument("--select", required=True,
                          help="comma-separated vertex labels forming the cut side S")
    spectral.add_argument("--cut-mode", choices=("normalized", "literal"), default="normalized")
    _add_common_flags(spectral)
    spectral.set_defaults(handler=cmd_spectral)

    classify = sub.add_parser("classify", help="end-to-end node classification")
    classify.add_argument("edgelist", type=Path, nargs="?", default=None)
    classify.add_argument("--synthetic", action="store_true",
                          help="use the built-in planted two-community instance")
    classify.add_argument("--graph-seed", type=int, default=7,
                          help="seed of the synthetic graph (ignored with an edge list)")
    classify.add_argument("--features", type=Path, default=None,
                          help="CSV of label,value,... rows (default: identity features)")
    classify.add_argument("--labels", type=Path, default=None,
                          help="CSV of label,class rows (required with an edge list)")
    classify.add_argument("--train-fraction", type=float, default=0.2)
    classify.add_argument("--hidden-dim", type=int, default=16)
    classify.add_argument("--num-layers", type=int, default=2)
    classify.add_argument("--steps", type=int, default=300)
    classify.add_argument("--step-size", type=float, default=0.5)
    _add_extraction_flags(classify)
    _add_common_flags(classify)
    classify.set_defaults(handler=cmd_classify)

    verify = sub.add_parser("verify", help="check a solution against the constraints")
    verify.add_argument("solution", type=Path, help="hypergraph JSON holding the subgraphs")
    verify.add_argument("edgelist", type=Path)
    verify.add_argument("--alpha", type=int, required=True)
    verify.add_argument("--beta", type=int, required=True)
    verify.add_argument("--r-min", type=Fraction, default=Fraction(0),
                        help="density threshold every subgraph must reach")
    _add_common_flags(verify)
    verify.set_defaults(handler=cmd_verify)

    rerun = sub.add_parser("rerun", help="re-execute a run from its manifest")
    rerun.add_argument("manifest", type=Path)
    rerun.add_argument("--out-dir", type=Path, default=None,
                       help="override the recorded output directory")
    rerun.set_defaults(handler=cmd_rerun)
    return parser


def _jsonable(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def _options_dict(args: argparse.Namespace) -> dict:
    skip = {"handler", "subcommand"}
    return {k: _jsonable(v) for k, v in vars(args).items() if k not in skip}


def _write_report(out_dir: Path, stem: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        name = f"{stem}.json"
        write_text_atomic(out_dir / name, dumps_canonical(report))
    else:
        name = f"{stem}.csv"
        buffer = stdio.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key in sorted(report):
            value = report[key]
            writer.writerow([key, value if isinstance(value, (str, int, float, bool))
                             else json.dumps(value)])
        write_text_atomic(out_dir / name, buffer.getvalue())
    return name


def _write_manifest(args, inputs: dict, outputs: list[str], elapsed: float) -> None:
    manifest = {
        "format_version": 1,
        "tool": "dosage",
        "version": __version__,
        "python": platform.python_version(),
        "subcommand": args.subcommand,
        "options": _options_dict(args),
        "inputs": inputs,
        "outputs": sorted(outputs),
        "timings": {"total_seconds": round(elapsed, 6)},
    }
    write_text_atomic(Path(args.out_dir) / MANIFEST_NAME, dumps_canonical(manifest))


def _read_input(path: Path, inputs: dict) -> str:
    text = Path(path).read_text()
    inputs[str(path)] = f"sha256:{sha256_text(text)}"
    return text


def _build_config(args, n: int) -> DosageConfig:
    return DosageConfig(
        k=args.k,
        alpha=args.alpha,
        beta=args.beta,
        lam=args.lam,
        delta_override=args.delta,
        enumeration_cap=args.cap,
        force=args.force,
    )


def _build_hypergraph(g: Graph, collection: SubgraphCollection, args):
    weights = None
    if args.weights == "density":
        weights = [float(density(g, entry)) for entry in collection.entries]
    h = from_subgraphs(g, collection, weights, bounds=(args.alpha, args.beta))
    if args.ensure_coverage:
        h = ensure_coverage(h, g)
    return h


def cmd_extract(args) -> list[str]:
    inputs: dict = {}
    t0 = time.perf_counter()
    g, labels = parse_edge_list(_read_input(args.edgelist, inputs))
    cfg = _build_config(args, g.vertex_count)
    collection = dosage(g, cfg)
    h = _build_hypergraph(g, collection, args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_text_atomic(out_dir / "hypergraph.json", hypergraph_to_json(h, labels))
    write_text_atomic(out_dir / "incidence.csv", incidence_to_csv(h, labels))
    outputs = ["hypergraph.json", "incidence.csv"]
    _write_manifest(args, inputs, outputs, time.perf_counter() - t0)
    print(f"extracted {len(collection)} subgraphs -> {h.hyperedge_count} hyperedges")
    return outputs


def cmd_oracle(args) -> list[str]:
    inputs: dict = {}
    t0 = time.perf_counter()
    g, labels = parse_edge_list(_read_input(args.edgelist, inputs))
    delta = args.delta if args.delta is not None else select_delta(g)
    peel = densest_subgraph_peel(g, args.alpha, args.beta, delta)
    exact = densest_subgraph_exact(g, args.alpha, args.beta, delta,
                                   cap=args.cap, force=args.force)

    def describe(selection):
        if selection is None:
            return None
        d = density(g, selection)
        return {
            "members": [labels[v] for v in selection],
            "density": float(d),
            "density_exact": str(d),
            "diameter": _finite_or_str(diameter(g, selection)),
        }

    peel_d = density(g, peel) if peel is not None else None
    exact_d = density(g, exact) if exact is not None else None
    report = {
        "format_version": 1,
        "delta": float(delta),
        "alpha": args.alpha,
        "beta": args.beta,
        "peel": describe(peel),
        "exact": describe(exact),
        "exact_dominates": (peel is None) or (exact_d is not None and exact_d >= peel_d),
        "agree": peel == exact,
    }
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [_write_report(out_dir, "oracle_report", report, args.format)]
    _write_manifest(args, inputs, outputs, time.perf_counter() - t0)
    print(f"peel={report['peel'] and report['peel']['members']} "
          f"exact={report['exact'] and report['exact']['members']}")
    return outputs


def _finite_or_str(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def cmd_spectral(args) -> list[str]:
    inputs: dict = {}
    t0 = time.perf_counter()
    h, labels = hypergraph_from_json(_read_input(args.hypergraph, inputs))
    index = {label: v for v, label in enumerate(labels)}
    try:
        selection = [index[token] for token in args.select.split(",") if token]
    except KeyError as exc:
        raise ValueError(f"--select references unknown label {exc.args[0]!r}") from None

    adjacency_matrix = _adjacency_csv(h, labels)
    report_source = cut(h, selection, mode=args.cut_mode)
    report = {
        "format_version": 1,
        "selection": sorted(args.select.split(",")),
        "cut_mode": args.cut_mode,
        "boundary": list(report_source.boundary),
        "vol_s": float(report_source.vol_s),
        "vol_sc": float(report_source.vol_sc),
        "vol_boundary": float(report_source.vol_boundary),
        "objective": float(report_source.objective),
    }
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_text_atomic(out_dir / "adjacency.csv", adjacency_matrix)
    outputs = ["adjacency.csv", _write_report(out_dir, "cut_report", report, args.format)]
    _write_manifest(args, inputs, outputs, time.perf_counter() - t0)
    print(f"boundary hyperedges: {list(report_source.boundary)}")
    return outputs


def _adjacency_csv(h, labels) -> str:
    from .hypergraph import adjacency
    from .io import _csv_safe_labels

    _csv_safe_labels(labels)
    matrix = adjacency(h)
    lines = ["vertex," + ",".join(labels)]
    for v in range(h.vertex_count):
        lines.append(labels[v] + "," + ",".join(str(float(x)) for x in matrix[v]))
    return "\n".join(lines) + "\n"


def _parse_features(text: str, labels: tuple[str, ...]) -> np.ndarray:
    index = {label: v for v, label in enumerate(labels)}
    rows: dict[int, list[float]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = line.split(",")
        if cells[0] not in index:
            raise ValueError(f"features line {lineno}: unknown label {cells[0]!r}")
        rows[index[cells[0]]] = [float(c) for c in cells[1:]]
    missing = [labels[v] for v in range(len(labels)) if v not in rows]
    if missing:
        raise ValueError(f"features file is missing labels: {missing[:5]}")
    width = {len(r) for r in rows.values()}
    if len(width) != 1:
        raise ValueError("features file has rows of differing width")
    return np.array([rows[v] for v in range(len(labels))], dtype=float)


def _parse_class_labels(text: str, labels: tuple[str, ...]) -> np.ndarray:
    index = {label: v for v, label in enumerate(labels)}
    classes: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise ValueError(f"labels line {lineno}: expected label,class")
        if cells[0] not in index:
            raise ValueError(f"labels line {lineno}: unknown label {cells[0]!r}")
        classes[index[cells[0]]] = int(cells[1])
    missing = [labels[v] for v in range(len(labels)) if v not in classes]
    if missing:
        raise ValueError(f"labels file is missing labels: {missing[:5]}")
    return np.array([classes[v] for v in range(len(labels))], dtype=int)


def cmd_classify(args) -> list[str]:
    inputs: dict = {}
    t0 = time.perf_counter()
    if args.synthetic:
        g, communities = planted_partition(seed=args.graph_seed)
        labels = tuple(str(v) for v in range(g.vertex_count))
        y = np.asarray(communities, dtype=int)
        x = np.eye(g.vertex_count)
    else:
        if args.edgelist is None:
            raise ValueError("classify needs an edge list or --synthetic")
        if args.labels is None:
            raise ValueError("--labels is required when classifying an edge list")
        g, labels = parse_edge_list(_read_input(args.edgelist, inputs))
        y = _parse_class_labels(_read_input(args.labels, inputs), labels)
        if args.features is not None:
            x = _parse_features(_read_input(args.features, inputs), labels)
        else:
            x = np.eye(g.vertex_count)

    cfg = _build_config(args, g.vertex_count)
    collection = dosage(g, cfg)
    h = _build_hypergraph(g, collection, args)
    train_mask, test_mask = stratified_masks(y.tolist(), args.train_fraction, args.seed)
    model = train_classifier(
        h, x, y, train_mask,
        hidden_dim=args.hidden_dim,
        num_layers=args.num_layers,
        steps=args.steps,
        step_size=args.step_size,
        seed=args.seed,
    )
    metrics = evaluate(model, h, x, y, test_mask)
    test_labels = y[list(test_mask)]
    baseline = float(max(np.bincount(test_labels)) / test_labels.size)
    report = {
        "format_version": 1,
        "accuracy": metrics["accuracy"],
        "macro_f1": metrics["macro_f1"],
        "majority_baseline": baseline,
        "train_vertices": [labels[v] for v in train_mask],
        "test_size": len(test_mask),
        "hyperedges": h.hyperedge_count,
        "seed": args.seed,
    }
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [_write_report(out_dir, "metrics", report, args.format)]
    write_text_atomic(out_dir / "model.json", model_to_json(model))
    outputs.append("model.json")
    _write_manifest(args, inputs, outputs, time.perf_counter() - t0)
    print(f"accuracy={metrics['accuracy']:.4f} macro_f1={metrics['macro_f1']:.4f} "
          f"baseline={baseline:.4f}")
    return outputs


def cmd_verify(args) -> list[str]:
    inputs: dict = {}
    t0 = time.perf_counter()
    g, labels = parse_edge_list(_read_input(args.edgelist, inputs))
    solution, sol_labels = hypergraph_from_json(_read_input(args.solution, inputs))
    index = {label: v for v, label in enumerate(labels)}
    entries = []
    for edge in solution.hyperedges:
        try:
            entries.append(tuple(index[sol_labels[v]] for v in edge))
        except KeyError as exc:
            raise ValueError(
                f"solution references label {exc.args[0]!r} absent from the graph"
            ) from None
    collection = SubgraphCollection(g, tuple(entries))
    cfg = DosageConfig(k=max(1, len(entries)), alpha=args.alpha, beta=args.beta)
    result = verify_solution(g, collection, cfg, args.r_min)
    report = {
        "format_version": 1,
        "size_ok": result.size_ok,
        "density_ok": result.density_ok,
        "overlap_ok": result.overlap_ok,
        "verdict": result.verdict,
        "per_entry_densities": [float(d) for d in result.per_entry_densities],
        "r_min": float(args.r_min),
    }
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [_write_report(out_dir, "verify_report", report, args.format)]
    _write_manifest(args, inputs, outputs, time.perf_counter() - t0)
    print(f"verdict={result.verdict}")
    return outputs


def cmd_rerun(args) -> list[str]:
    manifest = json.loads(Path(args.manifest).read_text())
    subcommand = manifest["subcommand"]
    handlers = {
        "extract": cmd_extract,
        "oracle": cmd_oracle,
        "spectral": cmd_spectral,
        "classify": cmd_classify,
        "verify": cmd_verify,
    }
    if subcommand not in handlers:
        raise ValueError(f"manifest names unknown subcommand {subcommand!r}")
    options = dict(manifest["options"])
    if args.out_dir is not None:
        options["out_dir"] = str(args.out_dir)
    if "lam" in options:
        options["lam"] = Fraction(options["lam"])
    if "r_min" in options:
        options["r_min"] = Fraction(options["r_min"])
    replay = argparse.Namespace(subcommand=subcommand, **options)
    return handlers[subcommand](replay)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return_value = args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit:
        raise
    except Exception as exc:  # invariant violations and genuine bugs
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    del return_value
    return 0


if __name__ == "__main__":
    sys.exit(main())
