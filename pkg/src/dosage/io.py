"""File formats and serialization: edge lists, hypergraph JSON, incidence CSV,
model weights, and run manifests. Every emitted format carries a
format_version field and round-trips losslessly; JSON output is canonical
(sorted keys, fixed indentation) so identical runs are byte-identical."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from .graph import Graph
from .hgnn import ConvLayer, TrainedModel
from .hypergraph import Hypergraph

FORMAT_VERSION = 1


def parse_edge_list(text: str) -> tuple[Graph, tuple[str, ...]]:
    """Whitespace-separated "u v" lines; '#' comments and blank lines ignored.

    Labels become dense ids in first-appearance order. Malformed lines,
    self-loops, and duplicate edges are errors naming the 1-based line number.
    """
    ids: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen: set[frozenset[int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two labels, got {len(parts)}")
        u_label, v_label = parts
        if u_label == v_label:
            raise ValueError(f"line {lineno}: self-loop on {u_label!r}")
        u = ids.setdefault(u_label, len(ids))
        v = ids.setdefault(v_label, len(ids))
        key = frozenset((u, v))
        if key in seen:
            raise ValueError(f"line {lineno}: duplicate edge {u_label!r} {v_label!r}")
        seen.add(key)
        edges.append((u, v))
    labels = tuple(ids)
    return Graph(len(labels), edges), labels


def _default_labels(n: int) -> tuple[str, ...]:
    return tuple(str(v) for v in range(n))


def _csv_safe_labels(labels) -> None:
    for label in labels:
        if "," in label or "\n" in label:
            raise ValueError(f"label {label!r} cannot be written to CSV")


def dumps_canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def hypergraph_to_json(h: Hypergraph, labels: tuple[str, ...] | None = None) -> str:
    """Hyperedges are emitted as label lists; Fraction weights degrade to float."""
    if labels is None:
        labels = _default_labels(h.vertex_count)
    if len(labels) != h.vertex_count:
        raise ValueError(f"expected {h.vertex_count} labels, got {len(labels)}")
    obj = {
        "format_version": FORMAT_VERSION,
        "n": h.vertex_count,
        "labels": list(labels),
        "hyperedges": [[labels[v] for v in edge] for edge in h.hyperedges],
        "weights": [float(w) for w in h.weights],
        "synthetic": list(h.synthetic),
        "bounds": None if h.bounds is None else {"alpha": h.bounds[0], "beta": h.bounds[1]},
    }
    return dumps_canonical(obj)


def hypergraph_from_json(text: str) -> tuple[Hypergraph, tuple[str, ...]]:
    obj = json.loads(text)
    if obj.get("format_version", FORMAT_VERSION) != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {obj['format_version']!r}")
    for field in ("n", "labels", "hyperedges", "weights", "synthetic"):
        if field not in obj:
            raise ValueError(f"hypergraph JSON is missing the {field!r} field")
    labels = tuple(obj["labels"])
    if len(labels) != obj["n"]:
        raise ValueError(f"label table has {len(labels)} entries for n={obj['n']}")
    index = {label: v for v, label in enumerate(labels)}
    if len(index) != len(labels):
        raise ValueError("label table contains duplicates")
    try:
        hyperedges = [[index[label] for label in edge] for edge in obj["hyperedges"]]
    except KeyError as exc:
        raise ValueError(f"hyperedge references unknown label {exc.args[0]!r}") from None
    bounds = obj.get("bounds")
    if bounds is not None:
        bounds = (bounds["alpha"], bounds["beta"])
    h = Hypergraph(
        obj["n"],
        hyperedges,
        obj["weights"],
        synthetic=obj["synthetic"],
        bounds=bounds,
    )
    return h, labels


def incidence_to_csv(h: Hypergraph, labels: tuple[str, ...] | None = None) -> str:
    """Header "vertex,e0,..."; one 0/1 row per vertex, ids ascending."""
    if labels is None:
        labels = _default_labels(h.vertex_count)
    if len(labels) != h.vertex_count:
        raise ValueError(f"expected {h.vertex_count} labels, got {len(labels)}")
    _csv_safe_labels(labels)
    m = h.hyperedge_count
    member_sets = [set(edge) for edge in h.hyperedges]
    lines = ["vertex" + "".join(f",e{j}" for j in range(m))]
    for v in range(h.vertex_count):
        row = [labels[v]] + ["1" if v in member_sets[j] else "0" for j in range(m)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def incidence_from_csv(text: str) -> tuple[tuple[tuple[int, ...], ...], tuple[str, ...]]:
    """Reconstruct the hyperedge member lists and the label table from the CSV."""
    lines = [line for line in text.splitlines() if line]
    if not lines:
        raise ValueError("incidence CSV is empty")
    header = lines[0].split(",")
    if header[0] != "vertex":
        raise ValueError("incidence CSV must start with a 'vertex' header column")
    m = len(header) - 1
    labels = []
    members: list[list[int]] = [[] for _ in range(m)]
    for v, line in enumerate(lines[1:]):
        cells = line.split(",")
        if len(cells) != m + 1:
            raise ValueError(f"row {v + 2}: expected {m + 1} cells, got {len(cells)}")
        labels.append(cells[0])
        for j, cell in enumerate(cells[1:]):
            if cell == "1":
                members[j].append(v)
            elif cell != "0":
                raise ValueError(f"row {v + 2}: incidence entries must be 0 or 1, got {cell!r}")
    return tuple(tuple(edge) for edge in members), tuple(labels)


def model_to_json(model: TrainedModel) -> str:
    obj = {
        "format_version": FORMAT_VERSION,
        "num_classes": model.num_classes,
        "layers": [
            {"activation": layer.activation, "weight": layer.weight.tolist()}
            for layer in model.layers
        ],
    }
    return dumps_canonical(obj)


def model_from_json(text: str) -> TrainedModel:
    obj = json.loads(text)
    layers = tuple(
        ConvLayer(np.asarray(entry["weight"], dtype=float), entry["activation"])
        for entry in obj["layers"]
    )
    return TrainedModel(layers=layers, num_classes=obj["num_classes"], loss_curve=())


def write_text_atomic(path, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()
