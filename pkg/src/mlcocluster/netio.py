"""Reading and writing networks, labels and result tables.

Edge lists use the multiplex "extended edge list" layout, one record per line::

    layer src dst [weight]

with 1-based ids and ``#`` comments.  A directed network on ``n`` nodes is
read as a bipartite network with ``n_r = n_c = n`` (senders are rows,
receivers are columns).  Files written by :func:`save_multiplex_edgelist`
start with a ``# shape n_r n_c L`` line; when present, ids are taken as
row/column indices verbatim, so isolated nodes and ``n_r != n_c`` survive a
round trip.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import InvalidArgumentError, ModelParams, MultiLayerBipartiteNetwork

log = logging.getLogger(__name__)


class ParseError(ValueError):
    def __init__(self, path, lineno: int, msg: str):
        super().__init__(f"{path}:{lineno}: {msg}")
        self.path = path
        self.lineno = lineno


class EmptyInputError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeRecord:
    layer: int
    src: int
    dst: int
    weight: float = 1.0


@dataclass(frozen=True)
class EdgeListSummary:
    """Counts gathered while loading an edge list."""

    raw_records: int  # data lines
    raw_weight: float  # sum of weights over data lines
    binary_edges: int  # distinct (layer, src, dst) above the threshold
    duplicates: int
    below_threshold: int
    n_nodes: int
    n_layers: int
    node_ids: tuple[int, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class DegreeProfile:
    out_degrees: np.ndarray  # (L, n_r)
    in_degrees: np.ndarray  # (L, n_c)


def read_edge_records(path) -> tuple[list[EdgeRecord], tuple[int, int, int] | None]:
    """Parse every data line; returns the records and the optional ``# shape`` header."""
    records = []
    shape = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                parts = text[1:].split()
                if parts[:1] == ["shape"]:
                    try:
                        n_r, n_c, L = (int(x) for x in parts[1:4])
                    except ValueError:
                        raise ParseError(path, lineno, "malformed '# shape n_r n_c L' header") from None
                    shape = (n_r, n_c, L)
                continue
            parts = text.split()
            if len(parts) not in (3, 4):
                raise ParseError(path, lineno, f"expected 'layer src dst [weight]', got {text!r}")
            try:
                layer, src, dst = (int(p) for p in parts[:3])
                weight = float(parts[3]) if len(parts) == 4 else 1.0
            except ValueError:
                raise ParseError(path, lineno, f"non-numeric field in {text!r}") from None
            if layer < 1 or src < 1 or dst < 1:
                raise ParseError(path, lineno, "layer and node ids must be >= 1")
            records.append(EdgeRecord(layer, src, dst, weight))
    return records, shape


def _build(path, directed_as_bipartite: bool, weight_threshold: float):
    records, shape = read_edge_records(path)
    if not records and shape is None:
        raise EmptyInputError(f"{path}: no edge records")
    if shape is not None:
        n_r, n_c, L = shape
        for r in records:
            if r.src > n_r or r.dst > n_c or r.layer > L:
                raise InvalidArgumentError(f"{path}: record {r} outside declared shape {shape}")
        row_index = col_index = None
        node_ids = ()
    else:
        node_ids = tuple(sorted({r.src for r in records} | {r.dst for r in records}))
        index = {v: i for i, v in enumerate(node_ids)}
        n_r = n_c = len(node_ids)
        L = max(r.layer for r in records)
        row_index = col_index = index
    layers = np.zeros((L, n_r, n_c), dtype=np.uint8)
    seen = set()
    duplicates = below = 0
    for r in records:
        if not r.weight > weight_threshold:
            below += 1
            continue
        i = r.src - 1 if row_index is None else row_index[r.src]
        j = r.dst - 1 if col_index is None else col_index[r.dst]
        key = (r.layer, i, j)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        layers[r.layer - 1, i, j] = 1
    if not directed_as_bipartite:
        if n_r != n_c:
            raise InvalidArgumentError("undirected reading needs a square network")
        layers |= layers.transpose(0, 2, 1)
    if duplicates:
        log.info("%s: collapsed %d duplicate records", path, duplicates)
    summary = EdgeListSummary(
        raw_records=len(records),
        raw_weight=float(sum(r.weight for r in records)),
        binary_edges=len(seen),
        duplicates=duplicates,
        below_threshold=below,
        n_nodes=n_r,
        n_layers=L,
        node_ids=node_ids,
    )
    return MultiLayerBipartiteNetwork(layers, meta={"source": str(path), "node_ids": node_ids}), summary


def load_multiplex_edgelist(path, directed_as_bipartite: bool = True, weight_threshold: float = 0.0):
    """Load an edge list as a binary multi-layer bipartite network.

    An edge exists when some record has ``weight > weight_threshold``;
    duplicates collapse and self-loops are kept.  Without a ``# shape``
    header, node ids are compacted to ``0..n-1`` in numeric order and ``L``
    is the largest layer id.  With ``directed_as_bipartite=False`` every
    layer is symmetrized.
    """
    return _build(path, directed_as_bipartite, weight_threshold)[0]


def edgelist_summary(path, directed_as_bipartite: bool = True, weight_threshold: float = 0.0) -> EdgeListSummary:
    return _build(path, directed_as_bipartite, weight_threshold)[1]


def save_multiplex_edgelist(path, net: MultiLayerBipartiteNetwork) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# shape {net.n_r} {net.n_c} {net.L}\n")
        for l, i, j in np.argwhere(net.layers):
            fh.write(f"{l + 1} {i + 1} {j + 1}\n")


def degree_profile(net: MultiLayerBipartiteNetwork) -> DegreeProfile:
    return DegreeProfile(
        net.layers.sum(axis=2, dtype=np.int64),
        net.layers.sum(axis=1, dtype=np.int64),
    )


def write_degree_csv(path, profile: DegreeProfile) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["layer", "node_id", "out_degree", "in_degree"])
        L, n_r = profile.out_degrees.shape
        n_c = profile.in_degrees.shape[1]
        for l in range(L):
            for i in range(max(n_r, n_c)):
                out_d = profile.out_degrees[l, i] if i < n_r else ""
                in_d = profile.in_degrees[l, i] if i < n_c else ""
                w.writerow([l + 1, i, out_d, in_d])


LABEL_HEADER = ["node_id", "row_or_col", "label"]


def write_labels(path, clustering) -> None:
    """Write ``node_id,row_or_col,label`` rows (0-based node ids)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LABEL_HEADER)
        for side, labels in (("row", clustering.row_labels), ("col", clustering.col_labels)):
            for i, lab in enumerate(labels):
                w.writerow([i, side, int(lab)])


def load_labels(path, K_r: int | None = None, K_c: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Read a labels CSV back into ``(row_labels, col_labels)``."""
    found = {"row": {}, "col": {}}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != LABEL_HEADER:
            raise ParseError(path, 1, f"expected header {','.join(LABEL_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 3 or row[1] not in found:
                raise ParseError(path, lineno, f"malformed label row {row!r}")
            try:
                node, lab = int(row[0]), int(row[2])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer field in {row!r}") from None
            limit = K_r if row[1] == "row" else K_c
            if lab < 0 or (limit is not None and lab >= limit):
                raise ParseError(path, lineno, f"label {lab} outside [0, {limit})")
            if node in found[row[1]]:
                raise ParseError(path, lineno, f"duplicate {row[1]} node {node}")
            found[row[1]][node] = lab
    out = []
    for side in ("row", "col"):
        d = found[side]
        if sorted(d) != list(range(len(d))):
            raise ParseError(path, 0, f"{side} node ids are not 0..{len(d) - 1}")
        out.append(np.array([d[i] for i in range(len(d))], dtype=np.int64))
    return out[0], out[1]


RESULT_HEADER = ["parameter", "value", "method", "metric", "mean", "std", "replicates"]


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def write_results_csv(path, table) -> None:
    """One row per (grid value, method, metric); fixed column order, 6 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_HEADER)
        for r in table.rows:
            w.writerow([r.parameter, _fmt(r.value), r.method, r.metric, _fmt(r.mean), _fmt(r.std), r.replicates])


def write_table_csv(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def save_params(path, params: ModelParams) -> None:
    Path(path).write_text(json.dumps(params.to_dict()) + "\n", encoding="utf-8")


def load_params(path) -> ModelParams:
    return ModelParams.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
