"""Edge-list ingestion, metadata sidecars and rank CSV output.

Edge lists are whitespace-separated ``src dst weight`` lines. Lines starting
with ``#`` or ``%`` are comments (KONECT files use ``%``). Extra columns after
the weight (KONECT timestamps) are ignored.

The sidecar is a flat ``key = value`` text file::

    n = 3
    bounds = global
    low = 0
    high = 10
    label.0 = alice
    label.1 = bob
    label.2 = carol

Per-node bounds use ``bounds = per-node`` and one ``bound.<label> = low:high``
line per node.
"""
from __future__ import annotations

import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from bhrank.errors import EmptyGraph, InvalidBounds, ParseError, SelfLoop
from bhrank.graph import WeightBounds, WeightedDigraph, build_graph

log = logging.getLogger(__name__)

META_SUFFIX = ".meta"


@dataclass(frozen=True)
class EdgeListFormat:
    """How to read an edge list.

    node_ids: ``"int"`` accepts only integer node ids (KONECT) and orders nodes
        numerically; ``"token"`` accepts any token and orders by first appearance.
    default_weight: weight for two-column lines; ``None`` makes them an error.
    self_loops: ``"error"`` or ``"drop"`` (dropped lines are counted).
    """

    node_ids: str = "int"
    comment_prefixes: tuple[str, ...] = ("#", "%")
    default_weight: float | None = None
    self_loops: str = "error"

    def __post_init__(self):
        if self.node_ids not in ("int", "token"):
            raise ValueError(f"node_ids must be 'int' or 'token', not {self.node_ids!r}")
        if self.self_loops not in ("error", "drop"):
            raise ValueError(f"self_loops must be 'error' or 'drop', not {self.self_loops!r}")


@dataclass
class ParsedEdgeList:
    labels: list[str]
    arcs: list[tuple[int, int, float]]
    duplicates: int = 0
    self_loops_dropped: int = 0
    weight_values: dict[float, int] = field(default_factory=dict)


def parse_edge_list(path, fmt: EdgeListFormat = EdgeListFormat(), labels=None) -> ParsedEdgeList:
    """Parse ``path`` into dense-indexed arcs.

    Duplicate ``(src, dst)`` pairs keep the last weight and are counted.
    If ``labels`` is given (e.g. from a sidecar) it fixes the node order and
    every endpoint must appear in it.
    """
    path = Path(path)
    raw: dict[tuple[str, str], float] = {}
    order: dict[str, int] = {}
    duplicates = 0
    loops = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith(fmt.comment_prefixes):
                continue
            tokens = text.split()
            if len(tokens) < 2:
                raise ParseError(lineno, f"expected 'src dst weight', got {text!r}", path)
            s, t = tokens[0], tokens[1]
            if fmt.node_ids == "int":
                for tok in (s, t):
                    try:
                        int(tok)
                    except ValueError:
                        raise ParseError(lineno, f"node id {tok!r} is not an integer", path) from None
                s, t = str(int(s)), str(int(t))
            if len(tokens) >= 3:
                try:
                    w = float(tokens[2])
                except ValueError:
                    raise ParseError(lineno, f"weight {tokens[2]!r} is not a number", path) from None
                if not math.isfinite(w):
                    raise ParseError(lineno, f"weight {tokens[2]!r} is not finite", path)
            elif fmt.default_weight is not None:
                w = float(fmt.default_weight)
            else:
                raise ParseError(lineno, "missing weight column", path)
            for tok in (s, t):
                order.setdefault(tok, len(order))
            if s == t:
                if fmt.self_loops == "drop":
                    loops += 1
                    continue
                raise SelfLoop(f"{path}:{lineno}: self-loop on node {s}")
            if (s, t) in raw:
                duplicates += 1
                del raw[(s, t)]  # keep-last also moves the arc to its last position
            raw[(s, t)] = w

    if labels is None:
        if fmt.node_ids == "int":
            labels = sorted(order, key=int)
        else:
            labels = sorted(order, key=order.__getitem__)
    labels = [str(x) for x in labels]
    index = {lab: i for i, lab in enumerate(labels)}
    missing = [tok for tok in order if tok not in index]
    if missing:
        raise ParseError(0, f"node {missing[0]!r} is not in the sidecar label map", path)
    if not labels:
        raise EmptyGraph(f"{path} contains no arcs")

    arcs = [(index[s], index[t], w) for (s, t), w in raw.items()]
    counts: dict[float, int] = {}
    for _, _, w in arcs:
        counts[w] = counts.get(w, 0) + 1
    return ParsedEdgeList(labels, arcs, duplicates, loops, counts)


def load_edge_list(
    path,
    fmt: EdgeListFormat = EdgeListFormat(),
    bounds: WeightBounds | None = None,
    meta="auto",
) -> WeightedDigraph:
    """Load an edge list as a validated graph with dense ``0..N-1`` node ids.

    ``meta`` is a sidecar path, ``None`` to ignore sidecars, or ``"auto"`` to
    use ``<path>.meta`` when it exists. Explicit ``bounds`` override the
    sidecar's.
    """
    path = Path(path)
    if meta == "auto":
        candidate = path.with_name(path.name + META_SUFFIX)
        meta = candidate if candidate.exists() else None
    labels = None
    if meta is not None:
        md = read_metadata(meta)
        labels = md.get("labels")
        if bounds is None:
            bounds = md.get("bounds")

    parsed = parse_edge_list(path, fmt, labels=labels)
    if parsed.duplicates:
        msg = f"{path}: {parsed.duplicates} duplicate arcs collapsed (kept last weight)"
        log.warning(msg)
        warnings.warn(msg, stacklevel=2)
    if parsed.self_loops_dropped:
        log.warning("%s: dropped %d self-loops", path, parsed.self_loops_dropped)
    return build_graph(len(parsed.labels), parsed.arcs, bounds, labels=parsed.labels)


def write_edge_list(g: WeightedDigraph, path, meta: bool = True) -> Path:
    """Write ``g`` as ``src dst weight`` lines (plus a sidecar unless ``meta=False``)."""
    path = Path(path)
    names = g.node_labels()
    with open(path, "w") as fh:
        fh.write(f"# {g.n} nodes, {g.n_arcs} arcs\n")
        for s, t, w in g.arcs():
            fh.write(f"{names[s]} {names[t]} {w:.17g}\n")
    if meta:
        write_metadata(g, path.with_name(path.name + META_SUFFIX))
    return path


def write_metadata(g: WeightedDigraph, path) -> None:
    names = g.node_labels()
    lines = [f"n = {g.n}"]
    if g.bounds is not None:
        if g.bounds.is_global:
            lo, hi = g.bounds.node(0)
            lines += ["bounds = global", f"low = {lo:.17g}", f"high = {hi:.17g}"]
        else:
            lines.append("bounds = per-node")
            for i in range(g.n):
                lo, hi = g.bounds.node(i)
                lines.append(f"bound.{names[i]} = {lo:.17g}:{hi:.17g}")
    lines += [f"label.{i} = {names[i]}" for i in range(g.n)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_metadata(path) -> dict:
    """Parse a sidecar into ``{"n", "labels", "bounds", "raw"}``."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ParseError(lineno, f"expected 'key = value', got {text!r}", path)
        key, value = text.split("=", 1)
        raw[key.strip()] = value.strip()

    out: dict = {"raw": raw}
    if "n" in raw:
        out["n"] = int(raw["n"])
    label_keys = sorted((int(k.split(".", 1)[1]), v) for k, v in raw.items() if k.startswith("label."))
    labels = [v for _, v in label_keys] if label_keys else None
    if labels is not None:
        if [i for i, _ in label_keys] != list(range(len(labels))):
            raise ParseError(0, "label indices must be contiguous from 0", path)
        out["labels"] = labels
    mode = raw.get("bounds")
    if mode == "global":
        out["bounds"] = WeightBounds.uniform(float(raw["low"]), float(raw["high"]))
    elif mode == "per-node":
        per = {k.split(".", 1)[1]: v for k, v in raw.items() if k.startswith("bound.")}
        if labels is None:
            labels = list(per)
            out["labels"] = labels
        try:
            pairs = [parse_range(per[lab]) for lab in labels]
        except KeyError as exc:
            raise InvalidBounds(f"no bound given for node {exc.args[0]!r}") from None
        out["bounds"] = WeightBounds.per_node(pairs)
    elif mode is not None:
        raise ParseError(0, f"unknown bounds mode {mode!r}", path)
    return out


def parse_range(text: str) -> tuple[float, float]:
    """``"0:10"`` -> ``(0.0, 10.0)``."""
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise ValueError(f"expected 'low:high', got {text!r}") from None


def write_rank_csv(path, labels, scores, positions, header: dict | None = None) -> Path:
    """Write ``node_label,score,rank_position`` rows sorted by position.

    ``header`` items go into a leading ``# key=value,...`` comment line.
    """
    path = Path(path)
    scores = np.asarray(scores)
    positions = np.asarray(positions)
    with open(path, "w", newline="") as fh:
        if header:
            fh.write("# " + ",".join(f"{k}={v}" for k, v in header.items()) + "\n")
        w = csv.writer(fh)
        w.writerow(["node_label", "score", "rank_position"])
        for i in np.argsort(positions, kind="stable"):
            w.writerow([labels[i], f"{scores[i]:.12g}", int(positions[i])])
    return path


def read_rank_csv(path) -> tuple[dict, list[tuple[str, float, int]]]:
    """Inverse of :func:`write_rank_csv`: ``(header, rows)``."""
    header: dict[str, str] = {}
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith("# "):
        for item in lines[0][2:].split(","):
            k, v = item.split("=", 1)
            header[k] = v
        lines = lines[1:]
    rows = [(r[0], float(r[1]), int(r[2])) for r in csv.reader(lines[1:])]
    return header, rows
