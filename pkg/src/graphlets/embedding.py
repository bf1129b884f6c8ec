"""Histogram embeddings of graphs over a deterministic code vocabulary.

Every sampled graphlet of a graph is hashed to its code string; the
per-graph histogram counts codes. A vocabulary fixes the bin order by
collecting the union of all observed codes and sorting it, so bin
indices never depend on graph processing order or parallelism. Count
vectors are then aligned to the vocabulary; codes absent from it (a
frozen vocabulary applied to new data) are dropped and tallied in an
``oov_count`` diagnostic rather than raising.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Mapping, Sequence

from .graphs import Graph
from .hashing import hash_code
from .sampling import SamplerParams, sample_all


@dataclass(frozen=True)
class Vocabulary:
    """Ordered list of code keys; position = histogram bin index."""

    entries: tuple[str, ...]

    @cached_property
    def index(self) -> dict[str, int]:
        return {key: i for i, key in enumerate(self.entries)}

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key in self.index


@dataclass(frozen=True)
class Embedding:
    """Histogram of one graph aligned to a vocabulary.

    ``meta`` records the sampling configuration (runs, max_edges,
    alpha, seed, hash function, min_edges); ``oov_count`` tallies
    sampled codes that fell outside the vocabulary.
    """

    graph_id: str
    counts: tuple[int, ...]
    meta: Mapping = field(default_factory=dict)
    oov_count: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts)


def embed_graph_stats(
    graph: Graph,
    params: SamplerParams,
    fn: str = "auto",
    min_edges: int = 1,
    run_offset: int = 0,
) -> tuple[dict[str, int], int, int]:
    """Sample a graph and histogram its graphlet codes.

    Returns (code->count map, number of dead-end runs, graphlets
    counted). Only graphlets with at least ``min_edges`` edges are
    hashed; the map sums to runs * (max_edges - min_edges + 1) when no
    run dead-ends.
    """
    if not 1 <= min_edges <= params.max_edges:
        raise ValueError(
            f"min_edges must be in 1..{params.max_edges}, got {min_edges}"
        )
    counts: Counter[str] = Counter()
    dead_ends = 0
    emitted = 0
    for trace in sample_all(graph, params, run_offset):
        if trace.dead_end:
            dead_ends += 1
        for graphlet in trace.graphlets[min_edges - 1 :]:
            counts[hash_code(graphlet, fn).key] += 1
            emitted += 1
    return dict(counts), dead_ends, emitted


def embed_graph(
    graph: Graph, params: SamplerParams, fn: str = "auto", min_edges: int = 1
) -> dict[str, int]:
    """Code->count map for one graph (see embed_graph_stats)."""
    counts, _, _ = embed_graph_stats(graph, params, fn, min_edges)
    return counts


def build_vocabulary(maps: Iterable[Mapping[str, int]]) -> Vocabulary:
    """Union of all code keys, sorted lexicographically."""
    keys: set[str] = set()
    for m in maps:
        keys.update(m)
    if not keys:
        raise ValueError("cannot build a vocabulary from empty code maps")
    return Vocabulary(tuple(sorted(keys)))


def finalize_embeddings(
    named_maps: Sequence[tuple[str, Mapping[str, int]]],
    vocab: Vocabulary,
    meta: Mapping | None = None,
) -> list[Embedding]:
    """Dense count vectors aligned to the vocabulary, in input order."""
    out = []
    for graph_id, counts in named_maps:
        vec = [0] * len(vocab)
        oov = 0
        for key, c in counts.items():
            pos = vocab.index.get(key)
            if pos is None:
                oov += c
            else:
                vec[pos] = c
        out.append(Embedding(graph_id, tuple(vec), dict(meta or {}), oov))
    return out


def concat_embeddings(
    parts: Sequence[tuple[Embedding, Vocabulary]],
) -> tuple[Embedding, Vocabulary]:
    """Concatenate per-size embeddings of one graph into a single
    vector over the concatenated vocabulary."""
    if not parts:
        raise ValueError("nothing to concatenate")
    graph_id = parts[0][0].graph_id
    for emb, _ in parts[1:]:
        if emb.graph_id != graph_id:
            raise ValueError(
                f"graph id mismatch: {graph_id!r} vs {emb.graph_id!r}"
            )
    entries: list[str] = []
    counts: list[int] = []
    oov = 0
    for emb, vocab in parts:
        if len(emb.counts) != len(vocab):
            raise ValueError("embedding length does not match its vocabulary")
        entries.extend(vocab.entries)
        counts.extend(emb.counts)
        oov += emb.oov_count
    if len(set(entries)) != len(entries):
        raise ValueError("concatenated vocabularies share code keys")
    meta = {"segments": tuple(dict(emb.meta) for emb, _ in parts)}
    return Embedding(graph_id, tuple(counts), meta, oov), Vocabulary(tuple(entries))


def write_vocabulary(vocab: Vocabulary, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in vocab.entries:
            fh.write(key + "\n")


def read_vocabulary(path: str) -> Vocabulary:
    with open(path, "r", encoding="utf-8") as fh:
        return Vocabulary(tuple(line.rstrip("\n") for line in fh if line.rstrip("\n")))


def write_embeddings(
    embeddings: Sequence[Embedding], path: str, normalize: bool = False
) -> None:
    """TSV: header ``graph_id<TAB>bin0...``, one row per graph.

    Rows hold integer counts, or L1-normalized frequencies (17
    significant digits) when ``normalize`` is set.
    """
    n_bins = len(embeddings[0].counts) if embeddings else 0
    header = "graph_id\t" + "\t".join(f"bin{i}" for i in range(n_bins))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for emb in embeddings:
            if normalize:
                total = emb.total
                row = [(c / total if total else 0.0) for c in emb.counts]
                cells = [f"{x:.17g}" for x in row]
            else:
                cells = [str(c) for c in emb.counts]
            fh.write(emb.graph_id + "\t" + "\t".join(cells) + "\n")


def _parse_cell(cell: str) -> float | int:
    try:
        return int(cell)
    except ValueError:
        return float(cell)


def read_embeddings(source: str | IO[str]) -> tuple[list[str], list[list]]:
    """Read an embeddings TSV back into (graph ids, count rows)."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()
    if not lines:
        raise ValueError("empty embeddings file")
    width = len(lines[0].split("\t")) - 1
    ids: list[str] = []
    rows: list[list] = []
    for line in lines[1:]:
        if not line:
            continue
        cells = line.split("\t")
        if len(cells) != width + 1:
            raise ValueError(f"row width mismatch for {cells[0]!r}")
        ids.append(cells[0])
        rows.append([_parse_cell(c) for c in cells[1:]])
    return ids, rows
