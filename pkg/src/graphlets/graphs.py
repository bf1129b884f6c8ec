"""Attributed graph data model, validation, and transaction-file I/O.

A transaction file stores one or more graphs in a line-oriented text
format:

    t <graph_id>            starts a new graph
    v <node_id> [<label>]   node declaration, ids must cover 0..n-1
    e <u> <v> [<label>]     undirected edge between declared nodes
    # ...                   comment, ignored

Tokens are whitespace-separated. Graphs are simple and undirected:
self-loops and duplicate edges are rejected at parse time, as is mixed
labelling (some nodes labelled while others are not; same rule for
edges). Node and edge labels are opaque strings compared by equality.

A dataset manifest is a companion TSV with one
``<graph_id><TAB><class_label><TAB><split>`` line per graph, where
split is one of ``train``, ``valid``, ``test``, ``unsplit``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable, Mapping, Sequence

SPLITS = ("train", "valid", "test", "unsplit")


class GraphFormatError(ValueError):
    """Malformed or inconsistent graph/manifest data."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def edge_key(u: int, v: int) -> tuple[int, int]:
    """Normalize an undirected edge to its (min, max) form."""
    return (u, v) if u < v else (v, u)


def count_components(n_nodes: int, edges: Iterable[tuple[int, int]]) -> int:
    """Number of connected components, via union-find."""
    parent = list(range(n_nodes))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n_nodes
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with optional node/edge labels.

    Nodes are the integers ``0..n_nodes-1``. Edges are stored sorted as
    ``(u, v)`` pairs with ``u < v``. ``node_labels`` and ``edge_labels``
    are either None (unlabelled) or tuples aligned with node indices
    and ``edges`` respectively.
    """

    id: str
    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    node_labels: tuple[str, ...] | None = None
    edge_labels: tuple[str, ...] | None = None

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in nbrs)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def edge_label(self, u: int, v: int) -> str | None:
        if self.edge_labels is None:
            return None
        return self.edge_labels[self.edge_index[edge_key(u, v)]]

    def without_labels(self) -> "Graph":
        """Structural copy with all labels dropped."""
        if self.node_labels is None and self.edge_labels is None:
            return self
        return Graph(self.id, self.n_nodes, self.edges)

    def validate(self) -> "Graph":
        """Check structural invariants, raising GraphFormatError."""
        if self.n_nodes < 1:
            raise GraphFormatError(f"graph {self.id!r} has no nodes")
        seen: set[tuple[int, int]] = set()
        prev: tuple[int, int] | None = None
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"graph {self.id!r}: self-loop at node {u}")
            if not (0 <= u < v < self.n_nodes):
                raise GraphFormatError(
                    f"graph {self.id!r}: edge ({u}, {v}) out of range or unnormalized"
                )
            if (u, v) in seen:
                raise GraphFormatError(f"graph {self.id!r}: duplicate edge ({u}, {v})")
            if prev is not None and (u, v) < prev:
                raise GraphFormatError(f"graph {self.id!r}: edges not sorted")
            seen.add((u, v))
            prev = (u, v)
        if self.node_labels is not None and len(self.node_labels) != self.n_nodes:
            raise GraphFormatError(f"graph {self.id!r}: node label count mismatch")
        if self.edge_labels is not None and len(self.edge_labels) != len(self.edges):
            raise GraphFormatError(f"graph {self.id!r}: edge label count mismatch")
        return self


@dataclass(frozen=True)
class Graphlet:
    """Connected subgraph snapshot, re-indexed to local nodes 0..k-1.

    ``parent_nodes`` optionally records which parent-graph node each
    local index came from (position i holds the parent id of local
    node i). Labels, when present, are inherited from the parent.
    """

    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    node_labels: tuple[str, ...] | None = None
    edge_labels: tuple[str, ...] | None = None
    parent_nodes: tuple[int, ...] | None = None

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(ns)) for ns in nbrs)

    @cached_property
    def edge_label_map(self) -> dict[tuple[int, int], str]:
        if self.edge_labels is None:
            return {}
        return {e: lbl for e, lbl in zip(self.edges, self.edge_labels)}

    def is_connected(self) -> bool:
        return count_components(self.n_nodes, self.edges) == 1

    def parent_edge_set(self) -> set[tuple[int, int]]:
        """Edges expressed in parent-graph node ids."""
        if self.parent_nodes is None:
            raise ValueError("graphlet has no parent mapping")
        p = self.parent_nodes
        return {edge_key(p[u], p[v]) for u, v in self.edges}

    def to_graph(self, graph_id: str) -> Graph:
        return Graph(
            graph_id, self.n_nodes, self.edges, self.node_labels, self.edge_labels
        ).validate()

    def validate(self) -> "Graphlet":
        if self.n_nodes < 2 or not self.edges:
            raise ValueError("graphlet must have at least one edge")
        bad = [e for e in self.edges if not (0 <= e[0] < e[1] < self.n_nodes)]
        if bad:
            raise ValueError(f"invalid local edges: {bad}")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edges in graphlet")
        if not self.is_connected():
            raise ValueError("graphlet is not connected")
        if self.node_labels is not None and len(self.node_labels) != self.n_nodes:
            raise ValueError("node label count mismatch")
        if self.edge_labels is not None and len(self.edge_labels) != len(self.edges):
            raise ValueError("edge label count mismatch")
        if self.parent_nodes is not None and len(set(self.parent_nodes)) != self.n_nodes:
            raise ValueError("parent mapping is not injective")
        return self


@dataclass(frozen=True)
class ManifestEntry:
    graph_id: str
    class_label: str
    split: str


class _GraphBuilder:
    def __init__(self, graph_id: str, line: int):
        self.graph_id = graph_id
        self.start_line = line
        self.nodes: dict[int, str | None] = {}
        self.edges: dict[tuple[int, int], str | None] = {}
        self.node_labeled: bool | None = None
        self.edge_labeled: bool | None = None

    def add_node(self, node_id: int, label: str | None, line: int) -> None:
        if node_id in self.nodes:
            raise GraphFormatError(f"duplicate node id {node_id}", line)
        labeled = label is not None
        if self.node_labeled is None:
            self.node_labeled = labeled
        elif self.node_labeled != labeled:
            raise GraphFormatError("mixed node labelling within one graph", line)
        self.nodes[node_id] = label

    def add_edge(self, u: int, v: int, label: str | None, line: int) -> None:
        if u == v:
            raise GraphFormatError(f"self-loop at node {u}", line)
        if u not in self.nodes or v not in self.nodes:
            raise GraphFormatError(f"edge ({u}, {v}) references an undeclared node", line)
        key = edge_key(u, v)
        if key in self.edges:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", line)
        labeled = label is not None
        if self.edge_labeled is None:
            self.edge_labeled = labeled
        elif self.edge_labeled != labeled:
            raise GraphFormatError("mixed edge labelling within one graph", line)
        self.edges[key] = label

    def finish(self) -> Graph:
        if not self.nodes:
            raise GraphFormatError(
                f"graph {self.graph_id!r} declares no nodes", self.start_line
            )
        n = len(self.nodes)
        if sorted(self.nodes) != list(range(n)):
            raise GraphFormatError(
                f"graph {self.graph_id!r}: node ids must be contiguous 0..{n - 1}",
                self.start_line,
            )
        node_labels = None
        if self.node_labeled:
            node_labels = tuple(self.nodes[i] for i in range(n))  # type: ignore[misc]
        ordered = sorted(self.edges)
        edge_labels = None
        if self.edge_labeled:
            edge_labels = tuple(self.edges[e] for e in ordered)  # type: ignore[misc]
        return Graph(self.graph_id, n, tuple(ordered), node_labels, edge_labels).validate()


def parse_graph_file(source: str | IO[str]) -> list[Graph]:
    """Parse a transaction file into a list of graphs, in file order."""
    text = source if isinstance(source, str) else source.read()
    graphs: list[Graph] = []
    seen_ids: set[str] = set()
    builder: _GraphBuilder | None = None

    def flush() -> None:
        nonlocal builder
        if builder is not None:
            graphs.append(builder.finish())
            builder = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0].startswith("#"):
            continue
        kind = tokens[0]
        if kind == "t":
            if len(tokens) != 2:
                raise GraphFormatError("expected: t <graph_id>", line_no)
            flush()
            if tokens[1] in seen_ids:
                raise GraphFormatError(f"duplicate graph id {tokens[1]!r}", line_no)
            seen_ids.add(tokens[1])
            builder = _GraphBuilder(tokens[1], line_no)
        elif kind == "v":
            if builder is None:
                raise GraphFormatError("node declared before any 't' line", line_no)
            if len(tokens) not in (2, 3):
                raise GraphFormatError("expected: v <node_id> [<label>]", line_no)
            try:
                node_id = int(tokens[1])
            except ValueError:
                raise GraphFormatError(f"invalid node id {tokens[1]!r}", line_no) from None
            builder.add_node(node_id, tokens[2] if len(tokens) == 3 else None, line_no)
        elif kind == "e":
            if builder is None:
                raise GraphFormatError("edge declared before any 't' line", line_no)
            if len(tokens) not in (3, 4):
                raise GraphFormatError("expected: e <u> <v> [<label>]", line_no)
            try:
                u, v = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise GraphFormatError("invalid edge endpoints", line_no) from None
            builder.add_edge(u, v, tokens[3] if len(tokens) == 4 else None, line_no)
        else:
            raise GraphFormatError(f"unknown record type {kind!r}", line_no)
    flush()
    return graphs


def serialize_graph(g: Graph) -> str:
    """Canonical text form: nodes by index, edges by sorted endpoint pair."""
    lines = [f"t {g.id}"]
    for i in range(g.n_nodes):
        if g.node_labels is not None:
            lines.append(f"v {i} {g.node_labels[i]}")
        else:
            lines.append(f"v {i}")
    for idx, (u, v) in enumerate(g.edges):
        if g.edge_labels is not None:
            lines.append(f"e {u} {v} {g.edge_labels[idx]}")
        else:
            lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def serialize_graphs(graphs: Iterable[Graph]) -> str:
    return "".join(serialize_graph(g) for g in graphs)


def load_graphs(path: str) -> list[Graph]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_file(fh)


def save_graphs(graphs: Iterable[Graph], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_graphs(graphs))


def parse_manifest(source: str | IO[str]) -> list[ManifestEntry]:
    """Parse a manifest TSV; graph ids must be unique."""
    text = source if isinstance(source, str) else source.read()
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        parts = raw.rstrip("\n").split("\t")
        if len(parts) != 3:
            raise GraphFormatError(
                "expected: <graph_id><TAB><class_label><TAB><split>", line_no
            )
        graph_id, class_label, split = parts
        if split not in SPLITS:
            raise GraphFormatError(f"unknown split {split!r}", line_no)
        if graph_id in seen:
            raise GraphFormatError(f"duplicate graph id {graph_id!r}", line_no)
        seen.add(graph_id)
        entries.append(ManifestEntry(graph_id, class_label, split))
    return entries


def load_manifest(path: str) -> list[ManifestEntry]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_manifest(fh)


def save_manifest(entries: Iterable[ManifestEntry], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in entries:
            fh.write(f"{e.graph_id}\t{e.class_label}\t{e.split}\n")


def resolve_manifest(
    entries: Sequence[ManifestEntry], graphs: Sequence[Graph]
) -> Mapping[str, Graph]:
    """Map manifest ids to graphs; every id must resolve."""
    by_id = {g.id: g for g in graphs}
    missing = [e.graph_id for e in entries if e.graph_id not in by_id]
    if missing:
        raise GraphFormatError(f"manifest ids not found in graph file: {missing}")
    return by_id
