"""Permutation-invariant hash codes for graphlets.

Each code is built from one per-node topological measure (degree, core
number, local clustering coefficient, or betweenness centrality),
sorted into a canonical ascending vector. Fractional measures are kept
as exact rationals so codes never depend on float formatting. Labelled
graphlets additionally carry node/edge label signatures ordered by the
measure-sorted node ranking.

Code string grammar (the persisted vocabulary key):

    <t>|<fn>|<v1,v2,...>|<nodeLabels>|<edgeLabels>

with rationals serialized ``num/den`` (``den`` omitted when 1) and the
label fields empty for unlabelled graphlets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .graphs import Graphlet

HASH_FUNCTIONS = ("degree", "core", "clustering", "betweenness")
AUTO_THRESHOLD = 4  # auto: degree up to 4 edges, betweenness beyond

# Cheapest-first ordering, used to break exact ties in E(f).
_COST_ORDER = {"degree": 0, "core": 1, "clustering": 2, "betweenness": 3}


def resolve_hash_function(fn: str, n_edges: int) -> str:
    """Resolve 'auto' by graphlet size; validate explicit names."""
    if fn == "auto":
        return "degree" if n_edges <= AUTO_THRESHOLD else "betweenness"
    if fn not in HASH_FUNCTIONS:
        raise ValueError(f"unknown hash function {fn!r}")
    return fn


def degree_values(g: Graphlet) -> list[int]:
    """Per-node degrees, in node order."""
    return [len(ns) for ns in g.adjacency]


def core_values(g: Graphlet) -> list[int]:
    """Per-node core numbers, in node order.

    Computed by peeling a minimum-degree node at a time; the core
    number of a node is the largest minimum degree seen up to its
    removal.
    """
    adj = [set(ns) for ns in g.adjacency]
    deg = {u: len(adj[u]) for u in range(g.n_nodes)}
    core = [0] * g.n_nodes
    k = 0
    while deg:
        u = min(deg, key=lambda x: (deg[x], x))
        k = max(k, deg[u])
        core[u] = k
        del deg[u]
        for w in adj[u]:
            if w in deg:
                deg[w] -= 1
                adj[w].discard(u)
    return core


def clustering_values(g: Graphlet) -> list[Fraction]:
    """Per-node local clustering coefficients as exact rationals.

    Ratio of triangles through the node to triples centred on it;
    zero for nodes of degree < 2.
    """
    adj = [set(ns) for ns in g.adjacency]
    out: list[Fraction] = []
    for u in range(g.n_nodes):
        d = len(adj[u])
        if d < 2:
            out.append(Fraction(0))
            continue
        triangles = sum(1 for x, y in combinations(sorted(adj[u]), 2) if y in adj[x])
        out.append(Fraction(triangles, d * (d - 1) // 2))
    return out


def betweenness_values(g: Graphlet) -> list[Fraction]:
    """Per-node betweenness centrality as exact rationals.

    Sum over ordered node pairs (s, t), s != t, excluding the node
    itself, of sigma_st(v) / sigma_st, where sigma counts shortest
    paths; distances and path counts come from all-pairs BFS.
    """
    n = g.n_nodes
    adj = g.adjacency
    INF = n + 1
    dist = [[INF] * n for _ in range(n)]
    sigma = [[0] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        sigma[s][s] = 1
        queue = [s]
        while queue:
            nxt: list[int] = []
            for u in queue:
                for w in adj[u]:
                    if dist[s][w] == INF:
                        dist[s][w] = dist[s][u] + 1
                        nxt.append(w)
                    if dist[s][w] == dist[s][u] + 1:
                        sigma[s][w] += sigma[s][u]
            queue = nxt
    btw = [Fraction(0)] * n
    for s in range(n):
        for t in range(n):
            if s == t:
                continue
            st = sigma[s][t]
            d_st = dist[s][t]
            for v in range(n):
                if v == s or v == t:
                    continue
                if dist[s][v] + dist[v][t] == d_st:
                    btw[v] += Fraction(sigma[s][v] * sigma[v][t], st)
    return btw


_VALUE_FUNCTIONS = {
    "degree": degree_values,
    "core": core_values,
    "clustering": clustering_values,
    "betweenness": betweenness_values,
}


def measure_values(g: Graphlet, fn: str) -> list:
    """Unsorted per-node values for a resolved hash function."""
    return _VALUE_FUNCTIONS[fn](g)


def degree_vector(g: Graphlet) -> list[int]:
    return sorted(degree_values(g))


def core_vector(g: Graphlet) -> list[int]:
    return sorted(core_values(g))


def clustering_vector(g: Graphlet) -> list[Fraction]:
    return sorted(clustering_values(g))


def betweenness_vector(g: Graphlet) -> list[Fraction]:
    return sorted(betweenness_values(g))


def format_value(x) -> str:
    """Serialize a measure value: integers plainly, rationals num/den."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass(frozen=True)
class HashCode:
    """Canonical code identifying a graphlet's isomorphism class."""

    n_edges: int
    fn: str
    topo_key: str
    node_label_key: str = ""
    edge_label_key: str = ""

    @property
    def label_key(self) -> str:
        if not self.node_label_key and not self.edge_label_key:
            return ""
        return f"{self.node_label_key}|{self.edge_label_key}"

    @property
    def key(self) -> str:
        return (
            f"{self.n_edges}|{self.fn}|{self.topo_key}"
            f"|{self.node_label_key}|{self.edge_label_key}"
        )


@lru_cache(maxsize=1 << 18)
def _hash_code_cached(
    fn: str,
    n_nodes: int,
    edges: tuple[tuple[int, int], ...],
    node_labels: tuple[str, ...] | None,
    edge_labels: tuple[str, ...] | None,
) -> HashCode:
    g = Graphlet(n_nodes=n_nodes, edges=edges,
                 node_labels=node_labels, edge_labels=edge_labels)
    values = measure_values(g, fn)
    topo_key = ",".join(format_value(v) for v in sorted(values))

    node_label_key = ""
    edge_label_key = ""
    if node_labels is not None or edge_labels is not None:
        # Nodes are ordered by (measure value, node label); nodes that tie
        # on both are interchangeable, so edge signatures use the rank of
        # the (value, label) class rather than of the individual node,
        # which keeps codes identical across relabelings.
        keys = [
            (values[i], node_labels[i] if node_labels is not None else "")
            for i in range(n_nodes)
        ]
        class_rank = {k: r for r, k in enumerate(sorted(set(keys)))}
        if node_labels is not None:
            node_label_key = ",".join(lbl for _, lbl in sorted(keys))
        if edge_labels is not None:
            triples = []
            for (u, v), lbl in zip(edges, edge_labels):
                ru, rv = sorted((class_rank[keys[u]], class_rank[keys[v]]))
                triples.append((ru, rv, lbl))
            edge_label_key = ",".join(lbl for _, _, lbl in sorted(triples))
    return HashCode(len(edges), fn, topo_key, node_label_key, edge_label_key)


def hash_code(g: Graphlet, fn: str = "auto") -> HashCode:
    """Permutation-invariant code for a graphlet under a hash function."""
    resolved = resolve_hash_function(fn, g.n_edges)
    return _hash_code_cached(resolved, g.n_nodes, g.edges, g.node_labels, g.edge_labels)


def select_hash_function(candidates: Sequence[str], n_edges: int,
                         reports: Mapping[str, "object"]) -> str:
    """Pick the candidate with the lowest measured collision probability.

    ``reports`` maps each resolved candidate to an object exposing an
    ``e_f`` attribute (see audit.CollisionReport). Exact ties go to the
    cheaper measure: degree < core < clustering < betweenness.
    """
    if not candidates:
        raise ValueError("no candidate hash functions")
    resolved = [resolve_hash_function(c, n_edges) for c in candidates]
    return min(resolved, key=lambda fn: (reports[fn].e_f, _COST_ORDER[fn]))
