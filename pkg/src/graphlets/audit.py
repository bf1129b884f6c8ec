"""Exhaustive enumeration of connected graphs by edge count, an exact
isomorphism oracle, and hash-function collision reports.

Collision measurement convention: feeding all class representatives of
one size through a hash table, every insertion that hits an occupied
slot counts as one collision, i.e. n_collisions = n_graphs - distinct
codes. Degree, core and betweenness codes are the exact sorted
per-node vectors. Clustering codes are the per-node coefficients
divided by the node count, compared as fixed-width rows of width t+1,
zero-filled on the left; that is how the reference measurements these
reports are validated against were taken. The embedding codes produced
by :mod:`graphlets.hashing` key on the exact vectors plus label
signatures and are at least as fine, so their real collision rate is
bounded by the reported one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .graphs import Graphlet, serialize_graph
from .hashing import measure_values, resolve_hash_function

MAX_ORACLE_NODES = 12
MAX_ENUM_EDGES = 10


def _signatures(g: Graphlet) -> list[tuple]:
    degs = [len(ns) for ns in g.adjacency]
    labels = g.node_labels or ("",) * g.n_nodes
    return [
        (degs[u], labels[u], tuple(sorted(degs[w] for w in g.adjacency[u])))
        for u in range(g.n_nodes)
    ]


def is_isomorphic(g1: Graphlet, g2: Graphlet) -> bool:
    """Exact isomorphism test by backtracking over degree-compatible
    node mappings; node/edge labels are respected when present."""
    if g1.n_nodes > MAX_ORACLE_NODES or g2.n_nodes > MAX_ORACLE_NODES:
        raise ValueError(f"isomorphism oracle is limited to {MAX_ORACLE_NODES} nodes")
    if (g1.node_labels is None) != (g2.node_labels is None) or (
        g1.edge_labels is None
    ) != (g2.edge_labels is None):
        raise ValueError("cannot compare labelled with unlabelled graphlets")
    if g1.n_nodes != g2.n_nodes or g1.n_edges != g2.n_edges:
        return False

    sig1, sig2 = _signatures(g1), _signatures(g2)
    if sorted(sig1) != sorted(sig2):
        return False
    if g1.edge_labels is not None and sorted(g1.edge_labels) != sorted(g2.edge_labels):
        return False

    n = g1.n_nodes
    adj1 = [set(ns) for ns in g1.adjacency]
    adj2 = [set(ns) for ns in g2.adjacency]
    elab1, elab2 = g1.edge_label_map, g2.edge_label_map
    candidates = [[y for y in range(n) if sig2[y] == sig1[x]] for x in range(n)]

    # Place nodes of g1 so each one (after the first) touches a placed node.
    order: list[int] = []
    placed = [False] * n
    first = max(range(n), key=lambda u: (len(adj1[u]), -u))
    order.append(first)
    placed[first] = True
    while len(order) < n:
        nxt = max(
            (u for u in range(n) if not placed[u]),
            key=lambda u: (sum(placed[w] for w in adj1[u]), len(adj1[u]), -u),
        )
        order.append(nxt)
        placed[nxt] = True

    mapping = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        x = order[i]
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for p in order[:i]:
                adj_in_1 = p in adj1[x]
                if adj_in_1 != (mapping[p] in adj2[y]):
                    ok = False
                    break
                if adj_in_1 and elab1:
                    ek1 = (min(p, x), max(p, x))
                    ek2 = (min(mapping[p], y), max(mapping[p], y))
                    if elab1[ek1] != elab2[ek2]:
                        ok = False
                        break
            if not ok:
                continue
            mapping[x] = y
            used[y] = True
            if extend(i + 1):
                return True
            mapping[x] = -1
            used[y] = False
        return False

    return extend(0)


def _bucket_key(g: Graphlet) -> tuple:
    degs = [len(ns) for ns in g.adjacency]
    nbr = tuple(sorted(tuple(sorted(degs[w] for w in g.adjacency[u]))
                       for u in range(g.n_nodes)))
    return (g.n_nodes, tuple(sorted(degs)), nbr)


def _extensions(g: Graphlet) -> list[Graphlet]:
    present = set(g.edges)
    out = []
    for u in range(g.n_nodes):
        for v in range(u + 1, g.n_nodes):
            if (u, v) not in present:
                out.append(
                    Graphlet(g.n_nodes, tuple(sorted(present | {(u, v)})))
                )
    for u in range(g.n_nodes):
        out.append(Graphlet(g.n_nodes + 1, tuple(sorted(present | {(u, g.n_nodes)}))))
    return out


@lru_cache(maxsize=None)
def _enumerated(n_edges: int) -> tuple[Graphlet, ...]:
    if not 1 <= n_edges <= MAX_ENUM_EDGES:
        raise ValueError(f"enumeration supports 1..{MAX_ENUM_EDGES} edges, got {n_edges}")
    if n_edges == 1:
        return (Graphlet(2, ((0, 1),)),)
    reps: list[Graphlet] = []
    buckets: dict[tuple, list[Graphlet]] = {}
    for parent in _enumerated(n_edges - 1):
        for child in _extensions(parent):
            bucket = buckets.setdefault(_bucket_key(child), [])
            if any(is_isomorphic(child, seen) for seen in bucket):
                continue
            bucket.append(child)
            reps.append(child)
    return tuple(reps)


def enumerate_connected(n_edges: int) -> list[Graphlet]:
    """One canonical representative per isomorphism class of connected
    simple graphs with exactly n_edges edges (grown by single-edge
    extension of the previous size, deduplicated with the oracle)."""
    return list(_enumerated(n_edges))


@dataclass(frozen=True)
class CollisionReport:
    """Collision statistics of one hash function at one graphlet size."""

    fn: str
    n_edges: int
    n_graphs: int
    n_pairs: int
    n_collisions: int
    e_f: Fraction
    colliding_pairs: tuple[tuple[Graphlet, Graphlet], ...]


def audit_code(g: Graphlet, fn: str, n_edges: int) -> tuple:
    """Measurement key used for collision counting (see module docs)."""
    values = measure_values(g, fn)
    if fn == "clustering":
        row = sorted(Fraction(v) / g.n_nodes for v in values)
        return tuple([Fraction(0)] * (n_edges + 1 - len(row)) + row)
    return tuple(sorted(Fraction(v) for v in values))


def collision_report(fn: str, n_edges: int, keep_pairs: bool = True) -> CollisionReport:
    """Hash every enumerated representative and report collisions.

    ``colliding_pairs`` lists, for inspection, every pair of distinct
    classes whose measurement keys coincide.
    """
    resolved = resolve_hash_function(fn, n_edges)
    reps = _enumerated(n_edges)
    groups: dict[tuple, list[int]] = {}
    for i, g in enumerate(reps):
        groups.setdefault(audit_code(g, resolved, n_edges), []).append(i)

    n = len(reps)
    n_pairs = n * (n - 1) // 2
    n_collisions = n - len(groups)
    pairs: list[tuple[Graphlet, Graphlet]] = []
    if keep_pairs:
        for members in sorted(m for m in groups.values() if len(m) > 1):
            pairs.extend((reps[i], reps[j]) for i, j in combinations(members, 2))
    e_f = Fraction(n_collisions, n_pairs) if n_pairs else Fraction(0)
    return CollisionReport(resolved, n_edges, n, n_pairs, n_collisions, e_f, tuple(pairs))


def format_report(report: CollisionReport) -> str:
    """TSV report plus the colliding pairs as graph transaction blocks."""
    lines = [
        "fn\tt\tn_graphs\tn_pairs\tn_collisions\te_f\te_f_5dp",
        "{}\t{}\t{}\t{}\t{}\t{}\t{:.5f}".format(
            report.fn,
            report.n_edges,
            report.n_graphs,
            report.n_pairs,
            report.n_collisions,
            report.e_f,
            float(report.e_f),
        ),
    ]
    for k, (a, b) in enumerate(report.colliding_pairs):
        stem = f"{report.fn}-t{report.n_edges}-pair{k}"
        lines.append(f"# colliding pair {k}")
        lines.append(serialize_graph(a.to_graph(f"{stem}-a")).rstrip("\n"))
        lines.append(serialize_graph(b.to_graph(f"{stem}-b")).rstrip("\n"))
    return "\n".join(lines) + "\n"


def write_report(report: CollisionReport, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_report(report))
