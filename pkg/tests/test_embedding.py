import random

import pytest

from graphlets import (
    Embedding,
    SamplerParams,
    Vocabulary,
    build_vocabulary,
    concat_embeddings,
    embed_graph,
    embed_graph_stats,
    finalize_embeddings,
    parse_graph_file,
    read_embeddings,
    read_vocabulary,
    write_embeddings,
    write_vocabulary,
)

from synth import random_connected_graph

K2 = parse_graph_file("t k2\nv 0\nv 1\ne 0 1")[0]
TRIANGLE = parse_graph_file("t tri\nv 0\nv 1\nv 2\ne 0 1\ne 0 2\ne 1 2")[0]


def test_embed_k2_single_code():
    counts = embed_graph(K2, SamplerParams(runs=5, max_edges=1, seed=0), "degree")
    assert counts == {"1|degree|1,1||": 5}


def test_embed_triangle_two_sizes():
    counts = embed_graph(TRIANGLE, SamplerParams(runs=10, max_edges=2, seed=0), "degree")
    assert counts == {"1|degree|1,1||": 10, "2|degree|1,1,2||": 10}


def test_embed_triangle_min_edges_three():
    counts = embed_graph(
        TRIANGLE, SamplerParams(runs=10, max_edges=3, seed=0), "degree", min_edges=3
    )
    assert counts == {"3|degree|2,2,2||": 10}


def test_total_counts_without_dead_ends():
    rng = random.Random(41)
    for i in range(10):
        n = rng.randint(10, 18)
        g = random_connected_graph(f"g{i}", n, n, rng)  # ~2n edges, well above budget
        max_edges = rng.randint(2, 6)
        min_edges = rng.randint(1, max_edges)
        params = SamplerParams(runs=7, max_edges=max_edges, seed=i)
        counts, dead, emitted = embed_graph_stats(g, params, "auto", min_edges)
        assert dead == 0
        assert sum(counts.values()) == emitted == 7 * (max_edges - min_edges + 1)


def test_dead_ends_reduce_totals_exactly():
    # one isolated edge: every run stops after one step
    counts, dead, emitted = embed_graph_stats(
        K2, SamplerParams(runs=4, max_edges=3, seed=1), "degree", 1
    )
    assert dead == 4
    assert sum(counts.values()) == emitted == 4


def test_min_edges_validation():
    with pytest.raises(ValueError):
        embed_graph(K2, SamplerParams(runs=1, max_edges=2, seed=0), "degree", min_edges=3)
    with pytest.raises(ValueError):
        embed_graph(K2, SamplerParams(runs=1, max_edges=2, seed=0), "degree", min_edges=0)


def test_build_vocabulary_sorts_and_dedupes():
    vocab = build_vocabulary([{"b": 1}, {"a": 2, "b": 1}])
    assert vocab.entries == ("a", "b")
    assert vocab.index == {"a": 0, "b": 1}
    shuffled = build_vocabulary([{"a": 2, "b": 1}, {"b": 1}])
    assert shuffled == vocab
    with pytest.raises(ValueError):
        build_vocabulary([{}, {}])


def test_finalize_alignment_and_oov():
    vocab = Vocabulary(("a", "b"))
    embs = finalize_embeddings(
        [("g0", {"a": 3}), ("g1", {}), ("g2", {"c": 1})], vocab
    )
    assert embs[0].counts == (3, 0) and embs[0].oov_count == 0
    assert embs[1].counts == (0, 0)
    assert embs[2].counts == (0, 0) and embs[2].oov_count == 1
    assert [e.graph_id for e in embs] == ["g0", "g1", "g2"]


def test_concat_embeddings():
    a = Embedding("g", (1, 0)), Vocabulary(("3|x", "3|y"))
    b = Embedding("g", (2,)), Vocabulary(("4|z",))
    emb, vocab = concat_embeddings([a, b])
    assert emb.counts == (1, 0, 2)
    assert vocab.entries == ("3|x", "3|y", "4|z")

    with pytest.raises(ValueError, match="mismatch"):
        concat_embeddings([a, (Embedding("other", (2,)), Vocabulary(("4|z",)))])
    with pytest.raises(ValueError, match="share"):
        concat_embeddings([a, (Embedding("g", (2, 2)), Vocabulary(("3|x", "4|z")))])
    with pytest.raises(ValueError):
        concat_embeddings([])


def test_concat_zero_padding_keeps_dot_products():
    emb, _ = concat_embeddings(
        [
            (Embedding("g", (1, 2)), Vocabulary(("3|a", "3|b"))),
            (Embedding("g", (0, 0)), Vocabulary(("4|a", "4|b"))),
        ]
    )
    assert sum(x * y for x, y in zip(emb.counts, emb.counts)) == 1 + 4


def test_triangle_histogram_invariant_under_node_permutation():
    # saturating budget on a fully forced graph: exact histogram equality
    permuted = parse_graph_file("t tri\nv 0\nv 1\nv 2\ne 1 2\ne 0 2\ne 0 1")[0]
    params = SamplerParams(runs=30, max_edges=3, seed=9)
    assert embed_graph(TRIANGLE, params, "degree") == embed_graph(permuted, params, "degree")


def test_reachable_code_sets_invariant_under_permutation():
    rng = random.Random(42)
    g = random_connected_graph("g", 7, 3, rng)
    relabel = {old: new for new, old in enumerate(rng.sample(range(7), 7))}
    edges = tuple(sorted(tuple(sorted((relabel[u], relabel[v]))) for u, v in g.edges))
    h = type(g)("g", 7, edges)
    params = SamplerParams(runs=3000, max_edges=2, seed=5)
    keys_g = set(embed_graph(g, params, "degree"))
    keys_h = set(embed_graph(h, params, "degree"))
    assert keys_g == keys_h


def test_vocab_and_embedding_files_round_trip(tmp_path):
    maps = [
        ("g0", embed_graph(TRIANGLE, SamplerParams(runs=6, max_edges=3, seed=3), "degree")),
        ("g1", embed_graph(K2, SamplerParams(runs=6, max_edges=1, seed=3), "degree")),
    ]
    vocab = build_vocabulary([m for _, m in maps])
    embs = finalize_embeddings(maps, vocab)

    vpath, epath = tmp_path / "vocab.txt", tmp_path / "emb.tsv"
    write_vocabulary(vocab, str(vpath))
    assert read_vocabulary(str(vpath)) == vocab
    assert vpath.read_text().count("\n") == len(vocab)

    write_embeddings(embs, str(epath))
    header = epath.read_text().splitlines()[0]
    assert header.split("\t")[0] == "graph_id"
    assert header.split("\t")[1:] == [f"bin{i}" for i in range(len(vocab))]
    ids, rows = read_embeddings(str(epath))
    assert ids == ["g0", "g1"]
    assert [tuple(r) for r in rows] == [e.counts for e in embs]


def test_normalized_rows_sum_to_one(tmp_path):
    embs = [Embedding("g0", (2, 2)), Embedding("g1", (0, 0))]
    path = tmp_path / "norm.tsv"
    write_embeddings(embs, str(path), normalize=True)
    _, rows = read_embeddings(str(path))
    assert rows[0] == [0.5, 0.5]
    assert rows[1] == [0, 0]


def test_code_keys_carry_resolved_function():
    counts = embed_graph(TRIANGLE, SamplerParams(runs=2, max_edges=3, seed=2), "auto")
    for key in counts:
        t, fn = key.split("|")[:2]
        assert fn == "degree" and 1 <= int(t) <= 3  # auto resolves by size
