from __future__ import annotations

import random

import pytest

from _util import all_graphs, random_graph, random_lc_walk
from luequiv.errors import ValidationError
from luequiv.graph import Graph, local_complement
from luequiv.localsets import (
    BOT,
    X,
    Z,
    MlsCover,
    all_local_sets,
    dimension_of,
    generators_of,
    is_cover_of,
    is_local_set,
    is_minimal_local_set,
    mls_cover,
    mls_dimension_equal,
    vertex_types,
)


def brute_closure(g: Graph, d: int) -> int:
    """D together with the vertices having an odd number of neighbours in D."""
    odd = 0
    for v in range(g.n):
        if sum(1 for u in range(g.n) if (d >> u) & 1 and g.has_edge(u, v)) % 2:
            odd |= 1 << v
    return d | odd


def brute_lattice(g: Graph):
    table = {}
    for d in range(1, 1 << g.n):
        table.setdefault(brute_closure(g, d), []).append(d)
    return table


STAR = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def test_generator_examples():
    assert 1 << 0 in generators_of(STAR, 0b1111)
    lone = Graph.from_edges(3, [(0, 1)])
    assert generators_of(lone, 1 << 2) == [1 << 2]
    assert generators_of(lone, 1 << 0) == []


def test_generators_match_brute_force():
    rng = random.Random(20)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 7))
        table = brute_lattice(g)
        assert all_local_sets(g) == set(table)
        for L in range(1, 1 << g.n):
            assert generators_of(g, L) == sorted(table.get(L, []))
            assert is_local_set(g, L) == (L in table)


def test_minimality_examples():
    lone = Graph.from_edges(3, [(0, 1)])
    assert is_minimal_local_set(lone, 1 << 2)
    two_edges = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert not is_minimal_local_set(two_edges, 0b1111)
    assert is_minimal_local_set(two_edges, 0b0011)


def test_minimality_matches_lattice():
    rng = random.Random(21)
    for _ in range(60):
        g = random_graph(rng, rng.randint(1, 7))
        sets = set(brute_lattice(g))
        for L in sets:
            minimal = not any(M != L and M & L == M for M in sets)
            assert is_minimal_local_set(g, L) == minimal


def test_dimension_counts_generators():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert dimension_of(k2, 0b11) == 2
    assert dimension_of(STAR, 0b0011) == 1
    rng = random.Random(22)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 7))
        for L, gens in brute_lattice(g).items():
            if is_minimal_local_set(g, L):
                assert len(gens) + 1 == 1 << dimension_of(g, L)


def test_cover_examples():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert mls_cover(k2).masks == [0b11]
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    cover = mls_cover(p3)
    assert len(cover.masks) <= 2 and cover.covered == 0b111
    assert mls_cover(STAR).masks == [0b0011, 0b0101, 0b1001]


def test_cover_exhaustive_small():
    for n in range(1, 6):
        for g in all_graphs(n):
            cover = mls_cover(g)
            assert cover.covered == g.vertices
            assert all(is_minimal_local_set(g, L) for L in cover.masks)


def test_cover_random_up_to_8():
    rng = random.Random(23)
    for _ in range(300):
        g = random_graph(rng, rng.randint(6, 8))
        assert is_cover_of(g, mls_cover(g))


def test_types_examples():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert vertex_types(k2, mls_cover(k2)) == [BOT, BOT]
    assert vertex_types(STAR, mls_cover(STAR)) == [Z, X, X, X]
    with pytest.raises(ValidationError):
        vertex_types(STAR, MlsCover(4))


def test_dimension_two_gives_bottom():
    rng = random.Random(24)
    seen = 0
    for _ in range(200):
        g = random_graph(rng, rng.randint(2, 8))
        cover = mls_cover(g)
        types = vertex_types(g, cover)
        for L in cover.masks:
            if dimension_of(g, L) == 2:
                only_here = [v for v in range(g.n) if (L >> v) & 1 and sum((M >> v) & 1 for M in cover.masks) == 1]
                for v in only_here:
                    assert types[v] == BOT
                    seen += 1
    assert seen > 0


def test_cover_is_lc_invariant():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert not is_cover_of(Graph.empty(2), mls_cover(k2))
    rng = random.Random(25)
    for _ in range(200):
        g = random_graph(rng, rng.randint(2, 9))
        cover = mls_cover(g)
        assert is_cover_of(g, cover)
        h = random_lc_walk(rng, g, 5)
        assert is_cover_of(h, cover)
        for L in cover.masks:
            assert mls_dimension_equal(g, h, L)


def test_local_sets_lc_invariant():
    rng = random.Random(26)
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 9))
        v = rng.randrange(g.n)
        assert all_local_sets(g) == all_local_sets(local_complement(g, v))
