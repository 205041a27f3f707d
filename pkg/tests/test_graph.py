from __future__ import annotations

import random
from itertools import combinations

import pytest

from _util import A, B, C, D, E, F, example_graph, example_move, random_graph, random_incident
from luequiv.errors import ValidationError
from luequiv.graph import (
    Graph,
    VertexMultiset,
    apply_rlc,
    common_neighborhood,
    decompose_2lc,
    from_graph6,
    is_genuine,
    is_independent,
    is_r_incident,
    local_complement,
    mask_of,
    odd_neighborhood,
    pivot,
    reduce_level,
    reduce_nongenuine,
    rlc_toggles,
    s_dot_lambda,
    to_graph6,
    to_list,
    twins,
)


def brute_rlc(g: Graph, s: VertexMultiset) -> Graph:
    """Definition-level r-local complementation: toggle uv iff the weighted
    count of common neighbours in s is 2^(r-1) mod 2^r."""
    mod = s.modulus
    pairs = []
    for u, v in combinations(range(g.n), 2):
        cnt = sum(m for w, m in s.items if g.has_edge(u, w) and g.has_edge(v, w))
        if cnt % mod == mod // 2:
            pairs.append((u, v))
    return g.toggle(pairs)


def test_graph_validation():
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(ValidationError):
        Graph.from_edges(3, [(0, 3)])
    g = Graph.from_edges(3, [(0, 1), (1, 0)])
    assert g.num_edges() == 1


def test_odd_neighborhood_examples():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert odd_neighborhood(path, mask_of([0, 2])) == 0
    assert odd_neighborhood(path, 0) == 0
    assert odd_neighborhood(example_graph(), 1 << D) == mask_of([A, E])


def test_common_neighborhood_examples():
    g = example_graph()
    assert common_neighborhood(g, mask_of([E, F])) == mask_of([A, B, C])
    assert common_neighborhood(g, mask_of([D, E])) == mask_of([A])
    lone = Graph.from_edges(3, [(0, 1)])
    assert common_neighborhood(lone, 1 << 2) == 0


def test_example_incidence_counts():
    g, s = example_graph(), example_move()
    assert s_dot_lambda(g, s, mask_of([D, E])) == 2
    assert s_dot_lambda(g, s, mask_of([D, F])) == 2
    assert s_dot_lambda(g, s, mask_of([E, F])) == 4
    assert s_dot_lambda(g, s, mask_of([D, E, F])) == 2
    assert s_dot_lambda(g, VertexMultiset(2, {}), mask_of([E, F])) == 0


def test_local_complement_examples():
    tri = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert sorted(local_complement(tri, 0).edges()) == [(0, 1), (0, 2)]
    h = local_complement(example_graph(), A)
    assert not h.has_edge(D, E) and h.has_edge(D, F) and not h.has_edge(E, F)
    rng = random.Random(1)
    for _ in range(500):
        g = random_graph(rng, rng.randint(1, 10))
        v = rng.randrange(g.n)
        assert local_complement(local_complement(g, v), v) == g


def test_pivot_examples():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert sorted(pivot(path, 0, 1).edges()) == [(0, 1), (0, 2)]
    rng = random.Random(2)
    done = 0
    while done < 500:
        g = random_graph(rng, rng.randint(2, 10))
        edges = g.edges()
        if not edges:
            continue
        u, v = rng.choice(edges)
        assert pivot(g, u, v) == local_complement(local_complement(local_complement(g, u), v), u)
        assert pivot(pivot(g, u, v), u, v) == g
        done += 1
    with pytest.raises(ValidationError):
        pivot(path, 0, 2)


def test_incidence_examples():
    g = example_graph()
    assert is_r_incident(g, example_move())
    assert is_r_incident(g, VertexMultiset(1, {D: 1, B: 1}))
    assert not is_r_incident(g, VertexMultiset(2, {A: 1, B: 1, C: 1}))
    assert is_independent(g, mask_of([A, B, C]))
    assert is_independent(g, 1 << D)
    assert not is_independent(g, mask_of([D, E]))


def test_example_toggles():
    g = example_graph()
    assert rlc_toggles(g, example_move()) == [(D, E), (D, F)]
    h = apply_rlc(g, example_move())
    assert set(h.edges()) ^ set(g.edges()) == {(D, E), (D, F)}


def test_apply_rlc_rejects_invalid():
    g = example_graph()
    with pytest.raises(ValidationError):
        apply_rlc(g, VertexMultiset(2, {A: 1, B: 1, C: 1}))
    with pytest.raises(ValidationError):
        apply_rlc(g, VertexMultiset(1, {D: 1, E: 1}))


def test_rlc_matches_definition_and_is_involutive():
    rng = random.Random(3)
    for _ in range(300):
        g = random_graph(rng, rng.randint(2, 10))
        r = rng.randint(1, 3)
        s = random_incident(rng, g, r)
        if s is None:
            continue
        h = apply_rlc(g, s)
        assert h == brute_rlc(g, s)
        assert apply_rlc(h, s) == g


def test_level_one_single_vertex_is_lc():
    rng = random.Random(4)
    for _ in range(200):
        g = random_graph(rng, rng.randint(1, 9))
        v = rng.randrange(g.n)
        assert apply_rlc(g, VertexMultiset(1, {v: 1})) == local_complement(g, v)


def test_multiset_arithmetic():
    s = VertexMultiset(2, {0: 3})
    assert (s + VertexMultiset(2, {})) == s
    assert (s + VertexMultiset(2, {0: 2})).as_dict() == {0: 1}
    with pytest.raises(ValidationError):
        s + VertexMultiset(3, {0: 1})


def test_doubling_shifts_level():
    rng = random.Random(5)
    for _ in range(200):
        g = random_graph(rng, rng.randint(2, 9))
        r = rng.randint(1, 3)
        s = random_incident(rng, g, r)
        if s is None:
            continue
        ss = s.at_level(r + 1) + s.at_level(r + 1)
        assert is_r_incident(g, ss)
        assert apply_rlc(g, ss) == apply_rlc(g, s)


def test_decompose_example_and_sets():
    g = example_graph()
    s2, s1 = decompose_2lc(g, example_move())
    assert s1 == 1 << A and s2 == mask_of([B, C])
    h = apply_rlc(apply_rlc(g, VertexMultiset.from_set(2, s2)), VertexMultiset.from_set(1, s1))
    assert h == apply_rlc(g, example_move())
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    s = VertexMultiset.from_set(2, mask_of([1, 2, 3]))
    if is_r_incident(star, s):
        assert decompose_2lc(star, s) == (mask_of([1, 2, 3]), 0)


def test_decompose_random():
    rng = random.Random(6)
    for _ in range(300):
        g = random_graph(rng, rng.randint(2, 10))
        s = random_incident(rng, g, 2)
        if s is None:
            continue
        s2, s1 = decompose_2lc(g, s)
        h = apply_rlc(apply_rlc(g, VertexMultiset.from_set(2, s2)), VertexMultiset.from_set(1, s1))
        assert h == apply_rlc(g, s)


def test_genuine_examples():
    g = example_graph()
    assert not is_genuine(g, example_move())
    low = reduce_nongenuine(g, example_move())
    assert low.level == 1 and low.as_dict() == {A: 1, B: 1}
    assert apply_rlc(g, low) == apply_rlc(g, example_move())


def test_doubled_multisets_reduce():
    rng = random.Random(7)
    trials = 0
    while trials < 100:
        g = random_graph(rng, rng.randint(2, 10))
        r = rng.randint(1, 3)
        s = random_incident(rng, g, r)
        if s is None:
            continue
        ss = s.at_level(r + 1) + s.at_level(r + 1)
        if not ss.items:
            continue
        assert not is_genuine(g, ss)
        low = reduce_nongenuine(g, ss)
        assert apply_rlc(g, low) == apply_rlc(g, ss)
        trials += 1


def test_reduce_level_small_complement():
    rng = random.Random(8)
    hits = 0
    for _ in range(2000):
        n = rng.randint(3, 9)
        g = random_graph(rng, n, 0.5)
        r = rng.randint(2, 3)
        s = random_incident(rng, g, r)
        if s is None:
            continue
        low = reduce_level(g, s)
        if low is None:
            assert is_genuine(g, s) and n - s.support.bit_count() > r + 2
            continue
        hits += 1
        assert low.level == r - 1
        assert apply_rlc(g, low) == apply_rlc(g, s)
    assert hits > 100


def test_twins():
    assert twins(example_graph()) == [(B, C)]
    k4 = Graph.from_edges(4, list(combinations(range(4), 2)))
    assert twins(k4) == []
    assert twins(Graph.empty(3)) == [(0, 1), (0, 2), (1, 2)]


def test_graph6_roundtrip():
    rng = random.Random(9)
    for n in list(range(1, 12)) + [62, 63, 100]:
        g = random_graph(rng, n)
        assert from_graph6(to_graph6(g)) == g
        assert from_graph6(to_graph6(g, header=True)) == g
    assert to_graph6(Graph.from_edges(3, [(0, 1), (1, 2)])) == "Bg"  # nauty's encoding of P3
    with pytest.raises(ValidationError):
        from_graph6("B")
    with pytest.raises(ValidationError):
        from_graph6("B\x01")


def test_bit_helpers():
    assert to_list(mask_of([5, 0, 3])) == [0, 3, 5]
