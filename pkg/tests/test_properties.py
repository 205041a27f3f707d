from __future__ import annotations

import random
from itertools import combinations

from hypothesis import given, settings
from hypothesis import strategies as st

from _util import random_incident
from luequiv.bouchet import is_valid_quad, lc_sequence_to_quad, solve_constrained
from luequiv.graph import Graph, apply_rlc, from_graph6, local_complement, pivot, to_graph6
from luequiv.linalg import f2_solve_affine
from luequiv.localsets import all_local_sets


@st.composite
def graphs(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


@given(graphs(), st.data())
def test_lc_involution(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    assert local_complement(local_complement(g, v), v) == g


@given(graphs(min_n=2), st.data())
def test_pivot_is_symmetric_and_involutive(g, data):
    if not g.edges():
        return
    u, v = data.draw(st.sampled_from(g.edges()))
    assert pivot(g, u, v) == pivot(g, v, u)
    assert pivot(pivot(g, u, v), u, v) == g


@given(graphs(max_n=40))
def test_graph6_roundtrip(g):
    assert from_graph6(to_graph6(g)) == g


@settings(max_examples=60)
@given(graphs(min_n=2), st.integers(1, 3), st.integers(0, 2**32))
def test_rlc_involution(g, r, seed):
    s = random_incident(random.Random(seed), g, r, tries=30)
    if s is None:
        return
    assert apply_rlc(apply_rlc(g, s), s) == g


@settings(max_examples=40)
@given(graphs(max_n=8), st.lists(st.integers(0, 7), max_size=8))
def test_local_sets_invariant_and_quads_valid(g, seq):
    seq = [v % g.n for v in seq]
    h = g
    for v in seq:
        h = local_complement(h, v)
    assert all_local_sets(g) == all_local_sets(h)
    assert is_valid_quad(g, h, lc_sequence_to_quad(g, seq))
    assert solve_constrained(g, h) is not None


@given(st.lists(st.integers(0, 2**12 - 1), min_size=1, max_size=12), st.data())
def test_f2_solutions_satisfy(rows, data):
    rhs = data.draw(st.lists(st.integers(0, 1), min_size=len(rows), max_size=len(rows)))
    x, kernel = f2_solve_affine(rows, rhs, 12)
    if x is not None:
        assert [(r & x).bit_count() & 1 for r in rows] == rhs
    for k in kernel:
        assert all((r & k).bit_count() % 2 == 0 for r in rows)
