from __future__ import annotations

import random
from itertools import product

import numpy as np

from luequiv.linalg import (
    F2Span,
    f2_basis_from_generators,
    f2_kernel,
    f2_rank,
    f2_solve_affine,
    howell_form,
    howell_kernel,
    independent_subset,
    mod_matvec,
)


def apply_rows(rows, x):
    return [(row & x).bit_count() & 1 for row in rows]


def test_identity_system():
    rows = [1 << i for i in range(5)]
    x, kernel = f2_solve_affine(rows, [1, 0, 1, 1, 0], 5)
    assert x == 0b01101 and kernel == []


def test_zero_matrix():
    x, kernel = f2_solve_affine([0, 0, 0], [0, 0, 0], 6)
    assert x == 0 and len(kernel) == 6
    x, _ = f2_solve_affine([0], [1], 6)
    assert x is None


def test_random_f2_systems():
    rng = random.Random(10)
    for _ in range(200):
        nr, nc = rng.randint(1, 20), rng.randint(1, 30)
        rows = [rng.getrandbits(nc) for _ in range(nr)]
        rhs = [rng.getrandbits(1) for _ in range(nr)]
        x, kernel = f2_solve_affine(rows, rhs, nc)
        rank = f2_rank(rows)
        assert len(kernel) == nc - rank
        for k in kernel:
            assert apply_rows(rows, k) == [0] * nr
        if x is None:
            # inconsistent: the rhs is not in the column space, so no vector of a
            # small system solves it
            if nc <= 10:
                assert all(apply_rows(rows, y) != rhs for y in range(1 << nc))
        else:
            assert apply_rows(rows, x) == rhs
    assert f2_kernel([0b11], 2) == [0b11]


def test_span_tools():
    assert f2_basis_from_generators([]) == []
    assert len(f2_basis_from_generators([5, 5, 5])) == 1
    rng = random.Random(11)
    for _ in range(100):
        vecs = [rng.getrandbits(8) for _ in range(rng.randint(0, 10))]
        span = F2Span(vecs)
        members = {0}
        for v in vecs:
            members |= {m ^ v for m in members}
        for y in range(256):
            assert (y in span) == (y in members)
        idx = independent_subset(vecs)
        assert f2_rank([vecs[i] for i in idx]) == len(idx) == span.dim


def module_span(gens, r, width):
    mod = 1 << r
    out = {tuple([0] * width)}
    frontier = list(out)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + int(b)) % mod for a, b in zip(v, g))
                if w not in out:
                    out.add(w)
                    nxt.append(w)
        frontier = nxt
    return out


def test_howell_small_examples():
    gens = howell_kernel(np.array([[2]]), 2)
    assert module_span(gens, 2, 1) == {(0,), (2,)}
    assert module_span(howell_kernel(np.eye(3, dtype=np.int64), 2), 2, 3) == {(0, 0, 0)}


def test_howell_kernel_brute_force():
    rng = np.random.default_rng(12)
    for trial in range(40):
        r = int(rng.integers(1, 4))
        rows, cols = int(rng.integers(1, 11)), int(rng.integers(1, 6 if r == 3 else 9))
        if r == 2 and trial < 5:
            rows, cols = 10, 8
        A = rng.integers(0, 1 << r, size=(rows, cols))
        gens = howell_kernel(A, r)
        for g in gens:
            assert not mod_matvec(A, g, r).any()
        expected = {x for x in product(range(1 << r), repeat=cols) if not mod_matvec(A, np.array(x), r).any()}
        assert module_span(gens, r, cols) == expected


def test_howell_form_spans_rows():
    rng = np.random.default_rng(13)
    for _ in range(30):
        r = int(rng.integers(1, 4))
        A = rng.integers(0, 1 << r, size=(int(rng.integers(1, 6)), int(rng.integers(1, 5))))
        H = howell_form(A, r)
        assert module_span(list(H), r, A.shape[1]) == module_span(list(A), r, A.shape[1])
