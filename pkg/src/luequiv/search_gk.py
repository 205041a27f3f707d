"""Exhaustive search over the bipartite class G_k of 2-incident sets.

An instance has k outside vertices ``T = {0..k-1}`` and an independent set S of
"word" vertices, one per subset of T of size >= 2 (its neighbourhood). The
words of weight >= 4 are free; the weight-3 and then weight-2 words are forced
so that every pair and triple of T has an even number of common S-neighbours.
Instances are indexed by an integer whose bit i selects ``high_words(k)[i]``.

For each instance the 2-local complementation over S toggles the pair {i, j}
iff the number of words containing it is 2 mod 4; it is implementable by local
complementations on S iff that toggle vector lies in the span of the per-word
vectors (all pairs inside the word).
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .errors import ResourceLimitError, ValidationError
from .graph import Graph, VertexMultiset, apply_rlc, bits, decompose_2lc, induced_subgraph, is_r_incident, mask_of, to_graph6
from .linalg import F2Span

MAX_K = 6
CLASSES = ("identity", "lc-implementable", "counterexample")


def count_gk(k: int) -> int:
    if k < 1:
        raise ValidationError("k must be positive")
    return 1 << sum(comb(k, j) for j in range(4, k + 1))


def words_of_weight(k: int, w: int) -> list[int]:
    return [m for m in range(1 << k) if m.bit_count() == w]


def high_words(k: int) -> list[int]:
    return [m for m in range(1 << k) if m.bit_count() >= 4]


def pair_list(k: int) -> list[tuple[int, int]]:
    """Pair coordinates, ordered like the weight-2 words (ascending mask value)."""
    return [tuple(bits(m)) for m in words_of_weight(k, 2)]


@dataclass
class GkInstance:
    k: int
    index: int
    chosen_high: tuple[int, ...]
    s_words: tuple[int, ...]  # ascending by mask value
    x: int  # bit i <-> pair_list(k)[i]
    action_vectors: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.s_words)

    @property
    def graph(self) -> Graph:
        """Vertices 0..k-1 are T, then one vertex per word in ``s_words`` order."""
        n = self.k + len(self.s_words)
        edges = [(t, self.k + i) for i, w in enumerate(self.s_words) for t in bits(w)]
        return Graph.from_edges(n, edges)

    @property
    def s_mask(self) -> int:
        return ((1 << len(self.s_words)) - 1) << self.k

    def multiset(self) -> VertexMultiset:
        return VertexMultiset.from_set(2, self.s_mask)

    def word_strings(self) -> list[str]:
        return ["".join("1" if (w >> t) & 1 else "0" for t in range(self.k)) for w in self.s_words]


def _pair_vector(k: int, word: int) -> int:
    out = 0
    for i, (a, b) in enumerate(pair_list(k)):
        if (word >> a) & 1 and (word >> b) & 1:
            out |= 1 << i
    return out


def complete_from_high(k: int, chosen_high) -> GkInstance:
    """Add the forced weight-3 then weight-2 words to the chosen high words.

    ``chosen_high`` is either the integer index or an iterable of word masks.
    """
    highs = high_words(k)
    if isinstance(chosen_high, (int, np.integer)):
        index = int(chosen_high)
        if index < 0 or index >> len(highs):
            raise ValidationError(f"index {index} outside the instance range for k={k}")
        chosen = [highs[i] for i in range(len(highs)) if (index >> i) & 1]
    else:
        chosen = sorted(set(chosen_high))
        if any(w.bit_count() < 4 or w >> k for w in chosen):
            raise ValidationError("chosen words must have weight >= 4 inside {0,1}^k")
        index = sum(1 << highs.index(w) for w in chosen)
    words = set(chosen)
    for w in (3, 2):
        for K in words_of_weight(k, w):
            if sum(1 for s in words if s & K == K) % 2:
                words.add(K)
    s_words = tuple(sorted(words))
    x = 0
    for i, (a, b) in enumerate(pair_list(k)):
        K = (1 << a) | (1 << b)
        count = sum(1 for s in s_words if s & K == K)
        assert count % 2 == 0
        if count % 4 == 2:
            x |= 1 << i
    return GkInstance(k, index, tuple(chosen), s_words, x, tuple(_pair_vector(k, w) for w in s_words))


def classify(inst: GkInstance) -> str:
    if not inst.x:
        return "identity"
    return "lc-implementable" if implementable_by_lc(inst) else "counterexample"


def implementable_by_lc(inst: GkInstance) -> bool:
    return inst.x in F2Span(inst.action_vectors)


def span_rank(inst: GkInstance) -> int:
    return F2Span(inst.action_vectors).dim


def classify_reference(inst: GkInstance) -> str:
    """Same classification computed on the explicit graph.

    Applies the 2-local complementation with full validation, reads off the
    toggled pairs and tests membership in the span of the LC toggles of S.
    """
    g = inst.graph
    s = inst.multiset()
    h = apply_rlc(g, s, check=True)
    if h == g:
        return "identity"
    diff = 0
    pos = {p: i for i, p in enumerate(combinations(range(g.n), 2))}
    for u in range(g.n):
        for v in bits((g.rows[u] ^ h.rows[u]) >> (u + 1) << (u + 1)):
            diff |= 1 << pos[(u, v)]
    span = F2Span()
    for w in bits(inst.s_mask):
        vec = 0
        for a, b in combinations(sorted(bits(g.rows[w])), 2):
            vec |= 1 << pos[(a, b)]
        span.add(vec)
    return "lc-implementable" if diff in span else "counterexample"


# -- compiled scan -----------------------------------------------------------------


@dataclass
class ScanTables:
    k: int
    sup_tri_high: np.ndarray
    sup_pair_high: np.ndarray
    sup_pair_tri: np.ndarray
    vec_high: np.ndarray
    vec_tri: np.ndarray
    n_high: int

    @classmethod
    def build(cls, k: int) -> "ScanTables":
        highs = high_words(k)
        tris = words_of_weight(k, 3)
        pairs = words_of_weight(k, 2)

        def sup(targets, words):
            return np.array([sum(1 << i for i, w in enumerate(words) if w & t == t) for t in targets], dtype=np.int64)

        return cls(
            k,
            sup(tris, highs),
            sup(pairs, highs),
            sup(pairs, tris),
            np.array([_pair_vector(k, w) for w in highs], dtype=np.int64),
            np.array([_pair_vector(k, w) for w in tris], dtype=np.int64),
            len(highs),
        )


def _scan_python(tables: ScanTables, lo: int, hi: int, max_support: int, cex_cap: int):
    """Pure-Python twin of the compiled kernel (reference and fallback)."""
    n_tri = len(tables.sup_tri_high)
    n_pair = len(tables.sup_pair_high)
    counts = np.zeros((3, 64), dtype=np.int64)
    cex = []
    for idx in range(lo, hi):
        tri = 0
        for t in range(n_tri):
            if (idx & int(tables.sup_tri_high[t])).bit_count() & 1:
                tri |= 1 << t
        pairs = 0
        x = 0
        for p in range(n_pair):
            c = (idx & int(tables.sup_pair_high[p])).bit_count() + (tri & int(tables.sup_pair_tri[p])).bit_count()
            if c & 1:
                pairs |= 1 << p
                c += 1
            if (c >> 1) & 1:
                x |= 1 << p
        size = idx.bit_count() + tri.bit_count() + pairs.bit_count()
        if size > max_support:
            continue
        if x == 0:
            counts[0, size] += 1
            continue
        span = F2Span()
        for i in bits(idx):
            span.add(int(tables.vec_high[i]))
        for t in bits(tri):
            span.add(int(tables.vec_tri[t]))
        for p in bits(pairs):
            span.add(1 << p)
        if x in span:
            counts[1, size] += 1
        else:
            counts[2, size] += 1
            if counts[2, size] <= cex_cap:
                cex.append((size, idx))
    return counts, cex


_KERNEL = None


def _get_kernel():
    global _KERNEL
    if _KERNEL is not None:
        return _KERNEL
    import numba

    @numba.njit(cache=True)
    def popcount(x):
        x = x - ((x >> 1) & 0x5555555555555555)
        x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
        x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
        return (x * 0x0101010101010101) >> 56 & 0xFF

    @numba.njit(cache=True)
    def insert(basis, v):
        # basis[b] holds a vector whose highest set bit is b (0 = empty)
        for b in range(15, -1, -1):
            if (v >> b) & 1:
                if basis[b] == 0:
                    basis[b] = v
                    return
                v ^= basis[b]
        return

    @numba.njit(cache=True)
    def reduces_to_zero(basis, v):
        for b in range(15, -1, -1):
            if (v >> b) & 1:
                if basis[b] == 0:
                    return False
                v ^= basis[b]
        return v == 0

    @numba.njit(cache=True)
    def kernel(sup_tri_high, sup_pair_high, sup_pair_tri, vec_high, vec_tri, n_high, lo, hi, max_support, cex_out):
        n_tri = sup_tri_high.shape[0]
        n_pair = sup_pair_high.shape[0]
        counts = np.zeros((3, 64), dtype=np.int64)
        basis = np.zeros(16, dtype=np.int64)
        for idx in range(lo, hi):
            tri = 0
            for t in range(n_tri):
                if popcount(idx & sup_tri_high[t]) & 1:
                    tri |= 1 << t
            pairs = 0
            x = 0
            for p in range(n_pair):
                c = popcount(idx & sup_pair_high[p]) + popcount(tri & sup_pair_tri[p])
                if c & 1:
                    pairs |= 1 << p
                    c += 1
                if (c >> 1) & 1:
                    x |= 1 << p
            size = popcount(idx) + popcount(tri) + popcount(pairs)
            if size > max_support:
                continue
            if x == 0:
                counts[0, size] += 1
                continue
            for b in range(16):
                basis[b] = 0
            for i in range(n_high):
                if (idx >> i) & 1:
                    insert(basis, vec_high[i])
            for t in range(n_tri):
                if (tri >> t) & 1:
                    insert(basis, vec_tri[t])
            for p in range(n_pair):
                if (pairs >> p) & 1:
                    insert(basis, np.int64(1) << p)
            if reduces_to_zero(basis, x):
                counts[1, size] += 1
            else:
                if counts[2, size] < cex_out.shape[1]:
                    cex_out[size, counts[2, size]] = idx
                counts[2, size] += 1
        return counts

    _KERNEL = kernel
    return kernel


def scan_range(k: int, lo: int, hi: int, max_support: Optional[int] = None, cex_cap: int = 16, backend: str = "numba"):
    """Class counts (rows = CLASSES, columns = |S|) over instance indices [lo, hi),
    plus up to ``cex_cap`` counterexamples per support size as (|S|, index) pairs."""
    tables = ScanTables.build(k)
    ms = 63 if max_support is None else max_support
    if backend == "python":
        return _scan_python(tables, lo, hi, ms, cex_cap)
    kernel = _get_kernel()
    cex_out = np.zeros((64, max(cex_cap, 1)), dtype=np.int64)
    counts = kernel(
        tables.sup_tri_high, tables.sup_pair_high, tables.sup_pair_tri, tables.vec_high, tables.vec_tri, tables.n_high, lo, hi, ms, cex_out
    )
    cex = [(size, int(cex_out[size, j])) for size in range(64) for j in range(min(int(counts[2, size]), cex_cap))]
    return counts, cex


def support_sizes(k: int) -> np.ndarray:
    """|S| for every instance index, computed with vectorised numpy bit arithmetic."""
    highs = high_words(k)
    idx = np.arange(1 << len(highs), dtype=np.int64)
    present = {w: ((idx >> i) & 1).astype(np.int64) for i, w in enumerate(highs)}
    for w in (3, 2):
        for K in words_of_weight(k, w):
            par = np.zeros_like(idx)
            for s, col in present.items():
                if s & K == K:
                    par ^= col
            present[K] = par
    return sum(present.values()) if present else np.zeros_like(idx)


def filtered_count(k: int, max_support: Optional[int]) -> int:
    if max_support is None:
        return count_gk(k)
    return int(np.count_nonzero(support_sizes(k) <= max_support))


# -- the harness -------------------------------------------------------------------


@dataclass
class ScanReport:
    k: int
    max_support: Optional[int]
    counts: np.ndarray
    counterexamples: list[tuple[int, int]] = field(default_factory=list)  # (|S|, index)
    runtime: float = 0.0
    chunks: int = 0

    @property
    def counterexample_indices(self) -> list[int]:
        return [idx for _, idx in self.counterexamples]

    def counterexamples_of_size(self, size: int) -> list[int]:
        return [idx for s, idx in self.counterexamples if s == size]

    @property
    def visited(self) -> int:
        return int(self.counts.sum())

    def class_total(self, cls: str) -> int:
        return int(self.counts[CLASSES.index(cls)].sum())

    def max_size(self, cls: str) -> Optional[int]:
        row = self.counts[CLASSES.index(cls)]
        nz = np.nonzero(row)[0]
        return int(nz.max()) if len(nz) else None

    def min_size(self, cls: str) -> Optional[int]:
        row = self.counts[CLASSES.index(cls)]
        nz = np.nonzero(row)[0]
        return int(nz.min()) if len(nz) else None

    def to_json(self, dump: int = 4) -> dict:
        per_class = {}
        for c, name in enumerate(CLASSES):
            per_class[name] = {str(s): int(v) for s, v in enumerate(self.counts[c]) if v}
        cexs = []
        for idx in self.counterexample_indices[:dump]:  # smallest supports first
            inst = complete_from_high(self.k, idx)
            cexs.append(
                {
                    "index": idx,
                    "support": inst.size,
                    "order": inst.k + inst.size,
                    "graph6": to_graph6(inst.graph),
                    "words": inst.word_strings(),
                    "x": [list(p) for i, p in enumerate(pair_list(self.k)) if (inst.x >> i) & 1],
                    "span_rank": span_rank(inst),
                }
            )
        return {
            "k": self.k,
            "max_support": self.max_support,
            "instances": count_gk(self.k),
            "visited": self.visited,
            "counts": per_class,
            "totals": {name: self.class_total(name) for name in CLASSES},
            "runtime_s": round(self.runtime, 3),
            "counterexamples": cexs,
        }


def _run_chunk(args):
    k, lo, hi, max_support, cex_cap, backend = args
    counts, cex = scan_range(k, lo, hi, max_support, cex_cap, backend)
    return lo, counts.tolist(), cex


def scan(
    k: int,
    max_support: Optional[int] = None,
    jobs: int = 1,
    checkpoint: Optional[str] = None,
    chunk: int = 1 << 16,
    cex_cap: int = 16,
    backend: str = "numba",
    progress=None,
) -> ScanReport:
    """Classify every instance of G_k (optionally only those with |S| <= max_support).

    Work is split into contiguous index chunks; finished chunks are recorded in
    the checkpoint file (JSON) so an interrupted scan resumes where it stopped.
    """
    if not 1 <= k <= MAX_K:
        raise ResourceLimitError(f"k={k} is out of reach: G_7 alone has 2^64 instances (supported k <= {MAX_K})")
    if jobs < 1:
        raise ValidationError("jobs must be >= 1")
    start = time.time()
    total = count_gk(k)
    bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    counts = np.zeros((3, 64), dtype=np.int64)
    cex: list[tuple[int, int]] = []
    done: set[int] = set()
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            state = json.load(fh)
        if (state["k"], state["max_support"], state["chunk"]) != (k, max_support, chunk):
            raise ValidationError("checkpoint was written for different scan parameters")
        counts = np.array(state["counts"], dtype=np.int64)
        cex = [tuple(p) for p in state["counterexamples"]]
        done = set(state["done"])

    def save():
        if not checkpoint:
            return
        tmp = checkpoint + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(
                {"k": k, "max_support": max_support, "chunk": chunk, "done": sorted(done), "counts": counts.tolist(), "counterexamples": sorted(cex)},
                fh,
            )
        os.replace(tmp, checkpoint)

    todo = [(k, lo, hi, max_support, cex_cap, backend) for lo, hi in bounds if lo not in done]

    def absorb(lo, c, found):
        nonlocal counts, cex
        counts += np.array(c, dtype=np.int64)
        merged = sorted(set(cex) | {tuple(p) for p in found})
        cex = [p for p in merged if sum(1 for q in merged if q[0] == p[0] and q[1] < p[1]) < cex_cap]
        done.add(lo)
        save()
        if progress:
            progress(len(done), len(bounds))

    if jobs == 1 or len(todo) <= 1:
        for args in todo:
            absorb(*_run_chunk(args))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_chunk, args) for args in todo]
            for fut in as_completed(futures):
                absorb(*fut.result())
    return ScanReport(k, max_support, counts, cex, time.time() - start, len(bounds))


def iter_instances(k: int):
    for idx in range(count_gk(k)):
        yield complete_from_high(k, idx)


# -- reduction of arbitrary 2-local complementations to the class ---------------------


def lift_reduce(g: Graph, s: VertexMultiset) -> tuple[Graph, int]:
    """Reduce a 2-local complementation to a bipartite, twin-free class instance.

    Keeps the odd-multiplicity part S' of s, deletes edges among the other
    vertices, drops S' vertices of degree <= 1, deletes twin pairs inside S'
    until none remain, and finally drops isolated outside vertices. Each step
    changes the action by something implementable with local complementations
    on S', so a non-implementable input stays non-implementable.
    """
    s2, _ = decompose_2lc(g, s)
    rows = list(g.rows)
    outside = g.vertices & ~s2
    for v in bits(outside):
        rows[v] &= ~outside
    keep = g.vertices
    sp = s2
    for v in bits(sp):
        if rows[v].bit_count() <= 1:
            sp &= ~(1 << v)
            keep &= ~(1 << v)
    changed = True
    while changed:
        changed = False
        members = list(bits(sp))
        for a, b in combinations(members, 2):
            if rows[a] & keep == rows[b] & keep:
                sp &= ~((1 << a) | (1 << b))
                keep &= ~((1 << a) | (1 << b))
                changed = True
                break
    for v in bits(keep & ~sp):
        if not rows[v] & sp & keep:
            keep &= ~(1 << v)
    stripped = Graph._trusted(g.n, [rows[v] & keep if (keep >> v) & 1 else 0 for v in range(g.n)])
    sub, old = induced_subgraph(stripped, keep)
    new_s = mask_of(i for i, v in enumerate(old) if (sp >> v) & 1)
    return sub, new_s


def implementable_on_support(g: Graph, s_mask: int) -> bool:
    """Whether the 2-local complementation over the set s equals LCs over a subset of it."""
    s = VertexMultiset.from_set(2, s_mask)
    if not is_r_incident(g, s):
        raise ValidationError("set is not 2-incident")
    h = apply_rlc(g, s, check=False)
    pos = {p: i for i, p in enumerate(combinations(range(g.n), 2))}
    target = 0
    for u, v in combinations(range(g.n), 2):
        if g.has_edge(u, v) != h.has_edge(u, v):
            target |= 1 << pos[(u, v)]
    span = F2Span()
    for w in bits(s_mask):
        vec = 0
        for a, b in combinations(sorted(bits(g.rows[w])), 2):
            vec |= 1 << pos[(a, b)]
        span.add(vec)
    return target in span
