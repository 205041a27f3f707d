"""Brute-force orbits under local complementation and r-local complementation.

Graphs are labelled, so a graph is its own canonical digest. Everything here is
exponential and guarded by an order cap and a node budget.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Optional

from .errors import ResourceLimitError
from .graph import Graph, VertexMultiset, apply_rlc, bits, is_r_incident, local_complement
from .witness import LC, RLC

LC_ORDER_CAP = 12
LCR_ORDER_CAP = 10
NODE_BUDGET = 500_000


@dataclass
class OrbitIndex:
    root: Graph
    parent: dict = field(default_factory=dict)  # graph -> (previous graph, op) or None

    def __contains__(self, g: Graph) -> bool:
        return g in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    def members(self) -> list[Graph]:
        return list(self.parent)

    def path_to(self, g: Graph) -> list:
        """Operations turning the root into ``g``."""
        if g not in self.parent:
            raise KeyError("graph not in orbit")
        ops = []
        while self.parent[g] is not None:
            prev, op = self.parent[g]
            ops.append(op)
            g = prev
        return ops[::-1]


def _bfs(g: Graph, moves, budget: int, target: Optional[Graph] = None) -> OrbitIndex:
    index = OrbitIndex(g, {g: None})
    queue = deque([g])
    while queue:
        h = queue.popleft()
        if target is not None and h == target:
            break
        for op, nxt in moves(h):
            if nxt not in index.parent:
                index.parent[nxt] = (h, op)
                if len(index.parent) > budget:
                    raise ResourceLimitError(f"orbit exceeds the node budget {budget}")
                queue.append(nxt)
    return index


def lc_orbit(
    g: Graph,
    allowed: Optional[int] = None,
    cap: int = LC_ORDER_CAP,
    budget: int = NODE_BUDGET,
    target: Optional[Graph] = None,
) -> OrbitIndex:
    """Closure of g under local complementation on vertices of ``allowed``."""
    if g.n > cap:
        raise ResourceLimitError(f"orbit search limited to order {cap}")
    allowed = g.vertices if allowed is None else allowed

    def moves(h: Graph):
        for v in bits(allowed):
            yield LC(v), local_complement(h, v)

    return _bfs(g, moves, budget, target)


def lc_path(g1: Graph, g2: Graph, allowed: Optional[int] = None, cap: int = LC_ORDER_CAP) -> Optional[list]:
    if g1.n != g2.n:
        return None
    index = lc_orbit(g1, allowed, cap=cap, target=g2)
    return index.path_to(g2) if g2 in index else None


def independent_sets(g: Graph, min_size: int = 1) -> Iterator[int]:
    """All independent vertex sets (bitmasks) of size >= min_size, by DFS."""

    def rec(start: int, chosen: int, forbidden: int, size: int):
        if size >= min_size:
            yield chosen
        for v in range(start, g.n):
            if not (forbidden >> v) & 1:
                yield from rec(v + 1, chosen | (1 << v), forbidden | g.rows[v], size + 1)

    yield from rec(0, 0, 0, 0)


def _set_is_incident(g: Graph, supp: int, r: int) -> bool:
    """r-incidence of a plain set, using one AND and popcount per K."""
    outer = [g.rows[v] & supp for v in range(g.n) if not (supp >> v) & 1]
    outer = [m for m in outer if m]
    for k in range(r):
        mod = (1 << (r - k - (1 if k == 0 else 0))) - 1
        for K in combinations(outer, k + 2):
            lam = supp
            for m in K:
                lam &= m
            if lam.bit_count() & mod:
                return False
    return True


def incident_multisets(g: Graph, r: int, sets_only: bool = True, max_support: Optional[int] = None) -> Iterator[VertexMultiset]:
    """Every r-incident independent multiset (or set) with nonempty support."""
    for supp in independent_sets(g, 1):
        verts = list(bits(supp))
        if max_support is not None and len(verts) > max_support:
            continue
        if sets_only:
            if _set_is_incident(g, supp, r):
                yield VertexMultiset.from_set(r, supp)
            continue
        for ms in product(range(1, 1 << r), repeat=len(verts)):
            s = VertexMultiset(r, dict(zip(verts, ms)))
            if is_r_incident(g, s):
                yield s


def lcr_orbit_small(
    g: Graph,
    r: int,
    sets_only: bool = True,
    max_support: Optional[int] = None,
    cap: int = LCR_ORDER_CAP,
    budget: int = NODE_BUDGET,
    target: Optional[Graph] = None,
) -> OrbitIndex:
    """Closure under local complementation and level-r moves.

    For r = 2 the default move set is 2-local complementation over 2-incident
    independent sets; ``sets_only=False`` admits every residue pattern on the
    support instead.
    """
    if r == 1:
        return lc_orbit(g, cap=cap, budget=budget, target=target)
    if g.n > cap:
        raise ResourceLimitError(f"level-{r} orbit search limited to order {cap}")

    def moves(h: Graph):
        for v in range(h.n):
            yield LC(v), local_complement(h, v)
        for s in incident_multisets(h, r, sets_only, max_support):
            nxt = apply_rlc(h, s, check=False)
            if nxt != h:
                yield RLC(s), nxt

    return _bfs(g, moves, budget, target)
