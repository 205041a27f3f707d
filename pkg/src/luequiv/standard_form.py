"""Bring two graphs into standard form with respect to one shared MLS cover."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .graph import Graph, bits, local_complement, pivot, to_list
from .localsets import (
    BOT,
    X,
    Y,
    Z,
    MlsCover,
    dimension_of,
    is_cover_of,
    is_local_set,
    is_minimal_local_set,
    mls_cover,
    generators_of,
    local_sets_within,
    vertex_types,
)
from .witness import LC, Pivot


@dataclass
class NotEquivalent:
    stage: str
    reason: str


@dataclass
class StandardFormResult:
    g1: Graph
    g2: Graph
    cover: MlsCover
    types: list[str]
    w1: list = field(default_factory=list)
    w2: list = field(default_factory=list)
    added: list[int] = field(default_factory=list)  # sets added at the shrinking step
    measure: list[tuple[int, int]] = field(default_factory=list)  # (before, after) for the first four steps

    def mask(self, kind: str) -> int:
        m = 0
        for v, t in enumerate(self.types):
            if t == kind:
                m |= 1 << v
        return m

    @property
    def vx(self) -> int:
        return self.mask(X)

    @property
    def vz(self) -> int:
        return self.mask(Z)

    @property
    def vbot(self) -> int:
        return self.mask(BOT)


def _closed(g: Graph, u: int) -> int:
    return g.rows[u] | (1 << u)


def _first_edge(g: Graph, types: list[str], pred) -> Optional[tuple[int, int]]:
    for u, v in g.edges():
        if pred(types[u], types[v]):
            return u, v
    return None


def _dimension_one_star(g: Graph, u: int) -> bool:
    L = _closed(g, u)
    return is_minimal_local_set(g, L) and len(generators_of(g, L)) == 1


def _least_mls_inside(g: Graph, L: int) -> int:
    found = local_sets_within(g, L)
    minimal = [s for s in found if not any(t != s and t & s == t for t in found)]
    return min(minimal, key=to_list)


def _measure(types_pair) -> int:
    return sum(2 * t.count(Y) + t.count(X) for t in types_pair)


def standardize_pair(g1: Graph, g2: Graph, cover: Optional[MlsCover] = None) -> Union[StandardFormResult, NotEquivalent]:
    """Local complementations putting both graphs in standard form, or a rejection."""
    if g1.n != g2.n:
        return NotEquivalent("order", "graphs differ in order")
    cover = mls_cover(g1) if cover is None else cover.copy()
    if not is_cover_of(g2, cover):
        return NotEquivalent("cover", "MLS cover of the first graph is not an MLS cover of the second")
    gs = [g1, g2]
    ws: list[list] = [[], []]
    added = []
    measure = []

    def lc(i: int, v: int):
        gs[i] = local_complement(gs[i], v)
        ws[i].append(LC(v))

    def piv(i: int, u: int, v: int):
        gs[i] = pivot(gs[i], u, v)
        ws[i].append(Pivot(u, v))

    pending = None
    while True:
        types = [vertex_types(g, cover) for g in gs]
        m = _measure(types)
        if pending is not None:
            measure.append((pending, m))
            pending = None
        acted = False
        # XX edges, then XY edges, then Y vertices, then X-bottom edges
        for i in (0, 1):
            e = _first_edge(gs[i], types[i], lambda a, b: a == X and b == X)
            if e:
                piv(i, *e)
                acted = True
                break
        if acted:
            pending = m
            continue
        for i in (0, 1):
            e = _first_edge(gs[i], types[i], lambda a, b: {a, b} == {X, Y})
            if e:
                u, v = e
                lc(i, u if types[i][u] == X else v)
                acted = True
                break
        if acted:
            pending = m
            continue
        for i in (0, 1):
            if Y in types[i]:
                lc(i, types[i].index(Y))
                acted = True
                break
        if acted:
            pending = m
            continue
        for i in (0, 1):
            e = _first_edge(gs[i], types[i], lambda a, b: {a, b} == {X, BOT})
            if e:
                piv(i, *e)
                acted = True
                break
        if acted:
            pending = m
            continue
        # XZ edges whose Z end precedes the X end
        for i in (0, 1):
            for u, v in gs[i].edges():
                if types[i][v] == X and types[i][u] == Z:
                    piv(i, u, v)
                    acted = True
                    break
            if acted:
                break
        if acted:
            continue
        # closed X-neighbourhoods that are not dimension-1 minimal local sets
        for i in (0, 1):
            for u in range(g1.n):
                if types[i][u] == X and not _dimension_one_star(gs[i], u):
                    M = _least_mls_inside(gs[i], _closed(gs[i], u))
                    other = gs[1 - i]
                    if not (is_local_set(other, M) and is_minimal_local_set(other, M)):
                        return NotEquivalent("shrink", f"set {to_list(M)} is not a minimal local set of both graphs")
                    if dimension_of(gs[i], M) != dimension_of(other, M):
                        return NotEquivalent("shrink", f"set {to_list(M)} has different dimensions")
                    cover.add(gs[0], M)
                    added.append(M)
                    acted = True
                    break
            if acted:
                break
        if acted:
            continue
        break

    # types never change when closed X-neighbourhoods join the cover, so the
    # same-types check can run first; it also guarantees both graphs add the same sets
    result = StandardFormResult(gs[0], gs[1], cover, types[0], ws[0], ws[1], added, measure)
    if not check_same_types_and_x_neighbourhoods(result, types[1]):
        return NotEquivalent("types", "types or X-neighbourhoods differ after standardisation")
    for u in range(g1.n):
        if types[0][u] == X:
            cover.add(gs[0], _closed(gs[0], u))
    for i in (0, 1):
        assert vertex_types(gs[i], cover) == types[i], "adding closed X-neighbourhoods changed a type"
        assert_standard_form(gs[i], cover, types[i])
    return result


def assert_standard_form(g: Graph, cover: MlsCover, types: list[str]) -> None:
    assert Y not in types, "type-Y vertex left"
    masks = set(cover.masks)
    for u in range(g.n):
        if types[u] != X:
            continue
        for v in bits(g.rows[u]):
            assert types[v] == Z and u < v, f"X vertex {u} has a bad neighbour {v}"
        assert _closed(g, u) in masks, f"closed neighbourhood of X vertex {u} missing from the cover"


def check_same_types_and_x_neighbourhoods(result: StandardFormResult, types2: Optional[list[str]] = None) -> bool:
    types2 = vertex_types(result.g2, result.cover) if types2 is None else types2
    if result.types != types2:
        return False
    return all(result.g1.rows[u] == result.g2.rows[u] for u in range(result.g1.n) if result.types[u] == X)
