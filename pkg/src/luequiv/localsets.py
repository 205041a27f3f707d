"""Local sets, minimal local sets, MLS covers and vertex types.

A local set is ``L = D | Odd(D)`` for some nonempty generator ``D``. Every
generator of a set inside ``L`` lies in the F2 space
``K_L = {D subset of L : Odd(D) subset of L}``, so questions about ``L`` reduce
to enumerating that (usually tiny) space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .errors import ResourceLimitError, ValidationError
from .graph import Graph, bits, mask_of, odd_neighborhood, to_list
from .linalg import f2_kernel

KERNEL_CAP = 16
CAP_D = 6

X, Y, Z, BOT = "X", "Y", "Z", "⊥"


@lru_cache(maxsize=65536)
def _closed_space(g: Graph, L: int) -> tuple[int, ...]:
    """Basis (as vertex masks) of {D subset of L : Odd(D) subset of L}."""
    inside = to_list(L)
    pos = {v: i for i, v in enumerate(inside)}
    rows = []
    for w in bits(g.vertices & ~L):
        nb = g.rows[w] & L
        if nb:
            rows.append(sum(1 << pos[v] for v in bits(nb)))
    basis = []
    for x in f2_kernel(rows, len(inside)):
        basis.append(mask_of(inside[i] for i in bits(x)))
    return tuple(basis)


def _span_with_odd(g: Graph, basis, cap: int) -> Iterator[tuple[int, int]]:
    """Yield ``(D, Odd(D))`` for every nonzero D in the span (Gray-code order)."""
    k = len(basis)
    if k > cap:
        raise ResourceLimitError(f"local-set space of dimension {k} exceeds the cap {cap}")
    odds = [odd_neighborhood(g, b) for b in basis]
    d = o = 0
    for i in range(1, 1 << k):
        j = (i & -i).bit_length() - 1
        d ^= basis[j]
        o ^= odds[j]
        yield d, o


def generators_of(g: Graph, L: int, cap: int = KERNEL_CAP) -> list[int]:
    """All D with ``D | Odd(D) == L``, sorted; empty when L is not a local set."""
    if not L or L & ~g.vertices:
        return []
    return sorted(d for d, o in _span_with_odd(g, _closed_space(g, L), cap) if d | o == L)


def is_local_set(g: Graph, L: int) -> bool:
    return bool(generators_of(g, L))


def is_minimal_local_set(g: Graph, L: int, cap: int = KERNEL_CAP) -> bool:
    """True iff L is a local set containing no strictly smaller local set."""
    if not L:
        return False
    return all(d | o == L for d, o in _span_with_odd(g, _closed_space(g, L), cap))


def local_sets_within(g: Graph, L: int, cap: int = KERNEL_CAP) -> set[int]:
    return {d | o for d, o in _span_with_odd(g, _closed_space(g, L), cap)}


def minimal_local_sets_within(g: Graph, L: int, cap: int = KERNEL_CAP) -> list[int]:
    """Inclusion-minimal local sets contained in L, sorted by (size, vertex list)."""
    found = local_sets_within(g, L, cap)
    minimal = [s for s in found if not any(t != s and t & s == t for t in found)]
    return sorted(minimal, key=set_key)


def set_key(mask: int) -> tuple[int, list[int]]:
    return (mask.bit_count(), to_list(mask))


def dimension_of(g: Graph, L: int, cap: int = KERNEL_CAP) -> int:
    """Dimension of a minimal local set: log2(#generators + 1).

    The generators of a minimal local set are exactly the nonzero elements of
    an F2 space, so their count is ``2^d - 1``.
    """
    count = len(generators_of(g, L, cap))
    d = (count + 1).bit_length() - 1
    if count == 0 or (count + 1) != 1 << d:
        raise ValidationError(f"generator count {count} does not come from a minimal local set")
    return d


@dataclass(frozen=True)
class LocalSetRecord:
    L: int
    generators: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return (len(self.generators) + 1).bit_length() - 1

    @classmethod
    def of(cls, g: Graph, L: int) -> "LocalSetRecord":
        return cls(L, tuple(generators_of(g, L)))

    def to_json(self) -> dict:
        return {"set": to_list(self.L), "generators": [to_list(d) for d in self.generators], "dimension": self.dimension}


@dataclass
class MlsCover:
    n: int
    sets: list[LocalSetRecord] = field(default_factory=list)

    @property
    def masks(self) -> list[int]:
        return [rec.L for rec in self.sets]

    @property
    def covered(self) -> int:
        u = 0
        for rec in self.sets:
            u |= rec.L
        return u

    def add(self, g: Graph, L: int) -> None:
        if L not in self.masks:
            self.sets.append(LocalSetRecord.of(g, L))

    def copy(self) -> "MlsCover":
        return MlsCover(self.n, list(self.sets))

    def to_json(self) -> dict:
        return {"n": self.n, "sets": [rec.to_json() for rec in self.sets]}


def _find_mls_containing(g: Graph, v: int, cap_d: int, cap: int) -> int:
    seen: set[int] = set()
    for k in range(1, cap_d + 1):
        best = None
        for D in combinations(range(g.n), k):
            dm = mask_of(D)
            L = dm | odd_neighborhood(g, dm)
            if not (L >> v) & 1 or L in seen:
                continue
            seen.add(L)
            for M in minimal_local_sets_within(g, L, cap):
                if (M >> v) & 1:
                    if best is None or set_key(M) < set_key(best):
                        best = M
                    break
        if best is not None:
            return best
    raise ResourceLimitError(f"no minimal local set through vertex {v} found with generators of size <= {cap_d}")


def mls_cover(g: Graph, cap_d: int = CAP_D, cap: int = KERNEL_CAP) -> MlsCover:
    """Deterministic cover of V by minimal local sets.

    Repeatedly takes the lowest uncovered vertex and adds the smallest
    (by size, then vertex list) minimal local set through it, searching the
    local sets generated by D of increasing size in lexicographic order.
    """
    cover = MlsCover(g.n)
    while cover.covered != g.vertices:
        rest = g.vertices & ~cover.covered
        v = (rest & -rest).bit_length() - 1
        cover.add(g, _find_mls_containing(g, v, cap_d, cap))
    return cover


def vertex_types(g: Graph, cover: MlsCover) -> list[str]:
    """Type of each vertex with respect to the cover, generators taken in g."""
    seen = [set() for _ in range(g.n)]
    for L in cover.masks:
        for d in generators_of(g, L):
            o = odd_neighborhood(g, d)
            for u in bits(L):
                seen[u].add(((d >> u) & 1, (o >> u) & 1))
    types = []
    for u in range(g.n):
        s = seen[u]
        if not s:
            raise ValidationError(f"vertex {u} is not covered")
        if len(s) > 1:
            types.append(BOT)
        else:
            types.append({(1, 0): X, (1, 1): Y, (0, 1): Z}[s.pop()])
    return types


def is_cover_of(g: Graph, cover: MlsCover) -> bool:
    if cover.n != g.n or cover.covered != g.vertices:
        return False
    return all(is_local_set(g, L) and is_minimal_local_set(g, L) for L in cover.masks)


def mls_dimension_equal(g1: Graph, g2: Graph, L: int) -> bool:
    return dimension_of(g1, L) == dimension_of(g2, L)


def all_local_sets(g: Graph) -> set[int]:
    """Every local set, by running through all nonempty D (exponential)."""
    if g.n > 20:
        raise ResourceLimitError("exhaustive local-set enumeration is limited to 20 vertices")
    return {d | o for d, o in _span_with_odd(g, tuple(1 << v for v in range(g.n)), g.n)}
