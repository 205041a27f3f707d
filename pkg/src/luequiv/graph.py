"""Labelled simple graphs, vertex multisets and generalised local complementation.

Vertex sets are plain Python ints used as bitmasks (bit ``v`` set means vertex
``v`` is a member). Graphs store one neighbourhood mask per vertex, so every
neighbourhood computation reduces to AND/XOR/popcount on ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional

from .errors import ValidationError

MAX_ORDER = 1024


def bits(mask: int) -> Iterator[int]:
    """Yield the members of a bitmask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_list(mask: int) -> list[int]:
    return list(bits(mask))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``rows[v]`` is the neighbourhood bitmask of ``v``. Instances are immutable;
    every operation returns a new graph.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("a graph needs at least one vertex")
        if self.n > MAX_ORDER:
            raise ValidationError(f"order {self.n} exceeds the supported maximum {MAX_ORDER}")
        if len(self.rows) != self.n:
            raise ValidationError("row count does not match vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise ValidationError(f"row {v} references a vertex >= n")
            if (row >> v) & 1:
                raise ValidationError(f"self-loop at vertex {v}")
            for u in bits(row):
                if not (self.rows[u] >> v) & 1:
                    raise ValidationError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge {u}-{v} outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def _trusted(cls, n: int, rows) -> "Graph":
        # skips the O(n^2) symmetry validation for rows produced internally
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "rows", tuple(rows))
        return g

    @property
    def vertices(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> int:
        return self.rows[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.rows[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def components(self) -> list[int]:
        """Connected components as bitmasks, ordered by their smallest vertex."""
        seen = 0
        comps = []
        for s in range(self.n):
            if (seen >> s) & 1:
                continue
            comp = frontier = 1 << s
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.rows[v]
                frontier = nxt & ~comp
                comp |= frontier
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def toggle(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        rows = list(self.rows)
        for u, v in pairs:
            rows[u] ^= 1 << v
            rows[v] ^= 1 << u
        return Graph._trusted(self.n, rows)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True, init=False)
class VertexMultiset:
    """Multiset of vertices with multiplicities reduced modulo ``2**level``."""

    level: int
    items: tuple[tuple[int, int], ...]

    def __init__(self, level: int, mult: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if level < 1:
            raise ValidationError("level must be >= 1")
        modulus = 1 << level
        pairs = mult.items() if isinstance(mult, Mapping) else mult
        acc: dict[int, int] = {}
        for v, m in pairs:
            if v < 0:
                raise ValidationError("negative vertex id")
            acc[v] = (acc.get(v, 0) + m) % modulus
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "items", tuple(sorted((v, m) for v, m in acc.items() if m)))

    @classmethod
    def from_set(cls, level: int, mask: int) -> "VertexMultiset":
        return cls(level, {v: 1 for v in bits(mask)})

    @property
    def modulus(self) -> int:
        return 1 << self.level

    @property
    def support(self) -> int:
        return mask_of(v for v, _ in self.items)

    def __getitem__(self, v: int) -> int:
        for u, m in self.items:
            if u == v:
                return m
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def dot(self, mask: int) -> int:
        """Total multiplicity of the members of ``mask``."""
        return sum(m for v, m in self.items if (mask >> v) & 1)

    def at_level(self, level: int) -> "VertexMultiset":
        return VertexMultiset(level, self.items)

    def __add__(self, other: "VertexMultiset") -> "VertexMultiset":
        return multiset_add(self, other)

    def __repr__(self) -> str:
        return f"VertexMultiset(level={self.level}, {dict(self.items)})"


# -- neighbourhood algebra ---------------------------------------------------


def odd_neighborhood(g: Graph, d: int) -> int:
    return reduce(int.__xor__, (g.rows[u] for u in bits(d)), 0)


def common_neighborhood(g: Graph, k: int) -> int:
    if not k:
        raise ValidationError("common neighbourhood of the empty set is not allowed")
    return reduce(int.__and__, (g.rows[u] for u in bits(k)))


def s_dot_lambda(g: Graph, s: VertexMultiset, k: int) -> int:
    return s.dot(common_neighborhood(g, k))


def strict_neighborhood(g: Graph, s: int) -> int:
    """Vertices outside ``s`` with at least one neighbour in ``s``."""
    return reduce(int.__or__, (g.rows[u] for u in bits(s)), 0) & ~s


def induced_subgraph(g: Graph, keep: int) -> tuple[Graph, list[int]]:
    """Subgraph induced on ``keep``, relabelled in increasing id order.

    Returns the graph and the list mapping new ids to old ids.
    """
    old = to_list(keep)
    index = {v: i for i, v in enumerate(old)}
    rows = [mask_of(index[u] for u in bits(g.rows[v] & keep)) for v in old]
    return Graph._trusted(len(old), rows), old


def twins(g: Graph) -> list[tuple[int, int]]:
    out = []
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if g.rows[u] == g.rows[v] and not g.has_edge(u, v):
                out.append((u, v))
    return out


# -- local complementation ---------------------------------------------------


def local_complement(g: Graph, v: int) -> Graph:
    nb = g.rows[v]
    rows = list(g.rows)
    for u in bits(nb):
        rows[u] ^= nb & ~(1 << u)
    return Graph._trusted(g.n, rows)


def pivot(g: Graph, u: int, v: int) -> Graph:
    """``g ⋆u ⋆v ⋆u``, defined on edges only."""
    if not g.has_edge(u, v):
        raise ValidationError(f"pivot needs an edge, {u} and {v} are not adjacent")
    return local_complement(local_complement(local_complement(g, u), v), u)


def is_independent(g: Graph, s: VertexMultiset | int) -> bool:
    supp = s.support if isinstance(s, VertexMultiset) else s
    return all(not (g.rows[u] & supp) for u in bits(supp))


def incidence_violation(g: Graph, s: VertexMultiset) -> Optional[tuple[int, ...]]:
    """First set K breaking r-incidence of ``s``, or None if ``s`` is r-incident.

    K ranges over subsets of the complement of the support with 2 <= |K| <= r+1;
    a K whose common neighbourhood misses the support contributes zero and is
    pruned together with all its supersets.
    """
    r = s.level
    if r == 1:
        return None
    supp = s.support
    outside = [v for v in range(g.n) if not (supp >> v) & 1 and g.rows[v] & supp]
    weights = dict(s.items)

    def dot(lam: int) -> int:
        return sum(weights[u] for u in bits(lam & supp))

    stack = [(0, (), -1)]  # (start index, K, common neighbourhood mask)
    while stack:
        start, K, lam = stack.pop()
        size = len(K)
        if size >= 2:
            k = size - 2
            modulus = 1 << (r - k - (1 if k == 0 else 0))
            if dot(lam) % modulus:
                return K
        if size == r + 1:
            continue
        for i in range(len(outside) - 1, start - 1, -1):
            v = outside[i]
            nl = lam & g.rows[v]
            if nl & supp:
                stack.append((i + 1, K + (v,), nl))
    return None


def is_r_incident(g: Graph, s: VertexMultiset) -> bool:
    return incidence_violation(g, s) is None


def rlc_toggles(g: Graph, s: VertexMultiset) -> list[tuple[int, int]]:
    """Pairs ``u < v`` whose adjacency an r-local complementation over ``s`` flips."""
    modulus = s.modulus
    half = modulus >> 1
    counts: dict[tuple[int, int], int] = {}
    for w, m in s.items:
        nb = to_list(g.rows[w])
        for u, v in combinations(nb, 2):
            counts[(u, v)] = counts.get((u, v), 0) + m
    return sorted(p for p, c in counts.items() if c % modulus == half)


def apply_rlc(g: Graph, s: VertexMultiset, check: bool = True, z_set: Optional[int] = None) -> Graph:
    """Generalised local complementation ``g ⋆^r s``.

    With ``check`` the independence and r-incidence preconditions are validated;
    the unchecked path is for inner loops that established validity already.
    ``z_set``, when given, asserts that only pairs inside it get toggled.
    """
    if any(v >= g.n for v, _ in s.items):
        raise ValidationError("multiset references a vertex outside the graph")
    supp = s.support
    if check:
        for u in bits(supp):
            if g.rows[u] & supp:
                v = (g.rows[u] & supp).bit_length() - 1
                raise ValidationError(f"multiset is not independent: edge {u}-{v} inside the support")
        bad = incidence_violation(g, s)
        if bad is not None:
            raise ValidationError(f"multiset is not {s.level}-incident: K={list(bad)}")
    pairs = rlc_toggles(g, s)
    for u, v in pairs:
        assert not ((supp >> u) & 1 or (supp >> v) & 1), "toggled an edge at the support"
        if z_set is not None:
            assert (z_set >> u) & 1 and (z_set >> v) & 1, f"toggled {u}-{v} outside the Z set"
    return g.toggle(pairs)


# -- multiset algebra --------------------------------------------------------


def multiset_add(s1: VertexMultiset, s2: VertexMultiset) -> VertexMultiset:
    if s1.level != s2.level:
        raise ValidationError(f"level mismatch: {s1.level} vs {s2.level}")
    return VertexMultiset(s1.level, list(s1.items) + list(s2.items))


def decompose_2lc(g: Graph, s: VertexMultiset) -> tuple[int, int]:
    """Split a 2-local complementation into one over a set and a 1-LC over a set.

    Returns ``(s2, s1)`` with ``g ⋆² s == (g ⋆² s2) ⋆¹ s1``: ``s1`` holds the
    vertices of multiplicity 2 or 3, ``s2`` the support of ``s + s1 + s1``.
    """
    if s.level != 2:
        raise ValidationError("decompose_2lc expects a level-2 multiset")
    if not is_independent(g, s) or not is_r_incident(g, s):
        raise ValidationError("multiset is not a valid 2-local complementation")
    s1 = mask_of(v for v, m in s.items if m in (2, 3))
    s2 = mask_of(v for v, m in s.items if m % 2 == 1)
    return s2, s1


def neighbourhood_classes(g: Graph, s: VertexMultiset) -> dict[int, list[int]]:
    """Group support vertices by neighbourhood; keys are neighbourhood masks."""
    classes: dict[int, list[int]] = {}
    for v, _ in s.items:
        classes.setdefault(g.rows[v], []).append(v)
    return classes


def is_genuine(g: Graph, s: VertexMultiset) -> bool:
    if not is_independent(g, s) or not is_r_incident(g, s):
        raise ValidationError("genuineness is defined for r-incident independent multisets")
    return _genuine_unchecked(g, s)


def _genuine_unchecked(g: Graph, s: VertexMultiset) -> bool:
    for nb, members in neighbourhood_classes(g, s).items():
        if nb.bit_count() > 1 and sum(s[v] for v in members) % 2:
            return True
    return False


def reduce_nongenuine(g: Graph, s: VertexMultiset) -> VertexMultiset:
    """Level ``r-1`` multiset with the same action as a non-genuine ``s``.

    Each neighbourhood class is concentrated on its smallest vertex, vertices of
    degree at most one are dropped (they never contribute), and the resulting
    even multiplicities are halved.
    """
    if s.level < 2:
        raise ValidationError("cannot lower the level below 1")
    if not is_independent(g, s) or not is_r_incident(g, s):
        raise ValidationError("multiset is not a valid r-local complementation")
    half: dict[int, int] = {}
    for nb, members in neighbourhood_classes(g, s).items():
        if nb.bit_count() <= 1:
            continue
        total = sum(s[v] for v in members)
        if total % 2:
            raise ValidationError("multiset is genuine")
        half[min(members)] = total // 2
    return VertexMultiset(s.level - 1, half)


def reduce_level(g: Graph, s: VertexMultiset) -> Optional[VertexMultiset]:
    """Try to express ``g ⋆^r s`` as a single ``(r-1)``-local complementation.

    Handles the two situations where a reduction is always possible: ``s`` not
    genuine, or at most ``r + 2`` vertices outside the support. In the latter
    case one unit is removed from a representative of every neighbourhood
    class (with at least two neighbours), which yields a non-genuine multiset
    with the same action. Returns None when neither situation applies.
    """
    if not _genuine_unchecked(g, s):
        return reduce_nongenuine(g, s)
    supp = s.support
    outside = g.vertices & ~supp
    if outside.bit_count() > s.level + 2:
        return None
    classes = neighbourhood_classes(g, s)
    lowered = dict(s.items)
    for nb, members in classes.items():
        if nb.bit_count() > 1:
            lowered[min(members)] -= 1
    # every K with |K| > 1 must be a class when the outside is this small
    for size in range(2, outside.bit_count() + 1):
        for K in combinations(to_list(outside), size):
            if mask_of(K) not in classes:
                raise AssertionError("missing neighbourhood class in a small-complement genuine multiset")
    return reduce_nongenuine(g, VertexMultiset(s.level, lowered))


# -- graph6 ------------------------------------------------------------------


def to_graph6(g: Graph, header: bool = False) -> str:
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63]
    else:
        raise ValidationError("graph6 writer supports at most 258047 vertices")
    acc = nbits = 0
    for j in range(1, n):
        row = g.rows[j]
        for i in range(j):
            acc = (acc << 1) | ((row >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    text = bytes(out).decode("ascii")
    return (">>graph6<<" + text) if header else text


def from_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii")
    if not data or any(c < 63 or c > 126 for c in data):
        raise ValidationError(f"not a graph6 string: {text!r}")
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) > 1 and data[1] != 126:
        if len(data) < 4:
            raise ValidationError("truncated graph6 header")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        pos = 4
    else:
        raise ValidationError("graph6 with more than 258047 vertices is not supported")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ValidationError(f"graph6 body has {len(body)} bytes, expected {need}")
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))
