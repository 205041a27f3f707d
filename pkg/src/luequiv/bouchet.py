"""LC-equivalence through Bouchet's linear conditions, with extra linear constraints.

A quad ``(A, B, C, D)`` of vertex subsets is packed into one 4n-bit int: bit
``v`` is ``a_v``, bit ``n+v`` is ``b_v``, bit ``2n+v`` is ``c_v`` and bit
``3n+v`` is ``d_v``. Condition (i) is linear in these bits, condition (ii)
``(A & D) ^ (B & C) == V`` is not.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .errors import ClassAlphaUnresolved, ValidationError
from .graph import Graph, bits, local_complement, pivot
from .linalg import F2Span, f2_kernel, f2_solve_affine
from .witness import LC, Pivot, Witness

CASES = {
    # (a, b, c, d) -> case number
    (1, 0, 0, 1): 1,
    (1, 1, 0, 1): 2,
    (1, 0, 1, 1): 3,
    (0, 1, 1, 0): 4,
    (1, 1, 1, 0): 5,
    (0, 1, 1, 1): 6,
}
LABELS = {1: "I", 2: "X(π/2)", 3: "Z(π/2)", 4: "H", 5: "X(π/2)H", 6: "Z(π/2)H"}

EXHAUSTIVE_DIM = 16
FALLBACK_ORDER = 12


@dataclass(frozen=True)
class Quad:
    n: int
    A: int
    B: int
    C: int
    D: int

    @classmethod
    def from_vector(cls, n: int, x: int) -> "Quad":
        full = (1 << n) - 1
        return cls(n, x & full, (x >> n) & full, (x >> 2 * n) & full, (x >> 3 * n) & full)

    @classmethod
    def identity(cls, n: int) -> "Quad":
        full = (1 << n) - 1
        return cls(n, full, 0, 0, full)

    def vector(self) -> int:
        n = self.n
        return self.A | (self.B << n) | (self.C << 2 * n) | (self.D << 3 * n)

    def case(self, v: int) -> int:
        key = ((self.A >> v) & 1, (self.B >> v) & 1, (self.C >> v) & 1, (self.D >> v) & 1)
        return CASES.get(key, 0)


def var_index(n: int, name: str, v: int) -> int:
    return "abcd".index(name) * n + v


@dataclass
class ConstraintSet:
    """Linear equations over the 4n quad variables: ``rows[i] . x == rhs[i]``."""

    n: int
    rows: list[int] = field(default_factory=list)
    rhs: list[int] = field(default_factory=list)

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise ValidationError("constraint rows and right-hand sides differ in length")

    def add(self, terms, rhs: int = 0) -> None:
        """Add ``sum(terms) == rhs`` where terms are ``(name, vertex)`` pairs."""
        row = 0
        for name, v in terms:
            if not 0 <= v < self.n:
                raise ValidationError(f"constraint refers to vertex {v} outside 0..{self.n - 1}")
            row ^= 1 << var_index(self.n, name, v)
        self.rows.append(row)
        self.rhs.append(rhs & 1)

    def __len__(self) -> int:
        return len(self.rows)

    def satisfied_by(self, x: int) -> bool:
        return all((row & x).bit_count() % 2 == b for row, b in zip(self.rows, self.rhs))

    @classmethod
    def from_json(cls, n: int, obj) -> "ConstraintSet":
        """Parse ``[{"coeffs": ["a_0", "b_3"] | {"a_0": 1}, "rhs": 0}, ...]``."""
        cs = cls(n)
        if not isinstance(obj, list):
            raise ValidationError("constraint document must be a list")
        for item in obj:
            try:
                coeffs = item["coeffs"]
                if isinstance(coeffs, dict):
                    names = [k for k, c in coeffs.items() if int(c) % 2]
                else:
                    names = list(coeffs)
                terms = []
                for name in names:
                    m = re.fullmatch(r"([abcd])_(\d+)", name.strip())
                    if not m:
                        raise ValidationError(f"bad variable name {name!r}")
                    terms.append((m.group(1), int(m.group(2))))
                cs.add(terms, int(item.get("rhs", 0)))
            except (KeyError, TypeError, AttributeError) as exc:
                raise ValidationError(f"malformed constraint {item!r}") from exc
        return cs

    @classmethod
    def load(cls, n: int, path: str) -> "ConstraintSet":
        with open(path) as fh:
            return cls.from_json(n, json.load(fh))


# -- the linear system ---------------------------------------------------------------


def build_system_i(g1: Graph, g2: Graph) -> tuple[list[int], list[int]]:
    """Rows of condition (i), one per ordered pair (u, v), all with rhs 0."""
    if g1.n != g2.n:
        raise ValidationError("graphs differ in order")
    n = g1.n
    rows = []
    for u in range(n):
        for v in range(n):
            row = (g1.rows[u] & g2.rows[v]) << n
            if (g1.rows[u] >> v) & 1:
                row |= 1 << v
            if (g2.rows[v] >> u) & 1:
                row |= 1 << (3 * n + u)
            if u == v:
                row |= 1 << (2 * n + u)
            rows.append(row)
    return rows, [0] * len(rows)


def condition_i_holds(g1: Graph, g2: Graph, q: Quad) -> bool:
    """Direct per-pair cardinality evaluation of condition (i)."""
    for u in range(g1.n):
        for v in range(g1.n):
            total = (q.B & g1.rows[u] & g2.rows[v]).bit_count()
            total += (q.A >> v) & (g1.rows[u] >> v) & 1
            total += (q.D >> u) & (g2.rows[v] >> u) & 1
            total += (q.C >> u) & 1 if u == v else 0
            if total % 2:
                return False
    return True


def check_ii(q: Quad) -> bool:
    return ((q.A & q.D) ^ (q.B & q.C)) == (1 << q.n) - 1


def _ii_vec(n: int, x: int) -> bool:
    full = (1 << n) - 1
    a, b, c, d = x & full, (x >> n) & full, (x >> 2 * n) & full, (x >> 3 * n) & full
    return ((a & d) ^ (b & c)) == full


def is_valid_quad(g1: Graph, g2: Graph, q: Quad) -> bool:
    return check_ii(q) and condition_i_holds(g1, g2, q)


# -- class alpha -------------------------------------------------------------------


def _cycle_basis(g: Graph) -> list[list[tuple[int, int]]]:
    """Fundamental cycles of a BFS spanning forest, as edge lists."""
    parent = {}
    depth = {}
    order = []
    for root in range(g.n):
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = [root]
        for v in queue:
            order.append(v)
            for w in bits(g.rows[v]):
                if w not in parent:
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    queue.append(w)
    tree = {(min(v, p), max(v, p)) for v, p in parent.items() if p is not None}
    cycles = []
    for u, v in g.edges():
        if (u, v) in tree:
            continue
        path = [(u, v)]
        x, y = u, v
        while x != y:
            if depth[x] >= depth[y]:
                px = parent[x]
                path.append((min(x, px), max(x, px)))
                x = px
            else:
                py = parent[y]
                path.append((min(y, py), max(y, py)))
                y = py
        cycles.append(path)
    return cycles


def is_class_alpha(g: Graph) -> bool:
    """All degrees odd, nonadjacent pairs share an even number of neighbours,
    and every cycle meets triangles (counted per edge) as often as its length mod 2."""
    if any(g.degree(v) % 2 == 0 for v in range(g.n)):
        return False
    for u, v in combinations(range(g.n), 2):
        if not g.has_edge(u, v) and (g.rows[u] & g.rows[v]).bit_count() % 2:
            return False
    tri = {(u, v): (g.rows[u] & g.rows[v]).bit_count() for u, v in g.edges()}
    for cyc in _cycle_basis(g):
        if sum(tri[e] for e in cyc) % 2 != len(cyc) % 2:
            return False
    return True


def _has_even_vertex(g: Graph, mask: int) -> bool:
    return any((g.rows[v] & mask).bit_count() % 2 == 0 for v in bits(mask))


# -- solving -------------------------------------------------------------------------


def _span_elements(p: int, basis: list[int]):
    x = p
    yield x
    for i in range(1, 1 << len(basis)):
        x ^= basis[(i & -i).bit_length() - 1]
        yield x


def _pair_candidates(p: int, basis: list[int]):
    """p, p+S_i, p+S_i+S_j with the basis sorted by weight, pairs in lex order."""
    ordered = sorted(basis, key=lambda s: (s.bit_count(), s))
    yield p
    for s in ordered:
        yield p ^ s
    for i, j in combinations(range(len(ordered)), 2):
        yield p ^ ordered[i] ^ ordered[j]


@dataclass
class SolveStats:
    route: str = ""
    dim: int = -1
    candidates: int = 0


def solve_constrained(
    g1: Graph,
    g2: Graph,
    extra: Optional[ConstraintSet] = None,
    fallback: bool = True,
    route: str = "auto",
    stats: Optional[SolveStats] = None,
) -> Optional[Quad]:
    """A quad satisfying (i), (ii) and ``extra``, or None when none exists.

    Connected inputs go through the basis/pair-sum search. Disconnected inputs
    (and ``route="components"``) are solved per component: each component's
    unconstrained solution set is computed exactly as a union of affine pieces
    and the pieces are combined under the constraints. Components whose degrees
    are all odd may violate the affine-structure guarantee; those are settled
    by exhaustive enumeration of the solution space when its dimension is at
    most 16, and otherwise raise ClassAlphaUnresolved (except for unconstrained
    inputs of order <= 12 when ``fallback`` is set, which go to orbit search).
    """
    if g1.n != g2.n:
        raise ValidationError("graphs differ in order")
    extra = extra if extra is not None else ConstraintSet(g1.n)
    if extra.n != g1.n:
        raise ValidationError("constraint set built for a different order")
    stats = stats if stats is not None else SolveStats()
    if route == "auto" and g1 == g2 and extra.satisfied_by(Quad.identity(g1.n).vector()):
        stats.route = "identity"
        return Quad.identity(g1.n)
    comps = g1.components()
    if sorted(comps) != sorted(g2.components()):
        stats.route = "components-differ"
        return None
    if route == "auto":
        route = "connected" if len(comps) == 1 else "components"
    if route == "connected":
        if len(comps) != 1:
            raise ValidationError("the pair-sum route needs connected graphs")
        x = _solve_connected(g1, g2, extra, fallback, stats)
    elif route == "components":
        x = _solve_components(g1, g2, comps, extra, fallback, stats)
    else:
        raise ValueError(f"unknown route {route!r}")
    if x is None:
        return None
    q = Quad.from_vector(g1.n, x)
    assert check_ii(q) and extra.satisfied_by(x), "solver returned an invalid quad"
    return q


def _solve_connected(g1: Graph, g2: Graph, extra: ConstraintSet, fallback: bool, stats: SolveStats) -> Optional[int]:
    n = g1.n
    rows, rhs = build_system_i(g1, g2)
    p, basis = f2_solve_affine(rows + extra.rows, rhs + extra.rhs, 4 * n)
    stats.dim = len(basis)
    if p is None:
        stats.route = "inconsistent"
        return None
    if len(basis) <= 4:
        stats.route = "enumerate"
        return _first_valid(n, _span_elements(p, basis), stats)
    full = g1.vertices
    if _has_even_vertex(g1, full) and _has_even_vertex(g2, full):
        stats.route = "pair-sum"
        return _first_valid(n, _pair_candidates(p, basis), stats)
    # all degrees odd in one of the graphs: the affine guarantee may fail
    if len(basis) <= EXHAUSTIVE_DIM:
        stats.route = "exhaustive"
        return _first_valid(n, _span_elements(p, basis), stats)
    if not len(extra):
        stats.route = "pair-sum"
        x = _first_valid(n, _pair_candidates(p, basis), stats)
        if x is not None:
            return x
        if fallback and n <= FALLBACK_ORDER:
            stats.route = "orbit-fallback"
            return _orbit_fallback(g1, g2)
    raise ClassAlphaUnresolved(f"all-odd-degree input with solution space of dimension {len(basis)}")


def _first_valid(n: int, candidates, stats: SolveStats) -> Optional[int]:
    for x in candidates:
        stats.candidates += 1
        if _ii_vec(n, x):
            return x
    return None


def _orbit_fallback(g1: Graph, g2: Graph) -> Optional[int]:
    from .oracle import lc_path

    path = lc_path(g1, g2)
    if path is None:
        return None
    return lc_sequence_to_quad(g1, path).vector()


# component route


def _component_vars(n: int, mask: int) -> int:
    return mask | (mask << n) | (mask << 2 * n) | (mask << 3 * n)


def _component_pieces(g1: Graph, g2: Graph, mask: int, stats: SolveStats) -> list[tuple[int, list[int]]]:
    """The unconstrained solutions restricted to one component, as affine pieces."""
    n = g1.n
    rows = []
    for u in bits(mask):
        for v in bits(mask):
            row = (g1.rows[u] & g2.rows[v]) << n
            if (g1.rows[u] >> v) & 1:
                row |= 1 << v
            if (g2.rows[v] >> u) & 1:
                row |= 1 << (3 * n + u)
            if u == v:
                row |= 1 << (2 * n + u)
            rows.append(row)
    # variables outside the component are pinned to zero so the kernel lives on it
    outside = ((1 << 4 * n) - 1) & ~_component_vars(n, mask)
    rows += [1 << i for i in bits(outside)]
    basis = f2_kernel(rows, 4 * n)
    stats.dim = max(stats.dim, len(basis))
    even = _has_even_vertex(g1, mask) and _has_even_vertex(g2, mask)
    if len(basis) > 4 and even:
        return _affine_solution_set(n, mask, basis)
    if len(basis) > EXHAUSTIVE_DIM:
        raise ClassAlphaUnresolved(f"all-odd-degree component with solution space of dimension {len(basis)}")
    points = [x for x in _span_elements(0, basis) if _ii_vec_on(n, x, mask)]
    return affine_pieces(points)


def _ii_vec_on(n: int, x: int, mask: int) -> bool:
    full = (1 << n) - 1
    a, b, c, d = x & full, (x >> n) & full, (x >> 2 * n) & full, (x >> 3 * n) & full
    return ((a & d) ^ (b & c)) & mask == mask


def _affine_solution_set(n: int, mask: int, basis: list[int]) -> list[tuple[int, list[int]]]:
    """Solutions of (ii) inside span(basis), known to form one affine space.

    Finds a point ``a``, then classifies basis vectors by whether adding them
    (or pairwise differences) stays inside the solution set.
    """
    ok = lambda x: _ii_vec_on(n, x, mask)  # noqa: E731
    a = next((x for x in _pair_candidates(0, basis) if ok(x)), None)
    if a is None:
        return []
    lin = []
    e1 = e2 = None
    for s in basis:
        if ok(a ^ s):
            lin.append(s)
        elif e1 is None:
            e1 = s
        elif ok(a ^ s ^ e1):
            lin.append(s ^ e1)
        elif e2 is None:
            e2 = s
        elif ok(a ^ s ^ e2):
            lin.append(s ^ e2)
        else:
            lin.append(s ^ e1 ^ e2)
    assert all(ok(a ^ v) for v in lin), "solution set is not affine"
    return [(a, lin)]


def affine_pieces(points: list[int]) -> list[tuple[int, list[int]]]:
    """Split a point set into affine subspaces (recursive coordinate splitting)."""
    if not points:
        return []
    p0 = points[0]
    span = F2Span(p0 ^ q for q in points)
    if len(points) == 1 << span.dim:
        return [(p0, span.basis())]
    diff = 0
    for q in points:
        diff |= p0 ^ q
    bit = diff & -diff
    zero = [q for q in points if not q & bit]
    one = [q for q in points if q & bit]
    return affine_pieces(zero) + affine_pieces(one)


def _annihilator_rows(n: int, region: int, point: int, basis: list[int]) -> tuple[list[int], list[int]]:
    """Equations over the ``region`` coordinates cutting out point + span(basis)."""
    coords = list(bits(region))
    pos = {c: i for i, c in enumerate(coords)}
    local = [sum(1 << pos[c] for c in bits(b)) for b in basis]
    rows, rhs = [], []
    for f in f2_kernel(local, len(coords)):
        row = 0
        for i in bits(f):
            row |= 1 << coords[i]
        rows.append(row)
        rhs.append((row & point).bit_count() % 2)
    return rows, rhs


def _solve_components(g1, g2, comps, extra: ConstraintSet, fallback: bool, stats: SolveStats) -> Optional[int]:
    n = g1.n
    stats.route = "components"
    pieces = []
    for mask in comps:
        ps = _component_pieces(g1, g2, mask, stats)
        if not ps:
            return None
        region = _component_vars(n, mask)
        pieces.append([_annihilator_rows(n, region, p, b) for p, b in ps])
    # depth-first choice of one piece per component, pruned by consistency
    order = sorted(range(len(pieces)), key=lambda i: len(pieces[i]))

    def search(k: int, rows: list[int], rhs: list[int]) -> Optional[int]:
        x, _ = f2_solve_affine(rows, rhs, 4 * n)
        if x is None:
            return None
        if k == len(order):
            return x
        for prow, prhs in pieces[order[k]]:
            stats.candidates += 1
            found = search(k + 1, rows + prow, rhs + prhs)
            if found is not None:
                return found
        return None

    return search(0, list(extra.rows), list(extra.rhs))


# -- quads <-> LC sequences ------------------------------------------------------------


def _lc_update(g: Graph, q: Quad, w: int) -> Quad:
    nb = g.rows[w]
    bit = 1 << w
    return Quad(q.n, q.A ^ (bit & q.C), q.B ^ (bit & q.D), q.C ^ (nb & q.A), q.D ^ (nb & q.B))


def _pivot_update(q: Quad, u: int, v: int) -> Quad:
    m = (1 << u) | (1 << v)
    return Quad(q.n, (q.A & ~m) | (q.C & m), (q.B & ~m) | (q.D & m), (q.C & ~m) | (q.A & m), (q.D & ~m) | (q.B & m))


def quad_to_lc_sequence(g1: Graph, g2: Graph, q: Quad, trace: Optional[list] = None) -> Witness:
    """Turn a valid quad into local complementations and pivots taking g1 to g2.

    Complements every vertex in case 2 or 6, then pivots on an edge joining
    two case-4/5 vertices, until every vertex is in case 1. ``trace`` (if
    given) receives the number of case-1/3 vertices after every iteration.
    """
    if not check_ii(q):
        raise ValidationError("quad violates condition (ii)")
    g = g1
    ops = []
    n = g1.n

    def settled(qq: Quad) -> int:
        return sum(qq.case(v) in (1, 3) for v in range(n))

    while True:
        progressed = False
        for u in range(n):
            if q.case(u) in (2, 6):
                q = _lc_update(g, q, u)
                g = local_complement(g, u)
                ops.append(LC(u))
                progressed = True
                if trace is not None:
                    trace.append(settled(q))
                break
        if progressed:
            continue
        u = next((w for w in range(n) if q.case(w) in (4, 5)), None)
        if u is None:
            break
        v = next((w for w in bits(g.rows[u]) if q.case(w) in (4, 5)), None)
        if v is None:
            raise AssertionError("case-4/5 vertex without a case-4/5 neighbour: the quad is not a solution")
        q = _pivot_update(q, u, v)
        g = pivot(g, u, v)
        ops.append(Pivot(u, v))
        if trace is not None:
            trace.append(settled(q))
    if any(q.case(v) != 1 for v in range(n)) or g != g2:
        raise AssertionError("reconstruction did not reach the target graph")
    return Witness.build(g1, g2, ops)


def lc_sequence_to_quad(g1: Graph, seq) -> Quad:
    """Quad relating g1 to its image under ``seq`` (LC ops or vertex ints)."""
    verts = []
    for op in seq:
        if isinstance(op, LC):
            verts.append(op.v)
        elif isinstance(op, Pivot):
            verts += [op.u, op.v, op.u]
        elif isinstance(op, int):
            verts.append(op)
        else:
            raise ValidationError(f"only local complementations and pivots encode into quads, got {op!r}")
    target = g1
    for v in verts:
        target = local_complement(target, v)
    g = target
    q = Quad.identity(g1.n)
    for v in reversed(verts):
        q = _lc_update(g, q, v)
        g = local_complement(g, v)
    assert g == g1
    return q


def clifford_labels(q: Quad) -> list[str]:
    out = []
    for v in range(q.n):
        c = q.case(v)
        if not c:
            raise ValidationError(f"vertex {v} violates condition (ii)")
        out.append(LABELS[c])
    return out


def decide_lc(g1: Graph, g2: Graph, extra: Optional[ConstraintSet] = None, fallback: bool = True) -> Optional[Witness]:
    """LC-equivalence (optionally constrained) with a replayable witness."""
    q = solve_constrained(g1, g2, extra, fallback=fallback)
    if q is None:
        return None
    return quad_to_lc_sequence(g1, g2, q)
