"""Local-Clifford, r-local-complementation and local-unitary equivalence of graph states."""

from __future__ import annotations

from .bouchet import ConstraintSet, Quad, decide_lc, solve_constrained
from .equivalence import Verdict, decide_lcr, decide_lu, max_useful_level
from .errors import ClassAlphaUnresolved, ResourceLimitError, ValidationError
from .graph import (
    Graph,
    VertexMultiset,
    apply_rlc,
    from_graph6,
    is_r_incident,
    local_complement,
    pivot,
    to_graph6,
)
from .localsets import MlsCover, mls_cover, vertex_types
from .oracle import lc_orbit, lcr_orbit_small
from .search_gk import complete_from_high, count_gk, scan
from .standard_form import standardize_pair
from .witness import LC, RLC, Pivot, Witness, verify_witness

__version__ = "0.1.0"

__all__ = [
    "ConstraintSet",
    "Quad",
    "decide_lc",
    "solve_constrained",
    "Verdict",
    "decide_lcr",
    "decide_lu",
    "max_useful_level",
    "ClassAlphaUnresolved",
    "ResourceLimitError",
    "ValidationError",
    "Graph",
    "VertexMultiset",
    "apply_rlc",
    "from_graph6",
    "is_r_incident",
    "local_complement",
    "pivot",
    "to_graph6",
    "MlsCover",
    "mls_cover",
    "vertex_types",
    "lc_orbit",
    "lcr_orbit_small",
    "complete_from_high",
    "count_gk",
    "scan",
    "standardize_pair",
    "LC",
    "RLC",
    "Pivot",
    "Witness",
    "verify_witness",
]
