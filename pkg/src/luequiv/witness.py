"""Witness vocabulary: sequences of local operations and their replay."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from .errors import ValidationError
from .graph import Graph, VertexMultiset, apply_rlc, from_graph6, local_complement, pivot, to_graph6


@dataclass(frozen=True)
class LC:
    v: int


@dataclass(frozen=True)
class Pivot:
    u: int
    v: int


@dataclass(frozen=True)
class RLC:
    s: VertexMultiset

    @property
    def level(self) -> int:
        return self.s.level


LocalOp = Union[LC, Pivot, RLC]


def apply_op(g: Graph, op: LocalOp, check: bool = True) -> Graph:
    if isinstance(op, LC):
        if not 0 <= op.v < g.n:
            raise ValidationError(f"vertex {op.v} out of range")
        return local_complement(g, op.v)
    if isinstance(op, Pivot):
        if not (0 <= op.u < g.n and 0 <= op.v < g.n):
            raise ValidationError(f"pivot ({op.u},{op.v}) out of range")
        return pivot(g, op.u, op.v)
    if isinstance(op, RLC):
        return apply_rlc(g, op.s, check=check)
    raise TypeError(f"unknown operation {op!r}")


def apply_ops(g: Graph, ops, check: bool = True) -> Graph:
    for op in ops:
        g = apply_op(g, op, check=check)
    return g


def inverse_ops(ops) -> list:
    """Every local operation is an involution, so the inverse is the reversal."""
    return list(reversed(ops))


def op_to_json(op: LocalOp) -> dict:
    if isinstance(op, LC):
        return {"op": "lc", "v": op.v}
    if isinstance(op, Pivot):
        return {"op": "pivot", "u": op.u, "v": op.v}
    return {"op": "rlc", "r": op.s.level, "mult": {str(v): m for v, m in op.s.items}}


def op_from_json(obj: dict) -> LocalOp:
    kind = obj.get("op")
    try:
        if kind == "lc":
            return LC(int(obj["v"]))
        if kind == "pivot":
            return Pivot(int(obj["u"]), int(obj["v"]))
        if kind == "rlc":
            return RLC(VertexMultiset(int(obj["r"]), {int(k): int(m) for k, m in obj["mult"].items()}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed operation {obj!r}") from exc
    raise ValidationError(f"unknown operation kind {kind!r}")


@dataclass
class Witness:
    """Operations turning ``source`` into ``target``, both stored as graph6."""

    source: str
    target: str
    ops: list = field(default_factory=list)

    def __post_init__(self):
        if sum(isinstance(op, RLC) for op in self.ops) > 1:
            raise ValidationError("a witness carries at most one generalised local complementation")

    @classmethod
    def build(cls, g1: Graph, g2: Graph, ops) -> "Witness":
        return cls(to_graph6(g1), to_graph6(g2), list(ops))

    @property
    def rlc_levels(self) -> list[int]:
        return [op.level for op in self.ops if isinstance(op, RLC)]

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "ops": [op_to_json(op) for op in self.ops]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, obj: dict) -> "Witness":
        try:
            return cls(obj["source"], obj["target"], [op_from_json(o) for o in obj["ops"]])
        except (KeyError, TypeError) as exc:
            raise ValidationError("malformed witness document") from exc


def verify_witness(g1: Graph, w: Witness, g2: Graph) -> bool:
    """Replay ``w`` on ``g1`` with full validation; True iff it lands on ``g2``."""
    try:
        if from_graph6(w.source) != g1 or from_graph6(w.target) != g2:
            return False
        return apply_ops(g1, w.ops, check=True) == g2
    except (ValidationError, TypeError, IndexError):
        return False
