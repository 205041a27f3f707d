from __future__ import annotations

import json

import pytest

from _util import A, B, C, example_graph, example_move
from luequiv.errors import ValidationError
from luequiv.graph import VertexMultiset, apply_rlc, local_complement, pivot
from luequiv.witness import LC, RLC, Pivot, Witness, apply_ops, inverse_ops, op_from_json, op_to_json, verify_witness


def test_ops_roundtrip_json():
    ops = [LC(3), Pivot(0, 4), RLC(example_move())]
    for op in ops:
        assert op_from_json(json.loads(json.dumps(op_to_json(op)))) == op
    with pytest.raises(ValidationError):
        op_from_json({"op": "twist"})
    with pytest.raises(ValidationError):
        op_from_json({"op": "lc"})


def test_apply_and_inverse():
    g = example_graph()
    ops = [LC(0), Pivot(3, 5), RLC(VertexMultiset(1, {B: 1}))]
    h = apply_ops(g, ops)
    expected = apply_rlc(pivot(local_complement(g, 0), 3, 5), VertexMultiset(1, {B: 1}))
    assert h == expected
    assert apply_ops(h, inverse_ops(ops)) == g


def test_witness_rules():
    g = example_graph()
    with pytest.raises(ValidationError):
        Witness.build(g, g, [RLC(example_move()), RLC(example_move())])
    h = apply_rlc(g, example_move())
    w = Witness.build(g, h, [RLC(example_move())])
    assert w.rlc_levels == [2]
    again = Witness.from_json(json.loads(w.dumps()))
    assert again == w and verify_witness(g, again, h)
    assert not verify_witness(h, w, g)
    bad = Witness.build(g, h, [RLC(VertexMultiset(2, {A: 1, B: 1, C: 1}))])
    assert not verify_witness(g, bad, h)
    with pytest.raises(ValidationError):
        Witness.from_json({"ops": []})
