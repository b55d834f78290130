import json
import random

import pytest
from hypothesis import given, settings

from strategies import circuits, random_circuit
from tqg.circuit import (Circuit, CostReport, GateApplication, ParseError, cancel_inverses, compose_unitary,
                         format_circuit, invert_circuit, matrix_from_json, matrix_to_json, parse_circuit,
                         parse_gate_line, qc3)
from tqg.exact import Matrix
from tqg.gates import GateKind, controlled_matrix, gate_matrix

K = GateKind


def one(*kinds, width=1):
    return Circuit(width, tuple(GateApplication(k, 0) for k in kinds))


def test_parse_eq17_example():
    c = parse_circuit("qutrits 1\nCH q0\nZ3 q0\nCH q0\n")
    assert len(c) == 3
    assert compose_unitary(c) == gate_matrix(K.P02)


def test_header_only():
    c = parse_circuit("qutrits 1")
    assert len(c) == 0 and compose_unitary(c) == Matrix.identity(3)


def test_controlled_line_round_trip():
    text = "qutrits 2\nC+1[v=2] q0 -> q1\n"
    c = parse_circuit(text)
    assert c.apps[0] == GateApplication(K.SHIFT1, 1, 0, 2)
    assert format_circuit(c) == text
    assert parse_circuit("qutrits 2\nC+1 q0->q1").apps[0].value == 2


def test_comments_and_stages():
    c = parse_circuit("# top\nqutrits 2\n--- stage one\nCH q1\n# mid\n12 q0\n")
    assert [a.stage for a in c.apps] == ["one", None]
    assert parse_circuit(format_circuit(c)) == c


@pytest.mark.parametrize("text, line", [
    ("CH q0", 1),
    ("qutrits 1\nFOO q0", 2),
    ("qutrits 1\nCH q1", 2),
    ("qutrits 2\nCCH q1 -> q1", 2),
    ("qutrits 2\nCCH[v=3] q0 -> q1", 2),
    ("qutrits 1\n--- stage x", 2),
    ("", 1),
    ("qutrits 0", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_circuit(text)
    assert err.value.line == line


def test_gate_line_parser():
    assert parse_gate_line("TSG2+ q3") == GateApplication(K.TSG2dag, 3)
    with pytest.raises(ParseError):
        parse_gate_line("CH")


@given(circuits())
def test_format_parse_round_trip(c):
    assert parse_circuit(format_circuit(c)) == c


def test_composition_order_is_pinned():
    assert compose_unitary(one(K.Z3, K.TSG2, K.Z3dag)) == gate_matrix(K.CH)
    assert compose_unitary(one(K.Z3dag, K.TSG2, K.Z3)) != gate_matrix(K.CH)
    assert compose_unitary(one(K.TSG3, K.Z3)) == gate_matrix(K.CH)
    assert compose_unitary(one(K.CH, K.CH, K.CH, K.CH)) == Matrix.identity(3)


def test_shift_factorizations():
    for pair in [(K.P01, K.P02), (K.P12, K.P01), (K.P02, K.P12), (K.SHIFT2, K.SHIFT2)]:
        assert compose_unitary(one(*pair)) == gate_matrix(K.SHIFT1)
    for pair in [(K.P02, K.P01), (K.P01, K.P12), (K.P12, K.P02), (K.SHIFT1, K.SHIFT1)]:
        assert compose_unitary(one(*pair)) == gate_matrix(K.SHIFT2)


def test_qc3_counts():
    eq23 = Circuit(2, (
        GateApplication(K.Z3, 1), GateApplication(K.TSG2, 1, 0), GateApplication(K.Z3dag, 1),
        GateApplication(K.TSG2, 1, 0), GateApplication(K.TSG2, 1, 0), GateApplication(K.Z3, 1),
        GateApplication(K.TSG2, 1, 0), GateApplication(K.Z3dag, 1)))
    assert qc3(eq23) == CostReport(4, 4) and qc3(eq23).total == 8
    assert qc3(Circuit(1)) == CostReport(0, 0)
    assert compose_unitary(eq23) == controlled_matrix(K.SHIFT1, 2)


def test_qc3_identity_flag():
    c = one(K.I3, K.CH)
    assert qc3(c).total == 2
    assert qc3(c, ignore_identity=True).total == 1


def test_invert_examples():
    inv = invert_circuit(one(K.Z3, K.TSG2, K.Z3dag))
    assert [a.kind for a in inv.apps] == [K.Z3, K.TSG2dag, K.Z3dag]
    assert compose_unitary(inv) == gate_matrix(K.CHdag)
    assert invert_circuit(Circuit(2)) == Circuit(2)


def test_invert_involution_and_inverse():
    rng = random.Random(7)
    for _ in range(20):
        c = random_circuit(rng, max_len=10)
        assert invert_circuit(invert_circuit(c)) == c
        assert (compose_unitary(invert_circuit(c)) @ compose_unitary(c)).is_identity()


def test_cancel_examples():
    reset = one(K.Z3, K.TSG2, K.Z3dag, K.Z3, K.TSG2dag, K.Z3dag)
    assert len(cancel_inverses(reset)) == 0
    assert len(cancel_inverses(one(K.Z3, K.Z3dag))) == 0
    assert [a.kind for a in cancel_inverses(one(K.Z3dag, K.Z3dag, K.Z3)).apps] == [K.Z3dag]
    assert len(cancel_inverses(one(K.Z3, K.Z3, K.Z3))) == 0


def test_cancel_respects_wires_and_controls():
    c = Circuit(2, (GateApplication(K.CH, 0), GateApplication(K.Z3, 1), GateApplication(K.CHdag, 0)))
    assert [a.kind for a in cancel_inverses(c).apps] == [K.Z3]
    blocked = Circuit(2, (GateApplication(K.CH, 0), GateApplication(K.Z3, 0, 1), GateApplication(K.CHdag, 0)))
    assert len(cancel_inverses(blocked)) == 3
    mixed = Circuit(2, (GateApplication(K.CH, 1, 0, 2), GateApplication(K.CHdag, 1, 0, 1)))
    assert len(cancel_inverses(mixed)) == 2


def test_cancel_moves_stage_label():
    c = Circuit(1, (GateApplication(K.CH, 0, stage="s"), GateApplication(K.CHdag, 0), GateApplication(K.Z3, 0)))
    out = cancel_inverses(c)
    assert out.apps == (GateApplication(K.Z3, 0, stage="s"),)


@settings(max_examples=40)
@given(circuits(max_len=12))
def test_cancel_preserves_unitary(c):
    assert compose_unitary(cancel_inverses(c)) == compose_unitary(c)


def test_matrix_json_round_trip():
    m = controlled_matrix(K.CH, 1)
    data = json.loads(json.dumps(matrix_to_json(m)))
    assert matrix_from_json(data) == m
    assert data["dim"] == 9 and len(data["float"]) == 9
    with pytest.raises(ValueError):
        matrix_from_json({"dim": 2, "entries": [[]]})


def test_width_checks():
    with pytest.raises(ValueError):
        Circuit(0)
    with pytest.raises(ValueError):
        Circuit(1, (GateApplication(K.CH, 1),))
