"""Exact ternary (qutrit) gates, transpiler, simulator and circuit synthesizer."""

from .circuit import (Circuit, CostReport, GateApplication, ParseError, cancel_inverses, compose_unitary,
                      format_circuit, invert_circuit, parse_circuit, qc3)
from .exact import ExactAmplitude, Matrix, amp_add, amp_conj, amp_mul, amp_to_float, global_phase_equal
from .gates import GateKind, controlled_matrix, embed_gate, gate_matrix
from .simulator import StateVector, apply_gate, init_basis_state, probabilities, run, states_equal
from .transpiler import Postulate, Verdict, VerifyResult, decompose_controlled, decompose_gate, reset_cost
from .transpiler import verify_decomposition

__all__ = [
    "Circuit", "CostReport", "GateApplication", "ParseError", "cancel_inverses", "compose_unitary",
    "format_circuit", "invert_circuit", "parse_circuit", "qc3",
    "ExactAmplitude", "Matrix", "amp_add", "amp_conj", "amp_mul", "amp_to_float", "global_phase_equal",
    "GateKind", "controlled_matrix", "embed_gate", "gate_matrix",
    "StateVector", "apply_gate", "init_basis_state", "probabilities", "run", "states_equal",
    "Postulate", "Verdict", "VerifyResult", "decompose_controlled", "decompose_gate", "reset_cost",
    "verify_decomposition",
]
