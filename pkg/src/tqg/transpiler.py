"""Lowering to the three postulated native gate sets, and decomposition checks."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .circuit import Circuit, CostReport, GateApplication, cancel_inverses, compose_unitary, invert_circuit, qc3
from .exact import ExactAmplitude, Matrix, global_phase_equal
from .gates import GateKind

K = GateKind


class Postulate(Enum):
    I = "I"
    II = "II"
    III = "III"

    @property
    def tsg(self) -> GateKind:
        return {Postulate.I: K.TSG1, Postulate.II: K.TSG2, Postulate.III: K.TSG3}[self]

    @property
    def native(self) -> frozenset[GateKind]:
        return {
            Postulate.I: frozenset({K.Z3, K.TSG1}),
            Postulate.II: frozenset({K.Z3, K.Z3dag, K.TSG2, K.TSG2dag}),
            Postulate.III: frozenset({K.Z3, K.TSG3}),
        }[self]

    @property
    def native_with_inverses(self) -> frozenset[GateKind]:
        """Native kinds plus Z3+ and the TSG inverse, which CH+ constructions need."""
        return self.native | {K.Z3dag, self.tsg.dagger}

    @classmethod
    def parse(cls, text: str | Postulate) -> Postulate:
        if isinstance(text, Postulate):
            return text
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"unknown postulate {text!r}; expected I, II or III") from None


DECOMPOSABLE = (K.CH, K.CHdag, K.P01, K.P02, K.P12, K.SHIFT1, K.SHIFT2)

# CH expressed through each postulate's native superposition gate, wire order
_CH_SEQUENCE = {
    Postulate.I: (K.Z3, K.TSG1, K.Z3),
    Postulate.II: (K.Z3, K.TSG2, K.Z3dag),
    Postulate.III: (K.TSG3, K.Z3),
}


def _ch_sequence(p: Postulate) -> tuple[GateKind, ...]:
    return _CH_SEQUENCE[p]


def _chdag_sequence(p: Postulate) -> tuple[GateKind, ...]:
    if p is Postulate.II:
        return (K.Z3, K.TSG2dag, K.Z3dag)
    return tuple(k.dagger for k in reversed(_ch_sequence(p)))


def _abstract_expansion(kind: GateKind, p: Postulate) -> tuple[GateKind, ...]:
    """Expansion in terms of CH, CH+ and Z3-type gates, before lowering CH."""
    if kind in (K.CH, K.CHdag):
        return (kind,)
    if kind is K.P01:
        # CH . Z3+ . CH, or CH . Z3 . Z3 . CH where Z3+ is not native
        middle = (K.Z3dag,) if K.Z3dag in p.native else (K.Z3, K.Z3)
        return (K.CH, *middle, K.CH)
    if kind is K.P02:
        return (K.CH, K.Z3, K.CH)
    if kind is K.P12:
        return (K.CH, K.CH)
    if kind is K.SHIFT1:
        return _abstract_expansion(K.P01, p) + _abstract_expansion(K.P02, p)
    if kind is K.SHIFT2:
        return _abstract_expansion(K.P02, p) + _abstract_expansion(K.P01, p)
    raise ValueError(f"{kind.mnemonic} is not decomposable")


def _lower(seq: tuple[GateKind, ...], p: Postulate) -> list[GateKind]:
    out: list[GateKind] = []
    for kind in seq:
        if kind is K.CH:
            out.extend(_ch_sequence(p))
        elif kind is K.CHdag:
            out.extend(_chdag_sequence(p))
        else:
            out.append(kind)
    return out


def decompose_gate(kind: GateKind, p: Postulate | str, target: int = 0, width: int = 1) -> Circuit:
    """Native-gate circuit for ``kind`` under postulate ``p``, after cancellation."""
    p = Postulate.parse(p)
    if kind not in DECOMPOSABLE:
        raise ValueError(f"{kind.mnemonic} is not decomposable")
    seq = _lower(_abstract_expansion(kind, p), p)
    c = Circuit(width, tuple(GateApplication(k, target) for k in seq))
    return cancel_inverses(c)


def decompose_controlled(
    kind: GateKind,
    p: Postulate | str = Postulate.II,
    mode: str = "faithful",
    control: int = 0,
    target: int = 1,
    control_value: int = 2,
) -> Circuit:
    """Two-qutrit controlled construction.

    ``faithful`` controls only the TSG gates and leaves the Z3-type gates
    uncontrolled on the target; ``strict`` controls every gate.
    """
    p = Postulate.parse(p)
    if mode not in ("faithful", "strict"):
        raise ValueError(f"unsupported mode {mode!r}; expected faithful or strict")
    if kind not in DECOMPOSABLE:
        raise ValueError(f"{kind.mnemonic} is not decomposable")
    seq = _lower(_abstract_expansion(kind, p), p)
    apps = []
    for k in seq:
        if k.is_diagonal_phase and mode == "faithful":
            apps.append(GateApplication(k, target))
        else:
            apps.append(GateApplication(k, target, control, control_value))
    return cancel_inverses(Circuit(2, tuple(apps)))


# ---------------------------------------------------------------------------
# verification


class Verdict(Enum):
    EXACT = "Exact"
    GLOBAL_PHASE = "GlobalPhase"
    BRANCH_DEFECT = "BranchDefect"
    MISMATCH = "Mismatch"


@dataclass(frozen=True)
class VerifyResult:
    verdict: Verdict
    phase: ExactAmplitude | None = None
    residuals: dict[int, Matrix] = field(default_factory=dict)
    first_mismatch: tuple[int, int] | None = None

    @property
    def is_exact(self) -> bool:
        return self.verdict is Verdict.EXACT

    def describe(self) -> str:
        if self.verdict is Verdict.GLOBAL_PHASE:
            return f"GlobalPhase({self.phase})"
        if self.verdict is Verdict.BRANCH_DEFECT:
            parts = [f"{v}: {_name_residual(r)}" for v, r in sorted(self.residuals.items())]
            return "BranchDefect{" + ", ".join(parts) + "}"
        if self.verdict is Verdict.MISMATCH:
            return f"Mismatch(first differing entry {self.first_mismatch})"
        return "Exact"


def _name_residual(r: Matrix) -> str:
    from .gates import gate_matrix

    for kind in GateKind:
        if r == gate_matrix(kind):
            return kind.mnemonic
    return "non-library 3x3 unitary"


def _first_difference(a: Matrix, b: Matrix) -> tuple[int, int]:
    for i in range(a.dim):
        for j in range(a.dim):
            if a.item((i, j)) != b.item((i, j)):
                return (i, j)
    raise AssertionError("matrices are equal")


def _branch_residuals(u: Matrix, target: Matrix, control: int) -> dict[int, Matrix] | None:
    """Per-control-digit residuals ``R_v = T_v^dagger U_v`` for width-2 unitaries.

    Returns None unless both ``u`` and ``target`` preserve the control digit.
    """
    if u.dim != 9:
        return None
    other = 1 - control

    def index(cv, tv):
        digits = [0, 0]
        digits[control], digits[other] = cv, tv
        return 3 * digits[0] + digits[1]

    blocks = {v: [index(v, t) for t in range(3)] for v in range(3)}
    for v in range(3):
        for w in range(3):
            if v == w:
                continue
            if not u.block(blocks[v], blocks[w]).is_zero() or not target.block(blocks[v], blocks[w]).is_zero():
                return None
    residuals = {}
    for v in range(3):
        tv = target.block(blocks[v], blocks[v])
        uv = u.block(blocks[v], blocks[v])
        residuals[v] = tv.dagger() @ uv
    return residuals


def verify_decomposition(c: Circuit, target: Matrix, control: int | None = None) -> VerifyResult:
    """Classify ``compose(c)`` against ``target``.

    ``control`` names the control wire for branch analysis of two-qutrit
    targets; by default the control of the first controlled gate is used.
    """
    u = compose_unitary(c)
    if u.dim != target.dim:
        raise ValueError(f"dimension mismatch: circuit {u.dim}, target {target.dim}")
    if u == target:
        return VerifyResult(Verdict.EXACT)
    same, lam = global_phase_equal(u, target)
    if same:
        return VerifyResult(Verdict.GLOBAL_PHASE, phase=lam)
    if control is None:
        control = next((a.control for a in c.apps if a.control is not None), None)
    if control is not None and c.width == 2:
        residuals = _branch_residuals(u, target, control)
        if residuals is not None:
            return VerifyResult(Verdict.BRANCH_DEFECT, residuals=residuals)
    return VerifyResult(Verdict.MISMATCH, first_mismatch=_first_difference(u, target))


# ---------------------------------------------------------------------------
# reset cost


def reset_circuit(technique: str, p: Postulate | str = Postulate.II) -> Circuit:
    p = Postulate.parse(p)
    if p is not Postulate.II:
        raise ValueError("reset-cost comparison is defined for postulate II only")
    if technique == "four_gate":
        seq = _lower((K.CH,) * 4, p)
    elif technique == "two_gate":
        seq = _lower((K.CH, K.CHdag), p)
    else:
        raise ValueError(f"unknown reset technique {technique!r}")
    return Circuit(1, tuple(GateApplication(k, 0) for k in seq))


def reset_cost(technique: str, p: Postulate | str = Postulate.II) -> CostReport:
    c = reset_circuit(technique, p)
    if not compose_unitary(c).is_identity():
        raise AssertionError(f"{technique} reset does not compose to the identity")
    return qc3(c)
