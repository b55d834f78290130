"""Named qutrit gates, controlled embeddings, and register placement."""

from __future__ import annotations

from enum import Enum
from functools import cache
from typing import TYPE_CHECKING

from .exact import INV_SQRT3, ONE, ZERO, Matrix, omega_power

if TYPE_CHECKING:
    from .circuit import GateApplication


class GateKind(Enum):
    """Every one-qutrit gate of the framework; values are the text mnemonics."""

    I3 = "I"
    CH = "CH"
    CHdag = "CH+"
    Z3 = "Z3"
    Z3dag = "Z3+"
    TSG1 = "TSG1"
    TSG1dag = "TSG1+"
    TSG2 = "TSG2"
    TSG2dag = "TSG2+"
    TSG3 = "TSG3"
    TSG3dag = "TSG3+"
    P01 = "01"
    P02 = "02"
    P12 = "12"
    SHIFT1 = "+1"
    SHIFT2 = "+2"

    @property
    def mnemonic(self) -> str:
        return self.value

    @property
    def dagger(self) -> GateKind:
        return _DAGGER[self]

    @property
    def is_diagonal_phase(self) -> bool:
        return self in (GateKind.Z3, GateKind.Z3dag)

    @classmethod
    def from_mnemonic(cls, text: str) -> GateKind:
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown gate mnemonic {text!r}") from None


_DAGGER = {
    GateKind.I3: GateKind.I3,
    GateKind.CH: GateKind.CHdag,
    GateKind.CHdag: GateKind.CH,
    GateKind.Z3: GateKind.Z3dag,
    GateKind.Z3dag: GateKind.Z3,
    GateKind.TSG1: GateKind.TSG1dag,
    GateKind.TSG1dag: GateKind.TSG1,
    GateKind.TSG2: GateKind.TSG2dag,
    GateKind.TSG2dag: GateKind.TSG2,
    GateKind.TSG3: GateKind.TSG3dag,
    GateKind.TSG3dag: GateKind.TSG3,
    GateKind.P01: GateKind.P01,
    GateKind.P02: GateKind.P02,
    GateKind.P12: GateKind.P12,
    GateKind.SHIFT1: GateKind.SHIFT2,
    GateKind.SHIFT2: GateKind.SHIFT1,
}

DESCRIPTIONS = {
    GateKind.I3: "identity",
    GateKind.CH: "Chrestenson superposition gate",
    GateKind.CHdag: "inverse Chrestenson",
    GateKind.Z3: "phase gate diag(1, w, w^2)",
    GateKind.Z3dag: "inverse phase gate diag(1, w^2, w)",
    GateKind.TSG1: "native superposition gate, postulate I",
    GateKind.TSG1dag: "inverse of TSG1",
    GateKind.TSG2: "native superposition gate, postulate II",
    GateKind.TSG2dag: "inverse of TSG2",
    GateKind.TSG3: "native superposition gate, postulate III",
    GateKind.TSG3dag: "inverse of TSG3",
    GateKind.P01: "permutative gate swapping |0> and |1>",
    GateKind.P02: "permutative gate swapping |0> and |2> (ternary NOT)",
    GateKind.P12: "permutative gate swapping |1> and |2>",
    GateKind.SHIFT1: "shift gate |d> -> |d+1 mod 3>",
    GateKind.SHIFT2: "shift gate |d> -> |d+2 mod 3>",
}


def _w(*powers: int) -> list:
    return [omega_power(p) for p in powers]


def _scaled(rows) -> Matrix:
    return Matrix.from_rows([[INV_SQRT3 * x for x in row] for row in rows])


def _build(kind: GateKind) -> Matrix:
    # entries are written as powers of w
    if kind is GateKind.I3:
        return Matrix.identity(3)
    if kind is GateKind.CH:
        return _scaled([_w(0, 0, 0), _w(0, 1, 2), _w(0, 2, 1)])
    if kind is GateKind.Z3:
        return Matrix.from_rows([[ONE, ZERO, ZERO], [ZERO, omega_power(1), ZERO], [ZERO, ZERO, omega_power(2)]])
    if kind is GateKind.TSG1:
        return _scaled([_w(0, 2, 1), _w(2, 2, 2), _w(1, 2, 0)])
    if kind is GateKind.TSG2:
        return _scaled([_w(0, 2, 1), _w(1, 1, 1), _w(2, 0, 1)])
    if kind is GateKind.TSG3:
        return _scaled([_w(0, 0, 0), _w(2, 0, 1), _w(1, 0, 2)])
    if kind is GateKind.P01:
        return Matrix.permutation([1, 0, 2])
    if kind is GateKind.P02:
        return Matrix.permutation([2, 1, 0])
    if kind is GateKind.P12:
        return Matrix.permutation([0, 2, 1])
    if kind is GateKind.SHIFT1:
        return Matrix.permutation([1, 2, 0])
    if kind is GateKind.SHIFT2:
        return Matrix.permutation([2, 0, 1])
    # remaining kinds are daggers of the ones above
    return gate_matrix(kind.dagger).dagger()


@cache
def gate_matrix(kind: GateKind) -> Matrix:
    """Exact 3x3 unitary of ``kind``."""
    return _build(kind)


@cache
def _unit_projector(value: int) -> Matrix:
    rows = [[ONE if (i == j == value) else ZERO for j in range(3)] for i in range(3)]
    return Matrix.from_rows(rows)


def _check_value(value: int) -> None:
    if value not in (0, 1, 2):
        raise ValueError(f"control value must be 0, 1 or 2, got {value!r}")


@cache
def controlled_matrix(kind: GateKind, control_value: int = 2) -> Matrix:
    """9x9 block-diagonal gate; the control is the more-significant digit."""
    _check_value(control_value)
    total = None
    for x in range(3):
        term = _unit_projector(x).kron(gate_matrix(kind) if x == control_value else Matrix.identity(3))
        total = term if total is None else total + term
    return total


def embed_gate(m: int, app: GateApplication) -> Matrix:
    """Full-register unitary of one (possibly controlled) application.

    Qutrit 0 is the most-significant digit of the basis index.
    """
    if m < 1:
        raise ValueError("register width must be at least 1")
    if not 0 <= app.target < m:
        raise IndexError(f"target q{app.target} out of range for {m} qutrits")
    g = gate_matrix(app.kind)
    ident = Matrix.identity(3)
    if app.control is None:
        return _kron_all([g if q == app.target else ident for q in range(m)])
    if not 0 <= app.control < m:
        raise IndexError(f"control q{app.control} out of range for {m} qutrits")
    if app.control == app.target:
        raise ValueError("control and target must differ")
    _check_value(app.value)
    total = None
    for x in range(3):
        factors = []
        for q in range(m):
            if q == app.control:
                factors.append(_unit_projector(x))
            elif q == app.target and x == app.value:
                factors.append(g)
            else:
                factors.append(ident)
        term = _kron_all(factors)
        total = term if total is None else total + term
    return total


def _kron_all(factors: list[Matrix]) -> Matrix:
    out = factors[0]
    for f in factors[1:]:
        out = out.kron(f)
    return out
