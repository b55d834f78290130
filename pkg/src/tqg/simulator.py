"""Exact state-vector simulation with stage snapshots."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .circuit import Circuit, GateApplication
from .exact import ONE, ExactAmplitude, ExactArray, bilinear, format_amplitude, global_phase_equal
from .exact import Matrix, amp_to_float
from .gates import gate_matrix


class StateVector(ExactArray):
    """3**m exact amplitudes; qutrit 0 is the most-significant digit."""

    __slots__ = ()

    def __init__(self, parts, k: int = 0):
        super().__init__(parts, k)
        if len(self.shape) != 1:
            raise ValueError("state vector must be one-dimensional")
        n = self.shape[0]
        width = 0
        while 3 ** width < n:
            width += 1
        if 3 ** width != n or n == 0:
            raise ValueError(f"length {n} is not a power of 3")

    @property
    def width(self) -> int:
        n, m = self.shape[0], 0
        while 3 ** m < n:
            m += 1
        return m

    def amplitudes(self) -> list[ExactAmplitude]:
        return [self.item(i) for i in range(self.shape[0])]

    @classmethod
    def from_amplitudes(cls, values) -> StateVector:
        base = ExactArray.from_amplitudes(list(values))
        return cls(base.parts, base.k)

    def norm2(self) -> ExactAmplitude:
        total = ExactAmplitude()
        for amp in self.amplitudes():
            total = total + amp.abs2()
        return total

    def __repr__(self) -> str:
        return f"StateVector(width={self.width})"


def digits_to_index(digits: Sequence[int]) -> int:
    index = 0
    for d in digits:
        index = 3 * index + d
    return index


def index_to_digits(index: int, width: int) -> str:
    out = []
    for _ in range(width):
        out.append(str(index % 3))
        index //= 3
    return "".join(reversed(out))


def init_basis_state(digits: str | Sequence[int]) -> StateVector:
    values = [int(ch) if isinstance(ch, str) and ch.isdigit() else ch for ch in digits]
    if not values or any(v not in (0, 1, 2) for v in values):
        raise ValueError(f"basis digits must be a non-empty string over 0,1,2, got {digits!r}")
    n = 3 ** len(values)
    a = np.zeros(n, dtype=np.int64)
    a[digits_to_index(values)] = 1
    z = np.zeros(n, dtype=np.int64)
    return StateVector([a, z, z.copy(), z.copy()], 0)


def _apply_on_axis(g: ExactArray, parts, axis: int):
    def op(gm, s):
        return np.moveaxis(np.tensordot(gm, s, axes=([1], [axis])), 0, axis)

    return bilinear(g.parts, parts, op, 3)


def apply_gate(s: StateVector, app: GateApplication) -> StateVector:
    """Digit-sliced application; never builds the 3**m x 3**m matrix."""
    m = s.width
    if not 0 <= app.target < m:
        raise IndexError(f"target q{app.target} out of range for {m} qutrits")
    g = gate_matrix(app.kind)
    shape = (3,) * m
    parts = [p.reshape(shape) for p in s.parts]
    if app.control is None:
        out = _apply_on_axis(g, parts, app.target)
        return StateVector([p.reshape(-1) for p in out], s.k + g.k)
    if not 0 <= app.control < m:
        raise IndexError(f"control q{app.control} out of range for {m} qutrits")
    # slice where the control digit equals the activation value
    sel = [slice(None)] * m
    sel[app.control] = app.value
    sel = tuple(sel)
    axis = app.target - (1 if app.control < app.target else 0)
    active = _apply_on_axis(g, [p[sel] for p in parts], axis)
    scale = 3 ** g.k
    result = []
    for p, new in zip(parts, active):
        full = p * scale
        if full.dtype != new.dtype:
            full = full.astype(object)
            new = new.astype(object)
        full[sel] = new
        result.append(full.reshape(-1))
    return StateVector(result, s.k + g.k)


def apply_matrix(u: Matrix, s: StateVector) -> StateVector:
    return u.apply(s)


def run(c: Circuit, init: StateVector) -> list[tuple[str | None, StateVector]]:
    """Simulate ``c`` from ``init``.

    Returns one ``(label, state)`` snapshot at the end of each stage group,
    followed by ``(None, final_state)``. A stage group starts at a gate with a
    stage marker and runs until the next marker.
    """
    if init.width != c.width:
        raise ValueError(f"state width {init.width} does not match circuit width {c.width}")
    snapshots: list[tuple[str | None, StateVector]] = []
    state = init
    current = None
    for app in c.apps:
        if app.stage is not None:
            if current is not None:
                snapshots.append((current, state))
            current = app.stage
        state = apply_gate(state, app)
    if current is not None:
        snapshots.append((current, state))
    snapshots.append((None, state))
    return snapshots


def states_equal(s1: StateVector, s2: StateVector, mode: str = "exact") -> tuple[bool, ExactAmplitude | None]:
    """Compare exactly, or up to one global unit phase (``mode='global_phase'``)."""
    if s1.shape != s2.shape:
        raise ValueError("state widths differ")
    if mode == "exact":
        same = s1 == s2
        return same, (ONE if same else None)
    if mode == "global_phase":
        # reuse the matrix routine on 1x1-per-entry diagonal embedding
        a = Matrix([np.diag(p) for p in s1.parts], s1.k)
        b = Matrix([np.diag(p) for p in s2.parts], s2.k)
        return global_phase_equal(a, b)
    raise ValueError(f"unknown comparison mode {mode!r}")


def probabilities(s: StateVector) -> list[Fraction]:
    """Exact measurement probabilities per basis state."""
    return [amp.abs2().as_fraction() for amp in s.amplitudes()]


def format_state(s: StateVector) -> str:
    lines = []
    for i, amp in enumerate(s.amplitudes()):
        if amp.is_zero():
            continue
        re_, im_ = amp_to_float(amp)
        re_ = 0.0 if abs(re_) < 5e-13 else re_
        im_ = 0.0 if abs(im_) < 5e-13 else im_
        lines.append(f"|{index_to_digits(i, s.width)}⟩: {format_amplitude(amp)} ({re_:+.6f}, {im_:+.6f})")
    return "\n".join(lines)


def state_to_json(s: StateVector) -> dict:
    amps = []
    for i, amp in enumerate(s.amplitudes()):
        re_, im_ = amp_to_float(amp)
        amps.append({"basis": index_to_digits(i, s.width), "a": amp.a, "b": amp.b, "c": amp.c,
                     "d": amp.d, "k": amp.k, "float": [re_, im_]})
    return {"width": s.width, "amplitudes": amps}
