"""Circuit representation, text format, composition, cost and peephole cancellation.

Gate lists are in on-the-wire order: ``apps[0]`` acts first, so the circuit
unitary is ``embed(apps[-1]) @ ... @ embed(apps[0])``.

Text format::

    qutrits 2
    # comment
    --- stage entanglement
    CH q1
    C+1[v=1] q1 -> q0
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .exact import ExactAmplitude, Matrix, amp_to_float
from .gates import GateKind, embed_gate


class ParseError(ValueError):
    """Malformed circuit text; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class GateApplication:
    kind: GateKind
    target: int
    control: int | None = None
    value: int = 2
    stage: str | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        if self.target < 0 or (self.control is not None and self.control < 0):
            raise ValueError("qutrit indices must be non-negative")
        if self.control is not None and self.control == self.target:
            raise ValueError("control and target must differ")
        if self.value not in (0, 1, 2):
            raise ValueError(f"control value must be 0, 1 or 2, got {self.value}")

    @property
    def is_controlled(self) -> bool:
        return self.control is not None

    @property
    def wires(self) -> frozenset[int]:
        if self.control is None:
            return frozenset((self.target,))
        return frozenset((self.control, self.target))

    def placement(self) -> tuple:
        return (self.target, self.control, self.value if self.control is not None else None)

    def dagger(self) -> GateApplication:
        return replace(self, kind=self.kind.dagger, stage=None)

    def unlabeled(self) -> GateApplication:
        return replace(self, stage=None) if self.stage is not None else self

    def to_text(self) -> str:
        if self.control is None:
            return f"{self.kind.mnemonic} q{self.target}"
        return f"C{self.kind.mnemonic}[v={self.value}] q{self.control} -> q{self.target}"


@dataclass(frozen=True)
class Circuit:
    width: int
    apps: tuple[GateApplication, ...] = ()

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("circuit width must be at least 1")
        object.__setattr__(self, "apps", tuple(self.apps))
        for app in self.apps:
            if max(app.wires) >= self.width:
                raise ValueError(f"{app.to_text()} exceeds circuit width {self.width}")

    def __len__(self) -> int:
        return len(self.apps)

    def __iter__(self):
        return iter(self.apps)

    def then(self, other: Circuit) -> Circuit:
        if other.width != self.width:
            raise ValueError("width mismatch")
        return Circuit(self.width, self.apps + other.apps)

    def unlabeled(self) -> Circuit:
        return Circuit(self.width, tuple(a.unlabeled() for a in self.apps))


@dataclass(frozen=True)
class CostReport:
    one_qutrit: int
    two_qutrit: int

    @property
    def total(self) -> int:
        return self.one_qutrit + self.two_qutrit

    def __str__(self) -> str:
        return f"QC3 = {self.total} (one-qutrit {self.one_qutrit}, two-qutrit {self.two_qutrit})"


# ---------------------------------------------------------------------------
# text format

_ONE_RE = re.compile(r"^(?P<m>\S+)\s+q(?P<t>\d+)$")
_CTRL_RE = re.compile(r"^C(?P<m>[^\s\[]+)(\[v=(?P<v>\d+)\])?\s+q(?P<c>\d+)\s*->\s*q(?P<t>\d+)$")
_STAGE_RE = re.compile(r"^---\s*stage\s+(?P<name>.+?)\s*$")


def parse_gate_line(line: str, lineno: int = 1) -> GateApplication:
    text = line.strip()
    if "->" in text:
        match = _CTRL_RE.match(text)
        if not match:
            raise ParseError(f"malformed controlled gate {text!r}", lineno)
        value = int(match["v"]) if match["v"] is not None else 2
        control, target = int(match["c"]), int(match["t"])
        if value not in (0, 1, 2):
            raise ParseError(f"control value must be 0, 1 or 2, got {value}", lineno)
        if control == target:
            raise ParseError("control and target must differ", lineno)
    else:
        match = _ONE_RE.match(text)
        if not match:
            raise ParseError(f"malformed gate {text!r}", lineno)
        value, control, target = 2, None, int(match["t"])
    try:
        kind = GateKind.from_mnemonic(match["m"])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None
    return GateApplication(kind, target, control, value)


def parse_circuit(text: str) -> Circuit:
    width = None
    apps: list[GateApplication] = []
    pending_stage = None
    pending_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if width is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "qutrits" or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("expected header 'qutrits <m>'", lineno)
            width = int(parts[1])
            continue
        stage = _STAGE_RE.match(line)
        if stage:
            if pending_stage is not None:
                raise ParseError("stage marker must be followed by a gate", pending_line)
            pending_stage, pending_line = stage["name"], lineno
            continue
        app = parse_gate_line(line, lineno)
        if max(app.wires) >= width:
            raise ParseError(f"qutrit index out of range for {width} qutrits", lineno)
        if pending_stage is not None:
            app = replace(app, stage=pending_stage)
            pending_stage = None
        apps.append(app)
    if width is None:
        raise ParseError("missing 'qutrits <m>' header", 1)
    if pending_stage is not None:
        raise ParseError("stage marker must be followed by a gate", pending_line)
    return Circuit(width, tuple(apps))


def format_circuit(c: Circuit) -> str:
    lines = [f"qutrits {c.width}"]
    for app in c.apps:
        if app.stage is not None:
            lines.append(f"--- stage {app.stage}")
        lines.append(app.to_text())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# semantics


def compose_unitary(c: Circuit) -> Matrix:
    u = Matrix.identity(3 ** c.width)
    for app in c.apps:
        u = embed_gate(c.width, app) @ u
    return u


def qc3(c: Circuit, ignore_identity: bool = False) -> CostReport:
    one = two = 0
    for app in c.apps:
        if ignore_identity and app.kind is GateKind.I3:
            continue
        if app.is_controlled:
            two += 1
        else:
            one += 1
    return CostReport(one, two)


def invert_circuit(c: Circuit) -> Circuit:
    return Circuit(c.width, tuple(app.dagger() for app in reversed(c.apps)))


def _next_on_wires(apps: Sequence[GateApplication | None], i: int, wires: frozenset[int]) -> int | None:
    for j in range(i + 1, len(apps)):
        other = apps[j]
        if other is not None and other.wires & wires:
            return j
    return None


def _cancel_once(apps: list[GateApplication | None]) -> bool:
    for i, app in enumerate(apps):
        if app is None:
            continue
        j = _next_on_wires(apps, i, app.wires)
        if j is None:
            continue
        nxt = apps[j]
        if nxt.placement() != app.placement():
            continue
        if nxt.kind is app.kind.dagger:
            _drop(apps, (i, j))
            return True
        if app.kind.is_diagonal_phase and nxt.kind is app.kind:
            k = _next_on_wires(apps, j, app.wires)
            if k is not None and apps[k].kind is app.kind and apps[k].placement() == app.placement():
                _drop(apps, (i, j, k))
                return True
    return False


def _drop(apps: list[GateApplication | None], idx: Iterable[int]) -> None:
    idx = sorted(idx)
    label = next((apps[i].stage for i in idx if apps[i].stage is not None), None)
    for i in idx:
        apps[i] = None
    if label is None:
        return
    # a removed stage marker moves onto the next surviving gate
    for j in range(idx[0] + 1, len(apps)):
        if apps[j] is not None:
            if apps[j].stage is None:
                apps[j] = replace(apps[j], stage=label)
            return


def cancel_inverses(c: Circuit) -> Circuit:
    """Remove adjacent X/X-dagger pairs and Z3 (or Z3+) triples until fixpoint.

    Adjacency is per wire: gates touching neither wire may sit in between.
    """
    apps: list[GateApplication | None] = list(c.apps)
    while _cancel_once(apps):
        apps = [a for a in apps if a is not None]
    return Circuit(c.width, tuple(a for a in apps if a is not None))


# ---------------------------------------------------------------------------
# matrix JSON


def matrix_to_json(m: Matrix) -> dict:
    entries = []
    floats = []
    for i in range(m.dim):
        row, frow = [], []
        for j in range(m.dim):
            x = m.item((i, j))
            row.append({"a": x.a, "b": x.b, "c": x.c, "d": x.d, "k": x.k})
            re_, im_ = amp_to_float(x)
            frow.append([re_, im_])
        entries.append(row)
        floats.append(frow)
    return {"dim": m.dim, "entries": entries, "float": floats}


def matrix_from_json(data: dict | str) -> Matrix:
    if isinstance(data, str):
        data = json.loads(data)
    dim = int(data["dim"])
    rows = data["entries"]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValueError("entries do not match dim")
    return Matrix.from_rows(
        [[ExactAmplitude(e["a"], e["b"], e["c"], e["d"], e["k"]) for e in row] for row in rows]
    )
