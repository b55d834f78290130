"""Multi-qutrit targets (SWAP, GF3) and the searches that realize them.

Two-qutrit basis states are written ``|q_b q_a>`` with q_b on wire 0 (the
more-significant digit). GF3 wires are a = 0, b = 1, c = 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Sequence

from .circuit import Circuit, GateApplication, compose_unitary
from .exact import ONE, ZERO, ExactAmplitude, Matrix, omega_power
from .gates import GateKind
from .search import Found, NotFoundAtDepth, SearchEngine, SynthesisSpec, synthesize, verify_connectivity
from .simulator import StateVector, digits_to_index, index_to_digits, init_basis_state, run

K = GateKind

# ---------------------------------------------------------------------------
# targets


def swap_target() -> Matrix:
    """|q_b q_a> -> |q_a q_b> as a 9x9 permutation."""
    return Matrix.permutation([3 * (x % 3) + x // 3 for x in range(9)])


# Marquand charts, row operand first
MULT3 = ((0, 0, 0), (0, 1, 2), (0, 2, 1))
ADD3 = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


def gf3_value(a: int, b: int, c: int) -> int:
    return ADD3[MULT3[a][b]][c]


def gf3_target(fixed_c: int | None = None) -> Matrix | dict[tuple[int, int], int]:
    """|a,b,c> -> |a,b,(a*b)+c> over GF(3).

    With ``fixed_c`` the classical output column ``{(a, b): f}`` is returned
    instead; ``fixed_c=0`` is the Toffoli-style product.
    """
    if fixed_c is not None:
        if fixed_c not in (0, 1, 2):
            raise ValueError(f"fixed_c must be 0, 1 or 2, got {fixed_c!r}")
        return {(a, b): gf3_value(a, b, fixed_c) for a in range(3) for b in range(3)}
    images = [digits_to_index((a, b, gf3_value(a, b, c))) for a, b, c in itertools.product(range(3), repeat=3)]
    return Matrix.permutation(images)


# ---------------------------------------------------------------------------
# stage table for SWAP

STAGE_NAMES = ("entanglement", "un-entanglement", "state correction", "phase correction")

# each cell: terms (omega power, |q_b q_a> digits); entangled cells carry 1/sqrt3
STAGE_TABLE: dict[str, tuple[tuple[tuple[int, str], ...], ...]] = {
    "00": (((0, "00"), (0, "11"), (0, "22")), ((0, "00"),), ((0, "00"),), ((0, "00"),)),
    "01": (((0, "00"), (1, "11"), (2, "22")), ((0, "10"),), ((0, "10"),), ((0, "10"),)),
    "02": (((0, "00"), (2, "11"), (1, "22")), ((0, "20"),), ((0, "20"),), ((0, "20"),)),
    "10": (((0, "10"), (0, "21"), (0, "02")), ((0, "02"),), ((0, "01"),), ((0, "01"),)),
    "11": (((0, "10"), (1, "21"), (2, "02")), ((2, "12"),), ((2, "11"),), ((0, "11"),)),
    "12": (((0, "10"), (2, "21"), (1, "02")), ((1, "22"),), ((1, "21"),), ((0, "21"),)),
    "20": (((0, "20"), (0, "01"), (0, "12")), ((0, "01"),), ((0, "02"),), ((0, "02"),)),
    "21": (((0, "20"), (1, "01"), (2, "12")), ((1, "11"),), ((1, "12"),), ((0, "12"),)),
    "22": (((0, "20"), (2, "01"), (1, "12")), ((2, "21"),), ((2, "22"),), ((0, "22"),)),
}


def _cell_state(terms) -> StateVector:
    amps = [ZERO] * 9
    scale = ONE if len(terms) == 1 else ExactAmplitude(0, 0, 1, 0, 1)
    for power, digits in terms:
        amps[digits_to_index([int(ch) for ch in digits])] = omega_power(power) * scale
    return StateVector.from_amplitudes(amps)


def stage_table_states() -> dict[str, list[StateVector]]:
    """The four printed states per initial basis state, normalized."""
    return {init: [_cell_state(cell) for cell in row] for init, row in STAGE_TABLE.items()}


def _columns_matrix(columns: Sequence[StateVector]) -> Matrix:
    rows = [[columns[j].item(i) for j in range(9)] for i in range(9)]
    return Matrix.from_rows(rows)


@dataclass(frozen=True)
class StageMaps:
    ent: Matrix
    unent: Matrix
    state: Matrix
    phase: Matrix

    def ordered(self) -> tuple[Matrix, Matrix, Matrix, Matrix]:
        return (self.ent, self.unent, self.state, self.phase)

    def cumulative(self) -> list[Matrix]:
        """Products after stages 1, 2, 3 and 4."""
        out, acc = [], Matrix.identity(9)
        for m in self.ordered():
            acc = m @ acc
            out.append(acc)
        return out

    def composed(self) -> Matrix:
        return self.cumulative()[-1]


def stage_maps_from_table2() -> StageMaps:
    states = stage_table_states()
    inits = [index_to_digits(x, 2) for x in range(9)]
    cols = [_columns_matrix([states[i][s] for i in inits]) for s in range(4)]
    maps, prev = [], Matrix.identity(9)
    for cum in cols:
        maps.append(cum @ prev.dagger())
        prev = cum
    result = StageMaps(*maps)
    # transcription checks
    for name, m in zip(STAGE_NAMES, result.ordered()):
        if not m.is_unitary():
            raise AssertionError(f"{name} stage map is not unitary")
    if result.composed() != swap_target():
        raise AssertionError("stage maps do not compose to the SWAP permutation")
    return result


# ---------------------------------------------------------------------------
# pools


def swap_pool() -> tuple[GateApplication, ...]:
    """One-qutrit {CH, CH+, 01, 02, 12} on both wires, then controlled shifts both ways."""
    pool = [GateApplication(kind, w) for kind in (K.CH, K.CHdag, K.P01, K.P02, K.P12) for w in (0, 1)]
    for kind in (K.SHIFT1, K.SHIFT2):
        for c in (0, 1):
            for v in (0, 1, 2):
                pool.append(GateApplication(kind, 1 - c, c, v))
    return tuple(pool)


GF3_EDGES = frozenset({(0, 2), (1, 2)})
GF3_KINDS = (K.P01, K.P02, K.P12, K.SHIFT1, K.SHIFT2)


def gf3_pool(control_values: Sequence[int] = (1, 2), kinds: Sequence[GateKind] = GF3_KINDS,
             controls: Sequence[int] = (0, 1)) -> tuple[GateApplication, ...]:
    values = sorted(set(control_values))
    if not values or any(v not in (0, 1, 2) for v in values):
        raise ValueError(f"control values must be a non-empty subset of 0,1,2, got {control_values!r}")
    return tuple(GateApplication(k, 2, c, v) for k in kinds for c in controls for v in values)


def parse_pool(text: str) -> tuple[GateApplication, ...]:
    """Semicolon-separated gate lines, e.g. ``C+1[v=2] q0 -> q2; 12 q1``."""
    from .circuit import parse_gate_line

    items = [part.strip() for part in text.split(";") if part.strip()]
    if not items:
        raise ValueError("pool specification is empty")
    return tuple(parse_gate_line(item, n) for n, item in enumerate(items, start=1))


def parse_edges(text: str) -> frozenset[tuple[int, int]]:
    """``a-c,b-c`` or ``0-2,1-2``; each pair is (control, target)."""
    names = {"a": 0, "b": 1, "c": 2}
    edges = set()
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        ends = item.split("-")
        if len(ends) != 2:
            raise ValueError(f"malformed edge {item!r}")
        pair = []
        for end in ends:
            end = end.strip().lower()
            if end in names:
                pair.append(names[end])
            elif end.lstrip("q").isdigit():
                pair.append(int(end.lstrip("q")))
            else:
                raise ValueError(f"unknown wire {end!r} in edge {item!r}")
        edges.add(tuple(pair))
    return frozenset(edges)


# ---------------------------------------------------------------------------
# SWAP synthesis and stage alignment

SWAP_COUNTS = (3, 6)


def swap_spec(pool: Sequence[GateApplication] | None = None, counts: tuple[int, int] | None = SWAP_COUNTS,
              depth: int = 9) -> SynthesisSpec:
    return SynthesisSpec(swap_target(), 2, tuple(pool or swap_pool()), depth_budget=depth, counts=counts)


def align_with_stage_table(c: Circuit, maps: StageMaps | None = None) -> tuple[int, int, int] | None:
    """First gate index of stages 2, 3 and 4 such that every prefix matches, or None.

    Each stage must hold at least one gate. Ties pick the earliest boundaries.
    """
    maps = maps or stage_maps_from_table2()
    cums = maps.cumulative()
    prefixes = [Matrix.identity(9)]
    from .gates import embed_gate

    for app in c.apps:
        prefixes.append(embed_gate(2, app) @ prefixes[-1])
    if prefixes[-1] != cums[3]:
        return None
    hits = [[i for i in range(1, len(prefixes) - 1) if prefixes[i] == cums[s]] for s in range(3)]
    for i in hits[0]:
        for j in hits[1]:
            if j <= i:
                continue
            for k in hits[2]:
                if k > j:
                    return (i, j, k)
    return None


def label_stages(c: Circuit, bounds: tuple[int, int, int]) -> Circuit:
    starts = dict(zip((0, *bounds), STAGE_NAMES))
    apps = tuple(replace(a, stage=starts.get(n)) for n, a in enumerate(c.unlabeled().apps))
    return Circuit(c.width, apps)


def stage_table_mismatches(c: Circuit) -> list[str]:
    """Cells of the stage table a stage-labelled circuit fails to reproduce."""
    expected = stage_table_states()
    problems = []
    for init, cells in expected.items():
        snaps = [s for label, s in run(c, init_basis_state(init)) if label is not None]
        if len(snaps) != 4:
            problems.append(f"|{init}>: circuit has {len(snaps)} stage snapshots, need 4")
            continue
        for name, got, want in zip(STAGE_NAMES, snaps, cells):
            if got != want:
                problems.append(f"|{init}> {name}")
    return problems


@dataclass
class StageOptions:
    """Achievable (one-qutrit, two-qutrit) counts for one stage map, with lex-least words."""

    name: str
    words: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    def min_ones(self) -> int | None:
        return min((n1 for n1, _ in self.words), default=None)

    def min_length(self) -> int | None:
        return min((n1 + n2 for n1, n2 in self.words), default=None)


@dataclass
class AlignmentCertificate:
    """Exhaustive per-stage search over the SWAP pool.

    ``feasible`` lists per-stage count splits summing to ``counts``; empty
    means no circuit with those counts can be aligned with the stage table.
    """

    counts: tuple[int, int]
    max_stage_length: int
    stages: list[StageOptions]
    feasible: list[tuple[tuple[int, int], ...]]

    @property
    def aligned_exists(self) -> bool:
        return bool(self.feasible)

    def cheapest(self, pool: Sequence[GateApplication]) -> Circuit | None:
        """Shortest aligned circuit from per-stage minimal words (stage-labelled)."""
        pieces = []
        for st in self.stages:
            if not st.words:
                return None
            n = st.min_length()
            pieces.append(min(w for (n1, n2), w in st.words.items() if n1 + n2 == n))
        apps, bounds = [], []
        for word in pieces:
            bounds.append(len(apps))
            apps.extend(pool[i] for i in word)
        return label_stages(Circuit(2, tuple(apps)), tuple(bounds[1:]))

    def describe(self) -> str:
        lines = []
        for st in self.stages:
            splits = ", ".join(f"{a}+{b}" for a, b in sorted(st.words)) or "none"
            lines.append(f"{st.name}: min one-qutrit {st.min_ones()}, min length {st.min_length()}; splits {splits}")
        if self.feasible:
            lines.append(f"{len(self.feasible)} count assignment(s) reach {self.counts[0]}+{self.counts[1]}")
        else:
            need = sum(st.min_ones() or 0 for st in self.stages)
            lines.append(f"no 4-stage alignment exists with {self.counts[0]} one-qutrit and {self.counts[1]} "
                         f"two-qutrit gates: the stages need at least {need} one-qutrit gates")
        return "\n".join(lines)


def alignment_certificate(counts: tuple[int, int] = SWAP_COUNTS, pool: Sequence[GateApplication] | None = None,
                          workers: int = 1, engine: SearchEngine | None = None) -> AlignmentCertificate:
    """Search every stage map for every count split within ``counts``.

    Each stage needs at least one gate, so stage lengths are bounded by
    ``sum(counts) - 3``.
    """
    pool = tuple(pool or swap_pool())
    maps = stage_maps_from_table2()
    max_len = sum(counts) - 3
    if engine is None:
        engine = SearchEngine(pool, 2, list(maps.ordered()), caps=counts)
    stages = []
    for name, m in zip(STAGE_NAMES, maps.ordered()):
        opts = StageOptions(name)
        for length in range(1, max_len + 1):
            for n1, word in engine.search_length(m, length, workers=workers).items():
                opts.words[(n1, length - n1)] = word
        stages.append(opts)
    feasible = []
    for combo in itertools.product(*[sorted(st.words) for st in stages]):
        if tuple(map(sum, zip(*combo))) == tuple(counts):
            feasible.append(combo)
    return AlignmentCertificate(tuple(counts), max_len, stages, feasible)


@dataclass
class SwapReport:
    result: Found | NotFoundAtDepth
    alignment: tuple[int, int, int] | None
    certificate: AlignmentCertificate | None = None

    @property
    def circuit(self) -> Circuit | None:
        return self.result.circuit if self.result.found else None


def synthesize_swap(workers: int = 1, pool: Sequence[GateApplication] | None = None,
                    counts: tuple[int, int] | None = SWAP_COUNTS, depth: int = 9,
                    certify: bool = False) -> SwapReport:
    """Lex-least SWAP circuit with the given counts, then stage alignment.

    A found circuit that aligns comes back stage-labelled. With ``certify``
    the exhaustive per-stage search is attached.
    """
    spec = swap_spec(pool, counts, depth)
    result = synthesize(spec, workers=workers)
    bounds = None
    if result.found:
        bounds = align_with_stage_table(result.circuit)
        if bounds is not None:
            result = Found(label_stages(result.circuit, bounds), result.stats)
    cert = None
    if certify and counts is not None:
        cert = alignment_certificate(counts, spec.pool, workers=workers)
    return SwapReport(result, bounds, cert)


# ---------------------------------------------------------------------------
# GF3 synthesis

GF3_EXTENSION_VALUES = (0, 1, 2)


def gf3_spec(control_values: Sequence[int] = (1, 2), depth: int = 10, pool: Sequence[GateApplication] | None = None,
             edges: frozenset | None = GF3_EDGES, counts: tuple[int, int] | None = None) -> SynthesisSpec:
    return SynthesisSpec(gf3_target(), 3, tuple(pool or gf3_pool(control_values)), depth_budget=depth,
                         counts=counts, edges=edges)


@dataclass
class GF3Report:
    result: Found | NotFoundAtDepth
    pool_values: tuple[int, ...]
    extension: Found | NotFoundAtDepth | None = None
    extension_values: tuple[int, ...] | None = None

    @property
    def circuit(self) -> Circuit | None:
        return self.result.circuit if self.result.found else None

    def values_used(self) -> tuple[int, ...]:
        c = self.circuit or (self.extension.circuit if self.extension and self.extension.found else None)
        if c is None:
            return ()
        return tuple(sorted({a.value for a in c.apps if a.control is not None}))


def synthesize_gf3(control_values: Sequence[int] = (1, 2), depth: int = 10, workers: int = 1,
                   pool: Sequence[GateApplication] | None = None, edges: frozenset | None = GF3_EDGES,
                   exact_count: int | None = None) -> GF3Report:
    """Minimal-depth GF3 realization; on failure, retry with control values {0,1,2}.

    ``exact_count`` asks for exactly that many two-qutrit gates instead of
    the minimal depth.
    """
    counts = (0, exact_count) if exact_count is not None else None
    spec = gf3_spec(control_values, depth, pool, edges, counts)
    result = synthesize(spec, workers=workers)
    if result.found and edges is not None and not verify_connectivity(result.circuit, edges):
        raise AssertionError("GF3 solution violates connectivity")
    report = GF3Report(result, tuple(sorted(set(control_values))))
    if not result.found and pool is None and tuple(sorted(set(control_values))) != GF3_EXTENSION_VALUES:
        ext = gf3_spec(GF3_EXTENSION_VALUES, depth, None, edges, counts)
        report.extension = synthesize(ext, workers=workers)
        report.extension_values = GF3_EXTENSION_VALUES
    return report


def gf3_truth_table(c: Circuit) -> dict[tuple[int, int, int], tuple[int, int, int]]:
    """Classical action of a permutation circuit on the 27 basis states."""
    images = compose_unitary(c).permutation_images()
    if images is None:
        raise ValueError("circuit is not a permutation")
    out = {}
    for x, y in enumerate(images):
        out[tuple(int(ch) for ch in index_to_digits(x, 3))] = tuple(int(ch) for ch in index_to_digits(y, 3))
    return out
