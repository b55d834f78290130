"""Command-line entry point: ``tqg <subcommand>``.

Exit codes: 0 exact or found, 1 mismatch or not found, 2 usage or parse
error, 3 branch defect.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .circuit import Circuit, compose_unitary, format_circuit, matrix_from_json, matrix_to_json
from .circuit import parse_circuit, parse_gate_line, qc3
from .exact import Matrix, render_matrix
from .gates import DESCRIPTIONS, GateKind, controlled_matrix, embed_gate, gate_matrix
from .simulator import format_state, init_basis_state, probabilities, run, state_to_json
from .transpiler import Postulate, Verdict, decompose_controlled, decompose_gate, verify_decomposition

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEFECT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _color(text: str, code: str) -> str:
    if os.environ.get("TQG_COLOR", "0") != "1":
        return text
    return f"\033[{code}m{text}\033[0m"


def _verdict_text(text: str, verdict: Verdict) -> str:
    codes = {Verdict.EXACT: "32", Verdict.GLOBAL_PHASE: "33", Verdict.BRANCH_DEFECT: "33", Verdict.MISMATCH: "31"}
    return _color(text, codes[verdict])


def _exit_for(verdict: Verdict) -> int:
    if verdict is Verdict.EXACT:
        return EXIT_OK
    if verdict is Verdict.BRANCH_DEFECT:
        return EXIT_DEFECT
    return EXIT_FAIL


def _emit(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def _load_circuit(path: str) -> Circuit:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_circuit(text)


def _kind(name: str) -> GateKind:
    try:
        return GateKind.from_mnemonic(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _target_matrix(spec: str, width: int, controlled: bool, value: int) -> Matrix:
    from .synthesis import gf3_target, swap_target

    if spec == "swap":
        return swap_target()
    if spec == "gf3":
        return gf3_target()
    if spec.endswith(".json") or Path(spec).is_file():
        try:
            return matrix_from_json(Path(spec).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot load matrix {spec}: {exc}") from None
    if " q" in spec:
        app = parse_gate_line(spec)
        return embed_gate(width, app)
    kind = _kind(spec)
    if controlled:
        return controlled_matrix(kind, value)
    return gate_matrix(kind)


# ---------------------------------------------------------------------------
# subcommands


def cmd_gates(args) -> int:
    if args.name is None:
        if args.json:
            _emit({k.mnemonic: DESCRIPTIONS[k] for k in GateKind})
        else:
            for k in GateKind:
                print(f"{k.mnemonic:6} {DESCRIPTIONS[k]}")
        return EXIT_OK
    kind = _kind(args.name)
    m = gate_matrix(kind)
    if args.json:
        _emit(matrix_to_json(m))
        return EXIT_OK
    print(f"{kind.mnemonic}: {DESCRIPTIONS[kind]}")
    print(render_matrix(m))
    print()
    print(render_matrix(m, floats=True))
    return EXIT_OK


def cmd_compose(args) -> int:
    c = _load_circuit(args.circuit)
    u = compose_unitary(c)
    if args.json:
        _emit(matrix_to_json(u))
    else:
        print(render_matrix(u, floats=args.floats))
    return EXIT_OK


def cmd_verify(args) -> int:
    c = _load_circuit(args.circuit)
    target = _target_matrix(args.target, c.width, args.controlled, args.value)
    if target.dim != 3 ** c.width:
        raise UsageError(f"target dimension {target.dim} does not match a {c.width}-qutrit circuit")
    res = verify_decomposition(c, target)
    if args.json:
        _emit({"verdict": res.verdict.value, "detail": res.describe()})
    else:
        print(_verdict_text(res.describe(), res.verdict))
    return _exit_for(res.verdict)


def cmd_decompose(args) -> int:
    kind = _kind(args.gate)
    p = Postulate.parse(args.postulate)
    if args.controlled:
        c = decompose_controlled(kind, p, args.mode)
        target = controlled_matrix(kind, 2)
    else:
        c = decompose_gate(kind, p)
        target = gate_matrix(kind)
    res = verify_decomposition(c, target)
    cost = qc3(c)
    if args.json:
        _emit({"circuit": format_circuit(c), "one_qutrit": cost.one_qutrit, "two_qutrit": cost.two_qutrit,
               "total": cost.total, "verdict": res.verdict.value, "detail": res.describe()})
    else:
        print(format_circuit(c), end="")
        print(f"# {cost}")
        print("# " + _verdict_text(res.describe(), res.verdict))
    return _exit_for(res.verdict)


def cmd_simulate(args) -> int:
    c = _load_circuit(args.circuit)
    try:
        init = init_basis_state(args.init)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if init.width != c.width:
        raise UsageError(f"init has {init.width} digits but the circuit has {c.width} qutrits")
    snaps = run(c, init)
    stages, final = snaps[:-1], snaps[-1][1]
    if args.json:
        data = {"final": state_to_json(final)}
        if args.snapshots:
            data["stages"] = [{"stage": label, "state": state_to_json(s)} for label, s in stages]
        if args.probabilities:
            data["probabilities"] = [str(p) for p in probabilities(final)]
        _emit(data)
        return EXIT_OK
    if args.snapshots:
        for label, s in stages:
            print(f"== stage {label}")
            print(format_state(s))
    print("== final")
    print(format_state(final))
    if args.probabilities:
        print("== probabilities")
        for i, p in enumerate(probabilities(final)):
            if p:
                from .simulator import index_to_digits

                print(f"|{index_to_digits(i, c.width)}⟩: {p}")
    return EXIT_OK


def cmd_cost(args) -> int:
    c = _load_circuit(args.circuit)
    cost = qc3(c, ignore_identity=args.ignore_identity)
    if args.json:
        _emit({"one_qutrit": cost.one_qutrit, "two_qutrit": cost.two_qutrit, "total": cost.total})
    else:
        print(f"one-qutrit {cost.one_qutrit}")
        print(f"two-qutrit {cost.two_qutrit}")
        print(f"total {cost.total}")
    return EXIT_OK


def _stats_lines(stats, timing: bool) -> list[str]:
    lines = [f"# search: backend {stats.backend}, nodes {stats.nodes}, table size {stats.table_size}, "
             f"depth {stats.depth}"]
    if timing:
        lines.append(f"# wall time {stats.elapsed:.2f} s")
    return lines


def _parse_values(text: str) -> tuple[int, ...]:
    try:
        values = tuple(sorted({int(v) for v in text.split(",") if v.strip()}))
    except ValueError:
        raise UsageError(f"bad control values {text!r}") from None
    if not values or any(v not in (0, 1, 2) for v in values):
        raise UsageError(f"control values must be drawn from 0,1,2, got {text!r}")
    return values


def cmd_synthesize(args) -> int:
    from . import synthesis as syn

    pool = None
    if args.pool:
        try:
            pool = syn.parse_pool(args.pool)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.target == "swap":
        return _synth_swap(args, pool)
    return _synth_gf3(args, pool)


def _synth_swap(args, pool) -> int:
    from . import synthesis as syn

    depth = args.depth if args.depth is not None else 9
    if args.aligned:
        cert = syn.alignment_certificate(workers=args.workers)
        c = cert.cheapest(syn.swap_pool())
        print(f"# {cert.describe()}".replace("\n", "\n# "))
        if c is None:
            return EXIT_FAIL
        print(format_circuit(c), end="")
        res = verify_decomposition(c, syn.swap_target())
        print(f"# {qc3(c)}")
        print("# verification: " + _verdict_text(res.describe(), res.verdict))
        bad = syn.stage_table_mismatches(c)
        print(f"# stage table: {'all 36 cells reproduced' if not bad else ', '.join(bad)}")
        return _exit_for(res.verdict)
    counts = None if args.any_counts else syn.SWAP_COUNTS
    if counts is not None and sum(counts) > depth:
        raise UsageError(f"depth {depth} is below the {sum(counts)} gates the count constraint needs")
    report = syn.synthesize_swap(args.workers, pool, counts, depth, certify=args.certify)
    if not report.result.found:
        print(f"# no circuit found up to depth {depth}")
        for line in _stats_lines(report.result.stats, args.timing):
            print(line)
        return EXIT_FAIL
    c = report.circuit
    res = verify_decomposition(c, syn.swap_target())
    if args.json:
        _emit({"circuit": format_circuit(c), "verdict": res.verdict.value, "alignment": report.alignment,
               "one_qutrit": qc3(c).one_qutrit, "two_qutrit": qc3(c).two_qutrit})
        return _exit_for(res.verdict)
    print(format_circuit(c), end="")
    print(f"# {qc3(c)}")
    print("# verification: " + _verdict_text(res.describe(), res.verdict))
    if report.alignment is None:
        print("# stage alignment: this circuit admits no 4-stage prefix alignment with the stage table")
    else:
        print(f"# stage alignment: boundaries at gates {report.alignment}")
    if report.certificate is not None:
        print("# " + report.certificate.describe().replace("\n", "\n# "))
    for line in _stats_lines(report.result.stats, args.timing):
        print(line)
    return _exit_for(res.verdict)


def _synth_gf3(args, pool) -> int:
    from . import synthesis as syn

    values = _parse_values(args.control_values)
    depth = args.depth if args.depth is not None else 10
    try:
        edges = syn.parse_edges(args.edges) if args.edges else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        report = syn.synthesize_gf3(values, depth, args.workers, pool, edges, args.exact_count)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"# pool control values {','.join(map(str, report.pool_values))}")
    if not report.result.found:
        print(f"# no circuit found at depth <= {depth} for this pool (exhaustive)")
        for line in _stats_lines(report.result.stats, args.timing):
            print(line)
        ext = report.extension
        if ext is None or not ext.found:
            return EXIT_FAIL
        print(f"# extension pool control values {','.join(map(str, report.extension_values))}: "
              f"minimal depth {len(ext.circuit)}")
        c = ext.circuit
    else:
        c = report.circuit
    res = verify_decomposition(c, syn.gf3_target())
    print(format_circuit(c), end="")
    print(f"# {qc3(c)}")
    print(f"# control values used {','.join(map(str, report.values_used()))}")
    print("# verification: " + _verdict_text(res.describe(), res.verdict))
    if edges is not None:
        print(f"# connectivity respected: {syn.verify_connectivity(c, edges)}")
    if report.result.found:
        for line in _stats_lines(report.result.stats, args.timing):
            print(line)
        return _exit_for(res.verdict)
    return EXIT_FAIL


def cmd_swap_stages(args) -> int:
    from .synthesis import STAGE_NAMES, stage_maps_from_table2, swap_target

    maps = stage_maps_from_table2()
    if args.json:
        _emit({name: matrix_to_json(m) for name, m in zip(STAGE_NAMES, maps.ordered())})
        return EXIT_OK
    for name, m in zip(STAGE_NAMES, maps.ordered()):
        print(f"== {name}")
        print(render_matrix(m, floats=args.floats))
    ok = maps.composed() == swap_target()
    print(f"== composition equals SWAP: {_color(str(ok), '32' if ok else '31')}")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tqg", description="Exact qutrit gates, transpiler, simulator, synthesizer.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gates", help="gate catalog or one gate matrix")
    p.add_argument("name", nargs="?")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gates)

    p = sub.add_parser("compose", help="exact unitary of a circuit file")
    p.add_argument("circuit")
    p.add_argument("--floats", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("verify", help="classify a circuit against a target")
    p.add_argument("circuit")
    p.add_argument("target", help="mnemonic, gate line, matrix JSON file, swap or gf3")
    p.add_argument("--controlled", action="store_true", help="compare with the controlled form of the mnemonic")
    p.add_argument("--value", type=int, default=2, choices=(0, 1, 2))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decompose", help="lower a gate to a native set")
    p.add_argument("gate")
    p.add_argument("--postulate", default="II")
    p.add_argument("--controlled", action="store_true")
    p.add_argument("--mode", default="faithful", choices=("faithful", "strict"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", help="exact state-vector simulation")
    p.add_argument("circuit")
    p.add_argument("--init", required=True, help="basis digits, qutrit 0 first")
    p.add_argument("--snapshots", action="store_true")
    p.add_argument("--probabilities", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("cost", help="QC3 gate counts")
    p.add_argument("circuit")
    p.add_argument("--ignore-identity", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("synthesize", help="search for a SWAP or GF3 circuit")
    p.add_argument("target", choices=("swap", "gf3"))
    p.add_argument("--depth", type=int)
    p.add_argument("--control-values", default="1,2")
    p.add_argument("--pool", help="semicolon-separated gate lines")
    p.add_argument("--edges", default="a-c,b-c")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--aligned", action="store_true", help="swap: cheapest circuit aligned with the stage table")
    p.add_argument("--certify", action="store_true", help="swap: exhaustive stage-alignment certificate")
    p.add_argument("--any-counts", action="store_true", help="swap: drop the 3+6 count constraint")
    p.add_argument("--exact-count", type=int, help="gf3: exact number of two-qutrit gates")
    p.add_argument("--timing", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("swap-stages", help="the four stage unitaries of the SWAP table")
    p.add_argument("--floats", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_swap_stages)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "workers", 1) is not None and getattr(args, "workers", 1) < 1:
        print("tqg: error: --workers must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"tqg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
