"""GF3 search: minimal depth per control-value pool, plus a 10-gate solution."""

import argparse
from pathlib import Path

from tqg.circuit import format_circuit
from tqg.config import GF3SearchConfig
from tqg.synthesis import parse_edges, synthesize_gf3


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "circuits"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)

    for values in [(2,), (1,), (0, 2), (1, 2), (0, 1, 2)]:
        cfg = GF3SearchConfig(control_values=values, workers=args.workers)
        r = synthesize_gf3(cfg.control_values, cfg.depth, cfg.workers, edges=parse_edges(cfg.edges))
        depth = len(r.circuit) if r.circuit is not None else None
        print(f"values {values}: minimal depth {depth}, nodes {r.result.stats.nodes}")

    base = GF3SearchConfig(workers=args.workers)
    best = synthesize_gf3(base.control_values, base.depth, base.workers).circuit
    ten = synthesize_gf3(base.control_values, base.depth, base.workers, exact_count=10).circuit
    (out / "gf3_min.tqc").write_text("# minimal-depth GF3, control values 1,2\n" + format_circuit(best))
    (out / "gf3_10.tqc").write_text("# GF3 with exactly ten controlled gates\n" + format_circuit(ten))
    print(format_circuit(ten), end="")


if __name__ == "__main__":
    main()
