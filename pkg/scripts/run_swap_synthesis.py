"""Search the SWAP pool, certify stage alignment, and write the circuits."""

import argparse
from pathlib import Path

from tqg.circuit import format_circuit, qc3
from tqg.config import SwapSearchConfig
from tqg.synthesis import swap_pool, synthesize_swap, stage_table_mismatches


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "circuits"))
    args = ap.parse_args()
    cfg = SwapSearchConfig(workers=args.workers)
    out = Path(args.out)
    out.mkdir(exist_ok=True)

    report = synthesize_swap(cfg.workers, counts=cfg.counts, depth=cfg.depth, certify=cfg.certify)
    c = report.circuit
    print(format_circuit(c), end="")
    print(qc3(c), "| stats:", report.result.stats)
    print("alignment:", report.alignment)
    print(report.certificate.describe())
    (out / "swap_3_6.tqc").write_text("# lexicographically least 3+6 SWAP over the default pool\n" + format_circuit(c))

    aligned = report.certificate.cheapest(swap_pool())
    print(format_circuit(aligned), end="")
    print(qc3(aligned), "| stage table mismatches:", stage_table_mismatches(aligned))
    (out / "swap_aligned.tqc").write_text("# cheapest SWAP passing through every stage-table state\n"
                                          + format_circuit(aligned))


if __name__ == "__main__":
    main()
