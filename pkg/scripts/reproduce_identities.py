"""Print every gate identity and decomposition check with its exact verdict."""

from tqg.circuit import Circuit, GateApplication, compose_unitary
from tqg.gates import GateKind, controlled_matrix, gate_matrix
from tqg.transpiler import DECOMPOSABLE, Postulate, decompose_controlled, decompose_gate, reset_cost
from tqg.transpiler import verify_decomposition

K = GateKind


def line(name: str, ok: bool) -> None:
    print(f"{'ok ' if ok else 'BAD'} {name}")


def one(*kinds):
    return compose_unitary(Circuit(1, tuple(GateApplication(k, 0) for k in kinds)))


def main() -> None:
    i3 = gate_matrix(K.I3)
    line("CH = Z3 TSG1 Z3", one(K.Z3, K.TSG1, K.Z3) == gate_matrix(K.CH))
    line("CH = Z3 TSG2 Z3+", one(K.Z3, K.TSG2, K.Z3dag) == gate_matrix(K.CH))
    line("CH = TSG3 Z3", one(K.TSG3, K.Z3) == gate_matrix(K.CH))
    line("CH+ = Z3 TSG2+ Z3+", one(K.Z3, K.TSG2dag, K.Z3dag) == gate_matrix(K.CHdag))
    line("CH^4 = I", one(K.CH, K.CH, K.CH, K.CH) == i3)
    line("TSG2^4 = I", one(K.TSG2, K.TSG2, K.TSG2, K.TSG2) == i3)
    for t in ("four_gate", "two_gate"):
        print(f"    reset {t}: {reset_cost(t)}")
    for p in Postulate:
        for kind in DECOMPOSABLE:
            c = decompose_gate(kind, p)
            res = verify_decomposition(c, gate_matrix(kind))
            print(f"    {kind.mnemonic:3} under {p.value:3}: {len(c)} gates, {res.describe()}")
    for p in Postulate:
        for kind in DECOMPOSABLE:
            for mode in ("faithful", "strict"):
                c = decompose_controlled(kind, p, mode)
                res = verify_decomposition(c, controlled_matrix(kind, 2))
                print(f"    C{kind.mnemonic:3} under {p.value:3} {mode:8}: {len(c):2} gates, {res.describe()}")


if __name__ == "__main__":
    main()
