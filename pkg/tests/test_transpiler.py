import pytest

from tqg.circuit import Circuit, GateApplication, compose_unitary
from tqg.exact import Matrix, OMEGA
from tqg.gates import GateKind, controlled_matrix, gate_matrix
from tqg.transpiler import (DECOMPOSABLE, Postulate, Verdict, decompose_controlled, decompose_gate, reset_circuit,
                            reset_cost, verify_decomposition)

K = GateKind
P = Postulate


def kinds(c):
    return [a.kind for a in c.apps]


def test_ch_examples():
    assert kinds(decompose_gate(K.CH, "II")) == [K.Z3, K.TSG2, K.Z3dag]
    assert kinds(decompose_gate(K.CH, P.III)) == [K.TSG3, K.Z3]
    assert kinds(decompose_gate(K.CH, P.I)) == [K.Z3, K.TSG1, K.Z3]


def test_p01_postulate_two_cancels_to_five():
    c = decompose_gate(K.P01, P.II)
    assert kinds(c) == [K.Z3, K.TSG2, K.Z3dag, K.TSG2, K.Z3dag]
    assert compose_unitary(c) == gate_matrix(K.P01)


@pytest.mark.parametrize("p", list(Postulate), ids=lambda p: p.value)
@pytest.mark.parametrize("kind", DECOMPOSABLE, ids=lambda k: k.mnemonic)
def test_every_decomposition_exact_and_native(kind, p):
    c = decompose_gate(kind, p)
    assert verify_decomposition(c, gate_matrix(kind)).is_exact
    assert {a.kind for a in c.apps} <= p.native_with_inverses


@pytest.mark.parametrize("p", [P.I, P.III], ids=lambda p: p.value)
def test_forward_gates_use_strict_native_set(p):
    for kind in (K.CH, K.P01, K.P02, K.P12, K.SHIFT1, K.SHIFT2):
        assert {a.kind for a in decompose_gate(kind, p).apps} <= p.native


def test_not_decomposable():
    with pytest.raises(ValueError):
        decompose_gate(K.TSG1, P.I)
    with pytest.raises(ValueError):
        Postulate.parse("IV")


def test_cch_faithful_exact():
    c = decompose_controlled(K.CH, P.II)
    assert c.apps == (GateApplication(K.Z3, 1), GateApplication(K.TSG2, 1, 0, 2), GateApplication(K.Z3dag, 1))
    assert verify_decomposition(c, controlled_matrix(K.CH, 2)).is_exact


def test_c_plus_one_faithful_is_eight_gates():
    c = decompose_controlled(K.SHIFT1, P.II)
    expect = [K.Z3, K.TSG2, K.Z3dag, K.TSG2, K.TSG2, K.Z3, K.TSG2, K.Z3dag]
    assert kinds(c) == expect
    assert [a.is_controlled for a in c.apps] == [False, True, False, True, True, False, True, False]
    assert verify_decomposition(c, controlled_matrix(K.SHIFT1, 2)).is_exact


@pytest.mark.parametrize("kind", [K.CH, K.CHdag, K.P12, K.SHIFT1, K.SHIFT2], ids=lambda k: k.mnemonic)
def test_faithful_exact_under_postulate_two(kind):
    c = decompose_controlled(kind, P.II)
    assert verify_decomposition(c, controlled_matrix(kind, 2)).is_exact


def test_c01_c02_branch_defects():
    r01 = verify_decomposition(decompose_controlled(K.P01, P.II), controlled_matrix(K.P01, 2))
    r02 = verify_decomposition(decompose_controlled(K.P02, P.II), controlled_matrix(K.P02, 2))
    assert r01.verdict is Verdict.BRANCH_DEFECT and r02.verdict is Verdict.BRANCH_DEFECT
    assert r01.residuals == {0: gate_matrix(K.Z3dag), 1: gate_matrix(K.Z3dag), 2: Matrix.identity(3)}
    assert r02.residuals == {0: gate_matrix(K.Z3), 1: gate_matrix(K.Z3), 2: Matrix.identity(3)}
    assert r01.describe() == "BranchDefect{0: Z3+, 1: Z3+, 2: I}"


def test_c01_then_c02_is_c_plus_one():
    c = decompose_controlled(K.P01, P.II).then(decompose_controlled(K.P02, P.II))
    assert verify_decomposition(c, controlled_matrix(K.SHIFT1, 2)).is_exact


@pytest.mark.parametrize("p", [P.I, P.III], ids=lambda p: p.value)
def test_cch_template_defective_outside_postulate_two(p):
    c = decompose_controlled(K.CH, p)
    res = verify_decomposition(c, controlled_matrix(K.CH, 2))
    assert res.verdict is Verdict.BRANCH_DEFECT
    u = compose_unitary(c)
    inactive = u.block([0, 1, 2], [0, 1, 2])
    assert not inactive.is_identity()
    assert inactive.permutation_images() is None and inactive.block([0], [1]).is_zero()


def test_cch_postulate_two_inactive_block_identity():
    u = compose_unitary(decompose_controlled(K.CH, P.II))
    assert u.block([0, 1, 2], [0, 1, 2]).is_identity()


@pytest.mark.parametrize("p", list(Postulate), ids=lambda p: p.value)
@pytest.mark.parametrize("kind", DECOMPOSABLE, ids=lambda k: k.mnemonic)
def test_strict_always_exact(kind, p):
    c = decompose_controlled(kind, p, "strict")
    assert all(a.is_controlled for a in c.apps)
    assert verify_decomposition(c, controlled_matrix(kind, 2)).is_exact


def test_other_control_values_and_wires():
    c = decompose_controlled(K.SHIFT2, P.II, control=1, target=0, control_value=0)
    target = Circuit(2, (GateApplication(K.SHIFT2, 0, 1, 0),))
    assert verify_decomposition(c, compose_unitary(target)).is_exact


def test_bad_mode():
    with pytest.raises(ValueError):
        decompose_controlled(K.CH, P.II, "sloppy")


def test_verify_examples():
    eq22 = Circuit(2, (GateApplication(K.Z3, 1), GateApplication(K.TSG2, 1, 0), GateApplication(K.TSG2, 1, 0),
                       GateApplication(K.Z3dag, 1)))
    assert verify_decomposition(eq22, controlled_matrix(K.P12, 2)).is_exact
    phased = Circuit(1, (GateApplication(K.CH, 0),))
    res = verify_decomposition(phased, gate_matrix(K.CH).scale(OMEGA))
    assert res.verdict is Verdict.GLOBAL_PHASE and res.phase == OMEGA * OMEGA
    res = verify_decomposition(phased, gate_matrix(K.P01))
    assert res.verdict is Verdict.MISMATCH and res.first_mismatch == (0, 0)
    with pytest.raises(ValueError):
        verify_decomposition(phased, Matrix.identity(9))


def test_reset_costs():
    assert reset_cost("four_gate").total == 12
    assert reset_cost("two_gate", P.II).total == 6
    for t in ("four_gate", "two_gate"):
        assert compose_unitary(reset_circuit(t)).is_identity()
    with pytest.raises(ValueError):
        reset_cost("two_gate", P.I)
    with pytest.raises(ValueError):
        reset_cost("zero_gate")
