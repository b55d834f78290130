import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tqg.circuit import Circuit, GateApplication, compose_unitary
from tqg.exact import Matrix
from tqg.gates import GateKind
from tqg.search import (NotFoundAtDepth, SearchEngine, SynthesisSpec, enumerate_bfs, synthesize,
                        verify_connectivity)

K = GateKind

ONE_POOL = (GateApplication(K.CH, 0), GateApplication(K.Z3, 0), GateApplication(K.P01, 0),
            GateApplication(K.Z3dag, 0))
TWO_POOL = (GateApplication(K.P12, 0), GateApplication(K.CH, 1), GateApplication(K.SHIFT1, 1, 0, 2),
            GateApplication(K.SHIFT2, 0, 1, 1), GateApplication(K.P01, 1))
PERM_POOL = (GateApplication(K.P01, 1, 0, 1), GateApplication(K.SHIFT1, 1, 0, 2), GateApplication(K.P12, 0, 1, 0),
             GateApplication(K.P02, 0))


def target_of(pool, width, word):
    return compose_unitary(Circuit(width, tuple(pool[i] for i in word)))


@pytest.mark.parametrize("pool, width", [(ONE_POOL, 1), (TWO_POOL, 2), (PERM_POOL, 2)])
@settings(max_examples=15)
@given(data=st.data())
def test_mitm_equals_bfs(pool, width, data):
    word = data.draw(st.lists(st.integers(0, len(pool) - 1), max_size=4))
    spec = SynthesisSpec(target_of(pool, width, word), width, pool, depth_budget=4)
    res = synthesize(spec)
    oracle = enumerate_bfs(spec)
    assert res.found and oracle is not None
    assert res.circuit == oracle


@pytest.mark.parametrize("counts", [(1, 2), (2, 1), (0, 3)])
def test_mitm_equals_bfs_with_counts(counts):
    rng = random.Random(sum(counts))
    for _ in range(5):
        word = [rng.randrange(len(TWO_POOL)) for _ in range(3)]
        spec = SynthesisSpec(target_of(TWO_POOL, 2, word), 2, TWO_POOL, depth_budget=4, counts=counts)
        res, oracle = synthesize(spec), enumerate_bfs(spec)
        assert (res.circuit if res.found else None) == oracle


def test_backend_choice():
    perm = SearchEngine(PERM_POOL, 2, [Matrix.identity(9)])
    exact = SearchEngine(TWO_POOL, 2, [Matrix.identity(9)])
    assert perm.backend.name == "permutation" and exact.backend.name == "exact"


def test_identity_target_gives_empty_circuit():
    res = synthesize(SynthesisSpec(Matrix.identity(9), 2, TWO_POOL, depth_budget=3))
    assert res.found and len(res.circuit) == 0


def test_not_found_is_result():
    # a permutation pool can never reach CH
    spec = SynthesisSpec(compose_unitary(Circuit(2, (GateApplication(K.CH, 0),))), 2, PERM_POOL, depth_budget=4)
    res = synthesize(spec)
    assert isinstance(res, NotFoundAtDepth) and not res.found and res.depth == 4
    assert enumerate_bfs(spec) is None


def test_validation():
    t = Matrix.identity(9)
    with pytest.raises(ValueError):
        synthesize(SynthesisSpec(t, 2, ()))
    with pytest.raises(ValueError):
        synthesize(SynthesisSpec(t, 2, TWO_POOL, depth_budget=13))
    with pytest.raises(ValueError):
        synthesize(SynthesisSpec(Matrix.identity(3), 2, TWO_POOL))
    with pytest.raises(ValueError):
        synthesize(SynthesisSpec(t, 2, TWO_POOL, edges=frozenset({(0, 1)})))


def test_connectivity():
    c = Circuit(3, (GateApplication(K.P01, 2, 0), GateApplication(K.P01, 1, 0)))
    assert not verify_connectivity(c, {(0, 2), (1, 2)})
    assert verify_connectivity(Circuit(3, (GateApplication(K.CH, 1),)), set())
    assert verify_connectivity(Circuit(3, c.apps[:1]), {(0, 2)})


def test_worker_count_does_not_change_answer():
    word = [0, 2, 1, 3, 4, 2, 1]
    spec = SynthesisSpec(target_of(TWO_POOL, 2, word), 2, TWO_POOL, depth_budget=7)
    a = synthesize(spec, workers=1)
    b = synthesize(spec, workers=3)
    c = synthesize(spec, workers=1)
    assert a.circuit == b.circuit == c.circuit
    assert compose_unitary(a.circuit) == spec.target


def test_engine_reuse_across_targets():
    engine = SearchEngine(TWO_POOL, 2, [], caps=None)
    for word in ([1, 2], [4, 3, 0]):
        spec = SynthesisSpec(target_of(TWO_POOL, 2, word), 2, TWO_POOL, depth_budget=4)
        assert synthesize(spec, engine=engine).circuit == enumerate_bfs(spec)
