import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import amplitudes, coeff
from tqg.exact import (INV_SQRT3, OMEGA, OMEGA2, ONE, SQRT3, ZERO, ExactAmplitude, ExactArray, Matrix, amp_add,
                       amp_conj, amp_mul, amp_to_float, format_amplitude, global_phase_equal, mat_dagger, mat_kron,
                       mat_mul, omega_power, render_matrix)
from tqg.gates import GateKind, gate_matrix

W = cmath.exp(2j * math.pi / 3)


def as_complex(x: ExactAmplitude) -> complex:
    # direct evaluation, independent of amp_to_float
    return (x.a + x.b * W + math.sqrt(3) * (x.c + x.d * W)) / 3 ** x.k


def test_cube_roots_sum_to_zero():
    w2 = ExactAmplitude(-1, -1, 0, 0, 0)
    assert amp_add(amp_add(ONE, OMEGA), w2) == ZERO
    assert OMEGA2 == w2


def test_additive_identity():
    x = ExactAmplitude(3, -2, 1, 5, 2)
    assert amp_add(x, ZERO) == x


def test_two_inverse_sqrt3():
    s = amp_add(INV_SQRT3, INV_SQRT3)
    assert (s.a, s.b, s.c, s.d, s.k) == (0, 0, 2, 0, 1)
    assert abs(amp_to_float(s)[0] - 2 / math.sqrt(3)) < 1e-12


def test_products():
    assert amp_mul(OMEGA, OMEGA2) == ONE
    assert amp_mul(INV_SQRT3, INV_SQRT3) == ExactAmplitude(1, 0, 0, 0, 1)
    sq = amp_mul(OMEGA, OMEGA)
    assert (sq.a, sq.b, sq.c, sq.d, sq.k) == (-1, -1, 0, 0, 0)
    re_, im_ = amp_to_float(sq)
    assert abs(re_ + 0.5) < 1e-12 and abs(im_ + math.sqrt(3) / 2) < 1e-12


def test_conjugation_examples():
    assert amp_conj(OMEGA) == OMEGA2
    assert amp_conj(ONE) == ONE
    assert amp_conj(OMEGA2) == OMEGA


def test_float_examples():
    assert amp_to_float(OMEGA) == pytest.approx((-0.5, math.sqrt(3) / 2), abs=1e-15)
    assert amp_to_float(ZERO) == (0.0, 0.0)
    assert amp_to_float(INV_SQRT3)[0] == pytest.approx(3 ** -0.5, abs=1e-15)


def test_omega_powers_cycle():
    for n in range(13):
        assert omega_power(n) == omega_power(n % 3)
    assert omega_power(3) == ONE and omega_power(-1) == OMEGA2


def test_canonical_reduction():
    x = ExactAmplitude(3, 6, 9, -3, 2)
    assert (x.a, x.b, x.c, x.d, x.k) == (1, 2, 3, -1, 1)
    assert ExactAmplitude(9, 0, 0, 0, 2) == ONE
    # k = 0 is never reduced further
    assert ExactAmplitude(3).k == 0 and ExactAmplitude(3).a == 3


def test_negative_denominator_rejected():
    with pytest.raises(ValueError):
        ExactAmplitude(1, 0, 0, 0, -1)


@given(amplitudes)
def test_canonical_idempotent(x):
    y = ExactAmplitude(x.a, x.b, x.c, x.d, x.k)
    assert (y.a, y.b, y.c, y.d, y.k) == (x.a, x.b, x.c, x.d, x.k)


@given(amplitudes, amplitudes)
def test_conj_multiplicative(x, y):
    assert amp_conj(amp_mul(x, y)) == amp_mul(amp_conj(x), amp_conj(y))


@given(amplitudes, amplitudes)
def test_float_mirror_of_product(x, y):
    got = complex(*amp_to_float(amp_mul(x, y)))
    assert abs(got - as_complex(x) * as_complex(y)) < 1e-12 * max(1.0, abs(got))


@given(amplitudes)
def test_abs2_is_real(x):
    n = x.abs2()
    assert n.b == 0 and n.d == 0
    assert abs(n.to_complex() - abs(as_complex(x)) ** 2) < 1e-9


@given(coeff, coeff, st.integers(0, 4), st.booleans())
def test_abs2_rational_on_gate_reachable_elements(a, b, k, odd):
    # gate entries live in Z[w] or sqrt3 * Z[w]
    x = ExactAmplitude(0, 0, a, b, k) if odd else ExactAmplitude(a, b, 0, 0, k)
    assert abs(float(x.abs2().as_fraction()) - abs(as_complex(x)) ** 2) < 1e-9


def test_as_fraction_rejects_irrational():
    assert ExactAmplitude(1, 0, 0, 0, 2).as_fraction() == Fraction(1, 9)
    with pytest.raises(ValueError):
        SQRT3.as_fraction()


def test_format_amplitude():
    assert format_amplitude(ZERO) == "0"
    assert format_amplitude(ONE) == "1"
    assert format_amplitude(INV_SQRT3) == "r3/3^1"


def test_matrix_products():
    z3 = gate_matrix(GateKind.Z3)
    assert mat_mul(z3, z3) == gate_matrix(GateKind.Z3dag)
    assert mat_mul(Matrix.identity(3), gate_matrix(GateKind.CH)) == gate_matrix(GateKind.CH)
    ch = gate_matrix(GateKind.CH)
    assert mat_mul(ch, ch) == gate_matrix(GateKind.P12)
    with pytest.raises(ValueError):
        mat_mul(Matrix.identity(3), Matrix.identity(9))


def test_dagger_examples():
    w, w2 = OMEGA, OMEGA2
    eq12 = Matrix.from_rows([[INV_SQRT3 * e for e in row] for row in [[ONE, w2, w], [w, w2, ONE], [w2, w2, w2]]])
    assert mat_dagger(gate_matrix(GateKind.TSG2)) == eq12
    assert mat_dagger(Matrix.identity(3)) == Matrix.identity(3)


def test_kron():
    assert mat_kron(Matrix.identity(3), Matrix.identity(3)) == Matrix.identity(9)
    a, b = gate_matrix(GateKind.Z3), gate_matrix(GateKind.CH)
    c, d = gate_matrix(GateKind.Z3dag), gate_matrix(GateKind.CH)
    assert mat_kron(a, b) @ mat_kron(c, d) == mat_kron(a @ c, b @ d)


def test_kron_matches_numpy():
    a, b = gate_matrix(GateKind.TSG1), gate_matrix(GateKind.CH)
    assert np.allclose(mat_kron(a, b).to_complex(), np.kron(a.to_complex(), b.to_complex()), atol=1e-12)


def test_global_phase():
    ch, z3 = gate_matrix(GateKind.CH), gate_matrix(GateKind.Z3)
    assert global_phase_equal(ch, ch) == (True, ONE)
    same, lam = global_phase_equal(z3.scale(OMEGA), z3)
    assert same and lam == OMEGA
    assert global_phase_equal(z3, gate_matrix(GateKind.Z3dag))[0] is False
    same, lam = global_phase_equal(ch.scale(-OMEGA2), ch)
    assert same and lam == -OMEGA2


def test_overflow_falls_back_to_python_ints():
    big = 2 ** 40
    x = ExactArray.from_amplitudes([ExactAmplitude(big, big)])
    y = x.scale(ExactAmplitude(big, 1))
    assert y.item(0) == ExactAmplitude(big, big) * ExactAmplitude(big, 1)


def test_render_matrix_rows():
    text = render_matrix(Matrix.identity(3))
    assert len(text.splitlines()) == 3
    assert "(+1.000000, +0.000000)" in render_matrix(Matrix.identity(3), floats=True)
