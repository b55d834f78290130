"""Exact arithmetic over Z[w, sqrt3] with powers of 3 in the denominator.

Every scalar is ``(a + b*w + c*r3 + d*r3*w) / 3**k`` where ``w = exp(2*pi*i/3)``
and ``r3 = sqrt(3)``. The reduction rules ``w**2 = -1 - w`` and ``r3**2 = 3``
close the set under addition and multiplication, so gate identities are
checked by exact equality instead of a float tolerance.

Arrays (matrices, state vectors) keep four integer component arrays with one
shared denominator exponent. The int64 fast path switches to Python integers
(object dtype) whenever a product could exceed 63 bits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

OMEGA_C = cmath.exp(2j * math.pi / 3)
SQRT3_F = math.sqrt(3.0)

_INT64_SAFE = 1 << 62


def _reduce(a: int, b: int, c: int, d: int, k: int) -> tuple[int, int, int, int, int]:
    while k > 0 and a % 3 == 0 and b % 3 == 0 and c % 3 == 0 and d % 3 == 0:
        a, b, c, d, k = a // 3, b // 3, c // 3, d // 3, k - 1
    return a, b, c, d, k


@dataclass(frozen=True)
class ExactAmplitude:
    """One complex amplitude ``(a + b*w + c*r3 + d*r3*w) / 3**k``.

    Instances are always stored in canonical form, so dataclass equality and
    hashing coincide with numerical equality.
    """

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d", "k"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {value!r}")
        if self.k < 0:
            raise ValueError("denominator exponent k must be non-negative")
        reduced = _reduce(int(self.a), int(self.b), int(self.c), int(self.d), int(self.k))
        for name, value in zip(("a", "b", "c", "d", "k"), reduced):
            object.__setattr__(self, name, value)

    @classmethod
    def from_int(cls, n: int) -> ExactAmplitude:
        return cls(n)

    @property
    def fields(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.k)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def __add__(self, other: ExactAmplitude) -> ExactAmplitude:
        if not isinstance(other, ExactAmplitude):
            return NotImplemented
        k = max(self.k, other.k)
        s = 3 ** (k - self.k)
        t = 3 ** (k - other.k)
        return ExactAmplitude(
            self.a * s + other.a * t,
            self.b * s + other.b * t,
            self.c * s + other.c * t,
            self.d * s + other.d * t,
            k,
        )

    def __neg__(self) -> ExactAmplitude:
        return ExactAmplitude(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other: ExactAmplitude) -> ExactAmplitude:
        if not isinstance(other, ExactAmplitude):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: ExactAmplitude) -> ExactAmplitude:
        if not isinstance(other, ExactAmplitude):
            return NotImplemented
        # (P1 + Q1 r3)(P2 + Q2 r3) = P1P2 + 3 Q1Q2 + (P1Q2 + Q1P2) r3, P, Q in Z[w]
        p0, p1 = _zw_mul(self.a, self.b, other.a, other.b)
        q0, q1 = _zw_mul(self.c, self.d, other.c, other.d)
        r0, r1 = _zw_mul(self.a, self.b, other.c, other.d)
        s0, s1 = _zw_mul(self.c, self.d, other.a, other.b)
        return ExactAmplitude(p0 + 3 * q0, p1 + 3 * q1, r0 + s0, r1 + s1, self.k + other.k)

    def conj(self) -> ExactAmplitude:
        # conj(x + y w) = (x - y) - y w; r3 is real
        return ExactAmplitude(self.a - self.b, -self.b, self.c - self.d, -self.d, self.k)

    def abs2(self) -> ExactAmplitude:
        return self * self.conj()

    def to_complex(self) -> complex:
        num = self.a + self.b * OMEGA_C + SQRT3_F * (self.c + self.d * OMEGA_C)
        return num / 3 ** self.k

    def __complex__(self) -> complex:
        return self.to_complex()

    def as_fraction(self) -> Fraction:
        """Return the value as a rational; raises ValueError if it is not rational."""
        if self.b or self.c or self.d:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.a, 3 ** self.k)

    def __str__(self) -> str:
        return format_amplitude(self)

    def __repr__(self) -> str:
        return f"ExactAmplitude{self.fields}"


def _zw_mul(x0, x1, y0, y1):
    """Product in Z[w] of (x0 + x1 w)(y0 + y1 w)."""
    t = x1 * y1
    return x0 * y0 - t, x0 * y1 + x1 * y0 - t


ZERO = ExactAmplitude()
ONE = ExactAmplitude(1)
OMEGA = ExactAmplitude(0, 1)
OMEGA2 = ExactAmplitude(-1, -1)
SQRT3 = ExactAmplitude(0, 0, 1)
INV_SQRT3 = ExactAmplitude(0, 0, 1, 0, 1)
UNITS = tuple(sign * w for sign in (ONE, -ONE) for w in (ONE, OMEGA, OMEGA2))


def omega_power(n: int) -> ExactAmplitude:
    return (ONE, OMEGA, OMEGA2)[n % 3]


def amp_add(x: ExactAmplitude, y: ExactAmplitude) -> ExactAmplitude:
    return x + y


def amp_mul(x: ExactAmplitude, y: ExactAmplitude) -> ExactAmplitude:
    return x * y


def amp_conj(x: ExactAmplitude) -> ExactAmplitude:
    return x.conj()


def amp_to_float(x: ExactAmplitude) -> tuple[float, float]:
    z = x.to_complex()
    return (z.real, z.imag)


def format_amplitude(x: ExactAmplitude) -> str:
    """Render as ``(a + b*w + c*r3 + d*r3*w)/3^k``, omitting zero terms."""
    terms = []
    for coef, sym in ((x.a, ""), (x.b, "w"), (x.c, "r3"), (x.d, "r3*w")):
        if coef == 0:
            continue
        if not sym:
            body = str(abs(coef))
        elif abs(coef) == 1:
            body = sym
        else:
            body = f"{abs(coef)}*{sym}"
        terms.append(("-" if coef < 0 else "+", body))
    if not terms:
        return "0"
    text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    if x.k == 0:
        return text
    if len(terms) > 1:
        text = f"({text})"
    return f"{text}/3^{x.k}"


# ---------------------------------------------------------------------------
# arrays

Parts = tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


def _max_abs(parts: Sequence[np.ndarray]) -> int:
    return max((int(np.max(np.abs(p))) if p.size else 0) for p in parts)


def _as_object(parts: Sequence[np.ndarray]) -> list[np.ndarray]:
    return [p.astype(object) for p in parts]


def _maybe_int64(parts: Sequence[np.ndarray]) -> Parts:
    if all(p.dtype != object for p in parts):
        return tuple(parts)  # type: ignore[return-value]
    if _max_abs(parts) < _INT64_SAFE:
        return tuple(p.astype(np.int64) for p in parts)  # type: ignore[return-value]
    return tuple(parts)  # type: ignore[return-value]


def canonical_parts(parts: Sequence[np.ndarray], k: int) -> tuple[Parts, int]:
    parts = list(parts)
    while k > 0 and all(not np.any(p % 3) for p in parts):
        parts = [p // 3 for p in parts]
        k -= 1
    return _maybe_int64(parts), k


def bilinear(x: Parts, y: Parts, op: Callable, fan_in: int) -> Parts:
    """Apply a bilinear ``op`` (matmul, kron, tensordot...) over the ring.

    ``fan_in`` bounds how many products are summed into one output cell and
    drives the overflow guard.
    """
    bound = _max_abs(x) * _max_abs(y) * max(fan_in, 1) * 16
    if bound >= _INT64_SAFE:
        x = tuple(_as_object(x))
        y = tuple(_as_object(y))
    xa, xb, xc, xd = x
    ya, yb, yc, yd = y

    def zw(p0, p1, q0, q1):
        t = op(p1, q1)
        return op(p0, q0) - t, op(p0, q1) + op(p1, q0) - t

    p0, p1 = zw(xa, xb, ya, yb)
    q0, q1 = zw(xc, xd, yc, yd)
    r0, r1 = zw(xa, xb, yc, yd)
    s0, s1 = zw(xc, xd, ya, yb)
    return (p0 + 3 * q0, p1 + 3 * q1, r0 + s0, r1 + s1)


def conj_parts(parts: Parts) -> Parts:
    a, b, c, d = parts
    return (a - b, -b, c - d, -d)


def align(x: Parts, kx: int, y: Parts, ky: int) -> tuple[Parts, Parts, int]:
    k = max(kx, ky)
    sx = 3 ** (k - kx)
    sy = 3 ** (k - ky)
    if max(sx, sy) * max(_max_abs(x), _max_abs(y), 1) >= _INT64_SAFE:
        x = tuple(_as_object(x))
        y = tuple(_as_object(y))
    return tuple(p * sx for p in x), tuple(p * sy for p in y), k  # type: ignore[return-value]


class ExactArray:
    """An n-dimensional array of ExactAmplitudes sharing one denominator."""

    __slots__ = ("_parts", "_k")

    def __init__(self, parts: Sequence[np.ndarray], k: int = 0):
        parts = [np.asarray(p) for p in parts]
        if len(parts) != 4:
            raise ValueError("need four component arrays")
        shape = parts[0].shape
        if any(p.shape != shape for p in parts):
            raise ValueError("component arrays differ in shape")
        parts = [p if p.dtype == object else p.astype(np.int64) for p in parts]
        self._parts, self._k = canonical_parts(parts, int(k))

    @classmethod
    def from_amplitudes(cls, values: np.ndarray | Sequence) -> ExactArray:
        arr = np.empty(np.shape(values), dtype=object)
        flat_in = np.asarray(values, dtype=object).reshape(-1)
        amps = [v if isinstance(v, ExactAmplitude) else ExactAmplitude(int(v)) for v in flat_in]
        k = max((v.k for v in amps), default=0)
        comps = [np.empty(len(amps), dtype=object) for _ in range(4)]
        for i, v in enumerate(amps):
            s = 3 ** (k - v.k)
            comps[0][i], comps[1][i], comps[2][i], comps[3][i] = v.a * s, v.b * s, v.c * s, v.d * s
        shape = arr.shape
        return cls([c.reshape(shape) for c in comps], k)

    @classmethod
    def zeros(cls, shape) -> ExactArray:
        z = np.zeros(shape, dtype=np.int64)
        return cls([z, z.copy(), z.copy(), z.copy()], 0)

    @property
    def parts(self) -> Parts:
        return self._parts

    @property
    def k(self) -> int:
        return self._k

    @property
    def shape(self) -> tuple[int, ...]:
        return self._parts[0].shape

    def _new(self, parts, k):
        return type(self)(parts, k)

    def item(self, index) -> ExactAmplitude:
        a, b, c, d = (int(p[index]) for p in self._parts)
        return ExactAmplitude(a, b, c, d, self._k)

    def __getitem__(self, index) -> ExactAmplitude:
        return self.item(index)

    def to_complex(self) -> np.ndarray:
        a, b, c, d = (p.astype(float) for p in self._parts)
        return (a + b * OMEGA_C + SQRT3_F * (c + d * OMEGA_C)) / 3.0 ** self._k

    def conj(self):
        return self._new(conj_parts(self._parts), self._k)

    def scale(self, x: ExactAmplitude):
        scalar = tuple(np.array(v, dtype=np.int64) for v in (x.a, x.b, x.c, x.d))
        parts = bilinear(self._parts, scalar, np.multiply, 1)
        return self._new(parts, self._k + x.k)

    def __add__(self, other):
        if not isinstance(other, ExactArray) or other.shape != self.shape:
            return NotImplemented
        x, y, k = align(self._parts, self._k, other._parts, other._k)
        return self._new([p + q for p, q in zip(x, y)], k)

    def __neg__(self):
        return self._new([-p for p in self._parts], self._k)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return all(not np.any(p) for p in self._parts)

    def same_value(self, other: ExactArray) -> bool:
        return (
            self.shape == other.shape
            and self._k == other._k
            and all(np.array_equal(p, q) for p, q in zip(self._parts, other._parts))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactArray):
            return NotImplemented
        return self.same_value(other)

    def __hash__(self) -> int:
        return hash((self.shape, self._k, tuple(p.tobytes() if p.dtype != object else tuple(p.ravel()) for p in self._parts)))

    def fingerprint(self) -> bytes:
        """Canonical byte serialization (exact; used as a hash-table key)."""
        chunks = [str(self._k).encode(), repr(self.shape).encode()]
        for p in self._parts:
            if p.dtype == object:
                chunks.append(repr(p.tolist()).encode())
            else:
                chunks.append(p.astype(np.int64).tobytes())
        return b"|".join(chunks)


class Matrix(ExactArray):
    """Dense square matrix over the exact ring."""

    __slots__ = ()

    def __init__(self, parts: Sequence[np.ndarray], k: int = 0):
        super().__init__(parts, k)
        if len(self.shape) != 2 or self.shape[0] != self.shape[1]:
            raise ValueError(f"matrix must be square, got shape {self.shape}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> Matrix:
        grid = [list(r) for r in rows]
        arr = np.empty((len(grid), len(grid[0]) if grid else 0), dtype=object)
        for i, row in enumerate(grid):
            for j, v in enumerate(row):
                arr[i, j] = v
        base = ExactArray.from_amplitudes(arr)
        return cls(base.parts, base.k)

    @classmethod
    def identity(cls, dim: int) -> Matrix:
        z = np.zeros((dim, dim), dtype=np.int64)
        return cls([np.eye(dim, dtype=np.int64), z, z.copy(), z.copy()], 0)

    @classmethod
    def permutation(cls, images: Sequence[int]) -> Matrix:
        """Permutation matrix sending basis ``x`` to basis ``images[x]``."""
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ValueError("images must be a permutation of range(n)")
        a = np.zeros((n, n), dtype=np.int64)
        for x, y in enumerate(images):
            a[y, x] = 1
        z = np.zeros((n, n), dtype=np.int64)
        return cls([a, z, z.copy(), z.copy()], 0)

    @property
    def dim(self) -> int:
        return self.shape[0]

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        parts = bilinear(self.parts, other.parts, np.matmul, self.dim)
        return Matrix(parts, self.k + other.k)

    def apply(self, vector: ExactArray) -> ExactArray:
        if vector.shape != (self.dim,):
            raise ValueError("vector length does not match matrix dimension")
        parts = bilinear(self.parts, vector.parts, np.matmul, self.dim)
        return type(vector)(parts, self.k + vector.k)

    def dagger(self) -> Matrix:
        a, b, c, d = conj_parts(self.parts)
        return Matrix([a.T, b.T, c.T, d.T], self.k)

    def kron(self, other: Matrix) -> Matrix:
        """Kronecker product; ``self`` indexes the more-significant digit."""
        parts = bilinear(self.parts, other.parts, np.kron, 1)
        return Matrix(parts, self.k + other.k)

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        r = np.asarray(rows)
        c = np.asarray(cols)
        return Matrix([p[np.ix_(r, c)] for p in self.parts], self.k)

    def is_unitary(self) -> bool:
        return self @ self.dagger() == Matrix.identity(self.dim)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.dim)

    def permutation_images(self) -> list[int] | None:
        """Images of basis states if this is a 0/1 permutation matrix, else None."""
        a, b, c, d = self.parts
        if self.k != 0 or np.any(b) or np.any(c) or np.any(d):
            return None
        if not np.all((a == 0) | (a == 1)):
            return None
        if not (np.all(a.sum(axis=0) == 1) and np.all(a.sum(axis=1) == 1)):
            return None
        return [int(np.argmax(a[:, x])) for x in range(self.dim)]

    def rows(self) -> list[list[ExactAmplitude]]:
        return [[self.item((i, j)) for j in range(self.dim)] for i in range(self.dim)]

    def __repr__(self) -> str:
        return f"Matrix(dim={self.dim})"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def mat_dagger(a: Matrix) -> Matrix:
    return a.dagger()


def mat_kron(a: Matrix, b: Matrix) -> Matrix:
    return a.kron(b)


def global_phase_equal(a: Matrix, b: Matrix) -> tuple[bool, ExactAmplitude | None]:
    """Return ``(True, lam)`` when ``a == lam * b`` for a unit ``lam`` in {+-w^j}."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    for lam in UNITS:
        if a == b.scale(lam):
            return True, lam
    return False, None


def render_matrix(m: Matrix, floats: bool = False) -> str:
    """Row-major text rendering, one row per line, cells separated by ``|``."""
    if floats:
        cells = [[_float_cell(m.item((i, j))) for j in range(m.dim)] for i in range(m.dim)]
    else:
        cells = [[format_amplitude(m.item((i, j))) for j in range(m.dim)] for i in range(m.dim)]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" | ".join(c.rjust(width) for c in row) for row in cells)


def _float_cell(x: ExactAmplitude) -> str:
    re, im = amp_to_float(x)
    re = 0.0 if abs(re) < 5e-13 else re
    im = 0.0 if abs(im) < 5e-13 else im
    return f"({re:+.6f}, {im:+.6f})"
