"""Meet-in-the-middle search for gate words realizing a target unitary.

Words are tuples of pool indices in wire order. For a target ``T`` and a
split ``word = left + right`` we need ``R @ L == T``, i.e.
``L == R^-1 @ T``. Left words are tabulated by exact fingerprint of ``L``;
right words are streamed as fingerprints of ``R^-1 @ T``.

Each table keeps only the lexicographically least word per (count class,
unitary). This loses nothing: if two prefixes of equal length reach the same
unitary, every completion of the larger one is beaten by the same completion
of the smaller one. The same argument holds for suffixes.

Two exact representations are used:

* permutation pools (every gate and the target are 0/1 permutation
  matrices): an element is its basis image vector;
* otherwise an element is ``N / sqrt3**e`` with ``N`` over Z[w], stored
  canonically (``e`` reduced by 2 while ``N`` is divisible by 3).
"""

from __future__ import annotations

import itertools
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuit import Circuit, GateApplication, compose_unitary
from .exact import Matrix
from .gates import embed_gate

MAX_DEPTH = 12
_CHUNK = 8192


class _PermBackend:
    name = "permutation"

    def __init__(self, dim: int):
        self.dim = dim

    def element(self, m: Matrix):
        images = m.permutation_images()
        if images is None:
            raise ValueError("matrix is not a permutation")
        return np.asarray(images, dtype=np.int16)[None, :]

    def rep(self, m: Matrix, inverse: bool = False):
        images = np.asarray(m.permutation_images(), dtype=np.int16)
        if inverse:
            inv = np.empty_like(images)
            inv[images] = np.arange(self.dim, dtype=np.int16)
            return inv
        return images

    def apply(self, rep, batch):
        # left-multiplying by a permutation composes it after the batch's images
        return rep[batch]

    def take(self, batch, idx):
        return batch[idx]

    def concat(self, batches):
        return np.concatenate(batches, axis=0)

    def size(self, batch) -> int:
        return batch.shape[0]

    def keys(self, batch) -> list[bytes]:
        arr = np.ascontiguousarray(batch)
        return [row.tobytes() for row in arr]


def _zomega_form(m: Matrix) -> tuple[np.ndarray, int]:
    """``m`` as ``N / sqrt3**e`` with N over Z[w]; rejects mixed-parity entries."""
    a, b, c, d = (np.asarray(p, dtype=object) for p in m.parts)
    k = m.k
    rational = not (np.any(c) or np.any(d))
    irrational = not (np.any(a) or np.any(b))
    if rational:
        n, e = np.stack([a, b]), 2 * k
    elif irrational:
        n, e = 3 * np.stack([c, d]), 2 * k + 1
    else:
        raise ValueError("matrix mixes Z[w] and sqrt3*Z[w] entries; not reachable by library gates")
    while e >= 2 and not np.any(n % 3):
        n, e = n // 3, e - 2
    return n.astype(np.int64), e


class _ExactBackend:
    name = "exact"

    def __init__(self, dim: int):
        self.dim = dim

    def element(self, m: Matrix):
        n, e = _zomega_form(m)
        return (n[None, ...], np.array([e], dtype=np.int64))

    def rep(self, m: Matrix, inverse: bool = False):
        return _zomega_form(m.dagger() if inverse else m)

    def apply(self, rep, batch):
        (g, eg), (n, e) = rep, batch
        x0, x1 = n[:, 0], n[:, 1]
        t = g[1] @ x1
        out0 = g[0] @ x0 - t
        out1 = g[0] @ x1 + g[1] @ x0 - t
        out = np.stack([out0, out1], axis=1)
        e = e + eg
        if out.size and int(np.abs(out).max()) >= 1 << 40:
            raise OverflowError("coefficient growth exceeded the search representation")
        while True:
            mask = (e >= 2) & ~np.any((out % 3).reshape(len(e), -1), axis=1)
            if not mask.any():
                break
            out[mask] //= 3
            e = e - 2 * mask
        return (out, e)

    def take(self, batch, idx):
        return (batch[0][idx], batch[1][idx])

    def concat(self, batches):
        return (np.concatenate([b[0] for b in batches]), np.concatenate([b[1] for b in batches]))

    def size(self, batch) -> int:
        return batch[1].shape[0]

    def keys(self, batch) -> list[bytes]:
        n, e = batch
        if n.size and int(np.abs(n).max()) > 32767:
            raise OverflowError("coefficient too large for fingerprint packing")
        packed = np.ascontiguousarray(n.astype(np.int16).reshape(len(e), -1))
        tail = e.astype(np.uint8)
        return [row.tobytes() + bytes((int(x),)) for row, x in zip(packed, tail)]


def choose_backend(dim: int, mats: Sequence[Matrix]):
    if all(m.permutation_images() is not None for m in mats):
        return _PermBackend(dim)
    return _ExactBackend(dim)


@dataclass
class _Level:
    batch: object
    words: list
    ones: list
    index: dict


class _Side:
    """Lexicographically ordered breadth-first levels grown from one element.

    ``append`` grows words at the end (left half, element ``L``);
    ``prepend`` grows words at the front (right half, element ``R^-1 T``).
    """

    def __init__(self, engine: SearchEngine, start, prepend: bool):
        self.engine = engine
        self.prepend = prepend
        start_keys = engine.backend.keys(start)
        self.levels = [_Level(start, [()], [0], {engine._class_key(0, start_keys[0]): 0})]

    def level(self, n: int) -> _Level:
        while len(self.levels) <= n:
            self.levels.append(self._grow(len(self.levels)))
        return self.levels[n]

    def candidates(self, parent: _Level, length: int, tasks=None):
        """Yield ``(word, ones, key, (array, row))`` for children of ``parent``.

        Without explicit ``tasks`` the children come in lexicographic order.
        """
        eng = self.engine
        backend = eng.backend
        n_par = backend.size(parent.batch)
        for t, lo in tasks if tasks is not None else self.tasks(n_par):
            yield from self._task(parent, length, t, lo, min(lo + _CHUNK, n_par))

    def tasks(self, n_par: int):
        n_t = len(self.engine.reps)
        if self.prepend:
            return [(t, lo) for t in range(n_t) for lo in range(0, n_par, _CHUNK)]
        return [(None, lo) for lo in range(0, n_par, _CHUNK)]

    def _task(self, parent: _Level, length: int, t, lo: int, hi: int):
        eng = self.engine
        backend = eng.backend
        sub = backend.take(parent.batch, slice(lo, hi))
        templates = [t] if t is not None else range(len(eng.reps))
        reps = eng.inv_reps if self.prepend else eng.reps
        computed = {tt: backend.apply(reps[tt], sub) for tt in templates}
        keys = {tt: backend.keys(computed[tt]) for tt in templates}
        with eng.lock:
            eng.stats.nodes += (hi - lo) * len(templates)
        if self.prepend:
            order = ((t, p) for p in range(hi - lo))
        else:
            order = ((tt, p) for p in range(hi - lo) for tt in templates)
        for tt, p in order:
            ones = parent.ones[lo + p] + eng.one_flags[tt]
            if not eng._within_caps(ones, length):
                continue
            word = parent.words[lo + p]
            word = (tt,) + word if self.prepend else word + (tt,)
            yield word, ones, keys[tt][p], (computed[tt], p)

    def _grow(self, length: int) -> _Level:
        eng = self.engine
        backend = eng.backend
        parent = self.levels[-1]
        index: dict = {}
        words, ones_list = [], []
        chunks, positions = [], []
        offset = 0
        for t, lo in self.tasks(backend.size(parent.batch)):
            hi = min(lo + _CHUNK, backend.size(parent.batch))
            groups: dict[int, tuple[object, list[int], int]] = {}
            for word, ones, key, (arr, row) in self._task(parent, length, t, lo, hi):
                ck = eng._class_key(ones, key)
                if ck in index:
                    continue
                index[ck] = len(words)
                words.append(word)
                ones_list.append(ones)
                if id(arr) not in groups:
                    groups[id(arr)] = (arr, [], len(groups))
                _, rows, _ = groups[id(arr)]
                positions.append((len(chunks) + groups[id(arr)][2], len(rows)))
                rows.append(row)
            for arr, rows, _ in sorted(groups.values(), key=lambda g: g[2]):
                chunks.append(backend.take(arr, np.asarray(rows, dtype=np.int64)))
        if not chunks:
            return _Level(backend.take(parent.batch, slice(0, 0)), words, ones_list, index)
        starts = np.cumsum([0] + [backend.size(c) for c in chunks[:-1]])
        order = np.asarray([starts[g] + j for g, j in positions], dtype=np.int64)
        batch = backend.take(backend.concat(chunks), order)
        return _Level(batch, words, ones_list, index)


@dataclass
class SearchStats:
    nodes: int = 0
    table_size: int = 0
    depth: int = 0
    backend: str = ""
    elapsed: float = 0.0


class SearchEngine:
    """Reusable MITM tables for one pool on one register width.

    ``caps`` = (max one-qutrit, max two-qutrit) when count classes are
    tracked; the left tables are shared by every target searched.
    """

    def __init__(self, pool: Sequence[GateApplication], width: int, targets: Sequence[Matrix] = (),
                 caps: tuple[int, int] | None = None):
        self.pool = tuple(a.unlabeled() for a in pool)
        self.width = width
        self.dim = 3 ** width
        mats = [embed_gate(width, a) for a in self.pool]
        self.backend = choose_backend(self.dim, list(mats) + list(targets))
        self.reps = [self.backend.rep(m) for m in mats]
        self.inv_reps = [self.backend.rep(m, inverse=True) for m in mats]
        self.one_flags = [0 if a.is_controlled else 1 for a in self.pool]
        self.caps = caps
        self.stats = SearchStats(backend=self.backend.name)
        self.lock = threading.Lock()
        self._left = _Side(self, self.backend.element(Matrix.identity(self.dim)), prepend=False)
        self._right: dict[bytes, _Side] = {}

    def _class_key(self, ones: int, key: bytes):
        return (ones, key) if self.caps is not None else key

    def _within_caps(self, ones: int, length: int) -> bool:
        if self.caps is None:
            return True
        return ones <= self.caps[0] and length - ones <= self.caps[1]

    def _right_side(self, target: Matrix) -> _Side:
        fp = target.fingerprint()
        if fp not in self._right:
            self._right[fp] = _Side(self, self.backend.element(target), prepend=True)
        return self._right[fp]

    def search_length(self, target: Matrix, length: int, ones: int | None = None,
                      workers: int = 1) -> dict[int, tuple[int, ...]]:
        """Lex-least word of exactly ``length`` gates per one-qutrit count.

        With ``ones`` given (requires tracked counts), only that class is
        searched. The result maps one-qutrit count to word.
        """
        if ones is not None and self.caps is None:
            raise ValueError("count-constrained search needs an engine with caps")
        h = length // 2
        r = length - h
        left = self._left.level(h)
        self.stats.table_size = max(self.stats.table_size, len(left.index))
        right = self._right_side(target)
        matches: list[tuple[int, tuple[int, ...]]] = []

        def lookups(stream):
            found = []
            for word, r_ones, key, _ in stream:
                if self.caps is None:
                    hit = left.index.get(key)
                    if hit is not None:
                        found.append((left.ones[hit] + r_ones, left.words[hit] + word))
                    continue
                classes = [ones - r_ones] if ones is not None else range(h + 1)
                for l_ones in classes:
                    hit = left.index.get((l_ones, key))
                    if hit is not None:
                        found.append((l_ones + r_ones, left.words[hit] + word))
            return found

        if r == 0:
            start = right.levels[0]
            matches = lookups(zip(start.words, start.ones, self.backend.keys(start.batch), itertools.repeat(None)))
        else:
            parent = right.level(r - 1)
            tasks = right.tasks(self.backend.size(parent.batch))
            if workers > 1 and len(tasks) > 1:
                groups = [tasks[i::workers] for i in range(workers)]
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    results = pool.map(lambda g: lookups(right.candidates(parent, r, g)), groups)
                    for found in results:
                        matches.extend(found)
            else:
                matches = lookups(right.candidates(parent, r))
        best: dict[int, tuple[int, ...]] = {}
        for n1, word in matches:
            if self.caps is not None and not self._within_caps(n1, length):
                continue
            if n1 not in best or word < best[n1]:
                best[n1] = word
        return best


# ---------------------------------------------------------------------------
# public interface


@dataclass(frozen=True)
class SynthesisSpec:
    target: Matrix
    width: int
    pool: tuple[GateApplication, ...]
    depth_budget: int = 10
    counts: tuple[int, int] | None = None
    edges: frozenset[tuple[int, int]] | None = None


@dataclass
class Found:
    circuit: Circuit
    stats: SearchStats = field(default_factory=SearchStats)

    found = True


@dataclass
class NotFoundAtDepth:
    depth: int
    stats: SearchStats = field(default_factory=SearchStats)

    found = False


def verify_connectivity(c: Circuit, edges) -> bool:
    """True iff every controlled gate's (control, target) pair is an allowed edge."""
    allowed = set(edges)
    return all(app.control is None or (app.control, app.target) in allowed for app in c.apps)


def _validate(spec: SynthesisSpec) -> None:
    if not spec.pool:
        raise ValueError("pool is empty")
    if spec.depth_budget > MAX_DEPTH:
        raise ValueError(f"depth budget {spec.depth_budget} exceeds the supported maximum {MAX_DEPTH}")
    if spec.target.dim != 3 ** spec.width:
        raise ValueError("target dimension does not match width")
    for app in spec.pool:
        if max(app.wires) >= spec.width:
            raise ValueError(f"pool gate {app.to_text()} exceeds width {spec.width}")
        if spec.edges is not None and app.control is not None and (app.control, app.target) not in spec.edges:
            raise ValueError(f"pool gate {app.to_text()} violates connectivity")


def _depths(spec: SynthesisSpec):
    if spec.counts is not None:
        d = sum(spec.counts)
        return [d] if d <= spec.depth_budget else []
    return range(spec.depth_budget + 1)


def synthesize(spec: SynthesisSpec, workers: int = 1, engine: SearchEngine | None = None) -> Found | NotFoundAtDepth:
    """Lexicographically least minimal-depth circuit over ``spec.pool`` equal to ``spec.target``."""
    _validate(spec)
    begin = time.perf_counter()
    if engine is None:
        engine = SearchEngine(spec.pool, spec.width, [spec.target], caps=spec.counts)
    for depth in _depths(spec):
        ones = spec.counts[0] if spec.counts is not None else None
        best = engine.search_length(spec.target, depth, ones=ones, workers=workers)
        engine.stats.depth = depth
        if best:
            word = min(best.values())
            circuit = Circuit(spec.width, tuple(engine.pool[i] for i in word))
            if compose_unitary(circuit) != spec.target:
                raise AssertionError("search returned a circuit that does not compose to the target")
            engine.stats.elapsed = time.perf_counter() - begin
            return Found(circuit, engine.stats)
    engine.stats.elapsed = time.perf_counter() - begin
    return NotFoundAtDepth(spec.depth_budget, engine.stats)


def enumerate_bfs(spec: SynthesisSpec) -> Circuit | None:
    """Plain enumeration oracle: words in lex order, shortest first, composed exactly."""
    _validate(spec)
    for depth in _depths(spec):
        for word in itertools.product(range(len(spec.pool)), repeat=depth):
            apps = tuple(spec.pool[i].unlabeled() for i in word)
            if spec.counts is not None:
                ones = sum(1 for a in apps if not a.is_controlled)
                if (ones, depth - ones) != tuple(spec.counts):
                    continue
            c = Circuit(spec.width, apps)
            if compose_unitary(c) == spec.target:
                return c
    return None
