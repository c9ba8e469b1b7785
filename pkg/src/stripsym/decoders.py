"""Exact ML decoding of Z-detector models under i.i.d. pure-Z noise.

With independent flips at rate ``p < 1/2`` the most likely fault vector is
the lightest one consistent with the syndrome. Every decoder here breaks
weight ties identically: the lexicographically smallest bit pattern, with
fault 0 as the most significant bit. Orphan (all-zero) columns are never
flipped.
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from stripsym import kernels
from stripsym.gf2 import BitMatrix, BitVector, pack_bits
from stripsym.model import DetectorModel, block_decompose, fault_strips, incidence_matrix

MAX_EXHAUSTIVE_COLS = 25


class NoSolutionError(ValueError):
    """The syndrome is not in the column space of the check matrix."""


class NotAChainError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseModel:
    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p < 0.5:
            raise ValueError(f"p must lie in [0, 0.5), got {self.p}")


@dataclass(frozen=True)
class DecodeResult:
    correction: BitVector
    weight: int
    per_strip_weights: tuple[int, ...]
    logical_parities: tuple[int, ...] = ()


def _syndrome_array(s: BitVector | Sequence[int] | np.ndarray, n: int) -> np.ndarray:
    arr = s.to_array() if isinstance(s, BitVector) else np.asarray(s, dtype=np.uint8)
    if arr.shape != (n,):
        raise ValueError(f"syndrome has {arr.size} bits, expected {n}")
    return arr


def _as_batch(syndromes: np.ndarray, n: int) -> np.ndarray:
    S = np.asarray(syndromes, dtype=np.uint8)
    if S.ndim == 1:
        S = S[None, :]
    if S.ndim != 2 or S.shape[1] != n:
        raise ValueError(f"syndrome batch has shape {S.shape}, expected (B, {n})")
    return S


# --- exhaustive --------------------------------------------------------------


class ExhaustiveDecoder:
    """Exact minimum-weight search over all fault patterns of one check matrix."""

    def __init__(self, H: BitMatrix, max_cols: int = MAX_EXHAUSTIVE_COLS):
        if H.cols > max_cols:
            raise ValueError(f"exhaustive search refused: {H.cols} columns exceed the limit of {max_cols}")
        self.H = H
        dense = H.to_dense()
        self.active = np.flatnonzero(dense.any(axis=0))
        self._cols = pack_bits(dense[:, self.active].T) if self.active.size else np.zeros((0, 1), np.uint64)

    def decode_batch(self, syndromes: np.ndarray) -> np.ndarray:
        """Corrections for a ``(B, rows)`` 0/1 array; raises if any syndrome is unreachable."""
        S = _as_batch(syndromes, self.H.rows)
        out = np.zeros((S.shape[0], self.H.cols), dtype=np.uint8)
        if S.shape[0] == 0:
            return out
        uniq, inverse = np.unique(S, axis=0, return_inverse=True)
        sub, weights = kernels.ml_search_batch(self._cols, pack_bits(uniq))
        if (weights < 0).any():
            bad = uniq[int(np.flatnonzero(weights < 0)[0])]
            raise NoSolutionError(f"syndrome {''.join(map(str, bad))} is not in the column space")
        out[:, self.active] = sub[inverse.reshape(-1)]
        return out


def ml_exhaustive(H: BitMatrix, s: BitVector | Sequence[int], noise: NoiseModel | None = None) -> DecodeResult:
    """Lightest ``e`` with ``H e = s``, first in lexicographic order among ties."""
    syn = _syndrome_array(s, H.rows)
    e = ExhaustiveDecoder(H).decode_batch(syn[None, :])[0]
    w = int(e.sum())
    return DecodeResult(BitVector.from_bits(e), w, (w,))


# --- chains ------------------------------------------------------------------


@dataclass(frozen=True)
class _Component:
    faults: np.ndarray  # fault indices in walk order
    links: np.ndarray  # links[k] joins faults[k] and faults[k + 1]
    head: int  # detector before faults[0] on a path, else -1
    tail: int  # detector after faults[-1] (closing detector of a cycle), else -1
    cycle: bool


class ChainLayout:
    """A check matrix whose Tanner graph is a disjoint union of paths and cycles.

    Faults are edges (one or two detectors each); a detector may meet at most
    two faults. Decoding walks each component, pairing consecutive defects and
    letting a free end absorb an odd one.
    """

    def __init__(self, H: BitMatrix):
        dense = H.to_dense()
        self.H = H
        self.n_det, self.n_fault = dense.shape
        self._det_faults = [tuple(int(f) for f in np.flatnonzero(dense[d])) for d in range(self.n_det)]
        self._fault_dets = [tuple(int(d) for d in np.flatnonzero(dense[:, f])) for f in range(self.n_fault)]
        for d, fs in enumerate(self._det_faults):
            if len(fs) > 2:
                raise NotAChainError(f"detector {d} meets {len(fs)} faults")
        for f, ds in enumerate(self._fault_dets):
            if len(ds) > 2:
                raise NotAChainError(f"fault {f} flips {len(ds)} detectors")
        seen: set[tuple[str, int]] = set()
        comps = []
        for f in range(self.n_fault):
            if ("f", f) not in seen and self._fault_dets[f]:
                comps.append(self._component(("f", f), seen))
        self.components = tuple(comps)
        self.isolated_detectors = tuple(d for d in range(self.n_det) if not self._det_faults[d])

    def _neighbours(self, node: tuple[str, int]) -> tuple[tuple[str, int], ...]:
        kind, i = node
        if kind == "f":
            return tuple(("d", d) for d in self._fault_dets[i])
        return tuple(("f", f) for f in self._det_faults[i])

    def _component(self, root: tuple[str, int], seen: set) -> _Component:
        nodes, stack = {root}, [root]
        while stack:
            for nb in self._neighbours(stack.pop()):
                if nb not in nodes:
                    nodes.add(nb)
                    stack.append(nb)
        seen |= nodes
        ends = sorted(n for n in nodes if len(self._neighbours(n)) == 1)
        cycle = not ends
        start = min(n for n in nodes if n[0] == "f") if cycle else ends[0]
        walk, prev = [start], None
        while True:
            nxt = [n for n in self._neighbours(walk[-1]) if n != prev]
            if cycle and len(walk) > 1:
                nxt = nxt[:1]
            if not nxt or nxt[0] == start:
                break
            prev = walk[-1]
            walk.append(nxt[0])
            if not cycle and len(walk) == len(nodes):
                break
        head = walk[0][1] if walk[0][0] == "d" else -1
        tail = walk[-1][1] if walk[-1][0] == "d" else -1
        body = walk[1:] if head >= 0 else walk
        if tail >= 0:
            body = body[:-1]
        faults = [i for kind, i in body if kind == "f"]
        links = [i for kind, i in body if kind == "d"]
        return _Component(np.asarray(faults, dtype=np.int64), np.asarray(links, dtype=np.int64), head, tail, cycle)

    def decode_batch(self, syndromes: np.ndarray) -> np.ndarray:
        S = _as_batch(syndromes, self.n_det)
        B = S.shape[0]
        out = np.zeros((B, self.n_fault), dtype=np.uint8)
        ok = np.ones(B, dtype=bool)
        for d in self.isolated_detectors:
            ok &= S[:, d] == 0
        for comp in self.components:
            k = comp.faults.size
            base = np.zeros((B, k), dtype=np.uint8)
            base[:, 0] = S[:, comp.head] if comp.head >= 0 else 0
            if k > 1:
                base[:, 1:] = np.bitwise_xor.accumulate(S[:, comp.links], axis=1) ^ base[:, :1]
            free = comp.head < 0
            if comp.tail >= 0:
                if comp.cycle:
                    closing = base[:, -1] ^ base[:, 0]
                else:
                    closing = base[:, -1]
                # x flips every fault, so the closing check changes only for an open free end
                flips = 0 if comp.cycle else 1
                feas0 = closing == S[:, comp.tail]
                feas1 = (closing ^ flips) == S[:, comp.tail] if free else np.zeros(B, dtype=bool)
            else:
                feas0 = np.ones(B, dtype=bool)
                feas1 = np.full(B, free)
            w0 = base.sum(axis=1, dtype=np.int64)
            w1 = k - w0
            first = int(np.argmin(comp.faults))
            # prefer the lighter candidate; on a tie the one with a 0 at the lowest fault index
            pick1 = feas1 & (~feas0 | (w1 < w0) | ((w1 == w0) & (base[:, first] == 1)))
            ok &= feas0 | feas1
            out[:, comp.faults] = base ^ pick1[:, None].astype(np.uint8)
        if not ok.all():
            bad = S[int(np.flatnonzero(~ok)[0])]
            raise NoSolutionError(f"syndrome {''.join(map(str, bad))} is not in the column space")
        return out


def is_chain(H: BitMatrix) -> bool:
    try:
        ChainLayout(H)
    except NotAChainError:
        return False
    return True


def ml_chain(block: BitMatrix | ChainLayout, s: BitVector | Sequence[int]) -> DecodeResult:
    layout = block if isinstance(block, ChainLayout) else ChainLayout(block)
    syn = _syndrome_array(s, layout.n_det)
    e = layout.decode_batch(syn[None, :])[0]
    w = int(e.sum())
    return DecodeResult(BitVector.from_bits(e), w, (w,))


# --- whole-model wrappers ----------------------------------------------------


class ModelDecoder:
    """Shared result bookkeeping for monolithic and strip-wise decoding of a model."""

    def __init__(self, model: DetectorModel, logical_strips: Sequence[int] = ()):
        self.model = model
        self.H = incidence_matrix(model)
        strips = fault_strips(model)
        self._strip_masks = np.zeros((model.n_strips, model.n_fault), dtype=bool)
        for f, j in enumerate(strips):
            if j >= 0:
                self._strip_masks[j, f] = True
        self.logical_strips = tuple(logical_strips)

    def decode_batch(self, syndromes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def decode(self, s: BitVector | Sequence[int]) -> DecodeResult:
        e = self.decode_batch(_syndrome_array(s, self.model.n_det)[None, :])[0]
        per_strip = tuple(int(e[m].sum()) for m in self._strip_masks)
        logical = tuple(int(e[self._strip_masks[j]].sum() & 1) for j in self.logical_strips)
        return DecodeResult(BitVector.from_bits(e), int(e.sum()), per_strip, logical)


class MonolithicDecoder(ModelDecoder):
    def __init__(self, model: DetectorModel, logical_strips: Sequence[int] = ()):
        super().__init__(model, logical_strips)
        self._exhaustive = ExhaustiveDecoder(self.H)

    def decode_batch(self, syndromes: np.ndarray) -> np.ndarray:
        return self._exhaustive.decode_batch(syndromes)


class StripwiseDecoder(ModelDecoder):
    """Decode each strip block on its own and write the pieces back in place.

    Chain-shaped blocks use :class:`ChainLayout`; anything else falls back to
    exhaustive search on that block alone.
    """

    def __init__(self, model: DetectorModel, logical_strips: Sequence[int] = (), workers: int = 1):
        super().__init__(model, logical_strips)
        self.decomposition = block_decompose(model)
        self.workers = workers
        self._solvers = []
        for b in self.decomposition.blocks:
            try:
                solver = ChainLayout(b.matrix)
            except NotAChainError:
                solver = ExhaustiveDecoder(b.matrix)
            self._solvers.append(solver)

    def decode_batch(self, syndromes: np.ndarray) -> np.ndarray:
        S = _as_batch(syndromes, self.model.n_det)
        out = np.zeros((S.shape[0], self.model.n_fault), dtype=np.uint8)
        blocks = self.decomposition.blocks

        def run(i: int) -> np.ndarray:
            return self._solvers[i].decode_batch(S[:, list(blocks[i].detectors)])

        if self.workers > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(self.workers) as pool:
                pieces = list(pool.map(run, range(len(blocks))))
        else:
            pieces = [run(i) for i in range(len(blocks))]
        for b, piece in zip(blocks, pieces):
            if b.faults:
                out[:, list(b.faults)] = piece
        return out


def decode_monolithic(
    model: DetectorModel,
    s: BitVector | Sequence[int],
    noise: NoiseModel | None = None,
    logical_strips: Sequence[int] = (),
) -> DecodeResult:
    return MonolithicDecoder(model, logical_strips).decode(s)


def decode_stripwise(
    model: DetectorModel,
    s: BitVector | Sequence[int],
    noise: NoiseModel | None = None,
    logical_strips: Sequence[int] = (),
    workers: int = 1,
) -> DecodeResult:
    return StripwiseDecoder(model, logical_strips, workers).decode(s)


def make_decoder(model: DetectorModel, mode: str, logical_strips: Sequence[int] = ()) -> ModelDecoder:
    if mode == "monolithic":
        return MonolithicDecoder(model, logical_strips)
    if mode == "stripwise":
        return StripwiseDecoder(model, logical_strips)
    raise ValueError(f"unknown decoder {mode!r}; expected 'monolithic' or 'stripwise'")
